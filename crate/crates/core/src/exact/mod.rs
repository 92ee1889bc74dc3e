pub mod gamma;
pub mod poly;
pub mod rational;
pub mod series;

pub use gamma::pochhammer_ratio;
pub use poly::{discrete_antiderivative, BiPoly, MPoly, TriPoly, UniPoly};
pub use rational::{fmt_rat, int, parse_rat, rat, Rat};
pub use series::{series_arith, SeriesOp, TruncatedPuiseuxSeries};
