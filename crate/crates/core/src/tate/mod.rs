pub mod annihilator;
pub mod connection;
pub mod fourier;
pub mod growth;
pub mod realization;
pub mod topology;

pub use annihilator::{annihilator, default_degree, Annihilator, ThetaOperator};
pub use connection::Connection;
pub use fourier::{fourier_slope, invariants_of, local_fourier_invariants, FourierInvariants};
pub use growth::{classify_growth, GrowthOperator, GrowthVerdict, Verdict};
pub use realization::{solve_derivation, Element, Realization, DEFAULT_TRUNC};
pub use topology::{topology_compare, TopologyModuli};
