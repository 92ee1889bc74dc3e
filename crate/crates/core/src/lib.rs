//! Exact computation of local invariants of formal differential modules on the
//! punctured disk: slopes, irregularity, vanishing cycles, local Fourier and Katz-Radon
//! transforms, fractional powers of irregular connections, and global formal-type
//! formulas (Euler characteristic, transform ranks, rigidity).

pub mod error;
pub mod exact;
pub mod formal;
pub mod fracpow;
pub mod global;
pub mod json;
pub mod linalg;
pub mod quiver;
pub mod sample;
pub mod selftest;
pub mod tate;
pub mod transforms;

pub use error::{Error, Result};
pub use exact::{fmt_rat, int, parse_rat, pochhammer_ratio, rat, BiPoly, Rat, TruncatedPuiseuxSeries, UniPoly};
pub use formal::{newton_slopes, DifferentialOperator, ElementaryModule, FormalModule};
pub use fracpow::{
    apply_power, check_addition, check_heisenberg, check_radon_intertwiner, power_table, symbol_from_connection,
    OperatorSymbol, PowerTable,
};
pub use global::{
    euler_char, fourier_formal_type, fourier_rank, radon_formal_type, radon_rank, rigidity_index, FormalType,
    SingularPoint, TransformedType,
};
pub use linalg::Matrix;
pub use quiver::{DiskQuad, MonodromyPair};
pub use tate::{classify_growth, local_fourier_invariants, GrowthOperator, Realization, Verdict};
pub use transforms::{
    fourier_bookkeeping, infinity_decompose, radon_local, radon_local_crosscheck, Flavor, TransformBookkeeping,
};
