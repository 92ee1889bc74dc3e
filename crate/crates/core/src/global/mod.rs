//! Global formulas on formal types: Euler characteristic, rigidity index, ranks of the
//! Fourier and Katz-Radon transforms, and the transformed formal types.

pub mod formulas;
pub mod transform;
pub mod types;

pub use formulas::{euler_char, fourier_rank, radon_rank, rigidity_index};
pub use transform::{fourier_formal_type, radon_formal_type, Mode, PointData, TransformedPoint, TransformedType};
pub use types::{FormalType, SingularPoint};
