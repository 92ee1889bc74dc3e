//! Local Fourier and Katz-Radon transforms at the level of formal modules.

pub mod fourier;
pub mod radon;

pub use fourier::{
    fourier_bookkeeping, fourier_local_regular, fourier_local_regular_inverse, infinity_decompose,
    twist_by_class, ClassLabel, Flavor, InfinityDecomposition, TransformBookkeeping,
};
pub use radon::{radon_local, radon_local_crosscheck, RadonCrosscheck};
