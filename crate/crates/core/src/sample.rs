//! Seeded random inputs: monodromy pairs, disk quads, formal modules and formal types.
//! Used by the self-test, the property tests and the benchmarks.

use rand::Rng;

use crate::exact::rational::{int, rat, Rat};
use crate::formal::{ElementaryModule, FormalModule};
use crate::global::{FormalType, SingularPoint};
use crate::linalg::Matrix;
use crate::quiver::{DiskQuad, MonodromyPair};

fn small_rat<R: Rng>(rng: &mut R) -> Rat {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            // sparse-ish entries make eigenvalue 1 and nilpotent parts common
            if rng.gen_bool(0.5) {
                m[(i, j)] = small_rat(rng);
            }
        }
    }
    m
}

/// A monodromy pair of dimension `n`. About half of the draws are unipotent-heavy
/// (`rho - id` strictly upper triangular plus a few eigenvalues equal to one).
pub fn random_pair<R: Rng>(rng: &mut R, n: usize) -> MonodromyPair {
    loop {
        let rho = if rng.gen_bool(0.5) {
            let mut m = Matrix::identity(n);
            for i in 0..n {
                if rng.gen_bool(0.3) {
                    m[(i, i)] = small_rat(rng);
                }
                for j in i + 1..n {
                    if rng.gen_bool(0.5) {
                        m[(i, j)] = small_rat(rng);
                    }
                }
            }
            // conjugate so the triangular shape is not visible
            let p = random_matrix(rng, n, n).add(&Matrix::identity(n));
            match p.inverse() {
                Some(pi) => p.mul(&m).mul(&pi),
                None => m,
            }
        } else {
            random_matrix(rng, n, n)
        };
        if let Ok(p) = MonodromyPair::new(rho) {
            return p;
        }
    }
}

/// A quad with `dim V = n`, `dim V' = m`.
pub fn random_quad<R: Rng>(rng: &mut R, n: usize, m: usize) -> DiskQuad {
    loop {
        let can = random_matrix(rng, m, n);
        let var = random_matrix(rng, n, m);
        if let Ok(q) = DiskQuad::new(can, var) {
            return q;
        }
    }
}

fn random_residue<R: Rng>(rng: &mut R) -> Rat {
    match rng.gen_range(0..4) {
        0 => int(0),
        _ => rat(rng.gen_range(-6..=6), rng.gen_range(2..=7)),
    }
}

/// One unramified elementary component: Kummer with a small unipotent block, or an
/// exponential `c z^{-k}` with `k in 2..=4`.
pub fn random_elementary<R: Rng>(rng: &mut R, max_unip: u32, regular: bool) -> ElementaryModule {
    if regular || rng.gen_bool(0.6) {
        ElementaryModule::kummer(random_residue(rng), rng.gen_range(1..=max_unip.max(1)))
    } else {
        let c = loop {
            let c = small_rat(rng);
            if c != int(0) {
                break c;
            }
        };
        ElementaryModule::exponential(c, int(-rng.gen_range(2..=4)), random_residue(rng))
            .expect("unramified data is valid")
    }
}

/// A module of exactly rank `n` with unramified components.
pub fn random_module<R: Rng>(rng: &mut R, n: u64, regular: bool) -> FormalModule {
    let mut comps = Vec::new();
    let mut left = n;
    while left > 0 {
        let c = random_elementary(rng, left.min(3) as u32, regular);
        left -= c.rank();
        comps.push(c);
    }
    FormalModule::new(comps)
}

/// A genus-zero formal type of rank `n` with `k` singular points `0, 1, ..., inf`.
pub fn random_formal_type<R: Rng>(rng: &mut R, n: u64, k: usize, regular: bool) -> FormalType {
    let points = (0..k)
        .map(|i| {
            let label = if i + 1 == k { "inf".to_string() } else { i.to_string() };
            SingularPoint::new(label, random_module(rng, n, regular))
        })
        .collect();
    FormalType::new(0, n, points).expect("generated type is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..5 {
            assert_eq!(random_pair(&mut rng, n).dim(), n);
            let q = random_quad(&mut rng, n, 4 - n);
            assert_eq!((q.dim_v(), q.dim_vp()), (n, 4 - n));
            assert_eq!(random_module(&mut rng, n as u64 + 1, false).rank(), n as u64 + 1);
        }
        let ft = random_formal_type(&mut rng, 2, 3, true);
        assert!(ft.points().iter().all(|p| p.psi.is_regular()));
    }
}
