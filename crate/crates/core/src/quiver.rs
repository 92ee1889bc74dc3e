//! Regular-unipotent modules on the disk as linear-algebra data.
//!
//! A module on the punctured disk is a pair `(V, rho)`; a module on the disk is a quad
//! `(V, V', can, var)` with `can: V -> V'`, `var: V' -> V` and `id + var can` invertible.
//! Nearby and vanishing cycles, the three extensions and duality act by the formulas
//! below, taken literally.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::rational::{int, Rat};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyPair {
    rho: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskQuad {
    dim_v: usize,
    dim_vp: usize,
    can: Matrix,
    var: Matrix,
}

/// `(phi_v, phi_vp)` with `phi_vp can1 = can2 phi_v` and `phi_v var1 = var2 phi_vp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadMorphism {
    pub phi_v: Matrix,
    pub phi_vp: Matrix,
}

impl MonodromyPair {
    pub fn new(rho: Matrix) -> Result<Self> {
        if !rho.is_invertible() {
            return Err(Error::InvalidInput("monodromy must be invertible".into()));
        }
        Ok(Self { rho })
    }

    pub fn zero() -> Self {
        Self {
            rho: Matrix::zeros(0, 0),
        }
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn rho(&self) -> &Matrix {
        &self.rho
    }

    /// Conjugacy over Q.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.rho.is_conjugate(&other.rho)
    }

    fn rho_minus_id(&self) -> Matrix {
        self.rho.sub(&Matrix::identity(self.dim()))
    }
}

impl DiskQuad {
    pub fn new(can: Matrix, var: Matrix) -> Result<Self> {
        let dim_v = can.cols();
        let dim_vp = can.rows();
        if var.rows() != dim_v || var.cols() != dim_vp {
            return Err(Error::InvalidInput(format!(
                "var must be {dim_v}x{dim_vp}, got {}x{}",
                var.rows(),
                var.cols()
            )));
        }
        let q = Self {
            dim_v,
            dim_vp,
            can,
            var,
        };
        if !q.phi_matrix().is_invertible() {
            return Err(Error::InvalidInput("id + can var is not invertible".into()));
        }
        Ok(q)
    }

    /// The quad on `V = 0`, `V' = 0`.
    pub fn zero() -> Self {
        Self {
            dim_v: 0,
            dim_vp: 0,
            can: Matrix::zeros(0, 0),
            var: Matrix::zeros(0, 0),
        }
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_vp(&self) -> usize {
        self.dim_vp
    }

    pub fn can(&self) -> &Matrix {
        &self.can
    }

    pub fn var(&self) -> &Matrix {
        &self.var
    }

    fn psi_matrix(&self) -> Matrix {
        self.var.mul(&self.can).add(&Matrix::identity(self.dim_v))
    }

    fn phi_matrix(&self) -> Matrix {
        self.can.mul(&self.var).add(&Matrix::identity(self.dim_vp))
    }

    /// Dimensions agree and some homomorphism is invertible on both spaces.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.dim_v != other.dim_v || self.dim_vp != other.dim_vp {
            return false;
        }
        if self.dim_v == 0 && self.dim_vp == 0 {
            return true;
        }
        let (_, basis) = hom_space(self, other);
        if basis.is_empty() {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f15);
        for _ in 0..40 {
            let mut x = Matrix::zeros(other.dim_v, self.dim_v);
            let mut y = Matrix::zeros(other.dim_vp, self.dim_vp);
            for h in &basis {
                let c = int(rng.gen_range(-50..=50));
                x = x.add(&h.phi_v.scale(&c));
                y = y.add(&h.phi_vp.scale(&c));
            }
            if x.is_invertible() && y.is_invertible() {
                return true;
            }
        }
        false
    }
}

/// `(V, var can + id)`
pub fn psi(q: &DiskQuad) -> MonodromyPair {
    MonodromyPair {
        rho: q.psi_matrix(),
    }
}

/// `(V', can var + id)`
pub fn phi(q: &DiskQuad) -> MonodromyPair {
    MonodromyPair {
        rho: q.phi_matrix(),
    }
}

/// `(V, V, id, rho - id)`
pub fn j_star(p: &MonodromyPair) -> DiskQuad {
    let n = p.dim();
    DiskQuad {
        dim_v: n,
        dim_vp: n,
        can: Matrix::identity(n),
        var: p.rho_minus_id(),
    }
}

/// `(V, V, rho - id, id)`
pub fn j_shriek(p: &MonodromyPair) -> DiskQuad {
    let n = p.dim();
    DiskQuad {
        dim_v: n,
        dim_vp: n,
        can: p.rho_minus_id(),
        var: Matrix::identity(n),
    }
}

/// `(V, (rho - id)V, rho - id, inclusion)`, with the image spanned by the leftmost
/// pivot columns of `rho - id`.
pub fn j_mid(p: &MonodromyPair) -> DiskQuad {
    let n = p.dim();
    let a = p.rho_minus_id();
    let incl = a.column_space_basis();
    let k = incl.cols();
    let can = incl
        .solve(&a)
        .expect("rho - id maps into its own column space");
    DiskQuad {
        dim_v: n,
        dim_vp: k,
        can,
        var: incl,
    }
}

/// `(V*, (rho*)^{-1})`
pub fn dual_pair(p: &MonodromyPair) -> MonodromyPair {
    MonodromyPair {
        rho: p
            .rho
            .transpose()
            .inverse()
            .expect("monodromy is invertible"),
    }
}

/// `(V*, V'*, -var*, can* (var* can* + id)^{-1})`
pub fn dual_quad(q: &DiskQuad) -> DiskQuad {
    let vt = q.var.transpose();
    let ct = q.can.transpose();
    let m = vt
        .mul(&ct)
        .add(&Matrix::identity(q.dim_vp))
        .inverse()
        .expect("id + can var is invertible");
    DiskQuad {
        dim_v: q.dim_v,
        dim_vp: q.dim_vp,
        can: vt.neg(),
        var: ct.mul(&m),
    }
}

impl QuadMorphism {
    pub fn identity(q: &DiskQuad) -> Self {
        Self {
            phi_v: Matrix::identity(q.dim_v),
            phi_vp: Matrix::identity(q.dim_vp),
        }
    }

    pub fn is_valid(&self, q1: &DiskQuad, q2: &DiskQuad) -> bool {
        let shapes = self.phi_v.rows() == q2.dim_v
            && self.phi_v.cols() == q1.dim_v
            && self.phi_vp.rows() == q2.dim_vp
            && self.phi_vp.cols() == q1.dim_vp;
        shapes
            && self.phi_vp.mul(&q1.can) == q2.can.mul(&self.phi_v)
            && self.phi_v.mul(&q1.var) == q2.var.mul(&self.phi_vp)
    }

    /// The image sub-quad of `q2`, in column-space bases of the two components.
    pub fn image(&self, q2: &DiskQuad) -> DiskQuad {
        let bv = self.phi_v.column_space_basis();
        let bvp = self.phi_vp.column_space_basis();
        let can = bvp
            .solve(&q2.can.mul(&bv))
            .expect("image is stable under can");
        let var = bv
            .solve(&q2.var.mul(&bvp))
            .expect("image is stable under var");
        DiskQuad {
            dim_v: bv.cols(),
            dim_vp: bvp.cols(),
            can,
            var,
        }
    }
}

/// The canonical morphism between the two extensions. With the formulas above the
/// pair `(id, rho - id)` commutes with the structure maps from `j_star(p)` to
/// `j_shriek(p)`; its image is `j_mid(p)`.
pub fn canonical_morphism(p: &MonodromyPair) -> QuadMorphism {
    QuadMorphism {
        phi_v: Matrix::identity(p.dim()),
        phi_vp: p.rho_minus_id(),
    }
}

/// Dimension and a basis of `Hom(q1, q2)`, from the two commuting-square systems.
pub fn hom_space(q1: &DiskQuad, q2: &DiskQuad) -> (usize, Vec<QuadMorphism>) {
    let (n1, m1, n2, m2) = (q1.dim_v, q1.dim_vp, q2.dim_v, q2.dim_vp);
    // unknowns: X (n2 x n1) row-major, then Y (m2 x m1) row-major
    let nx = n2 * n1;
    let unknowns = nx + m2 * m1;
    let xi = |i: usize, j: usize| i * n1 + j;
    let yi = |i: usize, j: usize| nx + i * m1 + j;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // Y can1 - can2 X = 0, entry (a, b) with a < m2, b < n1
    for a in 0..m2 {
        for b in 0..n1 {
            let mut row = vec![int(0); unknowns];
            for k in 0..m1 {
                row[yi(a, k)] += &q1.can[(k, b)];
            }
            for k in 0..n2 {
                row[xi(k, b)] -= &q2.can[(a, k)];
            }
            rows.push(row);
        }
    }
    // X var1 - var2 Y = 0, entry (a, b) with a < n2, b < m1
    for a in 0..n2 {
        for b in 0..m1 {
            let mut row = vec![int(0); unknowns];
            for k in 0..n1 {
                row[xi(a, k)] += &q1.var[(k, b)];
            }
            for k in 0..m2 {
                row[yi(k, b)] -= &q2.var[(a, k)];
            }
            rows.push(row);
        }
    }
    let kernel = if rows.is_empty() {
        (0..unknowns)
            .map(|u| {
                let mut v = vec![int(0); unknowns];
                v[u] = int(1);
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows.len(), unknowns, rows)
            .expect("rows have the unknown count")
            .kernel()
    };
    let basis: Vec<QuadMorphism> = kernel
        .into_iter()
        .map(|v| {
            let mut x = Matrix::zeros(n2, n1);
            let mut y = Matrix::zeros(m2, m1);
            for i in 0..n2 {
                for j in 0..n1 {
                    x[(i, j)] = v[xi(i, j)].clone();
                }
            }
            for i in 0..m2 {
                for j in 0..m1 {
                    y[(i, j)] = v[yi(i, j)].clone();
                }
            }
            QuadMorphism {
                phi_v: x,
                phi_vp: y,
            }
        })
        .collect();
    (basis.len(), basis)
}

/// `(V / ker(rho - id), induced rho)`.
pub fn quotient_by_invariants(p: &MonodromyPair) -> MonodromyPair {
    let ker = p.rho_minus_id().kernel();
    let sub = Matrix::from_columns(p.dim(), &ker);
    MonodromyPair {
        rho: p.rho.quotient_action(&sub),
    }
}
