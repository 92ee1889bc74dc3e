//! Dense matrices over Q: row reduction, kernels, inverses, and rational canonical form
//! (invariant factors of `xI - A` via Smith normal form over `Q[x]`).

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::UniPoly;
use crate::exact::rational::{fmt_rat, int, parse_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Rat) -> Self {
        Self::identity(n).scale(c)
    }

    /// Builds from rows; every row must have length `cols`.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Rat>>) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput(format!(
                "matrix rows do not match shape {rows}x{cols}"
            )));
        }
        Ok(Self {
            rows,
            cols,
            data: entries.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            data: entries.iter().map(|&v| int(v)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Submatrix of the given column indices.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<Rat>> = idx.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(r, j)] * &factor;
                    if !v.is_zero() {
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : Av = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// The columns of `self` at the pivot positions (leftmost pivots).
    pub fn column_space_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.select_columns(&cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn determinant(&self) -> Rat {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    /// Some `X` with `self * X = b`, if one exists.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Action induced on `V / W` where `W` is spanned by the columns of `sub`
    /// (assumed invariant and linearly independent).
    pub fn quotient_action(&self, sub: &Self) -> Self {
        let n = self.rows;
        let k = sub.cols;
        let (_, pivots) = sub.hstack(&Self::identity(n)).rref();
        let complement: Vec<usize> = pivots.iter().filter(|&&p| p >= k).map(|p| p - k).collect();
        let basis = sub.hstack(&Self::identity(n).select_columns(&complement));
        let inv = basis.inverse().expect("completed basis is invertible");
        let conj = inv.mul(self).mul(&basis);
        let idx: Vec<usize> = (k..n).collect();
        let mut out = Self::zeros(n - k, n - k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = conj[(i, j)].clone();
            }
        }
        out
    }

    /// Invariant factors (monic, degree >= 1, each dividing the next) of `xI - A`.
    pub fn invariant_factors(&self) -> Vec<UniPoly> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m: Vec<Vec<UniPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let a = UniPoly::constant(-self[(i, j)].clone());
                        if i == j {
                            a.add(&UniPoly::new(vec![Rat::zero(), Rat::one()]))
                        } else {
                            a
                        }
                    })
                    .collect()
            })
            .collect();
        let mut diag = Vec::with_capacity(n);
        for t in 0..n {
            loop {
                // pivot of minimal degree in the trailing block
                let mut best: Option<(usize, usize, usize)> = None;
                for (i, row) in m.iter().enumerate().skip(t) {
                    for (j, e) in row.iter().enumerate().skip(t) {
                        if let Some(d) = e.degree() {
                            if best.is_none_or(|(_, _, bd)| d < bd) {
                                best = Some((i, j, d));
                            }
                        }
                    }
                }
                let Some((pi, pj, _)) = best else {
                    break;
                };
                m.swap(t, pi);
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                let mut clean = true;
                for i in t + 1..n {
                    let (q, _) = m[i][t].divrem(&m[t][t]);
                    for j in t..n {
                        let v = m[i][j].sub(&q.mul(&m[t][j]));
                        m[i][j] = v;
                    }
                    if !m[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    let (q, _) = m[t][j].divrem(&m[t][t]);
                    for i in t..n {
                        let v = m[i][j].sub(&q.mul(&m[i][t]));
                        m[i][j] = v;
                    }
                    if !m[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // divisibility of the trailing block by the pivot
                let mut bad_row = None;
                'scan: for i in t + 1..n {
                    for j in t + 1..n {
                        if !m[i][j].divrem(&m[t][t]).1.is_zero() {
                            bad_row = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad_row {
                    Some(i) => {
                        for j in t..n {
                            let v = m[t][j].add(&m[i][j]);
                            m[t][j] = v;
                        }
                    }
                    None => break,
                }
            }
            diag.push(m[t][t].monic());
        }
        diag.into_iter()
            .filter(|p| p.degree().is_some_and(|d| d >= 1))
            .collect()
    }

    /// Two square matrices are conjugate over Q iff their invariant factors agree.
    pub fn is_conjugate(&self, other: &Self) -> bool {
        self.rows == other.rows && self.invariant_factors() == other.invariant_factors()
    }

    /// Row-major `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(fmt_rat).collect())
            .collect()
    }

    pub fn from_strings(rows: usize, cols: usize, s: &[Vec<String>]) -> Result<Self> {
        let entries = s
            .iter()
            .map(|r| r.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows, cols, entries)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(fmt_rat).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn inverse_round_trip() {
        let a = Matrix::from_i64(3, 3, &[2, 1, 0, 0, 1, 4, 1, 0, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert_eq!(a.determinant(), int(6));
        assert!(Matrix::from_i64(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = Matrix::from_i64(2, 4, &[1, 2, 3, 4, 2, 4, 6, 9]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn column_space_uses_leftmost_pivots() {
        let a = Matrix::from_i64(2, 3, &[0, 1, 1, 0, 2, 2]);
        assert_eq!(a.column_space_basis(), Matrix::from_i64(2, 1, &[1, 2]));
    }

    #[test]
    fn jordan_block_vs_scalar() {
        let j = Matrix::from_i64(2, 2, &[1, 1, 0, 1]);
        let s = Matrix::identity(2);
        assert!(!j.is_conjugate(&s));
        let f = j.invariant_factors();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0], UniPoly::linear(int(1)).mul(&UniPoly::linear(int(1))));
        assert_eq!(s.invariant_factors().len(), 2);
    }

    #[test]
    fn conjugation_preserves_invariant_factors() {
        let a = Matrix::from_i64(3, 3, &[1, 2, 0, 0, 1, 0, 3, 1, 2]);
        let p = Matrix::from_i64(3, 3, &[1, 1, 0, 0, 1, 1, 1, 0, 2]);
        let b = p.inverse().unwrap().mul(&a).mul(&p);
        assert!(a.is_conjugate(&b));
        assert!(!a.is_conjugate(&a.scale(&rat(1, 2))));
    }

    #[test]
    fn quotient_by_invariant_line() {
        // rho = [[1,1],[0,2]], ker(rho - 1) = span(e1); quotient acts by 2
        let rho = Matrix::from_i64(2, 2, &[1, 1, 0, 2]);
        let k = Matrix::from_columns(2, &rho.sub(&Matrix::identity(2)).kernel());
        assert_eq!(rho.quotient_action(&k), Matrix::from_i64(1, 1, &[2]));
    }
}
