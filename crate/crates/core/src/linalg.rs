//! Dense complex matrices and LU-based log-determinants.

use crate::error::{Error, Result};
use crate::C64;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for {}x{}", data.len(), rows, cols)));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&mut self, s: C64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// `self += s·other`
    pub fn add_scaled(&mut self, other: &ComplexMatrix, s: C64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter_mut().zip(&other.data).for_each(|(a, &b)| *a += s * b);
    }

    /// `I - s·self` for square matrices.
    pub fn identity_minus(&self, s: C64) -> Self {
        let mut m = self.clone();
        m.scale(-s);
        for i in 0..self.rows {
            m[(i, i)] += ONE;
        }
        m
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * oc..(i + 1) * oc];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let src = &other.data[k * oc..(k + 1) * oc];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn lu(&self) -> Result<LuFactor> {
        LuFactor::new(self.clone())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Partially pivoted LU factorization `P A = L U`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct LuFactor {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    odd: bool,
}

impl LuFactor {
    pub fn new(mut a: ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("LU of {}x{}", a.rows, a.cols)));
        }
        let n = a.rows;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let mut p = k;
            let mut best = a.data[k * n + k].norm_sqr();
            for i in k + 1..n {
                let v = a.data[i * n + k].norm_sqr();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular(k));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd = !odd;
            }
            let (top, bottom) = a.data.split_at_mut((k + 1) * n);
            let pivot_row = &top[k * n..];
            let inv = ONE / pivot_row[k];
            for row in bottom.chunks_exact_mut(n) {
                let l = row[k] * inv;
                row[k] = l;
                if l == ZERO {
                    continue;
                }
                for (d, &u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *d -= l * u;
                }
            }
        }
        Ok(LuFactor { lu: a, perm, odd })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Sum of the principal logs of the pivots, plus `iπ` for an odd permutation.
    pub fn log_det(&self) -> C64 {
        let n = self.lu.rows;
        let mut acc = ZERO;
        for k in 0..n {
            acc += self.lu.data[k * n + k].ln();
        }
        if self.odd {
            acc += C64::new(0.0, core::f64::consts::PI);
        }
        acc
    }

    /// Smallest over largest pivot modulus, a cheap conditioning indicator.
    pub fn pivot_ratio(&self) -> f64 {
        let n = self.lu.rows;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for k in 0..n {
            let v = self.lu.data[k * n + k].norm();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        lo / hi
    }

    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.lu.rows;
        if rhs.rows != n {
            return Err(Error::Dimension(format!("rhs has {} rows, expected {}", rhs.rows, n)));
        }
        let c = rhs.cols;
        let mut x = ComplexMatrix::zeros(n, c);
        for i in 0..n {
            x.data[i * c..(i + 1) * c].copy_from_slice(rhs.row(self.perm[i]));
        }
        for i in 0..n {
            for k in 0..i {
                let l = self.lu.data[i * n + k];
                if l == ZERO {
                    continue;
                }
                let (head, tail) = x.data.split_at_mut(i * c);
                let src = &head[k * c..(k + 1) * c];
                for (d, &s) in tail[..c].iter_mut().zip(src) {
                    *d -= l * s;
                }
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu.data[i * n + k];
                if u == ZERO {
                    continue;
                }
                let (head, tail) = x.data.split_at_mut(k * c);
                let src = &tail[..c];
                for (d, &s) in head[i * c..(i + 1) * c].iter_mut().zip(src) {
                    *d -= u * s;
                }
            }
            let inv = ONE / self.lu.data[i * n + i];
            x.data[i * c..(i + 1) * c].iter_mut().for_each(|v| *v *= inv);
        }
        Ok(x)
    }
}

/// Principal-branch log-determinant with the phase accumulated pivot by pivot.
pub fn lu_logdet(m: &ComplexMatrix) -> Result<C64> {
    Ok(m.lu()?.log_det())
}

/// Solve `m x = rhs`.
pub fn lu_solve(m: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.lu()?.solve(rhs)
}

/// Small 2×2 complex matrix, used for matrix symbols and block kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == ZERO {
            return None;
        }
        let m = &self.0;
        Some(Mat2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let mut r = *self;
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] -= o.0[i][j];
            }
        }
        r
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut r = *self;
        r.0.iter_mut().flatten().for_each(|v| *v *= s);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &ComplexMatrix) -> C64 {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)];
        }
        let mut acc = ZERO;
        for j in 0..n {
            let minor = ComplexMatrix::from_fn(n - 1, n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })]);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * m[(0, j)] * cofactor_det(&minor);
        }
        acc
    }

    fn pseudo_random(n: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        ComplexMatrix::from_fn(n, n, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn identity_and_diag() {
        assert_eq!(lu_logdet(&ComplexMatrix::identity(5)).unwrap(), ZERO);
        let d = ComplexMatrix::diag(&[C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        assert!((lu_logdet(&d).unwrap() - C64::new(6.0f64.ln(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cofactor_agreement() {
        let m = pseudo_random(4, 7);
        let want = cofactor_det(&m);
        let got = lu_logdet(&m).unwrap().exp();
        assert!((got - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn singular_detected() {
        let m = ComplexMatrix::from_fn(3, 3, |i, _| C64::new(i as f64, 0.0));
        assert!(matches!(lu_logdet(&m), Err(Error::Singular(_))));
    }

    #[test]
    fn solve_small() {
        let b = ComplexMatrix::from_fn(3, 1, |i, _| C64::new(i as f64 + 1.0, -1.0));
        let x = lu_solve(&ComplexMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
        let d = ComplexMatrix::diag(&[C64::new(2.0, 0.0)]);
        let x = lu_solve(&d, &ComplexMatrix::diag(&[C64::new(4.0, 0.0)])).unwrap();
        assert!((x[(0, 0)] - 2.0).norm() < 1e-15);
        // inverse by cofactors for a 3x3 system
        let m = pseudo_random(3, 11);
        let det = cofactor_det(&m);
        let x = lu_solve(&m, &b).unwrap();
        for i in 0..3 {
            // Cramer's rule
            let mi = ComplexMatrix::from_fn(3, 3, |r, c| if c == i { b[(r, 0)] } else { m[(r, c)] });
            let want = cofactor_det(&mi) / det;
            assert!((x[(i, 0)] - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn mat2_inverse() {
        let m = Mat2([[C64::new(1.0, 1.0), C64::new(0.5, 0.0)], [C64::new(0.0, 2.0), C64::new(3.0, 0.0)]]);
        let inv = m.inverse().unwrap();
        let a = ComplexMatrix::from_fn(2, 2, |i, j| m.0[i][j]);
        let b = ComplexMatrix::from_fn(2, 2, |i, j| inv.0[i][j]);
        let p = a.matmul(&b).unwrap();
        assert!((p[(0, 0)] - 1.0).norm() < 1e-15 && p[(0, 1)].norm() < 1e-15);
    }
}
