//! Dense matrices over an exact scalar [`Ring`], with Gaussian elimination
//! for rank and kernel computations.

use crate::poly::Poly;
use crate::scalar::{Ring, Scalar};

/// A dense `rows x cols` matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { ring, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(ring: Ring, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            ring,
            rows.iter()
                .map(|row| row.iter().map(|&v| ring.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| self.ring.mul(a, c)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zero(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = self.ring.mul(a, other.get(k, j));
                    let s = self.ring.add(out.get(i, j), &t);
                    out.set(i, j, s);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for j in 0..self.cols {
                    let t = self.ring.mul(self.get(i, j), &v[j]);
                    acc = self.ring.add(&acc, &t);
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols, "matrix power needs a square matrix");
        let mut acc = Matrix::identity(self.ring, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates a polynomial at a square matrix by Horner's rule
    /// (constant term times the identity).
    pub fn eval_poly(&self, p: &Poly) -> Matrix {
        assert_eq!(self.rows, self.cols, "polynomial evaluation needs a square matrix");
        let mut acc = Matrix::zero(self.ring, self.rows, self.cols);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..self.rows {
                let s = self.ring.add(acc.get(i, i), c);
                acc.set(i, i, s);
            }
        }
        acc
    }

    /// Row-reduces in place to reduced row echelon form; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(row * self.cols + j, p * self.cols + j);
                }
            }
            let inv = self.ring.inv(self.get(row, col)).expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.ring.mul(self.get(row, j), &inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let t = self.ring.mul(&factor, self.get(row, j));
                    let v = self.ring.sub(self.get(r, j), &t);
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// A basis of the right kernel: vectors `v` with `A·v = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![self.ring.zero(); self.cols];
            v[free] = self.ring.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = self.ring.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let r = Ring::Rat;
        let a = Matrix::from_int_rows(r, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_int_rows(r, &[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&Matrix::identity(r, 2)), a);
        assert_eq!(a.mul(&b), Matrix::from_int_rows(r, &[&[2, 1], &[4, 3]]));
        let c = Matrix::from_int_rows(r, &[&[5, -1], &[2, 2]]);
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn rank_and_kernel() {
        for ring in [Ring::Rat, Ring::fp(5)] {
            let a = Matrix::from_int_rows(ring, &[&[1, 2], &[2, 4]]);
            assert_eq!(a.rank(), 1);
            let basis = a.kernel_basis();
            assert_eq!(basis.len(), 1);
            assert!(a.mul_vec(&basis[0]).iter().all(Scalar::is_zero));
            assert!(!a.is_invertible());
            let b = Matrix::from_int_rows(ring, &[&[1, 1], &[0, 1]]);
            assert!(b.is_invertible());
            assert!(b.kernel_basis().is_empty());
        }
    }

    #[test]
    fn kernel_dimension_matches_rank_nullity() {
        let ring = Ring::fp(3);
        let a = Matrix::from_int_rows(ring, &[&[1, 2, 0, 1], &[0, 1, 1, 1], &[1, 0, 1, 2]]);
        let rank = a.rank();
        let kernel = a.kernel_basis();
        assert_eq!(rank + kernel.len(), 4);
        for v in &kernel {
            assert!(a.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn annihilating_polynomial() {
        let r = Ring::Rat;
        let a = Matrix::from_int_rows(r, &[&[2, 0], &[0, 3]]);
        // (x-2)(x-3) = x^2 - 5x + 6 annihilates diag(2, 3).
        let p = Poly::from_int_coeffs(r, &[6, -5, 1]);
        assert!(a.eval_poly(&p).is_zero());
        // Constant polynomial evaluates to c times the identity.
        let c = Poly::from_int_coeffs(r, &[7]);
        assert_eq!(a.eval_poly(&c), Matrix::identity(r, 2).scale(&r.from_i64(7)));
    }

    #[test]
    fn powers() {
        let r = Ring::fp(7);
        let a = Matrix::from_int_rows(r, &[&[0, 1], &[1, 1]]);
        assert_eq!(a.pow(0), Matrix::identity(r, 2));
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
    }
}
