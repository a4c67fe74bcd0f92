use std::fmt;

use super::field::Prime;
use crate::error::{Error, Result};

/// Dense row-major matrix over F_p with entries stored as reduced residues.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    modulus: Prime,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: Prime) -> Self {
        FpMatrix { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, modulus: Prime) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Rows given as signed integers; reduced mod p.
    pub fn from_rows(cols: usize, modulus: Prime, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols, modulus);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {r} has wrong length");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, modulus.reduce_i64(v));
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

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.modulus.get());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Append a row of reduced residues.
    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: rhs.rows });
        }
        let p = self.modulus;
        let mut out = FpMatrix::zeros(self.rows, rhs.cols, p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = p.add(out.get(i, j), p.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `row[dst] += factor * row[src]`, touching only columns `from..`.
    fn axpy_rows(&mut self, dst: usize, src: usize, factor: u32, from: usize) {
        let p = self.modulus.get() as u64;
        let cols = self.cols;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&mut hi[..cols], &lo[src * cols..(src + 1) * cols])
        };
        let f = factor as u64;
        for (x, &y) in a[from..].iter_mut().zip(&b[from..]) {
            if y != 0 {
                *x = ((*x as u64 + f * y as u64) % p) as u32;
            }
        }
    }

    fn scale_row(&mut self, r: usize, factor: u32, from: usize) {
        let p = self.modulus;
        for c in from..self.cols {
            let v = self.get(r, c);
            self.set(r, c, p.mul(v, factor));
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Gaussian elimination in place. With `full`, entries above pivots
    /// are cleared too (reduced row-echelon form). Returns pivot columns.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let p = self.modulus;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = p.inv(self.get(r, c));
            self.scale_row(r, inv, c);
            let start = if full { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r {
                    continue;
                }
                let v = self.get(i, c);
                if v != 0 {
                    self.axpy_rows(i, r, p.neg(v), c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row-echelon form with zero rows dropped: a canonical basis
    /// of the row space.
    pub fn reduce(&self) -> FpMatrix {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        m.data.truncate(pivots.len() * m.cols);
        m.rows = pivots.len();
        m
    }

    /// Pivot columns of the reduced form.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().eliminate(false)
    }

    pub fn is_reduced(&self) -> bool {
        // canonical form is unique, so comparing against a fresh reduction suffices
        *self == self.reduce()
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).len()
    }

    /// Columns of the result form a basis of `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> FpMatrix {
        let p = self.modulus;
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMatrix::zeros(self.cols, free.len(), p);
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, p.neg(m.get(r, f)));
            }
        }
        k
    }

    /// Whether the row space of `self` contains the row space of `other`.
    pub fn subspace_contains(&self, other: &FpMatrix) -> Result<bool> {
        self.check_ambient(other)?;
        let base = self.rank();
        let mut stacked = self.clone();
        for r in 0..other.rows {
            stacked.push_row(other.row(r));
        }
        Ok(stacked.rank() == base)
    }

    /// Whether the two row spaces coincide, decided on canonical reduced forms.
    pub fn subspace_equal(&self, other: &FpMatrix) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.reduce() == other.reduce())
    }

    fn check_ambient(&self, other: &FpMatrix) -> Result<()> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { left: self.cols, right: other.cols });
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        Ok(())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.modulus)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let id = FpMatrix::identity(3, p(3));
        assert_eq!(id.kernel_basis().cols(), 0);
        let z = FpMatrix::zeros(2, 2, p(5));
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn subspace_examples() {
        let f = p(5);
        let e1 = FpMatrix::from_rows(2, f, &[vec![1, 0]]);
        let two_e1 = FpMatrix::from_rows(2, f, &[vec![2, 0]]);
        let e2 = FpMatrix::from_rows(2, f, &[vec![0, 1]]);
        let both = FpMatrix::from_rows(2, f, &[vec![1, 0], vec![0, 1]]);
        let diag = FpMatrix::from_rows(2, f, &[vec![1, 1]]);
        assert!(e1.subspace_equal(&two_e1).unwrap());
        assert!(!e1.subspace_equal(&e2).unwrap());
        assert!(both.subspace_contains(&diag).unwrap());
        assert!(!diag.subspace_contains(&both).unwrap());
        let wide = FpMatrix::zeros(1, 3, f);
        assert!(matches!(e1.subspace_equal(&wide), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reduce_drops_zero_rows() {
        let f = p(7);
        let m = FpMatrix::from_rows(3, f, &[vec![2, 4, 6], vec![1, 2, 3], vec![0, 0, 1]]);
        let r = m.reduce();
        assert_eq!(r.rows(), 2);
        assert_eq!(r.row(0), &[1, 2, 0]);
        assert_eq!(r.row(1), &[0, 0, 1]);
        assert!(r.is_reduced());
    }

    fn arb_matrix() -> impl Strategy<Value = FpMatrix> {
        (1usize..7, 1usize..10, prop::sample::select(vec![3u32, 5, 7, 11]))
            .prop_flat_map(|(r, c, q)| {
                prop::collection::vec(prop::collection::vec(0i64..q as i64, c), r)
                    .prop_map(move |rows| FpMatrix::from_rows(c, Prime::new(q).unwrap(), &rows))
            })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.cols());
            prop_assert!(m.rank() <= m.rows().min(m.cols()));
        }

        #[test]
        fn reduce_idempotent(m in arb_matrix()) {
            let r = m.reduce();
            prop_assert_eq!(r.reduce(), r.clone());
            prop_assert!(r.subspace_equal(&m).unwrap());
        }
    }

    #[test]
    fn random_5x8_rank_nullity() {
        // fixed pseudo-random instance, generated by a linear congruential walk
        let f = p(7);
        let mut s: u64 = 12345;
        let rows: Vec<Vec<i64>> = (0..5)
            .map(|_| {
                (0..8)
                    .map(|_| {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        ((s >> 33) % 7) as i64
                    })
                    .collect()
            })
            .collect();
        let m = FpMatrix::from_rows(8, f, &rows);
        assert_eq!(m.rank() + m.kernel_basis().cols(), 8);
    }
}
