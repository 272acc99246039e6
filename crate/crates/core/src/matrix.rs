//! Small dense matrices over [`Scalar`].

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major `rows × cols` matrix of exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Scalar]> = (0..self.rows).map(|r| self.row(r)).collect();
        write!(f, "{rows:?}")
    }
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience for tests and examples: integer entries.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::one();
        }
        m
    }

    /// The `n × k` matrix whose columns are `cols`.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Result<Self> {
        let k = cols.len();
        let n = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::Shape("columns of different length".into()));
        }
        let mut m = Self::zeros(n, k);
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.entries[i * k + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { &acc + &(a * b) })
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Exact rank by fraction-free (Bareiss) elimination with full pivoting.
    pub fn rank(&self) -> usize {
        self.rank_capped(usize::MAX)
    }

    /// Like [`rank`](Self::rank) but stops once the rank exceeds `cap`,
    /// returning `cap + 1`.
    pub fn rank_capped(&self, cap: usize) -> usize {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.entries.clone();
        let mut prev = Scalar::one();
        let mut rank = 0;
        // active rows/cols are [rank..m) and [rank..n) after swaps
        let mut row_of: Vec<usize> = (0..m).collect();
        let mut col_of: Vec<usize> = (0..n).collect();
        while rank < m && rank < n {
            // Pivot: lowest-height nonzero entry of the active block.
            let mut best: Option<(usize, usize, u64)> = None;
            'scan: for (ri, &r) in row_of.iter().enumerate().skip(rank) {
                for ci in rank..n {
                    let x = &a[r * n + col_of[ci]];
                    if !x.is_zero() {
                        let h = x.height();
                        if best.is_none_or(|(_, _, bh)| h < bh) {
                            best = Some((ri, ci, h));
                            if h <= 2 {
                                break 'scan;
                            }
                        }
                    }
                }
            }
            let Some((pr, pc, _)) = best else { break };
            row_of.swap(rank, pr);
            col_of.swap(rank, pc);
            rank += 1;
            if rank > cap {
                return cap + 1;
            }
            let pr = row_of[rank - 1];
            let pc = col_of[rank - 1];
            let piv = a[pr * n + pc].clone();
            for &r in &row_of[rank..] {
                let lead = a[r * n + pc].clone();
                for &c in &col_of[rank..] {
                    let idx = r * n + c;
                    let cross = &a[pr * n + c];
                    let v = if lead.is_zero() || cross.is_zero() {
                        if a[idx].is_zero() {
                            continue;
                        }
                        &piv * &a[idx]
                    } else {
                        &(&piv * &a[idx]) - &(&lead * cross)
                    };
                    a[idx] = if prev.is_one() { v } else { &v / &prev };
                }
                a[r * n + pc] = Scalar::zero();
            }
            prev = piv;
        }
        rank
    }

    /// Reduced row echelon form; returns it with the pivot column indices.
    /// Pivot columns are the left-most independent columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.entries.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).recip().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let pv = m.get(row, c);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&f * pv);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Indices of the left-most columns forming a basis of the column space,
    /// stopping after `cap + 1` have been found.
    pub fn basis_columns(&self, cap: usize) -> Vec<usize> {
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        let mut idx = Vec::new();
        // Incremental elimination: keep reduced copies of chosen columns,
        // each with a designated pivot row.
        let mut pivot_rows: Vec<usize> = Vec::new();
        for c in 0..self.cols {
            let mut v = self.column(c);
            for (b, &pr) in basis.iter().zip(&pivot_rows) {
                if v[pr].is_zero() {
                    continue;
                }
                let f = &v[pr] / &b[pr];
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            if let Some(pr) = v.iter().position(|x| !x.is_zero()) {
                basis.push(v);
                pivot_rows.push(pr);
                idx.push(c);
                if idx.len() > cap {
                    break;
                }
            }
        }
        idx
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }

    /// A `k × n` left inverse of this `n × k` full-column-rank matrix,
    /// supported on `k` independent rows.
    pub fn left_inverse(&self) -> Result<Self> {
        let rows = self.transpose().basis_columns(self.cols);
        if rows.len() != self.cols {
            return Err(Error::Singular);
        }
        let sub = ExactMatrix::from_rows(rows.iter().map(|&r| self.row(r).to_vec()).collect())?;
        let sub_inv = sub.inverse()?;
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.cols {
            for (j, &r) in rows.iter().enumerate() {
                out.set(i, r, sub_inv.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != k {
                for c in 0..n {
                    a.entries.swap(p * n + c, k * n + c);
                }
                det = -det;
            }
            let piv = a.get(k, k).clone();
            det = &det * &piv;
            for r in k + 1..n {
                let f = a.get(r, k) / &piv;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = a.get(r, c) - &(&f * a.get(k, c));
                    a.set(r, c, v);
                }
            }
        }
        Ok(det)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_of_small_matrices() {
        assert_eq!(ExactMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(ExactMatrix::from_ints(&[&[0, 1, 1, 0], &[1, 0, 0, 0]]).rank(), 2);
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert_eq!(ExactMatrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).rank(), 2);
        assert_eq!(ExactMatrix::identity(5).rank_capped(2), 3);
    }

    #[test]
    fn inverse_and_left_inverse() {
        let m = ExactMatrix::from_ints(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(2));
        assert!(ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_err());

        let b = ExactMatrix::from_ints(&[&[0, 0], &[1, 2], &[1, 3], &[5, 5]]);
        let l = b.left_inverse().unwrap();
        assert_eq!(l.mul(&b).unwrap(), ExactMatrix::identity(2));
    }

    #[test]
    fn basis_columns_picks_leftmost() {
        let m = ExactMatrix::from_ints(&[&[0, 1, 2, 0], &[0, 1, 2, 1]]);
        assert_eq!(m.basis_columns(5), vec![1, 3]);
        assert_eq!(m.basis_columns(0), vec![1]);
    }

    #[test]
    fn determinant() {
        let m = ExactMatrix::from_ints(&[&[1, 2, 0], &[3, 1, 4], &[0, 2, 1]]);
        assert_eq!(m.det().unwrap(), Scalar::from_int(-13));
    }

    fn random_invertible(n: usize, seed: u64) -> ExactMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        loop {
            let e = (0..n * n).map(|_| Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect();
            let m = ExactMatrix::new(n, n, e).unwrap();
            if !m.det().unwrap().is_zero() {
                return m;
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn rank_invariant_under_invertible_maps(seed in 0u64..500, vals in proptest::collection::vec(-3i64..4, 12)) {
            // 3x4 matrix with entries from vals, rank checked against left/right multiplication
            let m = ExactMatrix::new(3, 4, vals.iter().map(|&v| Scalar::from_int(v)).collect()).unwrap();
            let p = random_invertible(3, seed);
            let q = random_invertible(4, seed + 1000);
            let moved = p.mul(&m).unwrap().mul(&q).unwrap();
            proptest::prop_assert_eq!(moved.rank(), m.rank());
            proptest::prop_assert_eq!(m.transpose().rank(), m.rank());
            proptest::prop_assert_eq!(m.rref().1.len(), m.rank());
        }
    }
}
