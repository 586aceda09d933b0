//! Dense complex matrices and a sparse, incrementally maintained reduced
//! row echelon form used by the normal form engine.

use std::collections::BTreeMap;
use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::scalar::{Prec, Real, Scalar};

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
    prec: Prec,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:.6}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: Prec) -> Self {
        CMatrix { rows, cols, data: vec![Scalar::zero(prec); rows * cols], prec }
    }

    pub fn identity(n: usize, prec: Prec) -> Self {
        CMatrix::from_fn(n, n, prec, |i, j| if i == j { Scalar::one(prec) } else { Scalar::zero(prec) })
    }

    pub fn from_fn(rows: usize, cols: usize, prec: Prec, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data, prec }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        let prec = data.first().map(Scalar::prec).unwrap_or(Prec::from_digits(30));
        CMatrix { rows, cols, data, prec }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, o.cols, self.prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    fn zip(&self, o: &CMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect();
        CMatrix { rows: self.rows, cols: self.cols, data, prec: self.prec }
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, k: &Scalar) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect(), prec: self.prec }
    }

    /// `self += k * o`.
    pub fn add_scaled(&mut self, k: &Scalar, o: &CMatrix) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        for (x, y) in self.data.iter_mut().zip(&o.data) {
            x.add_mul(k, y);
        }
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, self.prec, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect(), prec: self.prec }
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero(self.prec);
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    /// Kronecker product; row index (i, k) ↦ i·o.rows + k.
    pub fn kron(&self, o: &CMatrix) -> CMatrix {
        CMatrix::from_fn(self.rows * o.rows, self.cols * o.cols, self.prec, |r, c| {
            self.get(r / o.rows, c / o.cols) * o.get(r % o.rows, c % o.cols)
        })
    }

    pub fn max_abs(&self) -> Real {
        self.data.iter().map(Scalar::abs).fold(Float::new(self.prec.bits()), |m, x| if x > m { x } else { m })
    }

    pub fn residual(&self, o: &CMatrix) -> Real {
        self.sub(o).max_abs()
    }

    /// Inverse by Gauss–Jordan with partial pivoting. Fails with
    /// `SingularMetric` when a pivot falls below `threshold`.
    pub fn inverse(&self, threshold: &Real) -> Result<CMatrix> {
        if self.rows != self.cols {
            return Err(Error::IndexMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMatrix::identity(n, self.prec);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a.get(i, c).abs().partial_cmp(&a.get(j, c).abs()).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or(c);
            if a.get(p, c).abs() <= *threshold {
                return Err(Error::SingularMetric);
            }
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let piv = a.get(c, c).recip();
            a.scale_row(c, &piv);
            inv.scale_row(c, &piv);
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let k = a.get(r, c).clone();
                a.sub_row_multiple(r, c, &k);
                inv.sub_row_multiple(r, c, &k);
            }
        }
        Ok(inv)
    }

    /// Numerical rank via row reduction with the given pivot threshold.
    pub fn rank(&self, threshold: &Real) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let p = (rank..self.rows)
                .max_by(|&i, &j| a.get(i, c).abs().partial_cmp(&a.get(j, c).abs()).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap();
            if a.get(p, c).abs() <= *threshold {
                continue;
            }
            a.swap_rows(rank, p);
            let piv = a.get(rank, c).recip();
            a.scale_row(rank, &piv);
            for r in 0..self.rows {
                if r != rank && !a.get(r, c).is_zero() {
                    let k = a.get(r, c).clone();
                    a.sub_row_multiple(r, rank, &k);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, i: usize, k: &Scalar) {
        for c in 0..self.cols {
            let v = &self.data[i * self.cols + c] * k;
            self.data[i * self.cols + c] = v;
        }
    }

    /// row_i -= k · row_j
    fn sub_row_multiple(&mut self, i: usize, j: usize, k: &Scalar) {
        for c in 0..self.cols {
            let v = self.data[j * self.cols + c].clone();
            self.data[i * self.cols + c].sub_mul(k, &v);
        }
    }
}

/// Sparse row keyed by column.
pub type SparseRow<K> = BTreeMap<K, Scalar>;

/// Fully reduced row echelon form built one row at a time.
///
/// Column priority is the `Ord` of `K`: smaller keys are eliminated first,
/// so they end up as pivots whenever the relations allow. Every stored
/// pivot row mentions only non-pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    pivots: BTreeMap<K, SparseRow<K>>,
    threshold: Real,
    drop: Real,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(threshold: Real, drop: Real) -> Self {
        Echelon { pivots: BTreeMap::new(), threshold, drop }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = (&K, &SparseRow<K>)> {
        self.pivots.iter()
    }

    /// Express `row` in non-pivot columns only.
    pub fn reduce(&self, row: &SparseRow<K>) -> SparseRow<K> {
        let mut out: SparseRow<K> = BTreeMap::new();
        for (k, c) in row {
            match self.pivots.get(k) {
                // pivot column: k = −Σ prow
                Some(prow) => {
                    for (j, v) in prow {
                        out.entry(j.clone()).or_insert_with(|| Scalar::zero(c.prec())).sub_mul(c, v);
                    }
                }
                None => *out.entry(k.clone()).or_insert_with(|| Scalar::zero(c.prec())) += c,
            }
        }
        out.retain(|_, v| v.abs() > self.drop);
        out
    }

    /// Add a row. Returns the new pivot column, if the row was independent.
    pub fn insert(&mut self, row: &SparseRow<K>) -> Option<K> {
        let mut r = self.reduce(row);
        let (pk, pv) = r.iter().find(|(_, v)| v.abs() > self.threshold).map(|(k, v)| (k.clone(), v.clone()))?;
        r.remove(&pk);
        let inv = pv.recip();
        for v in r.values_mut() {
            *v = &*v * &inv;
        }
        for prow in self.pivots.values_mut() {
            if let Some(d) = prow.remove(&pk) {
                for (j, v) in &r {
                    prow.entry(j.clone()).or_insert_with(|| Scalar::zero(d.prec())).sub_mul(&d, v);
                }
                let drop = &self.drop;
                prow.retain(|_, v| v.abs() > *drop);
            }
        }
        self.pivots.insert(pk.clone(), r);
        Some(pk)
    }

    /// Value of a pivot column in terms of free columns: k = Σ c_j · j.
    pub fn solve_for(&self, k: &K) -> Option<SparseRow<K>> {
        self.pivots.get(k).map(|prow| prow.iter().map(|(j, v)| (j.clone(), -v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::pow10;

    fn p() -> Prec {
        Prec::from_digits(40)
    }

    #[test]
    fn inverse_of_two_by_two() {
        let m = CMatrix::from_fn(2, 2, p(), |i, j| Scalar::from_int(p(), [[2, 1], [7, 4]][i][j]));
        let inv = m.inverse(&pow10(p(), -20)).unwrap();
        assert!(m.mul(&inv).residual(&CMatrix::identity(2, p())) < pow10(p(), -35));
    }

    #[test]
    fn singular_is_reported() {
        let m = CMatrix::from_fn(2, 2, p(), |i, j| Scalar::from_int(p(), [[1, 2], [2, 4]][i][j]));
        assert!(matches!(m.inverse(&pow10(p(), -20)), Err(Error::SingularMetric)));
        assert_eq!(m.rank(&pow10(p(), -20)), 1);
    }

    #[test]
    fn kron_shape_and_entry() {
        let a = CMatrix::identity(2, p());
        let b = CMatrix::from_fn(2, 2, p(), |i, j| Scalar::from_int(p(), (2 * i + j) as i64));
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(*k.get(3, 2), Scalar::from_int(p(), 2));
        assert!(k.get(0, 2).is_zero());
    }

    #[test]
    fn echelon_prefers_small_columns() {
        let mut e: Echelon<u8> = Echelon::new(pow10(p(), -25), pow10(p(), -38));
        let s = |x| Scalar::from_int(p(), x);
        // x0 + x1 + x2 = 0, x1 − x2 = 0
        e.insert(&[(0, s(1)), (1, s(1)), (2, s(1))].into_iter().collect());
        let piv = e.insert(&[(1, s(1)), (2, s(-1))].into_iter().collect());
        assert_eq!(piv, Some(1));
        assert!(e.is_pivot(&0) && !e.is_pivot(&2));
        let x0 = e.solve_for(&0).unwrap();
        assert!((&x0[&2] - &s(-2)).within(&pow10(p(), -35)));
        // dependent row adds nothing
        assert_eq!(e.insert(&[(0, s(1)), (2, s(2))].into_iter().collect()), None);
    }
}
