//! Exact linear algebra over the rationals.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::ring::{int, LinForm, Ring, Scalar};
use crate::graded::vector::Vector;

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![int(0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, int(1));
        }
        m
    }

    /// Matrix whose columns are the given sparse vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col.iter() {
                m.set(i, j, c.clone());
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

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vector {
        Vector::from_pairs((0..self.rows).map(|r| (r, self.get(r, c).clone())))
    }

    pub fn mul_vector(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|r| (0..self.cols).fold(int(0), |acc, c| acc + self.get(r, c) * &v[c]))
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = int(1) / self.get(row, col);
            for c in 0..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for c in 0..self.cols {
                        let v = self.get(r, c) - &factor * self.get(row, c);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![int(0); self.cols];
                v[f] = int(1);
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self · x = rhs`, free variables set to zero.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![int(0); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, int(1));
        }
        let pivots = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Some(inv)
    }
}

/// Incrementally built sparse linear system `form = 0` in numbered unknowns.
///
/// Each stored row has a distinct pivot, its least unknown; rows are kept
/// reduced against earlier pivots so back-substitution runs from the top
/// pivot down. Free unknowns are set to zero.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    rows: BTreeMap<usize, LinForm>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds the equation `form = 0`; fails if it contradicts earlier ones.
    pub fn add(&mut self, form: &LinForm) -> Result<()> {
        let mut row = form.clone();
        let mut cursor = 0usize;
        loop {
            let next = row.terms.range(cursor..).map(|(k, _)| *k).find(|k| self.rows.contains_key(k));
            let Some(col) = next else { break };
            let pivot_row = &self.rows[&col];
            let factor = row.terms[&col].clone() / &pivot_row.terms[&col];
            row = row.minus(&pivot_row.scaled(&factor));
            cursor = col + 1;
        }
        match row.terms.iter().next() {
            None if row.constant.is_zero() => Ok(()),
            None => Err(Error::Unsolvable(format!("inconsistent equation, residual constant {}", row.constant))),
            Some((&col, _)) => {
                self.rows.insert(col, row);
                Ok(())
            }
        }
    }

    pub fn solve(&self) -> BTreeMap<usize, Scalar> {
        let mut values: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (&pivot, row) in self.rows.iter().rev() {
            let mut acc = row.constant.clone();
            for (&k, c) in row.terms.range(pivot + 1..) {
                if let Some(v) = values.get(&k) {
                    acc += c * v;
                }
            }
            let value = -acc / &row.terms[&pivot];
            if !value.is_zero() {
                values.insert(pivot, value);
            }
        }
        values
    }
}

/// Greedy basis of a span: keeps a vector iff it is independent of those
/// kept so far.
#[derive(Clone, Debug, Default)]
pub struct EchelonSpan {
    rows: BTreeMap<usize, Vector>,
}

impl EchelonSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for (&p, row) in &self.rows {
            let c = r.get(p);
            if !c.is_zero() {
                r.add_scaled(row, &(-c / row.get(p)));
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Returns whether `v` was independent (and therefore added).
    pub fn insert(&mut self, v: &Vector) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.support().next() else { return false };
        let pivot_value = r.get(p);
        for row in self.rows.values_mut() {
            let c = row.get(p);
            if !c.is_zero() {
                row.add_scaled(&r, &(-c / &pivot_value));
            }
        }
        self.rows.insert(p, r);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ring::ratio;

    #[test]
    fn rank_and_kernel() {
        let mut m = Matrix::zeros(2, 3);
        m.set(0, 0, int(1));
        m.set(0, 1, int(2));
        m.set(1, 0, int(2));
        m.set(1, 1, int(4));
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vector(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut m = Matrix::zeros(2, 2);
        m.set(0, 0, int(2));
        m.set(0, 1, int(1));
        m.set(1, 1, int(3));
        let inv = m.inverse().unwrap();
        assert_eq!(*inv.get(0, 0), ratio(1, 2));
        assert_eq!(*inv.get(0, 1), ratio(-1, 6));
        assert!(Matrix::zeros(2, 2).inverse().is_none());
    }

    #[test]
    fn sparse_system_solves_and_detects_inconsistency() {
        // x0 + x1 = 3, x1 - x2 = 1, x2 = 1
        let x = |i| LinForm::unknown(i);
        let three = LinForm::from_scalar(&int(3));
        let one = LinForm::from_scalar(&int(1));
        let mut sys = LinearSystem::new();
        sys.add(&x(0).plus(&x(1)).minus(&three)).unwrap();
        sys.add(&x(1).minus(&x(2)).minus(&one)).unwrap();
        sys.add(&x(2).minus(&one)).unwrap();
        let sol = sys.solve();
        assert_eq!(sol[&0], int(1));
        assert_eq!(sol[&1], int(2));
        assert_eq!(sol[&2], int(1));
        assert!(sys.add(&x(0).minus(&three)).is_err());
        assert!(sys.add(&x(0).minus(&one)).is_ok());
    }

    #[test]
    fn echelon_span_membership() {
        let mut s = EchelonSpan::new();
        assert!(s.insert(&Vector::from_pairs([(0, int(1)), (1, int(1))])));
        assert!(!s.insert(&Vector::from_pairs([(0, int(2)), (1, int(2))])));
        assert!(s.insert(&Vector::basis(1)));
        assert!(s.contains(&Vector::basis(0)));
    }
}
