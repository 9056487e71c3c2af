//! Dense Gaussian elimination over a finite field.

use crate::ffield::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(field.zero(), |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }
}

/// Reduced row echelon form with pivots chosen left to right, each pivot the
/// first nonzero entry at or below the current row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.reduced.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.reduced.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// The nullspace vector obtained by setting the first free variable to 1
    /// and every other free variable to 0. `None` when the nullspace is trivial.
    pub fn canonical_null_vector(&self, field: &Field) -> Option<Vec<Elem>> {
        let free = *self.free_columns().first()?;
        Some(self.null_vector_for(field, free))
    }

    /// Basis of the nullspace, one vector per free column in column order.
    pub fn null_basis(&self, field: &Field) -> Vec<Vec<Elem>> {
        self.free_columns()
            .into_iter()
            .map(|c| self.null_vector_for(field, c))
            .collect()
    }

    fn null_vector_for(&self, field: &Field, free: usize) -> Vec<Elem> {
        let mut v = vec![field.zero(); self.reduced.cols];
        v[free] = field.one();
        for (r, &pc) in self.pivots.iter().enumerate() {
            v[pc] = field.neg(self.reduced.get(r, free));
        }
        v
    }
}

pub fn row_reduce(field: &Field, mut m: Matrix) -> Echelon {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(found) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, found);
        let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
        for c in col..m.cols {
            let v = m.get(row, c);
            m.set(row, c, field.mul(v, inv));
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col);
            if factor.is_zero() {
                continue;
            }
            for c in col..m.cols {
                let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { reduced: m, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::seq::SliceRandom;
    use rand::Rng;

    #[test]
    fn identity_has_full_rank() {
        let f = Field::prime(5).unwrap();
        let mut m = Matrix::zeros(3, 3);
        for i in 0..3 {
            m.set(i, i, f.one());
        }
        let e = row_reduce(&f, m);
        assert_eq!(e.rank(), 3);
        assert!(e.canonical_null_vector(&f).is_none());
    }

    #[test]
    fn canonical_vector_uses_first_free_column() {
        let f = Field::prime(5).unwrap();
        // x0 + 2 x1 + x2 = 0
        let m = Matrix::from_rows(3, vec![vec![f.one(), f.from_int(2), f.one()]]);
        let e = row_reduce(&f, m.clone());
        assert_eq!(e.free_columns(), vec![1, 2]);
        let v = e.canonical_null_vector(&f).unwrap();
        assert_eq!(v, vec![f.from_int(-2), f.one(), f.zero()]);
        assert!(m.apply(&f, &v).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn random_systems_solve_and_rank_is_shuffle_invariant() {
        let mut rng = random::rng_from_seed(7);
        for q in [2u32, 3, 4, 5, 9] {
            let f = Field::with_order(q).unwrap();
            for _ in 0..40 {
                let rows = rng.gen_range(1..8);
                let cols = rng.gen_range(1..8);
                let data: Vec<Vec<Elem>> = (0..rows)
                    .map(|_| (0..cols).map(|_| random::elem(&f, &mut rng)).collect())
                    .collect();
                let m = Matrix::from_rows(cols, data.clone());
                let e = row_reduce(&f, m.clone());
                for v in e.null_basis(&f) {
                    assert!(m.apply(&f, &v).iter().all(|x| x.is_zero()));
                }
                assert_eq!(e.rank() + e.free_columns().len(), cols);
                let mut shuffled = data;
                shuffled.shuffle(&mut rng);
                let e2 = row_reduce(&f, Matrix::from_rows(cols, shuffled));
                assert_eq!(e.rank(), e2.rank());
                // the reduced form is unique, so the canonical vector is too
                assert_eq!(e.canonical_null_vector(&f), e2.canonical_null_vector(&f));
            }
        }
    }
}
