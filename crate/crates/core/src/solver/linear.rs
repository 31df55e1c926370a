use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

/// Sparse row `sum coeffs[j] x_j = rhs`.
pub type SparseRow = (BTreeMap<usize, Rational>, Rational);

/// Incrementally maintained reduced row echelon form.
///
/// Every pivot row has a 1 in its pivot column and no entry in any other
/// pivot column, so reducing a new row costs one subtraction per pivot
/// column it touches.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    rows: BTreeMap<usize, SparseRow>,
}

impl Rref {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseRow> {
        self.rows.get(&col)
    }

    fn reduce(&self, row: &mut SparseRow) {
        let hits: Vec<(usize, Rational)> =
            row.0.iter().filter(|(c, _)| self.rows.contains_key(c)).map(|(c, a)| (*c, a.clone())).collect();
        for (c, a) in hits {
            let (p, rhs) = &self.rows[&c];
            axpy(row, &-a, p, rhs);
        }
    }

    /// Adds a row. Returns `Ok(true)` if the rank grew, and an error when
    /// the row reduces to `0 = nonzero`.
    pub fn insert(&mut self, mut row: SparseRow, degree: usize) -> Result<bool> {
        self.reduce(&mut row);
        let Some((&p, lead)) = row.0.iter().next() else {
            return if row.1.is_zero() { Ok(false) } else { Err(Error::Inconsistent(degree)) };
        };
        let inv = lead.inverse().expect("stored entries are nonzero");
        for v in row.0.values_mut() {
            *v *= &inv;
        }
        row.1 *= &inv;
        let others: Vec<usize> = self.rows.iter().filter(|(_, (r, _))| r.contains_key(&p)).map(|(c, _)| *c).collect();
        for c in others {
            let mut target = self.rows.remove(&c).unwrap();
            let a = target.0[&p].clone();
            axpy(&mut target, &-a, &row.0, &row.1);
            self.rows.insert(c, target);
        }
        self.rows.insert(p, row);
        Ok(true)
    }
}

/// `row += a * (p, rhs)`, dropping entries that cancel.
fn axpy(row: &mut SparseRow, a: &Rational, p: &BTreeMap<usize, Rational>, rhs: &Rational) {
    for (c, v) in p {
        let add = a.clone() * v;
        let slot = row.0.entry(*c).or_insert_with(Rational::zero);
        *slot += &add;
        if slot.is_zero() {
            row.0.remove(c);
        }
    }
    row.1 += &(a.clone() * rhs);
}

/// Drops zero rows that are consistent and rows that repeat up to scaling.
pub fn dedup_rows(rows: Vec<SparseRow>) -> Vec<SparseRow> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (mut r, mut rhs) in rows {
        r.retain(|_, v| !v.is_zero());
        if let Some(lead) = r.values().next().cloned() {
            let inv = lead.inverse().unwrap();
            for v in r.values_mut() {
                *v *= &inv;
            }
            rhs *= &inv;
        }
        if seen.insert((r.clone(), rhs.clone())) {
            out.push((r, rhs));
        }
    }
    out
}

/// Solution set of an affine system: `particular + sum t_i basis_i`.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub free_columns: Vec<usize>,
    pub basis: Vec<Vec<Rational>>,
}

impl AffineSolution {
    pub fn from_rref(r: &Rref, ncols: usize) -> Self {
        let mut particular = vec![Rational::zero(); ncols];
        for (c, (_, rhs)) in &r.rows {
            particular[*c] = rhs.clone();
        }
        let free_columns: Vec<usize> = (0..ncols).filter(|c| !r.rows.contains_key(c)).collect();
        let basis = free_columns
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); ncols];
                v[f] = Rational::one();
                for (c, (row, _)) in &r.rows {
                    if let Some(a) = row.get(&f) {
                        v[*c] = -a.clone();
                    }
                }
                v
            })
            .collect();
        AffineSolution { particular, free_columns, basis }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn point(&self, params: &[Rational]) -> Vec<Rational> {
        let mut x = self.particular.clone();
        for (t, b) in params.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += &(t.clone() * bi);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)], rhs: i64) -> SparseRow {
        (entries.iter().map(|(c, v)| (*c, Rational::from_int(*v))).collect(), Rational::from_int(rhs))
    }

    #[test]
    fn small_system() {
        // x0 + x1 = 3, x1 - x2 = 1, x0 + x2 = 2 (dependent)
        let mut r = Rref::new();
        for rw in [row(&[(0, 1), (1, 1)], 3), row(&[(1, 1), (2, -1)], 1), row(&[(0, 1), (2, 1)], 2)] {
            r.insert(rw, 0).unwrap();
        }
        assert_eq!(r.rank(), 2);
        let s = AffineSolution::from_rref(&r, 3);
        assert_eq!(s.free_columns, vec![2]);
        let x = s.point(&[Rational::from_int(5)]);
        assert_eq!(x[0].clone() + &x[1], Rational::from_int(3));
        assert_eq!(x[1].clone() - &x[2], Rational::from_int(1));
        assert!(r.insert(row(&[(0, 1), (2, 1)], 7), 4).is_err());
    }

    #[test]
    fn dedup_scales_rows() {
        let rows = vec![row(&[(0, 2), (3, 4)], 6), row(&[(0, 1), (3, 2)], 3), row(&[], 0), row(&[(0, 0)], 0)];
        assert_eq!(dedup_rows(rows).len(), 2);
    }
}
