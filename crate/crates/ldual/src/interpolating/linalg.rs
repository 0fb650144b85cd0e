//! Sparse vectors and matrices over `QTFraction`, plus dense elimination for
//! the small weight-space systems.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::Result;
use crate::qt_algebra::QTFraction;

/// Sparse vector: index to nonzero coefficient.
pub type SVec = BTreeMap<usize, QTFraction>;

pub fn sv_unit(i: usize) -> SVec {
    SVec::from([(i, QTFraction::one())])
}

pub fn sv_axpy(acc: &mut SVec, c: &QTFraction, x: &SVec) {
    if c.is_zero() {
        return;
    }
    for (i, v) in x {
        let add = c * v;
        let e = acc.entry(*i).or_insert_with(QTFraction::zero);
        *e = &*e + &add;
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

pub fn sv_add(a: &SVec, b: &SVec) -> SVec {
    let mut out = a.clone();
    sv_axpy(&mut out, &QTFraction::one(), b);
    out
}

pub fn sv_sub(a: &SVec, b: &SVec) -> SVec {
    let mut out = a.clone();
    sv_axpy(&mut out, &QTFraction::int(-1), b);
    out
}

pub fn sv_scale(c: &QTFraction, x: &SVec) -> SVec {
    let mut out = SVec::new();
    sv_axpy(&mut out, c, x);
    out
}

/// Matrix stored by columns; column j is the image of basis vector j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: Vec<SVec>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols: vec![SVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: n,
            cols: (0..n).map(sv_unit).collect(),
        }
    }

    pub fn diagonal(d: &[QTFraction]) -> Self {
        let mut m = Matrix::zero(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> QTFraction {
        self.cols[j].get(&i).cloned().unwrap_or_else(QTFraction::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: QTFraction) {
        if v.is_zero() {
            self.cols[j].remove(&i);
        } else {
            self.cols[j].insert(i, v);
        }
    }

    pub fn col(&self, j: usize) -> &SVec {
        &self.cols[j]
    }

    pub fn apply(&self, x: &SVec) -> SVec {
        let mut out = SVec::new();
        for (j, c) in x {
            sv_axpy(&mut out, c, &self.cols[*j]);
        }
        out
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: o.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&o.cols).map(|(a, b)| sv_add(a, b)).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&o.cols).map(|(a, b)| sv_sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &QTFraction) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().map(|x| sv_scale(c, x)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Matrix {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = self.mul(&out);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Nonzero entries as (row, col, value), column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &QTFraction)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn try_map(&self, f: impl Fn(&QTFraction) -> Result<QTFraction>) -> Result<Matrix> {
        let mut out = Matrix::zero(self.rows, self.ncols());
        for (i, j, v) in self.entries() {
            out.set(i, j, f(v)?);
        }
        Ok(out)
    }

    /// Submatrix on the given rows and columns.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        Matrix {
            rows: rows.len(),
            cols: cols
                .iter()
                .map(|&j| {
                    self.cols[j]
                        .iter()
                        .filter_map(|(i, v)| pos.get(i).map(|&k| (k, v.clone())))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Dense {
        (0..self.rows)
            .map(|i| (0..self.ncols()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn from_dense(d: &Dense, rows: usize) -> Matrix {
        let ncols = d.first().map_or(0, |r| r.len());
        let mut m = Matrix::zero(rows, ncols);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Rows of fraction strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| {
                    Value::Array(
                        (0..self.ncols())
                            .map(|j| Value::String(self.get(i, j).to_string()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

pub type Dense = Vec<Vec<QTFraction>>;

fn weight(x: &QTFraction) -> usize {
    x.num().len() + x.den().len()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Dense) -> (Dense, Vec<usize>) {
    let mut a = m.clone();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // prefer the simplest nonzero pivot to limit growth
        let Some(p) = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| weight(&a[i][c]))
        else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        a[r] = a[r].iter().map(|x| x * &inv).collect();
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let row_r = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&row_r) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Dense) -> usize {
    rref(m).1.len()
}

/// Some x with A x = b, or `None` if inconsistent.
pub fn solve(a: &Dense, b: &[QTFraction]) -> Option<Vec<QTFraction>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let aug: Dense = a
        .iter()
        .zip(b)
        .map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect())
        .collect();
    let (red, piv) = rref(&aug);
    if piv.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![QTFraction::zero(); ncols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = red[r][ncols].clone();
    }
    Some(x)
}

/// Basis of the right kernel.
pub fn nullspace(a: &Dense, ncols: usize) -> Vec<Vec<QTFraction>> {
    let (red, piv) = rref(a);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![QTFraction::zero(); ncols];
            v[f] = QTFraction::one();
            for (r, &c) in piv.iter().enumerate() {
                v[c] = -&red[r][f];
            }
            v
        })
        .collect()
}

pub fn inverse(a: &Dense) -> Option<Dense> {
    let n = a.len();
    let aug: Dense = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { QTFraction::one() } else { QTFraction::zero() }));
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qt_algebra::{qint, qtint};

    fn fr(x: crate::qt_algebra::QTLaurent) -> QTFraction {
        QTFraction::from(x)
    }

    #[test]
    fn elimination_over_fractions() {
        let a = vec![
            vec![fr(qint(2)), fr(qtint(2, 1, 1))],
            vec![fr(&qint(2) * &qint(3)), fr(&qint(3) * &qtint(2, 1, 1))],
        ];
        assert_eq!(rank(&a), 1);
        let ns = nullspace(&a, 2);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!((&(&a[0][0] * &v[0]) + &(&a[0][1] * &v[1])).is_zero());
        let b = vec![
            vec![fr(qint(2)), QTFraction::one()],
            vec![QTFraction::zero(), fr(qtint(3, 1, 1))],
        ];
        let inv = inverse(&b).unwrap();
        let m = Matrix::from_dense(&b, 2).mul(&Matrix::from_dense(&inv, 2));
        assert_eq!(m, Matrix::identity(2));
        let x = solve(&b, &[QTFraction::one(), QTFraction::one()]).unwrap();
        assert_eq!(&(&b[1][1] * &x[1]), &QTFraction::one());
        assert!(solve(&a, &[QTFraction::one(), QTFraction::zero()]).is_none());
    }
}
