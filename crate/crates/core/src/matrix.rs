use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{is_compound, Field, Scalar};

/// Dense matrix over one of the exact fields. Square matrices double as
/// elements of the base ring `Mat_m(F)`; a field base uses `1 x 1` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Element of the base ring `R_0`.
pub type BaseElement = Matrix;

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::FieldMismatch("ragged or empty matrix literal".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: &Field, m: usize) -> Matrix {
        Matrix::scalar(field, m, field.one())
    }

    pub fn scalar(field: &Field, m: usize, s: Scalar) -> Matrix {
        let s = field.embed(&s).expect("scalar outside the matrix field");
        Matrix::from_fn(m, m, |i, j| if i == j { s.clone() } else { field.zero() })
    }

    /// Matrix unit `e_{ij}`.
    pub fn unit(field: &Field, m: usize, i: usize, j: usize) -> Matrix {
        Matrix::from_fn(m, m, |a, b| if (a, b) == (i, j) { field.one() } else { field.zero() })
    }

    pub fn column(entries: Vec<Scalar>) -> Matrix {
        Matrix { rows: entries.len(), cols: 1, data: entries }
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn field(&self) -> Field {
        self.data[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// `Some(s)` when the matrix equals `s * I`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let s = self.get(0, 0).clone();
        let ok = (0..self.rows)
            .all(|i| (0..self.cols).all(|j| if i == j { *self.get(i, j) == s } else { self.get(i, j).is_zero() }));
        ok.then_some(s)
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| s * a).collect() }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        if self.rows == 1 && self.cols == 1 && o.cols == 1 {
            return Matrix { rows: 1, cols: 1, data: vec![&self.data[0] * &o.data[0]] };
        }
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = self.get(i, 0) * o.get(0, j);
            for k in 1..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(a * o.get(k, j));
            }
            acc
        })
    }

    pub fn pow(&self, e: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.field(), self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 1 {
            return self.data[0].inv().ok().map(|v| Matrix { rows: 1, cols: 1, data: vec![v] });
        }
        let n = self.rows;
        let field = self.field();
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                field.one()
            } else {
                field.zero()
            }
        });
        let pivots = aug.rref(n);
        if pivots.len() != n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Row-major flattening of a square matrix into a column.
    pub fn vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn unvec(entries: &[Scalar], m: usize) -> Matrix {
        assert_eq!(entries.len(), m * m);
        Matrix { rows: m, cols: m, data: entries.to_vec() }
    }

    /// In-place reduced row echelon form over the first `ncols` columns;
    /// returns the pivot columns.
    fn rref(&mut self, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = self.get(row, col).inv().expect("nonzero pivot");
            for j in 0..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(r, j) - &(&factor * self.get(row, j));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

/// Solves `A x = b` exactly. Returns `None` when the system is inconsistent.
///
/// When the solution set is positive-dimensional the free variables are
/// assigned values in `{0, 1}` in lexicographic order (first free variable
/// most significant) and the first nonzero solution is returned; the zero
/// solution is returned only when it is the only one.
pub fn solve_linear_system(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length must match row count");
    let field = a.field();
    let n = a.cols();
    let mut aug = Matrix::from_fn(a.rows(), n + 1, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            field.embed(&b[i]).expect("right-hand side outside the matrix field")
        }
    });
    let pivots = aug.rref(n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let solve_with = |assignment: &[bool]| -> Vec<Scalar> {
        let mut x = vec![field.zero(); n];
        for (&f, &on) in free.iter().zip(assignment) {
            if on {
                x[f] = field.one();
            }
        }
        for (r, &p) in pivots.iter().enumerate() {
            let mut v = aug.get(r, n).clone();
            for (&f, &on) in free.iter().zip(assignment) {
                if on {
                    v = &v - aug.get(r, f);
                }
            }
            x[p] = v;
        }
        x
    };
    let k = free.len();
    // 2^k assignments; desk-scale systems keep k small, and the first or
    // second assignment already settles every system we build
    let limit: u64 = if k >= 63 { u64::MAX } else { 1u64 << k };
    let mut first = None;
    for code in 0..limit {
        let assignment: Vec<bool> = (0..k).map(|i| code >> (k - 1 - i) & 1 == 1).collect();
        let x = solve_with(&assignment);
        if x.iter().any(|v| !v.is_zero()) {
            return Some(x);
        }
        if first.is_none() {
            first = Some(x);
        }
        if k == 0 {
            break;
        }
    }
    first
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 1 && self.cols == 1 {
            return write!(f, "{}", self.data[0]);
        }
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Renders a base element so it can stand before `*` in a product. Scalar
/// multiples of the identity are written as the bare scalar.
pub(crate) fn coefficient_string(m: &Matrix) -> String {
    let s = match m.as_scalar() {
        Some(s) => s.to_string(),
        None => return m.to_string(),
    };
    if is_compound(&s) {
        format!("({s})")
    } else {
        s
    }
}
