//! Dense matrices over `E` with exact Gaussian elimination.
//!
//! Elimination always scans columns left to right and rows top to bottom, so
//! every result (kernel bases, canonical forms) is deterministic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{EScalar, FieldParams};

/// A `rows × cols` matrix over `E`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: FieldParams,
    data: Vec<EScalar>,
}

impl Mat {
    pub fn zeros(field: FieldParams, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldParams, n: usize) -> Self {
        Self::scalar(field, n, field.one())
    }

    pub fn scalar(field: FieldParams, n: usize, c: EScalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn diag(field: FieldParams, entries: &[EScalar]) -> Self {
        let mut m = Self::zeros(field, entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_vec(field: FieldParams, rows: usize, cols: usize, data: Vec<EScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                format!("{} entries for {rows}x{cols}", rows * cols),
                format!("{} entries", data.len()),
            ));
        }
        Ok(Mat {
            rows,
            cols,
            field,
            data,
        })
    }

    pub fn from_fn(
        field: FieldParams,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> EScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            rows,
            cols,
            field,
            data,
        }
    }

    /// Builds a matrix from small integer entries (elements of `F`).
    pub fn from_ints(field: FieldParams, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(field, r, c, |i, j| field.from_f(rows[i][j]))
    }

    /// Column vector.
    pub fn column(field: FieldParams, entries: &[EScalar]) -> Self {
        Mat {
            rows: entries.len(),
            cols: 1,
            field,
            data: entries.to_vec(),
        }
    }

    /// `(A B; C D)` from four `n × n` blocks.
    pub fn block(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Result<Self> {
        let n = a.rows;
        for m in [a, b, c, d] {
            if m.rows != n || m.cols != n {
                return Err(Error::shape(format!("{n}x{n} block"), m.shape_str()));
            }
        }
        let field = a.field;
        Ok(Self::from_fn(field, 2 * n, 2 * n, |i, j| {
            let src = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            src[(i % n, j % n)]
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn entries(&self) -> &[EScalar] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn shape_str(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    /// Submatrix of rows `r0..r0+nr`, columns `c0..c0+nc`.
    pub fn sub_block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols);
        Self::from_fn(self.field, nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    /// The four `n × n` blocks of a `2n × 2n` matrix.
    pub fn blocks(&self) -> Result<[Mat; 4]> {
        if !self.is_square() || !self.rows.is_multiple_of(2) {
            return Err(Error::shape("2n x 2n", self.shape_str()));
        }
        let n = self.rows / 2;
        Ok([
            self.sub_block(0, 0, n, n),
            self.sub_block(0, n, n, n),
            self.sub_block(n, 0, n, n),
            self.sub_block(n, n, n, n),
        ])
    }

    pub fn col(&self, j: usize) -> Vec<EScalar> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::shape(
                format!("{} rows", self.rows),
                other.shape_str(),
            ));
        }
        Ok(Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        }))
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols {
            return Err(Error::shape(
                format!("{} cols", self.cols),
                other.shape_str(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat::from_vec(self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn transpose(&self) -> Mat {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj_entrywise(&self) -> Mat {
        Mat {
            data: self.data.iter().map(|x| x.conj()).collect(),
            ..self.clone()
        }
    }

    /// `A* = ᵗĀ`.
    pub fn star(&self) -> Mat {
        self.conj_entrywise().transpose()
    }

    pub fn scale(&self, c: EScalar) -> Mat {
        Mat {
            data: self.data.iter().map(|&x| c * x).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Whether every entry lies in `F`.
    pub fn is_rational(&self) -> bool {
        self.data.iter().all(|x| x.is_rational())
    }

    pub fn checked_add(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other)?;
        Ok(Mat {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn checked_sub(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other)?;
        Ok(Mat {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
            ..self.clone()
        })
    }

    pub fn checked_mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::shape(
                format!("{} rows on the right", self.cols),
                other.shape_str(),
            ));
        }
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = out[(i, j)] + a * other[(k, j)];
                    out[(i, j)] = t;
                }
            }
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Mat) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(self.shape_str(), other.shape_str()));
        }
        Ok(())
    }

    /// `ᵗx · self · y` for column vectors given as slices.
    pub fn bilinear(&self, x: &[EScalar], y: &[EScalar]) -> Result<EScalar> {
        if x.len() != self.rows || y.len() != self.cols {
            return Err(Error::shape(
                format!("vectors of length {} and {}", self.rows, self.cols),
                format!("lengths {} and {}", x.len(), y.len()),
            ));
        }
        let mut acc = self.field.zero();
        for i in 0..self.rows {
            if x[i].is_zero() {
                continue;
            }
            let mut row = self.field.zero();
            for j in 0..self.cols {
                row += self[(i, j)] * y[j];
            }
            acc += x[i] * row;
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &[EScalar]) -> Result<Vec<EScalar>> {
        if v.len() != self.cols {
            return Err(Error::shape(format!("vector of length {}", self.cols), v.len().to_string()));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.field.zero(), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = inv * m[(r, j)];
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)];
                    for j in c..m.cols {
                        let t = m[(i, j)] - f * m[(r, j)];
                        m[(i, j)] = t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<EScalar> {
        if !self.is_square() {
            return Err(Error::shape("square matrix", self.shape_str()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m[(c, c)];
            det *= pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                let f = m[(i, c)] * inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = m[(i, j)] - f * m[(c, j)];
                    m[(i, j)] = t;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss–Jordan; `Ok(None)` for singular input.
    pub fn inverse(&self) -> Result<Option<Mat>> {
        if !self.is_square() {
            return Err(Error::shape("square matrix", self.shape_str()));
        }
        let n = self.rows;
        let aug = self.hcat(&Mat::identity(self.field, n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        Ok(Some(r.sub_block(0, n, n, n)))
    }

    /// Basis of the right null space, one basis vector per column.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.field, self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k[(f, col)] = self.field.one();
            for (row, &p) in pivots.iter().enumerate() {
                k[(p, col)] = -r[(row, f)];
            }
        }
        k
    }

    /// Solves `A x = b`, returning one solution when the system is consistent.
    pub fn solve(&self, b: &[EScalar]) -> Result<Option<Vec<EScalar>>> {
        if b.len() != self.rows {
            return Err(Error::shape(format!("rhs of length {}", self.rows), b.len().to_string()));
        }
        let aug = self.hcat(&Mat::column(self.field, b))?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)];
        }
        Ok(Some(x))
    }

    /// Canonical basis of the column span: the reduced column-echelon form
    /// with zero columns dropped. Two matrices have the same column span iff
    /// their canonical forms are equal.
    pub fn column_echelon_canonical(&self) -> Mat {
        let (r, pivots) = self.transpose().rref();
        r.sub_block(0, 0, pivots.len(), self.rows).transpose()
    }

    /// Text form: rows separated by `;`, entries by `,`.
    pub fn to_text(&self) -> String {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)].to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse(field: FieldParams, text: &str) -> Result<Mat> {
        let rows: Vec<Vec<EScalar>> = text
            .trim()
            .split(';')
            .map(|row| row.split(',').map(|e| field.parse_scalar(e)).collect())
            .collect::<Result<_>>()?;
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged matrix {text:?}")));
        }
        let nrows = rows.len();
        Mat::from_vec(field, nrows, cols, rows.into_iter().flatten().collect())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = EScalar;
    fn index(&self, (i, j): (usize, usize)) -> &EScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut EScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// Operator forms panic on shape mismatch; use the `checked_*` methods where
// shapes come from user input.
impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scale(-self.field.one())
    }
}
