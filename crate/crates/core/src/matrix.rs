//! Dense exact matrices over a [`FieldSpec`] together with the elimination
//! routines everything else is built on: reduced row-echelon form, kernels,
//! spans, intersections and quotient coordinates.
//!
//! Subspaces of `K^N` are represented by an `N × k` matrix whose columns are a
//! basis. The canonical representative is the reduced column-echelon form, so
//! two subspaces are equal exactly when their canonical bases are equal.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`ExactMatrix::reduced_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedForm {
    pub matrix: ExactMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every entry must live in `field`.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch);
                }
                data.push(x);
            }
        }
        Ok(Self {
            field,
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    /// Builds a matrix from integer rows (reduced into `field`).
    pub fn from_ints<R: AsRef<[i64]>>(field: FieldSpec, rows: &[R]) -> Self {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| field.int(x)).collect())
            .collect();
        Self::from_rows(field, rows).expect("integer rows are well formed")
    }

    /// Builds an `rows × columns.len()` matrix whose columns are given.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column of length {} in a {rows}-row matrix",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                if x.field() != field {
                    return Err(Error::FieldMismatch);
                }
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
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

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        debug_assert_eq!(x.field(), self.field);
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { data, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| -a).collect();
        Self { data, ..*self }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        Self { data, ..*self }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hcat row counts differ".into()));
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vcat column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let rows: Vec<usize> = (r0..r1).collect();
        let cols: Vec<usize> = (c0..c1).collect();
        self.select_rows(&rows).select_columns(&cols)
    }

    /// Unique reduced row-echelon form with rank and pivot columns.
    pub fn reduced_form(&self) -> ReducedForm {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        ReducedForm {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            for j in c..cols {
                let idx = r * cols + j;
                self.data[idx] = &self.data[idx] * &inv;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let sub = &factor * self.get(r, j);
                    let idx = i * cols + j;
                    self.data[idx] = &self.data[idx] - &sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.reduced_form().rank
    }

    /// Columns form a basis of the right kernel `{x : self·x = 0}`.
    pub fn kernel_basis(&self) -> Self {
        let rf = self.reduced_form();
        let free: Vec<usize> = (0..self.cols).filter(|c| !rf.pivots.contains(c)).collect();
        let mut out = Self::zeros(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.field.one());
            for (row, &pc) in rf.pivots.iter().enumerate() {
                out.set(pc, k, -rf.matrix.get(row, fc));
            }
        }
        out
    }

    /// Columns form a basis of `{y : yᵀ·self = 0}`.
    pub fn left_kernel_basis(&self) -> Self {
        self.transpose().kernel_basis()
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let factor = m.get(i, c) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let sub = &factor * m.get(c, j);
                    let idx = i * n + j;
                    m.data[idx] = &m.data[idx] - &sub;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hcat(&Self::identity(self.field, n)).ok()?;
        let rf = aug.reduced_form();
        if rf.pivots.iter().take(n).copied().ne(0..n) || rf.rank < n {
            return None;
        }
        Some(rf.matrix.block(0, n, n, 2 * n))
    }

    /// Some `X` with `self · X = rhs`, if the system is consistent.
    pub fn solve(&self, rhs: &Self) -> Result<Option<Self>> {
        self.same_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("solve: row counts differ".into()));
        }
        let aug = self.hcat(rhs)?;
        let rf = aug.reduced_form();
        if rf.pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.field, self.cols, rhs.cols);
        for (row, &pc) in rf.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, rf.matrix.get(row, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Canonical basis (reduced column-echelon form) of the column span.
    pub fn column_span(&self) -> Self {
        let rf = self.transpose().reduced_form();
        let keep: Vec<usize> = (0..rf.rank).collect();
        rf.matrix.select_rows(&keep).transpose()
    }

    /// Leading row of every column; meaningful on a canonical basis.
    pub fn column_pivots(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .find(|&i| !self.get(i, j).is_zero())
                    .expect("canonical basis has no zero column")
            })
            .collect()
    }

    /// Whether every column of `other` lies in the column span of `self`.
    pub fn spans(&self, other: &Self) -> Result<bool> {
        self.same_field(other)?;
        if other.cols == 0 {
            return Ok(true);
        }
        Ok(self.hcat(other)?.rank() == self.rank())
    }

    pub fn same_span(&self, other: &Self) -> Result<bool> {
        self.same_field(other)?;
        Ok(self.column_span() == other.column_span())
    }

    /// Canonical basis of `colspan(self) + colspan(other)`.
    pub fn sum_spans(&self, other: &Self) -> Result<Self> {
        Ok(self.hcat(other)?.column_span())
    }

    /// Canonical basis of `colspan(a) ∩ colspan(b)`.
    pub fn intersect_spans(a: &Self, b: &Self) -> Result<Self> {
        a.same_field(b)?;
        if a.rows != b.rows {
            return Err(Error::DimensionMismatch("intersect_spans: different ambient".into()));
        }
        let a = a.column_span();
        let b = b.column_span();
        let k = a.hcat(&b.neg())?.kernel_basis();
        let coeffs = k.block(0, a.cols, 0, k.cols);
        Ok(a.mul(&coeffs)?.column_span())
    }

    pub fn column_vector(field: FieldSpec, v: &[Scalar]) -> Self {
        Self::from_columns(field, v.len(), &[v.to_vec()]).expect("single column")
    }

    /// Vectorized rows of the data in row-major order (for ordering keys).
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.field)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>()
            }))
            .finish()
    }
}

/// Coordinates on `K^N / S` for a subspace `S`, using the unit vectors at the
/// non-pivot rows of the canonical basis of `S` as the complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    basis: ExactMatrix,
    pivots: Vec<usize>,
    complement: Vec<usize>,
}

impl Quotient {
    pub fn new(subspace: &ExactMatrix) -> Self {
        let basis = subspace.column_span();
        let pivots = basis.column_pivots();
        let complement = (0..basis.rows()).filter(|i| !pivots.contains(i)).collect();
        Self {
            basis,
            pivots,
            complement,
        }
    }

    pub fn subspace(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Ambient rows used as the complement basis.
    pub fn complement_indices(&self) -> &[usize] {
        &self.complement
    }

    /// Projection matrix `(N − k) × N`.
    pub fn projection(&self) -> ExactMatrix {
        let field = self.basis.field();
        let n = self.ambient_dim();
        let mut p = ExactMatrix::zeros(field, self.dim(), n);
        for (row, &c) in self.complement.iter().enumerate() {
            p.set(row, c, field.one());
        }
        // kill the pivot rows: v ↦ v − Σ v[p_j]·b_j, then read complement rows
        for (j, &pr) in self.pivots.iter().enumerate() {
            for (row, &c) in self.complement.iter().enumerate() {
                let b = self.basis.get(c, j);
                if !b.is_zero() {
                    p.set(row, pr, -b);
                }
            }
        }
        p
    }

    /// Coordinates of the columns of `v` modulo the subspace.
    pub fn reduce(&self, v: &ExactMatrix) -> Result<ExactMatrix> {
        self.projection().mul(v)
    }

    /// Lifting matrix `N × (N − k)` sending quotient coordinates to the
    /// complement unit vectors.
    pub fn lift(&self) -> ExactMatrix {
        let field = self.basis.field();
        let mut l = ExactMatrix::zeros(field, self.ambient_dim(), self.dim());
        for (col, &c) in self.complement.iter().enumerate() {
            l.set(c, col, field.one());
        }
        l
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixLiteral {
    field: String,
    rows: Vec<Vec<String>>,
}

impl ExactMatrix {
    /// Parses the JSON matrix literal `{"field": ..., "rows": [[...], ...]}`.
    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        let lit: MatrixLiteral =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let field: FieldSpec = lit.field.parse()?;
        Self::parse_rows(field, &lit.rows)
    }

    pub fn parse_rows(field: FieldSpec, rows: &[Vec<String>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, rows)
    }

    pub fn rows_as_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixLiteral {
            field: self.field.to_string(),
            rows: self.rows_as_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lit = MatrixLiteral::deserialize(d)?;
        let field: FieldSpec = lit.field.parse().map_err(serde::de::Error::custom)?;
        Self::parse_rows(field, &lit.rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn reduced_form_examples() {
        let id = ExactMatrix::identity(f(5), 2);
        let rf = id.reduced_form();
        assert_eq!((rf.matrix.clone(), rf.rank, rf.pivots.clone()), (id, 2, vec![0, 1]));

        let q = FieldSpec::rationals();
        let m = ExactMatrix::from_ints(q, &[[1, 2], [2, 4]]);
        let rf = m.reduced_form();
        assert_eq!((rf.rank, rf.pivots), (1, vec![0]));

        let swap = ExactMatrix::from_ints(f(3), &[[0, 1], [1, 0]]);
        let rf = swap.reduced_form();
        assert_eq!(rf.matrix, ExactMatrix::identity(f(3), 2));
        assert_eq!(rf.rank, 2);
    }

    #[test]
    fn kernel_examples() {
        let id = ExactMatrix::identity(f(3), 3);
        assert_eq!(id.kernel_basis().cols(), 0);
        let z = ExactMatrix::zeros(FieldSpec::rationals(), 2, 3);
        assert_eq!(z.kernel_basis().cols(), 3);
        let m = ExactMatrix::from_ints(f(3), &[[1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn intersection_examples() {
        let q = FieldSpec::rationals();
        let e = |i: usize| {
            let mut v = vec![q.zero(); 3];
            v[i] = q.one();
            v
        };
        let a = ExactMatrix::from_columns(q, 3, &[e(0), e(1)]).unwrap();
        let b = ExactMatrix::from_columns(q, 3, &[e(1), e(2)]).unwrap();
        let i = ExactMatrix::intersect_spans(&a, &b).unwrap();
        assert_eq!(i, ExactMatrix::from_columns(q, 3, &[e(1)]).unwrap());
        let x = ExactMatrix::intersect_spans(&a, &a).unwrap();
        assert!(x.same_span(&a).unwrap());
        let c = ExactMatrix::from_columns(q, 3, &[e(0)]).unwrap();
        let d = ExactMatrix::from_columns(q, 3, &[e(1)]).unwrap();
        assert_eq!(ExactMatrix::intersect_spans(&c, &d).unwrap().cols(), 0);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = ExactMatrix::identity(f(3), 2);
        let b = ExactMatrix::identity(f(5), 2);
        assert_eq!(a.mul(&b), Err(Error::FieldMismatch));
        assert_eq!(ExactMatrix::intersect_spans(&a, &b), Err(Error::FieldMismatch));
        let rows = vec![vec![f(3).one(), f(5).one()]];
        assert_eq!(ExactMatrix::from_rows(f(3), rows), Err(Error::FieldMismatch));
    }

    #[test]
    fn det_inverse_solve() {
        let q = FieldSpec::rationals();
        let m = ExactMatrix::from_ints(q, &[[2, 1], [1, 1]]);
        assert_eq!(m.det().unwrap(), q.int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(q, 2));
        let b = ExactMatrix::from_ints(q, &[[3], [2]]);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul(&x).unwrap(), b);
        let sing = ExactMatrix::from_ints(q, &[[1, 2], [2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&ExactMatrix::from_ints(q, &[[1], [0]])).unwrap().is_none());
    }

    #[test]
    fn quotient_coordinates() {
        let q = FieldSpec::rationals();
        let s = ExactMatrix::from_ints(q, &[[1], [1], [0]]);
        let quo = Quotient::new(&s);
        assert_eq!(quo.dim(), 2);
        assert!(quo.reduce(&s).unwrap().is_zero());
        let v = ExactMatrix::from_ints(q, &[[0], [1], [0]]);
        assert!(!quo.reduce(&v).unwrap().is_zero());
        // lifting then reducing is the identity on quotient coordinates
        let back = quo.projection().mul(&quo.lift()).unwrap();
        assert_eq!(back, ExactMatrix::identity(q, 2));
    }

    #[test]
    fn json_literal() {
        let text = r#"{"field": "q", "rows": [["1/2","0"],["3","-1"]]}"#;
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        let m = ExactMatrix::from_json_value(&v).unwrap();
        assert_eq!(m.get(0, 0).to_string(), "1/2");
        let back = serde_json::to_value(&m).unwrap();
        assert_eq!(ExactMatrix::from_json_value(&back).unwrap(), m);
        let text = r#"{"field": "fp:5", "rows": [["7","-1"]]}"#;
        let m: ExactMatrix = serde_json::from_str(text).unwrap();
        assert_eq!(m.rows_as_strings(), vec![vec!["2".to_string(), "4".to_string()]]);
    }
}
