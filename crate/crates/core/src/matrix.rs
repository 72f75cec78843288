//! Dense complex matrices and vectors.
//!
//! Vectors are columns. The inner product is `⟨z, w⟩ = w* z`, linear in the
//! first argument and conjugate-linear in the second.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `e^{iθ}`
pub fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

/// `⟨z, w⟩ = w* z`
pub fn inner(z: &CVector, w: &CVector) -> C64 {
    w.dotc(z)
}

/// Dense matrix with finite complex entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from a row-major entry buffer.
    pub fn from_row_major(n_rows: usize, n_cols: usize, entries: Vec<C64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != n_rows * n_cols {
            return Err(Error::EntryCount {
                expected: n_rows * n_cols,
                found: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_iterator(n_rows, n_cols, entries))
    }

    /// Real matrix given by rows; convenient for fixtures.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_row_major(n_rows, n_cols, entries)
    }

    pub fn from_dmatrix(data: DMatrix<C64>) -> Result<Self> {
        for j in 0..data.ncols() {
            for i in 0..data.nrows() {
                let z = data[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { data })
    }

    /// Wraps an already-validated buffer produced by arithmetic on valid matrices.
    pub(crate) fn wrap(data: DMatrix<C64>) -> Self {
        Self { data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::wrap(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::wrap(DMatrix::identity(n, n))
    }

    pub fn diagonal(values: &[C64]) -> Self {
        Self::wrap(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    /// The 2x2 nilpotent shift `[[0, 1], [0, 0]]`.
    pub fn shift() -> Self {
        let mut j = DMatrix::zeros(2, 2);
        j[(0, 1)] = ONE;
        Self::wrap(j)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, columns: &[CVector]) -> Self {
        let mut m = DMatrix::zeros(n_rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            m.set_column(j, c);
        }
        Self::wrap(m)
    }

    pub fn n_rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows() == self.n_cols()
    }

    /// Order of a square matrix; errors otherwise.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.n_rows())
        } else {
            Err(Error::NotSquare {
                rows: self.n_rows(),
                cols: self.n_cols(),
            })
        }
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn column(&self, j: usize) -> CVector {
        self.data.column(j).into_owned()
    }

    pub fn columns(&self) -> Vec<CVector> {
        (0..self.n_cols()).map(|j| self.column(j)).collect()
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        self.data.transpose().as_slice().to_vec()
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.data.adjoint())
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self::wrap(&self.data * alpha)
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        self.scale(C64::new(alpha, 0.0))
    }

    pub fn apply(&self, z: &CVector) -> CVector {
        &self.data * z
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Block-diagonal `self ⊕ other`. Either block may be empty (0x0).
    pub fn direct_sum(&self, other: &ComplexMatrix) -> Self {
        let (r1, c1) = self.data.shape();
        let (r2, c2) = other.data.shape();
        let mut m = DMatrix::zeros(r1 + r2, c1 + c2);
        m.view_mut((0, 0), (r1, c1)).copy_from(&self.data);
        m.view_mut((r1, c1), (r2, c2)).copy_from(&other.data);
        Self::wrap(m)
    }

    /// Unitary similarity `Q self Q*`.
    pub fn conjugate_by(&self, q: &ComplexMatrix) -> Self {
        Self::wrap(&q.data * &self.data * q.data.adjoint())
    }

    /// Square submatrix starting at (`start`, `start`) of order `size`.
    pub fn principal_block(&self, start: usize, size: usize) -> Self {
        Self::wrap(self.data.view((start, start), (size, size)).into_owned())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.n_rows(), self.n_cols())?;
        for i in 0..self.n_rows() {
            write!(f, "  ")?;
            for j in 0..self.n_cols() {
                let z = self.data[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.data * &rhs.data)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.data + &rhs.data)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.data - &rhs.data)
    }
}
