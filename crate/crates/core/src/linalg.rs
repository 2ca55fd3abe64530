//! Dense complex linear algebra with an explicit tolerance policy.
//!
//! Every rank decision in the crate goes through [`rank_nullspace`] or the
//! [`Subspace`] constructors, which count singular values above
//! `tol * max(1, sigma_max)`. Decompositions come from faer. Nothing here keeps a global epsilon: callers thread
//! `tol` through.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default relative tolerance for rank decisions and defect checks.
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A finite-entried dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(CMatrix(m))
        } else {
            Err(Error::InvalidMatrix("non-finite entry".into()))
        }
    }

    /// Row-major constructor, checked against `rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }
}

impl std::ops::Deref for CMatrix {
    type Target = DMatrix<C64>;
    fn deref(&self) -> &DMatrix<C64> {
        &self.0
    }
}

fn check_finite(m: &DMatrix<C64>) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidMatrix("non-finite entry".into()))
    }
}

fn to_faer(m: &DMatrix<C64>) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD `m = U S V^H`: singular values in descending order, square `U`
/// and `V`.
struct Svd {
    s: Vec<f64>,
    u: DMatrix<C64>,
    v: DMatrix<C64>,
}

fn svd(m: &DMatrix<C64>) -> Result<Svd> {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(Svd {
            s: Vec::new(),
            u: DMatrix::identity(r, r),
            v: DMatrix::identity(c, c),
        });
    }
    let f = to_faer(m)
        .svd()
        .map_err(|e| Error::InvalidMatrix(format!("SVD failed: {e:?}")))?;
    let diag = f.S().column_vector();
    Ok(Svd {
        s: (0..r.min(c)).map(|i| diag[i].re).collect(),
        u: from_faer(f.U()),
        v: from_faer(f.V()),
    })
}

/// Eigenvalues of a square matrix.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape("eigenvalues of a non-square matrix".into()));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    check_finite(m)?;
    to_faer(m)
        .eigenvalues()
        .map_err(|e| Error::InvalidMatrix(format!("eigenvalues failed: {e:?}")))
}

fn threshold(s: &[f64], tol: f64) -> f64 {
    tol * s.iter().cloned().fold(0.0, f64::max).max(1.0)
}

/// Orthonormal basis of the column space of `m` (columns of `U` whose
/// singular value exceeds `tol * max(1, sigma_max)`).
fn column_space(m: &DMatrix<C64>, tol: f64) -> Result<DMatrix<C64>> {
    let d = svd(m)?;
    let t = threshold(&d.s, tol);
    let keep: Vec<usize> = (0..d.s.len()).filter(|&i| d.s[i] > t).collect();
    let mut out = DMatrix::zeros(m.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &d.u.column(i));
    }
    Ok(out)
}

/// Numerical rank and kernel of `m`.
///
/// Rank counts singular values above `tol * max(1, sigma_max)`, so entries
/// at round-off level of an O(1) problem count as zero; the kernel is spanned
/// by the remaining right-singular vectors, so `rank + dim(null) = cols`.
pub fn rank_nullspace(m: &DMatrix<C64>, tol: f64) -> Result<(usize, Subspace)> {
    check_finite(m)?;
    let cols = m.ncols();
    let d = svd(m)?;
    let t = threshold(&d.s, tol);
    let rank = d.s.iter().filter(|&&s| s > t).count();
    let basis = d.v.columns(rank, cols - rank).into_owned();
    Ok((rank, Subspace::from_orthonormal(basis, tol)))
}

pub fn rank(m: &DMatrix<C64>, tol: f64) -> Result<usize> {
    check_finite(m)?;
    let d = svd(m)?;
    let t = threshold(&d.s, tol);
    Ok(d.s.iter().filter(|&&s| s > t).count())
}

/// Least-norm solution of `a x = b`, rejected when the residual exceeds
/// `tol * (1 + |b|)`.
pub fn solve_affine(a: &DMatrix<C64>, b: &DVector<C64>, tol: f64) -> Result<DVector<C64>> {
    if a.nrows() != b.len() {
        return Err(Error::Shape(format!(
            "system has {} rows but right-hand side has length {}",
            a.nrows(),
            b.len()
        )));
    }
    check_finite(a)?;
    let bound = tol * (1.0 + b.norm());
    if a.ncols() == 0 || a.nrows() == 0 {
        let x = DVector::zeros(a.ncols());
        let residual = b.norm();
        return if residual <= bound {
            Ok(x)
        } else {
            Err(Error::Unsolvable { residual, bound })
        };
    }
    let d = svd(a)?;
    let t = threshold(&d.s, tol);
    let mut x = DVector::zeros(a.ncols());
    for (i, &si) in d.s.iter().enumerate() {
        if si > t {
            let coef = d.u.column(i).dotc(b) / si;
            x += d.v.column(i) * coef;
        }
    }
    let residual = (a * &x - b).norm();
    if residual <= bound {
        Ok(x)
    } else {
        Err(Error::Unsolvable { residual, bound })
    }
}

/// The matrix of a linear map given as a closure, built column by column
/// from the images of the unit vectors.
pub fn operator_matrix<F>(n_in: usize, n_out: usize, f: F) -> DMatrix<C64>
where
    F: Fn(&DVector<C64>) -> DVector<C64>,
{
    let mut m = DMatrix::zeros(n_out, n_in);
    for j in 0..n_in {
        let mut e = DVector::zeros(n_in);
        e[j] = re(1.0);
        let col = f(&e);
        debug_assert_eq!(col.len(), n_out);
        m.set_column(j, &col);
    }
    m
}

/// Kernel of the linear map given by `f`, a convenience for solution spaces
/// of homogeneous constraint systems.
pub fn kernel_of<F>(n_in: usize, n_out: usize, f: F, tol: f64) -> Result<Subspace>
where
    F: Fn(&DVector<C64>) -> DVector<C64>,
{
    if n_out == 0 {
        return Ok(Subspace::full(n_in, tol));
    }
    Ok(rank_nullspace(&operator_matrix(n_in, n_out, f), tol)?.1)
}

pub fn max_abs(v: impl IntoIterator<Item = C64>) -> f64 {
    v.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A linear subspace of `C^n`, stored as an orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: DMatrix<C64>,
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersect,
}

impl Subspace {
    fn from_orthonormal(basis: DMatrix<C64>, tol: f64) -> Self {
        Subspace {
            ambient_dim: basis.nrows(),
            basis,
            tol,
        }
    }

    pub fn zero(ambient_dim: usize, tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: DMatrix::zeros(ambient_dim, 0),
            tol,
        }
    }

    pub fn full(ambient_dim: usize, tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: DMatrix::identity(ambient_dim, ambient_dim),
            tol,
        }
    }

    /// Span of the columns of `m`.
    pub fn column_span(m: &DMatrix<C64>, tol: f64) -> Result<Self> {
        check_finite(m)?;
        Ok(Subspace {
            ambient_dim: m.nrows(),
            basis: column_space(m, tol)?,
            tol,
        })
    }

    pub fn span(ambient_dim: usize, vectors: &[DVector<C64>], tol: f64) -> Result<Self> {
        let mut m = DMatrix::zeros(ambient_dim, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(Error::Shape(format!(
                    "vector of length {} in ambient dimension {ambient_dim}",
                    v.len()
                )));
            }
            m.set_column(j, v);
        }
        Self::column_span(&m, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<DVector<C64>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn projector(&self) -> DMatrix<C64> {
        &self.basis * self.basis.adjoint()
    }

    pub fn project(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &DVector<C64>) -> f64 {
        (v - self.project(v)).norm()
    }

    pub fn contains_vector(&self, v: &DVector<C64>) -> bool {
        self.residual(v) <= self.tol * (1.0 + v.norm())
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::Shape(format!(
                "ambient dimensions {} and {} differ",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.vectors().iter().all(|v| self.contains_vector(v)))
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains(other)?)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut m = DMatrix::zeros(self.ambient_dim, self.dim() + other.dim());
        m.view_mut((0, 0), (self.ambient_dim, self.dim()))
            .copy_from(&self.basis);
        m.view_mut((0, self.dim()), (self.ambient_dim, other.dim()))
            .copy_from(&other.basis);
        Subspace::column_span(&m, self.tol.max(other.tol))
    }

    /// Intersection as the kernel of the stacked complementary projectors.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        let id = DMatrix::<C64>::identity(n, n);
        let mut stacked = DMatrix::zeros(2 * n, n);
        stacked
            .view_mut((0, 0), (n, n))
            .copy_from(&(&id - self.projector()));
        stacked
            .view_mut((n, 0), (n, n))
            .copy_from(&(&id - other.projector()));
        let (_, null) = rank_nullspace(&stacked, self.tol.max(other.tol))?;
        Ok(null)
    }

    pub fn combine(&self, op: SubspaceOp, other: &Subspace) -> Result<Subspace> {
        match op {
            SubspaceOp::Sum => self.sum(other),
            SubspaceOp::Intersect => self.intersect(other),
        }
    }

    pub fn orthogonal_complement(&self) -> Result<Subspace> {
        let n = self.ambient_dim;
        let k = self.dim();
        let d = svd(&self.basis)?;
        Ok(Subspace {
            ambient_dim: n,
            basis: d.u.columns(k, n - k).into_owned(),
            tol: self.tol,
        })
    }

    /// Image under a linear map `m` (rows = new ambient dimension).
    pub fn image(&self, m: &DMatrix<C64>) -> Result<Subspace> {
        if m.ncols() != self.ambient_dim {
            return Err(Error::Shape(format!(
                "map with {} columns applied in ambient dimension {}",
                m.ncols(),
                self.ambient_dim
            )));
        }
        Subspace::column_span(&(m * &self.basis), self.tol)
    }
}

/// The `r x c` matrix whose column-major flattening is `v`.
pub fn unflatten(v: &DVector<C64>, r: usize, c: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(r, c, v.as_slice())
}

pub fn flatten(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

/// Concatenation of the column-major flattenings of `ms`.
pub fn stack(ms: &[DMatrix<C64>]) -> DVector<C64> {
    let n = ms.iter().map(|m| m.len()).sum();
    let mut v = DVector::zeros(n);
    let mut at = 0;
    for m in ms {
        v.rows_mut(at, m.len()).copy_from_slice(m.as_slice());
        at += m.len();
    }
    v
}
