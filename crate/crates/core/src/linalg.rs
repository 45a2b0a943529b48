//! Dense complex linear algebra used throughout: ranks, kernels, orthonormal
//! spans and the subspace calculus for subalgebras and subcoalgebras.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Vector = DVector<C64>;
pub type Matrix = DMatrix<C64>;

/// Tolerance for subspace membership and axiom residuals.
pub const TAU_ALG: f64 = 1e-8;
/// Tolerance for rounding multiplicities to integers.
pub const TAU_INT: f64 = 1e-6;
/// Relative cutoff below which a singular value counts as zero.
pub const RANK_TOL: f64 = 1e-7;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = c(1.0);
    v
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &Vector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Pivoted Gram–Schmidt with one reorthogonalization pass. Columns whose
/// remaining norm falls below `RANK_TOL · max(1, largest column norm)` are
/// dropped.
fn pivoted_orthonormalize(m: &Matrix) -> Matrix {
    let n = m.nrows();
    let mut rest: Vec<Vector> = (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
    let scale = rest.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let tol = RANK_TOL * scale;
    let mut q: Vec<Vector> = Vec::new();
    while q.len() < n {
        let (best, norm) = rest
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.norm()))
            .fold((usize::MAX, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == usize::MAX || norm <= tol {
            break;
        }
        let mut v = rest.swap_remove(best);
        for u in &q {
            let proj = u.dotc(&v);
            v -= u * proj;
        }
        let vn = v.norm();
        if vn <= tol {
            continue;
        }
        v /= C64::new(vn, 0.0);
        for r in rest.iter_mut() {
            let proj = v.dotc(r);
            *r -= &v * proj;
        }
        q.push(v);
    }
    let mut out = Matrix::zeros(n, q.len());
    for (j, v) in q.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &Matrix) -> Matrix {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Matrix::zeros(m.nrows(), 0);
    }
    pivoted_orthonormalize(m)
}

pub fn rank(m: &Matrix) -> usize {
    column_space(m).ncols()
}

/// Orthonormal completion of orthonormal columns `q` to the whole space,
/// returning only the new vectors.
fn orthogonal_completion(q: &Matrix) -> Matrix {
    let n = q.nrows();
    let mut basis: Vec<Vector> = (0..q.ncols()).map(|j| q.column(j).into_owned()).collect();
    let mut extra = Vec::new();
    for i in 0..n {
        let mut v = Vector::zeros(n);
        v[i] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for u in basis.iter() {
                let proj = u.dotc(&v);
                v -= u * proj;
            }
        }
        let vn = v.norm();
        // Skipped vectors carry less than a quarter of the missing trace, so
        // some later unit vector always clears this cutoff.
        if vn > 0.5 / (n as f64).sqrt() {
            v /= C64::new(vn, 0.0);
            basis.push(v.clone());
            extra.push(v);
        }
        if basis.len() == n {
            break;
        }
    }
    let mut out = Matrix::zeros(n, extra.len());
    for (j, v) in extra.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn nullspace(m: &Matrix) -> Matrix {
    let n = m.ncols();
    if m.nrows() == 0 {
        return Matrix::identity(n, n);
    }
    orthogonal_completion(&column_space(&m.adjoint()))
}

/// Solves `m x = rhs` for a square nonsingular `m`.
pub fn solve(m: &Matrix, rhs: &Matrix) -> Option<Matrix> {
    m.clone().lu().solve(rhs)
}

/// Least-squares coordinates of `v` against the columns of a full-rank `basis`,
/// together with the residual norm.
pub fn coordinates(basis: &Matrix, v: &Vector) -> (Vector, f64) {
    let gram = basis.adjoint() * basis;
    let rhs = basis.adjoint() * v;
    let x = gram
        .lu()
        .solve(&rhs)
        .unwrap_or_else(|| Vector::zeros(basis.ncols()));
    let res = max_abs_vec(&(basis * &x - v));
    (x, res)
}

/// Eigenvalues of a square complex matrix via the Schur form.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<C64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().cloned().collect())
        .ok_or_else(|| Error::NumericDegeneracy("Schur iteration did not converge".into()))
}

/// Smallest pairwise distance between values; infinite for fewer than two.
pub fn min_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Rounds to the given quantum and clears negative zeros, for display and
/// canonical ordering.
pub fn round_to(x: f64, quantum: f64) -> f64 {
    // Dividing by the integer scale gives the correctly rounded decimal.
    let scale = (1.0 / quantum).round();
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A subspace of a coordinate space, stored as an orthonormal column basis.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    basis: Matrix,
}

impl SubspaceBasis {
    pub fn from_columns(spanning: &Matrix) -> Self {
        SubspaceBasis {
            basis: column_space(spanning),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vector]) -> Self {
        let mut m = Matrix::zeros(ambient, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        Self::from_columns(&m)
    }

    pub fn zero(ambient: usize) -> Self {
        SubspaceBasis {
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceBasis {
            basis: Matrix::identity(ambient, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthonormal basis vectors as columns.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vector(&self, j: usize) -> Vector {
        self.basis.column(j).into_owned()
    }

    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.adjoint()
    }

    /// Coordinates of a vector of the subspace in the orthonormal basis.
    pub fn coords(&self, v: &Vector) -> Vector {
        self.basis.adjoint() * v
    }

    pub fn residual(&self, v: &Vector) -> f64 {
        max_abs_vec(&(v - &self.basis * (self.basis.adjoint() * v)))
    }

    pub fn contains(&self, v: &Vector, tol: f64) -> bool {
        self.residual(v) < tol
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis, tol: f64) -> bool {
        (0..other.dim()).all(|j| self.contains(&other.vector(j), tol))
    }

    pub fn same_as(&self, other: &SubspaceBasis, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other, tol)
    }

    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let mut m = Matrix::zeros(self.ambient(), self.dim() + other.dim());
        m.view_mut((0, 0), (self.ambient(), self.dim()))
            .copy_from(&self.basis);
        m.view_mut((0, self.dim()), (self.ambient(), other.dim()))
            .copy_from(&other.basis);
        SubspaceBasis::from_columns(&m)
    }

    pub fn intersection_dim(&self, other: &SubspaceBasis) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> SubspaceBasis {
        SubspaceBasis {
            basis: nullspace(&self.basis.adjoint()),
        }
    }
}
