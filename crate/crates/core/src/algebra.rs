//! Associative unital algebras given by structure constants on a basis.

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, c, max_abs_vec, Matrix, SubspaceBasis, Vector, C64, TAU_ALG};

/// Structure constants `e_i e_j = Σ_k m[i][j][k] e_k` plus a unit vector.
#[derive(Clone, Debug)]
pub struct Algebra {
    dim: usize,
    mult: Vec<C64>,
    sparse: Vec<Vec<(usize, C64)>>,
    unit: Vector,
    labels: Vec<String>,
}

fn sparsify(dim: usize, mult: &[C64]) -> Vec<Vec<(usize, C64)>> {
    (0..dim * dim)
        .map(|ij| {
            (0..dim)
                .filter_map(|k| {
                    let v = mult[ij * dim + k];
                    (v.norm() > 0.0).then_some((k, v))
                })
                .collect()
        })
        .collect()
}

impl Algebra {
    /// `mult` is laid out as `[(i * dim + j) * dim + k]`.
    pub fn new(dim: usize, mult: Vec<C64>, unit: Vector, labels: Vec<String>) -> Self {
        assert_eq!(mult.len(), dim * dim * dim, "structure tensor size");
        assert_eq!(unit.len(), dim, "unit size");
        assert_eq!(labels.len(), dim, "label count");
        let sparse = sparsify(dim, &mult);
        Algebra {
            dim,
            mult,
            sparse,
            unit,
            labels,
        }
    }

    /// Builds an algebra from a closure giving the product of two basis
    /// elements as a list of `(k, coefficient)`.
    pub fn from_products<F>(dim: usize, unit: Vector, labels: Vec<String>, product: F) -> Self
    where
        F: Fn(usize, usize) -> Vec<(usize, C64)>,
    {
        let mut mult = vec![C64::new(0.0, 0.0); dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                for (k, v) in product(i, j) {
                    mult[(i * dim + j) * dim + k] += v;
                }
            }
        }
        Algebra::new(dim, mult, unit, labels)
    }

    /// The subalgebra spanned by `sub`, in the coordinates of its orthonormal
    /// basis. Fails if the span is not closed under multiplication or misses 1.
    pub fn from_subspace(parent: &Algebra, sub: &SubspaceBasis) -> Result<Self> {
        let n = sub.dim();
        let unit = sub.coords(parent.unit());
        if !sub.contains(parent.unit(), TAU_ALG) {
            return Err(Error::Consistency("subspace does not contain 1".into()));
        }
        let mut mult = vec![C64::new(0.0, 0.0); n * n * n];
        for i in 0..n {
            let qi = sub.vector(i);
            for j in 0..n {
                let p = parent.mul(&qi, &sub.vector(j));
                if !sub.contains(&p, TAU_ALG) {
                    return Err(Error::Consistency("subspace is not multiplicatively closed".into()));
                }
                let coords = sub.coords(&p);
                for k in 0..n {
                    mult[(i * n + j) * n + k] = coords[k];
                }
            }
        }
        let labels = (0..n).map(|i| format!("q{i}")).collect();
        Ok(Algebra::new(n, mult, unit, labels))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> C64 {
        self.mult[(i * self.dim + j) * self.dim + k]
    }

    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, v: C64) {
        self.mult[(i * self.dim + j) * self.dim + k] = v;
        self.sparse = sparsify(self.dim, &self.mult);
    }

    /// Nonzero terms of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, C64)] {
        &self.sparse[i * self.dim + j]
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.norm() == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.norm() == 0.0 {
                    continue;
                }
                let s = xi * yj;
                for &(k, v) in self.basis_product(i, j) {
                    out[k] += s * v;
                }
            }
        }
        out
    }

    pub fn basis(&self, i: usize) -> Vector {
        basis_vector(self.dim, i)
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mult_matrix(&self, x: &Vector) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (i, xi) in x.iter().enumerate() {
                if xi.norm() == 0.0 {
                    continue;
                }
                for &(k, v) in self.basis_product(i, j) {
                    m[(k, j)] += xi * v;
                }
            }
        }
        m
    }

    /// Trace of left multiplication.
    pub fn regular_trace(&self, x: &Vector) -> C64 {
        let mut t = c(0.0);
        for (i, xi) in x.iter().enumerate() {
            if xi.norm() == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                t += xi * self.structure_constant(i, j, j);
            }
        }
        t
    }

    pub fn pow(&self, x: &Vector, n: usize) -> Vector {
        let mut out = self.unit.clone();
        for _ in 0..n {
            out = self.mul(&out, x);
        }
        out
    }

    /// Max residual of associativity over all basis triples.
    pub fn associativity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let mut diff = Vector::zeros(n);
                    for &(p, v) in ij {
                        for &(q, w) in self.basis_product(p, k) {
                            diff[q] += v * w;
                        }
                    }
                    for &(p, v) in self.basis_product(j, k) {
                        for &(q, w) in self.basis_product(i, p) {
                            diff[q] -= v * w;
                        }
                    }
                    worst = worst.max(max_abs_vec(&diff));
                }
            }
        }
        worst
    }

    /// Max residual of `1·e_i = e_i = e_i·1`.
    pub fn unit_residual(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let e = self.basis(i);
                max_abs_vec(&(self.mul(&self.unit, &e) - &e))
                    .max(max_abs_vec(&(self.mul(&e, &self.unit) - &e)))
            })
            .fold(0.0, f64::max)
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                (0..self.dim).all(|k| {
                    (self.structure_constant(i, j, k) - self.structure_constant(j, i, k)).norm()
                        < tol
                })
            })
        })
    }
}
