//! Semisimple decomposition of structure-constant algebras: central primitive
//! idempotents, irreducible characters, multiplicities, restriction,
//! induction and explicit irreducible modules.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{
    c, coordinates, eigenvalues, max_abs_vec, min_gap, nullspace, rank, round_to, Matrix,
    SubspaceBasis, Vector, C64, TAU_ALG, TAU_INT,
};

pub const DEFAULT_SEED: u64 = 0x00C1_1FF0_4D00;
const MAX_RETRIES: usize = 24;
/// Largest acceptable condition number of the regular trace form.
const TRACE_FORM_CONDITION: f64 = 1e8;

/// A linear functional on an algebra, by its values on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    values: Vector,
    degree: C64,
}

impl Character {
    pub fn new(values: Vector, alg: &Algebra) -> Self {
        let degree = values.dot(alg.unit());
        Character { values, degree }
    }

    pub fn from_parts(values: Vector, degree: C64) -> Self {
        Character { values, degree }
    }

    pub fn values(&self) -> &Vector {
        &self.values
    }

    /// Value at the unit.
    pub fn degree(&self) -> C64 {
        self.degree
    }

    pub fn degree_real(&self) -> f64 {
        self.degree.re
    }

    pub fn eval(&self, x: &Vector) -> C64 {
        self.values.dot(x)
    }

    pub fn zero(dim: usize) -> Self {
        Character {
            values: Vector::zeros(dim),
            degree: c(0.0),
        }
    }

    /// Max entrywise distance between value vectors.
    pub fn distance(&self, other: &Character) -> f64 {
        max_abs_vec(&(&self.values - &other.values))
    }
}

impl Add for &Character {
    type Output = Character;
    fn add(self, rhs: &Character) -> Character {
        Character {
            values: &self.values + &rhs.values,
            degree: self.degree + rhs.degree,
        }
    }
}

impl Sub for &Character {
    type Output = Character;
    fn sub(self, rhs: &Character) -> Character {
        Character {
            values: &self.values - &rhs.values,
            degree: self.degree - rhs.degree,
        }
    }
}

impl Mul<f64> for &Character {
    type Output = Character;
    fn mul(self, s: f64) -> Character {
        Character {
            values: &self.values * c(s),
            degree: self.degree * s,
        }
    }
}

/// Artin–Wedderburn data of a semisimple algebra, in canonical order.
#[derive(Clone, Debug)]
pub struct SemisimpleDecomposition {
    pub idempotents: Vec<Vector>,
    pub dims: Vec<usize>,
    pub irr: Vec<Character>,
}

impl SemisimpleDecomposition {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Lagrange spectral projector: `Π_{j≠i} (x − λ_j u) / (λ_i − λ_j)` where `u`
/// is the relevant unit.
fn lagrange_projector(alg: &Algebra, x: &Vector, unit: &Vector, roots: &[C64], i: usize) -> Vector {
    let mut p = unit.clone();
    for (j, &lj) in roots.iter().enumerate() {
        if j == i {
            continue;
        }
        let factor = (x - unit * lj) / (roots[i] - lj);
        p = alg.mul(&p, &factor);
    }
    p
}

fn canonical_order(a: &(usize, Character), b: &(usize, Character)) -> Ordering {
    a.0.cmp(&b.0).then_with(|| {
        for (x, y) in a.1.values().iter().zip(b.1.values().iter()) {
            let (xr, yr) = (round_to(x.re, 1e-6), round_to(y.re, 1e-6));
            if xr != yr {
                return yr.partial_cmp(&xr).unwrap_or(Ordering::Equal);
            }
            let (xi, yi) = (round_to(x.im, 1e-6), round_to(y.im, 1e-6));
            if xi != yi {
                return yi.partial_cmp(&xi).unwrap_or(Ordering::Equal);
            }
        }
        Ordering::Equal
    })
}

/// Checks semisimplicity through the regular trace form.
pub fn check_semisimple(alg: &Algebra) -> Result<()> {
    let n = alg.dim();
    let traces: Vec<C64> = (0..n).map(|k| alg.regular_trace(&alg.basis(k))).collect();
    let mut form = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            form[(i, j)] = alg
                .basis_product(i, j)
                .iter()
                .map(|&(k, v)| v * traces[k])
                .sum();
        }
    }
    let sv = form.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smin <= 0.0 || smax / smin > TRACE_FORM_CONDITION {
        return Err(Error::NotSemisimple(format!(
            "trace form condition number {:.3e}",
            if smin > 0.0 { smax / smin } else { f64::INFINITY }
        )));
    }
    Ok(())
}

/// Orthonormal basis of the center.
pub fn center(alg: &Algebra) -> SubspaceBasis {
    let n = alg.dim();
    let mut m = Matrix::zeros(n * n, n);
    for k in 0..n {
        for j in 0..n {
            for &(o, v) in alg.basis_product(k, j) {
                m[(k * n + o, j)] += v;
            }
            for &(o, v) in alg.basis_product(j, k) {
                m[(k * n + o, j)] -= v;
            }
        }
    }
    SubspaceBasis::from_columns(&nullspace(&m))
}

/// Splits the center with a seeded random central element and reads off
/// block sizes and irreducible characters.
pub fn wedderburn(alg: &Algebra, seed: u64) -> Result<SemisimpleDecomposition> {
    check_semisimple(alg)?;
    let n = alg.dim();
    let z_basis = center(alg);
    let r = z_basis.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idempotents = if r == 1 {
        vec![alg.unit().clone()]
    } else {
        let mut found = None;
        for _ in 0..MAX_RETRIES {
            let coef = Vector::from_fn(r, |_, _| random_complex(&mut rng));
            let z = z_basis.basis() * coef;
            let restricted = z_basis.basis().adjoint() * alg.left_mult_matrix(&z) * z_basis.basis();
            let roots = eigenvalues(&restricted)?;
            let scale = roots.iter().map(|l| l.norm()).fold(1.0, f64::max);
            if min_gap(&roots) < 1e-4 * scale {
                continue;
            }
            let es: Vec<Vector> = (0..r)
                .map(|i| lagrange_projector(alg, &z, alg.unit(), &roots, i))
                .collect();
            found = Some(es);
            break;
        }
        found.ok_or_else(|| Error::NumericDegeneracy("central splitting kept colliding".into()))?
    };

    let traces: Vec<C64> = (0..n).map(|k| alg.regular_trace(&alg.basis(k))).collect();
    let mut blocks = Vec::with_capacity(r);
    for e in &idempotents {
        let t = alg.regular_trace(e);
        let nsq = t.re.round();
        let size = nsq.sqrt().round() as usize;
        if (t - c(nsq)).norm() > TAU_INT || size * size != nsq as usize || size == 0 {
            return Err(Error::NumericDegeneracy(format!(
                "block trace {t} is not a positive square"
            )));
        }
        let values = Vector::from_fn(n, |a, _| {
            let ae = alg.mul(&alg.basis(a), e);
            ae.iter().zip(traces.iter()).map(|(x, t)| x * t).sum::<C64>() / size as f64
        });
        blocks.push((size, Character::new(values, alg), e.clone()));
    }
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| {
        canonical_order(
            &(blocks[a].0, blocks[a].1.clone()),
            &(blocks[b].0, blocks[b].1.clone()),
        )
    });
    let dec = SemisimpleDecomposition {
        idempotents: order.iter().map(|&i| blocks[i].2.clone()).collect(),
        dims: order.iter().map(|&i| blocks[i].0).collect(),
        irr: order.iter().map(|&i| blocks[i].1.clone()).collect(),
    };
    verify_decomposition(alg, &dec)?;
    Ok(dec)
}

/// Orthogonality, completeness and dimension count of a decomposition.
pub fn verify_decomposition(alg: &Algebra, dec: &SemisimpleDecomposition) -> Result<()> {
    if dec.total_dim() != alg.dim() {
        return Err(Error::Consistency(format!(
            "Σ n_i² = {} ≠ dim {}",
            dec.total_dim(),
            alg.dim()
        )));
    }
    let mut sum = Vector::zeros(alg.dim());
    for (i, ei) in dec.idempotents.iter().enumerate() {
        sum += ei;
        for (j, ej) in dec.idempotents.iter().enumerate() {
            let p = alg.mul(ei, ej);
            let expect = if i == j { ei.clone() } else { Vector::zeros(alg.dim()) };
            if max_abs_vec(&(p - expect)) > TAU_ALG {
                return Err(Error::Consistency(format!("idempotents {i},{j} not orthogonal")));
            }
        }
    }
    if max_abs_vec(&(sum - alg.unit())) > TAU_ALG {
        return Err(Error::Consistency("idempotents do not sum to 1".into()));
    }
    Ok(())
}

pub fn regular_character(alg: &Algebra) -> Character {
    let values = Vector::from_fn(alg.dim(), |a, _| alg.regular_trace(&alg.basis(a)));
    Character::new(values, alg)
}

/// Multiplicities of each irreducible in `chi`, rounded to integers.
pub fn decompose(chi: &Character, dec: &SemisimpleDecomposition) -> Result<Vec<usize>> {
    let mut mults = Vec::with_capacity(dec.len());
    let mut rebuilt = Character::zero(chi.values().len());
    let tol = TAU_INT * chi.degree().norm().max(1.0);
    for (i, e) in dec.idempotents.iter().enumerate() {
        let m = chi.eval(e) / dec.dims[i] as f64;
        let r = m.re.round();
        if (m - c(r)).norm() > tol || r < 0.0 {
            return Err(Error::NotACharacter(format!(
                "coefficient {m} on irreducible {i}"
            )));
        }
        mults.push(r as usize);
        rebuilt = &rebuilt + &(&dec.irr[i] * r);
    }
    if chi.distance(&rebuilt) > tol {
        return Err(Error::NotACharacter(
            "functional is outside the span of the irreducible characters".into(),
        ));
    }
    Ok(mults)
}

pub fn multiplicity(chi: &Character, mu: &Character, dec: &SemisimpleDecomposition) -> Result<usize> {
    let a = decompose(chi, dec)?;
    let b = decompose(mu, dec)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x * y).sum())
}

/// Sum of `m_i · irr_i`.
pub fn compose(mults: &[usize], dec: &SemisimpleDecomposition) -> Character {
    let dim = dec.irr[0].values().len();
    mults
        .iter()
        .zip(&dec.irr)
        .fold(Character::zero(dim), |acc, (&m, chi)| &acc + &(chi * m as f64))
}

/// Pull back along an embedding whose columns are the images of the small
/// algebra's basis.
pub fn restrict_character(chi: &Character, embedding: &Matrix) -> Character {
    let values = embedding.transpose() * chi.values();
    Character::from_parts(values, chi.degree())
}

/// Induction by Frobenius reciprocity: `α↑ = Σ_χ m(α, χ↓) χ`.
pub fn induce_character(
    alpha: &Character,
    embedding: &Matrix,
    dec_small: &SemisimpleDecomposition,
    dec_big: &SemisimpleDecomposition,
) -> Result<Character> {
    let a = decompose(alpha, dec_small)?;
    let mut mults = Vec::with_capacity(dec_big.len());
    for chi in &dec_big.irr {
        let down = decompose(&restrict_character(chi, embedding), dec_small)?;
        mults.push(a.iter().zip(&down).map(|(x, y)| x * y).sum::<usize>());
    }
    let up = compose(&mults, dec_big);
    let index = dec_big.total_dim() as f64 / dec_small.total_dim() as f64;
    if (up.degree() - alpha.degree() * index).norm() > TAU_INT {
        return Err(Error::Consistency(format!(
            "induced degree {} ≠ index·deg = {}",
            up.degree(),
            alpha.degree() * index
        )));
    }
    Ok(up)
}

/// A module given by the action matrix of each basis element.
#[derive(Clone, Debug)]
pub struct ExplicitModule {
    pub dim: usize,
    pub matrices: Vec<Matrix>,
}

impl ExplicitModule {
    pub fn action(&self, x: &Vector) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (xi, a) in x.iter().zip(&self.matrices) {
            if xi.norm() > 0.0 {
                m += a * *xi;
            }
        }
        m
    }

    pub fn character(&self, alg: &Algebra) -> Character {
        let values = Vector::from_fn(self.matrices.len(), |a, _| self.matrices[a].trace());
        Character::new(values, alg)
    }

    /// Max residual of the multiplication table and unit action.
    pub fn residual(&self, alg: &Algebra) -> f64 {
        let n = alg.dim();
        let mut worst =
            crate::linalg::max_abs(&(self.action(alg.unit()) - Matrix::identity(self.dim, self.dim)));
        for i in 0..n {
            for j in 0..n {
                let lhs = &self.matrices[i] * &self.matrices[j];
                let mut rhs = Matrix::zeros(self.dim, self.dim);
                for &(k, v) in alg.basis_product(i, j) {
                    rhs += &self.matrices[k] * v;
                }
                worst = worst.max(crate::linalg::max_abs(&(lhs - rhs)));
            }
        }
        worst
    }
}

/// Realizes the `i`-th irreducible as the left ideal `A·p` for a primitive
/// idempotent `p` obtained by spectral splitting inside the block `A·e_i`.
pub fn construct_irreducible_module(
    alg: &Algebra,
    dec: &SemisimpleDecomposition,
    i: usize,
    seed: u64,
) -> Result<ExplicitModule> {
    let n = dec.dims[i];
    let chi = &dec.irr[i];
    if n == 1 {
        let matrices = (0..alg.dim())
            .map(|a| Matrix::from_element(1, 1, chi.values()[a]))
            .collect();
        return Ok(ExplicitModule { dim: 1, matrices });
    }
    let e = &dec.idempotents[i];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9));
    for _ in 0..MAX_RETRIES {
        let r = Vector::from_fn(alg.dim(), |_, _| random_complex(&mut rng));
        let x = alg.mul(&r, e);
        let mut powers = vec![e.clone()];
        for _ in 0..n {
            let next = alg.mul(powers.last().expect("nonempty"), &x);
            powers.push(next);
        }
        let mut span = Matrix::zeros(alg.dim(), n);
        for (k, p) in powers.iter().take(n).enumerate() {
            span.set_column(k, p);
        }
        if rank(&span) < n {
            continue;
        }
        let (coef, res) = coordinates(&span, &powers[n]);
        if res > 1e-8 * max_abs_vec(&powers[n]).max(1.0) {
            continue;
        }
        // companion matrix of t^n − Σ coef_k t^k
        let mut comp = Matrix::zeros(n, n);
        for k in 1..n {
            comp[(k, k - 1)] = c(1.0);
        }
        for k in 0..n {
            comp[(k, n - 1)] = coef[k];
        }
        let roots = eigenvalues(&comp)?;
        let scale = roots.iter().map(|l| l.norm()).fold(1.0, f64::max);
        if min_gap(&roots) < 1e-4 * scale {
            continue;
        }
        let p = lagrange_projector(alg, &x, e, &roots, 0);
        let span_p = {
            let mut m = Matrix::zeros(alg.dim(), alg.dim());
            for a in 0..alg.dim() {
                m.set_column(a, &alg.mul(&alg.basis(a), &p));
            }
            SubspaceBasis::from_columns(&m)
        };
        if span_p.dim() != n {
            continue;
        }
        let q = span_p.basis();
        let matrices: Vec<Matrix> = (0..alg.dim())
            .map(|a| q.adjoint() * alg.left_mult_matrix(&alg.basis(a)) * q)
            .collect();
        let module = ExplicitModule { dim: n, matrices };
        if module.character(alg).distance(chi) < TAU_ALG && module.residual(alg) < TAU_ALG {
            return Ok(module);
        }
    }
    Err(Error::NumericDegeneracy(format!(
        "could not split block {i} into a simple module"
    )))
}
