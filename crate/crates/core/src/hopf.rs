//! Finite-dimensional Hopf algebras as structure-constant tensors.
//!
//! Besides the constructors for group algebras, dual group algebras and
//! bismash products `k^G # kF`, this module holds the subspace calculus used
//! by the Clifford analysis: Hopf subalgebra and normality tests, quotients
//! `A//B`, the coaction `ρ = (id ⊗ π)Δ` and its graded components, coset
//! products and coefficient spaces of comodule characters.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, MatchedPair, Subgroup};
use crate::linalg::{
    basis_vector, c, max_abs, max_abs_vec, rank, solve, Matrix, SubspaceBasis, Vector, C64,
    TAU_ALG,
};
use crate::repcalc::{wedderburn, DEFAULT_SEED};

/// Algebra, coalgebra and antipode structure on a common basis.
///
/// `comult` is laid out as `[(k * dim + p) * dim + q]`, the coefficient of
/// `e_p ⊗ e_q` in `Δ(e_k)`. Elements of `A ⊗ A` are `dim × dim` matrices with
/// the first tensor factor indexing rows.
#[derive(Clone, Debug)]
pub struct HopfAlgebraData {
    pub alg: Algebra,
    comult: Vec<C64>,
    comult_sparse: Vec<Vec<(usize, usize, C64)>>,
    counit: Vector,
    antipode: Option<Matrix>,
}

impl HopfAlgebraData {
    pub fn new(alg: Algebra, comult: Vec<C64>, counit: Vector, antipode: Option<Matrix>) -> Self {
        let n = alg.dim();
        assert_eq!(comult.len(), n * n * n, "comultiplication tensor size");
        let comult_sparse = (0..n)
            .map(|k| {
                let mut terms = Vec::new();
                for p in 0..n {
                    for q in 0..n {
                        let v = comult[(k * n + p) * n + q];
                        if v.norm() > 0.0 {
                            terms.push((p, q, v));
                        }
                    }
                }
                terms
            })
            .collect();
        HopfAlgebraData {
            alg,
            comult,
            comult_sparse,
            counit,
            antipode,
        }
    }

    /// Builds the data from closures for basis products and coproducts, then
    /// solves for the antipode.
    pub fn from_closures<M, D>(
        dim: usize,
        unit: Vector,
        counit: Vector,
        labels: Vec<String>,
        product: M,
        coproduct: D,
    ) -> Result<Self>
    where
        M: Fn(usize, usize) -> Vec<(usize, C64)>,
        D: Fn(usize) -> Vec<(usize, usize, C64)>,
    {
        let alg = Algebra::from_products(dim, unit, labels, product);
        let mut comult = vec![c(0.0); dim * dim * dim];
        for k in 0..dim {
            for (p, q, v) in coproduct(k) {
                comult[(k * dim + p) * dim + q] += v;
            }
        }
        let mut h = HopfAlgebraData::new(alg, comult, counit, None);
        let s = solve_antipode(&h)?;
        h.antipode = Some(s);
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn labels(&self) -> &[String] {
        self.alg.labels()
    }

    pub fn unit(&self) -> &Vector {
        self.alg.unit()
    }

    pub fn counit_vector(&self) -> &Vector {
        &self.counit
    }

    pub fn antipode(&self) -> Option<&Matrix> {
        self.antipode.as_ref()
    }

    pub fn set_antipode(&mut self, s: Matrix) {
        self.antipode = Some(s);
    }

    pub fn comult_entry(&self, k: usize, p: usize, q: usize) -> C64 {
        let n = self.dim();
        self.comult[(k * n + p) * n + q]
    }

    pub fn basis_coproduct(&self, k: usize) -> &[(usize, usize, C64)] {
        &self.comult_sparse[k]
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        self.alg.mul(x, y)
    }

    pub fn counit(&self, x: &Vector) -> C64 {
        self.counit.dot(x)
    }

    /// `Δ(x)` as a `dim × dim` matrix.
    pub fn comul(&self, x: &Vector) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (k, xk) in x.iter().enumerate() {
            if xk.norm() == 0.0 {
                continue;
            }
            for &(p, q, v) in self.basis_coproduct(k) {
                out[(p, q)] += xk * v;
            }
        }
        out
    }

    pub fn apply_antipode(&self, x: &Vector) -> Vector {
        self.antipode.as_ref().expect("antipode solved") * x
    }

    /// Product in `A ⊗ A`.
    pub fn tensor_mul(&self, t: &Matrix, u: &Matrix) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        let nz = |m: &Matrix| -> Vec<(usize, usize, C64)> {
            let mut v = Vec::new();
            for p in 0..n {
                for q in 0..n {
                    if m[(p, q)].norm() > 0.0 {
                        v.push((p, q, m[(p, q)]));
                    }
                }
            }
            v
        };
        let (tn, un) = (nz(t), nz(u));
        for &(p, q, a) in &tn {
            for &(r, s, b) in &un {
                let left = self.alg.basis_product(p, r);
                let right = self.alg.basis_product(q, s);
                for &(x, v) in left {
                    for &(y, w) in right {
                        out[(x, y)] += a * b * v * w;
                    }
                }
            }
        }
        out
    }

    pub fn is_cocommutative(&self, tol: f64) -> bool {
        (0..self.dim()).all(|k| {
            let d = self.comul(&self.alg.basis(k));
            max_abs(&(&d - d.transpose())) < tol
        })
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        self.alg.is_commutative(tol)
    }
}

/// Group algebra `kG`: `Δ(g) = g ⊗ g`, `ε(g) = 1`, `S(g) = g⁻¹`.
pub fn group_algebra(g: &FiniteGroup) -> Result<HopfAlgebraData> {
    let n = g.order();
    let h = HopfAlgebraData::from_closures(
        n,
        basis_vector(n, 0),
        Vector::from_element(n, c(1.0)),
        g.labels().to_vec(),
        |a, b| vec![(g.mul(a, b), c(1.0))],
        |a| vec![(a, a, c(1.0))],
    )?;
    let mut closed = Matrix::zeros(n, n);
    for a in 0..n {
        closed[(g.inv(a), a)] = c(1.0);
    }
    assert_closed_form_antipode(&h, &closed)?;
    Ok(h)
}

/// Dual group algebra `k^G` on the basis of point masses `δ_g`.
pub fn dual_group_algebra(g: &FiniteGroup) -> Result<HopfAlgebraData> {
    let n = g.order();
    let labels = g.labels().iter().map(|l| format!("δ_{l}")).collect();
    let h = HopfAlgebraData::from_closures(
        n,
        Vector::from_element(n, c(1.0)),
        basis_vector(n, 0),
        labels,
        |a, b| if a == b { vec![(a, c(1.0))] } else { vec![] },
        |k| {
            (0..n)
                .map(|s| (s, g.mul(g.inv(s), k), c(1.0)))
                .collect()
        },
    )?;
    let mut closed = Matrix::zeros(n, n);
    for a in 0..n {
        closed[(g.inv(a), a)] = c(1.0);
    }
    assert_closed_form_antipode(&h, &closed)?;
    Ok(h)
}

fn assert_closed_form_antipode(h: &HopfAlgebraData, closed: &Matrix) -> Result<()> {
    let solved = h.antipode().expect("solved in from_closures");
    let r = max_abs(&(solved - closed));
    if r > TAU_ALG {
        return Err(Error::Consistency(format!(
            "solved antipode differs from closed form by {r:.3e}"
        )));
    }
    Ok(())
}

/// Dual Hopf algebra on the dual basis: every tensor is transposed.
pub fn dual_hopf(a: &HopfAlgebraData) -> HopfAlgebraData {
    let n = a.dim();
    let mut mult = vec![c(0.0); n * n * n];
    let mut comult = vec![c(0.0); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                mult[(i * n + j) * n + k] = a.comult_entry(k, i, j);
                comult[(k * n + i) * n + j] = a.alg.structure_constant(i, j, k);
            }
        }
    }
    let labels = a.labels().iter().map(|l| format!("{l}*")).collect();
    let alg = Algebra::new(n, mult, a.counit.clone(), labels);
    HopfAlgebraData::new(
        alg,
        comult,
        a.unit().clone(),
        a.antipode().map(|s| s.transpose()),
    )
}

/// Solves the linear system for the convolution inverse of the identity via
/// the map `T(a ⊗ b) = a₁ ⊗ a₂b`, whose inverse is `a ⊗ b ↦ a₁ ⊗ S(a₂)b`;
/// then `S = (ε ⊗ id) T⁻¹(− ⊗ 1)`.
pub fn solve_antipode(a: &HopfAlgebraData) -> Result<Matrix> {
    let n = a.dim();
    let mut t = Matrix::zeros(n * n, n * n);
    for x in 0..n {
        for b in 0..n {
            let col = x * n + b;
            for &(p, q, v) in a.basis_coproduct(x) {
                for &(r, w) in a.alg.basis_product(q, b) {
                    t[(p * n + r, col)] += v * w;
                }
            }
        }
    }
    let mut rhs = Matrix::zeros(n * n, n);
    for x in 0..n {
        for r in 0..n {
            rhs[(x * n + r, x)] = a.unit()[r];
        }
    }
    let sol = solve(&t, &rhs)
        .ok_or_else(|| Error::NoAntipode("fusion map is singular".into()))?;
    let mut s = Matrix::zeros(n, n);
    for x in 0..n {
        for r in 0..n {
            let mut v = c(0.0);
            for p in 0..n {
                v += a.counit[p] * sol[(p * n + r, x)];
            }
            s[(r, x)] = v;
        }
    }
    let left = antipode_residual(a, &s, true);
    let right = antipode_residual(a, &s, false);
    if left > TAU_ALG || right > TAU_ALG {
        return Err(Error::NoAntipode(format!(
            "antipode laws fail (left {left:.3e}, right {right:.3e})"
        )));
    }
    let sq = max_abs(&(&s * &s - Matrix::identity(n, n)));
    if sq > TAU_ALG {
        return Err(Error::NotSemisimple(format!("S² ≠ id (residual {sq:.3e})")));
    }
    Ok(s)
}

/// Residual of `S(a₁)a₂ = ε(a)1` (left) or `a₁S(a₂) = ε(a)1` (right).
fn antipode_residual(a: &HopfAlgebraData, s: &Matrix, left: bool) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let mut acc = Vector::zeros(n);
        for &(p, q, v) in a.basis_coproduct(k) {
            let (x, y) = if left {
                (s.column(p).into_owned(), a.alg.basis(q))
            } else {
                (a.alg.basis(p), s.column(q).into_owned())
            };
            acc += a.mul(&x, &y) * v;
        }
        acc -= a.unit() * a.counit[k];
        worst = worst.max(max_abs_vec(&acc));
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn residual(&self, axiom: &str) -> f64 {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .map(|c| c.residual)
            .unwrap_or(f64::NAN)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Every Hopf axiom with its max residual.
pub fn verify_hopf_axioms(a: &HopfAlgebraData) -> AxiomReport {
    let n = a.dim();
    let mut checks = Vec::new();
    let mut push = |axiom: &'static str, residual: f64| {
        checks.push(AxiomCheck {
            axiom,
            residual,
            pass: residual < TAU_ALG,
        })
    };
    push("associativity", a.alg.associativity_residual());
    push("unit", a.alg.unit_residual());

    let mut coassoc: f64 = 0.0;
    let mut counit: f64 = 0.0;
    for k in 0..n {
        let mut diff = vec![c(0.0); n * n * n];
        for &(s, r, v) in a.basis_coproduct(k) {
            for &(p, q, w) in a.basis_coproduct(s) {
                diff[(p * n + q) * n + r] += v * w;
            }
        }
        for &(p, s, v) in a.basis_coproduct(k) {
            for &(q, r, w) in a.basis_coproduct(s) {
                diff[(p * n + q) * n + r] -= v * w;
            }
        }
        coassoc = coassoc.max(diff.iter().fold(0.0, |m, z| m.max(z.norm())));
        let d = a.comul(&a.alg.basis(k));
        let left = d.transpose() * &a.counit;
        let right = &d * &a.counit;
        let e = a.alg.basis(k);
        counit = counit
            .max(max_abs_vec(&(left - &e)))
            .max(max_abs_vec(&(right - &e)));
    }
    push("coassociativity", coassoc);
    push("counit", counit);

    let mut bialg: f64 = 0.0;
    let deltas: Vec<Matrix> = (0..n).map(|k| a.comul(&a.alg.basis(k))).collect();
    for i in 0..n {
        for j in 0..n {
            let prod = a.mul(&a.alg.basis(i), &a.alg.basis(j));
            let lhs = a.comul(&prod);
            let rhs = a.tensor_mul(&deltas[i], &deltas[j]);
            bialg = bialg.max(max_abs(&(lhs - rhs)));
            let eps = a.counit(&prod) - a.counit[i] * a.counit[j];
            bialg = bialg.max(eps.norm());
        }
    }
    let one = a.unit();
    let d1 = a.comul(one);
    bialg = bialg.max(max_abs(&(d1 - one * one.transpose())));
    bialg = bialg.max((a.counit(one) - c(1.0)).norm());
    push("bialgebra", bialg);

    match a.antipode() {
        Some(s) => {
            push("antipode_left", antipode_residual(a, s, true));
            push("antipode_right", antipode_residual(a, s, false));
            push("antipode_involutive", max_abs(&(s * s - Matrix::identity(n, n))));
        }
        None => {
            push("antipode_left", f64::INFINITY);
            push("antipode_right", f64::INFINITY);
            push("antipode_involutive", f64::INFINITY);
        }
    }
    AxiomReport { checks }
}

/// An injective Hopf map `small → big`; columns of `embedding` are images of
/// the small basis.
#[derive(Clone, Debug)]
pub struct HopfInclusion {
    pub small: HopfAlgebraData,
    pub embedding: Matrix,
}

impl HopfInclusion {
    pub fn image(&self) -> SubspaceBasis {
        SubspaceBasis::from_columns(&self.embedding)
    }

    /// Max residual of the algebra, coalgebra and antipode compatibilities.
    pub fn residual(&self, big: &HopfAlgebraData) -> f64 {
        let e = &self.embedding;
        let s = &self.small;
        let n = s.dim();
        let mut worst = max_abs_vec(&(e * s.unit() - big.unit()));
        for i in 0..n {
            let ei = e.column(i).into_owned();
            for j in 0..n {
                let ej = e.column(j).into_owned();
                let lhs = e * s.mul(&s.alg.basis(i), &s.alg.basis(j));
                worst = worst.max(max_abs_vec(&(lhs - big.mul(&ei, &ej))));
            }
            let lhs = e * s.comul(&s.alg.basis(i)) * e.transpose();
            worst = worst.max(max_abs(&(lhs - big.comul(&ei))));
            worst = worst.max((s.counit[i] - big.counit(&ei)).norm());
            if let (Some(ss), Some(_)) = (s.antipode(), big.antipode()) {
                let lhs = e * ss.column(i);
                worst = worst.max(max_abs_vec(&(lhs - big.apply_antipode(&ei))));
            }
        }
        worst
    }
}

/// A surjective Hopf map `source → target`.
#[derive(Clone, Debug)]
pub struct HopfSurjection {
    pub target: HopfAlgebraData,
    pub matrix: Matrix,
}

impl HopfSurjection {
    pub fn apply(&self, x: &Vector) -> Vector {
        &self.matrix * x
    }

    pub fn residual(&self, source: &HopfAlgebraData) -> f64 {
        let p = &self.matrix;
        let t = &self.target;
        let n = source.dim();
        let mut worst = max_abs_vec(&(p * source.unit() - t.unit()));
        let images: Vec<Vector> = (0..n).map(|i| p.column(i).into_owned()).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = p * source.mul(&source.alg.basis(i), &source.alg.basis(j));
                worst = worst.max(max_abs_vec(&(lhs - t.mul(&images[i], &images[j]))));
            }
            let lhs = p * source.comul(&source.alg.basis(i)) * p.transpose();
            worst = worst.max(max_abs(&(lhs - t.comul(&images[i]))));
            worst = worst.max((source.counit[i] - t.counit(&images[i])).norm());
            if let (Some(s), Some(_)) = (source.antipode(), t.antipode()) {
                let lhs = p * s.column(i);
                worst = worst.max(max_abs_vec(&(lhs - t.apply_antipode(&images[i]))));
            }
        }
        worst
    }
}

/// A Hopf surjection onto a group algebra `kF`, with target basis indexed by
/// the elements of `group`.
#[derive(Clone, Debug)]
pub struct KfSurjection {
    pub pi: HopfSurjection,
    pub group: FiniteGroup,
}

/// `A = k^G # kF` on the basis `δ_g x` (index `g·|F| + x`) with
/// `(δ_g x)(δ_h y) = δ_{g◁x,h} δ_g xy` and
/// `Δ(δ_g x) = Σ_{st=g} δ_s(t▷x) ⊗ δ_t x`.
pub fn bismash(mp: &MatchedPair) -> Result<(HopfAlgebraData, HopfInclusion, KfSurjection)> {
    let report = crate::groups::verify_matched_pair(mp);
    if !report.passed() {
        return Err(Error::InvalidMatchedPair(format!(
            "{} violated instances",
            report.violations.len()
        )));
    }
    let fg = mp.f_group();
    let gg = mp.g_group();
    let (nf, ng) = (fg.order(), gg.order());
    let n = nf * ng;
    let idx = |g: usize, x: usize| g * nf + x;
    let labels = (0..ng)
        .flat_map(|g| (0..nf).map(move |x| (g, x)))
        .map(|(g, x)| format!("δ_{}·{}", gg.label(g), fg.label(x)))
        .collect();
    let mut unit = Vector::zeros(n);
    for g in 0..ng {
        unit[idx(g, 0)] = c(1.0);
    }
    let mut counit = Vector::zeros(n);
    for x in 0..nf {
        counit[idx(0, x)] = c(1.0);
    }
    let a = HopfAlgebraData::from_closures(
        n,
        unit,
        counit,
        labels,
        |i, j| {
            let (g, x) = (i / nf, i % nf);
            let (h, y) = (j / nf, j % nf);
            if mp.ract[g][x] == h {
                vec![(idx(g, fg.mul(x, y)), c(1.0))]
            } else {
                vec![]
            }
        },
        |k| {
            let (g, x) = (k / nf, k % nf);
            (0..ng)
                .map(|t| {
                    let s = gg.mul(g, gg.inv(t));
                    (idx(s, mp.lact[t][x]), idx(t, x), c(1.0))
                })
                .collect()
        },
    )?;
    let kg = dual_group_algebra(&gg)?;
    let mut emb = Matrix::zeros(n, ng);
    for g in 0..ng {
        emb[(idx(g, 0), g)] = c(1.0);
    }
    let inc = HopfInclusion {
        small: kg,
        embedding: emb,
    };
    let kf = group_algebra(&fg)?;
    let mut pm = Matrix::zeros(nf, n);
    for x in 0..nf {
        pm[(x, idx(0, x))] = c(1.0);
    }
    let kfs = KfSurjection {
        pi: HopfSurjection {
            target: kf,
            matrix: pm,
        },
        group: fg,
    };
    crosscheck_surjection(&a, &inc.image(), &kfs.pi)?;
    Ok((a, inc, kfs))
}

/// `kG` with the Hopf subalgebra `kN` and the projection onto `k[G/N]`.
pub fn group_algebra_extension(
    g: &FiniteGroup,
    n: &Subgroup,
) -> Result<(HopfAlgebraData, HopfInclusion, KfSurjection)> {
    let a = group_algebra(g)?;
    let ng = g.subgroup_group(n);
    let small = group_algebra(&ng)?;
    let mut emb = Matrix::zeros(g.order(), n.order());
    for (i, &m) in n.members().iter().enumerate() {
        emb[(m, i)] = c(1.0);
    }
    let inc = HopfInclusion {
        small,
        embedding: emb,
    };
    let (q, coset) = g
        .quotient(n)
        .map_err(|e| Error::NotNormal(e.to_string()))?;
    let target = group_algebra(&q)?;
    let mut pm = Matrix::zeros(q.order(), g.order());
    for a_ in 0..g.order() {
        pm[(coset[a_], a_)] = c(1.0);
    }
    let kfs = KfSurjection {
        pi: HopfSurjection { target, matrix: pm },
        group: q,
    };
    crosscheck_surjection(&a, &inc.image(), &kfs.pi)?;
    Ok((a, inc, kfs))
}

/// `k^G` with the Hopf subalgebra `k^{G/N}` of functions constant on cosets of
/// a normal subgroup `N`. The quotient is `k^N`.
pub fn dual_group_algebra_extension(
    g: &FiniteGroup,
    n: &Subgroup,
) -> Result<(HopfAlgebraData, HopfInclusion)> {
    let a = dual_group_algebra(g)?;
    let (q, coset) = g
        .quotient(n)
        .map_err(|e| Error::NotNormal(e.to_string()))?;
    let small = dual_group_algebra(&q)?;
    let mut emb = Matrix::zeros(g.order(), q.order());
    for x in 0..g.order() {
        emb[(x, coset[x])] = c(1.0);
    }
    Ok((
        a,
        HopfInclusion {
            small,
            embedding: emb,
        },
    ))
}

/// Asserts that a closed-form projection agrees with `quotient_hopf`: it is a
/// Hopf map with the same kernel `A·B⁺`.
pub fn crosscheck_surjection(
    a: &HopfAlgebraData,
    b: &SubspaceBasis,
    pi: &HopfSurjection,
) -> Result<()> {
    let (hq, piq) = quotient_hopf(a, b)?;
    let r = pi.residual(a);
    if r > TAU_ALG {
        return Err(Error::Consistency(format!(
            "closed-form projection is not a Hopf map (residual {r:.3e})"
        )));
    }
    if pi.target.dim() != hq.dim() || rank(&pi.matrix) != hq.dim() {
        return Err(Error::Consistency("closed-form projection has the wrong rank".into()));
    }
    // ker π_q is the ideal; π must vanish on it.
    let ideal = SubspaceBasis::from_columns(&crate::linalg::nullspace(&piq.matrix));
    let r = max_abs(&(&pi.matrix * ideal.basis()));
    if r > TAU_ALG {
        return Err(Error::Consistency(format!(
            "closed-form projection does not vanish on A·B⁺ ({r:.3e})"
        )));
    }
    Ok(())
}

/// True iff `1 ∈ V`, `V·V ⊆ V`, `Δ(V) ⊆ V ⊗ V` and `S(V) ⊆ V`.
pub fn is_hopf_subalgebra(a: &HopfAlgebraData, v: &SubspaceBasis) -> bool {
    if !v.contains(a.unit(), TAU_ALG) {
        return false;
    }
    let p = v.projector();
    for i in 0..v.dim() {
        let x = v.vector(i);
        for j in 0..v.dim() {
            if !v.contains(&a.mul(&x, &v.vector(j)), TAU_ALG) {
                return false;
            }
        }
        let d = a.comul(&x);
        if max_abs(&(&p * &d * p.transpose() - &d)) > TAU_ALG {
            return false;
        }
        if let Some(s) = a.antipode() {
            if !v.contains(&(s * &x), TAU_ALG) {
                return false;
            }
        }
    }
    true
}

/// True iff `B` is a Hopf subalgebra with `a₁ b S(a₂) ∈ B` for all `a`, `b`.
pub fn is_normal_hopf_subalgebra(a: &HopfAlgebraData, b: &SubspaceBasis) -> bool {
    if !is_hopf_subalgebra(a, b) {
        return false;
    }
    let s = match a.antipode() {
        Some(s) => s,
        None => return false,
    };
    for k in 0..a.dim() {
        for j in 0..b.dim() {
            let y = b.vector(j);
            let mut acc = Vector::zeros(a.dim());
            for &(p, q, v) in a.basis_coproduct(k) {
                let left = a.mul(&a.alg.basis(p), &y);
                acc += a.mul(&left, &s.column(q).into_owned()) * v;
            }
            if !b.contains(&acc, TAU_ALG) {
                return false;
            }
        }
    }
    true
}

/// `A//B = A / A·B⁺` for a normal Hopf subalgebra `B`, with the projection.
pub fn quotient_hopf(a: &HopfAlgebraData, b: &SubspaceBasis) -> Result<(HopfAlgebraData, HopfSurjection)> {
    if !is_normal_hopf_subalgebra(a, b) {
        return Err(Error::NotNormal("quotient requested by a non-normal subalgebra".into()));
    }
    let n = a.dim();
    let plus: Vec<Vector> = (0..b.dim())
        .map(|j| {
            let y = b.vector(j);
            let e = a.counit(&y);
            y - a.unit() * e
        })
        .collect();
    let mut gens = Vec::with_capacity(n * plus.len());
    for i in 0..n {
        for y in &plus {
            gens.push(a.mul(&a.alg.basis(i), y));
        }
    }
    let ideal = SubspaceBasis::from_vectors(n, &gens);
    for k in 0..ideal.dim() {
        for i in 0..n {
            let x = a.mul(&ideal.vector(k), &a.alg.basis(i));
            if !ideal.contains(&x, TAU_ALG) {
                return Err(Error::Consistency("A·B⁺ is not a two-sided ideal".into()));
            }
        }
    }
    let comp = ideal.complement();
    let m = comp.dim();
    let proj = comp.basis().adjoint();
    let lifts: Vec<Vector> = (0..m).map(|i| comp.vector(i)).collect();
    let mut mult = vec![c(0.0); m * m * m];
    let mut comult = vec![c(0.0); m * m * m];
    for i in 0..m {
        for j in 0..m {
            let prod = &proj * a.mul(&lifts[i], &lifts[j]);
            for k in 0..m {
                mult[(i * m + j) * m + k] = prod[k];
            }
        }
        let d = &proj * a.comul(&lifts[i]) * proj.transpose();
        for p in 0..m {
            for q in 0..m {
                comult[(i * m + p) * m + q] = d[(p, q)];
            }
        }
    }
    let counit = Vector::from_fn(m, |i, _| a.counit(&lifts[i]));
    let labels = (0..m).map(|i| format!("h{i}")).collect();
    let alg = Algebra::new(m, mult, &proj * a.unit(), labels);
    let mut h = HopfAlgebraData::new(alg, comult, counit, None);
    let s = solve_antipode(&h)?;
    h.set_antipode(s);
    if !verify_hopf_axioms(&h).passed() {
        return Err(Error::Consistency("induced quotient structure fails the axioms".into()));
    }
    let pi = HopfSurjection {
        target: h.clone(),
        matrix: proj,
    };
    let r = pi.residual(a);
    if r > TAU_ALG {
        return Err(Error::Consistency(format!("quotient map residual {r:.3e}")));
    }
    Ok((h, pi))
}

/// Recognizes a cocommutative quotient as a group algebra: its group-likes are
/// the one-dimensional characters of the dual. Returns the group and the
/// surjection rewritten in the group-like basis (identity first).
pub fn as_group_algebra(pi: &HopfSurjection, seed: u64) -> Result<KfSurjection> {
    let h = &pi.target;
    let m = h.dim();
    let dual = dual_hopf(h);
    let dec = wedderburn(&dual.alg, seed)?;
    if dec.dims.iter().any(|&d| d != 1) || dec.len() != m {
        return Err(Error::NotGroupAlgebra);
    }
    let mut likes: Vec<Vector> = dec.irr.iter().map(|chi| chi.values().clone()).collect();
    let id = likes
        .iter()
        .position(|g| max_abs_vec(&(g - h.unit())) < TAU_ALG)
        .ok_or(Error::NotGroupAlgebra)?;
    let one = likes.remove(id);
    likes.insert(0, one);
    let find = |v: &Vector| likes.iter().position(|g| max_abs_vec(&(g - v)) < 1e-6);
    let mut cayley = vec![vec![0; m]; m];
    for i in 0..m {
        for j in 0..m {
            cayley[i][j] = find(&h.mul(&likes[i], &likes[j])).ok_or(Error::NotGroupAlgebra)?;
        }
    }
    let labels = (0..m).map(|i| format!("f{i}")).collect();
    let group = FiniteGroup::from_cayley(cayley, Some(labels))?;
    let mut change = Matrix::zeros(m, m);
    for (j, g) in likes.iter().enumerate() {
        change.set_column(j, g);
    }
    let inv = change
        .clone()
        .try_inverse()
        .ok_or(Error::NotGroupAlgebra)?;
    let matrix = inv * &pi.matrix;
    let target = group_algebra(&group)?;
    let kf = KfSurjection {
        pi: HopfSurjection { target, matrix },
        group,
    };
    Ok(kf)
}

/// The coaction `ρ = (id ⊗ π)Δ` as a `(dim·dim_H) × dim` matrix; row
/// `i·dim_H + h` holds the coefficient of `e_i ⊗ h`.
pub fn comodule_map_rho(a: &HopfAlgebraData, pi: &HopfSurjection) -> Matrix {
    let n = a.dim();
    let m = pi.target.dim();
    let mut rho = Matrix::zeros(n * m, n);
    for k in 0..n {
        for &(p, q, v) in a.basis_coproduct(k) {
            for h in 0..m {
                let w = pi.matrix[(h, q)];
                if w.norm() > 0.0 {
                    rho[(p * m + h, k)] += v * w;
                }
            }
        }
    }
    rho
}

/// `A_f = ρ⁻¹(A ⊗ kf)`.
pub fn graded_component(a: &HopfAlgebraData, kf: &KfSurjection, f: usize) -> Result<SubspaceBasis> {
    Ok(graded_components(a, kf)?.swap_remove(f))
}

/// All graded components, indexed by group element.
pub fn graded_components(a: &HopfAlgebraData, kf: &KfSurjection) -> Result<Vec<SubspaceBasis>> {
    let m = kf.group.order();
    if kf.pi.target.dim() != m {
        return Err(Error::NotGroupAlgebra);
    }
    let n = a.dim();
    let rho = comodule_map_rho(a, &kf.pi);
    let comps: Vec<SubspaceBasis> = (0..m)
        .map(|f| {
            let rows: Vec<usize> = (0..n * m).filter(|r| r % m != f).collect();
            let mut sel = Matrix::zeros(rows.len(), n);
            for (i, &r) in rows.iter().enumerate() {
                sel.set_row(i, &rho.row(r));
            }
            SubspaceBasis::from_columns(&crate::linalg::nullspace(&sel))
        })
        .collect();
    Ok(comps)
}

/// Span of all pairwise products.
pub fn subspace_product(a: &HopfAlgebraData, u: &SubspaceBasis, v: &SubspaceBasis) -> SubspaceBasis {
    let mut gens = Vec::with_capacity(u.dim() * v.dim());
    for i in 0..u.dim() {
        let x = u.vector(i);
        for j in 0..v.dim() {
            gens.push(a.mul(&x, &v.vector(j)));
        }
    }
    SubspaceBasis::from_vectors(a.dim(), &gens)
}

/// The simple subcoalgebra spanned by the matrix coefficients of the comodule
/// whose character is `d ∈ A`.
pub fn coefficient_space(a: &HopfAlgebraData, d: &Vector) -> Result<SubspaceBasis> {
    let delta = a.comul(d);
    let space = SubspaceBasis::from_columns(&delta.transpose());
    let deg = a.counit(d).re.round() as usize;
    if space.dim() != deg * deg {
        return Err(Error::DimensionMismatch(format!(
            "coefficient space has dim {} but ε(d)² = {}",
            space.dim(),
            deg * deg
        )));
    }
    Ok(space)
}

/// True iff `π(a₁) ⊗ a₂ = π(a₂) ⊗ a₁` on every basis element.
pub fn is_cocentral(a: &HopfAlgebraData, pi: &HopfSurjection) -> bool {
    (0..a.dim()).all(|k| {
        let d = a.comul(&a.alg.basis(k));
        max_abs(&(&pi.matrix * &d - &pi.matrix * d.transpose())) < TAU_ALG
    })
}

#[derive(Serialize, Deserialize)]
struct HopfJson {
    dim: usize,
    basis_labels: Vec<String>,
    mult: Vec<(usize, usize, usize, f64, f64)>,
    comult: Vec<(usize, usize, usize, f64, f64)>,
    unit: Vec<(f64, f64)>,
    counit: Vec<(f64, f64)>,
    antipode: Option<Vec<Vec<(f64, f64)>>>,
}

impl Serialize for HopfAlgebraData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut mult = Vec::new();
        let mut comult = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for &(k, v) in self.alg.basis_product(i, j) {
                    mult.push((i, j, k, v.re, v.im));
                }
            }
            for &(p, q, v) in self.basis_coproduct(i) {
                comult.push((i, p, q, v.re, v.im));
            }
        }
        let pairs = |v: &Vector| v.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>();
        HopfJson {
            dim: n,
            basis_labels: self.labels().to_vec(),
            mult,
            comult,
            unit: pairs(self.unit()),
            counit: pairs(&self.counit),
            antipode: self.antipode().map(|m| {
                (0..n)
                    .map(|r| (0..n).map(|cc| (m[(r, cc)].re, m[(r, cc)].im)).collect())
                    .collect()
            }),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HopfAlgebraData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = HopfJson::deserialize(d)?;
        let n = raw.dim;
        if raw.unit.len() != n || raw.counit.len() != n || raw.basis_labels.len() != n {
            return Err(D::Error::custom("vector length does not match dim"));
        }
        let mut mult = vec![c(0.0); n * n * n];
        for (i, j, k, re, im) in raw.mult {
            if i >= n || j >= n || k >= n {
                return Err(D::Error::custom("mult index out of range"));
            }
            mult[(i * n + j) * n + k] += C64::new(re, im);
        }
        let mut comult = vec![c(0.0); n * n * n];
        for (k, p, q, re, im) in raw.comult {
            if k >= n || p >= n || q >= n {
                return Err(D::Error::custom("comult index out of range"));
            }
            comult[(k * n + p) * n + q] += C64::new(re, im);
        }
        let vecof = |v: Vec<(f64, f64)>| Vector::from_iterator(n, v.into_iter().map(|(r, i)| C64::new(r, i)));
        let antipode = match raw.antipode {
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(D::Error::custom("antipode has wrong shape"));
                }
                Some(Matrix::from_fn(n, n, |r, cc| C64::new(rows[r][cc].0, rows[r][cc].1)))
            }
            None => None,
        };
        let alg = Algebra::new(n, mult, vecof(raw.unit), raw.basis_labels);
        Ok(HopfAlgebraData::new(alg, comult, vecof(raw.counit), antipode))
    }
}

/// Finds the index of a group element label among a group's labels.
pub fn label_map(g: &FiniteGroup) -> HashMap<String, usize> {
    g.labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect()
}

/// Seeded default for callers that do not thread a seed explicitly.
pub fn as_group_algebra_default(pi: &HopfSurjection) -> Result<KfSurjection> {
    as_group_algebra(pi, DEFAULT_SEED)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{c4_c2_matched_pair, s3_a3, s4_matched_pair};
    use crate::groups::Composition;

    fn s4() -> (HopfAlgebraData, HopfInclusion, KfSurjection) {
        bismash(&s4_matched_pair(Composition::RightToLeft).unwrap()).unwrap()
    }

    #[test]
    fn group_algebras_pass_axioms() {
        let (s3, _) = s3_a3().unwrap();
        let a = group_algebra(&s3.group).unwrap();
        assert!(verify_hopf_axioms(&a).passed());
        assert!(a.is_cocommutative(TAU_ALG));
        let k = group_algebra(&FiniteGroup::trivial()).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(verify_hopf_axioms(&k).passed());
        let d = dual_group_algebra(&s3.group).unwrap();
        assert!(verify_hopf_axioms(&d).passed());
        assert!(d.is_commutative(TAU_ALG));
        assert!(!d.is_cocommutative(TAU_ALG));
    }

    #[test]
    fn dual_of_group_algebra_is_function_algebra() {
        let (s3, _) = s3_a3().unwrap();
        let a = group_algebra(&s3.group).unwrap();
        let d = dual_hopf(&a);
        let f = dual_group_algebra(&s3.group).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    assert_eq!(d.alg.structure_constant(i, j, k), f.alg.structure_constant(i, j, k));
                    assert_eq!(d.comult_entry(k, i, j), f.comult_entry(k, i, j));
                }
            }
        }
        let dd = dual_hopf(&d);
        assert_eq!(dd.comult, a.comult);
        assert_eq!(dd.counit, a.counit);
    }

    #[test]
    fn perturbed_multiplication_is_reported() {
        let (s3, _) = s3_a3().unwrap();
        let mut a = group_algebra(&s3.group).unwrap();
        let v = a.alg.structure_constant(1, 2, 3);
        a.alg.set_structure_constant(1, 2, 3, v + c(0.1));
        let r = verify_hopf_axioms(&a).residual("associativity");
        assert!((r - 0.1).abs() < 1e-12, "{r}");
    }

    #[test]
    fn s4_bismash_structure() {
        let (a, inc, kf) = s4();
        assert_eq!(a.dim(), 24);
        assert!(verify_hopf_axioms(&a).passed());
        assert!(verify_hopf_axioms(&dual_hopf(&a)).passed());
        assert!(inc.residual(&a) < TAU_ALG);
        let b = inc.image();
        assert!(is_normal_hopf_subalgebra(&a, &b));
        let (h, _) = quotient_hopf(&a, &b).unwrap();
        assert_eq!(h.dim(), 6);
        assert!(!is_cocentral(&a, &kf.pi));
        let comps = graded_components(&a, &kf).unwrap();
        assert!(comps[0].same_as(&b, TAU_ALG));
        for (x, comp) in comps.iter().enumerate() {
            assert_eq!(comp.dim(), 4);
            let expect: Vec<Vector> = (0..4).map(|g| a.alg.basis(g * 6 + x)).collect();
            assert!(comp.same_as(&SubspaceBasis::from_vectors(24, &expect), TAU_ALG));
        }
        let fg = &kf.group;
        for x in 0..6 {
            for y in 0..6 {
                let p = subspace_product(&a, &comps[x], &comps[y]);
                assert!(comps[fg.mul(x, y)].contains_subspace(&p, TAU_ALG));
            }
        }
    }

    #[test]
    fn rho_of_unit_and_group_likes() {
        let (s3, a3) = s3_a3().unwrap();
        let (a, _, kf) = group_algebra_extension(&s3.group, &a3).unwrap();
        let rho = comodule_map_rho(&a, &kf.pi);
        let m = kf.group.order();
        let one = &rho * a.unit();
        assert_eq!(one[0], c(1.0));
        assert!(max_abs_vec(&one) <= 1.0);
        assert_eq!(one.iter().filter(|z| z.norm() > 0.0).count(), 1);
        let t = s3.index_of_cycles("(12)").unwrap();
        let img = &rho * a.alg.basis(t);
        assert_eq!(img[t * m + 1], c(1.0));
        assert!(is_cocentral(&a, &kf.pi));
    }

    #[test]
    fn normality_of_group_subalgebras() {
        let (s3, a3) = s3_a3().unwrap();
        let a = group_algebra(&s3.group).unwrap();
        let span = |sub: &Subgroup| {
            let v: Vec<Vector> = sub.members().iter().map(|&m| a.alg.basis(m)).collect();
            SubspaceBasis::from_vectors(6, &v)
        };
        assert!(is_normal_hopf_subalgebra(&a, &span(&a3)));
        let c2 = s3.subgroup_from_cycles(&["(12)"]).unwrap();
        assert!(is_hopf_subalgebra(&a, &span(&c2)));
        assert!(!is_normal_hopf_subalgebra(&a, &span(&c2)));
        let (h, _) = quotient_hopf(&a, &span(&a3)).unwrap();
        assert_eq!(h.dim(), 2);
        let (k, _) = quotient_hopf(&a, &SubspaceBasis::full(6)).unwrap();
        assert_eq!(k.dim(), 1);
    }

    #[test]
    fn quotient_is_recognized_as_group_algebra() {
        let (a, inc, _) = s4();
        let (_, pi) = quotient_hopf(&a, &inc.image()).unwrap();
        let kf = as_group_algebra(&pi, DEFAULT_SEED).unwrap();
        assert_eq!(kf.group.order(), 6);
        assert!(!kf.group.is_abelian());
        assert!(kf.pi.residual(&a) < TAU_ALG);
    }

    #[test]
    fn coefficient_spaces() {
        let (s3, _) = s3_a3().unwrap();
        let a = group_algebra(&s3.group).unwrap();
        assert_eq!(coefficient_space(&a, a.unit()).unwrap().dim(), 1);
        let t = a.alg.basis(1);
        let ct = coefficient_space(&a, &t).unwrap();
        assert!(ct.same_as(&SubspaceBasis::from_vectors(6, std::slice::from_ref(&t)), TAU_ALG));
        // kS3 as a coalgebra: comodule characters live in k^{S3}.
        let d = dual_group_algebra(&s3.group).unwrap();
        let dec = wedderburn(&dual_hopf(&d).alg, DEFAULT_SEED).unwrap();
        let two = dec.irr.iter().find(|ch| ch.degree_real() > 1.5).unwrap();
        assert_eq!(coefficient_space(&d, two.values()).unwrap().dim(), 4);
        assert!(coefficient_space(&a, &(&t + a.unit())).is_err());
    }

    #[test]
    fn cocentral_inversion_bismash() {
        let (a, inc, kf) = bismash(&c4_c2_matched_pair().unwrap()).unwrap();
        assert_eq!(a.dim(), 8);
        assert!(verify_hopf_axioms(&a).passed());
        assert!(is_cocentral(&a, &kf.pi));
        assert!(is_normal_hopf_subalgebra(&a, &inc.image()));
    }

    #[test]
    fn json_roundtrip() {
        let (a, _, _) = bismash(&c4_c2_matched_pair().unwrap()).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: HopfAlgebraData = serde_json::from_str(&text).unwrap();
        assert_eq!(back.comult, a.comult);
        assert_eq!(back.antipode(), a.antipode());
        assert!(verify_hopf_axioms(&back).passed());
    }
}
