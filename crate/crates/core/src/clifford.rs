//! Clifford theory across a normal Hopf subalgebra `B ⊆ A`.
//!
//! An [`Extension`] caches the character data of `A`, `B` and `A*` together
//! with the adjoint action of `A` on `B`, from which conjugate characters are
//! linear functions of `d`. [`analyze_alpha`] runs the whole pipeline for one
//! irreducible `α` of `B` and cross-checks every verdict against the others.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::groups::{is_invariant_subgroup_under_lact, orbit_and_stabilizer, MatchedPair, Subgroup};
use crate::hopf::{
    coefficient_space, dual_hopf, graded_components, is_cocentral, is_hopf_subalgebra,
    is_normal_hopf_subalgebra, subspace_product, HopfAlgebraData, HopfInclusion, KfSurjection,
};
use crate::linalg::{max_abs_vec, Matrix, SubspaceBasis, Vector, TAU_ALG, TAU_INT};
use crate::repcalc::{
    construct_irreducible_module, decompose, induce_character, regular_character,
    restrict_character, wedderburn, Character, ExplicitModule, SemisimpleDecomposition,
};

/// A normal Hopf subalgebra with all the character data the analysis needs.
pub struct Extension {
    pub a: HopfAlgebraData,
    pub inc: HopfInclusion,
    pub b: SubspaceBasis,
    pub kf: Option<KfSurjection>,
    pub mp: Option<MatchedPair>,
    pub dual: HopfAlgebraData,
    pub dec_a: SemisimpleDecomposition,
    pub dec_b: SemisimpleDecomposition,
    pub dec_dual: SemisimpleDecomposition,
    pub labels_a: Vec<String>,
    pub labels_b: Vec<String>,
    pub labels_dual: Vec<String>,
    /// `adj[k]` maps B-coordinates of `x` to B-coordinates of `S(e_k1) x e_k2`.
    adj: Vec<Matrix>,
    pub seed: u64,
}

impl Extension {
    pub fn new(
        a: HopfAlgebraData,
        inc: HopfInclusion,
        kf: Option<KfSurjection>,
        mp: Option<MatchedPair>,
        seed: u64,
    ) -> Result<Self> {
        let b = inc.image();
        if b.dim() != inc.small.dim() {
            return Err(Error::DimensionMismatch("embedding of B is not injective".into()));
        }
        if !is_normal_hopf_subalgebra(&a, &b) {
            return Err(Error::NotNormal("B is not a normal Hopf subalgebra of A".into()));
        }
        let r = inc.residual(&a);
        if r > TAU_ALG {
            return Err(Error::Consistency(format!("embedding is not a Hopf map ({r:.3e})")));
        }
        let dual = dual_hopf(&a);
        let dec_a = wedderburn(&a.alg, seed)?;
        let dec_b = wedderburn(&inc.small.alg, seed)?;
        let dec_dual = wedderburn(&dual.alg, seed)?;
        let e = &inc.embedding;
        let pullback = (e.adjoint() * e)
            .try_inverse()
            .ok_or_else(|| Error::NumericDegeneracy("embedding Gram matrix is singular".into()))?
            * e.adjoint();
        let s = a.antipode().ok_or_else(|| Error::NoAntipode("antipode unset".into()))?;
        let nb = inc.small.dim();
        let mut adj = Vec::with_capacity(a.dim());
        for k in 0..a.dim() {
            let mut m = Matrix::zeros(nb, nb);
            for j in 0..nb {
                let x = e.column(j).into_owned();
                let mut acc = Vector::zeros(a.dim());
                for &(p, q, v) in a.basis_coproduct(k) {
                    let left = a.mul(&s.column(p).into_owned(), &x);
                    acc += a.mul(&left, &a.alg.basis(q)) * v;
                }
                let coords = &pullback * &acc;
                if max_abs_vec(&(e * &coords - &acc)) > TAU_ALG {
                    return Err(Error::NotNormal("adjoint action leaves B".into()));
                }
                m.set_column(j, &coords);
            }
            adj.push(m);
        }
        let labels_a = (0..dec_a.len()).map(|i| format!("χ{i}")).collect();
        let labels_dual = (0..dec_dual.len()).map(|i| format!("d{i}")).collect();
        let labels_b = dec_b
            .irr
            .iter()
            .enumerate()
            .map(|(i, ch)| point_mass_label(ch, inc.small.labels()).unwrap_or(format!("α{i}")))
            .collect();
        Ok(Extension {
            a,
            inc,
            b,
            kf,
            mp,
            dual,
            dec_a,
            dec_b,
            dec_dual,
            labels_a,
            labels_b,
            labels_dual,
            adj,
            seed,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.a.dim()
    }

    pub fn dim_b(&self) -> usize {
        self.b.dim()
    }

    pub fn index(&self) -> Rational64 {
        Rational64::new(self.dim_a() as i64, self.dim_b() as i64)
    }

    /// Irreducible `A*`-character `d` as an element of `A`.
    pub fn d_vector(&self, i: usize) -> &Vector {
        self.dec_dual.irr[i].values()
    }

    pub fn d_degree(&self, i: usize) -> usize {
        self.dec_dual.dims[i]
    }

    pub fn restrict(&self, chi: &Character) -> Character {
        restrict_character(chi, &self.inc.embedding)
    }

    pub fn induce(&self, alpha: &Character) -> Result<Character> {
        induce_character(alpha, &self.inc.embedding, &self.dec_b, &self.dec_a)
    }

    /// Index in Irr(B) of an irreducible B-character, by value comparison.
    pub fn find_irr_b(&self, chi: &Character) -> Option<usize> {
        self.dec_b.irr.iter().position(|x| x.distance(chi) < TAU_INT)
    }

    /// Resolves an index or a label (`δ_g`, or the bare `g` for point masses).
    pub fn resolve_alpha(&self, sel: &str) -> Result<usize> {
        if let Ok(i) = sel.parse::<usize>() {
            if i < self.labels_b.len() {
                return Ok(i);
            }
            return Err(Error::Config(format!("alpha index {i} out of range")));
        }
        let bare = format!("δ_{sel}");
        self.labels_b
            .iter()
            .position(|l| l == sel || *l == bare)
            .ok_or_else(|| Error::Config(format!("no irreducible B-character labelled {sel}")))
    }
}

/// `δ_g` when the character is the evaluation at a single basis element
/// labelled `δ_g`.
fn point_mass_label(ch: &Character, labels: &[String]) -> Option<String> {
    let v = ch.values();
    let hot: Vec<usize> = (0..v.len()).filter(|&i| v[i].norm() > TAU_INT).collect();
    match hot.as_slice() {
        [j] if (v[*j] - crate::linalg::c(1.0)).norm() < TAU_INT && labels[*j].starts_with('δ') => {
            Some(labels[*j].clone())
        }
        _ => None,
    }
}

/// `^dα(x) = α(S(d₁) x d₂)` for an arbitrary `d ∈ A` and functional `α` on B.
pub fn conjugate_character(ext: &Extension, d: &Vector, alpha: &Character) -> Character {
    let nb = ext.dim_b();
    let mut values = Vector::zeros(nb);
    for (k, dk) in d.iter().enumerate() {
        if dk.norm() == 0.0 {
            continue;
        }
        values += ext.adj[k].transpose() * alpha.values() * *dk;
    }
    Character::new(values, &ext.inc.small.alg)
}

/// The B-module `V ⊗ M` with `b(v ⊗ m) = v₀ ⊗ S(v₁) b v₂ m` for a right
/// A-comodule `V` with `ρ(v) = Σ_k R_k v ⊗ e_k`.
pub fn twisted_tensor_module(ext: &Extension, coaction: &[Matrix], m: &ExplicitModule) -> ExplicitModule {
    let nb = ext.dim_b();
    let v = coaction.first().map(|r| r.nrows()).unwrap_or(0);
    let mut matrices = Vec::with_capacity(nb);
    for j in 0..nb {
        let mut act = Matrix::zeros(v * m.dim, v * m.dim);
        for (k, r) in coaction.iter().enumerate() {
            if crate::linalg::max_abs(r) == 0.0 {
                continue;
            }
            let y = ext.adj[k].column(j).into_owned();
            act += r.kronecker(&m.action(&y));
        }
        matrices.push(act);
    }
    ExplicitModule { dim: v * m.dim, matrices }
}

/// `W ⊗ M` for an `A*`-module `W`, viewed as an A-comodule.
pub fn conjugate_module(ext: &Extension, w: &ExplicitModule, m: &ExplicitModule) -> ExplicitModule {
    twisted_tensor_module(ext, &w.matrices, m)
}

/// `C ⊗ M` for a subcoalgebra `C` coacting on itself by `Δ`.
pub fn coalgebra_tensor_module(ext: &Extension, c: &SubspaceBasis, m: &ExplicitModule) -> Result<ExplicitModule> {
    let n = ext.dim_a();
    let q = c.basis();
    let mut coaction = vec![Matrix::zeros(c.dim(), c.dim()); n];
    for i in 0..c.dim() {
        let d = ext.a.comul(&c.vector(i));
        for (k, r) in coaction.iter_mut().enumerate() {
            let col = d.column(k).into_owned();
            if !c.contains(&col, TAU_ALG) {
                return Err(Error::Consistency("subspace is not a left subcoalgebra".into()));
            }
            r.set_column(i, &(q.adjoint() * col));
        }
    }
    Ok(twisted_tensor_module(ext, &coaction, m))
}

fn ser_rational<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Matched partitions of Irr(A) and Irr(B) with the class sums.
#[derive(Clone, Debug)]
pub struct EquivalenceClassData {
    pub a_classes: Vec<Vec<usize>>,
    pub b_classes: Vec<Vec<usize>>,
    pub a_sums: Vec<Character>,
    pub b_sums: Vec<Character>,
    /// `restriction[χ][α] = m_B(χ↓, α)`.
    pub restriction: Vec<Vec<usize>>,
}

impl EquivalenceClassData {
    pub fn class_of_alpha(&self, alpha: usize) -> usize {
        self.b_classes
            .iter()
            .position(|c| c.contains(&alpha))
            .expect("every α lies in a class")
    }

    pub fn len(&self) -> usize {
        self.a_classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_classes.is_empty()
    }
}

/// Connected components of the restriction graph `{(χ, α) : m_B(χ↓, α) > 0}`.
pub fn equivalence_classes(ext: &Extension) -> Result<EquivalenceClassData> {
    let na = ext.dec_a.len();
    let nb = ext.dec_b.len();
    let restriction = ext
        .dec_a
        .irr
        .iter()
        .map(|chi| decompose(&ext.restrict(chi), &ext.dec_b))
        .collect::<Result<Vec<_>>>()?;
    // Union-find over χ (0..na) and α (na..na+nb).
    let mut parent: Vec<usize> = (0..na + nb).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (chi, row) in restriction.iter().enumerate() {
        for (alpha, &m) in row.iter().enumerate() {
            if m > 0 {
                let (x, y) = (find(&mut parent, chi), find(&mut parent, na + alpha));
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut b_classes: Vec<Vec<usize>> = Vec::new();
    for alpha in 0..nb {
        let r = find(&mut parent, na + alpha);
        match roots.iter().position(|&x| x == r) {
            Some(i) => b_classes[i].push(alpha),
            None => {
                roots.push(r);
                b_classes.push(vec![alpha]);
            }
        }
    }
    let mut a_classes = vec![Vec::new(); roots.len()];
    for chi in 0..na {
        let r = find(&mut parent, chi);
        let i = roots
            .iter()
            .position(|&x| x == r)
            .ok_or_else(|| Error::Consistency("irreducible with zero restriction".into()))?;
        a_classes[i].push(chi);
    }
    for (ac, bc) in a_classes.iter().zip(&b_classes) {
        for &chi in ac {
            for &alpha in bc {
                if restriction[chi][alpha] == 0 {
                    return Err(Error::NotNormal(format!(
                        "restriction graph block is not complete at ({}, {})",
                        ext.labels_a[chi], ext.labels_b[alpha]
                    )));
                }
            }
        }
    }
    let weighted = |idx: &[usize], dec: &SemisimpleDecomposition| {
        idx.iter().fold(Character::zero(dec.irr[0].values().len()), |acc, &i| {
            &acc + &(&dec.irr[i] * dec.dims[i] as f64)
        })
    };
    let a_sums = a_classes.iter().map(|c| weighted(c, &ext.dec_a)).collect();
    let b_sums = b_classes.iter().map(|c| weighted(c, &ext.dec_b)).collect();
    Ok(EquivalenceClassData {
        a_classes,
        b_classes,
        a_sums,
        b_sums,
        restriction,
    })
}

/// Residuals of the restriction, induction and class-sum identities, the
/// regular-character identity and the coset decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct ClassFormulaReport {
    pub classes: usize,
    pub restriction_residual: f64,
    pub induction_residual: f64,
    pub class_sum_residual: f64,
    pub class_degree_residual: f64,
    pub regular_restriction_residual: f64,
    pub frobenius_mismatches: usize,
    pub cosets: usize,
    pub coset_decomposition: bool,
    pub bc_equals_cb: bool,
}

impl ClassFormulaReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.restriction_residual,
            self.induction_residual,
            self.class_sum_residual,
            self.class_degree_residual,
            self.regular_restriction_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual() < tol
            && self.frobenius_mismatches == 0
            && self.coset_decomposition
            && self.bc_equals_cb
    }
}

pub fn verify_class_formulas(ext: &Extension, ecd: &EquivalenceClassData) -> Result<ClassFormulaReport> {
    let s = ext.dim_a() as f64 / ext.dim_b() as f64;
    let mut rr: f64 = 0.0;
    let mut ir: f64 = 0.0;
    let mut cr: f64 = 0.0;
    let mut dr: f64 = 0.0;
    let mut frob = 0;
    for (i, (ac, bc)) in ecd.a_classes.iter().zip(&ecd.b_classes).enumerate() {
        let (ai, bi) = (&ecd.a_sums[i], &ecd.b_sums[i]);
        let (ai1, bi1) = (ai.degree_real(), bi.degree_real());
        for &chi in ac {
            let x = &ext.dec_a.irr[chi];
            let lhs = &ext.restrict(x) * (1.0 / x.degree_real());
            rr = rr.max(lhs.distance(&(bi * (1.0 / bi1))));
        }
        for &alpha in bc {
            let x = &ext.dec_b.irr[alpha];
            let up = ext.induce(x)?;
            let lhs = &up * (1.0 / x.degree_real());
            ir = ir.max(lhs.distance(&(ai * (s / ai1))));
        }
        cr = cr.max(ext.restrict(ai).distance(&(bi * s)));
        dr = dr.max((ai1 - s * bi1).abs());
    }
    for (chi, row) in ecd.restriction.iter().enumerate() {
        for (alpha, &m) in row.iter().enumerate() {
            let up = decompose(&ext.induce(&ext.dec_b.irr[alpha])?, &ext.dec_a)?;
            if up[chi] != m {
                frob += 1;
            }
        }
    }
    let reg = ext.restrict(&regular_character(&ext.a.alg));
    let reg_b = &regular_character(&ext.inc.small.alg) * s;
    let (cosets, coset_ok, bc_cb) = coset_decomposition(ext)?;
    Ok(ClassFormulaReport {
        classes: ecd.len(),
        restriction_residual: rr,
        induction_residual: ir,
        class_sum_residual: cr,
        class_degree_residual: dr,
        regular_restriction_residual: reg.distance(&reg_b),
        frobenius_mismatches: frob,
        cosets: cosets.len(),
        coset_decomposition: coset_ok,
        bc_equals_cb: bc_cb,
    })
}

/// Distinct cosets `BC` over simple subcoalgebras `C`; whether they form a
/// direct sum decomposition of A; whether `BC = CB` throughout.
pub fn coset_decomposition(ext: &Extension) -> Result<(Vec<SubspaceBasis>, bool, bool)> {
    let mut cosets: Vec<SubspaceBasis> = Vec::new();
    let mut bc_cb = true;
    for i in 0..ext.dec_dual.len() {
        let c = coefficient_space(&ext.a, ext.d_vector(i))?;
        let bc = subspace_product(&ext.a, &ext.b, &c);
        let cb = subspace_product(&ext.a, &c, &ext.b);
        bc_cb &= bc.same_as(&cb, TAU_ALG);
        if !cosets.iter().any(|x| x.same_as(&bc, TAU_ALG)) {
            cosets.push(bc);
        }
    }
    let mut ok = true;
    for i in 0..cosets.len() {
        for j in i + 1..cosets.len() {
            ok &= cosets[i].intersection_dim(&cosets[j]) == 0;
        }
    }
    let total: usize = cosets.iter().map(|c| c.dim()).sum();
    ok &= total == ext.dim_a();
    Ok((cosets, ok, bc_cb))
}

/// `Z` for one `α` with its character data.
#[derive(Clone, Debug)]
pub struct StabilizerResult {
    pub alpha: usize,
    pub stabilizing_d: Vec<usize>,
    pub z: SubspaceBasis,
    pub dim_z: usize,
    pub z_alg: Algebra,
    pub z_dec: SemisimpleDecomposition,
    /// Columns are `B` basis elements in `Z` coordinates.
    pub b_in_z: Matrix,
    pub z1: Vec<usize>,
    pub psi_alpha: Character,
    /// Max residual of `ψ↓ = (ψ(1)/α(1)) α` over `ψ ∈ Z_1`.
    pub z1_restriction_residual: f64,
}

impl StabilizerResult {
    /// Columns are `Z` basis elements in `A` coordinates.
    pub fn z_in_a(&self) -> &Matrix {
        self.z.basis()
    }
}

fn stabilizes(ext: &Extension, d: usize, alpha: &Character) -> bool {
    let conj = conjugate_character(ext, ext.d_vector(d), alpha);
    conj.distance(&(alpha * ext.d_degree(d) as f64)) < TAU_INT
}

pub fn stabilizer_z(ext: &Extension, alpha_idx: usize) -> Result<StabilizerResult> {
    let alpha = &ext.dec_b.irr[alpha_idx];
    let stabilizing_d: Vec<usize> = (0..ext.dec_dual.len())
        .filter(|&d| stabilizes(ext, d, alpha))
        .collect();
    let mut z = SubspaceBasis::zero(ext.dim_a());
    let mut expected = 0;
    for &d in &stabilizing_d {
        z = z.sum(&coefficient_space(&ext.a, ext.d_vector(d))?);
        expected += ext.d_degree(d).pow(2);
    }
    if z.dim() != expected {
        return Err(Error::Consistency(format!(
            "stabilizer span has dim {} but Σ ε(d)² = {expected}",
            z.dim()
        )));
    }
    if !z.contains_subspace(&ext.b, TAU_ALG) {
        return Err(Error::Consistency("B ⊄ Z".into()));
    }
    if !is_hopf_subalgebra(&ext.a, &z) {
        return Err(Error::Consistency("Z is not a Hopf subalgebra".into()));
    }
    let z_alg = Algebra::from_subspace(&ext.a.alg, &z)?;
    let z_dec = wedderburn(&z_alg, ext.seed)?;
    let b_in_z = z.basis().adjoint() * &ext.inc.embedding;
    let a1 = alpha.degree_real();
    let mut z1 = Vec::new();
    let mut resid: f64 = 0.0;
    for (i, psi) in z_dec.irr.iter().enumerate() {
        let down = restrict_character(psi, &b_in_z);
        if decompose(&down, &ext.dec_b)?[alpha_idx] > 0 {
            z1.push(i);
            resid = resid.max(down.distance(&(alpha * (psi.degree_real() / a1))));
        }
    }
    let psi_alpha = z1.iter().fold(Character::zero(z.dim()), |acc, &i| {
        &acc + &(&z_dec.irr[i] * z_dec.dims[i] as f64)
    });
    let want = z.dim() as f64 / ext.dim_b() as f64 * a1 * a1;
    if (psi_alpha.degree_real() - want).abs() > TAU_INT {
        return Err(Error::Consistency(format!(
            "ψ_α(1) = {} but |Z|/|B|·α(1)² = {want}",
            psi_alpha.degree_real()
        )));
    }
    Ok(StabilizerResult {
        alpha: alpha_idx,
        dim_z: z.dim(),
        stabilizing_d,
        z,
        z_alg,
        z_dec,
        b_in_z,
        z1,
        psi_alpha,
        z1_restriction_residual: resid,
    })
}

/// Checks on the action `d ↦ ^dα` itself.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport {
    /// Constituents of `d·d'` and `S(d)` stabilize whenever `d`, `d'` do.
    pub stabilizing_set_closed: bool,
    /// Max residual of `^d(^{d'}α) = ^{dd'}α` over all pairs.
    pub composition_residual: f64,
    /// The class of `α` equals the constituents of `^dα`, `d ∈ Irr(A*)`.
    pub class_from_dual_irr: bool,
    /// The class of `α` equals its orbit under the grading group.
    pub class_from_grading_orbit: Option<bool>,
    /// Max residual between the trace of `W ⊗ M` and `^dα`.
    pub conjugate_module_residual: f64,
    /// `C ⊗ M ≅ M^{|C|}` exactly for the simple subcoalgebras inside `Z`.
    pub coalgebra_tensor_consistent: bool,
}

pub fn conjugation_checks(
    ext: &Extension,
    ecd: &EquivalenceClassData,
    sr: &StabilizerResult,
    m: &ExplicitModule,
) -> Result<ConjugationReport> {
    let alpha = &ext.dec_b.irr[sr.alpha];
    let nd = ext.dec_dual.len();
    let stab: BTreeSet<usize> = sr.stabilizing_d.iter().copied().collect();
    let mut closed = true;
    for &d in &stab {
        for &e in &stab {
            let prod = ext.a.mul(ext.d_vector(d), ext.d_vector(e));
            let mults = decompose(&Character::new(prod, &ext.dual.alg), &ext.dec_dual)?;
            closed &= mults.iter().enumerate().all(|(i, &k)| k == 0 || stab.contains(&i));
        }
        let star = ext.a.apply_antipode(ext.d_vector(d));
        let mults = decompose(&Character::new(star, &ext.dual.alg), &ext.dec_dual)?;
        closed &= mults.iter().enumerate().all(|(i, &k)| k == 0 || stab.contains(&i));
    }
    let conj: Vec<Character> = (0..nd)
        .map(|d| conjugate_character(ext, ext.d_vector(d), alpha))
        .collect();
    let mut comp: f64 = 0.0;
    for d in 0..nd {
        for e in 0..nd {
            let lhs = conjugate_character(ext, ext.d_vector(d), &conj[e]);
            let prod = ext.a.mul(ext.d_vector(d), ext.d_vector(e));
            comp = comp.max(lhs.distance(&conjugate_character(ext, &prod, alpha)));
        }
    }
    let mut constituents = BTreeSet::new();
    for c in &conj {
        for (i, &k) in decompose(c, &ext.dec_b)?.iter().enumerate() {
            if k > 0 {
                constituents.insert(i);
            }
        }
    }
    let class: BTreeSet<usize> = ecd.b_classes[ecd.class_of_alpha(sr.alpha)].iter().copied().collect();
    let mut module_res: f64 = 0.0;
    let mut tpr = true;
    for d in 0..nd {
        let w = construct_irreducible_module(&ext.dual.alg, &ext.dec_dual, d, ext.seed)?;
        let wm = conjugate_module(ext, &w, m);
        module_res = module_res
            .max(wm.residual(&ext.inc.small.alg))
            .max(wm.character(&ext.inc.small.alg).distance(&conj[d]));
        let c = coefficient_space(&ext.a, ext.d_vector(d))?;
        let cm = coalgebra_tensor_module(ext, &c, m)?;
        module_res = module_res.max(cm.residual(&ext.inc.small.alg));
        let isotypic = cm
            .character(&ext.inc.small.alg)
            .distance(&(alpha * c.dim() as f64))
            < TAU_INT;
        tpr &= isotypic == sr.z.contains_subspace(&c, TAU_ALG);
    }
    Ok(ConjugationReport {
        stabilizing_set_closed: closed,
        composition_residual: comp,
        class_from_dual_irr: constituents == class,
        class_from_grading_orbit: None,
        conjugate_module_residual: module_res,
        coalgebra_tensor_consistent: tpr,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InductionRow {
    pub psi: String,
    pub psi_degree: usize,
    pub induced: Vec<(String, usize)>,
    pub irreducible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KfSection {
    pub stabilizer_h: Vec<String>,
    pub orbit: Vec<String>,
    pub dim_s: usize,
    pub s_is_hopf: bool,
    pub z_in_s: bool,
    pub z_equals_s: bool,
    /// `b_i(1)·|H| = |F|·α(1)²`.
    pub orbit_identity: bool,
    /// `|S| = |B|·|H|`.
    pub s_dimension_identity: bool,
    /// Agreement with the stabilizer of `◁` for bismash products.
    pub matches_right_action: Option<bool>,
    /// `G ▷ H ⊆ H`, for bismash products.
    pub lact_invariant: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordReport {
    pub alpha: String,
    pub alpha_index: usize,
    pub alpha_degree: usize,
    pub class_index: usize,
    pub class_b: Vec<String>,
    pub class_a: Vec<String>,
    pub b_i_1: usize,
    pub a_i_1: usize,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational64,
    pub dim_z: usize,
    pub stabilizing_d: Vec<String>,
    pub z1: Vec<String>,
    /// `m_B(α↑_B^A↓, α)`, `m_B(α↑_B^Z↓, α)`.
    pub socle_multiplicities: (usize, usize),
    pub witherspoon_equality: bool,
    pub direct_holds: bool,
    pub verdict: &'static str,
    pub induction_table: Vec<InductionRow>,
    pub induced_psi_alpha_residual: f64,
    pub z1_restriction_residual: f64,
    pub conjugation: ConjugationReport,
    pub kf: Option<KfSection>,
}

/// `ψ_α↑_Z^A` against `(α(1)²/b_i(1))·a_i`.
pub fn lemma_infr_check(ext: &Extension, sr: &StabilizerResult, ecd: &EquivalenceClassData) -> Result<f64> {
    let i = ecd.class_of_alpha(sr.alpha);
    let up = induce_character(&sr.psi_alpha, sr.z_in_a(), &sr.z_dec, &ext.dec_a)?;
    let a1 = ext.dec_b.irr[sr.alpha].degree_real();
    let want = &ecd.a_sums[i] * (a1 * a1 / ecd.b_sums[i].degree_real());
    Ok(up.distance(&want))
}

/// `|A|α(1)²/b_i(1)` with the two socle multiplicities, each checked against
/// its closed form. Fails if `|Z|` exceeds the bound.
pub fn prop_num_bound(
    ext: &Extension,
    sr: &StabilizerResult,
    ecd: &EquivalenceClassData,
) -> Result<(Rational64, bool, (usize, usize))> {
    let i = ecd.class_of_alpha(sr.alpha);
    let alpha = &ext.dec_b.irr[sr.alpha];
    let a1 = ext.dec_b.dims[sr.alpha] as i64;
    let bi1 = ecd.b_sums[i].degree_real().round() as i64;
    let bound = Rational64::new(ext.dim_a() as i64 * a1 * a1, bi1);
    let dim_z = Rational64::from_integer(sr.dim_z as i64);
    if dim_z > bound {
        return Err(Error::TheoremViolation(format!("|Z| = {dim_z} exceeds the bound {bound}")));
    }
    let full = decompose(&ext.restrict(&ext.induce(alpha)?), &ext.dec_b)?[sr.alpha];
    let up_z = induce_character(alpha, &sr.b_in_z, &ext.dec_b, &sr.z_dec)?;
    let part = decompose(&restrict_character(&up_z, &sr.b_in_z), &ext.dec_b)?[sr.alpha];
    let want_full = Rational64::new(a1 * a1 * ext.dim_a() as i64, bi1 * ext.dim_b() as i64);
    let want_part = Rational64::new(sr.dim_z as i64, ext.dim_b() as i64);
    if Rational64::from_integer(full as i64) != want_full || Rational64::from_integer(part as i64) != want_part {
        return Err(Error::Consistency(format!(
            "socle multiplicities ({full}, {part}) differ from ({want_full}, {want_part})"
        )));
    }
    Ok((bound, dim_z == bound, (full, part)))
}

/// Induces every `ψ ∈ Z_1` to A and decides whether induction is a bijection
/// onto the class `A_i`.
pub fn clifford_direct_check(
    ext: &Extension,
    sr: &StabilizerResult,
    ecd: &EquivalenceClassData,
) -> Result<(bool, Vec<InductionRow>)> {
    let class: BTreeSet<usize> = ecd.a_classes[ecd.class_of_alpha(sr.alpha)].iter().copied().collect();
    let mut rows = Vec::new();
    let mut images = BTreeSet::new();
    let mut all_irreducible = true;
    let mut injective = true;
    for &psi in &sr.z1 {
        let up = induce_character(&sr.z_dec.irr[psi], sr.z_in_a(), &sr.z_dec, &ext.dec_a)?;
        let mults = decompose(&up, &ext.dec_a)?;
        let irreducible = mults.iter().sum::<usize>() == 1;
        all_irreducible &= irreducible;
        if irreducible {
            let chi = mults.iter().position(|&k| k == 1).expect("one constituent");
            injective &= images.insert(chi);
        }
        rows.push(InductionRow {
            psi: format!("ψ{psi}"),
            psi_degree: sr.z_dec.dims[psi],
            induced: mults
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| (ext.labels_a[i].clone(), k))
                .collect(),
            irreducible,
        });
    }
    Ok((all_irreducible && injective && images == class, rows))
}

/// Result of the grading analysis for one `α`.
#[derive(Clone, Debug)]
pub struct KfAnalysis {
    pub section: KfSection,
    pub h: Subgroup,
    pub orbit: BTreeSet<usize>,
    pub s: SubspaceBasis,
}

/// B-character of `A_f ⊗_B M`, realized as the cokernel of
/// `(a, b, m) ↦ ab ⊗ m − a ⊗ bm`.
pub fn graded_tensor_character(ext: &Extension, af: &SubspaceBasis, m: &ExplicitModule) -> Result<Character> {
    let r = af.dim();
    let md = m.dim;
    let nb = ext.dim_b();
    let e = &ext.inc.embedding;
    let mut rel = Matrix::zeros(r * md, r * nb * md);
    let mut col = 0;
    for i in 0..r {
        let a = af.vector(i);
        for j in 0..nb {
            let ab = ext.a.mul(&a, &e.column(j).into_owned());
            if !af.contains(&ab, TAU_ALG) {
                return Err(Error::Consistency("graded component is not a right B-module".into()));
            }
            let coords = af.coords(&ab);
            let bm = &m.matrices[j];
            for mu in 0..md {
                for ip in 0..r {
                    rel[(ip * md + mu, col)] += coords[ip];
                }
                for nu in 0..md {
                    rel[(i * md + nu, col)] -= bm[(nu, mu)];
                }
                col += 1;
            }
        }
    }
    let w = SubspaceBasis::from_columns(&rel).complement();
    if w.dim() != md {
        return Err(Error::DimensionMismatch(format!(
            "A_f ⊗_B M has dim {} instead of {md}",
            w.dim()
        )));
    }
    let mut values = Vector::zeros(nb);
    for j in 0..nb {
        let left = af.basis().adjoint() * ext.a.alg.left_mult_matrix(&e.column(j).into_owned()) * af.basis();
        let act = left.kronecker(&Matrix::identity(md, md));
        values[j] = (w.basis().adjoint() * act * w.basis()).trace();
    }
    Ok(Character::new(values, &ext.inc.small.alg))
}

pub fn kf_analysis(
    ext: &Extension,
    kf: &KfSurjection,
    sr: &StabilizerResult,
    ecd: &EquivalenceClassData,
    m: &ExplicitModule,
) -> Result<KfAnalysis> {
    let comps = graded_components(&ext.a, kf)?;
    let fg = &kf.group;
    let alpha = &ext.dec_b.irr[sr.alpha];
    let mut h_members = Vec::new();
    let mut orbit = BTreeSet::new();
    for (f, af) in comps.iter().enumerate() {
        let ch = graded_tensor_character(ext, af, m)?;
        let idx = ext
            .find_irr_b(&ch)
            .ok_or_else(|| Error::Consistency("A_f ⊗_B M is not irreducible".into()))?;
        orbit.insert(idx);
        if idx == sr.alpha {
            h_members.push(f);
        }
    }
    let h = Subgroup::new(fg, &h_members)
        .map_err(|e| Error::Consistency(format!("stabilizer is not a subgroup: {e}")))?;
    let mut s = SubspaceBasis::zero(ext.dim_a());
    for &f in h.members() {
        s = s.sum(&comps[f]);
    }
    let s_is_hopf = is_hopf_subalgebra(&ext.a, &s);
    let z_in_s = s.contains_subspace(&sr.z, TAU_ALG);
    if !z_in_s {
        return Err(Error::TheoremViolation("Z ⊄ S".into()));
    }
    let z_equals_s = z_in_s && s.dim() == sr.dim_z;
    let i = ecd.class_of_alpha(sr.alpha);
    let bi1 = ecd.b_sums[i].degree_real().round() as usize;
    let a1 = alpha.degree_real().round() as usize;
    let orbit_identity = bi1 * h.order() == fg.order() * a1 * a1;
    let (matches, invariant) = match &ext.mp {
        Some(mp) => {
            let g = ext.inc.small.labels().iter().position(|l| *l == ext.labels_b[sr.alpha]);
            match g {
                Some(g) => {
                    let (orb, stab) = orbit_and_stabilizer(mp, g)?;
                    let orb_b: BTreeSet<usize> = orb
                        .iter()
                        .filter_map(|&x| ext.labels_b.iter().position(|l| *l == ext.inc.small.labels()[x]))
                        .collect();
                    (
                        Some(stab.members() == h.members() && orb_b == orbit),
                        Some(is_invariant_subgroup_under_lact(mp, &h)),
                    )
                }
                None => (None, None),
            }
        }
        None => (None, None),
    };
    let section = KfSection {
        stabilizer_h: h.members().iter().map(|&x| fg.label(x).to_string()).collect(),
        orbit: orbit.iter().map(|&x| ext.labels_b[x].clone()).collect(),
        dim_s: s.dim(),
        s_is_hopf,
        z_in_s,
        z_equals_s,
        orbit_identity,
        s_dimension_identity: s.dim() == ext.dim_b() * h.order(),
        matches_right_action: matches,
        lact_invariant: invariant,
    };
    Ok(KfAnalysis { section, h, orbit, s })
}

/// The full per-`α` pipeline with every theorem cross-check enforced.
pub fn analyze_alpha(ext: &Extension, ecd: &EquivalenceClassData, alpha_idx: usize) -> Result<CliffordReport> {
    let sr = stabilizer_z(ext, alpha_idx)?;
    let m = construct_irreducible_module(&ext.inc.small.alg, &ext.dec_b, alpha_idx, ext.seed)?;
    let mut conjugation = conjugation_checks(ext, ecd, &sr, &m)?;
    let infr = lemma_infr_check(ext, &sr, ecd)?;
    let (bound, equality, socle) = prop_num_bound(ext, &sr, ecd)?;
    let (direct, table) = clifford_direct_check(ext, &sr, ecd)?;
    let i = ecd.class_of_alpha(alpha_idx);
    let kf = match &ext.kf {
        Some(kf) => {
            let k = kf_analysis(ext, kf, &sr, ecd, &m)?;
            let class: BTreeSet<usize> = ecd.b_classes[i].iter().copied().collect();
            conjugation.class_from_grading_orbit = Some(k.orbit == class);
            Some(k.section)
        }
        None => None,
    };
    let report = CliffordReport {
        alpha: ext.labels_b[alpha_idx].clone(),
        alpha_index: alpha_idx,
        alpha_degree: ext.dec_b.dims[alpha_idx],
        class_index: i,
        class_b: ecd.b_classes[i].iter().map(|&x| ext.labels_b[x].clone()).collect(),
        class_a: ecd.a_classes[i].iter().map(|&x| ext.labels_a[x].clone()).collect(),
        b_i_1: ecd.b_sums[i].degree_real().round() as usize,
        a_i_1: ecd.a_sums[i].degree_real().round() as usize,
        bound,
        dim_z: sr.dim_z,
        stabilizing_d: sr.stabilizing_d.iter().map(|&d| ext.labels_dual[d].clone()).collect(),
        z1: sr.z1.iter().map(|&p| format!("ψ{p}")).collect(),
        socle_multiplicities: socle,
        witherspoon_equality: equality,
        direct_holds: direct,
        verdict: if direct { "HOLDS" } else { "FAILS" },
        induction_table: table,
        induced_psi_alpha_residual: infr,
        z1_restriction_residual: sr.z1_restriction_residual,
        conjugation,
        kf,
    };
    theorem_main_crosscheck(&report)?;
    Ok(report)
}

/// Enforces that the num-bound equality, the direct bijection check and, in
/// the graded case, `Z = S` and the Hopf-subalgebra test all agree.
pub fn theorem_main_crosscheck(r: &CliffordReport) -> Result<bool> {
    if r.witherspoon_equality != r.direct_holds {
        return Err(Error::TheoremViolation(format!(
            "{}: bound equality {} but direct check {}",
            r.alpha, r.witherspoon_equality, r.direct_holds
        )));
    }
    if let Some(k) = &r.kf {
        if k.z_equals_s != r.direct_holds || k.s_is_hopf != r.direct_holds {
            return Err(Error::TheoremViolation(format!(
                "{}: Z = S is {}, S Hopf is {}, verdict {}",
                r.alpha, k.z_equals_s, k.s_is_hopf, r.direct_holds
            )));
        }
        if let Some(inv) = k.lact_invariant {
            if inv != k.s_is_hopf {
                return Err(Error::TheoremViolation(format!(
                    "{}: G ▷ H ⊆ H is {inv} but S Hopf is {}",
                    r.alpha, k.s_is_hopf
                )));
            }
        }
    }
    Ok(r.direct_holds)
}

/// Uniform coefficients of `π(d)`, the images `π(C)`, the cosets `BC` as sums
/// of graded components, and the partition of F by supports.
#[derive(Clone, Debug, Serialize)]
pub struct GradingReport {
    pub blocks: Vec<Vec<String>>,
    pub uniform_coefficient_residual: f64,
    pub image_of_coalgebra: bool,
    pub coset_is_graded_sum: bool,
    pub blocks_partition_f: bool,
    pub cocentral: bool,
}

impl GradingReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.uniform_coefficient_residual < tol
            && self.image_of_coalgebra
            && self.coset_is_graded_sum
            && self.blocks_partition_f
    }
}

pub fn eq7_and_cosets_check(ext: &Extension, kf: &KfSurjection) -> Result<GradingReport> {
    let nf = kf.group.order();
    let comps = graded_components(&ext.a, kf)?;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut uniform: f64 = 0.0;
    let mut image_ok = true;
    let mut coset_ok = true;
    for d in 0..ext.dec_dual.len() {
        let v = kf.pi.apply(ext.d_vector(d));
        let support: Vec<usize> = (0..nf).filter(|&f| v[f].norm() > TAU_INT).collect();
        let coef = ext.d_degree(d) as f64 / support.len() as f64;
        for &f in &support {
            uniform = uniform.max((v[f] - crate::linalg::c(coef)).norm());
        }
        let c = coefficient_space(&ext.a, ext.d_vector(d))?;
        let img = SubspaceBasis::from_columns(&(&kf.pi.matrix * c.basis()));
        let want_img = SubspaceBasis::from_vectors(
            nf,
            &support.iter().map(|&f| crate::linalg::basis_vector(nf, f)).collect::<Vec<_>>(),
        );
        image_ok &= img.same_as(&want_img, TAU_ALG);
        let bc = subspace_product(&ext.a, &ext.b, &c);
        let graded = support
            .iter()
            .fold(SubspaceBasis::zero(ext.dim_a()), |acc, &f| acc.sum(&comps[f]));
        coset_ok &= bc.same_as(&graded, TAU_ALG);
        if !blocks.contains(&support) {
            blocks.push(support);
        }
    }
    blocks.sort();
    let mut seen = vec![0usize; nf];
    for b in &blocks {
        for &f in b {
            seen[f] += 1;
        }
    }
    Ok(GradingReport {
        blocks: blocks
            .iter()
            .map(|b| b.iter().map(|&f| kf.group.label(f).to_string()).collect())
            .collect(),
        uniform_coefficient_residual: uniform,
        image_of_coalgebra: image_ok,
        coset_is_graded_sum: coset_ok,
        blocks_partition_f: seen.iter().all(|&k| k == 1),
        cocentral: is_cocentral(&ext.a, &kf.pi),
    })
}

/// For a cocentral extension, every `α` must satisfy the correspondence with
/// `Z = S`.
pub fn corollary_coc_check(ext: &Extension, reports: &[CliffordReport]) -> Result<bool> {
    let kf = match &ext.kf {
        Some(kf) => kf,
        None => return Ok(false),
    };
    if !is_cocentral(&ext.a, &kf.pi) {
        return Ok(false);
    }
    for r in reports {
        let z_s = r.kf.as_ref().map(|k| k.z_equals_s).unwrap_or(false);
        if !r.direct_holds || !z_s {
            return Err(Error::TheoremViolation(format!(
                "cocentral extension but the correspondence fails for {}",
                r.alpha
            )));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{c4_c2_matched_pair, s3_a3, s4_matched_pair};
    use crate::groups::Composition;
    use crate::hopf::{bismash, group_algebra_extension};
    use crate::repcalc::DEFAULT_SEED;

    fn s4_ext() -> Extension {
        let mp = s4_matched_pair(Composition::RightToLeft).unwrap();
        let (a, inc, kf) = bismash(&mp).unwrap();
        Extension::new(a, inc, Some(kf), Some(mp), DEFAULT_SEED).unwrap()
    }

    fn s3_ext() -> Extension {
        let (s3, a3) = s3_a3().unwrap();
        let (a, inc, kf) = group_algebra_extension(&s3.group, &a3).unwrap();
        Extension::new(a, inc, Some(kf), None, DEFAULT_SEED).unwrap()
    }

    fn coc_ext() -> Extension {
        let mp = c4_c2_matched_pair().unwrap();
        let (a, inc, kf) = bismash(&mp).unwrap();
        Extension::new(a, inc, Some(kf), Some(mp), DEFAULT_SEED).unwrap()
    }

    #[test]
    fn counterexample_fails_for_g() {
        let ext = s4_ext();
        assert_eq!(ext.dec_a.dims, vec![1, 1, 2, 3, 3]);
        let ecd = equivalence_classes(&ext).unwrap();
        let f = verify_class_formulas(&ext, &ecd).unwrap();
        assert!(f.passed(1e-6), "{f:?}");
        let g = ext.resolve_alpha("g").unwrap();
        let r = analyze_alpha(&ext, &ecd, g).unwrap();
        assert_eq!(r.verdict, "FAILS");
        assert_eq!(r.dim_z, 4);
        assert_eq!(r.bound, Rational64::from_integer(8));
        assert_eq!(r.b_i_1, 3);
        assert_eq!(r.a_i_1, 18);
        let k = r.kf.as_ref().unwrap();
        assert_eq!(k.stabilizer_h, vec!["1", "t"]);
        assert_eq!(k.dim_s, 8);
        assert!(!k.s_is_hopf);
        assert_eq!(k.matches_right_action, Some(true));
        assert_eq!(k.lact_invariant, Some(false));
        assert_eq!(r.induction_table.len(), 1);
        assert_eq!(r.induction_table[0].induced, vec![("χ3".to_string(), 1), ("χ4".to_string(), 1)]);
        assert!(r.conjugation.stabilizing_set_closed);
        assert!(r.conjugation.class_from_dual_irr);
        assert_eq!(r.conjugation.class_from_grading_orbit, Some(true));
        assert!(r.conjugation.coalgebra_tensor_consistent);
        assert!(r.conjugation.composition_residual < 1e-8);
        assert!(r.conjugation.conjugate_module_residual < 1e-8);
        let gr = eq7_and_cosets_check(&ext, ext.kf.as_ref().unwrap()).unwrap();
        assert!(gr.passed(1e-6), "{gr:?}");
        assert!(!gr.cocentral);
    }

    #[test]
    fn classical_case_holds() {
        let ext = s3_ext();
        let ecd = equivalence_classes(&ext).unwrap();
        assert!(verify_class_formulas(&ext, &ecd).unwrap().passed(1e-6));
        for alpha in 0..3 {
            let r = analyze_alpha(&ext, &ecd, alpha).unwrap();
            assert_eq!(r.verdict, "HOLDS");
        }
        let omega = (0..3).find(|&i| ext.dec_b.irr[i].distance(&ext.dec_b.irr[0]) > 0.5).unwrap();
        let r = analyze_alpha(&ext, &ecd, omega).unwrap();
        assert_eq!(r.dim_z, 3);
        assert_eq!(r.bound, Rational64::from_integer(3));
    }

    #[test]
    fn cocentral_case_holds_everywhere() {
        let ext = coc_ext();
        assert_eq!(ext.dec_a.dims, vec![1, 1, 1, 1, 2]);
        let ecd = equivalence_classes(&ext).unwrap();
        let reports: Vec<_> = (0..4).map(|a| analyze_alpha(&ext, &ecd, a).unwrap()).collect();
        assert!(corollary_coc_check(&ext, &reports).unwrap());
    }
}
