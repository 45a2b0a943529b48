//! Finite groups as Cayley tables, permutation closures, subgroups, and the
//! matched pair of actions coming from an exact factorization `Σ = G·F`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the order of a group produced by closure.
pub const DEFAULT_SIZE_CAP: usize = 10_000;

/// How a product of two permutations acts on points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Composition {
    /// `(σ·τ)(i) = σ(τ(i))`: apply the right factor first.
    #[default]
    RightToLeft,
    /// `(σ·τ)(i) = τ(σ(i))`: apply the left factor first.
    LeftToRight,
}

/// A permutation of `0..n`, written 1-based in cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(1234)`, `(1,2)(3,4)` or `()` on
    /// `degree` points. Single-digit points may be written without commas.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let bad = || Error::InvalidPermutation(text.to_string());
        let mut images: Vec<usize> = (0..degree).collect();
        let mut rest = text.trim();
        if rest.is_empty() || rest == "1" || rest == "e" {
            return Ok(Permutation { images });
        }
        let mut seen = vec![false; degree];
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = open.find(')').ok_or_else(bad)?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            let points: Vec<usize> = if body.contains(',') || body.contains(' ') {
                body.split(|ch: char| ch == ',' || ch.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<_>>()?
            };
            for &p in &points {
                if p == 0 || p > degree || seen[p - 1] {
                    return Err(bad());
                }
                seen[p - 1] = true;
            }
            for k in 0..points.len() {
                images[points[k] - 1] = points[(k + 1) % points.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn compose(&self, other: &Permutation, conv: Composition) -> Permutation {
        let images = match conv {
            Composition::RightToLeft => other.images.iter().map(|&i| self.images[i]).collect(),
            Composition::LeftToRight => self.images.iter().map(|&i| other.images[i]).collect(),
        };
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        let sep = if n > 9 { "," } else { "" };
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut i = self.images[start];
            while i != start {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i];
            }
            let body: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(sep))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    cayley: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates a Cayley table whose element 0 is the identity.
    pub fn from_cayley(cayley: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = cayley.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (i, row) in cayley.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has wrong length")));
            }
            let set: BTreeSet<usize> = row.iter().cloned().collect();
            if set.len() != n || set.iter().any(|&x| x >= n) {
                return Err(Error::InvalidGroup(format!("row {i} is not a permutation")));
            }
        }
        for j in 0..n {
            let set: BTreeSet<usize> = (0..n).map(|i| cayley[i][j]).collect();
            if set.len() != n {
                return Err(Error::InvalidGroup(format!("column {j} is not a permutation")));
            }
        }
        if (0..n).any(|i| cayley[0][i] != i || cayley[i][0] != i) {
            return Err(Error::InvalidGroup("element 0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    if cayley[cayley[a][b]][cc] != cayley[a][cayley[b][cc]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {cc})"
                        )));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| cayley[a][b] == 0).expect("latin square"))
            .collect();
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(_) => return Err(Error::InvalidGroup("label count mismatch".into())),
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        Ok(FiniteGroup {
            cayley,
            inverse,
            labels,
        })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            cayley: vec![vec![0]],
            inverse: vec![0],
            labels: vec!["1".into()],
        }
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.order() {
            return Err(Error::InvalidGroup("label count mismatch".into()));
        }
        self.labels = labels;
        Ok(())
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup as a group in its own right, indexed by position in
    /// `sub.members()`.
    pub fn subgroup_group(&self, sub: &Subgroup) -> FiniteGroup {
        let m = sub.members();
        let pos: HashMap<usize, usize> = m.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let cayley = m
            .iter()
            .map(|&a| m.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        let inverse = m.iter().map(|&a| pos[&self.inv(a)]).collect();
        let labels = m.iter().map(|&a| self.labels[a].clone()).collect();
        FiniteGroup {
            cayley,
            inverse,
            labels,
        }
    }

    /// Quotient by a normal subgroup. Cosets are ordered by their least
    /// element; returns the quotient and the coset index of each element.
    pub fn quotient(&self, normal: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !normal.is_normal_in(self) {
            return Err(Error::InvalidSubgroup("quotient by a non-normal subgroup".into()));
        }
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for a in 0..n {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(a);
            for &h in normal.members() {
                coset_of[self.mul(a, h)] = idx;
            }
        }
        let cayley = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b)]).collect())
            .collect();
        let labels = reps
            .iter()
            .map(|&a| format!("{}N", self.labels[a]))
            .collect();
        Ok((FiniteGroup::from_cayley(cayley, Some(labels))?, coset_of))
    }

    /// Every subgroup generated by at most two elements, sorted. For the
    /// small groups handled here (S3, S4, dihedral groups) that is all of them.
    pub fn two_generated_subgroups(&self) -> Vec<Subgroup> {
        let mut out = BTreeSet::new();
        for a in 0..self.order() {
            for b in a..self.order() {
                out.insert(Subgroup::generated(self, &[a, b]).members);
            }
        }
        out.into_iter().map(|members| Subgroup { members }).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    cayley: Vec<usize>,
    labels: Vec<String>,
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson {
            order: self.order(),
            cayley: self.cayley.iter().flatten().cloned().collect(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupJson::deserialize(d)?;
        if raw.cayley.len() != raw.order * raw.order {
            return Err(serde::de::Error::custom("cayley table has wrong size"));
        }
        let rows = raw.cayley.chunks(raw.order).map(|r| r.to_vec()).collect();
        FiniteGroup::from_cayley(rows, Some(raw.labels)).map_err(serde::de::Error::custom)
    }
}

/// A subgroup stored as a sorted set of element indices of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &FiniteGroup, members: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = members.iter().cloned().collect();
        if set.iter().any(|&x| x >= parent.order()) {
            return Err(Error::InvalidSubgroup("element out of range".into()));
        }
        if !set.contains(&0) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&parent.inv(a)) {
                return Err(Error::InvalidSubgroup("not closed under inverse".into()));
            }
            for &b in &set {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(Error::InvalidSubgroup("not closed under product".into()));
                }
            }
        }
        Ok(Subgroup {
            members: set.into_iter().collect(),
        })
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup {
            members: (0..parent.order()).collect(),
        }
    }

    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    /// Subgroup generated by the given elements.
    pub fn generated(parent: &FiniteGroup, gens: &[usize]) -> Self {
        let mut set = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = parent.mul(a, g);
                if set.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        Subgroup {
            members: set.into_iter().collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    /// Position of a parent element in the sorted member list.
    pub fn local_index(&self, a: usize) -> Option<usize> {
        self.members.binary_search(&a).ok()
    }

    pub fn is_normal_in(&self, parent: &FiniteGroup) -> bool {
        (0..parent.order()).all(|g| {
            self.members
                .iter()
                .all(|&h| self.contains(parent.mul(parent.mul(g, h), parent.inv(g))))
        })
    }
}

/// A group generated by permutations, with the permutation of each element.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    pub group: FiniteGroup,
    pub perms: Vec<Permutation>,
    pub convention: Composition,
}

impl PermutationGroup {
    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.perms.iter().position(|q| q == p)
    }

    pub fn index_of_cycles(&self, text: &str) -> Result<usize> {
        let degree = self.perms[0].degree();
        let p = Permutation::parse_cycles(text, degree)?;
        self.index_of(&p)
            .ok_or_else(|| Error::InvalidSubgroup(format!("{text} is not in the group")))
    }

    /// Subgroup generated by permutations given in cycle notation.
    pub fn subgroup_from_cycles(&self, gens: &[&str]) -> Result<Subgroup> {
        let idx = gens
            .iter()
            .map(|g| self.index_of_cycles(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subgroup::generated(&self.group, &idx))
    }
}

/// Closure of the generators under composition, as a Cayley-table group.
/// Element 0 is the identity; labels are cycle forms.
pub fn group_from_permutations(
    generators: &[Permutation],
    size_cap: usize,
    convention: Composition,
) -> Result<PermutationGroup> {
    let degree = generators.first().map(|p| p.degree()).unwrap_or(0);
    if generators.iter().any(|g| g.degree() != degree) {
        return Err(Error::InvalidPermutation(
            "generators act on different numbers of points".into(),
        ));
    }
    let mut perms = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(perms[0].clone(), 0)]);
    let mut k = 0;
    while k < perms.len() {
        for g in generators {
            let p = perms[k].compose(g, convention);
            if !index.contains_key(&p) {
                if perms.len() >= size_cap {
                    return Err(Error::SizeLimit { cap: size_cap });
                }
                index.insert(p.clone(), perms.len());
                perms.push(p);
            }
        }
        k += 1;
    }
    let cayley = perms
        .iter()
        .map(|a| perms.iter().map(|b| index[&a.compose(b, convention)]).collect())
        .collect();
    let labels = perms.iter().map(|p| p.to_string()).collect();
    let group = FiniteGroup::from_cayley(cayley, Some(labels))?;
    Ok(PermutationGroup {
        group,
        perms,
        convention,
    })
}

/// True iff every element of `sigma` is uniquely a product `g·x`, `g ∈ G`, `x ∈ F`.
pub fn is_exact_factorization(sigma: &FiniteGroup, f: &Subgroup, g: &Subgroup) -> bool {
    let mut hit = vec![false; sigma.order()];
    for &a in g.members() {
        for &x in f.members() {
            let p = sigma.mul(a, x);
            if hit[p] {
                return false;
            }
            hit[p] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

/// An exact factorization with its two actions. Tables are indexed by
/// positions in `g_sub` and `f_sub`: `ract[g][x] = g◁x` and `lact[g][x] = g▷x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatchedPair {
    pub sigma: FiniteGroup,
    #[serde(rename = "f_members")]
    pub f_sub: Subgroup,
    #[serde(rename = "g_members")]
    pub g_sub: Subgroup,
    pub ract: Vec<Vec<usize>>,
    pub lact: Vec<Vec<usize>>,
}

impl MatchedPair {
    pub fn f_group(&self) -> FiniteGroup {
        self.sigma.subgroup_group(&self.f_sub)
    }

    pub fn g_group(&self) -> FiniteGroup {
        self.sigma.subgroup_group(&self.g_sub)
    }

    pub fn f_order(&self) -> usize {
        self.f_sub.order()
    }

    pub fn g_order(&self) -> usize {
        self.g_sub.order()
    }

    /// Σ-index of a local G element.
    pub fn g_elem(&self, g: usize) -> usize {
        self.g_sub.members()[g]
    }

    /// Σ-index of a local F element.
    pub fn f_elem(&self, x: usize) -> usize {
        self.f_sub.members()[x]
    }

    pub fn g_label(&self, g: usize) -> &str {
        self.sigma.label(self.g_elem(g))
    }

    pub fn f_label(&self, x: usize) -> &str {
        self.sigma.label(self.f_elem(x))
    }

    /// Relabels Σ elements, e.g. to match names used in tables.
    pub fn relabel(&mut self, names: &[(usize, String)]) {
        let mut labels = self.sigma.labels().to_vec();
        for (i, s) in names {
            labels[*i] = s.clone();
        }
        self.sigma
            .set_labels(labels)
            .expect("label count unchanged");
    }
}

/// Factors each `g·x` as `(g▷x)·(g◁x)` with `g▷x ∈ F`, `g◁x ∈ G`.
pub fn derive_actions(sigma: &FiniteGroup, f: &Subgroup, g: &Subgroup) -> Result<MatchedPair> {
    if !is_exact_factorization(sigma, f, g) {
        return Err(Error::NotExactFactorization(format!(
            "|F|={}, |G|={}, |Σ|={}",
            f.order(),
            g.order(),
            sigma.order()
        )));
    }
    // Σ = F·G as well; record the unique (f', g') for each element.
    let mut split: Vec<Option<(usize, usize)>> = vec![None; sigma.order()];
    for (fi, &fx) in f.members().iter().enumerate() {
        for (gi, &gy) in g.members().iter().enumerate() {
            let p = sigma.mul(fx, gy);
            if split[p].is_some() {
                return Err(Error::FactorizationFailure(format!(
                    "{} has two F·G factorizations",
                    sigma.label(p)
                )));
            }
            split[p] = Some((fi, gi));
        }
    }
    let ng = g.order();
    let nf = f.order();
    let mut ract = vec![vec![0; nf]; ng];
    let mut lact = vec![vec![0; nf]; ng];
    for (gi, &gy) in g.members().iter().enumerate() {
        for (xi, &fx) in f.members().iter().enumerate() {
            let p = sigma.mul(gy, fx);
            let (fp, gp) = split[p].ok_or_else(|| {
                Error::FactorizationFailure(format!("{} has no F·G factorization", sigma.label(p)))
            })?;
            lact[gi][xi] = fp;
            ract[gi][xi] = gp;
        }
    }
    Ok(MatchedPair {
        sigma: sigma.clone(),
        f_sub: f.clone(),
        g_sub: g.clone(),
        ract,
        lact,
    })
}

/// One failed instance of a matched-pair law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: &'static str,
    /// Local indices involved, in the order the law names them.
    pub at: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MatchedPairReport {
    pub violations: Vec<Violation>,
}

impl MatchedPairReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, law: &str) -> usize {
        self.violations.iter().filter(|v| v.law == law).count()
    }
}

/// Checks reconstruction `g·x = (g▷x)(g◁x)`, the unit laws and both
/// compatibility conditions, listing every violated instance.
pub fn verify_matched_pair(mp: &MatchedPair) -> MatchedPairReport {
    let sigma = &mp.sigma;
    let fg = mp.f_group();
    let gg = mp.g_group();
    let (nf, ng) = (mp.f_order(), mp.g_order());
    let mut out = MatchedPairReport::default();
    let mut fail = |law: &'static str, at: Vec<usize>| out.violations.push(Violation { law, at });
    let shape_ok = mp.ract.len() == ng
        && mp.lact.len() == ng
        && mp.ract.iter().all(|r| r.len() == nf && r.iter().all(|&v| v < ng))
        && mp.lact.iter().all(|r| r.len() == nf && r.iter().all(|&v| v < nf));
    if !shape_ok {
        fail("table_shape", vec![]);
        return out;
    }
    for g in 0..ng {
        for x in 0..nf {
            let lhs = sigma.mul(mp.g_elem(g), mp.f_elem(x));
            let rhs = sigma.mul(mp.f_elem(mp.lact[g][x]), mp.g_elem(mp.ract[g][x]));
            if lhs != rhs {
                fail("reconstruction", vec![g, x]);
            }
        }
    }
    for x in 0..nf {
        if mp.lact[0][x] != x {
            fail("unit_lact_identity", vec![x]);
        }
        if mp.ract[0][x] != 0 {
            fail("unit_ract_identity", vec![x]);
        }
    }
    for g in 0..ng {
        if mp.ract[g][0] != g {
            fail("unit_ract", vec![g]);
        }
        if mp.lact[g][0] != 0 {
            fail("unit_lact", vec![g]);
        }
    }
    // s▷xy = (s▷x)((s◁x)▷y)
    for s in 0..ng {
        for x in 0..nf {
            for y in 0..nf {
                let lhs = mp.lact[s][fg.mul(x, y)];
                let rhs = fg.mul(mp.lact[s][x], mp.lact[mp.ract[s][x]][y]);
                if lhs != rhs {
                    fail("lact_product", vec![s, x, y]);
                }
            }
        }
    }
    // st◁x = (s◁(t▷x))(t◁x)
    for s in 0..ng {
        for t in 0..ng {
            for x in 0..nf {
                let lhs = mp.ract[gg.mul(s, t)][x];
                let rhs = gg.mul(mp.ract[s][mp.lact[t][x]], mp.ract[t][x]);
                if lhs != rhs {
                    fail("ract_product", vec![s, t, x]);
                }
            }
        }
    }
    out
}

/// Orbit of `g` under `◁` and its stabilizer in F, both in local indices.
pub fn orbit_and_stabilizer(mp: &MatchedPair, g: usize) -> Result<(Vec<usize>, Subgroup)> {
    let fg = mp.f_group();
    let (nf, ng) = (mp.f_order(), mp.g_order());
    for h in 0..ng {
        if mp.ract[h][0] != h {
            return Err(Error::ActionNotWellDefined(format!("{}◁1 ≠ {}", h, h)));
        }
        for x in 0..nf {
            for y in 0..nf {
                if mp.ract[h][fg.mul(x, y)] != mp.ract[mp.ract[h][x]][y] {
                    return Err(Error::ActionNotWellDefined(format!(
                        "right-action law fails at ({h}, {x}, {y})"
                    )));
                }
            }
        }
    }
    let orbit: BTreeSet<usize> = (0..nf).map(|x| mp.ract[g][x]).collect();
    let stab: Vec<usize> = (0..nf).filter(|&x| mp.ract[g][x] == g).collect();
    Ok((orbit.into_iter().collect(), Subgroup::new(&fg, &stab)?))
}

/// True iff `g▷h ∈ H` for all `g ∈ G`, `h ∈ H` (H in local F indices).
pub fn is_invariant_subgroup_under_lact(mp: &MatchedPair, h: &Subgroup) -> bool {
    (0..mp.g_order()).all(|g| h.members().iter().all(|&x| h.contains(mp.lact[g][x])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perms(gens: &[&str], n: usize) -> Vec<Permutation> {
        gens.iter()
            .map(|g| Permutation::parse_cycles(g, n).unwrap())
            .collect()
    }

    fn closure(gens: &[&str], n: usize) -> PermutationGroup {
        group_from_permutations(&perms(gens, n), DEFAULT_SIZE_CAP, Composition::RightToLeft)
            .unwrap()
    }

    #[test]
    fn cycle_parsing_and_display() {
        let p = Permutation::parse_cycles("(1234)", 4).unwrap();
        assert_eq!(p.to_string(), "(1234)");
        assert_eq!(p.apply(0), 1);
        let q = Permutation::parse_cycles("(1,3)(2,4)", 4).unwrap();
        assert_eq!(q.to_string(), "(13)(24)");
        assert!(Permutation::parse_cycles("()", 3).unwrap().is_identity());
        assert!(Permutation::parse_cycles("(115)", 4).is_err());
        assert!(Permutation::parse_cycles("(12", 4).is_err());
        assert!(Permutation::parse_cycles("(121)", 4).is_err());
    }

    #[test]
    fn composition_conventions_differ() {
        let t = Permutation::parse_cycles("(12)", 3).unwrap();
        let s = Permutation::parse_cycles("(123)", 3).unwrap();
        // t∘s : 1→2→1, 2→3→3, 3→1→2
        assert_eq!(t.compose(&s, Composition::RightToLeft).to_string(), "(23)");
        assert_eq!(t.compose(&s, Composition::LeftToRight).to_string(), "(13)");
    }

    #[test]
    fn closure_orders() {
        assert_eq!(closure(&["(1234)"], 4).group.order(), 4);
        assert_eq!(closure(&["(12)", "(123)"], 3).group.order(), 6);
        assert_eq!(closure(&["(1234)", "(12)"], 4).group.order(), 24);
        let g = closure(&["(12)"], 2);
        assert_eq!(g.group.label(0), "()");
    }

    #[test]
    fn closure_respects_size_cap() {
        let err = group_from_permutations(
            &perms(&["(1234)", "(12)"], 4),
            10,
            Composition::RightToLeft,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SizeLimit { cap: 10 }));
    }

    #[test]
    fn cayley_validation_rejects_bad_tables() {
        assert!(FiniteGroup::from_cayley(vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_cayley(vec![vec![1, 0], vec![0, 1]], None).is_err());
        let c2 = FiniteGroup::from_cayley(vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(c2.inv(1), 1);
    }

    #[test]
    fn exact_factorizations() {
        let s4 = closure(&["(1234)", "(12)"], 4);
        let f = s4.subgroup_from_cycles(&["(12)", "(123)"]).unwrap();
        let g = s4.subgroup_from_cycles(&["(1234)"]).unwrap();
        assert!(is_exact_factorization(&s4.group, &f, &g));
        assert!(!is_exact_factorization(&s4.group, &f, &f));

        // exhaustive uniqueness check over the 6 elements of S3
        let s3 = closure(&["(12)", "(123)"], 3);
        let f = s3.subgroup_from_cycles(&["(12)"]).unwrap();
        let g = s3.subgroup_from_cycles(&["(123)"]).unwrap();
        let mut products: Vec<usize> = g
            .members()
            .iter()
            .flat_map(|&a| f.members().iter().map(move |&x| (a, x)))
            .map(|(a, x)| s3.group.mul(a, x))
            .collect();
        products.sort();
        assert_eq!(products, (0..6).collect::<Vec<_>>());
        assert!(is_exact_factorization(&s3.group, &f, &g));
    }

    #[test]
    fn unit_laws_of_derived_actions() {
        let s4 = closure(&["(1234)", "(12)"], 4);
        let f = s4.subgroup_from_cycles(&["(12)", "(123)"]).unwrap();
        let g = s4.subgroup_from_cycles(&["(1234)"]).unwrap();
        let mp = derive_actions(&s4.group, &f, &g).unwrap();
        for gi in 0..4 {
            assert_eq!(mp.ract[gi][0], gi);
            assert_eq!(mp.lact[gi][0], 0);
        }
        assert!(verify_matched_pair(&mp).passed());
    }

    #[test]
    fn corrupted_ract_is_caught_at_the_cell() {
        let s4 = closure(&["(1234)", "(12)"], 4);
        let f = s4.subgroup_from_cycles(&["(12)", "(123)"]).unwrap();
        let g = s4.subgroup_from_cycles(&["(1234)"]).unwrap();
        let mut mp = derive_actions(&s4.group, &f, &g).unwrap();
        mp.ract[1][2] = (mp.ract[1][2] + 1) % 4;
        let rep = verify_matched_pair(&mp);
        assert!(!rep.passed());
        let recon: Vec<_> = rep
            .violations
            .iter()
            .filter(|v| v.law == "reconstruction")
            .collect();
        assert_eq!(recon.len(), 1);
        assert_eq!(recon[0].at, vec![1, 2]);
    }

    #[test]
    fn derive_refuses_non_factorization() {
        let s3 = closure(&["(12)", "(123)"], 3);
        let f = s3.subgroup_from_cycles(&["(12)"]).unwrap();
        assert!(matches!(
            derive_actions(&s3.group, &f, &f),
            Err(Error::NotExactFactorization(_))
        ));
    }

    #[test]
    fn identity_is_fixed_by_everything() {
        let s4 = closure(&["(1234)", "(12)"], 4);
        let f = s4.subgroup_from_cycles(&["(12)", "(123)"]).unwrap();
        let g = s4.subgroup_from_cycles(&["(1234)"]).unwrap();
        let mp = derive_actions(&s4.group, &f, &g).unwrap();
        let (orbit, h) = orbit_and_stabilizer(&mp, 0).unwrap();
        assert_eq!(orbit, vec![0]);
        assert_eq!(h.order(), 6);
        assert!(is_invariant_subgroup_under_lact(&mp, &Subgroup::whole(&mp.f_group())));
        assert!(is_invariant_subgroup_under_lact(&mp, &Subgroup::trivial()));
    }

    #[test]
    fn quotient_group() {
        let s3 = closure(&["(12)", "(123)"], 3);
        let a3 = s3.subgroup_from_cycles(&["(123)"]).unwrap();
        let (q, coset) = s3.group.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(coset[0], 0);
        let t = s3.index_of_cycles("(12)").unwrap();
        assert_eq!(coset[t], 1);
        let c2 = s3.subgroup_from_cycles(&["(12)"]).unwrap();
        assert!(s3.group.quotient(&c2).is_err());
    }

    #[test]
    fn group_json_roundtrip() {
        let s3 = closure(&["(12)", "(123)"], 3);
        let text = serde_json::to_string(&s3.group).unwrap();
        let back: FiniteGroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s3.group);
    }
}
