//! Scenario files, the three built-in scenarios, and the run reports behind
//! the command-line front end.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {
//!   "name": "s3_a3",
//!   "construction": "group_algebra",
//!   "group": { "generators": ["(12)", "(123)"] },
//!   "b": { "generators": ["(123)"] },
//!   "alpha": "all",
//!   "seed": 7
//! }
//! ```
//!
//! `construction` is `group_algebra` (B = kN for a normal subgroup N),
//! `dual_group_algebra` (B = k^{G/N}) or `bismash` (`sigma`, `f` and `g` give
//! the exact factorization Σ = G·F; B is the `"kG-factor"` k^G). Groups are
//! `{"generators": [...], "degree": n}` in cycle notation or
//! `{"cayley": [[...]], "labels": [...]}`; subgroups are
//! `{"generators": [...]}` or `{"members": [...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::builtins::{
    c4_c2_matched_pair, s3_a3, s4_matched_pair, table_mismatches, TableMismatch,
};
use crate::clifford::{
    analyze_alpha, corollary_coc_check, eq7_and_cosets_check, equivalence_classes,
    verify_class_formulas, ClassFormulaReport, CliffordReport, EquivalenceClassData, Extension,
    GradingReport,
};
use crate::error::{Error, Result};
use crate::groups::{
    derive_actions, group_from_permutations, Composition, FiniteGroup, Permutation,
    Subgroup, DEFAULT_SIZE_CAP,
};
use crate::hopf::{
    as_group_algebra, bismash, dual_group_algebra_extension, group_algebra_extension, is_cocentral,
    quotient_hopf, verify_hopf_axioms, AxiomReport, HopfAlgebraData,
};
use crate::linalg::round_to;
use crate::repcalc::{SemisimpleDecomposition, DEFAULT_SEED};

pub const BUILTINS: [&str; 3] = ["s4_counterexample", "s3_a3_classical", "cocentral_c4_c2"];

/// Residual threshold for the formula suite unless a scenario overrides it.
pub const DEFAULT_FORMULA_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    GroupAlgebra,
    DualGroupAlgebra,
    Bismash,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Generators {
        generators: Vec<String>,
        #[serde(default)]
        degree: Option<usize>,
    },
    Cayley {
        cayley: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupSpec {
    Generators { generators: Vec<String> },
    Members { members: Vec<usize> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BSpec {
    Factor(String),
    Subgroup(SubgroupSpec),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Index(usize),
    Label(String),
}

impl Default for AlphaSpec {
    fn default() -> Self {
        AlphaSpec::Label("all".into())
    }
}

impl AlphaSpec {
    pub fn parse(text: &str) -> Self {
        match text.parse::<usize>() {
            Ok(i) => AlphaSpec::Index(i),
            Err(_) => AlphaSpec::Label(text.to_string()),
        }
    }

    fn describe(&self) -> String {
        match self {
            AlphaSpec::Index(i) => i.to_string(),
            AlphaSpec::Label(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub construction: Construction,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub sigma: Option<GroupSpec>,
    #[serde(default)]
    pub f: Option<SubgroupSpec>,
    #[serde(default)]
    pub g: Option<SubgroupSpec>,
    #[serde(default)]
    pub b: Option<BSpec>,
    #[serde(default)]
    pub alpha: AlphaSpec,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub composition: Option<String>,
    #[serde(default)]
    pub formula_tolerance: Option<f64>,
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario: {e}")))
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let gens = |g: &[&str]| SubgroupSpec::Generators {
            generators: g.iter().map(|s| s.to_string()).collect(),
        };
        let group = |g: &[&str]| GroupSpec::Generators {
            generators: g.iter().map(|s| s.to_string()).collect(),
            degree: None,
        };
        let base = Scenario {
            name: name.to_string(),
            construction: Construction::Bismash,
            group: None,
            sigma: None,
            f: None,
            g: None,
            b: Some(BSpec::Factor("kG-factor".into())),
            alpha: AlphaSpec::default(),
            seed: None,
            composition: None,
            formula_tolerance: None,
        };
        match name {
            "s4_counterexample" => Ok(Scenario {
                sigma: Some(group(&["(1234)", "(12)"])),
                g: Some(gens(&["(1234)"])),
                f: Some(gens(&["(12)", "(123)"])),
                ..base
            }),
            "cocentral_c4_c2" => Ok(Scenario {
                sigma: Some(group(&["(1234)", "(13)"])),
                g: Some(gens(&["(1234)"])),
                f: Some(gens(&["(13)"])),
                ..base
            }),
            "s3_a3_classical" => Ok(Scenario {
                construction: Construction::GroupAlgebra,
                group: Some(group(&["(12)", "(123)"])),
                b: Some(BSpec::Subgroup(gens(&["(123)"]))),
                ..base
            }),
            other => Err(Error::Config(format!(
                "unknown builtin {other}; expected one of {}",
                BUILTINS.join(", ")
            ))),
        }
    }

    fn convention(&self) -> Result<Composition> {
        match self.composition.as_deref() {
            None | Some("right_to_left") => Ok(Composition::RightToLeft),
            Some("left_to_right") => Ok(Composition::LeftToRight),
            Some(other) => Err(Error::Config(format!("unknown composition {other}"))),
        }
    }
}

/// A group with, when given by generators, the permutation of each element.
struct ResolvedGroup {
    group: FiniteGroup,
    perms: Option<crate::groups::PermutationGroup>,
}

fn infer_degree(gens: &[String]) -> usize {
    gens.iter()
        .flat_map(|g| {
            g.split(|c: char| !c.is_ascii_digit())
                .filter(|t| !t.is_empty())
                .flat_map(|t| {
                    // Without separators every digit is its own point.
                    if g.contains(',') {
                        vec![t.parse::<usize>().unwrap_or(0)]
                    } else {
                        t.chars().map(|c| c.to_digit(10).unwrap_or(0) as usize).collect()
                    }
                })
                .collect::<Vec<_>>()
        })
        .max()
        .unwrap_or(1)
}

fn resolve_group(spec: &GroupSpec, conv: Composition) -> Result<ResolvedGroup> {
    match spec {
        GroupSpec::Generators { generators, degree } => {
            let n = degree.unwrap_or_else(|| infer_degree(generators));
            let perms = generators
                .iter()
                .map(|g| Permutation::parse_cycles(g, n))
                .collect::<Result<Vec<_>>>()?;
            let pg = group_from_permutations(&perms, DEFAULT_SIZE_CAP, conv)?;
            Ok(ResolvedGroup {
                group: pg.group.clone(),
                perms: Some(pg),
            })
        }
        GroupSpec::Cayley { cayley, labels } => Ok(ResolvedGroup {
            group: FiniteGroup::from_cayley(cayley.clone(), labels.clone())
                .map_err(|e| Error::Config(e.to_string()))?,
            perms: None,
        }),
    }
}

fn resolve_subgroup(parent: &ResolvedGroup, spec: &SubgroupSpec) -> Result<Subgroup> {
    match spec {
        SubgroupSpec::Generators { generators } => {
            let pg = parent.perms.as_ref().ok_or_else(|| {
                Error::Config("cycle generators need a group given by permutations".into())
            })?;
            let refs: Vec<&str> = generators.iter().map(|s| s.as_str()).collect();
            pg.subgroup_from_cycles(&refs)
        }
        SubgroupSpec::Members { members } => Subgroup::new(&parent.group, members),
    }
}

fn required<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T> {
    field
        .as_ref()
        .ok_or_else(|| Error::Config(format!("scenario field {name} is required")))
}

/// Everything built from a scenario before the Clifford analysis.
pub struct Built {
    pub scenario: Scenario,
    pub seed: u64,
    pub ext: Extension,
    /// Cells differing from the expected action tables (S4 builtin only).
    pub table_mismatches: Option<Vec<TableMismatch>>,
}

pub fn build(scenario: Scenario, seed: u64) -> Result<Built> {
    let conv = scenario.convention()?;
    let mut mismatches = None;
    let ext = match scenario.construction {
        Construction::Bismash => {
            match &scenario.b {
                None => {}
                Some(BSpec::Factor(s)) if s == "kG-factor" => {}
                Some(_) => {
                    return Err(Error::Config("a bismash scenario takes b = \"kG-factor\"".into()))
                }
            }
            let mp = if scenario.name == "s4_counterexample" {
                let mp = s4_matched_pair(conv)?;
                mismatches = Some(table_mismatches(&mp)?);
                mp
            } else if scenario.name == "cocentral_c4_c2" {
                c4_c2_matched_pair()?
            } else {
                let sigma = resolve_group(required(&scenario.sigma, "sigma")?, conv)?;
                let f = resolve_subgroup(&sigma, required(&scenario.f, "f")?)?;
                let g = resolve_subgroup(&sigma, required(&scenario.g, "g")?)?;
                derive_actions(&sigma.group, &f, &g)?
            };
            let (a, inc, kf) = bismash(&mp)?;
            Extension::new(a, inc, Some(kf), Some(mp), seed)?
        }
        Construction::GroupAlgebra => {
            let (g, n) = if scenario.name == "s3_a3_classical" {
                let (s3, a3) = s3_a3()?;
                (s3.group, a3)
            } else {
                let g = resolve_group(required(&scenario.group, "group")?, conv)?;
                let n = match required(&scenario.b, "b")? {
                    BSpec::Subgroup(s) => resolve_subgroup(&g, s)?,
                    BSpec::Factor(_) => {
                        return Err(Error::Config("group_algebra needs b as a subgroup".into()))
                    }
                };
                (g.group, n)
            };
            let (a, inc, kf) = group_algebra_extension(&g, &n)?;
            Extension::new(a, inc, Some(kf), None, seed)?
        }
        Construction::DualGroupAlgebra => {
            let g = resolve_group(required(&scenario.group, "group")?, conv)?;
            let n = match required(&scenario.b, "b")? {
                BSpec::Subgroup(s) => resolve_subgroup(&g, s)?,
                BSpec::Factor(_) => {
                    return Err(Error::Config("dual_group_algebra needs b as a subgroup".into()))
                }
            };
            let (a, inc) = dual_group_algebra_extension(&g.group, &n)?;
            let (_, pi) = quotient_hopf(&a, &inc.image())?;
            let kf = match as_group_algebra(&pi, seed) {
                Ok(kf) => Some(kf),
                Err(Error::NotGroupAlgebra) => None,
                Err(e) => return Err(e),
            };
            Extension::new(a, inc, kf, None, seed)?
        }
    };
    Ok(Built {
        scenario,
        seed,
        ext,
        table_mismatches: mismatches,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub construction: Construction,
    pub seed: u64,
    pub dim_a: usize,
    pub dim_b: usize,
    pub alpha_selection: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCheck {
    pub cells_checked: usize,
    pub mismatches: Vec<TableMismatch>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomSummary {
    pub algebra: String,
    pub dim: usize,
    pub passed: bool,
    pub max_residual: f64,
    pub report: AxiomReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct IrrEntry {
    pub label: String,
    pub degree: usize,
    pub values: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IrrTable {
    pub a: Vec<IrrEntry>,
    pub b: Vec<IrrEntry>,
    pub dual: Vec<IrrEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEcho {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub a_1: usize,
    pub b_1: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub scenario: ScenarioEcho,
    pub tables: Option<TableCheck>,
    pub axioms: Vec<AxiomSummary>,
    pub a_degrees: Vec<usize>,
    pub b_degrees: Vec<usize>,
    pub dual_degrees: Vec<usize>,
    pub classes: Vec<ClassEcho>,
    pub formulas: ClassFormulaReport,
    pub grading: Option<GradingReport>,
    pub cocentral: Option<bool>,
    pub all_alpha_hold_when_cocentral: Option<bool>,
    pub alphas: Vec<CliffordReport>,
    pub formula_tolerance: f64,
    pub consistent: bool,
}

fn irr_entries(dec: &SemisimpleDecomposition, labels: &[String]) -> Vec<IrrEntry> {
    dec.irr
        .iter()
        .zip(labels)
        .zip(&dec.dims)
        .map(|((ch, l), &n)| IrrEntry {
            label: l.clone(),
            degree: n,
            values: ch.values().iter().map(|z| (z.re, z.im)).collect(),
        })
        .collect()
}

pub fn irr_table(built: &Built) -> IrrTable {
    let e = &built.ext;
    IrrTable {
        a: irr_entries(&e.dec_a, &e.labels_a),
        b: irr_entries(&e.dec_b, &e.labels_b),
        dual: irr_entries(&e.dec_dual, &e.labels_dual),
    }
}

/// Axiom reports for A, B, A* and the quotient group algebra when present.
pub fn axiom_suite(built: &Built) -> Vec<AxiomSummary> {
    let e = &built.ext;
    let mut algebras: Vec<(&str, &HopfAlgebraData)> =
        vec![("A", &e.a), ("B", &e.inc.small), ("A*", &e.dual)];
    if let Some(kf) = &e.kf {
        algebras.push(("H", &kf.pi.target));
    }
    algebras
        .into_iter()
        .map(|(name, h)| {
            let report = verify_hopf_axioms(h);
            AxiomSummary {
                algebra: name.to_string(),
                dim: h.dim(),
                passed: report.passed(),
                max_residual: report.max_residual(),
                report,
            }
        })
        .collect()
}

fn selected_alphas(built: &Built, sel: &AlphaSpec) -> Result<Vec<usize>> {
    match sel {
        AlphaSpec::Label(s) if s == "all" => Ok((0..built.ext.dec_b.len()).collect()),
        AlphaSpec::Index(i) => Ok(vec![built.ext.resolve_alpha(&i.to_string())?]),
        AlphaSpec::Label(s) => Ok(vec![built.ext.resolve_alpha(s)?]),
    }
}

pub fn run(built: &Built, alpha: &AlphaSpec) -> Result<RunReport> {
    let ext = &built.ext;
    let tol = built
        .scenario
        .formula_tolerance
        .unwrap_or(DEFAULT_FORMULA_TOLERANCE);
    let axioms = axiom_suite(built);
    let ecd: EquivalenceClassData = equivalence_classes(ext)?;
    let formulas = verify_class_formulas(ext, &ecd)?;
    let grading = match &ext.kf {
        Some(kf) => Some(eq7_and_cosets_check(ext, kf)?),
        None => None,
    };
    let alphas = selected_alphas(built, alpha)?
        .into_iter()
        .map(|i| analyze_alpha(ext, &ecd, i))
        .collect::<Result<Vec<_>>>()?;
    let cocentral = ext.kf.as_ref().map(|kf| is_cocentral(&ext.a, &kf.pi));
    let coc = match cocentral {
        Some(true) => Some(corollary_coc_check(ext, &alphas)?),
        _ => None,
    };
    let tables = built.table_mismatches.as_ref().map(|m| TableCheck {
        cells_checked: 30,
        mismatches: m.clone(),
    });
    let consistent = axioms.iter().all(|a| a.passed)
        && formulas.passed(tol)
        && grading.as_ref().map(|g| g.passed(tol)).unwrap_or(true)
        && tables.as_ref().map(|t| t.mismatches.is_empty()).unwrap_or(true)
        && alphas.iter().all(alpha_consistent);
    Ok(RunReport {
        scenario: ScenarioEcho {
            name: built.scenario.name.clone(),
            construction: built.scenario.construction.clone(),
            seed: built.seed,
            dim_a: ext.dim_a(),
            dim_b: ext.dim_b(),
            alpha_selection: alpha.describe(),
        },
        tables,
        axioms,
        a_degrees: ext.dec_a.dims.clone(),
        b_degrees: ext.dec_b.dims.clone(),
        dual_degrees: ext.dec_dual.dims.clone(),
        classes: ecd
            .a_classes
            .iter()
            .zip(&ecd.b_classes)
            .enumerate()
            .map(|(i, (a, b))| ClassEcho {
                a: a.iter().map(|&x| ext.labels_a[x].clone()).collect(),
                b: b.iter().map(|&x| ext.labels_b[x].clone()).collect(),
                a_1: ecd.a_sums[i].degree_real().round() as usize,
                b_1: ecd.b_sums[i].degree_real().round() as usize,
            })
            .collect(),
        formulas,
        grading,
        cocentral,
        all_alpha_hold_when_cocentral: coc,
        alphas,
        formula_tolerance: tol,
        consistent,
    })
}

/// Per-`α` invariants that do not already abort the run.
pub fn alpha_consistent(r: &CliffordReport) -> bool {
    let c = &r.conjugation;
    let kf_ok = r
        .kf
        .as_ref()
        .map(|k| {
            k.orbit_identity
                && k.s_dimension_identity
                && k.z_in_s
                && k.matches_right_action.unwrap_or(true)
        })
        .unwrap_or(true);
    c.stabilizing_set_closed
        && c.composition_residual < DEFAULT_FORMULA_TOLERANCE
        && c.class_from_dual_irr
        && c.class_from_grading_orbit.unwrap_or(true)
        && c.conjugate_module_residual < DEFAULT_FORMULA_TOLERANCE
        && c.coalgebra_tensor_consistent
        && r.induced_psi_alpha_residual < DEFAULT_FORMULA_TOLERANCE
        && r.z1_restriction_residual < DEFAULT_FORMULA_TOLERANCE
        && kf_ok
}

/// Resolves the seed: explicit flag, then the environment, then the
/// scenario, then the default.
pub fn resolve_seed(flag: Option<u64>, scenario: &Scenario) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var("HOPF_CLIFFORD_SEED") {
        return v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("HOPF_CLIFFORD_SEED={v} is not an integer")));
    }
    Ok(scenario.seed.unwrap_or(DEFAULT_SEED))
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(x) = n.as_f64() {
                if n.is_f64() {
                    if let Some(r) = serde_json::Number::from_f64(round_to(x, 1e-10)) {
                        *n = r;
                    }
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 1e-10 and negative zeros cleared.
pub fn to_stable_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Consistency(e.to_string()))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Consistency(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
