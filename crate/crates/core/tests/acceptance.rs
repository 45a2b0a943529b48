//! Acceptance criteria 1 to 8. Each test prints one `criterion N: PASS|FAIL`
//! line (visible with `--nocapture`) and fails when the criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use hopf_clifford::builtins::s4_matched_pair;
use hopf_clifford::clifford::CliffordReport;
use hopf_clifford::groups::{is_invariant_subgroup_under_lact, orbit_and_stabilizer, Composition};
use hopf_clifford::hopf::verify_hopf_axioms;
use hopf_clifford::linalg::TAU_ALG;
use hopf_clifford::repcalc::DEFAULT_SEED;
use hopf_clifford::scenario::{build, run, to_stable_json, AlphaSpec, Built, RunReport, Scenario, BUILTINS};
use num_rational::Rational64;

fn builtin(name: &str) -> Built {
    build(Scenario::builtin(name).unwrap(), DEFAULT_SEED).unwrap()
}

fn analyze(name: &str, alpha: &str) -> RunReport {
    let b = builtin(name);
    run(&b, &AlphaSpec::parse(alpha)).unwrap()
}

/// Collects named checks and prints the verdict line.
struct Criterion {
    n: usize,
    failures: Vec<String>,
}

impl Criterion {
    fn new(n: usize) -> Self {
        Criterion { n, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self, summary: &str) {
        if self.failures.is_empty() {
            println!("criterion {}: PASS ({summary})", self.n);
        } else {
            println!("criterion {}: FAIL ({})", self.n, self.failures.join("; "));
            panic!("criterion {} failed: {:?}", self.n, self.failures);
        }
    }
}

fn alpha<'a>(r: &'a RunReport, label: &str) -> &'a CliffordReport {
    r.alphas.iter().find(|a| a.alpha == label).unwrap()
}

#[test]
fn criterion_1_counterexample_reproduction() {
    let mut c = Criterion::new(1);
    let start = Instant::now();
    let report = analyze("s4_counterexample", "g");
    let elapsed = start.elapsed();

    let tables = report.tables.as_ref().unwrap();
    c.check(tables.cells_checked == 30, "30 table cells");
    c.check(tables.mismatches.is_empty(), format!("table mismatches {:?}", tables.mismatches));

    let mp = s4_matched_pair(Composition::RightToLeft).unwrap();
    let g = (0..mp.g_order()).find(|&i| mp.g_label(i) == "g").unwrap();
    let t = (0..mp.f_order()).find(|&i| mp.f_label(i) == "t").unwrap();
    let (_, h) = orbit_and_stabilizer(&mp, g).unwrap();
    let h_names: Vec<&str> = h.members().iter().map(|&x| mp.f_label(x)).collect();
    c.check(h_names == ["1", "t"], format!("stabilizer {h_names:?}"));
    let g_t = mp.lact[g][t];
    c.check(mp.f_label(g_t) == "ts", "g▷t = ts");
    c.check(!h.contains(mp.f_elem(g_t)), "ts ∉ H");
    c.check(!is_invariant_subgroup_under_lact(&mp, &h), "G▷H ⊄ H");

    let a = alpha(&report, "δ_g");
    let kf = a.kf.as_ref().unwrap();
    c.check(kf.stabilizer_h == ["1", "t"], "reported H");
    c.check(kf.dim_s == 8, format!("dim S = {}", kf.dim_s));
    c.check(!kf.s_is_hopf, "S is not a Hopf subalgebra");
    c.check(a.dim_z == 4 && report.scenario.dim_b == 4, "Z = B of dim 4");
    c.check(kf.z_in_s && !kf.z_equals_s, "Z ⊊ S");
    c.check(a.bound == Rational64::from_integer(8), format!("bound {}", a.bound));
    c.check(!a.witherspoon_equality, "bound strict");
    let induced = &a.induction_table;
    c.check(
        induced.len() == 1
            && induced[0].induced.len() == 2
            && induced[0].induced.iter().all(|(l, m)| *m == 1 && report.classes[a.class_index].a.contains(l))
            && !induced[0].irreducible,
        format!("induction {induced:?}"),
    );
    let degrees: Vec<usize> = a.class_a.iter().map(|l| {
        let i: usize = l.trim_start_matches('χ').parse().unwrap();
        report.a_degrees[i]
    }).collect();
    c.check(degrees == [3, 3], "two 3-dimensional irreducibles over α");
    c.check(a.verdict == "FAILS", "verdict FAILS");
    c.check(elapsed < Duration::from_secs(5), format!("runtime {elapsed:?}"));
    c.finish(&format!(
        "tables match, H = {{1,t}}, dim Z = 4 < bound 8, dim S = 8 not Hopf, δ_g↑ = {}, FAILS in {:.2} s",
        induced[0].induced.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join("+"),
        elapsed.as_secs_f64()
    ));
}

#[test]
fn criterion_2_classical_positive_case() {
    let mut c = Criterion::new(2);
    let report = analyze("s3_a3_classical", "all");
    // χ_ω: a nontrivial character of A3, i.e. any class of size 2.
    let omega: Vec<&CliffordReport> = report.alphas.iter().filter(|a| a.class_b.len() == 2).collect();
    c.check(omega.len() == 2, "two nontrivial characters of A3");
    for a in omega {
        c.check(a.dim_z == 3, format!("{}: Z = kA3", a.alpha));
        c.check(a.bound == Rational64::from_integer(3), format!("{}: bound {}", a.alpha, a.bound));
        c.check(a.witherspoon_equality, "bound attained");
        c.check(a.z1.len() == 1 && a.class_a.len() == 1, "|Z_1| = |A_i| = 1");
        let row = &a.induction_table[0];
        c.check(
            row.irreducible && row.induced.len() == 1 && row.induced[0].0 == a.class_a[0],
            format!("induction {row:?}"),
        );
        c.check(report.a_degrees[2] == 2 && a.class_a[0] == "χ2", "image is the 2-dimensional θ");
        c.check(a.verdict == "HOLDS", "verdict HOLDS");
        c.check(a.induced_psi_alpha_residual < TAU_ALG, "induced character residual");
        c.check(a.z1_restriction_residual < TAU_ALG, "restriction residual");
        c.check(a.conjugation.conjugate_module_residual < TAU_ALG, "conjugate module residual");
    }
    c.check(report.formulas.max_residual() < TAU_ALG, "class formula residuals below 1e-8");
    c.check(report.formulas.frobenius_mismatches == 0, "reciprocity multiplicities exact");
    c.finish("Z = kA3, bound 3 = dim Z, χ_ω↑ = θ, HOLDS");
}

#[test]
fn criterion_3_cocentral_case() {
    let mut c = Criterion::new(3);
    let start = Instant::now();
    let report = analyze("cocentral_c4_c2", "all");
    let elapsed = start.elapsed();
    c.check(report.cocentral == Some(true), "detected cocentral");
    c.check(report.grading.as_ref().map(|g| g.cocentral) == Some(true), "grading report agrees");
    c.check(report.alphas.len() == 4, "four irreducible B-modules");
    for a in &report.alphas {
        c.check(a.verdict == "HOLDS", format!("{} HOLDS", a.alpha));
        c.check(a.kf.as_ref().map(|k| k.z_equals_s) == Some(true), format!("{}: Z = S", a.alpha));
    }
    c.check(report.all_alpha_hold_when_cocentral == Some(true), "corollary check");
    c.check(elapsed < Duration::from_secs(5), format!("runtime {elapsed:?}"));
    c.finish(&format!("cocentral, 4/4 HOLD with Z = S in {:.2} s", elapsed.as_secs_f64()));
}

#[test]
fn criterion_4_formula_suite() {
    let mut c = Criterion::new(4);
    let tol = 1e-6;
    let mut worst: f64 = 0.0;
    for name in BUILTINS {
        let r = analyze(name, "all");
        let f = &r.formulas;
        worst = worst.max(f.max_residual());
        c.check(f.max_residual() < tol, format!("{name}: class formulas {:.1e}", f.max_residual()));
        c.check(f.frobenius_mismatches == 0, format!("{name}: reciprocity"));
        c.check(f.coset_decomposition, format!("{name}: coset decomposition"));
        c.check(f.bc_equals_cb, format!("{name}: BC = CB"));
        for a in &r.alphas {
            worst = worst.max(a.induced_psi_alpha_residual);
            c.check(a.induced_psi_alpha_residual < tol, format!("{name}/{}: induced ψ_α", a.alpha));
            let k = a.kf.as_ref().unwrap();
            c.check(k.orbit_identity, format!("{name}/{}: orbit identity", a.alpha));
            c.check(k.s_dimension_identity, format!("{name}/{}: |S| = |B||H|", a.alpha));
        }
        let g = r.grading.as_ref().unwrap();
        worst = worst.max(g.uniform_coefficient_residual);
        c.check(g.uniform_coefficient_residual < tol, format!("{name}: uniform coefficient form"));
        c.check(g.image_of_coalgebra, format!("{name}: image of a coalgebra"));
        c.check(g.coset_is_graded_sum, format!("{name}: cosets are graded sums"));
        c.check(g.blocks_partition_f, format!("{name}: blocks partition F"));
    }
    c.finish(&format!("3 scenarios, worst residual {worst:.1e}"));
}

#[test]
fn criterion_5_theorem_cross_validation() {
    let mut c = Criterion::new(5);
    let mut pairs = 0;
    let mut mismatches = 0;
    for name in BUILTINS {
        for a in &analyze(name, "all").alphas {
            pairs += 1;
            let dz = Rational64::from_integer(a.dim_z as i64);
            c.check(dz <= a.bound, format!("{name}/{}: dim Z {} > bound {}", a.alpha, a.dim_z, a.bound));
            let eq = dz == a.bound;
            let zs = a.kf.as_ref().map(|k| k.z_equals_s).unwrap_or(eq);
            if eq != a.witherspoon_equality || eq != a.direct_holds || eq != zs {
                mismatches += 1;
            }
        }
    }
    c.check(pairs >= 10, format!("only {pairs} pairs"));
    c.check(mismatches == 0, format!("{mismatches} mismatches"));
    c.finish(&format!("{pairs} (scenario, α) pairs, {mismatches} mismatches"));
}

#[test]
fn criterion_6_hopf_axiom_suite() {
    let mut c = Criterion::new(6);
    let s4 = builtin("s4_counterexample");
    let s3 = builtin("s3_a3_classical");
    let d4 = builtin("cocentral_c4_c2");
    let cases = [
        ("kS3", &s3.ext.a, Some(&s3.ext.dec_a), Some(vec![1, 1, 2])),
        ("k^C4", &s4.ext.inc.small, Some(&s4.ext.dec_b), Some(vec![1, 1, 1, 1])),
        ("k^C4#kS3", &s4.ext.a, Some(&s4.ext.dec_a), Some(vec![1, 1, 2, 3, 3])),
        ("(k^C4#kS3)*", &s4.ext.dual, Some(&s4.ext.dec_dual), None),
        ("k^C4#kC2", &d4.ext.a, Some(&d4.ext.dec_a), Some(vec![1, 1, 1, 1, 2])),
    ];
    let mut lines = Vec::new();
    for (name, h, dec, want) in cases {
        let report = verify_hopf_axioms(h);
        c.check(report.passed(), format!("{name}: axioms"));
        c.check(report.max_residual() < TAU_ALG, format!("{name}: residual {:.1e}", report.max_residual()));
        c.check(report.residual("antipode_involutive") < TAU_ALG, format!("{name}: S² = Id"));
        let dims = dec.unwrap().dims.clone();
        let sum: usize = dims.iter().map(|n| n * n).sum();
        c.check(sum == h.dim(), format!("{name}: Σn² = {sum} ≠ {}", h.dim()));
        if let Some(w) = want {
            c.check(dims == w, format!("{name}: degrees {dims:?}"));
        }
        lines.push(format!("{name} {dims:?}"));
    }
    c.finish(&lines.join(", "));
}

#[test]
fn criterion_7_determinism() {
    let mut c = Criterion::new(7);
    for name in BUILTINS {
        let a = to_stable_json(&analyze(name, "all")).unwrap();
        let b = to_stable_json(&analyze(name, "all")).unwrap();
        c.check(a == b, format!("{name}: in-process runs differ"));
    }
    let dir = std::env::temp_dir().join(format!("hopf-clifford-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("run{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_hopf-clifford"))
            .args(["analyze", "--builtin", "s4_counterexample", "--seed", "17", "--json"])
            .arg(&path)
            .env_remove("HOPF_CLIFFORD_SEED")
            .output()
            .unwrap();
        c.check(status.status.success(), format!("binary exit {:?}", status.status.code()));
        outputs.push(std::fs::read(&path).unwrap());
    }
    c.check(outputs[0] == outputs[1], "binary runs differ");
    let _ = std::fs::remove_dir_all(&dir);
    c.finish(&format!("byte-identical reports, {} bytes", outputs[0].len()));
}

#[test]
fn criterion_8_runtime_budget() {
    // The heaviest workload of the suite: every builtin, every α, all axioms.
    let mut c = Criterion::new(8);
    let start = Instant::now();
    for name in BUILTINS {
        let b = builtin(name);
        let r = run(&b, &AlphaSpec::default()).unwrap();
        c.check(r.consistent, format!("{name}: consistent"));
    }
    let elapsed = start.elapsed();
    c.check(elapsed < Duration::from_secs(60), format!("{elapsed:?}"));
    c.finish(&format!("full builtin workload in {:.2} s", elapsed.as_secs_f64()));
}
