use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use hopf_clifford::error::{Error, Result};
use hopf_clifford::scenario::{
    axiom_suite, build, irr_table, resolve_seed, run, to_stable_json, AlphaSpec, Built, IrrEntry,
    RunReport, Scenario,
};

#[derive(Parser)]
#[command(name = "hopf-clifford", version, about = "Clifford correspondence checks for semisimple Hopf algebra extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis: axioms, class formulas, and the per-α verdicts.
    Analyze(Common),
    /// Check the Hopf axioms of every constructed algebra.
    VerifyAxioms(Common),
    /// Print Irr(A), Irr(B) and Irr(A*) in canonical order.
    ListIrr(Common),
}

#[derive(Args)]
struct Common {
    /// One of s4_counterexample, s3_a3_classical, cocentral_c4_c2.
    #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
    builtin: Option<String>,
    /// Scenario JSON file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Irreducible B-character: an index, a label, or "all".
    #[arg(long)]
    alpha: Option<String>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<(Built, AlphaSpec)> {
        let mut scenario = match (&self.builtin, &self.scenario) {
            (Some(name), _) => Scenario::builtin(name)?,
            (None, Some(path)) => Scenario::from_file(path)?,
            (None, None) => return Err(Error::Config("need --builtin or --scenario".into())),
        };
        if let Some(a) = &self.alpha {
            scenario.alpha = AlphaSpec::parse(a);
        }
        let alpha = scenario.alpha.clone();
        let seed = resolve_seed(self.seed, &scenario)?;
        Ok((build(scenario, seed)?, alpha))
    }

    fn write_json(&self, text: &str) -> Result<()> {
        if let Some(path) = &self.json {
            std::fs::write(path, text)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }
}

fn print_analysis(r: &RunReport) {
    let s = &r.scenario;
    println!("scenario {} ({:?}), dim A = {}, dim B = {}, seed {}", s.name, s.construction, s.dim_a, s.dim_b, s.seed);
    if let Some(t) = &r.tables {
        println!("action tables: {} cells, {} mismatches", t.cells_checked, t.mismatches.len());
    }
    for a in &r.axioms {
        println!("axioms {:<3} dim {:>3}: {} (max residual {:.1e})", a.algebra, a.dim, pass(a.passed), a.max_residual);
    }
    println!("Irr(A) degrees {:?}; Irr(B) degrees {:?}", r.a_degrees, r.b_degrees);
    for (i, c) in r.classes.iter().enumerate() {
        println!("class {i}: B_i = {{{}}}, A_i = {{{}}}", c.b.join(", "), c.a.join(", "));
    }
    println!("class formulas: max residual {:.1e}", r.formulas.max_residual());
    if let Some(g) = &r.grading {
        println!("grading and coset checks: {}", pass(g.passed(r.formula_tolerance)));
    }
    if let Some(c) = r.cocentral {
        println!("cocentral: {c}");
    }
    for a in &r.alphas {
        println!(
            "alpha {}: deg {}, dim Z = {}, bound {} = {}·{}/{}, Witherspoon equality {}, direct {}, verdict {}",
            a.alpha, a.alpha_degree, a.dim_z, a.bound, a.a_i_1, a.dim_z, a.b_i_1,
            a.witherspoon_equality, a.direct_holds, a.verdict
        );
        let rows: Vec<String> = a
            .induction_table
            .iter()
            .map(|row| {
                let parts: Vec<String> = row
                    .induced
                    .iter()
                    .map(|(l, m)| if *m == 1 { l.clone() } else { format!("{m}{l}") })
                    .collect();
                format!("{}↑ = {}", row.psi, parts.join(" + "))
            })
            .collect();
        println!("  induction: {}", rows.join("; "));
        if let Some(k) = &a.kf {
            println!(
                "  H = {{{}}}, dim S = {}, S Hopf {}, Z = S {}",
                k.stabilizer_h.join(", "), k.dim_s, k.s_is_hopf, k.z_equals_s
            );
        }
    }
    println!("consistent: {}", r.consistent);
}

fn print_irr(label: &str, entries: &[IrrEntry]) {
    let items: Vec<String> = entries.iter().map(|e| format!("{}({})", e.label, e.degree)).collect();
    println!("Irr({label}): {}", items.join(" "));
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    let start = Instant::now();
    let ok = match &cli.command {
        Command::Analyze(c) => {
            let (built, alpha) = c.load()?;
            let report = run(&built, &alpha)?;
            print_analysis(&report);
            c.write_json(&to_stable_json(&report)?)?;
            report.consistent
        }
        Command::VerifyAxioms(c) => {
            let (built, _) = c.load()?;
            let suite = axiom_suite(&built);
            for a in &suite {
                println!("{:<3} dim {:>3}: {} (max residual {:.1e})", a.algebra, a.dim, pass(a.passed), a.max_residual);
                for check in &a.report.checks {
                    println!("    {:<20} {:.1e}", check.axiom, check.residual);
                }
            }
            c.write_json(&to_stable_json(&suite)?)?;
            suite.iter().all(|a| a.passed)
        }
        Command::ListIrr(c) => {
            let (built, _) = c.load()?;
            let table = irr_table(&built);
            print_irr("A", &table.a);
            print_irr("B", &table.b);
            print_irr("A*", &table.dual);
            c.write_json(&to_stable_json(&table)?)?;
            true
        }
    };
    println!("elapsed {:.3} s", start.elapsed().as_secs_f64());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: internal consistency checks failed");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
