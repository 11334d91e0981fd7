//! Command-line driver. Exit codes: 0 success, 1 invalid input, 2 internal
//! consistency failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::catalog::{self, CatalogEntry};
use crate::cohomology::{
    analyze, deformed_complex, first_page, obstruction, CohomologyError, CohomologyReport, DeformedReport, Obstruction,
    DEFAULT_MAX_DEGREE,
};
use crate::expr::parse_element;
use crate::field::{rank, SparseVec};
use crate::lie_algebra::{d_rho_matrix, t_indices, validate, AlgebraSpec, StructureReport};
use crate::schouten::{GradedElement, PoissonComplex, SchoutenAlgebra};
use crate::spec_io::{emit_spec, parse_spec};

#[derive(Debug, Parser)]
#[command(
    name = "nilpoisson",
    version,
    about = "Holomorphic Poisson cohomology of nilpotent Lie algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a spec file: Jacobi identity, nilpotency, center and layers.
    Validate { file: String },
    /// Built-in example families.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Dolbeault and Poisson cohomology, spectral-sequence pages and verdicts.
    Analyze {
        /// Catalog name (e.g. w4n6:0) or spec file path.
        target: String,
        /// Poisson bivector, e.g. "V^T2"; defaults to 0.
        #[arg(long)]
        poisson: Option<String>,
        /// Highest total degree; defaults to min(dim L, 6).
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Solve the obstruction equation for Λ = V∧T.
    Obstruction {
        /// Catalog name or spec file path
        target: String,
        /// Vector T in the layer below the center, e.g. "T1"
        #[arg(long = "t")]
        t: String,
        /// Highest total degree for the degeneracy cross-check
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Cohomology of the deformed differential ∂̄ + ad_Λ + ad_Ω̄.
    Deform {
        /// Catalog name or spec file path
        target: String,
        /// Poisson bivector Λ
        #[arg(long)]
        poisson: String,
        /// Form Ω̄ of bidegree (0,2), e.g. "rho_bar^w1_bar"
        #[arg(long)]
        omega: String,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Emit JSON instead of tables
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Family names with parameter signatures.
    List,
    /// Print the spec file of a catalog entry.
    Emit { name: String },
}

enum Failure {
    Input(String),
    Consistency(String),
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::Consistency(_) => Failure::Consistency(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

/// Parses `args` and runs the command, writing the report to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Consistency(msg)) => {
            let _ = writeln!(err, "consistency failure: {msg}");
            2
        }
    }
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Failure::Input(format!("{file}: {e}")))?;
            let spec = parse_spec(&text).map_err(|e| Failure::Input(format!("{file}: {e}")))?;
            let report = validate(&spec).map_err(|e| Failure::Input(format!("{file}: {e}")))?;
            Ok(structure_text(&spec, &report))
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => Ok(catalog::list().iter().map(|(_, sig)| format!("{sig}\n")).collect()),
        Command::Catalog {
            action: CatalogAction::Emit { name },
        } => {
            let entry: CatalogEntry = name.parse().map_err(|e| Failure::Input(format!("{e}")))?;
            Ok(emit_spec(&entry.build()) + "\n")
        }
        Command::Analyze {
            target,
            poisson,
            max_degree,
            json,
        } => {
            let alg = load(&target)?;
            let lambda = expression(&alg, "--poisson", poisson.as_deref().unwrap_or("0"))?;
            let report = analyze(alg.clone(), lambda, Some(default_degree(&alg, max_degree)))?;
            Ok(if json {
                report.to_json() + "\n"
            } else {
                report_text(&report)
            })
        }
        Command::Obstruction { target, t, max_degree } => {
            let alg = load(&target)?;
            run_obstruction(&alg, &t, default_degree(&alg, max_degree))
        }
        Command::Deform {
            target,
            poisson,
            omega,
            max_degree,
            json,
        } => {
            let alg = load(&target)?;
            let lambda = expression(&alg, "--poisson", &poisson)?;
            let omega = expression(&alg, "--omega", &omega)?;
            let report = deformed_complex(&alg, &lambda, &omega, Some(default_degree(&alg, max_degree)))?;
            Ok(if json {
                report.to_json() + "\n"
            } else {
                deformed_text(&report)
            })
        }
    }
}

fn default_degree(alg: &SchoutenAlgebra, requested: Option<usize>) -> usize {
    requested.unwrap_or(DEFAULT_MAX_DEGREE).min(alg.dim_l())
}

/// A spec file path if one exists, otherwise a catalog name.
fn load(target: &str) -> Result<Arc<SchoutenAlgebra>, Failure> {
    let spec = if Path::new(target).is_file() {
        let text = std::fs::read_to_string(target).map_err(|e| Failure::Input(format!("{target}: {e}")))?;
        parse_spec(&text).map_err(|e| Failure::Input(format!("{target}: {e}")))?
    } else {
        let entry: CatalogEntry = target
            .parse()
            .map_err(|e| Failure::Input(format!("{target:?} is neither a spec file nor a catalog entry: {e}")))?;
        entry.build()
    };
    SchoutenAlgebra::from_spec(&spec)
        .map(Arc::new)
        .map_err(|e| Failure::Input(format!("{target}: {e}")))
}

fn expression(alg: &SchoutenAlgebra, flag: &str, text: &str) -> Result<GradedElement, Failure> {
    parse_element(alg, text).map_err(|e| Failure::Input(format!("{flag}: {e}")))
}

fn run_obstruction(alg: &Arc<SchoutenAlgebra>, t_text: &str, max: usize) -> Outcome {
    let t_el = expression(alg, "--t", t_text)?;
    let t = alg
        .vector_coords(&t_el)
        .ok_or_else(|| Failure::Input(format!("--t: {t_text:?} is not a (1,0) vector")))?;
    let v = alg
        .structure()
        .center_vector()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let outcome = obstruction(alg, v, &t)?;

    let lambda = alg.vector_element(v).wedge(&t_el);
    let cx = PoissonComplex::new(alg.clone(), lambda.clone()).map_err(|e| Failure::Input(e.to_string()))?;
    let degenerate = first_page(&cx, max).degenerate;
    let solvable = !matches!(outcome, Obstruction::Unsolvable);
    if solvable != degenerate {
        return Err(Failure::Consistency(format!(
            "obstruction is {} but d₁ {} on the first page",
            outcome.name(),
            if degenerate { "vanishes" } else { "does not vanish" }
        )));
    }
    let mut s = format!("Λ = {}\n", alg.format(&lambda));
    match outcome {
        Obstruction::TrivialAction => {
            s.push_str("trivial_action: ad_Λ vanishes identically; spectral sequence degenerates\n");
        }
        Obstruction::Solvable(x) => {
            let idx = t_indices(alg.spec(), v);
            let xv = SparseVec::from_entries(idx.iter().zip(&x).map(|(&i, c)| (i, c.clone())));
            let _ = writeln!(
                s,
                "solvable: X = {}; spectral sequence degenerates",
                alg.format(&alg.vector_from_coords(&xv))
            );
        }
        Obstruction::Unsolvable => s.push_str("unsolvable: spectral sequence does not degenerate\n"),
    }
    Ok(s)
}

fn structure_text(spec: &AlgebraSpec, report: &StructureReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: valid", spec.name());
    let _ = writeln!(
        s,
        "complex dimension n = {}, real dimension {}",
        spec.n(),
        spec.real_dim()
    );
    let _ = writeln!(s, "nilpotency step {}", report.step);
    let _ = writeln!(s, "lower central series dimensions {:?}", report.lcs_dims);
    let vectors = |basis: &[SparseVec]| -> String {
        basis
            .iter()
            .map(|v| {
                let parts: Vec<String> = v
                    .iter()
                    .map(|(i, c)| coefficient_label(&c.to_string(), spec.label(i)))
                    .collect();
                parts.join(" + ")
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(
        s,
        "center c^(1,0): dim {} [{}]",
        report.dim_center(),
        vectors(&report.center)
    );
    for layer in &report.layers {
        let _ = writeln!(
            s,
            "layer t_{}: dim {} [{}]",
            layer.level,
            layer.dim(),
            vectors(&layer.basis)
        );
    }
    if let Ok(v) = report.center_vector() {
        if let Ok(d) = d_rho_matrix(spec, report, v) {
            let r = rank(&d);
            let verdict = if r == d.rows() { "non-degenerate" } else { "degenerate" };
            let _ = writeln!(s, "dρ: rank {r} of {} ({verdict})", d.rows());
        }
    }
    s
}

fn coefficient_label(c: &str, label: &str) -> String {
    if c == "1" {
        label.to_string()
    } else {
        format!("({c}){label}")
    }
}

fn table_text(s: &mut String, title: &str, table: &crate::cohomology::BidegreeTable) {
    let _ = writeln!(s, "{title}");
    let pmax = table.keys().map(|k| k.0).max().unwrap_or(0);
    let qmax = table.keys().map(|k| k.1).max().unwrap_or(0);
    let _ = write!(s, "  p\\q");
    for q in 0..=qmax {
        let _ = write!(s, "{q:>7}");
    }
    s.push('\n');
    for p in 0..=pmax {
        let _ = write!(s, "  {p:>3}");
        for q in 0..=qmax {
            match table.get(&(p, q)) {
                Some(d) => {
                    let _ = write!(s, "{d:>7}");
                }
                None => s.push_str("      ."),
            }
        }
        s.push('\n');
    }
}

fn report_text(r: &CohomologyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "algebra {}, Λ = {}, degrees ≤ {}",
        r.algebra, r.poisson, r.max_degree
    );
    table_text(&mut s, "dim H^q(g^{p,0}) = E1^{p,q}:", &r.hpq);
    table_text(&mut s, "rank d1^{p,q}:", &r.e1_d1_ranks);
    table_text(&mut s, "dim E2^{p,q}:", &r.e2);
    s.push_str("degree  dim H^n_Λ  Σ dim H^{p,q}\n");
    for c in &r.hodge_comparison {
        let _ = writeln!(s, "{:>6}  {:>9}  {:>13}", c.degree, c.hn_lambda, c.dolbeault_sum);
    }
    let _ = writeln!(s, "first page degenerate: {}", r.degeneracy);
    let _ = writeln!(
        s,
        "hodge decomposition: {}{}",
        r.hodge,
        if r.hodge_required {
            " (implied by the obstruction)"
        } else {
            ""
        }
    );
    if let Some(o) = &r.obstruction {
        let _ = writeln!(s, "obstruction for T = {}: {}", o.t, o.outcome);
    }
    if let Some(x) = &r.obstruction_solution {
        let parts: Vec<String> = x.iter().map(|c| format!("{} = {}", c.label, c.value)).collect();
        let _ = writeln!(s, "solution X: {}", parts.join(", "));
    }
    s
}

fn deformed_text(r: &DeformedReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algebra {}, Λ = {}, Ω̄ = {}", r.algebra, r.poisson, r.omega);
    s.push_str("δ̄² = 0 verified\n");
    for (label, image) in &r.generator_images {
        let _ = writeln!(s, "δ̄{label} = {image}");
    }
    for (n, d) in &r.dims {
        let _ = writeln!(s, "dim H^{n} = {d}");
    }
    let _ = writeln!(s, "ker δ̄ on K^1: dim {}", r.kernel_k1_dim);
    for v in &r.kernel_k1 {
        let _ = writeln!(s, "  {v}");
    }
    s
}
