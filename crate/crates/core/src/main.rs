use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use syswidth::content::{hc_exact, hc_greedy, hc_lower, select_shell, ExactOptions};
use syswidth::error::{Error, Result};
use syswidth::generate;
use syswidth::harness::{append_report, load_space, to_value, verify, RunReport};
use syswidth::separator::{minimize_separator, SeparatorOptions};
use syswidth::space::{DiscreteSpace, Subset};
use syswidth::topology::{lemma21_threshold, systole, tree_report};
use syswidth::width::{bound_width, theorem_radius, WidthOptions};

#[derive(Parser)]
#[command(name = "syswidth", version, about = "Hausdorff content, separators and width certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a space document.
    Gen(GenArgs),
    /// Hausdorff content of the space or a subset.
    Hc(HcArgs),
    /// Coarea shell selection around a point.
    Coarea(CoareaArgs),
    /// Separator descent.
    Separate(SeparateArgs),
    /// Width certificate.
    Width(WidthArgs),
    /// Shortest (homologically) nontrivial cycle.
    Systole(Common),
    /// Metric-tree report and optional threshold check.
    Tree(TreeArgs),
    /// End-to-end content, width and systole check.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    space: PathBuf,
    /// Append the JSON report line here instead of printing it.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Point budget for exhaustive search.
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Interval,
    Circle,
    Tree,
    Star,
    GridTorus,
    RandomPoints,
    ThetaGraph,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    shape: Shape,
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    /// Torus side.
    #[arg(long, default_value_t = 8.0)]
    k: f64,
    /// Number of random points.
    #[arg(long, default_value_t = 20.0)]
    n: f64,
    /// Ambient dimension for random points.
    #[arg(long, default_value_t = 2.0)]
    dim: f64,
    /// Edge count for random trees, arm count for stars.
    #[arg(long, default_value_t = 10.0)]
    edges: f64,
    #[arg(long, default_value_t = 0.2)]
    lo: f64,
    #[arg(long, default_value_t = 1.0)]
    hi: f64,
    /// Comma-separated arc lengths for theta graphs.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0])]
    arcs: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    seed: f64,
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Greedy,
    Lower,
}

#[derive(Args)]
struct HcArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    dim: f64,
    #[arg(long, value_enum, default_value_t = Mode::Greedy)]
    mode: Mode,
    #[arg(long)]
    cap: Option<f64>,
    /// Comma-separated point indices; the whole space when omitted.
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<f64>>,
}

#[derive(Args)]
struct CoareaArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    dim: f64,
    #[arg(long)]
    center: f64,
    #[arg(long)]
    r1: f64,
    #[arg(long)]
    r2: f64,
}

#[derive(Args)]
struct SeparateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    dim: f64,
    #[arg(long)]
    r: f64,
    #[arg(long)]
    mu: Option<f64>,
}

#[derive(Args)]
struct WidthArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    dim: f64,
    /// Defaults to `4n · HC_n^{1/n} · (1 + 1e-3)`.
    #[arg(long)]
    r: Option<f64>,
}

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    r: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    dim: f64,
}

fn count(name: &str, v: f64) -> Result<usize> {
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v < 1e15 {
        Ok(v as usize)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be a nonnegative integer, got {v}")))
    }
}

fn exact_options(common: &Common) -> Result<ExactOptions> {
    let mut opts = ExactOptions::default();
    if let Some(b) = common.budget {
        opts.budget = count("budget", b)?;
    }
    Ok(opts)
}

fn generate_space(a: &GenArgs) -> Result<DiscreteSpace> {
    let seed = count("seed", a.seed)? as u64;
    match a.shape {
        Shape::Interval => generate::interval(a.length, a.h),
        Shape::Circle => generate::circle(a.length, a.h),
        Shape::Tree => generate::random_tree(count("edges", a.edges)?, a.lo, a.hi, a.h, seed),
        Shape::Star => generate::star(count("edges", a.edges)?, a.length, a.h),
        Shape::GridTorus => generate::grid_torus(count("k", a.k)?),
        Shape::RandomPoints => generate::random_points(count("n", a.n)?, count("dim", a.dim)?, a.h, seed),
        Shape::ThetaGraph => generate::theta(&a.arcs, a.h),
    }
}

fn run_gen(a: &GenArgs) -> i32 {
    match generate_space(a) {
        Ok(space) => {
            let text = space.to_document().to_json();
            match &a.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: {}: {e}", path.display());
                        return 2;
                    }
                }
                None => println!("{text}"),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Load the space, run `body`, and emit one report line.
fn run_with_space(
    command: &str,
    common: &Common,
    parameters: Value,
    body: impl FnOnce(&DiscreteSpace, ExactOptions) -> Result<Value>,
) -> i32 {
    let started = Instant::now();
    let (hash, result) = match load_space(&common.space) {
        Ok((space, hash)) => (Some(hash), exact_options(common).and_then(|o| body(&space, o))),
        Err(e) => (None, Err(e)),
    };
    let report = RunReport::new(command, hash, parameters, result, started);
    if let Some(msg) = &report.message {
        eprintln!("{command}: {msg}");
    }
    match &common.out {
        Some(path) => {
            if let Err(e) = append_report(path, &report) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        None => println!("{}", report.to_line()),
    }
    report.exit_code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Hc(a) => run_with_space(
            "hc",
            &a.common,
            json!({"dim": a.dim, "mode": match a.mode { Mode::Exact => "exact", Mode::Greedy => "greedy", Mode::Lower => "lower" }, "cap": a.cap, "subset": a.subset}),
            |space, opts| {
                let subset = match &a.subset {
                    Some(ix) => {
                        let ix: Vec<usize> = ix.iter().map(|&v| count("subset index", v)).collect::<Result<_>>()?;
                        Subset::from_indices(space.len(), ix)?
                    }
                    None => space.full(),
                };
                let est = match a.mode {
                    Mode::Exact => hc_exact(space, &subset, a.dim, a.cap, opts)?,
                    Mode::Greedy => hc_greedy(space, &subset, a.dim, a.cap)?,
                    Mode::Lower => hc_lower(space, &subset, a.dim, a.cap)?,
                };
                to_value(&est)
            },
        ),
        Command::Coarea(a) => run_with_space(
            "coarea",
            &a.common,
            json!({"dim": a.dim, "center": a.center, "r1": a.r1, "r2": a.r2}),
            |space, opts| {
                let x = count("center", a.center)?;
                let sel = select_shell(space, &space.full(), x, a.r1, a.r2, a.dim, None, opts)?;
                to_value(&sel)
            },
        ),
        Command::Separate(a) => run_with_space(
            "separate",
            &a.common,
            json!({"dim": a.dim, "r": a.r, "mu": a.mu}),
            |space, opts| {
                let n = count("dim", a.dim)?;
                let cert = minimize_separator(
                    space,
                    &space.full(),
                    a.r,
                    n,
                    a.mu,
                    SeparatorOptions {
                        exact: opts,
                        ..Default::default()
                    },
                )?;
                cert.validate(space, &space.full())?;
                to_value(&cert)
            },
        ),
        Command::Width(a) => run_with_space(
            "width",
            &a.common,
            json!({"dim": a.dim, "r": a.r}),
            |space, opts| {
                let n = count("dim", a.dim)?;
                let y = space.full();
                let mut wopts = WidthOptions {
                    exact: opts,
                    ..Default::default()
                };
                let r = match a.r {
                    Some(r) => r,
                    None => {
                        let (r, hint) = theorem_radius(space, &y, n, opts)?;
                        wopts.hints.push(hint);
                        r
                    }
                };
                to_value(&bound_width(space, &y, n, r, &wopts)?)
            },
        ),
        Command::Systole(c) => run_with_space("systole", c, json!({}), |space, _| {
            to_value(&systole(space)?.ok_or(Error::NotEssential)?)
        }),
        Command::Tree(a) => run_with_space("tree", &a.common, json!({"r": a.r}), |space, _| {
            let report = tree_report(space)?;
            let threshold = a.r.map(|r| lemma21_threshold(space, r)).transpose()?;
            Ok(json!({"tree": to_value(&report)?, "threshold": to_value(&threshold)?}))
        }),
        Command::Verify(a) => run_with_space("verify", &a.common, json!({"dim": a.dim}), |space, opts| {
            to_value(&verify(space, count("dim", a.dim)?, opts)?)
        }),
    };
    ExitCode::from(code as u8)
}
