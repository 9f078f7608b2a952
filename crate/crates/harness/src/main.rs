use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nsplit::bch::{MatrixSet, DEFAULT_SEED};
use nsplit::serial::TableDocument;
use nsplit_harness::checks::{bch_check, format_bch, format_verify, halving_ladder, verify_order, BchStatus};
use nsplit_harness::error::{HarnessError, Result};
use nsplit_harness::svg::{render, ChartKind};
use nsplit_harness::{catalog, csv_io, study, Study, StudyConfig};

#[derive(Parser)]
#[command(name = "nsplit", version, about = "N-split operator-splitting studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in methods for a given operator count.
    ListMethods {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Check a method's order conditions; exits nonzero when they fail.
    VerifyOrder {
        /// Built-in id (see list-methods).
        #[arg(long, required_unless_present = "table")]
        method: Option<String>,
        /// A table document in JSON instead of a built-in id.
        #[arg(long, conflicts_with = "method")]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Order to verify; defaults to the method's design order.
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Error against step size over a geometric ladder.
    Convergence(StudyArgs),
    /// Error against RHS evaluations over a geometric ladder.
    WorkPrecision(StudyArgs),
    /// BCH truncation error ladder on seeded random matrices.
    BchCheck {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        t0: f64,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Draw a study CSV as an SVG chart.
    Render {
        csv: PathBuf,
        #[arg(long, default_value = "convergence")]
        kind: String,
        /// Defaults to the CSV path with an .svg extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    /// Comma-separated method ids.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    dt0: Option<String>,
    #[arg(long)]
    ratio: Option<String>,
    #[arg(long)]
    rungs: Option<String>,
    #[arg(long)]
    sub: Option<String>,
    #[arg(long)]
    substeps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Worker threads for study rows.
    #[arg(long)]
    jobs: Option<String>,
    /// Any config field by dotted name, e.g. `--set reference.atol=1e-12`.
    /// `--reference.atol 1e-12` is accepted as shorthand.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl StudyArgs {
    fn load(&self) -> Result<StudyConfig> {
        let mut overrides = Vec::new();
        let named = [
            ("problem", &self.problem),
            ("methods", &self.methods),
            ("dt0", &self.dt0),
            ("ratio", &self.ratio),
            ("rungs", &self.rungs),
            ("sub", &self.sub),
            ("substeps", &self.substeps),
            ("seed", &self.seed),
            ("out", &self.out),
            ("jobs", &self.jobs),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                // strings that look like numbers must stay strings here
                let v = if matches!(k, "problem" | "sub" | "out") {
                    format!("\"{v}\"")
                } else {
                    v.clone()
                };
                overrides.push((k.to_string(), v));
            }
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("expected KEY=VALUE, got `{kv}`")))?;
            overrides.push((k.trim().to_string(), v.trim().to_string()));
        }
        StudyConfig::load(self.config.as_deref(), &overrides)
    }
}

/// Rewrites `--a.b value` and `--a.b=value` into `--set a.b=value`.
fn expand_dotted(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.peekable();
    while let Some(a) = it.next() {
        match a
            .strip_prefix("--")
            .filter(|k| k.split('=').next().is_some_and(|k| k.contains('.')))
        {
            Some(rest) => {
                let kv = if rest.contains('=') {
                    rest.to_string()
                } else {
                    format!("{rest}={}", it.next().unwrap_or_default())
                };
                out.push("--set".into());
                out.push(kv);
            }
            None => out.push(a),
        }
    }
    out
}

fn run_study(args: &StudyArgs, kind: ChartKind) -> Result<bool> {
    let cfg = args.load()?;
    let floor = cfg.fit_floor;
    let stem = match kind {
        ChartKind::Convergence => "convergence",
        ChartKind::WorkPrecision => "work-precision",
    };
    let base = cfg.out.join(format!("{stem}-{}", cfg.problem));
    let mut study = Study::new(cfg)?;
    let result = study.run()?;
    let csv_path = base.with_extension("csv");
    csv_io::write(&csv_path, &result)?;
    print!("{}", study::format_summary(&result, floor));
    println!("wrote {}", csv_path.display());
    let guides: Vec<u32> = {
        let n = result.n_operators;
        let mut g: Vec<u32> = study
            .config
            .methods
            .iter()
            .filter_map(|m| catalog::build(m, n).ok().map(|t| t.design_order()))
            .collect();
        g.sort_unstable();
        g.dedup();
        g
    };
    match render(&result, kind, &guides) {
        Ok(svg) => {
            let svg_path = base.with_extension("svg");
            std::fs::write(&svg_path, svg).map_err(|e| HarnessError::Io {
                path: svg_path.display().to_string(),
                source: e,
            })?;
            println!("wrote {}", svg_path.display());
        }
        Err(e) => eprintln!("no chart: {e}"),
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::ListMethods { n } => {
            print!("{}", catalog::format_listing(&catalog::listing(n)?));
            Ok(true)
        }
        Command::VerifyOrder {
            method,
            table,
            n,
            order,
            tol,
            seed,
        } => {
            let (t, claimed) = match (method, table) {
                (Some(id), _) => {
                    let t = catalog::build(&id, n)?;
                    let o = t.design_order();
                    (t, o)
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::Io {
                        path: path.display().to_string(),
                        source: e,
                    })?;
                    let doc = TableDocument::from_json(&text)?;
                    (doc.to_table::<f64>()?, doc.design_order)
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let r = verify_order(&t, order.unwrap_or(claimed), tol, seed)?;
            print!("{}", format_verify(&r));
            Ok(r.pass)
        }
        Command::Convergence(args) => run_study(&args, ChartKind::Convergence),
        Command::WorkPrecision(args) => run_study(&args, ChartKind::WorkPrecision),
        Command::BchCheck {
            n,
            dim,
            seed,
            t0,
            levels,
        } => {
            if n < 2 || dim == 0 || levels < 2 || t0.is_nan() || t0 <= 0.0 {
                return Err(HarnessError::Config(
                    "need n >= 2, dim >= 1, levels >= 2, t0 > 0".into(),
                ));
            }
            let r = bch_check(&MatrixSet::random(n, dim, seed), &halving_ladder(t0, levels))?;
            print!("{}", format_bch(&r));
            Ok(r.status != BchStatus::Fail)
        }
        Command::Render { csv, kind, out } => {
            let kind: ChartKind = kind.parse()?;
            let result = csv_io::read(&csv)?;
            let svg = render(&result, kind, &[2, 3])?;
            let out = out.unwrap_or_else(|| csv.with_extension("svg"));
            std::fs::write(&out, svg).map_err(|e| HarnessError::Io {
                path: out.display().to_string(),
                source: e,
            })?;
            println!("wrote {}", out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(expand_dotted(std::env::args()));
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
