use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use densitylab::constructions::ConstructedSet;
use densitylab::tolerances::{
    CONSTRUCTION_HORIZON, DEFAULT_HORIZON, DEFAULT_THETAS, SAMPLE_PALETTE, TOL,
};
use densitylab::verify::{run_suite, VerifyOptions};
use densitylab::{
    alpha_envelopes, corollary_superset, counterexample_set, density_set_sample,
    difference_matching_subset, estimate_alpha_density, evaluate_measure, exact_alpha_extremes,
    exact_density, gap_density, intermediate_subset, parse_set_expr, polya_bounds, range_witness,
    DensityError, EstimateOptions, FlimOptions, MeasureSpec, SetExpr,
};
use serde::Serialize;
use serde_json::json;

mod output;

use output::{Document, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "densitylab", version, about = "Densities of subsets of the positive integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest n examined [default: 2^22, or 10^6 for construct]
    #[arg(long, global = true)]
    horizon: Option<u64>,

    /// Convergence / existence tolerance
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write the document here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower and upper asymptotic density
    Density { expr: String },
    /// Lower and upper α-density for one α or a grid
    AlphaDensity {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha_grid: Option<Vec<f64>>,
    },
    /// Exact density and closed-form α-extremes, when available
    Exact {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Pólya minimal and maximal density
    Polya {
        expr: String,
        #[arg(long, value_delimiter = ',')]
        theta_list: Option<Vec<f64>>,
    },
    /// Gap density
    Gap { expr: String },
    /// Infimum of lower and supremum of upper α-densities over a grid
    Envelopes {
        expr: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha_grid: Option<Vec<f64>>,
    },
    /// Evaluate a density measure read from a JSON spec file
    Measure {
        expr: String,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Build a two-atom measure taking the target value on the set
    Witness {
        expr: String,
        #[arg(long)]
        target: f64,
    },
    /// Run one of the set constructions
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        /// Source sets A and B (none for the counterexample)
        exprs: Vec<String>,
        /// Include the run-length encoded member list
        #[arg(long)]
        rle: bool,
    },
    /// Lower/upper densities of random subsets
    DensitySet {
        expr: String,
        #[arg(long, default_value_t = 50)]
        num: usize,
    },
    /// Run the invariant and acceptance suite
    Verify {
        /// Only checks whose name contains this text
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ConstructKind {
    Intermediate,
    Difference,
    Superset,
    Counterexample,
}

/// A failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<DensityError> for Failure {
    fn from(e: DensityError) -> Self {
        let code = match e {
            DensityError::Parse(_) => 2,
            DensityError::NonConvergent { .. } => 4,
            _ => 3,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("densitylab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("DENSITYLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn parse(text: &str) -> Result<SetExpr, Failure> {
    parse_set_expr(text).map_err(|e| Failure::from(DensityError::from(e)))
}

fn check_tolerance(t: Option<f64>) -> Result<Option<f64>, Failure> {
    match t {
        Some(x) if !(x > 0.0 && x < 1.0) => Err(Failure::usage(format!("tolerance {x} outside (0, 1)"))),
        other => Ok(other),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let tolerance = check_tolerance(cli.tolerance)?;
    let horizon = cli.horizon.unwrap_or(match cli.command {
        Command::Construct { .. } => CONSTRUCTION_HORIZON,
        _ => DEFAULT_HORIZON,
    });
    if horizon < 2 {
        return Err(Failure::usage("horizon must be at least 2"));
    }
    let mut est_opts = EstimateOptions::default();
    if let Some(t) = tolerance {
        est_opts.tol_exist = t;
    }
    let flim_opts = FlimOptions { tol: tolerance.unwrap_or(TOL), ..FlimOptions::default() };
    let requested = cli.format.map(|f| match f {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    });

    let doc = match &cli.command {
        Command::Density { expr } => {
            let e = parse(expr)?;
            let est = estimate_alpha_density(&e, 0.0, horizon, &est_opts)?;
            Document::new("density", &e, &est).with_table(Table::estimates(std::slice::from_ref(&est)))
        }
        Command::AlphaDensity { expr, alpha, alpha_grid } => {
            let e = parse(expr)?;
            let alphas = match (alpha, alpha_grid) {
                (Some(_), Some(_)) => return Err(Failure::usage("give --alpha or --alpha-grid, not both")),
                (Some(a), None) => vec![*a],
                (None, Some(g)) if !g.is_empty() => g.clone(),
                _ => return Err(Failure::usage("alpha-density needs --alpha or --alpha-grid")),
            };
            let ests = alphas
                .iter()
                .map(|&a| estimate_alpha_density(&e, a, horizon, &est_opts))
                .collect::<densitylab::Result<Vec<_>>>()?;
            Document::new("alpha-density", &e, &json!({ "estimates": ests }))
                .with_table(Table::estimates(&ests))
        }
        Command::Exact { expr, alpha } => {
            let e = parse(expr)?;
            let d = exact_density(&e);
            let extremes = match alpha {
                Some(a) => exact_alpha_extremes(&e, *a)?.map(|(lo, hi)| json!([lo, hi])),
                None => None,
            };
            let body = json!({
                "density": d.map(|r| format!("{}/{}", r.numer(), r.denom())),
                "density_value": d.map(|r| *r.numer() as f64 / *r.denom() as f64),
                "alpha": alpha,
                "alpha_extremes": extremes,
            });
            Document::new("exact", &e, &body)
        }
        Command::Polya { expr, theta_list } => {
            let e = parse(expr)?;
            let thetas = theta_list.clone().unwrap_or_else(|| DEFAULT_THETAS.to_vec());
            let p = polya_bounds(&e, &thetas, horizon)?;
            Document::new("polya", &e, &p).with_table(Table::theta_rows(&p))
        }
        Command::Gap { expr } => {
            let e = parse(expr)?;
            let g = gap_density(&e, horizon)?;
            Document::new("gap", &e, &json!({ "gap_density": g, "horizon": horizon }))
        }
        Command::Envelopes { expr, alpha_grid } => {
            let e = parse(expr)?;
            let grid = alpha_grid.clone().unwrap_or_else(|| vec![-1.0, 0.0, 1.0, 2.0, 4.0]);
            let env = alpha_envelopes(&e, &grid, horizon)?;
            Document::new("envelopes", &e, &env)
        }
        Command::Measure { expr, spec } => {
            let e = parse(expr)?;
            let text = fs::read_to_string(spec)?;
            let spec = MeasureSpec::from_json(&text)?;
            let value = evaluate_measure(&spec, &e, horizon, &flim_opts)?;
            Document::new("measure", &e, &json!({ "value": value, "horizon": horizon }))
        }
        Command::Witness { expr, target } => {
            let e = parse(expr)?;
            let spec = range_witness(&e, *target, horizon, &flim_opts)?;
            let value = evaluate_measure(&spec, &e, horizon, &flim_opts)?;
            Document::new(
                "witness",
                &e,
                &json!({ "target": target, "value": value, "horizon": horizon, "spec": spec }),
            )
        }
        Command::Construct { kind, exprs, rle } => {
            let built = construct(*kind, exprs, horizon)?;
            Document::bare("construct", &construction_body(&built, *rle))
        }
        Command::DensitySet { expr, num } => {
            let e = parse(expr)?;
            let sample = density_set_sample(&e, *num, horizon, cli.seed, &SAMPLE_PALETTE)?;
            Document::new(
                "density-set",
                &e,
                &json!({ "lambda": sample.lambda, "seed": cli.seed, "horizon": horizon, "points": sample.points }),
            )
            .with_table(Table::points(&sample.points))
            .prefer(Format::Csv)
        }
        Command::Verify { only, list } => {
            if *list {
                for name in densitylab::verify::check_names() {
                    println!("{name}");
                }
                return Ok(());
            }
            let opts = VerifyOptions {
                horizon: cli.horizon.unwrap_or(DEFAULT_HORIZON),
                seed: if cli.seed == 0 { VerifyOptions::default().seed } else { cli.seed },
                only: only.clone(),
                ..VerifyOptions::default()
            };
            let report = run_suite(&opts);
            match requested {
                Some(Format::Json) => output::emit(&Document::bare("verify", &report), Format::Json, cli.out.as_deref())?,
                Some(Format::Csv) => return Err(Failure::usage("verify has no CSV form")),
                None => output::write(&report.table(), cli.out.as_deref())?,
            }
            return if report.passed {
                Ok(())
            } else {
                Err(Failure { code: 5, message: "verification failed".into() })
            };
        }
    };
    let format = requested.unwrap_or(doc.preferred);
    if format == Format::Csv && doc.table.is_none() {
        return Err(Failure::usage(format!("{} has no CSV form", doc.command)));
    }
    output::emit(&doc, format, cli.out.as_deref())?;
    Ok(())
}

fn construct(kind: ConstructKind, exprs: &[String], horizon: u64) -> Result<ConstructedSet, Failure> {
    if let ConstructKind::Counterexample = kind {
        if !exprs.is_empty() {
            return Err(Failure::usage("counterexample takes no sets"));
        }
        let e = counterexample_set();
        let members = densitylab::materialize(&e, horizon);
        return Ok(ConstructedSet::from_table(members, "counterexample", vec![e]));
    }
    let [a, b] = exprs else {
        return Err(Failure::usage("construct needs two set expressions A and B"));
    };
    let (a, b) = (parse(a)?, parse(b)?);
    Ok(match kind {
        ConstructKind::Intermediate => intermediate_subset(&a, &b, horizon)?,
        ConstructKind::Difference => difference_matching_subset(&a, &b, horizon)?,
        ConstructKind::Superset => corollary_superset(&a, &b, horizon)?,
        ConstructKind::Counterexample => unreachable!(),
    })
}

#[derive(Serialize)]
struct ConstructionBody<'a> {
    provenance: &'a densitylab::constructions::Provenance,
    count: u64,
    ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rle: Option<String>,
}

fn construction_body(c: &ConstructedSet, rle: bool) -> ConstructionBody<'_> {
    let h = c.horizon();
    ConstructionBody {
        provenance: &c.provenance,
        count: c.count(h),
        ratio: c.count(h) as f64 / h as f64,
        rle: rle.then(|| c.to_rle()),
    }
}
