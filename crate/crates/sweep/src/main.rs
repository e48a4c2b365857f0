use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sparsesum_core::{
    compare_bounds, sum_decomposed, sum_exact, CharacterIndex, Field64, RoleMode, SparsePoly,
};
use sparsesum_sweep::config::Suite;
use sparsesum_sweep::generate::SumInstance;
use sparsesum_sweep::run::{run_sweep, run_verify, Format, RecordWriter, Summary};
use sparsesum_sweep::suites::{count_jobs, shifted_energy_at, Job, Params};
use sparsesum_sweep::{HarnessError, ResultRecord, Status, SweepConfig};

#[derive(Parser)]
#[command(
    name = "sparsesum",
    version,
    about = "Sparse character sums over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Prime modulus
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Polynomial as "a,k;b,l;c,m;d,n" (coefficient, exponent pairs)
    #[arg(long, global = true)]
    poly: Option<String>,
    /// Character index j, with chi_j(g^t) = e(jt / (p - 1))
    #[arg(long, global = true)]
    chi: Option<u64>,
    /// Role assignment for the gcd bound
    #[arg(long, global = true)]
    mode: Option<RoleMode>,
    /// JSON sweep configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file (standard output when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one sum, or one weighted bilinear sum
    Sum {
        /// Also evaluate through the subgroup decomposition
        #[arg(long)]
        decomposed: bool,
        /// Regenerate a bilinear instance from its seed
        #[arg(long)]
        bilinear_seed: Option<u64>,
    },
    /// Exact counting quantities for given subgroup orders
    Count {
        #[arg(long)]
        quantity: String,
        /// Subgroup orders, comma separated
        #[arg(long, default_value = "")]
        orders: String,
        /// Shift for shifted_energy
        #[arg(long)]
        lambda: Option<u64>,
    },
    /// Bound catalog for one quadrinomial
    Bounds,
    /// Verification suites (from --config, or for one sum)
    Verify,
    /// Dataset over a configured sweep
    Sweep,
    /// Bounds against the exact sum (for one sum, or a configured sweep)
    Compare,
    /// Plot-ready table from a JSONL dataset
    Plotdata {
        /// ratio-vs-cardinality, bound-vs-p or winner-map
        #[arg(long)]
        kind: String,
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

type Outcome = Result<u8, HarnessError>;

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Sum {
            decomposed,
            bilinear_seed,
        } => match bilinear_seed {
            Some(seed) => {
                let p = need_p(c)?;
                records_out(
                    c,
                    Job::Bilinear { p, seed: *seed }.run(&field(p)?, &Params::default()),
                )
            }
            None => sum(c, *decomposed),
        },
        Command::Count {
            quantity,
            orders,
            lambda,
        } => count(c, quantity, orders, *lambda),
        Command::Bounds => bounds(c, false),
        Command::Compare if c.config.is_none() => bounds(c, true),
        Command::Compare => {
            let mut config = sweep_config(c)?;
            config.suites = vec![Suite::Bounds];
            let summary = run_sweep(&config, c.out.as_deref(), c.format.unwrap_or_default())?;
            eprint!("{summary}");
            Ok(0)
        }
        Command::Verify if c.config.is_none() && c.poly.is_some() => {
            let p = need_p(c)?;
            let instance = SumInstance {
                p,
                poly: SparsePoly::parse(p, c.poly.as_deref().unwrap_or_default())?,
                j: c.chi.unwrap_or(0),
                family: "explicit",
            };
            let job = Job::Sum {
                instance,
                suites: vec![Suite::Identity, Suite::Weil, Suite::Bounds],
            };
            records_out(c, job.run(&field(p)?, &params(c)))
        }
        Command::Verify => {
            let config = sweep_config(c)?;
            let summary = run_verify(&config, c.out.as_deref(), c.format.unwrap_or_default())?;
            eprint!("{summary}");
            Ok(verdict(&summary))
        }
        Command::Sweep => {
            let config = sweep_config(c)?;
            let summary = run_sweep(&config, c.out.as_deref(), c.format.unwrap_or_default())?;
            eprint!("{summary}");
            Ok(0)
        }
        Command::Plotdata { kind, input } => {
            let rows = sparsesum_sweep::plot::emit_plot_data(input, kind, c.out.as_deref())?;
            eprintln!("{rows} rows");
            Ok(0)
        }
    }
}

fn verdict(summary: &Summary) -> u8 {
    u8::from(summary.failed() > 0)
}

fn need_p(c: &Common) -> Result<u64, HarnessError> {
    c.p.ok_or_else(|| HarnessError::config("--p", "required"))
}

fn need_poly(c: &Common, p: u64) -> Result<SparsePoly, HarnessError> {
    let text = c
        .poly
        .as_deref()
        .ok_or_else(|| HarnessError::config("--poly", "required"))?;
    Ok(SparsePoly::parse(p, text)?)
}

fn field(p: u64) -> Result<Field64, HarnessError> {
    Ok(Field64::new(p)?)
}

fn params(c: &Common) -> Params {
    Params {
        mode: c.mode.unwrap_or_default(),
        ..Params::default()
    }
}

/// Config from `--config` (or the defaults) with command-line overrides.
fn sweep_config(c: &Common) -> Result<SweepConfig, HarnessError> {
    let mut config = match &c.config {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig::default(),
    };
    if let Some(seed) = c.seed {
        config.seed = seed;
    }
    if let Some(workers) = c.workers {
        config.workers = workers;
    }
    if let Some(mode) = c.mode {
        config.mode = mode;
    }
    config.validate()?;
    Ok(config)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| HarnessError::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| HarnessError::io("<stdout>", e)),
    }
}

fn records_out(c: &Common, records: Vec<ResultRecord>) -> Outcome {
    let mut writer = RecordWriter::create(c.out.as_deref(), c.format.unwrap_or_default(), 0)?;
    writer.write(&records)?;
    Ok(u8::from(records.iter().any(|r| r.status == Status::Fail)))
}

fn sum(c: &Common, decomposed: bool) -> Outcome {
    let p = need_p(c)?;
    let psi = need_poly(c, p)?;
    let ctx = field(p)?;
    let chi = CharacterIndex::new(&ctx, c.chi.unwrap_or(0))?;
    let exact = sum_exact(&ctx, &psi, chi)?;
    let mut out = json!({
        "p": p,
        "poly": c.poly,
        "j": chi.j(),
        "value": [exact.value.re, exact.value.im],
        "magnitude": exact.magnitude,
    });
    if decomposed {
        let d = sum_decomposed(&ctx, &psi, chi)?;
        out["decomposed"] = json!([d.value.re, d.value.im]);
    }
    write_out(c.out.as_deref(), &(out.to_string() + "\n"))?;
    Ok(0)
}

fn bounds(c: &Common, with_exact: bool) -> Outcome {
    let p = need_p(c)?;
    let psi = need_poly(c, p)?;
    let ctx = field(p)?;
    let chi = CharacterIndex::new(&ctx, c.chi.unwrap_or(0))?;
    let mut report = compare_bounds(&ctx, &psi, chi, c.mode.unwrap_or_default())?;
    if !with_exact {
        report.exact_magnitude = None;
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    write_out(c.out.as_deref(), &(text + "\n"))?;
    Ok(0)
}

fn count(c: &Common, quantity: &str, orders: &str, lambda: Option<u64>) -> Outcome {
    let p = need_p(c)?;
    let orders: Vec<u64> = orders
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| HarnessError::config("--orders", format!("not an integer: {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let ctx = field(p)?;
    if let (Some(lambda), "shifted_energy", [d]) = (lambda, quantity, orders.as_slice()) {
        return records_out(c, vec![shifted_energy_at(&ctx, *d, lambda)]);
    }
    let jobs = count_jobs(quantity, p, &orders).ok_or_else(|| {
        HarnessError::config(
            "--quantity",
            format!("unknown quantity {quantity:?} for {} orders", orders.len()),
        )
    })?;
    let params = params(c);
    let mut records: Vec<ResultRecord> = jobs.iter().flat_map(|j| j.run(&ctx, &params)).collect();
    if quantity != "cauchy" {
        let wanted: Vec<ResultRecord> = records
            .iter()
            .filter(|r| r.quantity == quantity || r.quantity.starts_with(&format!("{quantity}_")))
            .cloned()
            .collect();
        if !wanted.is_empty() {
            records = wanted;
        }
    }
    for (i, r) in records.iter_mut().enumerate() {
        r.seq = i as u64;
    }
    records_out(c, records)
}
