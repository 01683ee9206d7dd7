//! Command-line surface: every computation as a reproducible, scriptable run
//! emitting CSV or JSON for external plotting.
//!
//! Exit codes: 0 success, 1 computation accuracy failure, 2 usage error.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use entrobound::bounds::{bounds_table, BoundReport, GridKind};
use entrobound::prolate::{lambda0, lambda0_of_xi, ProlateResult};
use entrobound::search::{
    check_state, gaussian_scan, hunt, CheckReport, CoefficientField, HuntConfig, OffsetMode,
};
use entrobound::states::StateModel;
use entrobound::Error;

#[derive(Parser)]
#[command(
    name = "entrobound",
    about = "Entropic uncertainty bounds for binned position/momentum measurements",
    version,
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Largest eigenvalue of the bandlimited-interval operator.
    ///
    /// Accepts either the bandwidth c or the resolution product xi
    /// (c = pi*xi/2), as a single value or a linear grid `start:stop:count`.
    /// Emits CSV `c,xi,lambda0,order,est_error`.
    Lambda0(Lambda0Args),
    /// Table of the three entropy-sum bounds over a xi grid (CSV).
    Bounds(BoundsArgs),
    /// Margin scan for minimum-uncertainty Gaussians over (dx, xi) grids (CSV).
    Scan(ScanArgs),
    /// Margin of one state on one grid pair (JSON report).
    Check(CheckArgs),
    /// Seeded randomized search for counterexamples over Hermite
    /// superpositions and bin offsets (JSON report).
    Hunt(HuntArgs),
}

#[derive(Args)]
struct Lambda0Args {
    /// Bandwidth c, single value or grid `start:stop:count` (linear).
    #[arg(long, conflicts_with = "xi", required_unless_present = "xi")]
    c: Option<String>,
    /// Resolution product xi, single value or grid `start:stop:count`.
    #[arg(long)]
    xi: Option<String>,
    /// Eigenvalue tolerance (>= 1e-13).
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 0.05)]
    xi_min: f64,
    #[arg(long, default_value_t = 3.0)]
    xi_max: f64,
    /// Number of grid points (>= 2), endpoints included.
    #[arg(long, default_value_t = 60)]
    steps: usize,
    /// Geometric grid spacing (the default).
    #[arg(long, conflicts_with = "linear")]
    geometric: bool,
    /// Linear grid spacing instead of geometric.
    #[arg(long)]
    linear: bool,
    /// Eigenvalue tolerance (>= 1e-13).
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct ScanArgs {
    /// Position width sigma of the Gaussian.
    #[arg(long)]
    sigma: f64,
    /// Position resolutions, comma separated.
    #[arg(long, value_delimiter = ',')]
    dx: Vec<f64>,
    /// xi grid, single value or `start:stop:count` (linear).
    #[arg(long)]
    xi_grid: String,
    /// Bin placement: edge (offset 0), centered (offset -width/2), or both.
    #[arg(long, default_value = "centered", value_parser = parse_offset_mode)]
    offsets: OffsetMode,
    /// Tail/quadrature tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Output path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct CheckArgs {
    /// State spec, e.g. gaussian:sigma=0.7071 | slit:a=2 |
    /// hermite:c=0.6,0,0.8 | prolate:c=3,n=0.
    #[arg(long, value_parser = parse_state)]
    state: StateModel,
    #[arg(long)]
    dx: f64,
    #[arg(long)]
    dp: f64,
    /// Position bin offset (default: bin centered on the origin).
    #[arg(long, allow_hyphen_values = true)]
    offset_x: Option<f64>,
    /// Momentum bin offset (default: bin centered on the origin).
    #[arg(long, allow_hyphen_values = true)]
    offset_p: Option<f64>,
    /// Tail/quadrature tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Output path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct HuntArgs {
    /// Hermite basis size N (1 ..= 32).
    #[arg(long, default_value_t = 8)]
    basis: usize,
    /// xi targets, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    xi: Vec<f64>,
    /// Restarts per xi target.
    #[arg(long, default_value_t = 64)]
    restarts: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Objective evaluations per restart.
    #[arg(long, default_value_t = 600)]
    budget: u32,
    /// Search complex coefficients instead of real ones.
    #[arg(long)]
    complex: bool,
    /// Output path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

fn parse_state(s: &str) -> Result<StateModel, String> {
    StateModel::from_str(s).map_err(|e| e.to_string())
}

fn parse_offset_mode(s: &str) -> Result<OffsetMode, String> {
    match s {
        "edge" => Ok(OffsetMode::Edge),
        "centered" => Ok(OffsetMode::Centered),
        "both" => Ok(OffsetMode::Both),
        other => Err(format!(
            "unknown offset mode {other:?}: expected edge | centered | both"
        )),
    }
}

/// `start:stop:count` (linear, endpoints included) or a single value.
fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = |msg: String| Error::InvalidArgument(msg);
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => {
            let v: f64 = single
                .parse()
                .map_err(|_| bad(format!("expected a number, got {single:?}")))?;
            Ok(vec![v])
        }
        [start, stop, count] => {
            let start: f64 = start
                .parse()
                .map_err(|_| bad(format!("bad grid start {start:?}")))?;
            let stop: f64 = stop
                .parse()
                .map_err(|_| bad(format!("bad grid stop {stop:?}")))?;
            let count: usize = count
                .parse()
                .map_err(|_| bad(format!("bad grid count {count:?}")))?;
            if count < 2 || !start.is_finite() || !stop.is_finite() || start >= stop {
                return Err(bad(format!(
                    "grid requires start < stop and count >= 2, got {spec:?}"
                )));
            }
            Ok((0..count)
                .map(|i| {
                    if i == count - 1 {
                        stop
                    } else {
                        start + (stop - start) * i as f64 / (count - 1) as f64
                    }
                })
                .collect())
        }
        _ => Err(bad(format!(
            "expected a number or start:stop:count, got {spec:?}"
        ))),
    }
}

fn emit(out: &str, content: &str) -> Result<(), String> {
    if out == "-" {
        print!("{content}");
        Ok(())
    } else {
        std::fs::write(out, content).map_err(|e| format!("cannot write {out}: {e}"))
    }
}

fn lambda0_csv(results: &[ProlateResult]) -> String {
    let mut csv = String::from("c,xi,lambda0,order,est_error\n");
    for r in results {
        let xi = 2.0 * r.c / std::f64::consts::PI;
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{},{:.16e}",
            r.c, xi, r.lambda0, r.order, r.est_error
        );
    }
    csv
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Lambda0(args) => {
            let results: Vec<ProlateResult> = match (&args.c, &args.xi) {
                (Some(cs), None) => parse_grid(cs)?
                    .into_iter()
                    .map(|c| lambda0(c, args.tol))
                    .collect::<Result<_, _>>()?,
                (None, Some(xis)) => parse_grid(xis)?
                    .into_iter()
                    .map(|xi| lambda0_of_xi(xi, args.tol))
                    .collect::<Result<_, _>>()?,
                _ => unreachable!("clap enforces exactly one of --c/--xi"),
            };
            emit(&args.out, &lambda0_csv(&results)).map_err(Error::InvalidArgument)
        }
        Command::Bounds(args) => {
            let kind = if args.linear {
                GridKind::Linear
            } else {
                GridKind::Geometric
            };
            let rows = bounds_table(args.xi_min, args.xi_max, args.steps, args.tol, kind)?;
            let mut csv = String::from(BoundReport::CSV_HEADER);
            csv.push('\n');
            for row in &rows {
                csv.push_str(&row.csv_row());
                csv.push('\n');
            }
            emit(&args.out, &csv).map_err(Error::InvalidArgument)
        }
        Command::Scan(args) => {
            let xi_grid = parse_grid(&args.xi_grid)?;
            let reports = gaussian_scan(args.sigma, &args.dx, &xi_grid, args.offsets, args.tol)?;
            let mut csv = String::from(CheckReport::SCAN_CSV_HEADER);
            csv.push('\n');
            for r in &reports {
                csv.push_str(&r.scan_csv_row());
                csv.push('\n');
            }
            emit(&args.out, &csv).map_err(Error::InvalidArgument)
        }
        Command::Check(args) => {
            let offset_x = args.offset_x.unwrap_or(-args.dx / 2.0);
            let offset_p = args.offset_p.unwrap_or(-args.dp / 2.0);
            let report = check_state(&args.state, args.dx, args.dp, offset_x, offset_p, args.tol)?;
            let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
            json.push('\n');
            emit(&args.out, &json).map_err(Error::InvalidArgument)
        }
        Command::Hunt(args) => {
            let config = HuntConfig {
                basis: args.basis,
                xi_targets: args.xi,
                restarts: args.restarts,
                seed: args.seed,
                budget: args.budget,
                field: if args.complex {
                    CoefficientField::Complex
                } else {
                    CoefficientField::Real
                },
            };
            let result = hunt(&config)?;
            let mut json = serde_json::to_string_pretty(&result).expect("result serializes");
            json.push('\n');
            emit(&args.out, &json).map_err(Error::InvalidArgument)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::InvalidArgument(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ Error::AccuracyFailure { .. }) => {
            eprintln!("error: {e}");
            eprintln!(
                "note: double precision cannot certify 1 - lambda0 below the 1e-13 \
                 precision floor; request a looser tolerance or a smaller bandwidth"
            );
            ExitCode::from(1)
        }
    }
}
