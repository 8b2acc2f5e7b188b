//! `zetalab`: batch computations around `G(s) = 1/((s-1) zeta(s))`.
//!
//! One run per invocation; data go to standard output (or `--output`),
//! diagnostics to standard error. Exit status: 0 success, 2 flag/validation
//! error, 1 computation error. Identical flags produce byte-identical
//! output regardless of available parallelism.

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use output::{write_csv, write_json, Cell, Table};
use rug::Float;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use zetalab::divisor::{self, D0Convention, DivisorTable};
use zetalab::explicit::{self, PrimeSieve, ZeroList};
use zetalab::growth;
use zetalab::impulse::{self, SumMode};
use zetalab::laguerre;
use zetalab::numerics::format_float;
use zetalab::zeta::{self, AxisRange};
use zetalab::PrecisionContext;

#[derive(Parser)]
#[command(
    name = "zetalab",
    about = "Numerical toolkit around the transfer function 1/((s-1) zeta(s))"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits (>= 53).
    #[arg(long = "prec-bits", global = true, default_value_t = 256)]
    prec_bits: u32,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write data to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Direct,
    Resummed,
}

impl From<Mode> for SumMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Direct => SumMode::Direct,
            Mode::Resummed => SumMode::Resummed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit the Piltz divisor table d_n(m) as n,m,d rows (n outermost).
    DivisorTable {
        /// Largest m.
        #[arg(long = "N")]
        m_max: u64,
        /// Largest n.
        #[arg(long = "n-max")]
        n_max: u32,
        /// Use the all-ones row-0 convention instead of the convolution unit.
        #[arg(long = "d0-all-ones")]
        d0_all_ones: bool,
    },
    /// Evaluate the Laguerre polynomial L_n(t) and its e^(t/2) bound margin.
    LaguerreEval {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: f64,
    },
    /// Scan |Q(s)| and region-A membership over a complex rectangle.
    #[command(allow_negative_numbers = true)]
    RegionScan {
        #[arg(long = "re-min")]
        re_min: f64,
        #[arg(long = "re-max")]
        re_max: f64,
        #[arg(long = "re-steps")]
        re_steps: usize,
        #[arg(long = "im-min")]
        im_min: f64,
        #[arg(long = "im-max")]
        im_max: f64,
        #[arg(long = "im-steps")]
        im_steps: usize,
    },
    /// Evaluate the order-K impulse-response partial sum over a t grid.
    Impulse {
        /// m-cutoff N; the valid t domain is (0, ln(N+1)).
        #[arg(long = "N")]
        m_cutoff: u64,
        /// Series order K.
        #[arg(long = "K")]
        order: u32,
        #[arg(long = "t-min")]
        t_min: f64,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long = "t-steps")]
        t_steps: usize,
        #[arg(long, value_enum, default_value_t = Mode::Resummed)]
        mode: Mode,
        /// Use the all-ones d_0 convention (diagnostic comparison).
        #[arg(long = "d0-all-ones")]
        d0_all_ones: bool,
    },
    /// Compare psi(x) by sieve against the truncated explicit formula.
    PsiCompare {
        #[arg(long = "x-min")]
        x_min: f64,
        #[arg(long = "x-max")]
        x_max: f64,
        #[arg(long = "x-steps")]
        x_steps: usize,
        /// Number of critical-line zeros in the truncated formula.
        #[arg(long)]
        zeros: usize,
    },
    /// Locate the first critical-line zero ordinates.
    FindZeros {
        #[arg(long)]
        count: usize,
    },
    /// Growth-ratio report |g(t)| / (t^k e^(t/2)) over a t grid.
    GrowthReport {
        /// Envelope exponent k in {0, 1, 2}.
        #[arg(long)]
        k: u8,
        #[arg(long = "N")]
        m_cutoff: u64,
        #[arg(long = "K")]
        order: u32,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long = "t-steps")]
        t_steps: usize,
    },
    /// Laplace-transform consistency probe of the impulse response.
    TransformCheck {
        /// Transform abscissa (> 1).
        #[arg(long)]
        sigma: f64,
        #[arg(long = "N")]
        m_cutoff: u64,
        #[arg(long = "K")]
        order: u32,
        #[arg(long = "t-steps")]
        t_steps: usize,
    },
    /// Rational example G(s) = 1/(s-a): series partial sum vs e^(at).
    #[command(allow_negative_numbers = true)]
    RationalDemo {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        t: f64,
        #[arg(long = "K")]
        order: u32,
    },
}

enum CliError {
    Validation(String),
    Computation(String),
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

macro_rules! computation_from {
    ($($ty:ty),+ $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Computation(e.to_string())
            }
        }
    )+};
}
computation_from!(
    zeta::ZetaError,
    divisor::DivisorError,
    laguerre::LaguerreError,
    impulse::ImpulseError,
    explicit::ExplicitError,
    growth::GrowthError,
    std::io::Error,
);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(
    table: &Table,
    format: Format,
    output: &Option<PathBuf>,
    digits: usize,
) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match output {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        Format::Csv => write_csv(table, digits, &mut sink)?,
        Format::Json => write_json(table, digits, &mut sink)?,
    }
    Ok(())
}

fn positive_steps(steps: usize, what: &str) -> Result<(), CliError> {
    if steps == 0 {
        return Err(invalid(format!("{what} must be positive")));
    }
    Ok(())
}

fn check_t_window(t_min: f64, t_max: f64, m_cutoff: u64) -> Result<(), CliError> {
    let upper = ((m_cutoff + 1) as f64).ln();
    if !(t_min > 0.0) || !(t_max >= t_min) || !(t_max < upper) {
        return Err(invalid(format!(
            "t grid must satisfy 0 < t-min <= t-max < ln(N+1) = {upper:.6}"
        )));
    }
    Ok(())
}

fn convention(d0_all_ones: bool) -> D0Convention {
    if d0_all_ones {
        D0Convention::AllOnes
    } else {
        D0Convention::Unit
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = PrecisionContext::new(cli.prec_bits).map_err(|e| invalid(e.to_string()))?;
    let digits = ctx.decimal_digits();

    match cli.command {
        Command::DivisorTable {
            m_max,
            n_max,
            d0_all_ones,
        } => {
            if m_max == 0 {
                return Err(invalid("--N must be at least 1"));
            }
            let table = DivisorTable::build_with(
                m_max,
                n_max,
                convention(d0_all_ones),
                divisor::DEFAULT_CELL_BUDGET,
            )?;
            let mut out = Table::new(&["n", "m", "d"]);
            for n in 0..=n_max {
                for m in 1..=m_max {
                    out.push(vec![
                        Cell::UInt(u128::from(n)),
                        Cell::UInt(u128::from(m)),
                        Cell::UInt(table.value(n, m).expect("in range")),
                    ]);
                }
            }
            emit(&out, cli.format, &cli.output, digits)
        }

        Command::LaguerreEval { n, t } => {
            if !t.is_finite() || t < 0.0 {
                return Err(invalid("--t must be finite and nonnegative"));
            }
            let tf = ctx.float(t);
            let value = laguerre::laguerre_eval(n, &tf, ctx)?;
            let margin: Float = ctx.float(&tf / 2u32).exp() - value.clone().abs();
            let mut out = Table::new(&["n", "t", "value", "bound_margin"]);
            out.push(vec![
                Cell::UInt(u128::from(n)),
                Cell::Num(t),
                Cell::Big(value),
                Cell::Big(margin),
            ]);
            emit(&out, cli.format, &cli.output, digits)
        }

        Command::RegionScan {
            re_min,
            re_max,
            re_steps,
            im_min,
            im_max,
            im_steps,
        } => {
            positive_steps(re_steps, "--re-steps")?;
            positive_steps(im_steps, "--im-steps")?;
            let grid = zeta::region_scan(
                AxisRange {
                    min: re_min,
                    max: re_max,
                    steps: re_steps,
                },
                AxisRange {
                    min: im_min,
                    max: im_max,
                    steps: im_steps,
                },
                ctx,
            )?;
            let mut out = Table::new(&["re", "im", "q_abs", "in_A"]);
            for cell in &grid.cells {
                if let Some(err) = &cell.error {
                    eprintln!("warning: cell ({}, {}): {err}", cell.re, cell.im);
                }
                out.push(vec![
                    Cell::Num(cell.re),
                    Cell::Num(cell.im),
                    Cell::Big(cell.q_abs.clone()),
                    Cell::Bool(cell.in_a),
                ]);
            }
            emit(&out, cli.format, &cli.output, digits)
        }

        Command::Impulse {
            m_cutoff,
            order,
            t_min,
            t_max,
            t_steps,
            mode,
            d0_all_ones,
        } => {
            positive_steps(t_steps, "--t-steps")?;
            check_t_window(t_min, t_max, m_cutoff)?;
            let table = DivisorTable::build_with(
                m_cutoff,
                order,
                convention(d0_all_ones),
                divisor::DEFAULT_CELL_BUDGET,
            )?;
            let params = impulse::SeriesParams::new(m_cutoff, order, ctx)?;
            let grid = impulse::time_grid(t_min, t_max, t_steps);
            let samples = impulse::impulse_scan(&grid, &params, &table, mode.into())?;
            let mut warned = 0usize;
            let mut out = Table::new(&["t", "value", "error_estimate", "bits_lost"]);
            for s in samples {
                if s.precision_insufficient() {
                    warned += 1;
                }
                out.push(vec![
                    Cell::Big(s.t),
                    Cell::Big(s.value),
                    Cell::Big(s.error_estimate),
                    Cell::Num(s.bits_lost),
                ]);
            }
            if warned > 0 {
                eprintln!(
                    "warning: {warned} sample(s) have error estimates above 1e-3 |value|; \
                     raise --prec-bits"
                );
            }
            emit(&out, cli.format, &cli.output, digits)
        }

        Command::PsiCompare {
            x_min,
            x_max,
            x_steps,
            zeros,
        } => {
            positive_steps(x_steps, "--x-steps")?;
            if !(x_min > 1.0) || !(x_max >= x_min) {
                return Err(invalid("x grid must satisfy 1 < x-min <= x-max"));
            }
            if x_max > explicit::SIEVE_MAX as f64 {
                return Err(invalid(format!(
                    "x-max exceeds the sieve cap {}",
                    explicit::SIEVE_MAX
                )));
            }
            if zeros > explicit::ZERO_COUNT_MAX {
                return Err(invalid(format!(
                    "--zeros exceeds the cap {}",
                    explicit::ZERO_COUNT_MAX
                )));
            }
            let sieve = PrimeSieve::new(x_max.floor() as u64)?;
            let zero_list = if zeros == 0 {
                ZeroList::empty()
            } else {
                explicit::find_zeros(zeros, ctx)?
            };
            if let Some(w) = zero_list.warning() {
                eprintln!("warning: {w}");
            }
            let grid = impulse::time_grid(x_min, x_max, x_steps);
            let samples = explicit::psi_compare_scan(&grid, &zero_list, &sieve, ctx)?;
            let mut out = Table::new(&["x", "psi_sieve", "psi_explicit", "zeros_used", "abs_diff"]);
            for s in samples {
                out.push(vec![
                    Cell::Num(s.x),
                    Cell::Big(s.psi_sieve),
                    Cell::Big(s.psi_explicit),
                    Cell::UInt(s.zeros_used as u128),
                    Cell::Big(s.abs_diff),
                ]);
            }
            emit(&out, cli.format, &cli.output, digits)
        }

        Command::FindZeros { count } => {
            let zeros = explicit::find_zeros(count, ctx)?;
            if let Some(w) = zeros.warning() {
                eprintln!("warning: {w}");
            }
            let mut out = Table::new(&["k", "gamma"]);
            for (i, g) in zeros.gammas().iter().enumerate() {
                out.push(vec![Cell::UInt(i as u128 + 1), Cell::Big(g.clone())]);
            }
            emit(&out, cli.format, &cli.output, digits)
        }

        Command::GrowthReport {
            k,
            m_cutoff,
            order,
            t_max,
            t_steps,
        } => {
            if k > 2 {
                return Err(invalid("--k must be 0, 1, or 2"));
            }
            positive_steps(t_steps, "--t-steps")?;
            check_t_window(t_max / t_steps as f64, t_max, m_cutoff)?;
            let table = DivisorTable::build(m_cutoff, order)?;
            let params = impulse::SeriesParams::new(m_cutoff, order, ctx)?;
            let grid: Vec<f64> = (1..=t_steps)
                .map(|i| t_max * i as f64 / t_steps as f64)
                .collect();
            let samples = impulse::impulse_scan(&grid, &params, &table, SumMode::Resummed)?;
            let mut report = growth::growth_ratio(&samples, k, ctx)?;
            report.params = vec![
                ("N".into(), m_cutoff.to_string()),
                ("K".into(), order.to_string()),
                ("t_max".into(), t_max.to_string()),
                ("t_steps".into(), t_steps.to_string()),
                ("prec_bits".into(), ctx.bits().to_string()),
                ("mode".into(), "resummed".into()),
            ];
            match (cli.format, &cli.output) {
                (Format::Csv, Some(path)) => {
                    // persisted form: CSV data plus a JSON summary side file
                    let json_path = path.with_extension("json");
                    growth::growth_report_emit(&report, path, &json_path, ctx)?;
                    Ok(())
                }
                (Format::Json, output) => {
                    let mut sink: Box<dyn Write> = match output {
                        Some(path) => Box::new(std::fs::File::create(path)?),
                        None => Box::new(std::io::stdout().lock()),
                    };
                    write_growth_json(&report, digits, &mut sink)?;
                    Ok(())
                }
                (Format::Csv, None) => {
                    let mut out = Table::new(&["t", "ratio"]);
                    for s in &report.samples {
                        out.push(vec![Cell::Big(s.t.clone()), Cell::Big(s.ratio.clone())]);
                    }
                    emit(&out, cli.format, &cli.output, digits)
                }
            }
        }

        Command::TransformCheck {
            sigma,
            m_cutoff,
            order,
            t_steps,
        } => {
            if !(sigma > 1.0) {
                return Err(invalid("--sigma must exceed 1"));
            }
            positive_steps(t_steps, "--t-steps")?;
            let table = DivisorTable::build(m_cutoff, order)?;
            let params = impulse::SeriesParams::new(m_cutoff, order, ctx)?;
            let grid = growth::breakpoint_grid(m_cutoff, t_steps);
            let samples = impulse::impulse_scan(&grid, &params, &table, SumMode::Resummed)?;
            // g(0+) = 1 for every order: the alternating binomial weights
            // telescope to C(K+1,0) against L_n(0) = 1
            let value_at_zero = ctx.float(1);
            let sup_hat = growth::growth_ratio(&samples, 2, ctx)?.sup_ratio;
            let check = growth::laplace_check(&samples, sigma, &value_at_zero, &sup_hat, ctx)?;
            if check.grid_coarse_warning {
                eprintln!("warning: adjacent samples vary sharply; raise --t-steps");
            }
            let mut out = Table::new(&["sigma", "numeric", "closed", "truncation_estimate"]);
            out.push(vec![
                Cell::Num(sigma),
                Cell::Big(check.numeric),
                Cell::Big(check.closed),
                Cell::Big(check.truncation_estimate),
            ]);
            emit(&out, cli.format, &cli.output, digits)
        }

        Command::RationalDemo { a, t, order } => {
            if !a.is_finite() || !t.is_finite() || t < 0.0 {
                return Err(invalid("--a must be finite and --t finite and nonnegative"));
            }
            let demo = impulse::rational_demo(a, t, order, ctx);
            let mut out = Table::new(&["a", "t", "K", "partial", "exact", "gap"]);
            out.push(vec![
                Cell::Num(a),
                Cell::Num(t),
                Cell::UInt(u128::from(order)),
                Cell::Big(demo.partial),
                Cell::Big(demo.exact),
                Cell::Big(demo.gap),
            ]);
            emit(&out, cli.format, &cli.output, digits)
        }
    }
}

/// Growth-report JSON: summary keys plus the sample rows.
fn write_growth_json(
    report: &growth::GrowthReport,
    digits: usize,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let argmax = match &report.argmax_t {
        Some(t) => format_float(t, digits),
        None => "null".into(),
    };
    let params: Vec<String> = report
        .params
        .iter()
        .map(|(k, v)| format!("\"{k}\": \"{v}\""))
        .collect();
    writeln!(out, "{{")?;
    writeln!(out, "  \"k\": {},", report.exponent)?;
    writeln!(
        out,
        "  \"sup_ratio\": {},",
        format_float(&report.sup_ratio, digits)
    )?;
    writeln!(out, "  \"argmax_t\": {argmax},")?;
    writeln!(out, "  \"params\": {{{}}},", params.join(", "))?;
    writeln!(out, "  \"samples\": [")?;
    for (i, s) in report.samples.iter().enumerate() {
        let comma = if i + 1 < report.samples.len() {
            ","
        } else {
            ""
        };
        writeln!(
            out,
            "    {{\"t\": {}, \"ratio\": {}}}{comma}",
            format_float(&s.t, digits),
            format_float(&s.ratio, digits)
        )?;
    }
    writeln!(out, "  ]")?;
    writeln!(out, "}}")?;
    Ok(())
}
