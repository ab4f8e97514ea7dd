use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use largen::analysis::{precision_audit, report};
use largen::potential::construct_potential;
use largen::{parse_potential, solve, MassConvention, PrecisionContext, ProblemSpec, State};
use largen_cli::plot::plot_csv;
use largen_cli::tables;
use largen_cli::{ErrorRecord, RunRecord};

/// Large-N (1/N) expansion of radial Schrödinger eigenvalues.
///
/// Without a subcommand the solve flags apply directly.
#[derive(Parser, Debug)]
#[command(name = "largen", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem and print its run record.
    Solve(SolveArgs),
    /// Reproduce one of the published tables (1 to 9).
    Table(TableArgs),
    /// Print the potential whose ground state is exp(-r^a) with energy E.
    Construct(ConstructArgs),
    /// Turn a JSON run record into `order,partial_sum` CSV.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Clone)]
struct SolveArgs {
    /// Potential V(r), for example "-1/r" or "r^2 + 0.1*r^4".
    #[arg(long, allow_hyphen_values = true)]
    potential: Option<String>,
    /// Number of spatial dimensions.
    #[arg(long = "N", default_value_t = 3)]
    n: u32,
    /// Angular momentum.
    #[arg(long, default_value_t = 0)]
    l: u32,
    /// Radial excitation: 0, 1 or 2.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    state: u8,
    /// Kinetic convention: m1 (-½∇²) or 2m1 (-∇²).
    #[arg(long, default_value = "m1")]
    mass: MassConvention,
    /// Number of partial sums.
    #[arg(long, default_value_t = 29)]
    order: usize,
    /// Significant decimal digits of the working precision.
    #[arg(long, default_value_t = 100)]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include Shanks extrapolants.
    #[arg(long)]
    shanks: bool,
    /// Rerun at twice the precision and report the agreeing digits.
    #[arg(long)]
    audit: bool,
    /// Known eigenvalue used as the bracket centre and plot target.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_parser = clap::value_parser!(u32).range(1..=9))]
    id: u32,
    #[arg(long, default_value_t = 100)]
    digits: u32,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long = "E", default_value = "1", allow_hyphen_values = true)]
    energy: String,
    #[arg(long, default_value = "m1")]
    mass: MassConvention,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Run record file, or `-` for standard input.
    #[arg(default_value = "-")]
    input: String,
    /// Target energy written into the header line.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
}

/// Failure with the exit code it maps to.
enum Failure {
    Usage(String),
    Domain {
        name: String,
        message: String,
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        None => run_solve(&cli.solve),
        Some(Command::Solve(a)) => run_solve(&a),
        Some(Command::Table(a)) => run_table(&a),
        Some(Command::Construct(a)) => run_construct(&a),
        Some(Command::Plot(a)) => run_plot(&a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain {
            name,
            message,
            json,
        }) => {
            if json {
                print!(
                    "{}",
                    ErrorRecord {
                        error: name.clone(),
                        message: message.clone()
                    }
                    .to_json()
                );
            }
            eprintln!("error: {name}: {message}");
            ExitCode::from(2)
        }
    }
}

fn run_solve(a: &SolveArgs) -> Result<String, Failure> {
    let json = a.format == Format::Json;
    let text = a
        .potential
        .as_deref()
        .ok_or_else(|| Failure::Usage("--potential is required".into()))?;
    let ctx = PrecisionContext::new(a.digits).map_err(|e| Failure::Usage(e.to_string()))?;
    let expr = parse_potential(text).map_err(|e| Failure::Usage(e.to_string()))?;
    let state = State::from_index(a.state).expect("range checked by clap");
    let spec = ProblemSpec::new(expr, a.n, a.l, state, a.mass, a.order, ctx)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let center = a
        .center
        .as_deref()
        .map(|c| ctx.parse(c))
        .transpose()
        .map_err(|e| Failure::Usage(format!("--center: {e}")))?;

    let domain = |e: largen::SolveError| Failure::Domain {
        name: e.name().to_string(),
        message: e.to_string(),
        json,
    };
    let solution = solve(&spec).map_err(domain)?;
    let mut rep = report(&solution.sums, center.as_ref(), a.shanks, &ctx);
    if a.audit {
        rep.audit = Some(precision_audit(&spec).map_err(domain)?);
    }
    let record = RunRecord::new(text, &spec, &solution, &rep, center.as_ref());
    Ok(match a.format {
        Format::Json => record.to_json(),
        Format::Csv => plot_csv(&record, None),
        Format::Text => render_text(&record),
    })
}

fn render_text(r: &RunRecord) -> String {
    let short = |s: &str, ctx: &PrecisionContext| {
        ctx.parse(s)
            .map(|v| v.to_short_string(15))
            .unwrap_or_else(|_| s.to_string())
    };
    let ctx = PrecisionContext::new(r.digits).expect("record precision is valid");
    let mut out = format!(
        "potential {}  N={} l={} state={} mass={} digits={}\nrho0      {}\nE(-2)     {}\n\norder  partial sum\n",
        r.potential,
        r.n,
        r.l,
        r.state,
        r.mass,
        r.digits,
        short(&r.rho0, &ctx),
        short(&r.e_minus2, &ctx)
    );
    for (i, p) in r.partial_sums.iter().enumerate() {
        out.push_str(&format!("{:>5}  {}\n", i + 1, short(p, &ctx)));
    }
    out.push('\n');
    match r.divergence_order {
        Some(n) => out.push_str(&format!("divergence from order {n}\n")),
        None => out.push_str("no divergence detected\n"),
    }
    if let Some(b) = &r.bracket {
        out.push_str(&format!(
            "bracket   {} - {} at orders {}-{}\n",
            short(&b.low, &ctx),
            short(&b.high, &ctx),
            b.order_low,
            b.order_high
        ));
    }
    if let Some(s) = &r.shanks {
        out.push_str("\norder  shanks\n");
        for (i, v) in s.iter().enumerate() {
            let v = v
                .as_deref()
                .map_or("undefined".to_string(), |v| short(v, &ctx));
            out.push_str(&format!("{:>5}  {}\n", i + 2, v));
        }
    }
    if let Some(a) = &r.audit {
        out.push_str(&format!(
            "audit     {} agreeing digits\n",
            a.agreeing_digits
        ));
    }
    out
}

fn run_table(a: &TableArgs) -> Result<String, Failure> {
    let spec = tables::table(a.id).map_err(|e| Failure::Usage(e.to_string()))?;
    let jobs = a
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let result =
        tables::run_table(&spec, a.digits, jobs).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(if a.json {
        let mut s = serde_json::to_string_pretty(&result).expect("table result serializes");
        s.push('\n');
        s
    } else {
        tables::render_text(&result)
    })
}

fn run_construct(a: &ConstructArgs) -> Result<String, Failure> {
    let ctx = PrecisionContext::default();
    let exponent = ctx
        .parse(&a.a)
        .map_err(|e| Failure::Usage(format!("--a: {e}")))?;
    if !exponent.is_positive() {
        return Err(Failure::Usage("--a must be positive".into()));
    }
    let energy = ctx
        .parse(&a.energy)
        .map_err(|e| Failure::Usage(format!("--E: {e}")))?;
    Ok(format!(
        "{}\n",
        construct_potential(&exponent, &energy, a.mass, &ctx)
    ))
}

fn run_plot(a: &PlotArgs) -> Result<String, Failure> {
    let text = if a.input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&a.input)
            .map_err(|e| Failure::Usage(format!("{}: {e}", a.input)))?
    };
    let record =
        RunRecord::from_json(&text).map_err(|e| Failure::Usage(format!("run record: {e}")))?;
    Ok(plot_csv(&record, a.target.as_deref()))
}
