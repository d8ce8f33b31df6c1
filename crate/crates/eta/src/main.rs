use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eta_core::PopulationMethod;
use eta_tools::{
    load_csv, parse_model, render, run_pair_analysis, simulate_to_file, tail_view,
    write_simulation, AcfReport, AnalysisConfig, Error, Format, KRange, Result, Tail, TieHandling,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "eta",
    version,
    about = "Extreme tail association: estimates, asymmetry tests and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a CSV (index,x,y) of draws from a copula model.
    Simulate {
        /// nelsen:THETA, khoudraji:ALPHA,BETA,DELTA, gumbel:DELTA or max:M
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate eta and Delta over a k-grid and run the bootstrap tests.
    Analyze(AnalyzeArgs),
    /// Autocorrelation diagnostics for one column.
    Acf {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        col: String,
        #[arg(long)]
        key_col: Option<String>,
        #[arg(long, default_value_t = 20)]
        max_lag: usize,
        #[arg(long)]
        returns: bool,
        #[arg(long, value_enum, default_value_t = TailArg::Upper)]
        tail: TailArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Population eta(X|Y), eta(Y|X) and Delta of a copula model.
    Population {
        #[arg(long)]
        model: String,
        /// Absolute quadrature tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    x_col: String,
    #[arg(long)]
    y_col: String,
    /// Column to align rows on; rows are numbered when omitted.
    #[arg(long)]
    key_col: Option<String>,
    #[arg(long, requires = "k_max")]
    k_min: Option<usize>,
    #[arg(long, requires = "k_min")]
    k_max: Option<usize>,
    #[arg(long, default_value_t = 10)]
    k_step: usize,
    /// Bootstrap replicates.
    #[arg(long = "B", default_value_t = 100)]
    b: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = TailArg::Upper)]
    tail: TailArg,
    #[arg(long, value_enum, default_value_t = TieArg::Reject)]
    tie_policy: TieArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the Delta test even when no eta test rejects.
    #[arg(long)]
    no_eta_gate: bool,
    #[arg(long, default_value_t = 0.75)]
    rejection_fraction: f64,
    /// Treat the columns as prices and analyse their log-returns.
    #[arg(long)]
    returns: bool,
    /// Estimates only.
    #[arg(long)]
    no_tests: bool,
    #[arg(long, default_value_t = 20)]
    max_lag: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum TailArg {
    Upper,
    Lower,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    Reject,
    Jitter,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<TailArg> for Tail {
    fn from(t: TailArg) -> Self {
        match t {
            TailArg::Upper => Tail::Upper,
            TailArg::Lower => Tail::Lower,
        }
    }
}

fn write_out(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io {
                path: "stdout".into(),
                source: e,
            }),
    }
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let table = load_csv(&a.input, a.key_col.as_deref(), &[&a.x_col, &a.y_col])?;
    let config = AnalysisConfig {
        krange: a.k_min.zip(a.k_max).map(|(min, max)| KRange {
            min,
            max,
            step: a.k_step,
        }),
        replicates: a.b,
        alpha: a.alpha,
        seed: a.seed,
        tail: a.tail.into(),
        tie_policy: match a.tie_policy {
            TieArg::Reject => TieHandling::Reject,
            TieArg::Jitter => TieHandling::Jitter,
        },
        rejection_fraction: a.rejection_fraction,
        eta_gate: !a.no_eta_gate,
        run_tests: !a.no_tests,
        returns: a.returns,
        max_lag: a.max_lag,
        ..AnalysisConfig::default()
    };
    let mut report = run_pair_analysis(&table, &a.x_col, &a.y_col, &config)?;
    report.provenance.source = format!("{} ({})", a.input.display(), report.provenance.source);
    let format = match a.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    write_out(a.out.as_ref(), &render(&report, format)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            model,
            n,
            seed,
            out,
        } => {
            let model = parse_model(&model)?;
            match out {
                Some(p) => simulate_to_file(p, &model, n, seed),
                None => write_simulation(std::io::stdout().lock(), &model, n, seed),
            }
        }
        Command::Analyze(a) => analyze(a),
        Command::Acf {
            input,
            col,
            key_col,
            max_lag,
            returns,
            tail,
            out,
        } => {
            let table = load_csv(&input, key_col.as_deref(), &[&col])?;
            let mut r = table.column(&col)?.to_vec();
            if returns {
                r = eta_tools::log_returns(&r)?;
            }
            let report = AcfReport::new(&tail_view(&r, tail.into()), max_lag)?;
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            write_out(out.as_ref(), &text)
        }
        Command::Population { model, tol } => {
            let m = parse_model(&model)?;
            let v = m.population_values(tol)?;
            let doc = json!({
                "model": model,
                "eta_xy": v.eta_xy,
                "eta_yx": v.eta_yx,
                "delta": v.delta,
                "method": match v.method {
                    PopulationMethod::ClosedForm => "closed_form",
                    PopulationMethod::Quadrature => "quadrature",
                },
                "delta_closed_form": v.delta_closed_form,
                "tail_dependence_coefficient": m.chi(),
            });
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            write_out(None, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eta: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
