use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use asym_cli::commands::{
    parse_horizon, run_classify, run_embed, run_eval, run_filter, run_pair, run_rate, run_roots,
    EmbedOptions, Emit, FilterQuery, RateTarget,
};
use asym_cli::{CliError, Env};
use asym_core::lc::{Backend, ExtExp};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "asym",
    version,
    about = "Asymptotic numbers, generalized functions and mollifier embeddings"
)]
struct Cli {
    /// Truncation horizon, an exact rational such as 8 or 17/2.
    #[arg(long, global = true, default_value = "16")]
    horizon: String,
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Rational)]
    backend: BackendArg,
    #[arg(long, global = true, value_enum, default_value_t = EmitArg::Text)]
    emit: EmitArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Rational,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression in eps, e.g. "st((sqrt(1+eps)-1)/eps)".
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Roots of a polynomial in x with series coefficients, e.g. "x^2 - r".
    Roots {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Place a growth order ("rho^(-3)*log1^2", "exp2") in the ring chain,
    /// or classify an expression by magnitude.
    Classify {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Pair an asymptotic function with a test function.
    Pair {
        /// Expression in eps and x, x1..x9.
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value = "gauss-bump")]
        tau: String,
        /// Terms from eps^probe on are dropped.
        #[arg(long, default_value = "6")]
        probe: String,
    },
    /// Pair the embedding of a distribution with a test function for each rho.
    Embed(EmbedArgs),
    /// Fit the convergence rate of the embedding over a rho grid.
    Rate {
        #[command(flatten)]
        embed: EmbedArgs,
        /// Measure sup |embed(T_f) - f| on this box (lo,hi[;lo,hi]) instead of a pairing.
        #[arg(long, allow_hyphen_values = true)]
        sup: Option<String>,
        #[arg(long, default_value_t = 201)]
        resolution: usize,
    },
    /// Sequences modulo the Frechet filter.
    Filter {
        #[command(subcommand)]
        query: FilterCommand,
    },
    /// Read expressions from standard input, one per line.
    Repl,
}

#[derive(clap::Args)]
struct EmbedArgs {
    /// delta, delta(p), ddelta(a;p), heaviside(axis) or f:<expression in x>.
    #[arg(allow_hyphen_values = true)]
    dist: String,
    #[arg(long, default_value_t = 2)]
    moments: usize,
    #[arg(long, value_delimiter = ',', default_value = "1e-1,3e-2,1e-2")]
    rho: Vec<f64>,
    #[arg(long, default_value = "gauss-bump")]
    tau: String,
    /// Domain box lo,hi[;lo,hi]; defaults to (-3,3) per axis.
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
}

#[derive(Subcommand)]
enum FilterCommand {
    /// Almost-everywhere equality of two sequences.
    Eq { a: String, b: String },
    /// Whether a_i > eps on a cofinite set.
    Exceeds {
        a: String,
        #[arg(allow_hyphen_values = true)]
        eps: f64,
    },
    /// Whether the sequence is infinitesimal.
    Infinitesimal { a: String },
    /// The element of a finite set singled out by the sequence.
    Star {
        /// Comma-separated finite set.
        set: String,
        a: String,
    },
}

impl EmbedArgs {
    fn options(&self) -> EmbedOptions {
        EmbedOptions {
            dist: self.dist.clone(),
            moments: self.moments,
            rhos: self.rho.clone(),
            tau: self.tau.clone(),
            domain: self.domain.clone(),
            dim: self.dim,
        }
    }
}

fn repl(env: &Env, emit: Emit) -> Result<String, CliError> {
    let stdin = io::stdin();
    let mut out = io::stdout();
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        let line = line.trim();
        if line == ":q" || line == "quit" {
            break;
        }
        if line.is_empty() {
            continue;
        }
        match run_eval(line, env, emit) {
            Ok(v) => writeln!(out, "{v}"),
            Err(e) => writeln!(out, "error: {e}"),
        }
        .ok();
    }
    Ok(String::new())
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let env = Env {
        horizon: parse_horizon(&cli.horizon)?,
        backend: match cli.backend {
            BackendArg::Rational => Backend::ExactRational,
            BackendArg::Float => Backend::ComplexFloat,
        },
    };
    let emit = match cli.emit {
        EmitArg::Text => Emit::Text,
        EmitArg::Csv => Emit::Csv,
        EmitArg::Json => Emit::Json,
    };
    match &cli.command {
        Command::Eval { expr } => run_eval(expr, &env, emit),
        Command::Roots { poly } => run_roots(poly, &env, emit),
        Command::Classify { input } => run_classify(input, &env, emit),
        Command::Pair { f, tau, probe } => match parse_horizon(probe)? {
            ExtExp::Finite(q) => run_pair(f, tau, q, emit),
            ExtExp::Infinity => Err(CliError::Domain("the probe must be finite".into())),
        },
        Command::Embed(args) => run_embed(&args.options(), emit),
        Command::Rate {
            embed,
            sup,
            resolution,
        } => {
            let target = match sup {
                Some(k) => RateTarget::Sup {
                    k: k.clone(),
                    resolution: *resolution,
                },
                None => RateTarget::Pairing,
            };
            run_rate(&embed.options(), &target, emit)
        }
        Command::Filter { query } => run_filter(
            &match query {
                FilterCommand::Eq { a, b } => FilterQuery::Eq(a.clone(), b.clone()),
                FilterCommand::Exceeds { a, eps } => FilterQuery::Exceeds(a.clone(), *eps),
                FilterCommand::Infinitesimal { a } => FilterQuery::Infinitesimal(a.clone()),
                FilterCommand::Star { set, a } => FilterQuery::Star(set.clone(), a.clone()),
            },
            emit,
        ),
        Command::Repl => repl(&env, emit),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
