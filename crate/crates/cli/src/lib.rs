//! `lempertlab`: command-line access to the `lempert-core` geometry and the
//! batch experiments that sandwich the Carathéodory distance of `𝕃_n`.
//!
//! Every command writes to the streams it is given, so [`run`] can be driven
//! from tests without spawning a process.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod report;
pub mod selftest;

pub use config::{ConfigArgs, Format, RunConfig};
pub use error::{exit, CliError};
use input::DomainArg;

#[derive(Debug, Parser)]
#[command(name = "lempertlab", version, about = "Invariant distances on 𝕃_n, L_n and the tetrablock")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Pair generators for `verify-lempert`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum PairMode {
    /// Independent uniform points of `𝕃_n`.
    #[default]
    Random,
    /// `z = 0`, so the closed form is known.
    Origin,
    /// `z = w`.
    Identical,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test membership and print the defining inequalities.
    Member {
        domain: DomainArg,
        /// JSON array of [re, im] pairs.
        point: String,
    },
    /// Lower and upper bounds for the distance between two points.
    Dist {
        domain: DomainArg,
        /// A point, or `0` for the origin.
        z: String,
        w: String,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Upper bound for the Kobayashi metric at the origin in direction X.
    Kappa {
        domain: DomainArg,
        x: String,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Normal form of a point, or of a pair, with the map that produces it.
    Normalize {
        domain: DomainArg,
        z: String,
        w: Option<String>,
    },
    /// Bound the gap between `c` and `ℓ` on sampled pairs of `𝕃_n`.
    VerifyLempert {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value_t)]
        pairs: PairMode,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Fill the `seconds` column (makes the output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Run quick versions of the property suites.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                exit::USAGE
            } else {
                let _ = write!(out, "{text}");
                exit::OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> error::Result<i32> {
    match command {
        Command::Member { domain, point } => commands::member(domain, &point, out),
        Command::Dist { domain, z, w, config } => commands::dist(domain, &z, &w, &RunConfig::resolve(&config)?, out),
        Command::Kappa { domain, x, config } => commands::kappa(domain, &x, &RunConfig::resolve(&config)?, out),
        Command::Normalize { domain, z, w } => commands::normalize(domain, &z, w.as_deref(), out),
        Command::VerifyLempert { config, pairs, jobs, timings } => {
            let cfg = RunConfig::resolve(&config)?;
            commands::verify_lempert(&cfg, &commands::VerifyOptions { pairs, jobs, timings }, out)
        }
        Command::Selftest { seed } => {
            let seed = match seed {
                Some(s) => s,
                None => RunConfig::resolve(&ConfigArgs::default())?.seed,
            };
            selftest::run(seed, out)
        }
    }
}
