//! `owsg`: key generation, signing, verification, games, attack benchmarks
//! and parameter calculators.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 unreadable or malformed file,
//! 4 threshold verification failed, 5 one-time key reuse.
//!
//! Public keys are quantum states and cannot be written to disk. `keygen`
//! writes a manifest holding the circuits; `verify` prepares the blocks from
//! it in-process under its own noise model.

mod commands;
mod report;

use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use owsg::circuits::CatalogId;
use owsg::noise::NoiseModel;

use report::{Failure, Format, Sink};

#[derive(Debug, Parser)]
#[command(name = "owsg", version, about = "Random-circuit one-way state generators on a statevector simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// RNG seed, recorded in every report.
    #[arg(long, global = true, env = "OWSG_SEED", default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseKindArg {
    None,
    Depolarizing,
    White,
}

#[derive(Debug, Clone, Args)]
pub struct NoiseArgs {
    #[arg(long, value_enum)]
    noise_kind: Option<NoiseKindArg>,
    /// Per-qubit depolarizing strength.
    #[arg(long)]
    noise_eps: Option<f64>,
    /// White-noise fidelity.
    #[arg(long = "noise-f")]
    noise_f: Option<f64>,
    /// Decay constant in `eta = exp(-c n d)`.
    #[arg(long)]
    noise_c: Option<f64>,
}

impl NoiseArgs {
    /// `None` when no noise flag was given.
    pub fn model(&self) -> Result<Option<NoiseModel>, Failure> {
        let kind = match (self.noise_kind, self.noise_eps, self.noise_f) {
            (None, None, None) if self.noise_c.is_none() => return Ok(None),
            (Some(k), _, _) => k,
            (None, Some(_), None) => NoiseKindArg::Depolarizing,
            (None, None, Some(_)) => NoiseKindArg::White,
            (None, None, None) => NoiseKindArg::None,
            (None, Some(_), Some(_)) => {
                return Err(Failure::config(anyhow::anyhow!("--noise-eps and --noise-f need --noise-kind")));
            }
        };
        let model = match kind {
            NoiseKindArg::None => NoiseModel::none(),
            NoiseKindArg::Depolarizing => NoiseModel::depolarizing(
                self.noise_eps.ok_or_else(|| Failure::config(anyhow::anyhow!("depolarizing noise needs --noise-eps")))?,
            )?,
            NoiseKindArg::White => NoiseModel::white(
                self.noise_f.ok_or_else(|| Failure::config(anyhow::anyhow!("white noise needs --noise-f")))?,
            )?,
        };
        Ok(Some(match self.noise_c {
            Some(c) => model.with_c(c)?,
            None => model,
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PkModeArg {
    Pure,
    Density,
    Trajectory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a one-time signing key; writes the key and a public-key manifest.
    Keygen {
        #[arg(long)]
        n: usize,
        /// Circuit depth [default: ceil(log2(n)^2)].
        #[arg(long)]
        d: Option<usize>,
        /// Blocks per bit value.
        #[arg(long)]
        t: usize,
        /// Message bits the key can sign.
        #[arg(long, default_value_t = 1)]
        slots: usize,
        #[arg(long, default_value = "crypto")]
        catalog: CatalogId,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        pk: PathBuf,
    },
    /// Sign a bit string and mark the key as used.
    Sign {
        #[arg(long)]
        sk: PathBuf,
        /// Bits to sign, e.g. `1011`.
        #[arg(long)]
        message: String,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Prepare a public-key copy from the manifest and verify; exits 4 on reject.
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        message: String,
        /// Threshold [default: t when noiseless, else from the heuristic fidelity].
        #[arg(long)]
        k: Option<usize>,
        /// Verifier noise; the manifest's model when omitted.
        #[command(flatten)]
        noise: NoiseArgs,
        /// [default: pure when noiseless, density up to 12 qubits, trajectory above].
        #[arg(long, value_enum)]
        pk_mode: Option<PkModeArg>,
        /// [default: exact unless the key is prepared by trajectories].
        #[arg(long, value_enum)]
        verify_mode: Option<VerifyModeArg>,
    },
    /// Run the one-way security game against a baseline adversary.
    OwsgGame {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "enum4")]
        catalog: CatalogId,
        #[arg(long, value_enum, default_value_t = commands::GameAdversary::BruteForce)]
        adversary: commands::GameAdversary,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Correctness, hiding and binding figures of the commitment scheme.
    Commitment {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value = "enum16")]
        catalog: CatalogId,
        /// Copies per register.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
    /// Learning and cloning baselines.
    AttackBench {
        #[arg(long, value_enum)]
        attack: commands::Attack,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Input copies [default: attack-specific].
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
    /// Closed-form calculators.
    Calc {
        #[command(subcommand)]
        calc: commands::Calc,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let sink = Sink { out: cli.out, format: cli.format, seed: cli.seed };
    match cli.command {
        Command::Keygen { n, d, t, slots, catalog, noise, sk, pk } => {
            commands::keygen(&sink, commands::KeygenArgs { n, d, t, slots, catalog, noise: noise.model()? }, &sk, &pk)
        }
        Command::Sign { sk, message, sig } => commands::sign(&sink, &sk, &message, &sig),
        Command::Verify { pk, sig, message, k, noise, pk_mode, verify_mode } => {
            commands::verify(&sink, &pk, &sig, &message, k, noise.model()?, pk_mode, verify_mode)
        }
        Command::OwsgGame { n, d, catalog, adversary, copies, trials } => {
            commands::owsg_game(&sink, n, d, catalog, adversary, copies, trials)
        }
        Command::Commitment { n, d, catalog, k, trials } => commands::commitment(&sink, n, d, catalog, k, trials),
        Command::AttackBench { attack, n, d, copies, trials } => commands::attack_bench(&sink, attack, n, d, copies, trials),
        Command::Calc { calc } => commands::calc(&sink, calc),
    }
}

fn main() {
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { report::ExitCode::Config as i32 } else { 0 };
        let _ = e.print();
        process::exit(code);
    });
    if let Err(f) = run(cli) {
        eprintln!("error: {f}");
        process::exit(f.code as i32);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noise(args: &[&str]) -> Result<Option<NoiseModel>, Failure> {
        #[derive(Parser)]
        struct Wrap {
            #[command(flatten)]
            noise: NoiseArgs,
        }
        Wrap::try_parse_from(std::iter::once("x").chain(args.iter().copied())).unwrap().noise.model()
    }

    #[test]
    fn noise_flags() {
        assert_eq!(noise(&[]).unwrap(), None);
        assert_eq!(noise(&["--noise-eps", "0.1"]).unwrap(), Some(NoiseModel::depolarizing(0.1).unwrap()));
        assert_eq!(noise(&["--noise-f", "0.5"]).unwrap(), Some(NoiseModel::white(0.5).unwrap()));
        assert_eq!(noise(&["--noise-kind", "none"]).unwrap(), Some(NoiseModel::none()));
        let with_c = noise(&["--noise-f", "0.5", "--noise-c", "0.003"]).unwrap().unwrap();
        assert_eq!(with_c.c, Some(0.003));
        assert!(noise(&["--noise-kind", "white"]).is_err());
        assert!(noise(&["--noise-eps", "0.1", "--noise-f", "0.5"]).is_err());
        assert_eq!(noise(&["--noise-eps", "2"]).unwrap_err().code, report::ExitCode::Config);
    }
}
