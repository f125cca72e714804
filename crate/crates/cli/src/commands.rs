use std::path::Path;
use std::time::Instant;

use anyhow::anyhow;
use clap::{Subcommand, ValueEnum};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use owsg::analysis::{
    calibrate_c, commitment_schedule, hoeffding_tail, landau_liu_samples, landau_liu_time, pubkey_vs_depth,
    ProposalParams,
};
use owsg::attacks::shadows::{projector_b, required_samples};
use owsg::attacks::{
    brute_force_learner, haar_state, oracle_world_run, shadow_learner, werner_clone, werner_fidelity, AttackReport,
    ExhaustiveStrategy, OracleWorld, QueryStrategy, RandomQueryStrategy, WernerStrategy,
};
use owsg::circuits::{default_depth, enumerate_ensemble, CatalogId, EnsembleParams};
use owsg::commitments::{
    binding_game, correctness_overlap, hiding_fidelity, CommitmentSetup, IdentityAdversary, SwapOutAdversary,
};
use owsg::density::MAX_DENSITY_QUBITS;
use owsg::noise::NoiseModel;
use owsg::owsg::{security_game, threshold_k, BruteForceLearner, GameStats, RandomGuess};
use owsg::signatures::format::{
    deserialize_secret_key, deserialize_signatures, serialize_secret_key, serialize_signatures,
};
use owsg::signatures::{self, PkManifest, PkMode, QuantumPublicKey, SigSecretKey, VerifyMode};
use owsg::stats::trial_rng;

use crate::report::{self, CliResult, ExitCode, Failure, Format, Sink, FORMAT_VERSION};
use crate::{PkModeArg, VerifyModeArg};

/// Enumeration cap for ensembles searched exhaustively.
const ENUM_CAP: usize = 1 << 16;

fn config(msg: impl Into<String>) -> Failure {
    Failure::config(anyhow!(msg.into()))
}

fn parse_message(bits: &str) -> CliResult<Vec<bool>> {
    if bits.is_empty() {
        return Err(config("message must be a nonempty bit string"));
    }
    bits.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(config(format!("message contains `{other}`; use only 0 and 1"))),
        })
        .collect()
}

fn game_json(stats: &GameStats) -> Value {
    let (lo, hi) = stats.ci95();
    json!({ "trials": stats.trials(), "estimate": stats.estimate(), "std_error": stats.std_error(), "ci95": [lo, hi] })
}

/// Pure without noise; exact density operators while they fit; trajectories otherwise.
fn default_pk_mode(noise: &NoiseModel, n: usize) -> PkMode {
    if noise.is_noiseless() {
        PkMode::Pure
    } else if n <= MAX_DENSITY_QUBITS {
        PkMode::Density
    } else {
        PkMode::Trajectory
    }
}

pub struct KeygenArgs {
    pub n: usize,
    pub d: Option<usize>,
    pub t: usize,
    pub slots: usize,
    pub catalog: CatalogId,
    pub noise: Option<NoiseModel>,
}

/// The public-key file: a manifest plus the circuits the verifier prepares.
#[derive(Debug, Serialize, Deserialize)]
struct PkFile {
    manifest: PkManifest,
    /// Hex of the signing-key container with the used flag cleared.
    circuits: String,
}

pub fn keygen(sink: &Sink, a: KeygenArgs, sk_path: &Path, pk_path: &Path) -> CliResult {
    let d = a.d.unwrap_or_else(|| default_depth(a.n));
    let ensemble = EnsembleParams::new(a.n, d, a.catalog, sink.seed)?;
    let sk = SigSecretKey::generate(ensemble, a.t, a.slots, &mut trial_rng(sink.seed, 0))?;
    let noise = a.noise.unwrap_or_default();
    let manifest = PkManifest::new(&sk, noise, default_pk_mode(&noise, a.n));
    let bytes = serialize_secret_key(&sk);
    let params = json!({ "n": a.n, "d": d, "t": a.t, "slots": a.slots, "catalog": a.catalog, "noise": noise });
    let pk = PkFile { manifest, circuits: hex::encode(&bytes) };
    let envelope = sink.envelope("keygen", params.clone(), serde_json::to_value(&pk).map_err(Failure::io)?, None);
    report::write(sk_path, &bytes)?;
    report::write(pk_path, serde_json::to_string_pretty(&envelope).map_err(Failure::io)?.as_bytes())?;
    sink.json("keygen", params, json!({ "sk": sk_path, "pk": pk_path, "pubkey_qubits": pk.manifest.qubits_per_bit_value }), None)
}

pub fn sign(sink: &Sink, sk_path: &Path, message: &str, sig_path: &Path) -> CliResult {
    let msg = parse_message(message)?;
    let mut sk = deserialize_secret_key(&report::read(sk_path)?)?;
    let sigs = signatures::sign(&mut sk, &msg)?;
    // the used flag is persisted before any signature leaves the process
    report::write(sk_path, &serialize_secret_key(&sk))?;
    report::write(sig_path, &serialize_signatures(&sigs))?;
    sink.json("sign", json!({ "message": message }), json!({ "sig": sig_path, "signed_bits": sigs.len() }), None)
}

fn load_pk(path: &Path) -> CliResult<(PkManifest, SigSecretKey)> {
    let bad = |msg: String| Failure::io(anyhow!("{}: {msg}", path.display()));
    let v: Value = serde_json::from_slice(&report::read(path)?).map_err(|e| bad(e.to_string()))?;
    match v.get("format_version").and_then(Value::as_u64) {
        Some(x) if x == FORMAT_VERSION as u64 => {}
        other => return Err(bad(format!("unsupported format version {other:?}"))),
    }
    let pk: PkFile = serde_json::from_value(v["result"].clone()).map_err(|e| bad(e.to_string()))?;
    let bytes = hex::decode(&pk.circuits).map_err(|e| bad(e.to_string()))?;
    let sk = deserialize_secret_key(&bytes)?;
    let e = sk.ensemble();
    let m = &pk.manifest;
    if (m.n, m.d, m.catalog, m.t, m.slots) != (e.n, e.d, e.catalog, sk.t(), sk.slot_count()) {
        return Err(bad("manifest disagrees with its circuits".into()));
    }
    Ok((pk.manifest, sk))
}

#[allow(clippy::too_many_arguments)]
pub fn verify(
    sink: &Sink,
    pk_path: &Path,
    sig_path: &Path,
    message: &str,
    k: Option<usize>,
    noise: Option<NoiseModel>,
    pk_mode: Option<PkModeArg>,
    verify_mode: Option<VerifyModeArg>,
) -> CliResult {
    let msg = parse_message(message)?;
    let (manifest, circuits) = load_pk(pk_path)?;
    let sigs = deserialize_signatures(&report::read(sig_path)?)?;
    let noise = noise.unwrap_or(manifest.noise);
    let (n, t) = (manifest.n, manifest.t);
    let k = match k {
        Some(k) => k,
        None if noise.is_noiseless() => t,
        None => threshold_k(noise.heuristic_fidelity(circuits.ensemble().total_bricks()), t, n)?,
    };
    let pk_mode = match pk_mode {
        Some(PkModeArg::Pure) => PkMode::Pure,
        Some(PkModeArg::Density) => PkMode::Density,
        Some(PkModeArg::Trajectory) => PkMode::Trajectory,
        None => default_pk_mode(&noise, n),
    };
    let verify_mode = match verify_mode {
        Some(VerifyModeArg::Exact) => VerifyMode::Exact,
        Some(VerifyModeArg::Sampled) => VerifyMode::Sampled,
        None if pk_mode == PkMode::Trajectory => VerifyMode::Sampled,
        None => VerifyMode::Exact,
    };
    let mut rng = trial_rng(sink.seed, 1);
    let pk = QuantumPublicKey::generate(&circuits, &noise, pk_mode, &mut rng)?;
    let verdict = signatures::verify(pk, &msg, &sigs, k, verify_mode, &mut rng)?;
    let params = json!({ "message": message, "n": n, "t": t, "k": k, "noise": noise, "pk_mode": pk_mode, "verify_mode": verify_mode });
    sink.json("verify", params, serde_json::to_value(&verdict).map_err(Failure::io)?, None)?;
    if verdict.accept {
        Ok(())
    } else {
        Err(Failure { code: ExitCode::ThresholdFail, error: anyhow!("signature rejected") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameAdversary {
    Random,
    BruteForce,
}

pub fn owsg_game(sink: &Sink, n: usize, d: usize, catalog: CatalogId, adv: GameAdversary, copies: usize, trials: u64) -> CliResult {
    let params = EnsembleParams::new(n, d, catalog, sink.seed)?;
    let stats = match adv {
        GameAdversary::Random => security_game(&RandomGuess, params, copies, trials, sink.seed)?,
        GameAdversary::BruteForce => security_game(&BruteForceLearner { cap: ENUM_CAP }, params, copies, trials, sink.seed)?,
    };
    let p = json!({ "n": n, "d": d, "catalog": catalog, "adversary": format!("{adv:?}"), "copies": copies, "trials": trials });
    sink.json("owsg-game", p, game_json(&stats), None)
}

pub fn commitment(sink: &Sink, n: usize, d: usize, catalog: CatalogId, k: usize, trials: u64) -> CliResult {
    let setup = CommitmentSetup::from_params(EnsembleParams::new(n, d, catalog, sink.seed)?, k, ENUM_CAP)?;
    let identity = binding_game(&IdentityAdversary, &setup, trials, sink.seed)?;
    let swap_out = binding_game(&SwapOutAdversary, &setup, trials, sink.seed)?;
    let result = json!({
        "ensemble_size": setup.size(),
        "joint_qubits": setup.joint_qubits(),
        "correctness_overlap": correctness_overlap(&setup),
        "hiding_fidelity": hiding_fidelity(&setup)?,
        "binding": { "identity": game_json(&identity), "swap_out": game_json(&swap_out) },
    });
    sink.json("commitment", json!({ "n": n, "d": d, "catalog": catalog, "k": k, "trials": trials }), result, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Attack {
    /// Optimal universal cloner on Haar-random inputs.
    Werner,
    /// Classical-shadow learner over an enumerable ensemble.
    Shadows,
    /// Exact fidelity search over an enumerable ensemble.
    BruteForce,
    /// Query strategies in the state-preparation oracle model.
    Oracle,
}

/// An [`AttackReport`] without its wall-clock time, which goes to metadata.
#[derive(Debug, Serialize)]
struct BenchRow {
    attack: String,
    n: usize,
    samples: usize,
    fidelity: f64,
    bound: Option<f64>,
}

fn timed(attack: String, n: usize, samples: usize, bound: Option<f64>, f: impl FnOnce() -> CliResult<f64>) -> CliResult<AttackReport> {
    let start = Instant::now();
    let fidelity = f()?;
    Ok(AttackReport { attack, n, samples, runtime_ms: start.elapsed().as_secs_f64() * 1e3, fidelity, bound })
}

fn mean(xs: impl Iterator<Item = CliResult<f64>>, count: u64) -> CliResult<f64> {
    Ok(xs.sum::<CliResult<f64>>()? / count as f64)
}

pub fn attack_bench(sink: &Sink, attack: Attack, n: usize, d: usize, copies: Option<usize>, trials: u64) -> CliResult {
    if trials == 0 {
        return Err(config("trials must be at least 1"));
    }
    let seed = sink.seed;
    let enumerated = || enumerate_ensemble(EnsembleParams::new(n, d, CatalogId::Enum4, seed)?, ENUM_CAP);
    let reports = match attack {
        Attack::Werner => {
            let k = copies.unwrap_or(1);
            vec![timed("werner".into(), n, k, Some(werner_fidelity(n, k)), || {
                mean((0..trials).map(|i| Ok(werner_clone(&haar_state(n, &mut trial_rng(seed, i)), k)?.fidelity())), trials)
            })?]
        }
        Attack::Shadows => {
            let ensemble = enumerated()?;
            let (eps, delta) = (0.2, 0.1);
            let k = copies.unwrap_or_else(|| required_samples(eps, delta, ensemble.len(), projector_b(n)));
            vec![timed("shadows".into(), n, k, None, || {
                mean(
                    (0..trials).map(|i| {
                        let mut rng = trial_rng(seed, i);
                        let psi = ensemble[rng.random_range(0..ensemble.len())].prepare_state::<f64>();
                        Ok(match shadow_learner(&vec![psi.clone(); k], &ensemble, eps, delta, &mut rng) {
                            Ok((found, _)) => found.prepare_state::<f64>().overlap(&psi)?,
                            Err(_) => 0.0,
                        })
                    }),
                    trials,
                )
            })?]
        }
        Attack::BruteForce => {
            let ensemble = enumerated()?;
            vec![timed("brute-force".into(), n, 1, None, || {
                mean(
                    (0..trials).map(|i| {
                        let psi = ensemble[trial_rng(seed, i).random_range(0..ensemble.len())].prepare_state::<f64>();
                        let (j, _) = brute_force_learner(&psi, &ensemble)?;
                        Ok(ensemble[j].prepare_state::<f64>().overlap(&psi)?)
                    }),
                    trials,
                )
            })?]
        }
        Attack::Oracle => {
            let k = copies.unwrap_or(4);
            let size = 1usize << n.min(owsg::attacks::oracle::MAX_ORACLE_QUBITS);
            let mut strategies: Vec<Box<dyn QueryStrategy>> = vec![Box::new(WernerStrategy)];
            for q in [1, 2, 4, 8] {
                strategies.push(Box::new(RandomQueryStrategy { queries: q }));
            }
            strategies.push(Box::new(ExhaustiveStrategy { size }));
            strategies
                .iter()
                .map(|s| {
                    let bound = owsg::attacks::blackbox_bound(n, s.budget().min(size), k);
                    timed(s.name(), n, k, Some(bound), || {
                        mean(
                            (0..trials).map(|i| {
                                let mut rng = trial_rng(seed, i);
                                let world = OracleWorld::sample(n, size, &mut rng)?;
                                Ok(oracle_world_run(&world, s.as_ref(), k, &mut rng)?.fidelity)
                            }),
                            trials,
                        )
                    })
                })
                .collect::<CliResult<Vec<_>>>()?
        }
    };
    let runtimes: serde_json::Map<String, Value> =
        reports.iter().map(|r| (r.attack.clone(), json!(r.runtime_ms))).collect();
    let rows: Vec<BenchRow> = reports
        .into_iter()
        .map(|r| BenchRow { attack: r.attack, n: r.n, samples: r.samples, fidelity: r.fidelity, bound: r.bound })
        .collect();
    let params = json!({ "attack": format!("{attack:?}"), "n": n, "d": d, "copies": copies, "trials": trials });
    sink.rows("attack-bench", params, &rows, Some(json!({ "runtime_ms": runtimes })))
}

#[derive(Debug, Subcommand)]
pub enum Calc {
    /// Sample and time cost of local-inversion learning.
    LandauLiu {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        d: usize,
        /// Lattice dimension.
        #[arg(long, default_value_t = 2)]
        k_dim: u32,
        #[arg(long, default_value_t = 0.99)]
        eps: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
    },
    /// Public-key qubits `n*t` against depth for a fixed threshold.
    PubkeyCurve {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 11)]
        k: usize,
        /// Per-gate decay [default: calibrated from F = 1e-3 at n = 67, d = 32].
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 1)]
        d_min: usize,
        #[arg(long, default_value_t = 40)]
        d_max: usize,
        #[arg(long, default_value_t = 100_000)]
        t_max: usize,
    },
    /// Threshold `k = floor((eta - sqrt(n/2t)) t)`.
    Threshold {
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
    },
    /// Failure tail of `t` Bernoulli(eta) blocks against threshold `k`.
    Hoeffding {
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
    },
    /// `c = -ln F / (n d)`.
    Calibrate {
        #[arg(long, default_value_t = 67)]
        n: usize,
        #[arg(long, default_value_t = 32)]
        d: usize,
        #[arg(long, default_value_t = 1e-3)]
        fidelity: f64,
    },
    /// Derived quantities of the default signature parameters.
    Proposal,
    /// Repetition counts and errors of the amplified commitment.
    CommitmentSchedule {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: usize,
    },
}

pub fn calc(sink: &Sink, calc: Calc) -> CliResult {
    let (name, params, result) = match calc {
        Calc::LandauLiu { n, d, k_dim, eps, delta } => {
            let samples = landau_liu_samples(n, d, k_dim, eps, delta)?;
            let time = landau_liu_time(n, d, k_dim, eps, delta)?;
            (
                "landau-liu",
                json!({ "n": n, "d": d, "k_dim": k_dim, "eps": eps, "delta": delta }),
                json!({
                    "samples_log10": samples.log10,
                    "samples": samples.scientific(),
                    "time_log10": time.log10,
                    "time": time.scientific(),
                }),
            )
        }
        Calc::PubkeyCurve { n, k, c, d_min, d_max, t_max } => {
            if d_min == 0 || d_min > d_max {
                return Err(config(format!("need 1 <= d-min <= d-max, got {d_min}..{d_max}")));
            }
            let c = match c {
                Some(c) => c,
                None => calibrate_c(67, 32, 1e-3)?,
            };
            let rows = pubkey_vs_depth(n, k, c, d_min..=d_max, t_max);
            let params = json!({ "n": n, "k": k, "c": c, "d_min": d_min, "d_max": d_max, "t_max": t_max });
            return sink.rows("calc pubkey-curve", params, &rows, None);
        }
        Calc::Threshold { eta, t, n } => {
            ("threshold", json!({ "eta": eta, "t": t, "n": n }), json!({ "k": threshold_k(eta, t, n)? }))
        }
        Calc::Hoeffding { eta, t, k } => (
            "hoeffding",
            json!({ "eta": eta, "t": t, "k": k }),
            serde_json::to_value(hoeffding_tail(eta, t, k)?).map_err(Failure::io)?,
        ),
        Calc::Calibrate { n, d, fidelity } => {
            ("calibrate", json!({ "n": n, "d": d, "fidelity": fidelity }), json!({ "c": calibrate_c(n, d, fidelity)? }))
        }
        Calc::Proposal => {
            let p = ProposalParams::default();
            let params = serde_json::to_value(p).map_err(Failure::io)?;
            ("proposal", params, serde_json::to_value(p.report()?).map_err(Failure::io)?)
        }
        Calc::CommitmentSchedule { p, n } => (
            "commitment-schedule",
            json!({ "p": p, "n": n }),
            serde_json::to_value(commitment_schedule(p, n)?).map_err(Failure::io)?,
        ),
    };
    if sink.format == Format::Csv {
        return Err(config(format!("calc {name} has no tabular output; use --format json")));
    }
    sink.json(&format!("calc {name}"), params, result, None)
}
