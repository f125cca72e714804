//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use owsg::analysis::{calibrate_c, landau_liu_samples};
use owsg::attacks::clifford::single_qubit_group;
use owsg::attacks::shadows::{projector_b, required_samples, shadow_learner, Shadow};
use owsg::attacks::{
    haar_state, oracle_world_run, werner_clone, werner_fidelity, ExhaustiveStrategy, OracleWorld, QueryStrategy,
    RandomQueryStrategy, WernerStrategy,
};
use owsg::circuits::{enumerate_ensemble, CatalogId, EnsembleParams};
use owsg::commitments::{
    commit, correctness_overlap, register_b_closed_form, reveal_verify, CommitmentSetup,
};
use owsg::noise::{eta, NoiseModel};
use owsg::owsg::toy::{DialAdversary, ToyOwsg};
use owsg::owsg::{
    gen, threshold_k, ver_exact, ver_sampled, zero_error, CopyBudget, Owsg, OwsgKey, QState, ReductionParams,
};
use owsg::signatures::{pubkey_qubits, sign, verify, PkMode, QuantumPublicKey, SigSecretKey, VerifyMode};
use owsg::stats::{poisson_binomial_tail_ge, trial_rng, within_binomial_sigma};

/// A sampled frequency paired with the exact probability it estimates.
struct Comparison {
    label: String,
    successes: usize,
    trials: usize,
    exact: f64,
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [4, 8, 12] {
        for i in 0..100u64 {
            let params = EnsembleParams::with_default_depth(n, CatalogId::Crypto, 1000 * n as u64 + i).unwrap();
            let key = OwsgKey::sample(params, &mut trial_rng(1, i)).unwrap();
            let p = ver_exact(&key, &QState::Pure(gen(&key))).map_err(|e| e.to_string())?;
            worst = worst.max((p - 1.0).abs());
        }
    }
    check(worst <= 1e-10, format!("max |ver - 1| = {worst:e}"))?;
    Ok(format!("300 keys, max |ver - 1| = {worst:.1e}"))
}

fn c2() -> Outcome {
    let c = calibrate_c(67, 32, 1e-3).map_err(|e| e.to_string())?;
    let e = eta(20, 20, c);
    let k = threshold_k(0.28, 200, 20).map_err(|e| e.to_string())?;
    let pk = pubkey_qubits(20, 200);
    check((3.0e-3..=3.4e-3).contains(&c), format!("c = {c}"))?;
    check((0.27..=0.29).contains(&e), format!("eta = {e}"))?;
    check(k == 11, format!("k = {k}"))?;
    check(pk == 4000, format!("pubkey = {pk}"))?;
    Ok(format!("c = {c:.4e}, eta = {e:.4}, k = {k}, pubkey = {pk}"))
}

fn c3() -> Outcome {
    let m = landau_liu_samples(10, 10, 2, 0.99, 0.01).map_err(|e| e.to_string())?;
    check(m.log10 >= 34.0, format!("log10 M = {}", m.log10))?;
    Ok(format!("M = {} (log10 {:.2})", m.scientific(), m.log10))
}

fn c4(cmp: &mut Vec<Comparison>) -> Outcome {
    let (n, t, k) = (6, 200, 11);
    let dim = (1u64 << n) as f64;
    let target = 0.28;
    let fidelity = (target - 1.0 / dim) / (1.0 - 1.0 / dim);
    let noise = NoiseModel::white(fidelity).map_err(|e| e.to_string())?;
    let params = EnsembleParams::with_default_depth(n, CatalogId::Crypto, 4).unwrap();

    let mut sk = SigSecretKey::generate_seeded(params, t, 1).map_err(|e| e.to_string())?;
    let mut rng = trial_rng(4, 0);
    let pk = QuantumPublicKey::generate(&sk, &noise, PkMode::Density, &mut rng).map_err(|e| e.to_string())?;
    let sigs = sign(&mut sk, &[true]).map_err(|e| e.to_string())?;
    let v = verify(pk, &[true], &sigs, k, VerifyMode::Exact, &mut rng).map_err(|e| e.to_string())?;
    let per_block = &v.per_bit[0].per_block;
    let block_dev = per_block.iter().map(|p| (p - target).abs()).fold(0.0, f64::max);
    check(block_dev < 1e-9, format!("per-block probability off by {block_dev:e}"))?;
    let exact = v.accept_prob;
    let oracle = poisson_binomial_tail_ge(per_block, k);
    check((exact - oracle).abs() < 1e-12, "verify disagrees with the Poisson-binomial tail")?;
    let floor = 1.0 - 2.0 * (-20f64).exp();
    check(exact >= floor, format!("exact acceptance {exact} < {floor}"))?;

    let runs = 1000;
    let mut accepted = 0;
    for run in 0..runs {
        let params = EnsembleParams::with_default_depth(n, CatalogId::Crypto, 10_000 + run).unwrap();
        let mut sk = SigSecretKey::generate_seeded(params, t, 1).map_err(|e| e.to_string())?;
        let mut rng = trial_rng(41, run);
        let pk = QuantumPublicKey::generate(&sk, &noise, PkMode::Trajectory, &mut rng).map_err(|e| e.to_string())?;
        let sigs = sign(&mut sk, &[true]).map_err(|e| e.to_string())?;
        let v = verify(pk, &[true], &sigs, k, VerifyMode::Sampled, &mut rng).map_err(|e| e.to_string())?;
        accepted += v.accept as usize;
    }
    cmp.push(Comparison { label: "signature end-to-end".into(), successes: accepted, trials: runs as usize, exact });
    check(accepted == runs as usize, format!("{accepted}/{runs} sampled verifications accepted"))?;
    Ok(format!("exact acceptance 1 - {:.1e}, sampled {accepted}/{runs}", 1.0 - exact))
}

fn c5() -> Outcome {
    let trials = 1000;
    let mut parts = Vec::new();
    for (n, k, want) in [(1, 1, 2.0 / 3.0), (2, 1, 2.0 / 5.0)] {
        let mut rng = trial_rng(5, n as u64);
        let mut sum = 0.0;
        for _ in 0..trials {
            let psi = haar_state(n, &mut rng);
            sum += werner_clone(&psi, k).map_err(|e| e.to_string())?.fidelity();
        }
        let avg = sum / trials as f64;
        check((avg - want).abs() <= 0.02, format!("n={n}: average {avg} vs {want}"))?;
        parts.push(format!("n={n}: {avg:.4} (formula {:.4})", werner_fidelity(n, k)));
    }
    Ok(parts.join(", "))
}

fn c6() -> Outcome {
    // (a) exact average over the 24 one-qubit Cliffords
    let mut rng = trial_rng(6, 0);
    let group = single_qubit_group();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let psi = haar_state(1, &mut rng);
        let phi = haar_state(1, &mut rng);
        let mut avg = 0.0;
        for c in &group {
            let mut s = psi.clone();
            c.apply_to(&mut s).map_err(|e| e.to_string())?;
            for x in 0..2 {
                let shadow = Shadow { clifford: c.clone(), outcome: x };
                avg += s.probability(x) * shadow.value(&phi).map_err(|e| e.to_string())?;
            }
        }
        avg /= group.len() as f64;
        worst = worst.max((avg - phi.overlap(&psi).unwrap()).abs());
    }
    check(worst <= 1e-9, format!("unbiasedness defect {worst:e}"))?;

    // (b) the learner on an enumerable ensemble
    let (eps, delta, trials) = (0.2, 0.1, 200u64);
    let params = EnsembleParams::new(3, 3, CatalogId::Enum4, 0).unwrap();
    let ensemble = enumerate_ensemble(params, 1 << 10).map_err(|e| e.to_string())?;
    let copies_needed = required_samples(eps, delta, ensemble.len(), projector_b(3));
    let mut good = 0;
    for trial in 0..trials {
        let mut rng = trial_rng(61, trial);
        let target = &ensemble[rand::Rng::random_range(&mut rng, 0..ensemble.len())];
        let psi = target.prepare_state::<f64>();
        let copies = vec![psi.clone(); copies_needed];
        if let Ok((d, _)) = shadow_learner(&copies, &ensemble, eps, delta, &mut rng) {
            good += (d.prepare_state::<f64>().overlap(&psi).unwrap() >= 1.0 - eps) as usize;
        }
    }
    let rate = good as f64 / trials as f64;
    check(rate >= 0.85, format!("learner succeeded in {good}/{trials}"))?;
    Ok(format!("defect {worst:.1e}; learner {good}/{trials} with {copies_needed} copies over M={}", ensemble.len()))
}

fn c7(cmp: &mut Vec<Comparison>) -> Outcome {
    let params = EnsembleParams::new(2, 1, CatalogId::Enum16, 0).unwrap();
    let setup = CommitmentSetup::from_params(params, 2, 1 << 12).map_err(|e| e.to_string())?;
    let overlap = correctness_overlap(&setup);
    check(overlap <= 0.25 + 1e-9, format!("correctness overlap {overlap}"))?;
    let mut worst: f64 = 0.0;
    for bit in [false, true] {
        let c = commit(&setup, bit).map_err(|e| e.to_string())?;
        let r = reveal_verify(&setup, &c.joint, bit).map_err(|e| e.to_string())?;
        check((r - 1.0).abs() < 1e-12, format!("honest reveal of {bit} accepted with {r}"))?;
        let traced = c.register_b(&setup).map_err(|e| e.to_string())?;
        let closed = register_b_closed_form(&setup, bit).map_err(|e| e.to_string())?;
        worst = worst.max(traced.max_abs_diff(&closed));

        // sampled reveal of the wrong bit against its exact probability
        let cross = reveal_verify(&setup, &c.joint, !bit).map_err(|e| e.to_string())?;
        let mut rng = trial_rng(7, bit as u64);
        let trials = 4000;
        let hits = (0..trials).filter(|_| rand::Rng::random::<f64>(&mut rng) < cross).count();
        cmp.push(Comparison { label: format!("cross reveal b={}", bit as u8), successes: hits, trials, exact: cross });
    }
    check(worst <= 1e-9, format!("register-B mismatch {worst:e}"))?;
    Ok(format!("overlap {overlap:.4}, register-B max diff {worst:.1e}"))
}

fn c8() -> Outcome {
    let game = ToyOwsg::default();
    let params = ReductionParams::new(16, 4, 0.2, 0.2).map_err(|e| e.to_string())?;
    let adversary = DialAdversary { engage: 0.3, p: 0.7 };
    let trials = 2000u64;
    let half = params.half();
    let (mut non_bottom, mut good) = (0usize, 0usize);
    for trial in 0..trials {
        let mut rng = trial_rng(8, trial);
        let keys: Vec<u64> = (0..half).map(|_| game.sample_key(&mut rng)).collect();
        let states = keys.iter().map(|k| game.gen(k)).collect();
        let mut front = CopyBudget::new(states, params.zero_error_copies());
        let out = zero_error(&game, &adversary, &params, &mut front, &mut rng).map_err(|e| e.to_string())?;
        if let Some(found) = out.keys {
            non_bottom += 1;
            let verified = found.iter().zip(&keys).filter(|(a, b)| a == b).count();
            good += (verified as f64 >= params.gamma_prime() * half as f64) as usize;
        }
    }
    let p_nb = non_bottom as f64 / trials as f64;
    let floor_nb = 1.0 / (8.0 * params.q as f64);
    let sigma_nb = (floor_nb * (1.0 - floor_nb) / trials as f64).sqrt();
    check(p_nb >= floor_nb - 3.0 * sigma_nb, format!("Pr[not bottom] = {p_nb}"))?;
    let cond = good as f64 / non_bottom.max(1) as f64;
    let floor_c = 1.0 - params.xi / 4.0;
    let sigma_c = (floor_c * (1.0 - floor_c) / non_bottom.max(1) as f64).sqrt();
    check(cond >= floor_c - 3.0 * sigma_c, format!("conditional success {cond}"))?;
    Ok(format!("Pr[not bottom] = {p_nb:.3} (floor {floor_nb:.3}); conditional {cond:.3} (floor {floor_c:.3})"))
}

fn c9() -> Outcome {
    let (n, size, k) = (6, 64, 4);
    let trials = 200u64;
    let mut strategies: Vec<Box<dyn QueryStrategy>> = vec![Box::new(WernerStrategy)];
    for t in [1, 2, 4, 8] {
        strategies.push(Box::new(RandomQueryStrategy { queries: t }));
    }
    let mut parts = Vec::new();
    for s in &strategies {
        let mut sum = 0.0;
        let mut bound = 0.0;
        for trial in 0..trials {
            let mut rng = trial_rng(9, trial);
            let world = OracleWorld::sample(n, size, &mut rng).map_err(|e| e.to_string())?;
            let out = oracle_world_run(&world, s.as_ref(), k, &mut rng).map_err(|e| e.to_string())?;
            sum += out.fidelity;
            bound = out.bound;
        }
        let avg = sum / trials as f64;
        check(avg <= bound, format!("{}: {avg} exceeds {bound}", s.name()))?;
        parts.push(format!("{} {avg:.3}/{bound:.2}", s.name()));
    }
    let mut worst: f64 = 1.0;
    for trial in 0..20 {
        let mut rng = trial_rng(91, trial);
        let world = OracleWorld::sample(n, size, &mut rng).map_err(|e| e.to_string())?;
        let out = oracle_world_run(&world, &ExhaustiveStrategy { size }, k, &mut rng).map_err(|e| e.to_string())?;
        worst = worst.min(out.fidelity);
    }
    check(worst >= 0.9, format!("exhaustive fidelity {worst}"))?;
    parts.push(format!("exhaustive min {worst:.4}"));
    Ok(parts.join("; "))
}

/// Ver on depolarized states, sampled against exact.
fn owsg_comparisons(cmp: &mut Vec<Comparison>) -> Result<(), String> {
    for (i, eps) in [0.01, 0.05].into_iter().enumerate() {
        let params = EnsembleParams::new(4, 4, CatalogId::Crypto, 70 + i as u64).unwrap();
        let key = OwsgKey::sample(params, &mut trial_rng(10, i as u64)).unwrap();
        let mut rng = trial_rng(11, i as u64);
        let noisy = owsg::noise::apply_noisy_circuit::<f64, _>(
            key.circuit(),
            &NoiseModel::depolarizing(eps).unwrap(),
            owsg::noise::SimMode::ExactDensity,
            &mut rng,
        )
        .map_err(|e| e.to_string())?;
        let owsg::noise::NoisyOutput::Density(rho) = noisy else {
            return Err("exact mode returned a sample".into());
        };
        let state = QState::Mixed(rho);
        let exact = ver_exact(&key, &state).map_err(|e| e.to_string())?;
        let trials = 5000;
        let mut hits = 0;
        for _ in 0..trials {
            hits += ver_sampled(&key, &state, &mut rng).map_err(|e| e.to_string())? as usize;
        }
        cmp.push(Comparison { label: format!("owsg ver eps={eps}"), successes: hits, trials, exact });
    }
    Ok(())
}

fn c10(cmp: &[Comparison]) -> Outcome {
    check(!cmp.is_empty(), "no sampled comparisons were recorded")?;
    let mut parts = Vec::new();
    for c in cmp {
        let ok = within_binomial_sigma(c.successes as f64, c.trials as f64, c.exact, 4.0);
        check(ok, format!("{}: {}/{} vs exact {}", c.label, c.successes, c.trials, c.exact))?;
        parts.push(format!("{} {}/{}~{:.4}", c.label, c.successes, c.trials, c.exact));
    }
    Ok(parts.join("; "))
}

fn report(out: &mut impl Write, id: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d} [runtime {elapsed:.1?} over {limit:?}]")),
        Err(e) => (false, e),
    };
    writeln!(out, "criterion {id:>2}: {} ({:.2?}) {detail}", if ok { "PASS" } else { "FAIL" }, elapsed).unwrap();
    out.flush().unwrap();
    ok
}

fn main() {
    // cargo passes harness flags such as --list; a bare listing must not run the suite
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut out = std::io::stdout();
    let mut cmp = Vec::new();
    let secs = Duration::from_secs;
    let mut ok = true;
    ok &= report(&mut out, 1, secs(10), c1);
    ok &= report(&mut out, 2, secs(1), c2);
    ok &= report(&mut out, 3, secs(1), c3);
    ok &= report(&mut out, 4, secs(60), || c4(&mut cmp));
    ok &= report(&mut out, 5, secs(60), c5);
    ok &= report(&mut out, 6, secs(300), c6);
    ok &= report(&mut out, 7, secs(30), || c7(&mut cmp));
    ok &= report(&mut out, 8, secs(300), c8);
    ok &= report(&mut out, 9, secs(600), c9);
    ok &= report(&mut out, 10, secs(60), || {
        owsg_comparisons(&mut cmp)?;
        c10(&cmp)
    });
    if !ok {
        std::process::exit(1);
    }
}
