use owsg::circuits::{total_bricks, CatalogId, CircuitDescription, EnsembleParams};
use owsg::noise::{apply_noisy_circuit, NoiseModel, NoisyOutput, SimMode};
use owsg::stats::trial_rng;

fn exact_fidelity(c: &CircuitDescription, model: &NoiseModel) -> f64 {
    let mut rng = trial_rng(0, 0);
    let out = apply_noisy_circuit::<f64, _>(c, model, SimMode::ExactDensity, &mut rng).unwrap();
    out.fidelity_with(&c.prepare_state()).unwrap()
}

#[test]
fn trajectories_average_to_the_exact_channel() {
    let params = EnsembleParams::new(4, 4, CatalogId::Crypto, 11).unwrap();
    let c = CircuitDescription::sample_seeded(params).unwrap();
    let model = NoiseModel::depolarizing(0.02).unwrap();
    let ideal = c.prepare_state::<f64>();
    let runs = 10_000;
    let samples: Vec<f64> = (0..runs)
        .map(|i| {
            let mut rng = trial_rng(5, i);
            match apply_noisy_circuit::<f64, _>(&c, &model, SimMode::Trajectory, &mut rng).unwrap() {
                NoisyOutput::Sample(s) => s.overlap(&ideal).unwrap(),
                NoisyOutput::Density(_) => unreachable!("trajectory mode samples"),
            }
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / runs as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
    let sigma = (var / runs as f64).sqrt();
    let exact = exact_fidelity(&c, &model);
    assert!((mean - exact).abs() <= 3.0 * sigma, "mean {mean} exact {exact} sigma {sigma}");
}

#[test]
fn fidelity_decays_with_depth() {
    let model = NoiseModel::depolarizing(0.03).unwrap();
    for n in [3, 5, 7] {
        for seed in 0..4 {
            let full = CircuitDescription::sample_seeded(EnsembleParams::new(n, 8, CatalogId::Crypto, seed).unwrap()).unwrap();
            let mut last = 1.0;
            for d in 1..=8 {
                let prefix = full.bricks()[..total_bricks(n, d)].to_vec();
                let c = CircuitDescription::new(EnsembleParams::new(n, d, CatalogId::Crypto, seed).unwrap(), prefix).unwrap();
                let f = exact_fidelity(&c, &model);
                assert!(f <= last + 1e-12, "n={n} seed={seed} d={d}: {f} > {last}");
                last = f;
            }
        }
    }
}
