use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use owsg::circuits::{deserialize, encoded_len, serialize, CatalogId, CircuitDescription, EnsembleParams};
use owsg::owsg::threshold_k;
use owsg::statevec::gates::{cnot, hadamard, phase_t};
use owsg::statevec::GateOp;
use owsg::{Density, State};

fn catalog() -> impl Strategy<Value = CatalogId> {
    prop::sample::select(CatalogId::ALL.to_vec())
}

#[derive(Debug, Clone)]
enum Step {
    H(usize),
    T(usize),
    Cnot(usize, usize),
}

fn steps(n: usize) -> impl Strategy<Value = Vec<Step>> {
    let one = prop_oneof![
        (0..n).prop_map(Step::H),
        (0..n).prop_map(Step::T),
        (0..n, 1..n).prop_map(move |(a, off)| Step::Cnot(a, (a + off) % n)),
    ];
    prop::collection::vec(one, 0..40)
}

fn to_gate(s: &Step) -> GateOp<f64> {
    match *s {
        Step::H(q) => GateOp::single("H", q, hadamard()).unwrap(),
        Step::T(q) => GateOp::single("T", q, phase_t()).unwrap(),
        Step::Cnot(a, b) => GateOp::pair("CNOT", a, b, cnot()).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qcirc_roundtrip(n in 2usize..12, d in 1usize..8, cat in catalog(), seed in any::<u64>()) {
        let params = EnsembleParams::new(n, d, cat, seed).unwrap();
        let c = CircuitDescription::sample_seeded(params).unwrap();
        let bytes = serialize(&c);
        prop_assert_eq!(bytes.len(), encoded_len(&params));
        let back = deserialize(&bytes).unwrap();
        prop_assert_eq!(back.bricks(), c.bricks());
        prop_assert_eq!(back.params().n, n);
        prop_assert_eq!(back.params().d, d);
        prop_assert_eq!(back.params().catalog, cat);
    }

    #[test]
    fn gates_preserve_norm_and_invert((n, seq) in (2usize..6).prop_flat_map(|n| (Just(n), steps(n))), seed in any::<u64>()) {
        let start = CircuitDescription::sample_seeded(EnsembleParams::new(n, 2, CatalogId::Crypto, seed).unwrap())
            .unwrap()
            .prepare_state::<f64>();
        let gates: Vec<GateOp<f64>> = seq.iter().map(to_gate).collect();
        let mut s = start.clone();
        s.apply_all(&gates).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-10);
        for g in gates.iter().rev() {
            s.apply(&g.adjoint()).unwrap();
        }
        for (a, b) in s.amplitudes().iter().zip(start.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn threshold_k_is_monotone(n in 1usize..40, t in 1usize..400, e1 in 0.01f64..1.0, e2 in 0.01f64..1.0) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        if let Ok(k_lo) = threshold_k(lo, t, n) {
            let k_hi = threshold_k(hi, t, n).unwrap();
            prop_assert!(k_lo <= k_hi);
            let k_more = threshold_k(lo, t + 1, n).unwrap();
            prop_assert!(k_lo <= k_more);
            prop_assert!((1..=t).contains(&k_lo));
        }
    }

    #[test]
    fn pure_fidelity_is_overlap(seed_a in any::<u64>(), seed_b in any::<u64>()) {
        let prep = |seed| CircuitDescription::sample_seeded(EnsembleParams::new(3, 3, CatalogId::Crypto, seed).unwrap())
            .unwrap()
            .prepare_state::<f64>();
        let (a, b): (State, State) = (prep(seed_a), prep(seed_b));
        let f = Density::from_pure(&a).unwrap().fidelity(&Density::from_pure(&b).unwrap()).unwrap();
        assert_abs_diff_eq!(f, a.overlap(&b).unwrap(), epsilon = 1e-9);
    }
}
