//! Closed-form calculators for the concrete parameter proposal, and CSV/JSON
//! emitters for their sweeps.
//!
//! Magnitudes that overflow `f64` are carried as `log₁₀`. Every `log` in the
//! learning-cost formulas is natural.

use serde::{Deserialize, Serialize};

use crate::attacks::shadows::{projector_b, SHADOW_CONSTANT};
use crate::circuits::{default_depth, total_bricks, CatalogId};
use crate::error::{Error, Result};
use crate::noise::eta;
use crate::owsg::threshold_k;
use crate::stats::{binomial_cdf_lt, hoeffding_bound};

/// A positive quantity held as `log₁₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Magnitude {
    pub log10: f64,
}

impl Magnitude {
    pub fn from_ln(ln: f64) -> Self {
        Self { log10: ln / std::f64::consts::LN_10 }
    }

    /// `+∞` once the value leaves `f64` range.
    pub fn value(&self) -> f64 {
        10f64.powf(self.log10)
    }

    /// `m × 10^e` with `1 ≤ m < 10`.
    pub fn scientific(&self) -> String {
        let e = self.log10.floor();
        format!("{:.3}e{}", 10f64.powf(self.log10 - e), e as i64)
    }

    fn ln(&self) -> f64 {
        self.log10 * std::f64::consts::LN_10
    }
}

fn ln_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `n⁴ · 2^{d^{k_dim}} / ε⁴ · ln(n/δ)` local-inversion sample count.
pub fn landau_liu_samples(n: usize, d: usize, k_dim: u32, eps: f64, delta: f64) -> Result<Magnitude> {
    for (name, v) in [("n", n as f64), ("d", d as f64), ("k_dim", k_dim as f64), ("eps", eps), ("delta", delta)] {
        positive(name, v)?;
    }
    let log_term = (n as f64 / delta).ln();
    if log_term <= 0.0 {
        return Err(Error::OutOfDomain(format!("ln(n/delta) = {log_term} is not positive")));
    }
    let ln = 4.0 * (n as f64).ln() + (d as f64).powi(k_dim as i32) * std::f64::consts::LN_2 - 4.0 * eps.ln()
        + log_term.ln();
    Ok(Magnitude::from_ln(ln))
}

/// Samples plus the `(n·k_dim·d³/ε)^{d^{k_dim+1}}` reconstruction term; at
/// `k_dim = 2` the exponent is the printed `d³`.
pub fn landau_liu_time(n: usize, d: usize, k_dim: u32, eps: f64, delta: f64) -> Result<Magnitude> {
    let samples = landau_liu_samples(n, d, k_dim, eps, delta)?;
    let base = n as f64 * k_dim as f64 * (d as f64).powi(3) / eps;
    let reconstruction = (d as f64).powi(k_dim as i32 + 1) * base.ln();
    Ok(Magnitude::from_ln(ln_sum_exp(samples.ln(), reconstruction)))
}

/// `c = −ln F / (n·d)`, inverting `η = exp(−c·n·d)`.
pub fn calibrate_c(n: usize, d: usize, fidelity: f64) -> Result<f64> {
    if !(fidelity > 0.0 && fidelity <= 1.0) {
        return Err(Error::OutOfDomain(format!("fidelity must lie in (0, 1], got {fidelity}")));
    }
    if n == 0 || d == 0 {
        return Err(Error::OutOfDomain("n and d must be positive".into()));
    }
    Ok(-fidelity.ln() / (n * d) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PubkeyRow {
    pub d: usize,
    pub eta: f64,
    pub t_required: Option<usize>,
    pub pubkey_qubits: Option<usize>,
    pub feasible: bool,
}

/// Smallest `t ≤ t_max` with `threshold_k(η, t, n) ≥ k`, if any.
pub fn min_rounds(eta: f64, n: usize, k: usize, t_max: usize) -> Option<usize> {
    (1..=t_max).find(|&t| threshold_k(eta, t, n).is_ok_and(|got| got >= k))
}

/// Public-key size `n·t` against depth, `t` the fewest rounds meeting `k`.
pub fn pubkey_vs_depth(
    n: usize,
    k: usize,
    c: f64,
    depths: impl IntoIterator<Item = usize>,
    t_max: usize,
) -> Vec<PubkeyRow> {
    depths
        .into_iter()
        .map(|d| {
            let e = eta(n, d, c);
            let t = min_rounds(e, n, k, t_max);
            PubkeyRow { d, eta: e, t_required: t, pubkey_qubits: t.map(|t| n * t), feasible: t.is_some() }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingTail {
    /// `2·exp(−2(ηt − k)²/t)`.
    pub bound: f64,
    /// `P[Bin(t, η) < k]`, computed for `t ≤ 10⁴`.
    pub exact: Option<f64>,
}

pub const EXACT_TAIL_MAX_T: usize = 10_000;

/// Bound on `P[X₁ + ⋯ + X_t < k]` for i.i.d. `Bernoulli(η)` blocks.
pub fn hoeffding_tail(eta: f64, t: usize, k: usize) -> Result<HoeffdingTail> {
    if !(0.0..=1.0).contains(&eta) || t == 0 {
        return Err(Error::OutOfDomain(format!("need 0 <= eta <= 1 and t >= 1, got eta={eta}, t={t}")));
    }
    if k as f64 > eta * t as f64 {
        return Err(Error::OutOfDomain(format!("k={k} exceeds eta*t={}", eta * t as f64)));
    }
    if k == 0 {
        return Ok(HoeffdingTail { bound: 0.0, exact: Some(0.0) });
    }
    Ok(HoeffdingTail {
        bound: hoeffding_bound(eta, t, k),
        exact: (t <= EXACT_TAIL_MAX_T).then(|| binomial_cdf_lt(t, eta, k)),
    })
}

/// Parameters of the two-stage commitment amplification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommitmentSchedule {
    pub p: f64,
    pub n: usize,
    /// `(2np)⁻²`.
    pub eps: f64,
    /// `4ε` statistical hiding of the base scheme.
    pub hiding_error: f64,
    /// Copies `k` for the base scheme's shadow learner over the default
    /// ensemble at `n` qubits.
    pub shadow_k: f64,
    /// `n·p²` parallel copies in the first stage.
    pub stage1_repetitions: f64,
    /// `n·p²·4ε = 1/n`.
    pub stage1_hiding: f64,
    /// `(1 − 1/p²)^{n·p²}`.
    pub stage1_binding: f64,
    /// `e^{−n}`, the target the binding error is compared against.
    pub binding_target: f64,
    pub stage2_repetitions: usize,
    /// `n^{−n}` once the flipped `1/n` binding error is repeated `n` times.
    pub stage2_binding: f64,
}

pub fn commitment_schedule(p: f64, n: usize) -> Result<CommitmentSchedule> {
    if !(p >= 1.0 && p.is_finite()) || n < 2 {
        return Err(Error::OutOfDomain(format!("need p >= 1 and n >= 2, got p={p}, n={n}")));
    }
    let nf = n as f64;
    let eps = (2.0 * nf * p).powi(-2);
    // ln|C| for the crypto catalog at the default depth
    let ln_size = total_bricks(n, default_depth(n)) as f64 * (CatalogId::Crypto.catalog().len() as f64).ln();
    let shadow_k = (SHADOW_CONSTANT / (eps * eps) * ((2.0f64).ln() + ln_size - eps.ln()) * projector_b(n)).ceil();
    let reps = nf * p * p;
    Ok(CommitmentSchedule {
        p,
        n,
        eps,
        hiding_error: 4.0 * eps,
        shadow_k,
        stage1_repetitions: reps,
        stage1_hiding: reps * 4.0 * eps,
        stage1_binding: (1.0 - 1.0 / (p * p)).powf(reps),
        binding_target: (-nf).exp(),
        stage2_repetitions: n,
        stage2_binding: nf.powf(-nf),
    })
}

/// The signature proposal: `n` qubits, depth `d`, `t` rounds, per-gate
/// noise `c`, and the learning target `(ε, δ)` used for cost estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProposalParams {
    pub n: usize,
    pub d: usize,
    pub t: usize,
    pub c: f64,
    pub eps_learn: f64,
    pub delta: f64,
}

impl Default for ProposalParams {
    fn default() -> Self {
        let c = calibrate_c(67, 32, 1e-3).expect("calibration point is in range");
        Self { n: 20, d: 20, t: 200, c, eps_learn: 0.99, delta: 0.01 }
    }
}

impl ProposalParams {
    pub fn eta(&self) -> f64 {
        eta(self.n, self.d, self.c)
    }

    pub fn k(&self) -> Result<usize> {
        threshold_k(self.eta(), self.t, self.n)
    }

    pub fn pubkey_qubits(&self) -> usize {
        crate::signatures::pubkey_qubits(self.n, self.t)
    }

    pub fn report(&self) -> Result<ProposalReport> {
        let k = self.k()?;
        Ok(ProposalReport {
            params: *self,
            eta: self.eta(),
            k,
            pubkey_qubits: self.pubkey_qubits(),
            failure_bound: hoeffding_tail(self.eta(), self.t, k)?,
        })
    }
}

/// A [`ProposalParams`] together with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProposalReport {
    pub params: ProposalParams,
    pub eta: f64,
    pub k: usize,
    pub pubkey_qubits: usize,
    pub failure_bound: HoeffdingTail,
}

/// RFC 4180 CSV with a header row.
pub fn to_csv<S: Serialize>(rows: &[S]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Serialization(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn to_json<S: Serialize + ?Sized>(value: &S) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Serialization(e.to_string()))
}
