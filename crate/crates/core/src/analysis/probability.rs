use serde::Serialize;

use crate::error::Result;
use crate::protocols::labels::{A, E, Q1, Q2, Q3, Q4};
use crate::protocols::{
    alice_circuit, build_ua, make_cluster_channel, table2_branch, ChannelParams, CorrectionOp,
    InputState, PovmConfig,
};
use crate::qcore::{GateMatrix, MeasureBasis, Outcome, PureState};

/// Per-attempt success probability of the information-preserving protocol,
/// `2(|α|² + |β|²)`.
pub fn success_probability(p: &ChannelParams) -> Result<f64> {
    p.check_proposed()?;
    Ok(2.0 * (p.alpha().norm_sqr() + p.beta().norm_sqr()))
}

/// `|γ|² + |η|² - |α|² - |β|²`.
pub fn failure_probability(p: &ChannelParams) -> Result<f64> {
    p.check_proposed()?;
    Ok(p.gamma().norm_sqr() + p.eta().norm_sqr() - p.alpha().norm_sqr() - p.beta().norm_sqr())
}

/// Sums `Pr(bob) · Pr(e = 0 | bob)` by simulating every branch of one attempt
/// on the full register.
pub fn enumerate_success_probability(zeta: &InputState, p: &ChannelParams) -> Result<f64> {
    p.check_proposed()?;
    let start = zeta.to_state(A).tensor(&make_cluster_channel(p))?;
    let x = CorrectionOp::X.gate();
    let mut total = 0.0;
    for branch in start.bell_measure(Q2, Q3)? {
        let (Some(mut state), Outcome::Bell(bob)) = (branch.post_state, branch.outcome) else {
            continue;
        };
        let info = table2_branch(bob, p)?;
        if info.frame_flip {
            state = state.apply_gate(&x, &[Q1])?.apply_gate(&x, &[Q4])?;
        }
        let out = alice_circuit(&state, &build_ua(&info)?)?;
        let e0: f64 = out
            .measure_projective(E, MeasureBasis::Z)?
            .iter()
            .filter(|o| o.outcome == Outcome::Z(0))
            .map(|o| o.probability)
            .sum();
        total += branch.probability * e0;
    }
    Ok(total)
}

/// Outcome probabilities of the three-element POVM: the textbook expressions
/// next to the values obtained by measuring the normalized register.
#[derive(Debug, Clone, Serialize)]
pub struct PovmReport {
    pub rho: f64,
    pub varsigma: f64,
    /// `1/(4ρς)`, `1/(4ρς)`, `1 - 1/(2ρς)`.
    pub formula: [f64; 3],
    pub simulated: [f64; 3],
    pub max_discrepancy: f64,
}

/// Prepares qubit 4 as `δ₀a|0⟩ + δ₁b|1⟩` (normalized), copies it onto E with a
/// CNOT, measures E with `cfg` and compares against the closed-form values.
pub fn ramirez_povm_report(cfg: &PovmConfig, zeta: &InputState) -> Result<PovmReport> {
    let (q4, _) = PureState::from_unnormalized([Q4], vec![zeta.a() * cfg.delta0, zeta.b() * cfg.delta1])?;
    let state = q4.tensor(&PureState::zero(E))?.apply_gate(&GateMatrix::cnot(), &[Q4, E])?;
    let mut simulated = [0.0; 3];
    for o in state.povm_measure(E, &cfg.elements)? {
        if let Outcome::Povm(i) = o.outcome {
            simulated[i] = o.probability;
        }
    }
    let x = 1.0 / (cfg.rho * cfg.varsigma);
    let formula = [x / 4.0, x / 4.0, 1.0 - x / 2.0];
    let max_discrepancy = formula
        .iter()
        .zip(&simulated)
        .map(|(f, s)| (f - s).abs())
        .fold(0.0, f64::max);
    Ok(PovmReport {
        rho: cfg.rho,
        varsigma: cfg.varsigma,
        formula,
        simulated,
        max_discrepancy,
    })
}
