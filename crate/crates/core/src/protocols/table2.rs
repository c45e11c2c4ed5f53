//! Bob's outcome on qubits (2,3) and the partially entangled pair it leaves
//! between Alice's qubit 1 and Chika's qubit 4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{Amplitude, BellOutcome, GateMatrix, PureState, Sign, EPS};

use super::labels::{Q1, Q4};
use super::{ChannelParams, CorrectionOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TauForm {
    /// `u|00⟩ + v|11⟩` on (1,4).
    Tau1,
    /// `u|01⟩ + v|10⟩` on (1,4).
    Tau2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchInfo {
    pub bob: BellOutcome,
    pub u: Amplitude,
    pub v: Amplitude,
    pub tau_form: TauForm,
    /// Probability of Bob's outcome.
    pub prob: f64,
    /// Rotation axis of U_A.
    pub n_hat: [f64; 3],
    /// The raw ψ± collapse is `β|10⟩ ± γ|01⟩`; σ_X on both qubit 1 and
    /// qubit 4 brings it to the tabulated `u|01⟩ + v|10⟩`.
    pub frame_flip: bool,
}

impl BranchInfo {
    /// Real ratio `u/v`.
    pub fn ratio(&self) -> f64 {
        (self.u / self.v).re
    }

    /// The pair state `|τ⟩` on labels (Q1, Q4).
    pub fn tau_state(&self) -> PureState {
        tau_state(self.tau_form, self.u, self.v)
    }

    /// Amplitude of the failure branch, `√(|v|² - |u|²)`.
    pub fn failure_amplitude(&self) -> f64 {
        (self.v.norm_sqr() - self.u.norm_sqr()).max(0.0).sqrt()
    }

    /// Probability that Alice's auxiliary qubit reads 0 in this branch.
    pub fn success_probability(&self) -> f64 {
        2.0 * self.u.norm_sqr()
    }
}

pub fn tau_state(form: TauForm, u: Amplitude, v: Amplitude) -> PureState {
    let z = Amplitude::new(0.0, 0.0);
    let amps = match form {
        TauForm::Tau1 => vec![u, z, z, v],
        TauForm::Tau2 => vec![z, u, v, z],
    };
    PureState::from_unnormalized([Q1, Q4], amps)
        .expect("nonzero pair")
        .0
}

pub fn table2_branch(bob: BellOutcome, p: &ChannelParams) -> Result<BranchInfo> {
    p.check_proposed()?;
    let (u_raw, v_raw, tau_form) = match bob {
        BellOutcome::PhiPlus => (p.alpha(), -p.eta(), TauForm::Tau1),
        BellOutcome::PhiMinus => (p.alpha(), p.eta(), TauForm::Tau1),
        BellOutcome::PsiPlus => (p.beta(), p.gamma(), TauForm::Tau2),
        BellOutcome::PsiMinus => (p.beta(), -p.gamma(), TauForm::Tau2),
    };
    let weight = u_raw.norm_sqr() + v_raw.norm_sqr();
    if weight <= EPS {
        return Err(Error::InvalidArgument(format!(
            "Bob's outcome {bob} has zero probability for this channel"
        )));
    }
    let norm = weight.sqrt();
    let (u, v) = (u_raw / norm, v_raw / norm);
    let r = (u / v).re;
    let s = (1.0 - r * r).max(0.0).sqrt();
    Ok(BranchInfo {
        bob,
        u,
        v,
        tau_form,
        prob: weight / 2.0,
        n_hat: [s, 0.0, r],
        frame_flip: tau_form == TauForm::Tau2,
    })
}

/// `U_A = n̂·σ = [[r, √(1-r²)], [√(1-r²), -r]]` with `r = u/v`.
pub fn ua_from_ratio(r: f64) -> Result<GateMatrix> {
    if !r.is_finite() || r.abs() > 1.0 + EPS {
        return Err(Error::Assumption(format!("need |u| ≤ |v|, got u/v = {r}")));
    }
    let r = r.clamp(-1.0, 1.0);
    let s = (1.0 - r * r).sqrt();
    Ok(GateMatrix::from_real_rows("U_A", &[&[r, s], &[s, -r]])?)
}

pub fn build_ua(branch: &BranchInfo) -> Result<GateMatrix> {
    if branch.v.norm() == 0.0 {
        return Err(Error::Assumption("v = 0".into()));
    }
    let ratio = branch.u / branch.v;
    if ratio.im.abs() > 1e-9 {
        return Err(Error::Assumption(format!("u/v must be real, got {ratio}")));
    }
    ua_from_ratio(ratio.re)
}

/// Which of ε₁..ε₄ Chika holds, from Alice's Z result on A and X result on 1
/// (success branch only), as an index 1..=4.
pub fn epsilon_index(a_bit: u8, q1: Sign) -> usize {
    match (a_bit, q1) {
        (0, Sign::Plus) => 1,
        (0, Sign::Minus) => 2,
        (_, Sign::Minus) => 3,
        (_, Sign::Plus) => 4,
    }
}

/// Correction Chika applies after a successful attempt.
pub fn discriminate_correction(e_bit: u8, a_bit: u8, q1: Sign, tau: TauForm) -> Result<CorrectionOp> {
    if e_bit != 0 {
        return Err(Error::InvalidArgument(
            "no correction exists for the failure outcome e = 1".into(),
        ));
    }
    if a_bit > 1 {
        return Err(Error::InvalidArgument(format!("bit expected, got {a_bit}")));
    }
    use CorrectionOp::{Id, X, XZ, Z};
    let table = match tau {
        TauForm::Tau1 => [Id, Z, X, XZ],
        TauForm::Tau2 => [X, XZ, Id, Z],
    };
    Ok(table[epsilon_index(a_bit, q1) - 1])
}
