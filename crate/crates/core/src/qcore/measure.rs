use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    hermitian2_eigenvalues, max_abs_diff, psd2_sqrt, Amplitude, PureState, Result, StateError,
    EPS, SUM_EPS, ZERO_PROB,
};

/// The four Bell states, in the fixed enumeration order used everywhere.
///
/// φ± = (|00⟩ ± |11⟩)/√2, ψ± = (|01⟩ ± |10⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    /// Amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amplitudes(self) -> [Amplitude; 4] {
        let h = Amplitude::new(FRAC_1_SQRT_2, 0.0);
        let z = Amplitude::new(0.0, 0.0);
        match self {
            BellOutcome::PhiPlus => [h, z, z, h],
            BellOutcome::PhiMinus => [h, z, z, -h],
            BellOutcome::PsiPlus => [z, h, h, z],
            BellOutcome::PsiMinus => [z, h, -h, z],
        }
    }

    /// Two-bit classical encoding: (parity, phase).
    pub fn bits(self) -> [u8; 2] {
        match self {
            BellOutcome::PhiPlus => [0, 0],
            BellOutcome::PhiMinus => [0, 1],
            BellOutcome::PsiPlus => [1, 0],
            BellOutcome::PsiMinus => [1, 1],
        }
    }

    pub fn is_phi(self) -> bool {
        matches!(self, BellOutcome::PhiPlus | BellOutcome::PhiMinus)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "φ+",
            BellOutcome::PhiMinus => "φ-",
            BellOutcome::PsiPlus => "ψ+",
            BellOutcome::PsiMinus => "ψ-",
        }
    }

    pub(crate) fn projector(self) -> Vec<Amplitude> {
        let v = self.amplitudes();
        (0..16).map(|i| v[i / 4] * v[i % 4].conj()).collect()
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BellOutcome {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "phi+" | "φ+" => Ok(BellOutcome::PhiPlus),
            "phi-" | "φ-" => Ok(BellOutcome::PhiMinus),
            "psi+" | "ψ+" => Ok(BellOutcome::PsiPlus),
            "psi-" | "ψ-" => Ok(BellOutcome::PsiMinus),
            _ => Err(format!("unknown Bell outcome `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn bit(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureBasis {
    Z,
    X,
}

/// Label of a measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Outcome {
    Z(u8),
    X(Sign),
    Bell(BellOutcome),
    /// Index into the POVM element list.
    Povm(usize),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Z(b) => write!(f, "{b}"),
            Outcome::X(Sign::Plus) => f.write_str("+"),
            Outcome::X(Sign::Minus) => f.write_str("-"),
            Outcome::Bell(b) => write!(f, "{b}"),
            Outcome::Povm(k) => write!(f, "povm[{}]", k + 1),
        }
    }
}

/// One branch of a measurement. The post-state keeps the measured qubits in
/// their collapsed state and is renormalized; it is `None` only for branches
/// of (numerically) zero probability.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub outcome: Outcome,
    pub probability: f64,
    pub post_state: Option<PureState>,
}

/// Single-qubit POVM element: Hermitian and positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmElement {
    entries: [Amplitude; 4],
}

impl PovmElement {
    pub fn new(entries: [Amplitude; 4]) -> Result<Self> {
        let adjoint = [
            entries[0].conj(),
            entries[2].conj(),
            entries[1].conj(),
            entries[3].conj(),
        ];
        let deviation = max_abs_diff(&entries, &adjoint);
        if !(deviation <= EPS) {
            return Err(StateError::NotHermitian { deviation });
        }
        let lowest = hermitian2_eigenvalues(&entries)[0];
        if lowest < -EPS {
            return Err(StateError::NotPositive { eigenvalue: lowest });
        }
        Ok(Self { entries })
    }

    /// `weight · |ket⟩⟨ket|`.
    pub fn weighted_projector(ket: [Amplitude; 2], weight: f64) -> Result<Self> {
        Self::new([
            ket[0] * ket[0].conj() * weight,
            ket[0] * ket[1].conj() * weight,
            ket[1] * ket[0].conj() * weight,
            ket[1] * ket[1].conj() * weight,
        ])
    }

    pub fn entries(&self) -> &[Amplitude; 4] {
        &self.entries
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian2_eigenvalues(&self.entries)
    }

    /// Canonical Kraus operator `Λ^{1/2}`.
    pub fn kraus(&self) -> [Amplitude; 4] {
        psd2_sqrt(&self.entries)
    }
}

/// `max |ΣΛ_k - I|` for a single-qubit element set.
pub(crate) fn completeness_deviation(elements: &[PovmElement]) -> f64 {
    let mut sum = [Amplitude::new(0.0, 0.0); 4];
    for e in elements {
        for (s, x) in sum.iter_mut().zip(e.entries) {
            *s += x;
        }
    }
    let id = [
        Amplitude::new(1.0, 0.0),
        Amplitude::new(0.0, 0.0),
        Amplitude::new(0.0, 0.0),
        Amplitude::new(1.0, 0.0),
    ];
    max_abs_diff(&sum, &id)
}

impl PureState {
    fn branch(&self, outcome: Outcome, operator: &[Amplitude], targets: &[&str]) -> Result<MeasurementOutcome> {
        let amps = self.apply_operator(operator, targets)?;
        let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let post_state = if weight > ZERO_PROB {
            Some(self.with_amps(amps)?.0)
        } else {
            None
        };
        Ok(MeasurementOutcome {
            outcome,
            probability: weight,
            post_state,
        })
    }

    /// Z or X measurement of one qubit. Outcomes are ordered `0, 1` or `+, -`.
    pub fn measure_projective(&self, target: &str, basis: MeasureBasis) -> Result<Vec<MeasurementOutcome>> {
        self.position(target)?;
        let one = Amplitude::new(1.0, 0.0);
        let zero = Amplitude::new(0.0, 0.0);
        let half = Amplitude::new(0.5, 0.0);
        let branches = match basis {
            MeasureBasis::Z => [
                (Outcome::Z(0), [one, zero, zero, zero]),
                (Outcome::Z(1), [zero, zero, zero, one]),
            ],
            MeasureBasis::X => [
                (Outcome::X(Sign::Plus), [half, half, half, half]),
                (Outcome::X(Sign::Minus), [half, -half, -half, half]),
            ],
        };
        branches
            .iter()
            .map(|(o, p)| self.branch(*o, p, &[target]))
            .collect()
    }

    /// Bell-basis measurement of `(q1, q2)`, outcomes in [`BellOutcome::ALL`] order.
    pub fn bell_measure(&self, q1: &str, q2: &str) -> Result<Vec<MeasurementOutcome>> {
        self.positions(&[q1, q2])?;
        BellOutcome::ALL
            .iter()
            .map(|b| self.branch(Outcome::Bell(*b), &b.projector(), &[q1, q2]))
            .collect()
    }

    /// Generalized measurement of one qubit. Outcome `k` has probability
    /// `⟨s|Λ_k|s⟩`; the post-state applies `Λ_k^{1/2}` and renormalizes.
    pub fn povm_measure(&self, target: &str, elements: &[PovmElement]) -> Result<Vec<MeasurementOutcome>> {
        self.position(target)?;
        let deviation = completeness_deviation(elements);
        if !(deviation <= SUM_EPS) {
            return Err(StateError::IncompletePovm { deviation });
        }
        elements
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let applied = self.apply_operator(e.entries(), &[target])?;
                let probability = self
                    .amplitudes()
                    .iter()
                    .zip(&applied)
                    .map(|(s, t)| s.conj() * t)
                    .sum::<Amplitude>()
                    .re;
                let mut out = self.branch(Outcome::Povm(k), &e.kraus(), &[target])?;
                out.probability = probability;
                Ok(out)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    fn total(outs: &[MeasurementOutcome]) -> f64 {
        outs.iter().map(|o| o.probability).sum()
    }

    #[test]
    fn z_measure_basis_state() {
        let outs = PureState::zero("q").measure_projective("q", MeasureBasis::Z).unwrap();
        assert_eq!(outs[0].outcome, Outcome::Z(0));
        assert!((outs[0].probability - 1.0).abs() < 1e-15);
        assert_eq!(outs[1].probability, 0.0);
        assert!(outs[1].post_state.is_none());
    }

    #[test]
    fn x_measure_zero_is_even() {
        let outs = PureState::zero("q").measure_projective("q", MeasureBasis::X).unwrap();
        assert_eq!(outs[0].outcome, Outcome::X(Sign::Plus));
        for o in &outs {
            assert!((o.probability - 0.5).abs() < 1e-15);
        }
        let minus = outs[1].post_state.as_ref().unwrap();
        let expected = PureState::qubit("q", c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)).unwrap();
        assert!(minus.phase_distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn bell_measure_of_00() {
        let s = PureState::basis(["a", "b"], 0).unwrap();
        let outs = s.bell_measure("a", "b").unwrap();
        let probs: Vec<f64> = outs.iter().map(|o| o.probability).collect();
        assert!((probs[0] - 0.5).abs() < 1e-15 && (probs[1] - 0.5).abs() < 1e-15);
        assert!(probs[2] < 1e-30 && probs[3] < 1e-30);
        assert!((total(&outs) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_measure_label_errors() {
        let s = PureState::basis(["a", "b"], 0).unwrap();
        assert!(s.bell_measure("a", "a").is_err());
        assert!(s.bell_measure("a", "x").is_err());
    }

    #[test]
    fn computational_povm_is_z_measurement() {
        let p0 = PovmElement::weighted_projector([c(1.0), c(0.0)], 1.0).unwrap();
        let p1 = PovmElement::weighted_projector([c(0.0), c(1.0)], 1.0).unwrap();
        let s = PureState::qubit("q", c(0.6), c(0.8)).unwrap();
        let povm = s.povm_measure("q", &[p0, p1]).unwrap();
        let z = s.measure_projective("q", MeasureBasis::Z).unwrap();
        for (p, q) in povm.iter().zip(&z) {
            assert!((p.probability - q.probability).abs() < 1e-15);
            let (ps, qs) = (p.post_state.as_ref().unwrap(), q.post_state.as_ref().unwrap());
            assert!(ps.phase_distance(qs).unwrap() < 1e-15);
        }
    }

    #[test]
    fn incomplete_povm_rejected() {
        let p0 = PovmElement::weighted_projector([c(1.0), c(0.0)], 1.0).unwrap();
        let err = PureState::zero("q").povm_measure("q", &[p0]).unwrap_err();
        assert!(matches!(err, StateError::IncompletePovm { deviation } if (deviation - 1.0).abs() < 1e-15));
    }

    #[test]
    fn non_psd_element_names_eigenvalue() {
        let err = PovmElement::new([c(1.0), c(0.0), c(0.0), c(-0.25)]).unwrap_err();
        assert_eq!(err, StateError::NotPositive { eigenvalue: -0.25 });
        let err = PovmElement::new([c(1.0), c(0.3), c(0.0), c(0.0)]).unwrap_err();
        assert!(matches!(err, StateError::NotHermitian { .. }));
    }

    #[test]
    fn bell_outcome_parsing() {
        for b in BellOutcome::ALL {
            assert_eq!(b.as_str().parse::<BellOutcome>().unwrap(), b);
            assert_eq!(b.symbol().parse::<BellOutcome>().unwrap(), b);
        }
        assert!("bogus".parse::<BellOutcome>().is_err());
    }
}
