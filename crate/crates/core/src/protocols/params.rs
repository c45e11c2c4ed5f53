use crate::error::{Error, Result};
use crate::qcore::{Amplitude, PureState, EPS};

use super::labels::{Q1, Q2, Q3, Q4};

/// The qubit `a|0⟩ + b|1⟩` Alice wants to send.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    a: Amplitude,
    b: Amplitude,
}

impl InputState {
    pub fn new(a: Amplitude, b: Amplitude) -> Result<Self> {
        for (name, x) in [("a", a), ("b", b)] {
            if !x.re.is_finite() || !x.im.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > EPS {
            return Err(Error::InputNotNormalized(norm));
        }
        Ok(Self { a, b })
    }

    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::new(Amplitude::new(a, 0.0), Amplitude::new(b, 0.0))
    }

    /// Reads a single-qubit register back as an input state.
    pub fn from_qubit(state: &PureState) -> Result<Self> {
        match state.amplitudes() {
            [a, b] => Self::new(*a, *b),
            amps => Err(Error::InvalidArgument(format!(
                "expected a single qubit, got {} amplitudes",
                amps.len()
            ))),
        }
    }

    pub fn a(&self) -> Amplitude {
        self.a
    }

    pub fn b(&self) -> Amplitude {
        self.b
    }

    pub fn to_state(&self, label: &str) -> PureState {
        PureState::qubit(label, self.a, self.b).expect("normalized by construction")
    }
}

/// Coefficients of the cluster channel
/// `α|0000⟩ + β|1010⟩ + γ|0101⟩ - η|1111⟩` on qubits 1..4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    alpha: Amplitude,
    beta: Amplitude,
    gamma: Amplitude,
    eta: Amplitude,
}

fn same_phase(x: Amplitude, y: Amplitude) -> bool {
    if x.norm() <= EPS || y.norm() <= EPS {
        return true;
    }
    let z = x * y.conj();
    z.re > 0.0 && z.im.abs() <= 1e-10 * z.norm()
}

impl ChannelParams {
    pub fn new(alpha: Amplitude, beta: Amplitude, gamma: Amplitude, eta: Amplitude) -> Result<Self> {
        for (name, x) in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("eta", eta)] {
            if !x.re.is_finite() || !x.im.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        let p = Self {
            alpha,
            beta,
            gamma,
            eta,
        };
        let norm = p.norm_sqr();
        if (norm - 1.0).abs() > EPS {
            return Err(Error::ChannelNotNormalized(norm));
        }
        Ok(p)
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64, eta: f64) -> Result<Self> {
        let c = |x| Amplitude::new(x, 0.0);
        Self::new(c(alpha), c(beta), c(gamma), c(eta))
    }

    /// α = β = γ = η = 1/2, the maximally entangled case.
    pub fn uniform() -> Self {
        let h = Amplitude::new(0.5, 0.0);
        Self {
            alpha: h,
            beta: h,
            gamma: h,
            eta: h,
        }
    }

    pub fn alpha(&self) -> Amplitude {
        self.alpha
    }

    pub fn beta(&self) -> Amplitude {
        self.beta
    }

    pub fn gamma(&self) -> Amplitude {
        self.gamma
    }

    pub fn eta(&self) -> Amplitude {
        self.eta
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr() + self.gamma.norm_sqr() + self.eta.norm_sqr()
    }

    /// arg α = arg η and arg β = arg γ (a zero coefficient matches any phase).
    pub fn phase_aligned(&self) -> bool {
        same_phase(self.alpha, self.eta) && same_phase(self.beta, self.gamma)
    }

    /// |α| ≤ |η| and |β| ≤ |γ|.
    pub fn magnitude_ordered(&self) -> bool {
        self.alpha.norm() <= self.eta.norm() + EPS && self.beta.norm() <= self.gamma.norm() + EPS
    }

    /// Preconditions of the information-preserving protocol.
    pub fn check_proposed(&self) -> Result<()> {
        if !self.phase_aligned() {
            return Err(Error::Assumption(
                "α and β must share their phases with η and γ".into(),
            ));
        }
        if !self.magnitude_ordered() {
            return Err(Error::Assumption(format!(
                "need |α| ≤ |η| and |β| ≤ |γ|, got |α|={:.6}, |η|={:.6}, |β|={:.6}, |γ|={:.6}",
                self.alpha.norm(),
                self.eta.norm(),
                self.beta.norm(),
                self.gamma.norm()
            )));
        }
        Ok(())
    }

    /// Preconditions of the POVM-based protocol: every δ₀/δ₁ ratio must be real.
    pub fn check_ramirez(&self) -> Result<()> {
        if !self.phase_aligned() {
            return Err(Error::Assumption(
                "POVM correction needs arg α = arg η and arg β = arg γ".into(),
            ));
        }
        Ok(())
    }
}

/// The four-qubit channel state on labels `Q1..Q4`.
pub fn make_cluster_channel(p: &ChannelParams) -> PureState {
    let mut amps = vec![Amplitude::new(0.0, 0.0); 16];
    amps[0b0000] = p.alpha;
    amps[0b1010] = p.beta;
    amps[0b0101] = p.gamma;
    amps[0b1111] = -p.eta;
    PureState::new([Q1, Q2, Q3, Q4], amps).expect("normalized by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    #[test]
    fn channel_basis_case() {
        let s = make_cluster_channel(&ChannelParams::real(1.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!(s, PureState::basis([Q1, Q2, Q3, Q4], 0).unwrap());
    }

    #[test]
    fn uniform_channel_amplitudes() {
        let s = make_cluster_channel(&ChannelParams::uniform());
        let a = s.amplitudes();
        for (i, amp) in a.iter().enumerate() {
            let expected = match i {
                0b0000 | 0b1010 | 0b0101 => 0.5,
                0b1111 => -0.5,
                _ => 0.0,
            };
            assert_eq!(*amp, c(expected), "index {i:04b}");
        }
    }

    #[test]
    fn last_amplitude_is_minus_eta() {
        let eta = Amplitude::from_polar(0.5, 0.7);
        let p = ChannelParams::new(c(0.3), c(0.4), Amplitude::new(0.5f64.sqrt(), 0.0), eta).unwrap();
        assert_eq!(make_cluster_channel(&p).amplitudes()[15], -eta);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            ChannelParams::real(0.5, 0.5, 0.5, 0.6),
            Err(Error::ChannelNotNormalized(_))
        ));
        assert!(matches!(InputState::real(0.6, 0.7), Err(Error::InputNotNormalized(_))));
        assert!(matches!(InputState::real(f64::NAN, 0.0), Err(Error::NonFinite("a"))));
    }

    #[test]
    fn assumption_flags() {
        let ok = ChannelParams::real(0.3, 0.4, 0.5f64.sqrt(), 0.5).unwrap();
        assert!(ok.phase_aligned() && ok.magnitude_ordered());
        assert!(ok.check_proposed().is_ok());

        let swapped = ChannelParams::real(0.5, 0.4, 0.5f64.sqrt(), 0.3).unwrap();
        assert!(!swapped.magnitude_ordered());
        assert!(matches!(swapped.check_proposed(), Err(Error::Assumption(_))));

        let i = Amplitude::new(0.0, 1.0);
        let dephased = ChannelParams::new(c(0.3), c(0.4), c(0.5f64.sqrt()), i * 0.5).unwrap();
        assert!(!dephased.phase_aligned());
        assert!(dephased.check_proposed().is_err());

        let common = Amplitude::from_polar(1.0, 0.4);
        let rotated = ChannelParams::new(common * 0.3, c(0.4), c(0.5f64.sqrt()), common * 0.5).unwrap();
        assert!(rotated.phase_aligned());

        let opposite = ChannelParams::real(-0.3, 0.4, 0.5f64.sqrt(), 0.5).unwrap();
        assert!(!opposite.phase_aligned());
    }
}
