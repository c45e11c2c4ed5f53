use crate::error::{Error, Result};
use crate::qcore::{Amplitude, PovmElement, EPS};

/// Unambiguous-discrimination POVM on the auxiliary qubit:
/// `Λ₁ = |M₁⟩⟨M₁|/ρ`, `Λ₂ = |M₂⟩⟨M₂|/ρ`, `Λ₃ = I - Λ₁ - Λ₂` with
/// `M₁,₂ ∝ |0⟩/δ₀ ± |1⟩/δ₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmConfig {
    pub delta0: f64,
    pub delta1: f64,
    /// `1/δ₀² + 1/δ₁²`.
    pub varsigma: f64,
    pub rho: f64,
    /// Smallest ρ for which Λ₃ is positive semidefinite.
    pub rho_min: f64,
    pub m1: [Amplitude; 2],
    pub m2: [Amplitude; 2],
    pub elements: [PovmElement; 3],
}

fn check_delta(name: &str, d: f64) -> Result<()> {
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::InvalidArgument(format!("{name} must be positive, got {d}")));
    }
    Ok(())
}

/// `(2/ς)·max(1/δ₀², 1/δ₁²)`: the largest eigenvalue of `Λ₁ + Λ₂` is `2/(ρς)·max(..)`.
pub fn rho_min(delta0: f64, delta1: f64) -> Result<f64> {
    check_delta("delta0", delta0)?;
    check_delta("delta1", delta1)?;
    let (i0, i1) = (delta0.powi(-2), delta1.powi(-2));
    Ok(2.0 * i0.max(i1) / (i0 + i1))
}

/// Default ρ when none is given: `max(2, ρ_min)`.
pub fn default_rho(delta0: f64, delta1: f64) -> Result<f64> {
    Ok(rho_min(delta0, delta1)?.max(2.0))
}

pub fn make_povm(delta0: f64, delta1: f64, rho: f64) -> Result<PovmConfig> {
    let rho_min = rho_min(delta0, delta1)?;
    if !rho.is_finite() || rho <= 0.0 {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    if rho < rho_min - EPS {
        return Err(Error::PovmNotPsd { rho, rho_min });
    }
    let varsigma = delta0.powi(-2) + delta1.powi(-2);
    let scale = varsigma.sqrt().recip();
    let c = |x: f64| Amplitude::new(x, 0.0);
    let m1 = [c(scale / delta0), c(scale / delta1)];
    let m2 = [c(scale / delta0), c(-scale / delta1)];
    let l1 = PovmElement::weighted_projector(m1, 1.0 / rho)?;
    let l2 = PovmElement::weighted_projector(m2, 1.0 / rho)?;
    let one = c(1.0);
    let rest: Vec<Amplitude> = l1
        .entries()
        .iter()
        .zip(l2.entries())
        .enumerate()
        .map(|(i, (x, y))| if i == 0 || i == 3 { one - x - y } else { -x - y })
        .collect();
    let l3 = PovmElement::new([rest[0], rest[1], rest[2], rest[3]]).map_err(|_| Error::PovmNotPsd { rho, rho_min })?;
    Ok(PovmConfig {
        delta0,
        delta1,
        varsigma,
        rho,
        rho_min,
        m1,
        m2,
        elements: [l1, l2, l3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::PureState;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn balanced_deltas() {
        let cfg = make_povm(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 2.0).unwrap();
        assert!((cfg.varsigma - 4.0).abs() < 1e-12);
        assert!((cfg.m1[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((cfg.m1[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((cfg.m2[1].re + FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((cfg.rho_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbalanced_deltas() {
        let cfg = make_povm(0.6, 0.8, 2.0).unwrap();
        assert!((cfg.varsigma - (1.0 / 0.36 + 1.0 / 0.64)).abs() < 1e-12);
        assert!((cfg.m1[0].re - 0.8).abs() < 1e-12);
        assert!((cfg.m1[1].re - 0.6).abs() < 1e-12);
        assert!((cfg.rho_min - 1.28).abs() < 1e-12);
    }

    #[test]
    fn rho_below_bound_is_rejected() {
        let err = make_povm(0.6, 0.8, 1.2).unwrap_err();
        assert!(matches!(err, Error::PovmNotPsd { rho, rho_min } if rho == 1.2 && (rho_min - 1.28).abs() < 1e-12));
        assert!(err.to_string().starts_with("Λ₃ not positive semidefinite"));
        // 1 ≤ ρ ≤ 2 is not enough for unbalanced δ's.
        assert!(make_povm(0.3, 0.5, 1.0).is_err());
    }

    #[test]
    fn boundary_rho_is_accepted() {
        let rmin = rho_min(0.3, 0.5).unwrap();
        let cfg = make_povm(0.3, 0.5, rmin).unwrap();
        assert!(cfg.elements[2].eigenvalues()[0].abs() < 1e-12);
    }

    #[test]
    fn elements_complete_and_vectors_unit() {
        for (d0, d1, rho) in [(0.3, 0.5, 2.0), (0.9, 0.1, 5.0), (0.5, 0.5, 1.0)] {
            let cfg = make_povm(d0, d1, rho).unwrap();
            let s = PureState::zero("e");
            let outs = s.povm_measure("e", &cfg.elements).unwrap();
            assert!((outs.iter().map(|o| o.probability).sum::<f64>() - 1.0).abs() < 1e-12);
            for m in [cfg.m1, cfg.m2] {
                assert!((m[0].norm_sqr() + m[1].norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_deltas() {
        assert!(matches!(make_povm(0.0, 0.5, 2.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(make_povm(0.5, -0.1, 2.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(make_povm(0.5, 0.5, f64::NAN), Err(Error::InvalidArgument(_))));
    }
}
