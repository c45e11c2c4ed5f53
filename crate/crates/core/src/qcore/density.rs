use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{max_abs_diff, Amplitude, BellOutcome, PureState, Result, StateError, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixBasis {
    Computational,
    /// Rows and columns ordered φ+, φ-, ψ+, ψ-. Two-qubit matrices only.
    Bell,
}

/// Density matrix over a labeled register. Only ever produced from pure
/// states by partial trace or by mixing such results; never evolved.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<String>,
    dim: usize,
    entries: Vec<Amplitude>,
    basis: MatrixBasis,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian, unit trace, positive semidefinite.
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        entries: Vec<Amplitude>,
        basis: MatrixBasis,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let dim = 1usize << labels.len();
        if entries.len() != dim * dim {
            return Err(StateError::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if basis == MatrixBasis::Bell && labels.len() != 2 {
            return Err(StateError::BellBasisArity(labels.len()));
        }
        let m = Self {
            labels,
            dim,
            entries,
            basis,
        };
        let deviation = m.hermiticity_deviation();
        if !(deviation <= EPS) {
            return Err(StateError::NotHermitian { deviation });
        }
        let trace = m.trace();
        if (trace - 1.0).abs() > EPS {
            return Err(StateError::BadTrace(trace));
        }
        let lowest = m.eigenvalues()[0];
        if lowest < -EPS {
            return Err(StateError::NotPositive { eigenvalue: lowest });
        }
        Ok(m)
    }

    pub fn from_pure(state: &PureState) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let entries = (0..dim * dim)
            .map(|i| a[i / dim] * a[i % dim].conj())
            .collect();
        Self {
            labels: state.labels().to_vec(),
            dim,
            entries,
            basis: MatrixBasis::Computational,
        }
    }

    /// `Σ w_k ρ_k` over matrices sharing labels and basis. Weights must sum to 1.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(StateError::EmptySelection)?;
        let mut entries = vec![Amplitude::new(0.0, 0.0); first.entries.len()];
        for (w, m) in parts {
            if m.labels != first.labels || m.basis != first.basis {
                return Err(StateError::DimensionMismatch {
                    expected: first.dim,
                    actual: m.dim,
                });
            }
            for (e, x) in entries.iter_mut().zip(&m.entries) {
                *e += x * *w;
            }
        }
        Self::new(first.labels.clone(), entries, first.basis)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> MatrixBasis {
        self.basis
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.entry(i, i).re).collect()
    }

    pub fn max_off_diagonal(&self) -> f64 {
        (0..self.dim * self.dim)
            .filter(|i| i / self.dim != i % self.dim)
            .map(|i| self.entries[i].norm())
            .fold(0.0, f64::max)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.entries);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn max_distance(&self, other: &DensityMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        max_abs_diff(&self.entries, &other.entries)
    }

    fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim;
        (0..d * d)
            .map(|i| (self.entries[i] - self.entries[(i % d) * d + i / d].conj()).norm())
            .fold(0.0, |acc, x| if x.is_nan() { f64::NAN } else { acc.max(x) })
    }

    /// Re-expresses the matrix in `basis`.
    pub fn to_basis(&self, basis: MatrixBasis) -> Result<DensityMatrix> {
        if basis == self.basis {
            return Ok(self.clone());
        }
        if self.dim != 4 {
            return Err(StateError::BellBasisArity(self.labels.len()));
        }
        // Column j of `b` is the j-th Bell vector in the computational basis (real).
        let b: Vec<[Amplitude; 4]> = BellOutcome::ALL.iter().map(|o| o.amplitudes()).collect();
        let cob = |i: usize, j: usize| b[j][i];
        let entries = (0..16)
            .map(|idx| {
                let (r, c) = (idx / 4, idx % 4);
                let mut acc = Amplitude::new(0.0, 0.0);
                for k in 0..4 {
                    for l in 0..4 {
                        acc += match basis {
                            // B† ρ B
                            MatrixBasis::Bell => cob(k, r).conj() * self.entry(k, l) * cob(l, c),
                            // B ρ B†
                            MatrixBasis::Computational => cob(r, k) * self.entry(k, l) * cob(c, l).conj(),
                        };
                    }
                }
                acc
            })
            .collect();
        Ok(DensityMatrix {
            labels: self.labels.clone(),
            dim: 4,
            entries,
            basis,
        })
    }
}

impl PureState {
    /// Partial trace over every qubit not in `keep`. Rows follow `keep` order.
    pub fn reduced_density_matrix(&self, keep: &[&str], basis: MatrixBasis) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(StateError::EmptySelection);
        }
        if basis == MatrixBasis::Bell && keep.len() != 2 {
            return Err(StateError::BellBasisArity(keep.len()));
        }
        let keep_pos = self.positions(keep)?;
        let (split, rest) = self.split_indices(&keep_pos);
        let dk = 1usize << keep_pos.len();
        let dr = 1usize << rest.len();
        let mut columns = vec![Amplitude::new(0.0, 0.0); dk * dr];
        for (i, &(k, r)) in split.iter().enumerate() {
            columns[r * dk + k] = self.amplitudes()[i];
        }
        let mut entries = vec![Amplitude::new(0.0, 0.0); dk * dk];
        for col in columns.chunks(dk) {
            for i in 0..dk {
                if col[i].norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dk {
                    entries[i * dk + j] += col[i] * col[j].conj();
                }
            }
        }
        let m = DensityMatrix {
            labels: keep.iter().map(|s| s.to_string()).collect(),
            dim: dk,
            entries,
            basis: MatrixBasis::Computational,
        };
        m.to_basis(basis)
    }
}

/// Overlap of a state with a pure reference, `|⟨ref|ψ⟩|²` or `⟨ref|ρ|ref⟩`.
pub trait Fidelity {
    fn fidelity(&self, reference: &PureState) -> Result<f64>;
}

impl Fidelity for PureState {
    fn fidelity(&self, reference: &PureState) -> Result<f64> {
        Ok(reference.inner(self)?.norm_sqr().clamp(0.0, 1.0))
    }
}

impl Fidelity for DensityMatrix {
    /// The reference is matched positionally against the matrix rows.
    fn fidelity(&self, reference: &PureState) -> Result<f64> {
        if reference.dim() != self.dim {
            return Err(StateError::DimensionMismatch {
                expected: self.dim,
                actual: reference.dim(),
            });
        }
        let rho = self.to_basis(MatrixBasis::Computational)?;
        let r = reference.amplitudes();
        let mut acc = Amplitude::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += r[i].conj() * rho.entry(i, j) * r[j];
            }
        }
        Ok(acc.re.clamp(0.0, 1.0))
    }
}

pub fn fidelity<S: Fidelity + ?Sized>(state: &S, reference: &PureState) -> Result<f64> {
    state.fidelity(reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    fn bell_phi_plus() -> PureState {
        PureState::new(["a", "b"], vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]).unwrap()
    }

    #[test]
    fn reduce_product_state() {
        let s = PureState::basis(["a", "b"], 0).unwrap();
        let r = s.reduced_density_matrix(&["a"], MatrixBasis::Computational).unwrap();
        assert_eq!(r.entries(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn reduce_bell_state_is_maximally_mixed() {
        let r = bell_phi_plus()
            .reduced_density_matrix(&["b"], MatrixBasis::Computational)
            .unwrap();
        assert!(max_abs_diff(r.entries(), &[c(0.5), c(0.0), c(0.0), c(0.5)]) < 1e-15);
    }

    #[test]
    fn bell_basis_of_bell_state_is_diagonal() {
        let r = bell_phi_plus()
            .reduced_density_matrix(&["a", "b"], MatrixBasis::Bell)
            .unwrap();
        assert!((r.entry(0, 0).re - 1.0).abs() < 1e-15);
        assert!(r.max_off_diagonal() < 1e-15);
        let back = r.to_basis(MatrixBasis::Computational).unwrap();
        assert!(back.max_distance(&DensityMatrix::from_pure(&bell_phi_plus())) < 1e-15);
    }

    #[test]
    fn selection_errors() {
        let s = PureState::basis(["a", "b", "c"], 0).unwrap();
        assert_eq!(
            s.reduced_density_matrix(&[], MatrixBasis::Computational).unwrap_err(),
            StateError::EmptySelection
        );
        assert_eq!(
            s.reduced_density_matrix(&["a"], MatrixBasis::Bell).unwrap_err(),
            StateError::BellBasisArity(1)
        );
    }

    #[test]
    fn fidelity_basics() {
        let zeta = PureState::qubit("q", c(0.6), Amplitude::new(0.0, 0.8)).unwrap();
        assert!((fidelity(&zeta, &zeta).unwrap() - 1.0).abs() < 1e-15);
        let one = PureState::basis(["q"], 1).unwrap();
        assert_eq!(fidelity(&PureState::zero("q"), &one).unwrap(), 0.0);
        let ph = Amplitude::from_polar(1.0, 2.5);
        let rotated = PureState::qubit("q", c(0.6) * ph, Amplitude::new(0.0, 0.8) * ph).unwrap();
        assert!((fidelity(&rotated, &zeta).unwrap() - 1.0).abs() < 1e-15);
        let rho = DensityMatrix::from_pure(&rotated);
        assert!((fidelity(&rho, &zeta).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let rho = DensityMatrix::from_pure(&bell_phi_plus());
        assert!(fidelity(&rho, &PureState::zero("q")).is_err());
        assert!(fidelity(&bell_phi_plus(), &PureState::zero("q")).is_err());
    }

    #[test]
    fn validated_constructor() {
        assert!(matches!(
            DensityMatrix::new(["q"], vec![c(1.0), c(0.0), c(0.0), c(1.0)], MatrixBasis::Computational),
            Err(StateError::BadTrace(_))
        ));
        assert!(matches!(
            DensityMatrix::new(["q"], vec![c(1.5), c(0.0), c(0.0), c(-0.5)], MatrixBasis::Computational),
            Err(StateError::NotPositive { .. })
        ));
        assert!(DensityMatrix::new(["q"], vec![c(0.5), c(0.0), c(0.0), c(0.5)], MatrixBasis::Computational).is_ok());
    }

    #[test]
    fn mixture_of_pure_states() {
        let zero = DensityMatrix::from_pure(&PureState::zero("q"));
        let one = DensityMatrix::from_pure(&PureState::basis(["q"], 1).unwrap());
        let m = DensityMatrix::mixture(&[(0.25, zero), (0.75, one)]).unwrap();
        assert_eq!(m.diagonal(), vec![0.25, 0.75]);
        assert!((m.purity() - 0.625).abs() < 1e-15);
    }
}
