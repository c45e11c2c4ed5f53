//! Dense state-vector engine for a handful of labeled qubits.
//!
//! Basis indices put `labels[0]` in the most significant bit, so kets read
//! left to right in label order. States are always stored normalized; the
//! weight of a measurement branch travels in [`MeasurementOutcome`], never in
//! the amplitudes.
//!
//! All values are immutable once built. Every operation returns a new value.

mod density;
mod gate;
mod measure;
mod state;

pub use density::{fidelity, DensityMatrix, Fidelity, MatrixBasis};
pub use gate::GateMatrix;
pub use measure::{
    BellOutcome, MeasureBasis, MeasurementOutcome, Outcome, PovmElement, Sign,
};
pub use state::PureState;

use num_complex::Complex64;
use thiserror::Error;

/// Complex amplitude (re, im) in double precision.
pub type Amplitude = Complex64;

/// Tolerance for deterministic linear algebra (norms, unitarity, Hermiticity).
pub const EPS: f64 = 1e-12;

/// Tolerance for accumulated sums (POVM completeness).
pub const SUM_EPS: f64 = 1e-10;

/// Branches whose probability falls at or below this are treated as impossible
/// and carry no post-measurement state.
pub const ZERO_PROB: f64 = 1e-24;

/// Hard cap on register width; the engine is dense and meant for desk scale.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),
    #[error("expected {expected} amplitudes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),
    #[error("register of {0} qubits exceeds the supported maximum")]
    TooManyQubits(usize),
    #[error("gate acts on {gate} qubits but {targets} targets were given")]
    ArityMismatch { gate: usize, targets: usize },
    #[error("matrix dimension {0} is not a power of two")]
    BadMatrixDimension(usize),
    #[error("matrix is not unitary: max |U†U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not Hermitian: max |M - M†| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("operator is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },
    #[error("POVM elements do not sum to identity: max deviation {deviation:e}")]
    IncompletePovm { deviation: f64 },
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("empty qubit selection")]
    EmptySelection,
    #[error("Bell basis needs exactly 2 qubits, got {0}")]
    BellBasisArity(usize),
    #[error("qubits {labels:?} are entangled with the rest of the register (residual {residual:e})")]
    Entangled { labels: Vec<String>, residual: f64 },
}

pub type Result<T> = std::result::Result<T, StateError>;

/// Maximum absolute entry of `a - b`.
pub(crate) fn max_abs_diff(a: &[Amplitude], b: &[Amplitude]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a 2x2 Hermitian matrix in ascending order.
pub(crate) fn hermitian2_eigenvalues(m: &[Amplitude; 4]) -> [f64; 2] {
    let a = m[0].re;
    let d = m[3].re;
    let half_gap = ((a - d) / 2.0).hypot(m[1].norm());
    let mid = (a + d) / 2.0;
    [mid - half_gap, mid + half_gap]
}

/// Principal square root of a 2x2 positive semidefinite Hermitian matrix.
///
/// Uses `sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M))`, which
/// follows from Cayley-Hamilton.
pub(crate) fn psd2_sqrt(m: &[Amplitude; 4]) -> [Amplitude; 4] {
    let det = (m[0] * m[3] - m[1] * m[2]).re.max(0.0);
    let s = det.sqrt();
    let t2 = m[0].re + m[3].re + 2.0 * s;
    if t2 <= 0.0 {
        return [Amplitude::new(0.0, 0.0); 4];
    }
    let t = t2.sqrt();
    [
        (m[0] + s) / t,
        m[1] / t,
        m[2] / t,
        (m[3] + s) / t,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    #[test]
    fn sqrt_of_projector_is_itself() {
        let p = [c(0.5), c(0.5), c(0.5), c(0.5)];
        let r = psd2_sqrt(&p);
        assert!(max_abs_diff(&r, &p) < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = [c(0.7), Amplitude::new(0.1, -0.2), Amplitude::new(0.1, 0.2), c(0.4)];
        let r = psd2_sqrt(&m);
        let sq = [
            r[0] * r[0] + r[1] * r[2],
            r[0] * r[1] + r[1] * r[3],
            r[2] * r[0] + r[3] * r[2],
            r[2] * r[1] + r[3] * r[3],
        ];
        assert!(max_abs_diff(&sq, &m) < 1e-14);
    }

    #[test]
    fn sqrt_of_zero() {
        let z = [c(0.0); 4];
        assert_eq!(psd2_sqrt(&z), z);
    }

    #[test]
    fn eigenvalues_of_pauli_x() {
        let x = [c(0.0), c(1.0), c(1.0), c(0.0)];
        let [lo, hi] = hermitian2_eigenvalues(&x);
        assert!((lo + 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }
}
