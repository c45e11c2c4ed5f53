use std::f64::consts::FRAC_1_SQRT_2;

use super::{Amplitude, Result, StateError, EPS};

/// Unitary acting on `k` qubits, stored row-major as `2^k x 2^k` entries.
///
/// Unitarity is checked on construction: `max |U†U - I| <= 1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    name: String,
    dim: usize,
    entries: Vec<Amplitude>,
}

fn c(re: f64) -> Amplitude {
    Amplitude::new(re, 0.0)
}

impl GateMatrix {
    pub fn new(name: impl Into<String>, entries: Vec<Amplitude>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() || !dim.is_power_of_two() || dim < 2 {
            return Err(StateError::BadMatrixDimension(entries.len()));
        }
        let gate = Self {
            name: name.into(),
            dim,
            entries,
        };
        let deviation = gate.unitarity_deviation();
        if deviation.is_nan() || deviation > EPS {
            return Err(StateError::NotUnitary { deviation });
        }
        Ok(gate)
    }

    /// Builds from real rows.
    pub fn from_real_rows(name: impl Into<String>, rows: &[&[f64]]) -> Result<Self> {
        Self::new(name, rows.iter().flat_map(|r| r.iter().map(|&x| c(x))).collect())
    }

    pub fn identity(qubits: usize) -> Self {
        let dim = 1 << qubits;
        let entries = (0..dim * dim)
            .map(|i| if i / dim == i % dim { c(1.0) } else { c(0.0) })
            .collect();
        Self {
            name: "I".into(),
            dim,
            entries,
        }
    }

    pub fn pauli_x() -> Self {
        Self::fixed("X", vec![c(0.0), c(1.0), c(1.0), c(0.0)])
    }

    pub fn pauli_y() -> Self {
        let i = Amplitude::new(0.0, 1.0);
        Self::fixed("Y", vec![c(0.0), -i, i, c(0.0)])
    }

    pub fn pauli_z() -> Self {
        Self::fixed("Z", vec![c(1.0), c(0.0), c(0.0), c(-1.0)])
    }

    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::fixed("H", vec![c(h), c(h), c(h), c(-h)])
    }

    /// Controlled-NOT with the control as the first target.
    pub fn cnot() -> Self {
        Self::controlled(&Self::pauli_x()).renamed("CNOT")
    }

    /// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U`; the control is the first target.
    pub fn controlled(u: &GateMatrix) -> Self {
        let d = u.dim;
        let dim = 2 * d;
        let mut entries = vec![c(0.0); dim * dim];
        for i in 0..d {
            entries[i * dim + i] = c(1.0);
            for j in 0..d {
                entries[(d + i) * dim + d + j] = u.entries[i * d + j];
            }
        }
        Self {
            name: format!("C-{}", u.name),
            dim,
            entries,
        }
    }

    // Entries known to be unitary.
    fn fixed(name: &str, entries: Vec<Amplitude>) -> Self {
        Self {
            name: name.into(),
            dim: (entries.len() as f64).sqrt() as usize,
            entries,
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the gate acts on.
    pub fn arity(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> GateMatrix {
        let d = self.dim;
        let entries = (0..d * d)
            .map(|i| self.entries[(i % d) * d + i / d].conj())
            .collect();
        Self {
            name: format!("{}†", self.name),
            dim: d,
            entries,
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &GateMatrix) -> Result<GateMatrix> {
        if self.dim != other.dim {
            return Err(StateError::BadMatrixDimension(other.dim * other.dim));
        }
        let d = self.dim;
        let entries = (0..d * d)
            .map(|i| {
                let (r, col) = (i / d, i % d);
                (0..d).map(|k| self.entries[r * d + k] * other.entries[k * d + col]).sum()
            })
            .collect();
        Ok(Self {
            name: format!("{}·{}", self.name, other.name),
            dim: d,
            entries,
        })
    }

    /// `max |U†U - I|` over all entries.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for col in 0..d {
                let s: Amplitude = (0..d)
                    .map(|k| self.entries[k * d + r].conj() * self.entries[k * d + col])
                    .sum();
                let target = if r == col { 1.0 } else { 0.0 };
                let dev = (s - target).norm();
                if dev.is_nan() {
                    return f64::NAN;
                }
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Largest entrywise distance to another matrix of equal size.
    pub fn max_distance(&self, other: &GateMatrix) -> f64 {
        super::max_abs_diff(&self.entries, &other.entries)
    }
}
