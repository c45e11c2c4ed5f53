use std::collections::HashSet;
use std::fmt;

use super::{max_abs_diff, Amplitude, GateMatrix, Result, StateError, EPS, MAX_QUBITS};

/// Labeled pure state of `n` qubits stored as `2^n` amplitudes.
///
/// `labels[0]` is the most significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    labels: Vec<String>,
    amps: Vec<Amplitude>,
}

fn collect_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Vec<String>> {
    let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
    let mut seen = HashSet::new();
    for l in &labels {
        if !seen.insert(l.as_str()) {
            return Err(StateError::DuplicateLabel(l.clone()));
        }
    }
    if labels.len() > MAX_QUBITS {
        return Err(StateError::TooManyQubits(labels.len()));
    }
    Ok(labels)
}

fn check_amps(n: usize, amps: &[Amplitude]) -> Result<f64> {
    let expected = 1usize << n;
    if amps.len() != expected {
        return Err(StateError::DimensionMismatch {
            expected,
            actual: amps.len(),
        });
    }
    if let Some(i) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(StateError::NonFinite(i));
    }
    Ok(amps.iter().map(|a| a.norm_sqr()).sum())
}

impl PureState {
    /// Builds a state from normalized amplitudes.
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        amps: Vec<Amplitude>,
    ) -> Result<Self> {
        let labels = collect_labels(labels)?;
        let norm_sqr = check_amps(labels.len(), &amps)?;
        if (norm_sqr - 1.0).abs() > EPS {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        Ok(Self { labels, amps })
    }

    /// Normalizes `amps` and returns the state with its original squared norm.
    pub fn from_unnormalized<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        amps: Vec<Amplitude>,
    ) -> Result<(Self, f64)> {
        let labels = collect_labels(labels)?;
        let norm_sqr = check_amps(labels.len(), &amps)?;
        if norm_sqr <= 0.0 {
            return Err(StateError::ZeroNorm);
        }
        let scale = norm_sqr.sqrt().recip();
        let amps = amps.into_iter().map(|a| a * scale).collect();
        Ok((Self { labels, amps }, norm_sqr))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis<S: Into<String>>(labels: impl IntoIterator<Item = S>, index: usize) -> Result<Self> {
        let labels = collect_labels(labels)?;
        let dim = 1usize << labels.len();
        if index >= dim {
            return Err(StateError::DimensionMismatch {
                expected: dim,
                actual: index + 1,
            });
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        amps[index] = Amplitude::new(1.0, 0.0);
        Ok(Self { labels, amps })
    }

    /// Single qubit `a|0⟩ + b|1⟩`.
    pub fn qubit(label: impl Into<String>, a: Amplitude, b: Amplitude) -> Result<Self> {
        Self::new([label.into()], vec![a, b])
    }

    /// Single qubit in `|0⟩`.
    pub fn zero(label: impl Into<String>) -> Self {
        Self {
            labels: vec![label.into()],
            amps: vec![Amplitude::new(1.0, 0.0), Amplitude::new(0.0, 0.0)],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| StateError::UnknownLabel(label.to_string()))
    }

    /// Bit shift of the qubit at `pos` inside a basis index.
    pub(crate) fn shift(&self, pos: usize) -> usize {
        self.num_qubits() - 1 - pos
    }

    pub(crate) fn positions(&self, targets: &[&str]) -> Result<Vec<usize>> {
        let mut seen = HashSet::new();
        targets
            .iter()
            .map(|t| {
                if !seen.insert(*t) {
                    return Err(StateError::DuplicateLabel(t.to_string()));
                }
                self.position(t)
            })
            .collect()
    }

    /// Amplitude of the basis state given as `(label, bit)` pairs covering every qubit.
    pub fn amplitude_of(&self, bits: &[(&str, u8)]) -> Result<Amplitude> {
        if bits.len() != self.num_qubits() {
            return Err(StateError::DimensionMismatch {
                expected: self.num_qubits(),
                actual: bits.len(),
            });
        }
        let mut index = 0;
        for (label, bit) in bits {
            let pos = self.position(label)?;
            if *bit != 0 {
                index |= 1 << self.shift(pos);
            }
        }
        Ok(self.amps[index])
    }

    /// `self ⊗ other`; labels of `other` follow those of `self`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let labels = collect_labels(self.labels.iter().chain(&other.labels).cloned())?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(PureState { labels, amps })
    }

    /// Applies `gate` to `targets`; `targets[0]` is the gate's most significant qubit.
    pub fn apply_gate(&self, gate: &GateMatrix, targets: &[&str]) -> Result<PureState> {
        if gate.arity() != targets.len() {
            return Err(StateError::ArityMismatch {
                gate: gate.arity(),
                targets: targets.len(),
            });
        }
        let amps = self.apply_operator(gate.entries(), targets)?;
        Ok(PureState {
            labels: self.labels.clone(),
            amps,
        })
    }

    /// Applies an arbitrary `2^k x 2^k` row-major matrix to `targets`. The
    /// result is not renormalized.
    pub(crate) fn apply_operator(&self, matrix: &[Amplitude], targets: &[&str]) -> Result<Vec<Amplitude>> {
        let positions = self.positions(targets)?;
        let k = positions.len();
        let m = 1usize << k;
        if matrix.len() != m * m {
            return Err(StateError::ArityMismatch {
                gate: matrix.len().trailing_zeros() as usize / 2,
                targets: k,
            });
        }
        let shifts: Vec<usize> = positions.iter().map(|&p| self.shift(p)).collect();
        let mask = shifts.iter().fold(0usize, |acc, s| acc | (1 << s));
        let offsets: Vec<usize> = (0..m)
            .map(|sub| {
                (0..k).fold(0usize, |acc, j| {
                    if (sub >> (k - 1 - j)) & 1 == 1 {
                        acc | (1 << shifts[j])
                    } else {
                        acc
                    }
                })
            })
            .collect();

        let mut out = vec![Amplitude::new(0.0, 0.0); self.dim()];
        for base in (0..self.dim()).filter(|i| i & mask == 0) {
            for r in 0..m {
                let row = &matrix[r * m..(r + 1) * m];
                out[base | offsets[r]] = row
                    .iter()
                    .zip(&offsets)
                    .map(|(g, off)| g * self.amps[base | off])
                    .sum();
            }
        }
        Ok(out)
    }

    /// Same state with qubits stored in `order` (a permutation of the labels).
    pub fn permuted(&self, order: &[&str]) -> Result<PureState> {
        if order.len() != self.num_qubits() {
            return Err(StateError::DimensionMismatch {
                expected: self.num_qubits(),
                actual: order.len(),
            });
        }
        let old_shift: Vec<usize> = self
            .positions(order)?
            .into_iter()
            .map(|p| self.shift(p))
            .collect();
        let n = order.len();
        let amps = (0..self.dim())
            .map(|new_idx| {
                let old_idx = (0..n).fold(0usize, |acc, j| {
                    if (new_idx >> (n - 1 - j)) & 1 == 1 {
                        acc | (1 << old_shift[j])
                    } else {
                        acc
                    }
                });
                self.amps[old_idx]
            })
            .collect();
        Ok(PureState {
            labels: order.iter().map(|s| s.to_string()).collect(),
            amps,
        })
    }

    /// Splits every basis index into (index over `keep`, index over the rest).
    pub(crate) fn split_indices(&self, keep: &[usize]) -> (Vec<(usize, usize)>, Vec<usize>) {
        let n = self.num_qubits();
        let rest: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
        let gather = |idx: usize, group: &[usize]| {
            group
                .iter()
                .fold(0usize, |acc, &p| (acc << 1) | ((idx >> (n - 1 - p)) & 1))
        };
        let split = (0..self.dim())
            .map(|i| (gather(i, keep), gather(i, &rest)))
            .collect();
        (split, rest)
    }

    /// `⟨self|other⟩`. Registers with the same label set are aligned by label;
    /// otherwise the comparison is positional and only the dimension must agree.
    pub fn inner(&self, other: &PureState) -> Result<Amplitude> {
        let aligned;
        let other = if self.labels != other.labels && self.same_label_set(other) {
            let order: Vec<&str> = self.labels.iter().map(String::as_str).collect();
            aligned = other.permuted(&order)?;
            &aligned
        } else {
            other
        };
        if self.dim() != other.dim() {
            return Err(StateError::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    fn same_label_set(&self, other: &PureState) -> bool {
        self.labels.len() == other.labels.len()
            && self.labels.iter().all(|l| other.labels.contains(l))
    }

    /// Largest amplitude deviation after removing the relative global phase.
    pub fn phase_distance(&self, other: &PureState) -> Result<f64> {
        let overlap = self.inner(other)?;
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Amplitude::new(1.0, 0.0)
        };
        let order: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        let other = if self.same_label_set(other) {
            other.permuted(&order)?
        } else {
            other.clone()
        };
        let rotated: Vec<Amplitude> = self.amps.iter().map(|a| a * phase).collect();
        Ok(max_abs_diff(&rotated, &other.amps))
    }

    /// Factors the register into `keep ⊗ rest` when the kept qubits are
    /// unentangled with the others.
    pub fn factor(&self, keep: &[&str]) -> Result<(PureState, PureState)> {
        if keep.is_empty() {
            return Err(StateError::EmptySelection);
        }
        let keep_pos = self.positions(keep)?;
        let (split, rest_pos) = self.split_indices(&keep_pos);
        let dk = 1usize << keep_pos.len();
        let dr = 1usize << rest_pos.len();
        let mut psi = vec![Amplitude::new(0.0, 0.0); dk * dr];
        for (i, &(k, r)) in split.iter().enumerate() {
            psi[k * dr + r] = self.amps[i];
        }
        let column_weight = |r: usize| (0..dk).map(|k| psi[k * dr + r].norm_sqr()).sum::<f64>();
        let best = (0..dr)
            .max_by(|&x, &y| column_weight(x).total_cmp(&column_weight(y)))
            .unwrap_or(0);
        let w = column_weight(best).sqrt();
        let phi: Vec<Amplitude> = (0..dk).map(|k| psi[k * dr + best] / w).collect();
        let chi: Vec<Amplitude> = (0..dr)
            .map(|r| (0..dk).map(|k| phi[k].conj() * psi[k * dr + r]).sum())
            .collect();
        let residual = (0..dk)
            .flat_map(|k| (0..dr).map(move |r| (k, r)))
            .map(|(k, r)| (psi[k * dr + r] - phi[k] * chi[r]).norm())
            .fold(0.0, f64::max);
        if residual > 1e-9 {
            return Err(StateError::Entangled {
                labels: keep.iter().map(|s| s.to_string()).collect(),
                residual,
            });
        }
        let rest_labels: Vec<String> = rest_pos.iter().map(|&p| self.labels[p].clone()).collect();
        let (kept, _) = PureState::from_unnormalized(keep.iter().map(|s| s.to_string()), phi)?;
        let (rest, _) = PureState::from_unnormalized(rest_labels, chi)?;
        Ok((kept, rest))
    }

    /// Renormalizes amplitudes produced by a projector or Kraus operator.
    pub(crate) fn with_amps(&self, amps: Vec<Amplitude>) -> Result<(PureState, f64)> {
        PureState::from_unnormalized(self.labels.clone(), amps)
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num_qubits();
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let bits: String = (0..n)
                .map(|p| if (i >> (n - 1 - p)) & 1 == 1 { '1' } else { '0' })
                .collect();
            if a.im.abs() < 1e-12 {
                write!(f, "{:.6}|{}⟩", a.re, bits)?;
            } else {
                write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, bits)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " [{}]", self.labels.join(","))
    }
}
