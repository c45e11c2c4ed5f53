use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qcore::{GateMatrix, PureState};

use super::InputState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
    Chika,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "Alice",
            Party::Bob => "Bob",
            Party::Chika => "Chika",
        })
    }
}

/// Pauli correction applied by the receiver. All four are self-inverse up to
/// a global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrectionOp {
    Id,
    X,
    Z,
    /// The product σ_X σ_Z.
    XZ,
}

impl CorrectionOp {
    pub fn gate(self) -> GateMatrix {
        match self {
            CorrectionOp::Id => GateMatrix::identity(1),
            CorrectionOp::X => GateMatrix::pauli_x(),
            CorrectionOp::Z => GateMatrix::pauli_z(),
            CorrectionOp::XZ => GateMatrix::pauli_x()
                .compose(&GateMatrix::pauli_z())
                .expect("2x2")
                .renamed("XZ"),
        }
    }
}

impl fmt::Display for CorrectionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrectionOp::Id => "I",
            CorrectionOp::X => "X",
            CorrectionOp::Z => "Z",
            CorrectionOp::XZ => "XZ",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    GateApplied {
        party: Party,
        gate: String,
        targets: Vec<String>,
    },
    Measured {
        party: Party,
        kind: String,
        targets: Vec<String>,
        outcome: String,
        probability: f64,
    },
    ClassicalMessage {
        from: Party,
        to: Party,
        payload: Vec<u8>,
    },
    CorrectionApplied {
        party: Party,
        op: CorrectionOp,
        target: String,
    },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::GateApplied { party, gate, targets } => {
                write!(f, "{party}: apply {gate} on ({})", targets.join(","))
            }
            Event::Measured {
                party,
                kind,
                targets,
                outcome,
                probability,
            } => write!(
                f,
                "{party}: {kind} measurement of ({}) -> {outcome} (p = {probability:.12})",
                targets.join(",")
            ),
            Event::ClassicalMessage { from, to, payload } => {
                let bits: String = payload.iter().map(|b| char::from(b'0' + b)).collect();
                write!(f, "{from} -> {to}: bits {bits}")
            }
            Event::CorrectionApplied { party, op, target } => {
                write!(f, "{party}: correction {op} on {target}")
            }
        }
    }
}

/// Ordered record of everything that happened in one protocol run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub events: Vec<Event>,
}

impl Transcript {
    pub fn push(&mut self, event: Event) {
        self.events.push(event);
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn measurements(&self) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Measured { .. }))
    }

    pub fn messages(&self) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::ClassicalMessage { .. }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Success,
    /// The attempt failed and the input state is back on Alice's qubit.
    FailRecoverable,
    /// The POVM gave the inconclusive outcome; the state is lost.
    FailInconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Ramirez,
    Proposed,
}

#[derive(Debug, Clone)]
pub struct TeleportResult {
    pub protocol: Protocol,
    pub status: Status,
    /// Fidelity of Chika's qubit with the input state at the end of the run.
    pub target_fidelity: f64,
    /// Fidelity of Alice's qubit A with the input state, for failed runs.
    pub sender_fidelity_on_fail: Option<f64>,
    pub transcript: Transcript,
    pub final_state: PureState,
    /// Alice's qubit after a recoverable failure, read from the register.
    pub recovered_sender: Option<InputState>,
}
