//! Analytical outcome table for the POVM-based protocol: Chika's unnormalized
//! qubit after Alice's and Bob's Bell measurements, global phase omitted.

use std::fmt;

use crate::qcore::{Amplitude, BellOutcome};

use super::{ChannelParams, CorrectionOp, InputState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputCoef {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelCoef {
    Alpha,
    Beta,
    Gamma,
    Eta,
}

/// `sign · input · channel`, e.g. `-bη`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub sign: f64,
    pub input: InputCoef,
    pub channel: ChannelCoef,
}

impl Term {
    fn input_value(&self, zeta: &InputState) -> Amplitude {
        match self.input {
            InputCoef::A => zeta.a(),
            InputCoef::B => zeta.b(),
        }
    }

    fn channel_value(&self, p: &ChannelParams) -> Amplitude {
        match self.channel {
            ChannelCoef::Alpha => p.alpha(),
            ChannelCoef::Beta => p.beta(),
            ChannelCoef::Gamma => p.gamma(),
            ChannelCoef::Eta => p.eta(),
        }
    }

    /// Signed channel factor.
    pub fn delta(&self, p: &ChannelParams) -> Amplitude {
        self.channel_value(p) * self.sign
    }

    pub fn value(&self, zeta: &InputState, p: &ChannelParams) -> Amplitude {
        self.input_value(zeta) * self.delta(p)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self.input {
            InputCoef::A => 'a',
            InputCoef::B => 'b',
        };
        let c = match self.channel {
            ChannelCoef::Alpha => 'α',
            ChannelCoef::Beta => 'β',
            ChannelCoef::Gamma => 'γ',
            ChannelCoef::Eta => 'η',
        };
        write!(f, "{i}{c}")
    }
}

/// One cell: `zero|0⟩ + one|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Cell {
    pub zero: Term,
    pub one: Term,
}

impl Table1Cell {
    /// Unnormalized amplitudes of Chika's qubit.
    pub fn collapse(&self, zeta: &InputState, p: &ChannelParams) -> [Amplitude; 2] {
        [self.zero.value(zeta, p), self.one.value(zeta, p)]
    }
}

impl fmt::Display for Table1Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = if self.zero.sign < 0.0 { "-" } else { "" };
        let op = if self.one.sign < 0.0 { '-' } else { '+' };
        write!(f, "{lead}{}|0⟩ {op} {}|1⟩", self.zero, self.one)
    }
}

const fn t(sign: f64, input: InputCoef, channel: ChannelCoef) -> Term {
    Term { sign, input, channel }
}

use ChannelCoef::{Alpha, Beta, Eta, Gamma};
use InputCoef::{A, B};

// Rows: Alice φ+, φ-, ψ+, ψ-. Columns: Bob φ+, φ-, ψ+, ψ-.
const TABLE1: [[(Term, Term); 4]; 4] = [
    [
        (t(1.0, A, Alpha), t(-1.0, B, Eta)),
        (t(1.0, A, Alpha), t(1.0, B, Eta)),
        (t(1.0, B, Beta), t(1.0, A, Gamma)),
        (t(1.0, B, Beta), t(-1.0, A, Gamma)),
    ],
    [
        (t(1.0, A, Alpha), t(1.0, B, Eta)),
        (t(1.0, A, Alpha), t(-1.0, B, Eta)),
        (t(1.0, B, Beta), t(-1.0, A, Gamma)),
        (t(1.0, B, Beta), t(1.0, A, Gamma)),
    ],
    [
        (t(1.0, B, Alpha), t(-1.0, A, Eta)),
        (t(1.0, B, Alpha), t(1.0, A, Eta)),
        (t(1.0, A, Beta), t(1.0, B, Gamma)),
        (t(1.0, A, Beta), t(-1.0, B, Gamma)),
    ],
    [
        (t(1.0, B, Alpha), t(1.0, A, Eta)),
        (t(1.0, B, Alpha), t(-1.0, A, Eta)),
        (t(1.0, A, Beta), t(-1.0, B, Gamma)),
        (t(1.0, A, Beta), t(1.0, B, Gamma)),
    ],
];

fn index(b: BellOutcome) -> usize {
    BellOutcome::ALL.iter().position(|x| *x == b).expect("enumerated")
}

pub fn table1_cell(alice: BellOutcome, bob: BellOutcome) -> Table1Cell {
    let (zero, one) = TABLE1[index(alice)][index(bob)];
    Table1Cell { zero, one }
}

/// Chika's branch after both Bell measurements.
///
/// `pre_correction` brings the collapse to `δ₀a|0⟩ + δ₁b|1⟩`; the signs left
/// in `delta0`/`delta1` are removed later by a σ_Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamirezBranch {
    pub alice: BellOutcome,
    pub bob: BellOutcome,
    pub cell: Table1Cell,
    pub delta0: Amplitude,
    pub delta1: Amplitude,
    pub pre_correction: CorrectionOp,
}

pub fn table1_outcome(alice: BellOutcome, bob: BellOutcome, p: &ChannelParams) -> RamirezBranch {
    let cell = table1_cell(alice, bob);
    let (delta0, delta1, pre_correction) = match cell.zero.input {
        InputCoef::A => (cell.zero.delta(p), cell.one.delta(p), CorrectionOp::Id),
        // σ_X swaps the two terms so `a` sits on |0⟩.
        InputCoef::B => (cell.one.delta(p), cell.zero.delta(p), CorrectionOp::X),
    };
    RamirezBranch {
        alice,
        bob,
        cell,
        delta0,
        delta1,
        pre_correction,
    }
}
