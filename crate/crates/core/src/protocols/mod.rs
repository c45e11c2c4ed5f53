//! The two controlled-teleportation protocols over the four-qubit cluster
//! channel, plus their analytical outcome tables.

mod params;
mod povm;
mod proposed;
mod ramirez;
mod runner;
mod table1;
mod table2;
mod transcript;

/// Register labels shared by both protocols.
pub mod labels {
    /// Alice's input qubit.
    pub const A: &str = "A";
    pub const Q1: &str = "1";
    pub const Q2: &str = "2";
    pub const Q3: &str = "3";
    pub const Q4: &str = "4";
    /// Auxiliary qubit.
    pub const E: &str = "E";
}

pub use crate::qcore::BellOutcome;
pub use params::{make_cluster_channel, ChannelParams, InputState};
pub use povm::{default_rho, make_povm, rho_min, PovmConfig};
pub use proposed::{
    alice_circuit, alice_steps, branch_success_probability, ensure_preserved, proposed_branch,
    proposed_teleport, proposed_teleport_with_rng, CircuitStep,
};
pub use ramirez::{
    critique_density_matrix, critique_weights, ramirez_teleport, ramirez_teleport_with_rng, Critique,
};
pub use runner::sample_outcome;
pub use table1::{table1_cell, table1_outcome, ChannelCoef, InputCoef, RamirezBranch, Table1Cell, Term};
pub use table2::{
    build_ua, discriminate_correction, epsilon_index, table2_branch, tau_state, ua_from_ratio, BranchInfo,
    TauForm,
};
pub use transcript::{CorrectionOp, Event, Party, Protocol, Status, TeleportResult, Transcript};
