use thiserror::Error;

use crate::qcore::StateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("input state is not normalized: |a|² + |b|² = {0}")]
    InputNotNormalized(f64),
    #[error("channel is not normalized: |α|² + |β|² + |γ|² + |η|² = {0}")]
    ChannelNotNormalized(f64),
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
    #[error("protocol assumption violated: {0}")]
    Assumption(String),
    #[error("Λ₃ not positive semidefinite: rho = {rho} is below rho_min = {rho_min}")]
    PovmNotPsd { rho: f64, rho_min: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("information-preservation violated: sender fidelity {0} after a failed attempt")]
    SenderLost(f64),
}

impl Error {
    /// Errors caused by the protocol's physical preconditions rather than by
    /// malformed input.
    pub fn is_protocol_violation(&self) -> bool {
        matches!(
            self,
            Error::Assumption(_) | Error::PovmNotPsd { .. } | Error::SenderLost(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
