use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::protocols::{ChannelParams, InputState, Protocol};
use crate::qcore::Amplitude;

use super::{CliError, Format};

/// A complex literal as written in a config file: `0.6`, `[0.6, 0.0]` or
/// `"random"` (input amplitudes only).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComplexLit {
    Real(f64),
    Pair([f64; 2]),
    Word(String),
}

impl ComplexLit {
    /// Flag syntax: `0.6`, `0.6,0.1` or `random`.
    pub fn parse_flag(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("random") {
            return Ok(ComplexLit::Word("random".into()));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        match s.split_once(',') {
            Some((re, im)) => Ok(ComplexLit::Pair([num(re)?, num(im)?])),
            None => Ok(ComplexLit::Real(num(s)?)),
        }
    }

    fn is_random(&self) -> bool {
        matches!(self, ComplexLit::Word(w) if w.eq_ignore_ascii_case("random"))
    }

    fn value(&self, name: &str) -> Result<Amplitude, CliError> {
        match self {
            ComplexLit::Real(x) => Ok(Amplitude::new(*x, 0.0)),
            ComplexLit::Pair([re, im]) => Ok(Amplitude::new(*re, *im)),
            ComplexLit::Word(w) => Err(CliError::Usage(format!("`{name}`: expected a number, got \"{w}\""))),
        }
    }
}

/// Everything a config file may set. Flags override these field by field.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub a: Option<ComplexLit>,
    pub b: Option<ComplexLit>,
    pub alpha: Option<ComplexLit>,
    pub beta: Option<ComplexLit>,
    pub gamma: Option<ComplexLit>,
    pub eta: Option<ComplexLit>,
    pub rho: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub max_tries: Option<u32>,
    pub protocol: Option<Protocol>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` win.
    pub fn overlay(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            a: over.a.or(self.a),
            b: over.b.or(self.b),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            gamma: over.gamma.or(self.gamma),
            eta: over.eta.or(self.eta),
            rho: over.rho.or(self.rho),
            seed: over.seed.or(self.seed),
            trials: over.trials.or(self.trials),
            max_tries: over.max_tries.or(self.max_tries),
            protocol: over.protocol.or(self.protocol),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
        }
    }
}

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_MAX_TRIES: u32 = 20;

/// Fully validated settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: InputState,
    pub channel: ChannelParams,
    pub rho: Option<f64>,
    pub seed: u64,
    pub trials: u64,
    pub max_tries: u32,
    pub protocol: Protocol,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Haar-random qubit from a stream of `seed` no trial ever uses.
fn random_input(seed: u64) -> InputState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let a = ((1.0 + cos_theta) / 2.0).sqrt();
    let b = ((1.0 - cos_theta) / 2.0).sqrt();
    let (a, b) = (Amplitude::new(a, 0.0), Amplitude::from_polar(b, phi));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    InputState::new(a / norm, b / norm).expect("unit vector")
}

impl RunConfig {
    pub fn resolve(file: ConfigFile) -> Result<Self, CliError> {
        let seed = file.seed.unwrap_or(0);
        let input = match (&file.a, &file.b) {
            (Some(a), Some(b)) if a.is_random() && b.is_random() => random_input(seed),
            (Some(x), None) | (None, Some(x)) if x.is_random() => random_input(seed),
            (Some(x), Some(y)) if x.is_random() || y.is_random() => {
                return Err(CliError::Usage(
                    "`random` draws the whole input state; leave the other amplitude unset".into(),
                ))
            }
            (None, None) => InputState::real(0.6, 0.8).expect("normalized"),
            (Some(a), Some(b)) => InputState::new(a.value("a")?, b.value("b")?)?,
            _ => return Err(CliError::Usage("set both `a` and `b`, or neither".into())),
        };

        let coefs = [&file.alpha, &file.beta, &file.gamma, &file.eta];
        let channel = if coefs.iter().all(|c| c.is_none()) {
            ChannelParams::uniform()
        } else if coefs.iter().all(|c| c.is_some()) {
            let v = |c: &Option<ComplexLit>, n| c.as_ref().expect("checked").value(n);
            ChannelParams::new(
                v(&file.alpha, "alpha")?,
                v(&file.beta, "beta")?,
                v(&file.gamma, "gamma")?,
                v(&file.eta, "eta")?,
            )?
        } else {
            return Err(CliError::Usage("set all of alpha, beta, gamma, eta, or none".into()));
        };

        if let Some(r) = file.rho {
            if !r.is_finite() || r <= 0.0 {
                return Err(CliError::Usage(format!("rho must be positive, got {r}")));
            }
        }
        let trials = file.trials.unwrap_or(DEFAULT_TRIALS);
        let max_tries = file.max_tries.unwrap_or(DEFAULT_MAX_TRIES);
        if trials == 0 || max_tries == 0 {
            return Err(CliError::Usage("trials and max-tries must be at least 1".into()));
        }
        Ok(RunConfig {
            input,
            channel,
            rho: file.rho,
            seed,
            trials,
            max_tries,
            protocol: file.protocol.unwrap_or(Protocol::Proposed),
            format: file.format.unwrap_or(Format::Human),
            out: file.out,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_literals() {
        assert_eq!(ComplexLit::parse_flag("0.5").unwrap(), ComplexLit::Real(0.5));
        assert_eq!(ComplexLit::parse_flag("0.5, -1").unwrap(), ComplexLit::Pair([0.5, -1.0]));
        assert!(ComplexLit::parse_flag("Random").unwrap().is_random());
        assert!(ComplexLit::parse_flag("x").is_err());
    }

    #[test]
    fn json_literals() {
        let f: ConfigFile =
            serde_json::from_str(r#"{"a": [0.6, 0], "b": 0.8, "alpha": 0.5, "beta": 0.5, "gamma": 0.5, "eta": [0.5, 0.0]}"#)
                .unwrap();
        let cfg = RunConfig::resolve(f).unwrap();
        assert_eq!(cfg.input, InputState::real(0.6, 0.8).unwrap());
        assert_eq!(cfg.channel, ChannelParams::uniform());
        assert!(serde_json::from_str::<ConfigFile>(r#"{"zeta": 1}"#).is_err());
    }

    #[test]
    fn overlay_prefers_flags() {
        let base = ConfigFile {
            seed: Some(1),
            trials: Some(10),
            ..Default::default()
        };
        let over = ConfigFile {
            seed: Some(2),
            ..Default::default()
        };
        let merged = base.overlay(over);
        assert_eq!((merged.seed, merged.trials), (Some(2), Some(10)));
    }

    #[test]
    fn random_input_is_seeded() {
        let f = |seed| ConfigFile {
            a: Some(ComplexLit::Word("random".into())),
            b: Some(ComplexLit::Word("random".into())),
            seed: Some(seed),
            ..Default::default()
        };
        let x = RunConfig::resolve(f(3)).unwrap().input;
        assert_eq!(x, RunConfig::resolve(f(3)).unwrap().input);
        assert_ne!(x, RunConfig::resolve(f(4)).unwrap().input);
    }

    #[test]
    fn rejects_partial_settings() {
        let half = ConfigFile {
            alpha: Some(ComplexLit::Real(1.0)),
            ..Default::default()
        };
        assert!(matches!(RunConfig::resolve(half), Err(CliError::Usage(_))));
        let bad = ConfigFile {
            a: Some(ComplexLit::Real(0.6)),
            b: Some(ComplexLit::Real(0.6)),
            ..Default::default()
        };
        assert!(matches!(RunConfig::resolve(bad), Err(CliError::Usage(_))));
    }
}
