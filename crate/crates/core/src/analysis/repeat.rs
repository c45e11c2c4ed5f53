use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::{proposed_teleport_with_rng, ChannelParams, InputState, Status};
use crate::qcore::fidelity;

use super::success_probability;

/// How far from 1 the sender fidelity may drift after a failed attempt.
pub const SENDER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatStats {
    pub trials: u64,
    pub max_tries: u32,
    pub seed: u64,
    /// Attempts made over all trials, successful or not.
    pub attempts: u64,
    pub successes: u64,
    /// `successes / attempts`.
    pub p_hat: f64,
    pub p_closed: f64,
    /// Attempt index of the first success → number of trials.
    pub first_success_histogram: BTreeMap<u32, u64>,
    /// Trials that used up `max_tries` without success.
    pub exhausted: u64,
    pub failed_attempts: u64,
    /// Worst fidelity of the recovered sender qubit against the original
    /// input, over all failed attempts.
    pub min_sender_fidelity: Option<f64>,
}

impl RepeatStats {
    /// Fraction of trials that succeeded within `n` attempts.
    pub fn empirical_cdf(&self, n: u32) -> f64 {
        let hits: u64 = self.first_success_histogram.range(..=n).map(|(_, c)| c).sum();
        hits as f64 / self.trials as f64
    }
}

#[derive(Default)]
struct TrialOutcome {
    first_success: Option<u32>,
    attempts: u64,
    failed: u64,
    min_fidelity: Option<f64>,
}

fn run_trial(zeta: &InputState, p: &ChannelParams, max_tries: u32, seed: u64, index: u64) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let reference = zeta.to_state("ref");
    let mut current = *zeta;
    let mut out = TrialOutcome::default();
    for k in 1..=max_tries {
        out.attempts += 1;
        let r = proposed_teleport_with_rng(&current, p, &mut rng)?;
        if r.status == Status::Success {
            out.first_success = Some(k);
            break;
        }
        out.failed += 1;
        let recovered = r
            .recovered_sender
            .ok_or_else(|| Error::InvalidArgument("failed attempt returned no sender state".into()))?;
        // The original input is only ever read here, to check the recovered qubit.
        let f = fidelity(&recovered.to_state("ref"), &reference)?;
        if (f - 1.0).abs() > SENDER_TOL {
            return Err(Error::SenderLost(f));
        }
        out.min_fidelity = Some(out.min_fidelity.map_or(f, |m: f64| m.min(f)));
        current = recovered;
    }
    Ok(out)
}

/// Repeat-until-success runs of the information-preserving protocol. Each
/// trial draws from its own ChaCha stream `(seed, trial index)`, so the result
/// does not depend on scheduling.
pub fn monte_carlo_repeat(
    zeta: &InputState,
    p: &ChannelParams,
    trials: u64,
    max_tries: u32,
    seed: u64,
) -> Result<RepeatStats> {
    if trials == 0 || max_tries == 0 {
        return Err(Error::InvalidArgument("trials and max_tries must be at least 1".into()));
    }
    let p_closed = success_probability(p)?;
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(zeta, p, max_tries, seed, i))
        .collect::<Result<_>>()?;

    let mut stats = RepeatStats {
        trials,
        max_tries,
        seed,
        attempts: 0,
        successes: 0,
        p_hat: 0.0,
        p_closed,
        first_success_histogram: BTreeMap::new(),
        exhausted: 0,
        failed_attempts: 0,
        min_sender_fidelity: None,
    };
    for o in outcomes {
        stats.attempts += o.attempts;
        stats.failed_attempts += o.failed;
        match o.first_success {
            Some(k) => {
                stats.successes += 1;
                *stats.first_success_histogram.entry(k).or_default() += 1;
            }
            None => stats.exhausted += 1,
        }
        if let Some(f) = o.min_fidelity {
            stats.min_sender_fidelity = Some(stats.min_sender_fidelity.map_or(f, |m| m.min(f)));
        }
    }
    stats.p_hat = stats.successes as f64 / stats.attempts as f64;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_channel_succeeds_first_time() {
        let zeta = InputState::real(0.6, 0.8).unwrap();
        let s = monte_carlo_repeat(&zeta, &ChannelParams::uniform(), 200, 5, 1).unwrap();
        assert_eq!(s.first_success_histogram.len(), 1);
        assert_eq!(s.first_success_histogram[&1], 200);
        assert_eq!(s.p_hat, 1.0);
        assert_eq!(s.failed_attempts, 0);
    }

    #[test]
    fn deterministic_in_seed() {
        let zeta = InputState::real(0.6, 0.8).unwrap();
        let p = ChannelParams::real(0.3, 0.4, 0.5f64.sqrt(), 0.5).unwrap();
        let a = monte_carlo_repeat(&zeta, &p, 500, 4, 9).unwrap();
        let b = monte_carlo_repeat(&zeta, &p, 500, 4, 9).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_repeat(&zeta, &p, 500, 4, 10).unwrap();
        assert_ne!(a.first_success_histogram, c.first_success_histogram);
    }

    #[test]
    fn counts_add_up() {
        let zeta = InputState::real(0.8, 0.6).unwrap();
        let p = ChannelParams::real(0.1, 0.2, 0.6, 0.59f64.sqrt()).unwrap();
        let s = monte_carlo_repeat(&zeta, &p, 1000, 3, 2).unwrap();
        let hist: u64 = s.first_success_histogram.values().sum();
        assert_eq!(hist + s.exhausted, s.trials);
        assert_eq!(s.successes + s.failed_attempts, s.attempts);
        assert!(s.first_success_histogram.keys().all(|k| (1..=3).contains(k)));
        assert!(s.exhausted > 0);
        assert!((s.min_sender_fidelity.unwrap() - 1.0).abs() < SENDER_TOL);
        assert!((s.empirical_cdf(3) - hist as f64 / 1000.0).abs() < 1e-15);
    }

    #[test]
    fn zero_trials_rejected() {
        let zeta = InputState::real(1.0, 0.0).unwrap();
        assert!(monte_carlo_repeat(&zeta, &ChannelParams::uniform(), 0, 1, 0).is_err());
        assert!(monte_carlo_repeat(&zeta, &ChannelParams::uniform(), 1, 0, 0).is_err());
    }
}
