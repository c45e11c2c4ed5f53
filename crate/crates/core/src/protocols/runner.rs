use rand::Rng;

use crate::error::Result;
use crate::qcore::{GateMatrix, MeasurementOutcome, Outcome, PureState};

use super::{CorrectionOp, Event, Party, Transcript};

/// Inverse-CDF draw over the enumerated outcomes, in enumeration order.
/// Branches without a post-state (zero probability) are never returned.
pub fn sample_outcome<R: Rng + ?Sized>(rng: &mut R, outcomes: Vec<MeasurementOutcome>) -> MeasurementOutcome {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut last = None;
    for o in outcomes.into_iter().filter(|o| o.post_state.is_some()) {
        cumulative += o.probability;
        if u < cumulative {
            return o;
        }
        last = Some(o);
    }
    last.expect("a complete measurement has at least one possible outcome")
}

/// Register plus transcript for one protocol run.
pub(crate) struct Runner<'r, R: Rng + ?Sized> {
    pub state: PureState,
    pub transcript: Transcript,
    rng: &'r mut R,
}

fn owned(targets: &[&str]) -> Vec<String> {
    targets.iter().map(|s| s.to_string()).collect()
}

impl<'r, R: Rng + ?Sized> Runner<'r, R> {
    pub fn new(state: PureState, rng: &'r mut R) -> Self {
        Self {
            state,
            transcript: Transcript::default(),
            rng,
        }
    }

    pub fn gate(&mut self, party: Party, gate: &GateMatrix, targets: &[&str]) -> Result<()> {
        self.state = self.state.apply_gate(gate, targets)?;
        self.transcript.push(Event::GateApplied {
            party,
            gate: gate.name().to_string(),
            targets: owned(targets),
        });
        Ok(())
    }

    pub fn append(&mut self, qubit: &PureState) -> Result<()> {
        self.state = self.state.tensor(qubit)?;
        Ok(())
    }

    pub fn measure(
        &mut self,
        party: Party,
        kind: &str,
        targets: &[&str],
        outcomes: Vec<MeasurementOutcome>,
    ) -> Outcome {
        let picked = sample_outcome(self.rng, outcomes);
        self.transcript.push(Event::Measured {
            party,
            kind: kind.to_string(),
            targets: owned(targets),
            outcome: picked.outcome.to_string(),
            probability: picked.probability,
        });
        self.state = picked.post_state.expect("sampled outcomes carry a state");
        picked.outcome
    }

    pub fn send(&mut self, from: Party, to: Party, payload: Vec<u8>) {
        self.transcript.push(Event::ClassicalMessage { from, to, payload });
    }

    pub fn correct(&mut self, party: Party, op: CorrectionOp, target: &str) -> Result<()> {
        self.state = self.state.apply_gate(&op.gate(), &[target])?;
        self.transcript.push(Event::CorrectionApplied {
            party,
            op,
            target: target.to_string(),
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{Amplitude, MeasureBasis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn never_samples_impossible_outcome() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let outs = PureState::zero("q").measure_projective("q", MeasureBasis::Z).unwrap();
            assert_eq!(sample_outcome(&mut rng, outs).outcome, Outcome::Z(0));
        }
    }

    #[test]
    fn frequencies_follow_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = PureState::qubit("q", Amplitude::new(0.6, 0.0), Amplitude::new(0.8, 0.0)).unwrap();
        let n = 20_000;
        let ones = (0..n)
            .filter(|_| {
                let outs = s.measure_projective("q", MeasureBasis::Z).unwrap();
                sample_outcome(&mut rng, outs).outcome == Outcome::Z(1)
            })
            .count();
        let p_hat = ones as f64 / n as f64;
        let sigma = (0.64f64 * 0.36 / n as f64).sqrt();
        assert!((p_hat - 0.64).abs() < 4.0 * sigma, "{p_hat}");
    }
}
