//! Information-preserving controlled teleportation.
//!
//! After Bob's Bell measurement Alice holds qubit 1 of a partially entangled
//! pair shared with Chika. She couples her input qubit A and a fresh
//! auxiliary qubit E to it; E then reports whether the pair could be used.
//! On e = 1 the input state is left intact on A, so she can try again.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::{fidelity, BellOutcome, GateMatrix, MatrixBasis, MeasureBasis, Outcome, PureState};

use super::labels::{A, E, Q1, Q2, Q3, Q4};
use super::runner::Runner;
use super::{
    build_ua, discriminate_correction, make_cluster_channel, table2_branch, BranchInfo, ChannelParams,
    CorrectionOp, InputState, Party, Protocol, Status, TeleportResult,
};

#[derive(Debug, Clone)]
pub enum CircuitStep {
    Gate { gate: GateMatrix, targets: [&'static str; 2] },
    /// Append E in |0⟩.
    AppendAux,
}

/// Alice's coupling circuit: C(1→A), append E, C(A→E), C-U_A(1→A), C(A→E).
pub fn alice_steps(ua: &GateMatrix) -> Vec<CircuitStep> {
    let cnot = GateMatrix::cnot();
    vec![
        CircuitStep::Gate { gate: cnot.clone(), targets: [Q1, A] },
        CircuitStep::AppendAux,
        CircuitStep::Gate { gate: cnot.clone(), targets: [A, E] },
        CircuitStep::Gate {
            gate: GateMatrix::controlled(ua).renamed("C-U_A"),
            targets: [Q1, A],
        },
        CircuitStep::Gate { gate: cnot, targets: [A, E] },
    ]
}

/// Applies [`alice_steps`] without measuring. `state` must contain A and Q1
/// and must not contain E yet.
pub fn alice_circuit(state: &PureState, ua: &GateMatrix) -> Result<PureState> {
    let mut s = state.clone();
    for step in alice_steps(ua) {
        s = match step {
            CircuitStep::Gate { gate, targets } => s.apply_gate(&gate, &targets)?,
            CircuitStep::AppendAux => s.tensor(&PureState::zero(E))?,
        };
    }
    Ok(s)
}

pub fn proposed_teleport(zeta: &InputState, p: &ChannelParams, seed: u64) -> Result<TeleportResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    proposed_teleport_with_rng(zeta, p, &mut rng)
}

pub fn proposed_teleport_with_rng<R: Rng + ?Sized>(
    zeta: &InputState,
    p: &ChannelParams,
    rng: &mut R,
) -> Result<TeleportResult> {
    p.check_proposed()?;
    let start = zeta.to_state(A).tensor(&make_cluster_channel(p))?;
    let mut run = Runner::new(start, rng);

    let outs = run.state.bell_measure(Q2, Q3)?;
    let bob = match run.measure(Party::Bob, "bell", &[Q2, Q3], outs) {
        Outcome::Bell(b) => b,
        other => unreachable!("Bell measurement returned {other:?}"),
    };
    run.send(Party::Bob, Party::Alice, bob.bits().to_vec());
    run.send(Party::Bob, Party::Chika, bob.bits().to_vec());

    let branch = table2_branch(bob, p)?;
    if branch.frame_flip {
        run.correct(Party::Alice, CorrectionOp::X, Q1)?;
        run.correct(Party::Chika, CorrectionOp::X, Q4)?;
    }
    let ua = build_ua(&branch)?;
    for step in alice_steps(&ua) {
        match step {
            CircuitStep::Gate { gate, targets } => run.gate(Party::Alice, &gate, &targets)?,
            CircuitStep::AppendAux => run.append(&PureState::zero(E))?,
        }
    }

    let outs = run.state.measure_projective(E, MeasureBasis::Z)?;
    let e_bit = z_bit(run.measure(Party::Alice, "z", &[E], outs));
    let reference = zeta.to_state("ref");

    if e_bit == 1 {
        run.send(Party::Alice, Party::Chika, vec![1]);
        let (sender, _) = run.state.factor(&[A])?;
        let recovered = InputState::from_qubit(&sender)?;
        let sender_fidelity = fidelity(&sender, &reference)?;
        let target = run.state.reduced_density_matrix(&[Q4], MatrixBasis::Computational)?;
        return Ok(TeleportResult {
            protocol: Protocol::Proposed,
            status: Status::FailRecoverable,
            target_fidelity: fidelity(&target, &reference)?,
            sender_fidelity_on_fail: Some(sender_fidelity),
            transcript: run.transcript,
            final_state: run.state,
            recovered_sender: Some(recovered),
        });
    }

    let outs = run.state.measure_projective(A, MeasureBasis::Z)?;
    let a_bit = z_bit(run.measure(Party::Alice, "z", &[A], outs));
    let outs = run.state.measure_projective(Q1, MeasureBasis::X)?;
    let q1 = match run.measure(Party::Alice, "x", &[Q1], outs) {
        Outcome::X(s) => s,
        other => unreachable!("X measurement returned {other:?}"),
    };
    run.send(Party::Alice, Party::Chika, vec![0, a_bit, q1.bit()]);
    let op = discriminate_correction(e_bit, a_bit, q1, branch.tau_form)?;
    run.correct(Party::Chika, op, Q4)?;

    let target = run.state.reduced_density_matrix(&[Q4], MatrixBasis::Computational)?;
    Ok(TeleportResult {
        protocol: Protocol::Proposed,
        status: Status::Success,
        target_fidelity: fidelity(&target, &reference)?,
        sender_fidelity_on_fail: None,
        transcript: run.transcript,
        final_state: run.state,
        recovered_sender: None,
    })
}

fn z_bit(o: Outcome) -> u8 {
    match o {
        Outcome::Z(b) => b,
        other => unreachable!("Z measurement returned {other:?}"),
    }
}

/// Exact success probability of one attempt given Bob's outcome, from the
/// norm of the e = 0 component after [`alice_circuit`].
pub fn branch_success_probability(zeta: &InputState, branch: &BranchInfo) -> Result<f64> {
    let state = zeta.to_state(A).tensor(&branch.tau_state())?;
    let out = alice_circuit(&state, &build_ua(branch)?)?;
    let outs = out.measure_projective(E, MeasureBasis::Z)?;
    Ok(outs
        .iter()
        .filter(|o| o.outcome == Outcome::Z(0))
        .map(|o| o.probability)
        .sum())
}

/// Picks a branch for callers that want to reason about one of Bob's outcomes
/// without running the measurement.
pub fn proposed_branch(bob: BellOutcome, p: &ChannelParams) -> Result<BranchInfo> {
    table2_branch(bob, p)
}

/// Checks a failed attempt left the sender intact.
pub fn ensure_preserved(result: &TeleportResult, tol: f64) -> Result<()> {
    match result.sender_fidelity_on_fail {
        Some(f) if (f - 1.0).abs() > tol => Err(Error::SenderLost(f)),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Amplitude;

    fn skewed() -> ChannelParams {
        ChannelParams::real(0.3, 0.4, 0.5f64.sqrt(), 0.5).unwrap()
    }

    #[test]
    fn success_teleports_exactly() {
        let zeta = InputState::new(Amplitude::new(0.6, 0.0), Amplitude::new(0.0, 0.8)).unwrap();
        let mut counts = [0usize; 2];
        for seed in 0..300 {
            let r = proposed_teleport(&zeta, &skewed(), seed).unwrap();
            match r.status {
                Status::Success => {
                    assert!((r.target_fidelity - 1.0).abs() < 1e-9, "seed {seed}: {}", r.target_fidelity);
                    counts[0] += 1;
                }
                Status::FailRecoverable => {
                    let f = r.sender_fidelity_on_fail.unwrap();
                    assert!((f - 1.0).abs() < 1e-9, "seed {seed}: {f}");
                    let back = r.recovered_sender.unwrap().to_state("x");
                    assert!(back.phase_distance(&zeta.to_state("x")).unwrap() < 1e-9);
                    counts[1] += 1;
                }
                Status::FailInconclusive => panic!("not produced by this protocol"),
            }
        }
        assert!(counts[0] > 0 && counts[1] > 0, "{counts:?}");
    }

    #[test]
    fn uniform_channel_always_succeeds() {
        let zeta = InputState::real(0.8, 0.6).unwrap();
        for seed in 0..100 {
            let r = proposed_teleport(&zeta, &ChannelParams::uniform(), seed).unwrap();
            assert_eq!(r.status, Status::Success);
        }
    }

    #[test]
    fn branch_probability_is_twice_u_squared() {
        let zeta = InputState::real(0.6, 0.8).unwrap();
        for bob in BellOutcome::ALL {
            let b = proposed_branch(bob, &skewed()).unwrap();
            let exact = branch_success_probability(&zeta, &b).unwrap();
            assert!((exact - b.success_probability()).abs() < 1e-12, "{bob}");
        }
    }

    #[test]
    fn rejects_unordered_channel() {
        let zeta = InputState::real(1.0, 0.0).unwrap();
        let p = ChannelParams::real(0.5, 0.4, 0.5f64.sqrt(), 0.3).unwrap();
        assert!(matches!(proposed_teleport(&zeta, &p, 0), Err(Error::Assumption(_))));
    }

    #[test]
    fn lost_sender_is_reported() {
        let zeta = InputState::real(1.0, 0.0).unwrap();
        let mut r = proposed_teleport(&zeta, &skewed(), 0).unwrap();
        r.sender_fidelity_on_fail = Some(0.5);
        assert!(matches!(ensure_preserved(&r, 1e-9), Err(Error::SenderLost(_))));
    }
}
