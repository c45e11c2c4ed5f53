//! The original POVM-based controlled teleportation.
//!
//! Alice and Bob both Bell-measure, Chika fixes her qubit into
//! `δ₀a|0⟩ + δ₁b|1⟩`, entangles it with an auxiliary qubit and discriminates
//! with a three-outcome POVM. The third outcome loses the state for good.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::{
    fidelity, Amplitude, BellOutcome, DensityMatrix, GateMatrix, MatrixBasis, Outcome, PureState,
};

use super::labels::{A, E, Q1, Q2, Q3, Q4};
use super::runner::Runner;
use super::{
    default_rho, make_cluster_channel, make_povm, table1_outcome, ChannelParams, CorrectionOp,
    InputState, Party, Protocol, Status, TeleportResult,
};

fn bell_of(o: Outcome) -> BellOutcome {
    match o {
        Outcome::Bell(b) => b,
        other => unreachable!("Bell measurement returned {other:?}"),
    }
}

/// Runs the POVM protocol once. `rho = None` uses `max(2, ρ_min)` for the
/// branch reached.
pub fn ramirez_teleport(zeta: &InputState, p: &ChannelParams, rho: Option<f64>, seed: u64) -> Result<TeleportResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ramirez_teleport_with_rng(zeta, p, rho, &mut rng)
}

pub fn ramirez_teleport_with_rng<R: Rng + ?Sized>(
    zeta: &InputState,
    p: &ChannelParams,
    rho: Option<f64>,
    rng: &mut R,
) -> Result<TeleportResult> {
    p.check_ramirez()?;
    let start = zeta.to_state(A).tensor(&make_cluster_channel(p))?;
    let mut run = Runner::new(start, rng);

    // Step 1
    let outs = run.state.bell_measure(A, Q1)?;
    let alice = bell_of(run.measure(Party::Alice, "bell", &[A, Q1], outs));
    run.send(Party::Alice, Party::Chika, alice.bits().to_vec());

    // Step 2
    let outs = run.state.bell_measure(Q2, Q3)?;
    let bob = bell_of(run.measure(Party::Bob, "bell", &[Q2, Q3], outs));
    run.send(Party::Bob, Party::Chika, bob.bits().to_vec());

    // Step 3
    let branch = table1_outcome(alice, bob, p);
    if branch.pre_correction != CorrectionOp::Id {
        run.correct(Party::Chika, branch.pre_correction, Q4)?;
    }
    if branch.delta0.norm() == 0.0 || branch.delta1.norm() == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "branch ({alice}, {bob}) has a vanishing channel coefficient; the POVM is undefined"
        )));
    }
    let ratio: Amplitude = branch.delta0 / branch.delta1;
    if ratio.re < 0.0 {
        run.correct(Party::Chika, CorrectionOp::Z, Q4)?;
    }
    let (d0, d1) = (branch.delta0.norm(), branch.delta1.norm());

    // Step 4
    run.append(&PureState::zero(E))?;
    run.gate(Party::Chika, &GateMatrix::cnot(), &[Q4, E])?;

    // Step 5
    let rho = match rho {
        Some(r) => r,
        None => default_rho(d0, d1)?,
    };
    let cfg = make_povm(d0, d1, rho)?;
    let outs = run.state.povm_measure(E, &cfg.elements)?;
    let status = match run.measure(Party::Chika, "povm", &[E], outs) {
        Outcome::Povm(0) => Status::Success,
        Outcome::Povm(1) => {
            run.correct(Party::Chika, CorrectionOp::Z, Q4)?;
            Status::Success
        }
        _ => Status::FailInconclusive,
    };

    let reference = zeta.to_state("ref");
    let target = run.state.reduced_density_matrix(&[Q4], MatrixBasis::Computational)?;
    let target_fidelity = fidelity(&target, &reference)?;
    let sender_fidelity_on_fail = if status == Status::Success {
        None
    } else {
        let sender = run.state.reduced_density_matrix(&[A], MatrixBasis::Computational)?;
        Some(fidelity(&sender, &reference)?)
    };
    Ok(TeleportResult {
        protocol: Protocol::Ramirez,
        status,
        target_fidelity,
        sender_fidelity_on_fail,
        transcript: run.transcript,
        final_state: run.state,
        recovered_sender: None,
    })
}

/// What Alice's pair (A,1) looks like once she has Bell-measured it.
#[derive(Debug, Clone)]
pub struct Critique {
    pub p1: f64,
    pub p2: f64,
    /// `diag(p₁, p₁, p₂, p₂)` in the Bell basis.
    pub closed_form: DensityMatrix,
    /// Outcome ensemble `Σ_k Pr_k ρ_k(A,1)` from simulating the measurement.
    pub simulated: DensityMatrix,
    /// Reduced state of (A,1) before any measurement, in the Bell basis.
    pub pre_measurement: DensityMatrix,
    /// Largest entrywise gap between `simulated` and `closed_form`.
    pub max_deviation: f64,
}

/// `p₁`, `p₂` weights of the (φ±, ψ±) outcomes of Alice's Bell measurement.
pub fn critique_weights(zeta: &InputState, p: &ChannelParams) -> (f64, f64) {
    let (a, b) = (zeta.a().norm_sqr(), zeta.b().norm_sqr());
    let (al, be, ga, et) = (
        p.alpha().norm_sqr(),
        p.beta().norm_sqr(),
        p.gamma().norm_sqr(),
        p.eta().norm_sqr(),
    );
    let p1 = (a * al + a * ga + b * be + b * et) / 2.0;
    let p2 = (b * al + b * ga + a * be + a * et) / 2.0;
    (p1, p2)
}

pub fn critique_density_matrix(zeta: &InputState, p: &ChannelParams) -> Result<Critique> {
    let (p1, p2) = critique_weights(zeta, p);
    let c = |x: f64| Amplitude::new(x, 0.0);
    let mut diag = vec![c(0.0); 16];
    for (i, w) in [p1, p1, p2, p2].into_iter().enumerate() {
        diag[i * 5] = c(w);
    }
    let closed_form = DensityMatrix::new([A, Q1], diag, MatrixBasis::Bell)?;

    let full = zeta.to_state(A).tensor(&make_cluster_channel(p))?;
    let pre_measurement = full.reduced_density_matrix(&[A, Q1], MatrixBasis::Bell)?;
    let parts = full
        .bell_measure(A, Q1)?
        .into_iter()
        .filter_map(|o| {
            let post = o.post_state?;
            Some(
                post.reduced_density_matrix(&[A, Q1], MatrixBasis::Bell)
                    .map(|m| (o.probability, m)),
            )
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let simulated = DensityMatrix::mixture(&parts)?;
    let max_deviation = simulated.max_distance(&closed_form);
    Ok(Critique {
        p1,
        p2,
        closed_form,
        simulated,
        pre_measurement,
        max_deviation,
    })
}
