use cluster_teleport::protocols::{
    make_povm, proposed_teleport, ramirez_teleport, ua_from_ratio, ChannelParams, InputState, Transcript,
};
use cluster_teleport::qcore::{Amplitude, GateMatrix, MeasureBasis, PureState};
use proptest::prelude::*;

type C = Amplitude;

const LABELS: [&str; 3] = ["x", "y", "z"];

fn unitary(t: f64, a: f64, b: f64, g: f64) -> GateMatrix {
    let ph = C::from_polar(1.0, g);
    GateMatrix::new(
        "R",
        vec![
            ph * C::from_polar(t.cos(), a),
            ph * C::from_polar(t.sin(), b),
            -ph * C::from_polar(t.sin(), -b),
            ph * C::from_polar(t.cos(), -a),
        ],
    )
    .unwrap()
}

fn angles() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.0..1.6f64, 0.0..6.3f64, 0.0..6.3f64, 0.0..6.3f64)
}

fn register() -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 8)
        .prop_filter("non-zero", |v| v.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3))
        .prop_map(|v| {
            let amps: Vec<C> = v.into_iter().map(|(r, i)| C::new(r, i)).collect();
            PureState::from_unnormalized(LABELS, amps).unwrap().0
        })
}

/// Phase-aligned channel with |α| ≤ |η| and |β| ≤ |γ|.
fn channel() -> impl Strategy<Value = ChannelParams> {
    (prop::array::uniform4(0.05..1.0f64), 0.0..6.3f64, 0.0..6.3f64).prop_map(|(mut m, t1, t2)| {
        if m[0] > m[3] {
            m.swap(0, 3);
        }
        if m[1] > m[2] {
            m.swap(1, 2);
        }
        let n = m.iter().map(|x| x * x).sum::<f64>().sqrt();
        ChannelParams::new(
            C::from_polar(m[0] / n, t1),
            C::from_polar(m[1] / n, t2),
            C::from_polar(m[2] / n, t2),
            C::from_polar(m[3] / n, t1),
        )
        .unwrap()
    })
}

fn input() -> impl Strategy<Value = InputState> {
    (0.01..1.0f64, 0.0..6.3f64).prop_map(|(a, phi)| {
        InputState::new(C::new(a, 0.0), C::from_polar((1.0 - a * a).sqrt(), phi)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gates_stay_unitary((t, a, b, g) in angles()) {
        let u = unitary(t, a, b, g);
        prop_assert!(u.unitarity_deviation() < 1e-12);
        prop_assert!(GateMatrix::controlled(&u).unitarity_deviation() < 1e-12);
        prop_assert!(u.compose(&u.adjoint()).unwrap().max_distance(&GateMatrix::identity(1)) < 1e-12);
    }

    #[test]
    fn gates_preserve_norm(s in register(), (t, a, b, g) in angles(), i in 0usize..3, k in 1usize..3) {
        let j = (i + k) % 3;
        let u = unitary(t, a, b, g);
        let out = s
            .apply_gate(&GateMatrix::controlled(&u), &[LABELS[i], LABELS[j]])
            .unwrap()
            .apply_gate(&u, &[LABELS[j]])
            .unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurements_are_complete(s in register(), d0 in 0.05..1.0f64, d1 in 0.05..1.0f64) {
        let povm = make_povm(d0, d1, 3.0 / d0.min(d1).powi(2)).unwrap();
        let sums = [
            s.measure_projective("x", MeasureBasis::Z).unwrap(),
            s.measure_projective("y", MeasureBasis::X).unwrap(),
            s.bell_measure("y", "z").unwrap(),
            s.povm_measure("z", &povm.elements).unwrap(),
        ]
        .map(|outs| outs.iter().map(|o| o.probability).sum::<f64>());
        for total in sums {
            prop_assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn coupling_unitary_is_an_involution(r in -1.0..=1.0f64) {
        let ua = ua_from_ratio(r).unwrap();
        prop_assert!(ua.unitarity_deviation() < 1e-12);
        prop_assert!(ua.compose(&ua).unwrap().max_distance(&GateMatrix::identity(1)) < 1e-12);
    }

    #[test]
    fn transcripts_depend_only_on_seed(zeta in input(), p in channel(), seed in any::<u64>()) {
        let a = proposed_teleport(&zeta, &p, seed).unwrap();
        let b = proposed_teleport(&zeta, &p, seed).unwrap();
        prop_assert_eq!(
            serde_json::to_string(&a.transcript).unwrap(),
            serde_json::to_string(&b.transcript).unwrap()
        );
        let a = ramirez_teleport(&zeta, &p, None, seed).map(|r| serde_json::to_string(&r.transcript).unwrap());
        let b = ramirez_teleport(&zeta, &p, None, seed).map(|r| serde_json::to_string(&r.transcript).unwrap());
        prop_assert_eq!(a.ok(), b.ok());
    }

    #[test]
    fn transcript_json_round_trips(zeta in input(), p in channel(), seed in any::<u64>()) {
        let t = proposed_teleport(&zeta, &p, seed).unwrap().transcript;
        let back: Transcript = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }
}
