use proptest::prelude::*;
use tcflow::cantor::twist::{det2, numeric_jacobian, JACOBIAN_STEP};
use tcflow::cantor::{encode_config, gs_to_block_map, TwistMap};
use tcflow::lift::{flow_integrate, lift_vf, reachability_harness, PlanarField, ProductChartState};
use tcflow::poisson::{normal_form_bivector, sharp_at, ScalarField4};
use tcflow::shift::{gs_step, tm_to_gs};
use tcflow::tm::{run_bounded, tm_step, Move, StateId, Sym, TapeConfig, Transition, TuringMachine};

/// Machines with up to 3 working states, a halting state last, and 2 or 3
/// symbols; each transition may be missing.
fn machine() -> impl Strategy<Value = TuringMachine> {
    (1usize..=3, 2usize..=3).prop_flat_map(|(n_q, n_s)| {
        let entry = proptest::option::weighted(0.85, (0..=n_q as u16, 0..n_s as u16, any::<bool>()));
        proptest::collection::vec(entry, n_q * n_s).prop_map(move |cells| {
            let alphabet = (0..n_s).map(|i| i.to_string()).collect();
            let states = (0..=n_q).map(|i| format!("Q{i}")).collect();
            let entries = cells.into_iter().enumerate().filter_map(|(i, e)| {
                let (next, write, right) = e?;
                let (q, s) = (i / n_s, i % n_s);
                let dir = if right { Move::Right } else { Move::Left };
                Some((StateId(q as u16), Sym(s as u16), Transition { next: StateId(next), write: Sym(write), dir }))
            });
            TuringMachine::new(alphabet, states, Sym(0), StateId(0), StateId(n_q as u16), entries).expect("well-formed")
        })
    })
}

fn tape(tm: &TuringMachine) -> impl Strategy<Value = TapeConfig> {
    let n_s = tm.alphabet().len() as u16;
    let n_q = tm.states().len() as u16;
    let blank = tm.blank();
    (proptest::collection::vec(0..n_s, 0..6), 0..n_s, proptest::collection::vec(0..n_s, 0..6), 0..n_q).prop_map(
        move |(l, h, r, q)| {
            TapeConfig::new(
                l.into_iter().map(Sym).collect(),
                Sym(h),
                r.into_iter().map(Sym).collect(),
                StateId(q),
                blank,
            )
        },
    )
}

fn machine_and_tape() -> impl Strategy<Value = (TuringMachine, TapeConfig)> {
    machine().prop_flat_map(|tm| {
        let t = tape(&tm);
        (Just(tm), t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stepping_is_deterministic((tm, c) in machine_and_tape()) {
        prop_assert_eq!(tm_step(&tm, &c), tm_step(&tm, &c));
    }

    #[test]
    fn traces_are_prefixes((tm, c) in machine_and_tape(), n in 0usize..20, extra in 0usize..20) {
        let short = run_bounded(&tm, &c, n);
        let long = run_bounded(&tm, &c, n + extra);
        prop_assert!(long.configs.starts_with(&short.configs));
    }

    #[test]
    fn encoding_round_trips((tm, c) in machine_and_tape()) {
        let compiled = tm_to_gs(&tm);
        let seq = compiled.encode(&c);
        prop_assert_eq!(compiled.decode(&seq), Some(c));
        let p = encode_config(&seq, compiled.alphabet.len());
        prop_assert!(p.in_cantor_square());
        prop_assert_eq!(p.to_seq(), Some(seq));
    }

    #[test]
    fn machine_shift_and_block_map_commute((tm, c) in machine_and_tape()) {
        let compiled = tm_to_gs(&tm);
        let map = gs_to_block_map(&compiled.gs);
        let len = compiled.alphabet.len();
        let mut cfg = c;
        let mut seq = compiled.encode(&cfg);
        let mut p = encode_config(&seq, len);
        for _ in 0..25 {
            prop_assert_eq!(&compiled.encode(&cfg), &seq);
            prop_assert_eq!(&encode_config(&seq, len), &p);
            cfg = tm_step(&tm, &cfg).into_config();
            seq = gs_step(&compiled.gs, &seq);
            p = map.apply(&p).expect("orbit stays in the Cantor square");
        }
        prop_assert!(map.all_unimodular());
    }

    #[test]
    fn harness_agrees_with_direct_runs(tm in machine(), budget in 0usize..60) {
        prop_assert!(reachability_harness(&tm, budget).is_ok());
    }

    #[test]
    fn twist_maps_preserve_area(
        cx in -0.2f64..0.2, cy in -0.2f64..0.2,
        r_in in 0.05f64..0.3, width in 0.1f64..0.4, angle in -4.0f64..4.0,
        px in -0.7f64..0.7, py in -0.7f64..0.7,
    ) {
        let t = TwistMap::new([cx, cy], r_in, r_in + width, angle).unwrap();
        prop_assert!((det2(t.jacobian([px, py])) - 1.0).abs() < 1e-12);
        prop_assert!((det2(numeric_jacobian(|p| t.apply(p), [px, py], JACOBIAN_STEP)) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lifted_flows_never_touch_the_fiber(
        x1 in -0.6f64..0.6, x2 in -0.6f64..0.6, y1 in 0.0f64..1.0, y2 in 0.0f64..1.0, t in 0.0f64..2.0,
    ) {
        let s = ProductChartState::new([x1, x2], [y1, y2]).unwrap();
        for x in [PlanarField::rotation(), PlanarField::twist("sigma", TwistMap::sigma())] {
            let tr = flow_integrate(&lift_vf(&x), &s, t, 0.01).unwrap();
            prop_assert!(tr.states.iter().all(|st| st.fiber.map(f64::to_bits) == s.fiber.map(f64::to_bits)));
            let r0 = x1.hypot(x2);
            let r1 = tr.last().horizontal[0].hypot(tr.last().horizontal[1]);
            prop_assert!((r0 - r1).abs() < 1e-9);
        }
    }

    #[test]
    fn sharp_pairs_covectors_through_the_bivector(
        q in proptest::array::uniform4(-1.0f64..1.0),
        a in proptest::array::uniform4(-1.0f64..1.0),
        b in proptest::array::uniform4(-1.0f64..1.0),
    ) {
        let pi = normal_form_bivector(&ScalarField4::new("k", |q| 2.0 + q[0].cos())).unwrap();
        let v = sharp_at(&pi, &q, &a);
        let lhs: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
        prop_assert!((lhs - pi.pair(&q, &a, &b)).abs() < 1e-12);
        prop_assert!((pi.pair(&q, &a, &b) + pi.pair(&q, &b, &a)).abs() < 1e-12);
    }
}
