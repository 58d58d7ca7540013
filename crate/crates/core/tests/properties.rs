use std::f64::consts::PI;

use proptest::prelude::*;

use cr_dcg::clifford::Tableau;
use cr_dcg::cr_model::{propagator, DriveSign};
use cr_dcg::linalg::{c, max_abs_diff, Mat4};
use cr_dcg::lindblad::{
    choi_min_eigenvalue, sequence_channel, trace_preservation_defect, DecoherenceParams,
};
use cr_dcg::noise::{delta_theta_for_infidelity, rb_infidelity_analytic};
use cr_dcg::rb::{
    clifford_infidelity, fit_decay, suggest_lengths, DecayCurve, DecayPoint, FitOptions, Scheme,
};
use cr_dcg::sequences::{
    clifford_generator_default, compile, ecr, format_sequence, length2_default, parse_sequence,
    robustness_residual, CompositeSequence, Qubit, RobustnessPattern, SequenceElement,
};
use cr_dcg::units::mhz_to_rad_per_s;
use cr_dcg::{CRParams, ErrorChannelMap, TwoQubitPauli};

fn pauli() -> impl Strategy<Value = TwoQubitPauli> {
    (0usize..16).prop_map(TwoQubitPauli::from_index)
}

/// Coefficients in MHz of the block-diagonal family, with `h_zx` kept large.
fn params() -> impl Strategy<Value = CRParams> {
    (prop::array::uniform6(-0.5f64..0.5), 1.0f64..5.0).prop_map(|([zi, ix, iy, iz, zy, zz], zx)| {
        CRParams {
            h_zi: mhz_to_rad_per_s(zi),
            h_ix: mhz_to_rad_per_s(ix),
            h_iy: mhz_to_rad_per_s(iy),
            h_iz: mhz_to_rad_per_s(iz),
            h_zx: mhz_to_rad_per_s(zx),
            h_zy: mhz_to_rad_per_s(zy),
            h_zz: mhz_to_rad_per_s(zz),
            provenance: None,
        }
    })
}

fn element() -> impl Strategy<Value = SequenceElement> {
    let angle = (-8i32..=8).prop_map(|k| k as f64 * PI / 8.0);
    let qubit = prop_oneof![Just(Qubit::One), Just(Qubit::Two)];
    prop_oneof![
        (1i32..=8, any::<bool>()).prop_map(|(k, pos)| SequenceElement::Entangling {
            theta: k as f64 * PI / 8.0,
            drive_sign: if pos {
                DriveSign::Positive
            } else {
                DriveSign::Negative
            },
        }),
        (qubit.clone(), angle.clone())
            .prop_map(|(qubit, angle)| SequenceElement::LocalX { qubit, angle }),
        (qubit, angle).prop_map(|(qubit, angle)| SequenceElement::VirtualZ { qubit, angle }),
        prop::sample::select(vec!["XZ", "XI", "ZX", "YY", "IX"]).prop_map(|p| {
            SequenceElement::Echo {
                pauli: p.parse().unwrap(),
            }
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pauli_product_matches_matrices(p in pauli(), q in pauli()) {
        let (phase, r) = p.product(q);
        let lhs = p.matrix() * q.matrix();
        prop_assert!(max_abs_diff(&lhs, &(r.matrix() * phase.value())) < 1e-15);
        let swapped = q.matrix() * p.matrix();
        let sign = if p.commutes_with(q) { 1.0 } else { -1.0 };
        prop_assert!(max_abs_diff(&lhs, &(swapped * c(sign, 0.0))) < 1e-15);
    }

    #[test]
    fn propagator_is_a_semigroup(p in params(), t1 in 0.0f64..300e-9, t2 in 0.0f64..300e-9) {
        let a = propagator(&p, t1, DriveSign::Positive);
        let b = propagator(&p, t2, DriveSign::Positive);
        let ab = propagator(&p, t1 + t2, DriveSign::Positive);
        prop_assert!(max_abs_diff((a * b).matrix(), ab.matrix()) < 1e-10);
    }

    #[test]
    fn ecr_equals_length2(p in params()) {
        let a = compile(&ecr(), &p, None);
        let b = compile(&length2_default(), &p, None);
        prop_assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
    }

    #[test]
    fn channel_map_reconstructs(p in params()) {
        let seq = clifford_generator_default();
        let actual = compile(&seq, &p, None);
        let m = ErrorChannelMap::between(seq.ideal_target(), &actual);
        let delta = seq.ideal_target().matrix().adjoint() * actual.matrix() - Mat4::identity();
        prop_assert!(max_abs_diff(&m.reconstruct(), &delta) < 1e-12);
    }

    #[test]
    fn clifford_table_entries_recompose(idx in 0usize..11520, jdx in 0usize..11520) {
        let table = Scheme::Length5.table();
        let g = Scheme::Length5.sequence();
        let u = table.recompose(idx, g.ideal_target());
        let t = Tableau::from_unitary(u.matrix()).expect("Clifford");
        prop_assert_eq!(&t, &table.get(idx).tableau);
        let both = t.then(&table.get(jdx).tableau);
        prop_assert!(both.is_symplectic());
        prop_assert_eq!(both.then(&both.inverse()), Tableau::identity());
    }

    #[test]
    fn sequence_text_round_trips(elements in prop::collection::vec(element(), 1..10)) {
        let seq = CompositeSequence::new("prop", elements).unwrap();
        let back = parse_sequence(&format_sequence(&seq)).unwrap();
        prop_assert_eq!(back.elements().len(), seq.elements().len());
        let p = CRParams::calibrated();
        prop_assert!(max_abs_diff(compile(&back, p, None).matrix(), compile(&seq, p, None).matrix()) < 1e-12);
    }

    #[test]
    fn even_alternating_patterns_cancel(half in 1usize..8, theta in -3.0f64..3.0) {
        let r = robustness_residual(&RobustnessPattern::alternating_commuting(2 * half, theta));
        prop_assert!(r < 1e-12);
    }

    #[test]
    fn delta_theta_inversion(r in 1e-7f64..0.2) {
        let dt = delta_theta_for_infidelity(r).unwrap();
        prop_assert!((rb_infidelity_analytic(dt) - r).abs() < 1e-12 * r.max(1e-3));
    }

    #[test]
    fn fit_recovers_exact_decays(a in 0.5f64..0.8, p in 0.95f64..0.999, b in 0.2f64..0.3) {
        let ks = suggest_lengths(clifford_infidelity(p, 2), 2, 14);
        let curve = DecayCurve {
            qubit_count: 2,
            points: ks.iter().map(|&k| DecayPoint { k, mean_survival: a * p.powf(k as f64) + b, stderr: 1e-3, n: 100 }).collect(),
        };
        let fit = fit_decay(&curve, &FitOptions::default()).unwrap();
        prop_assert!((fit.p - p).abs() < 1e-7, "{:?}", fit);
        prop_assert!((clifford_infidelity(fit.p, 2) - clifford_infidelity(p, 2)).abs() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lindblad_channels_are_cptp(t1 in 1e-5f64..1e-1, ratio in 0.05f64..2.0) {
        let dec = DecoherenceParams::new(t1, t1 * ratio).unwrap();
        for seq in [length2_default(), clifford_generator_default()] {
            let ch = sequence_channel(&seq, CRParams::calibrated(), &dec);
            prop_assert!(trace_preservation_defect(&ch) < 1e-10);
            prop_assert!(choi_min_eigenvalue(&ch) > -1e-8);
        }
    }
}
