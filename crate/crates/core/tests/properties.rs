use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use oscint::reference::integrate_oscillatory;
use oscint::{
    build_scheme, build_scheme_with, delta_v, enumerate_words, iterated_integral, iterated_integral_poly,
    make_oscillator, CoefficientMode, ExpMacroField, Letter, OscillatorKind, OscillatorSpec, TruncationPolicy, Word,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn oscillator() -> impl Strategy<Value = OscillatorSpec> {
    let kind = prop_oneof![
        Just(OscillatorKind::Exp),
        Just(OscillatorKind::Cos),
        Just(OscillatorKind::Sin),
        Just(OscillatorKind::Fourier),
    ];
    (kind, 5.0..300.0f64, 0.0..2.0 * PI, prop::collection::vec(-1.0..1.0f64, 4)).prop_map(
        |(kind, omega, phase, raw)| {
            let coeffs: BTreeMap<i32, Complex64> =
                [(-2, raw[0]), (-1, raw[1]), (1, raw[2]), (3, raw[3])].into_iter().map(|(k, x)| (k, c(x + 1.5))).collect();
            let coeffs = (kind == OscillatorKind::Fourier).then_some(&coeffs);
            make_oscillator(kind, omega, phase, 0.0, coeffs).unwrap()
        },
    )
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::bool::ANY, 1..6)
        .prop_map(|bits| Word::new(bits.into_iter().map(|b| if b { Letter::Osc } else { Letter::Time }).collect()).unwrap())
}

fn arrangements(q0: usize, q1: usize) -> Vec<Word> {
    let n = q0 + q1;
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == q1)
        .map(|mask| Word::new((0..n).map(|i| if mask >> i & 1 == 1 { Letter::Osc } else { Letter::Time }).collect()).unwrap())
        .collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shuffle_identity(osc in oscillator(), q0 in 0usize..4, q1 in 0usize..4, t_n in 0.0..5.0f64, h in 0.01..0.8f64) {
        prop_assume!(q0 + q1 > 0);
        let sum: Complex64 = arrangements(q0, q1).iter().map(|w| iterated_integral(w, &osc, t_n, h).value).sum();
        let expect = delta_v(&osc, t_n, h).powu(q1 as u32) * h.powi(q0 as i32) / (factorial(q0) * factorial(q1));
        prop_assert!((sum - expect).norm() < 1e-11);
    }

    #[test]
    fn iterated_integrals_match_nested_quadrature_of_last_letter(osc in oscillator(), w in word(), h in 0.05..0.5f64) {
        // d/ds I_w(s) = (v(s) if the outer letter is V else 1) * I_inner(s)
        let poly = iterated_integral_poly(&w, &osc);
        let letters = w.letters();
        let inner = if letters.len() > 1 {
            iterated_integral_poly(&Word::new(letters[..letters.len() - 1].to_vec()).unwrap(), &osc)
        } else {
            oscint::BasisPoly::one(osc.omega())
        };
        let theta = osc.theta(0.0);
        let outer_osc = *letters.last().unwrap() == Letter::Osc;
        let f = |s: f64| inner.eval(s, theta) * if outer_osc { osc.value(s) } else { c(1.0) };
        let quad = integrate_oscillatory(f, 0.0, h, osc.omega() * 5.0, 1e-13).unwrap();
        prop_assert!((poly.eval(h, theta) - quad.value).norm() < 1e-10);
    }

    #[test]
    fn contributions_sum_to_increment(osc in oscillator(), alpha in -1.0..1.0f64, mu in -2.0..2.0f64, u0 in 0.5..1.5f64, h in 0.01..0.2f64) {
        let table = build_scheme(&osc, &TruncationPolicy::from_regime(4.0, 2.0, 0.0).unwrap());
        let field = ExpMacroField::nonlinear(c(alpha), c(mu));
        let r = table.step(&field, 0.4, &[c(u0)], h).unwrap();
        let total: Complex64 = r.contributions.iter().map(|v| v[0]).sum();
        prop_assert!((r.u_next[0] - c(u0) - total).norm() < 1e-14);
        prop_assert_eq!(r.contributions.len(), table.len());
    }

    #[test]
    fn first_order_step_is_euler_like(osc in oscillator(), alpha in -1.0..1.0f64, mu in -2.0..2.0f64, u0 in 0.5..1.5f64, t_n in 0.0..3.0f64, h in 0.01..0.3f64) {
        let table = build_scheme(&osc, &TruncationPolicy::new(1.0, 1.0).unwrap());
        let field = ExpMacroField::nonlinear(c(alpha), c(mu));
        let r = table.step(&field, t_n, &[c(u0)], h).unwrap();
        let expect = c(u0) + c(alpha * u0 * h) + c(mu * u0 * u0) * delta_v(&osc, t_n, h);
        prop_assert!((r.u_next[0] - expect).norm() < 1e-14);
    }

    #[test]
    fn phase_reuse_matches_rebuild(osc in oscillator(), phase in 0.0..2.0 * PI, h in 0.01..0.2f64) {
        let policy = TruncationPolicy::new(3.0, 2.0).unwrap();
        let field = ExpMacroField::nonlinear(c(0.3), c(0.7));
        let reused = build_scheme(&osc, &policy).with_phase(phase);
        let rebuilt = build_scheme(&osc.with_phase(phase), &policy);
        let a = reused.step(&field, 0.2, &[c(1.0)], h).unwrap().u_next[0];
        let b = rebuilt.step(&field, 0.2, &[c(1.0)], h).unwrap().u_next[0];
        prop_assert_eq!(a, b);
    }

    #[test]
    fn retention_is_exact(k0 in 0.5..5.0f64, k1 in 0.5..5.0f64) {
        let policy = TruncationPolicy::new(k0, k1).unwrap();
        let kept = enumerate_words(&policy);
        prop_assert!(kept.iter().all(|w| policy.retains(w)));
        let max_len = (k0.floor() + k1.floor()) as usize;
        let mut all = 0;
        for len in 1..=max_len {
            for mask in 0u32..1 << len {
                let w = Word::new((0..len).map(|i| if mask >> i & 1 == 1 { Letter::Osc } else { Letter::Time }).collect()).unwrap();
                if policy.retains(&w) {
                    all += 1;
                }
            }
        }
        prop_assert_eq!(kept.len(), all);
    }

    #[test]
    fn exact_mode_differs_only_by_dropped_terms(h in 0.02..0.2f64) {
        // The consistent table drops -h cos(wh)/w^2 terms from the linear case.
        let omega = 100.0;
        let osc = make_oscillator(OscillatorKind::Cos, omega, 0.0, 0.0, None).unwrap();
        let policy = TruncationPolicy::from_regime(4.0, 2.0, 0.0).unwrap();
        let field = ExpMacroField::linear(c(10.0));
        let exact = build_scheme_with(&osc, &policy, CoefficientMode::Exact).step(&field, 0.0, &[c(1.0)], h).unwrap();
        let consistent = build_scheme(&osc, &policy).step(&field, 0.0, &[c(1.0)], h).unwrap();
        let dropped = -10.0 * h * (omega * h).cos() / (omega * omega) + 10.0 * (omega * h).sin() / omega.powi(3);
        prop_assert!((exact.u_next[0] - consistent.u_next[0] - c(dropped)).norm() < 1e-13);
    }
}

#[test]
fn monte_carlo_phase_average() {
    let omega = 100.0;
    let table = build_scheme(
        &make_oscillator(OscillatorKind::Cos, omega, 0.0, 0.0, None).unwrap(),
        &TruncationPolicy::from_regime(4.0, 2.0, 0.0).unwrap(),
    );
    let field = ExpMacroField::nonlinear(c(0.4), c(1.5));
    let (t_n, h) = (0.2, 0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 10_000;
    let samples: Vec<f64> = (0..n)
        .map(|_| {
            let phase = rng.gen_range(0.0..2.0 * PI);
            table.with_phase(phase).step(&field, t_n, &[c(0.9)], h).unwrap().u_next[0].re
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    let averaged = table.step_phase_averaged(&field, t_n, &[c(0.9)], h).unwrap().u_next[0].re;
    assert!((mean - averaged).abs() < 3.0 * se, "mean {mean}, averaged {averaged}, se {se}");
}

#[test]
fn phase_averaging_ignores_pure_drift() {
    let table = build_scheme(
        &make_oscillator(OscillatorKind::Sin, 60.0, 0.3, 0.0, None).unwrap(),
        &TruncationPolicy::from_regime(4.0, 2.0, 0.0).unwrap(),
    );
    let field = ExpMacroField::nonlinear(c(0.7), c(0.0));
    let plain = table.step(&field, 0.1, &[c(1.2)], 0.1).unwrap();
    let averaged = table.step_phase_averaged(&field, 0.1, &[c(1.2)], 0.1).unwrap();
    assert!((plain.u_next[0] - averaged.u_next[0]).norm() < 1e-15);
}
