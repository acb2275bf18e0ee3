use hpdns::coefficients::{distribution_su11, distribution_su2, PhotonDistribution};
use hpdns::oracle::{oracle_state, Truncation};
use hpdns::stats::{
    magnitude_for_abscissa, mandel_q_su11, mandel_q_su2, mean_n2_su2, mean_n_su2, parabola_su11,
    parabola_su2, q_boundary_su11, q_boundary_su2, Classification,
};
use hpdns::{AlgebraKind, DnsParams, Error, Su11Params, Su2Params};
use proptest::prelude::*;

fn q_from(d: &PhotonDistribution) -> f64 {
    let (m1, m2) = (d.moment(1), d.moment(2));
    (m2 - m1 * m1 - m1) / m1
}

/// Class from Q, or from the sign of Q' where the mean vanishes.
fn class_of(p: &DnsParams) -> Classification {
    let q = match p {
        DnsParams::Su2(p) => mandel_q_su2(p),
        DnsParams::Su11(p) => mandel_q_su11(p),
    };
    match q {
        Ok(s) => s.classification,
        Err(Error::UndefinedQ) => Classification::of(hpdns::stats::q_prime(p)),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn su2_moments_match_distribution() {
    for label in [1u32, 2, 5, 10, 20, 40] {
        for n in [0, 1, label.min(3), label.min(6)] {
            for i in 0..25 {
                let r = 1.4 * f64::from(i) / 24.0;
                let p = Su2Params::new(label, n, r, 0.3).unwrap();
                let d = distribution_su2(&p).unwrap();
                assert!((mean_n_su2(&p) - d.moment(1)).abs() < 1e-8);
                assert!((mean_n2_su2(&p) - d.moment(2)).abs() < 1e-8);
                if let Ok(q) = mandel_q_su2(&p) {
                    if d.moment(1) > 1e-6 {
                        assert!(
                            (q.q - q_from(&d)).abs() < 1e-8,
                            "M = {label} n = {n} r = {r}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn su11_q_matches_distribution() {
    for label in [1u32, 2, 5, 10] {
        for n in [0u32, 1, 3] {
            for &big_r in &[0.1, 0.5, 1.0, 1.5] {
                let p = Su11Params::new(label, n, big_r, 0.0).unwrap();
                let d = distribution_su11(&p, Truncation::Auto).unwrap();
                let q = mandel_q_su11(&p).unwrap();
                assert!((q.mean_n - d.moment(1)).abs() < 1e-8 * q.mean_n.max(1.0));
                assert!(
                    (q.q - q_from(&d)).abs() < 1e-8,
                    "M = {label} n = {n} R = {big_r}: {} vs {}",
                    q.q,
                    q_from(&d)
                );
            }
        }
    }
}

#[test]
fn su11_q_matches_oracle_state() {
    // Independent of every closed form: moments of the truncated exponential.
    for (label, n, big_r) in [(1u32, 2u32, 0.4), (3, 1, 0.9), (4, 4, 0.2)] {
        let s = oracle_state(AlgebraKind::Su11, label, n, big_r, 0.0, Truncation::Auto).unwrap();
        let probs = s.probabilities();
        let m1: f64 = probs.iter().enumerate().map(|(m, p)| m as f64 * p).sum();
        let m2: f64 = probs
            .iter()
            .enumerate()
            .map(|(m, p)| (m * m) as f64 * p)
            .sum();
        let q = mandel_q_su11(&Su11Params::new(label, n, big_r, 0.0).unwrap()).unwrap();
        assert!((q.q - (m2 - m1 * m1 - m1) / m1).abs() < 1e-8);
    }
}

#[test]
fn su2_roots_zero_q() {
    for label in 1..=40u32 {
        for n in 0..=label {
            let b = q_boundary_su2(label, n).unwrap();
            for &s in &b.roots {
                let r = magnitude_for_abscissa(AlgebraKind::Su2, s);
                let p = Su2Params::new(label, n, r, 0.0).unwrap();
                match mandel_q_su2(&p) {
                    Ok(q) => assert!(q.q.abs() < 1e-8, "M = {label} n = {n} s = {s}: {}", q.q),
                    Err(Error::UndefinedQ) => assert!(parabola_su2(label, n).eval(s).abs() < 1e-12),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

#[test]
fn su2_tangency_cases() {
    for label in 1..=30u32 {
        for n in [0, label] {
            let b = q_boundary_su2(label, n).unwrap();
            assert!(b.extremum_value.abs() < 1e-10);
            assert!(b.is_tangent());
        }
    }
    let b = q_boundary_su2(2, 1).unwrap();
    assert!(b.extremum_value.abs() < 1e-10);
    assert_eq!(b.roots, vec![0.5]);
    // Everything else has a positive maximum strictly inside (0, 1).
    for label in 3..=30u32 {
        for n in 1..label {
            let b = q_boundary_su2(label, n).unwrap();
            assert!(b.extremum_value > 0.0);
            assert!(0.0 < b.roots[0] && b.roots[0] < b.roots[1] && b.roots[1] < 1.0);
        }
    }
}

#[test]
fn su2_classification_follows_three_cases() {
    let s_grid: Vec<f64> = (0..=200).map(|i| f64::from(i) / 200.0).collect();
    for label in 1..=20u32 {
        for n in 0..=label {
            let b = q_boundary_su2(label, n).unwrap();
            for &s in &s_grid {
                let p = DnsParams::new(
                    AlgebraKind::Su2,
                    label,
                    n,
                    magnitude_for_abscissa(AlgebraKind::Su2, s),
                    0.0,
                )
                .unwrap();
                let got = class_of(&p);
                let near = |x: f64| (s - x).abs() < 1e-9;
                let want = if b.roots.iter().any(|&x| near(x)) {
                    Classification::Poissonian
                } else if b.roots.len() == 2 && b.roots[0] < s && s < b.roots[1] {
                    Classification::Super
                } else {
                    Classification::Sub
                };
                assert_eq!(got, want, "M = {label} n = {n} s = {s}");
            }
            for &root in &b.roots {
                let p = DnsParams::new(
                    AlgebraKind::Su2,
                    label,
                    n,
                    magnitude_for_abscissa(AlgebraKind::Su2, root),
                    0.0,
                )
                .unwrap();
                assert_eq!(
                    class_of(&p),
                    Classification::Poissonian,
                    "M = {label} n = {n} root {root}"
                );
            }
        }
    }
}

#[test]
fn su11_classification_follows_three_cases() {
    let s_grid: Vec<f64> = (0..=200).map(|i| f64::from(i) / 40.0).collect();
    for label in 1..=10u32 {
        for n in 0..=6u32 {
            let root = q_boundary_su11(label, n).unwrap().roots[0];
            for &s in &s_grid {
                let p = DnsParams::new(
                    AlgebraKind::Su11,
                    label,
                    n,
                    magnitude_for_abscissa(AlgebraKind::Su11, s),
                    0.0,
                )
                .unwrap();
                let want = if (s - root).abs() < 1e-9 {
                    Classification::Poissonian
                } else if s < root {
                    Classification::Sub
                } else {
                    Classification::Super
                };
                assert_eq!(class_of(&p), want, "M = {label} n = {n} s = {s}");
            }
            let p = DnsParams::new(
                AlgebraKind::Su11,
                label,
                n,
                magnitude_for_abscissa(AlgebraKind::Su11, root),
                0.0,
            )
            .unwrap();
            assert_eq!(class_of(&p), Classification::Poissonian);
        }
    }
}

#[test]
fn su11_vacuum_seed_poissonian_only_at_origin() {
    for label in 1..=8u32 {
        let p = DnsParams::new(AlgebraKind::Su11, label, 0, 0.0, 0.0).unwrap();
        assert_eq!(class_of(&p), Classification::Poissonian);
        for i in 1..50 {
            let p = DnsParams::new(AlgebraKind::Su11, label, 0, 0.03 * f64::from(i), 0.0).unwrap();
            assert_eq!(class_of(&p), Classification::Super);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn su2_parabola_is_concave_with_vertex_maximum(label in 1u32..60, n_frac in 0.0f64..=1.0, s in 0.0f64..1.0) {
        let n = (n_frac * f64::from(label)).round() as u32;
        let b = q_boundary_su2(label, n).unwrap();
        let q = parabola_su2(label, n);
        prop_assert!(q.lead < 0.0);
        prop_assert!(q.eval(s) <= b.extremum_value + 1e-9 * b.extremum_value.abs().max(1.0));
    }

    #[test]
    fn su11_parabola_is_convex_with_one_nonnegative_root(label in 1u32..60, n in 0u32..40) {
        let q = parabola_su11(label, n);
        prop_assert!(q.lead > 0.0);
        let b = q_boundary_su11(label, n).unwrap();
        prop_assert_eq!(b.roots.len(), 1);
        prop_assert!(b.roots[0] >= 0.0);
        prop_assert!(q.eval(b.roots[0]).abs() < 1e-9 * (1.0 + f64::from(n)));
    }

    #[test]
    fn q_is_phase_independent(label in 1u32..30, n_frac in 0.0f64..=1.0, r in 0.01f64..1.5, a in -6.0f64..6.0, b in -6.0f64..6.0) {
        let n = (n_frac * f64::from(label)).round() as u32;
        let qa = mandel_q_su2(&Su2Params::new(label, n, r, a).unwrap());
        let qb = mandel_q_su2(&Su2Params::new(label, n, r, b).unwrap());
        prop_assert_eq!(qa, qb);
    }
}
