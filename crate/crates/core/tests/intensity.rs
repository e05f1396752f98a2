//! First intensity: reference values, the three computation routes, the
//! dual-ℓ² form at basis points and Bessel arch comparability.

use std::f64::consts::PI;

use debranges::intensity::{
    ek_default_step, expected_count, intensity_curve, rho1_bergman, rho1_closed, rho1_ek_fd,
    rho1_rice_covariance, rice_covariance, Method,
};
use debranges::spaces::{basis_points, phase_jet, SpaceSpec};
use debranges::specfun::bessel_zero;
use proptest::prelude::*;

/// (x, ρ₁(x)) computed with mpmath from the closed form in φ′, φ″, φ‴.
const AIRY_RHO: [(f64, f64); 7] = [
    (-100.0, 1.8380095816844564),
    (-20.0, 0.8264120855861423),
    (-3.0, 0.3386203062425992),
    (0.0, 0.054540061277929056),
    (2.0, 0.02586157338573366),
    (5.0, 0.013699214498117365),
    (10.0, 0.00750214305831224),
];

const BESSEL_RHO: [(f64, [(f64, f64); 7]); 3] = [
    (
        0.0,
        [
            (-400.0, 0.00019909889080082458),
            (-50.0, 0.0016106882636693755),
            (-5.0, 0.012727329940132787),
            (0.1, 0.023260979776329672),
            (3.0, 0.03291363577854833),
            (50.0, 0.012792238051230065),
            (900.0, 0.0029665576906116875),
        ],
    ),
    (
        0.5,
        [
            (-400.0, 0.0001989436788648358),
            (-50.0, 0.0015898428288564374),
            (-5.0, 0.009165607129641961),
            (0.1, 0.01401633995597496),
            (3.0, 0.018226982806395765),
            (50.0, 0.014826874881623342),
            (900.0, 0.0030282389366599553),
        ],
    ),
    (
        3.0,
        [
            (-400.0, 0.0001936789307909037),
            (-50.0, 0.0011995436543809084),
            (-5.0, 0.002832288364594853),
            (0.1, 0.003258039636948088),
            (3.0, 0.0035470028899552614),
            (50.0, 0.013919224432146467),
            (900.0, 0.003131047667079806),
        ],
    ),
];

/// (ν, x, φ′(x), ρ₁(x)) on the negative axis for larger orders, where the
/// entire-pair formula cancels badly.
const BESSEL_NEGATIVE: [(f64, f64, f64, f64); 12] = [
    (7.5, -50.0, 0.0004475476847309425, 0.0005993872335693129),
    (7.5, -200.0, 0.0001256510743170667, 0.00029125708521961317),
    (7.5, -1000.0, 1.4962617360074017e-05, 7.48081739283612e-05),
    (7.5, -5000.0, 1.4098152268578828e-06, 1.5728872247113146e-05),
    (7.5, -30000.0, 9.650680337099205e-08, 2.6475237941150438e-06),
    (
        7.5,
        -100000.0,
        1.5847963387283096e-08,
        7.953236345276104e-07,
    ),
    (20.0, -50.0, 5.0393409466324274e-05, 0.00015027755923446894),
    (20.0, -200.0, 3.348412945303166e-05, 0.00011876329515300286),
    (20.0, -1000.0, 9.646124648654136e-06, 5.50309158994802e-05),
    (
        20.0,
        -5000.0,
        1.2745567572461994e-06,
        1.4675119729242077e-05,
    ),
    (20.0, -30000.0, 9.485904545193778e-08, 2.616894854421244e-06),
    (
        20.0,
        -100000.0,
        1.5766214668863612e-08,
        7.92565959009852e-07,
    ),
];

fn windows() -> Vec<(SpaceSpec, f64, f64)> {
    vec![
        (SpaceSpec::PaleyWiener { a: PI }, -100.0, 100.0),
        (SpaceSpec::PaleyWiener { a: 0.3 }, -100.0, 100.0),
        (SpaceSpec::Airy, -200.0, 30.0),
        (SpaceSpec::Bessel { nu: 0.5 }, -1e4, 1e4),
        (SpaceSpec::Bessel { nu: 0.0 }, -1e4, 1e4),
        (SpaceSpec::Bessel { nu: 3.0 }, -1e3, 2e3),
        (SpaceSpec::Bessel { nu: 20.0 }, -2e5, 2e3),
        (SpaceSpec::Rational { a: 1.0, n: 2 }, -50.0, 50.0),
        (SpaceSpec::Rational { a: 2.0, n: 7 }, -50.0, 50.0),
    ]
}

#[test]
fn closed_form_matches_reference() {
    for (x, r) in AIRY_RHO {
        let v = rho1_closed(&SpaceSpec::Airy, x).unwrap();
        assert!((v - r).abs() <= 1e-9 * r, "Airy ρ₁({x}) = {v} vs {r}");
    }
    for (nu, table) in BESSEL_RHO {
        for (x, r) in table {
            let v = rho1_closed(&SpaceSpec::Bessel { nu }, x).unwrap();
            assert!(
                (v - r).abs() <= 1e-9 * r,
                "Bessel ν = {nu}: ρ₁({x}) = {v} vs {r}"
            );
        }
    }
}

#[test]
fn large_order_negative_axis() {
    for (nu, x, d1, r) in BESSEL_NEGATIVE {
        let space = SpaceSpec::Bessel { nu };
        let v = phase_jet(&space, x).unwrap().d1;
        assert!(
            (v - d1).abs() <= 1e-10 * d1,
            "ν = {nu}: φ′({x}) = {v} vs {d1}"
        );
        let v = rho1_closed(&space, x).unwrap();
        assert!((v - r).abs() <= 1e-8 * r, "ν = {nu}: ρ₁({x}) = {v} vs {r}");
    }
}

#[test]
fn documented_values() {
    let pw = SpaceSpec::PaleyWiener { a: PI };
    assert!((rho1_closed(&pw, 3.7).unwrap() - 0.5773502691896258).abs() < 1e-15);
    let c = rice_covariance(&pw, 1.0).unwrap();
    assert!((c.a - 1.0).abs() < 1e-15 && c.b == 0.0 && (c.d - PI * PI / 3.0).abs() < 1e-14);
    let r = SpaceSpec::Rational { a: 1.0, n: 2 };
    assert!((rho1_closed(&r, 0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
    let airy = rho1_closed(&SpaceSpec::Airy, -100.0).unwrap();
    assert!((airy / 1.8378 - 1.0).abs() < 0.05);
}

#[test]
fn paley_wiener_intensity_is_proportional_to_phase_derivative() {
    for a in [0.1, 1.0, PI, 40.0] {
        let sp = SpaceSpec::PaleyWiener { a };
        for x in [-7.0, 0.0, 1e3] {
            let ratio = rho1_closed(&sp, x).unwrap() / phase_jet(&sp, x).unwrap().d1;
            assert!((ratio * PI * 3f64.sqrt() - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn dual_sum_at_basis_points() {
    let cases = [
        (
            SpaceSpec::PaleyWiener { a: 2.0 },
            0.3,
            -2000.0,
            2000.0,
            1e-8,
        ),
        (SpaceSpec::Airy, 0.0, -400.0, 0.0, 1e-7),
        (SpaceSpec::Bessel { nu: 0.5 }, 0.0, 0.0, 1e6, 1e-7),
        (
            SpaceSpec::Rational { a: 2.0, n: 7 },
            1.0,
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
        ),
    ];
    for (space, alpha, lo, hi, tol) in cases {
        let b = basis_points(&space, alpha, lo, hi).unwrap();
        let picks: Vec<usize> = if b.exhaustive {
            (0..b.points.len()).collect()
        } else {
            let m = b.points.len();
            vec![m / 2, m - m / 4, m - 1]
        };
        for i in picks {
            let w = b.points[i];
            let dual = rho1_bergman(&space, &b, b.index(i)).unwrap();
            let closed = rho1_closed(&space, w).unwrap();
            assert!(
                (dual / closed - 1.0).abs() <= tol,
                "{space} at {w}: {dual} vs {closed}"
            );
        }
    }
}

#[test]
fn bessel_arches_are_comparable_to_pi() {
    for nu in [0.0, 0.5, 3.0] {
        let space = SpaceSpec::Bessel { nu };
        for k in 1..=20 {
            let (l, r) = (
                bessel_zero(nu, k).unwrap().powi(2),
                bessel_zero(nu, k + 1).unwrap().powi(2),
            );
            let ratio = expected_count(&space, l, r).unwrap() / PI;
            assert!((0.05..=20.0).contains(&ratio), "ν = {nu}, k = {k}: {ratio}");
        }
    }
}

#[test]
fn curves_are_positive_and_finite() {
    for (space, lo, hi) in windows() {
        let xs: Vec<f64> = (0..=400)
            .map(|i| lo + (hi - lo) * i as f64 / 400.0)
            .collect();
        for m in [
            Method::ClosedForm,
            Method::RiceCovariance,
            Method::EdelmanKostlanFd,
        ] {
            let c = intensity_curve(&space, &xs, m).unwrap();
            assert!(
                c.values.iter().all(|v| v.is_finite() && *v > 0.0),
                "{space} {m:?}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn three_routes_agree(i in 0usize..9, u in 0.0f64..1.0) {
        let (space, lo, hi) = windows()[i];
        let x = lo + (hi - lo) * u;
        let c = rho1_closed(&space, x).unwrap();
        let r = rho1_rice_covariance(&space, x).unwrap();
        let e = rho1_ek_fd(&space, x, ek_default_step(&space, x).unwrap()).unwrap();
        prop_assert!((r / c - 1.0).abs() <= 1e-5, "{} at {}: rice {} closed {}", space, x, r, c);
        prop_assert!((e / c - 1.0).abs() <= 1e-5, "{} at {}: ek {} closed {}", space, x, e, c);
    }
}
