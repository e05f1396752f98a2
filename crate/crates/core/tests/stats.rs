//! Monte Carlo zero counts against the analytic intensity.

use std::f64::consts::PI;

use debranges::intensity::expected_count;
use debranges::spaces::SpaceSpec;
use debranges::specfun::airy_zero;
use debranges::stats::{compare_closed_form, count_moments, empirical_intensity};

#[test]
fn paley_wiener_histograms_are_stationary() {
    let space = SpaceSpec::PaleyWiener { a: PI };
    let near = empirical_intensity(&space, 0.0, (0.0, 50.0), 10, 2000, 0).unwrap();
    let far = empirical_intensity(&space, 0.0, (1000.0, 1050.0), 10, 2000, 50_000).unwrap();
    for (a, b) in near.bins.iter().zip(&far.bins) {
        let z = (a.mean - b.mean) / a.std_error.hypot(b.std_error);
        assert!(
            z.abs() <= 4.0,
            "[{}, {}] vs [{}, {}]: z = {z}",
            a.lo,
            a.hi,
            b.lo,
            b.hi
        );
    }
}

#[test]
fn standard_errors_shrink_like_root_n() {
    let space = SpaceSpec::PaleyWiener { a: 2.0 };
    let small = empirical_intensity(&space, 0.0, (0.0, 20.0), 4, 1000, 7).unwrap();
    let large = empirical_intensity(&space, 0.0, (0.0, 20.0), 4, 4000, 7).unwrap();
    for (s, l) in small.bins.iter().zip(&large.bins) {
        let ratio = s.std_error / l.std_error;
        assert!(
            (ratio / 2.0 - 1.0).abs() <= 0.2,
            "[{}, {}]: ratio {ratio}",
            s.lo,
            s.hi
        );
    }
}

#[test]
fn airy_bins_match_closed_form_integrals() {
    let iv = (airy_zero(6), airy_zero(1));
    let h = empirical_intensity(&SpaceSpec::Airy, 0.0, iv, 8, 4000, 11).unwrap();
    let c = compare_closed_form(&h).unwrap();
    for b in &c.per_bin {
        assert!(
            b.z.abs() <= 3.0,
            "[{}, {}]: empirical {} analytic {} z {}",
            b.lo,
            b.hi,
            b.empirical,
            b.analytic,
            b.z
        );
    }
}

#[test]
fn bessel_bins_match_closed_form_integrals() {
    let h = empirical_intensity(
        &SpaceSpec::Bessel { nu: 0.5 },
        0.0,
        (-20.0, 200.0),
        8,
        4000,
        3,
    )
    .unwrap();
    let c = compare_closed_form(&h).unwrap();
    assert!(c.max_abs_z <= 4.0, "{:?}", c.per_bin);
}

#[test]
fn rational_counts_over_the_line() {
    let line = (f64::NEG_INFINITY, f64::INFINITY);
    for (n, a, alpha) in [(2u32, 1.0, 0.5), (7, 2.0, PI / 2.0)] {
        let space = SpaceSpec::Rational { a, n };
        let m = count_moments(&space, alpha, line, 20_000, 1).unwrap();
        let expected = expected_count(&space, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!((expected - (((n * n - 1) as f64) / 3.0).sqrt()).abs() <= 1e-8);
        // n = 2 realizations are degree-one polynomials: exactly one real zero each, σ = 0
        assert!(
            (m.mean - expected).abs() <= 3.0 * m.std_errors.0 + 1e-12,
            "n = {n}: {} vs {expected}",
            m.mean
        );
        assert!(m.n_samples + m.excluded == 20_000);
    }
}
