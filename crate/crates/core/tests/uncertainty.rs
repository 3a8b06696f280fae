use clifft_core::cft::cft_forward;
use clifft_core::field::{sample, SampledField};
use clifft_core::grid::Grid;
use clifft_core::quadrature::integrate;
use clifft_core::spec::{FunctionSpec, Polynomial};
use clifft_core::uncertainty::*;
use clifft_core::{Complex, Multivector, Sign};
use proptest::prelude::*;
use std::f64::consts::PI;

const RADII: [f64; 3] = [4.0, 6.0, 8.0];

fn grid(n: usize) -> Grid {
    Grid::cartesian(2, n, 8.0).unwrap()
}

fn pair(spec: &FunctionSpec, n: usize) -> (SampledField, SampledField) {
    let f = sample(spec, &grid(n)).unwrap();
    let ff = cft_forward(&f, Sign::Minus).unwrap();
    (f, ff)
}

fn gaussian_pair(a: f64, n: usize) -> (SampledField, SampledField) {
    pair(&FunctionSpec::gaussian(2, a).unwrap(), n)
}

/// (2 pi)^2 int_0^R int_0^R e^{-(r-s)^2/2} r s (1+r+s)^{-N} ds dr.
fn beurling_oracle(n: i32, r: f64) -> f64 {
    let inner = |x: f64| integrate(|y| (-(x - y) * (x - y) / 2.0).exp() * x * y / (1.0 + x + y).powi(n), 0.0, r, 32, 16);
    4.0 * PI * PI * integrate(inner, 0.0, r, 32, 16)
}

/// 2 pi int_0^R r (1+r)^{-N} dr.
fn power_oracle(n: i32, r: f64) -> f64 {
    2.0 * PI * integrate(|s| s / (1.0 + s).powi(n), 0.0, r, 32, 16)
}

#[test]
fn beurling_matches_radial_oracle() {
    let (f, ff) = gaussian_pair(0.5, 128);
    let opts = QuadratureOptions::default();
    let v6 = beurling_values(&f, &ff, 6, &RADII, &opts).unwrap();
    for (v, r) in v6.iter().zip(RADII) {
        let o = beurling_oracle(6, r);
        assert!((v - o).abs() <= 1e-4 * o, "R={r}: {v} vs {o}");
    }
    assert_eq!(VerdictRule::default().classify(&v6), Verdict::Converged);
    let v0 = beurling_values(&f, &ff, 0, &RADII, &opts).unwrap();
    for (v, r) in v0.iter().zip(RADII) {
        let o = beurling_oracle(0, r);
        assert!((v - o).abs() <= 1e-3 * o, "R={r}: {v} vs {o}");
    }
    assert_eq!(VerdictRule::default().classify(&v0), Verdict::Diverging);
}

#[test]
fn beurling_report_carries_fit_and_degree_bound() {
    let (f, ff) = gaussian_pair(0.5, 128);
    let params = UncertaintyParams::new(6, RADII.to_vec());
    let rep = beurling_report(&f, &ff, &params, &VerdictRule::default(), &QuadratureOptions::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::Converged);
    let fit = rep.fit.unwrap();
    assert_eq!(fit.degree, 0);
    assert!((fit.a - 0.5).abs() < 1e-6);
    assert_eq!(rep.estimates[0], ("degree_bound", 2.0));
}

#[test]
fn cell_sums_agree_with_full_double_sum() {
    // n = 32 would alias the transform (period 2 pi / h = 12.6 < 2R), and
    // e^{|x||y|} amplifies the aliased tail enormously.
    let (f, ff) = gaussian_pair(0.5, 64);
    let opts = QuadratureOptions { cells: true, ..QuadratureOptions::default() };
    let cells = beurling_values(&f, &ff, 6, &RADII, &opts).unwrap();
    for (v, r) in cells.iter().zip(RADII) {
        let full = beurling_functional_full(&f, &ff, 6, r).unwrap();
        assert!((v - full).abs() <= 1e-10 * full, "{v} vs {full}");
        // Cell sums carry an O(h) error from the ball boundary.
        let o = beurling_oracle(6, r);
        assert!((v - o).abs() <= 0.1 * o, "{v} vs {o}");
    }
}

#[test]
fn hardy_examples() {
    let (f, ff) = gaussian_pair(0.5, 128);
    let fit = hardy_profile(&f, 0).unwrap();
    assert!((fit.a - 0.5).abs() <= 1e-3);
    assert!((hardy_profile(&ff, 0).unwrap().a - 0.5).abs() <= 1e-3);

    let x1sq = FunctionSpec::poly_gaussian(0.5, Polynomial::monomial(2, 1.0, &[2, 0]).unwrap()).unwrap();
    let f = sample(&x1sq, &grid(128)).unwrap();
    assert!((hardy_profile(&f, 2).unwrap().a - 0.5).abs() <= 1e-2);

    // F(e^{-|x|^2/4}) = 2 e^{-|y|^2}: b = 1, on the critical line ab = 1/4.
    let (_, ff) = gaussian_pair(0.25, 128);
    let b = hardy_profile(&ff, 0).unwrap().a;
    assert!((b - 1.0).abs() <= 0.02, "{b}");
}

#[test]
fn hardy_needs_enough_nodes() {
    let f = sample(&FunctionSpec::gaussian(2, 0.5).unwrap(), &Grid::cartesian(2, 8, 8.0).unwrap()).unwrap();
    assert!(matches!(hardy_profile(&f, 0), Err(clifft_core::Error::TooFewNodes { .. })));
    let z = SampledField::zeros(grid(16));
    assert!(hardy_profile(&z, 0).is_err());
}

#[test]
fn hardy_report_on_critical_pairs() {
    for a in [0.25, 0.5, 1.0] {
        let (f, ff) = gaussian_pair(a, 128);
        let rep = hardy_report(&f, &ff, &UncertaintyParams::new(0, RADII.to_vec())).unwrap();
        let ab = rep.estimates.iter().find(|e| e.0 == "ab").unwrap().1;
        assert!((ab - 0.25).abs() <= 0.03 * 0.25, "a={a}: {ab}");
        assert_eq!(rep.verdict, Verdict::Converged);
    }
}

#[test]
fn gaussian_fit_examples() {
    let opts = FitOptions::default();
    let p = Polynomial::one(2).unwrap().plus(Polynomial::monomial(2, 1.0, &[1, 0]).unwrap()).unwrap();
    let f = sample(&FunctionSpec::poly_gaussian(0.5, p).unwrap(), &grid(128)).unwrap();
    let fit = gaussian_fit(&f, &opts).unwrap();
    assert_eq!(fit.degree, 1);
    assert!((fit.a - 0.5).abs() < 1e-6 && fit.residual <= 1e-6);
    let c = &fit.coefficients[0].1;
    assert!((c[0].1 - Complex::new(1.0, 0.0)).norm() < 1e-6);
    assert!((c[1].1 - Complex::new(1.0, 0.0)).norm() < 1e-6);
    assert!(c[2].1.norm() < 1e-6);

    let f = sample(&FunctionSpec::gaussian(2, 0.25).unwrap(), &grid(128)).unwrap();
    let fit = gaussian_fit(&f, &opts).unwrap();
    assert_eq!(fit.degree, 0);
    assert!((fit.a - 0.25).abs() < 1e-6);

    assert!(gaussian_fit(&SampledField::zeros(grid(16)), &opts).is_err());
}

#[test]
fn cowling_price_examples() {
    let (f, ff) = gaussian_pair(0.5, 256);
    let rule = VerdictRule::default();
    let opts = QuadratureOptions::default();
    // Integrand of both integrals reduces to (1+|x|)^{-N}. The weight
    // e^{|x|^2} multiplies interpolation errors of ||f||^2, so this needs the
    // finer grid.
    for n in [4u32, 6] {
        let params = UncertaintyParams::new(n, RADII.to_vec());
        let rep = cowling_price_integrals(&f, &ff, &params, &rule, &opts).unwrap();
        for s in &rep.series {
            for (v, r) in s.values.iter().zip(RADII) {
                let o = power_oracle(n as i32, r);
                assert!((v - o).abs() <= 1e-4 * o, "N={n} {}: {v} vs {o}", s.name);
            }
        }
        // N = 4 leaves a 2% tail between R = 6 and 8: not yet converged, and
        // never diverging.
        let expected = if n == 6 { Verdict::Converged } else { Verdict::Inconclusive };
        assert_eq!(rep.verdict, expected, "N={n}");
    }
    let mut params = UncertaintyParams::new(4, RADII.to_vec());
    params.alpha = 1.0;
    let rep = cowling_price_integrals(&f, &ff, &params, &rule, &opts).unwrap();
    assert_eq!(rep.series[0].verdict, Verdict::Diverging);
    assert_eq!(rep.verdict, Verdict::Diverging);

    let z = SampledField::zeros(grid(32));
    let rep = cowling_price_integrals(&z, &z, &UncertaintyParams::new(4, RADII.to_vec()), &rule, &opts).unwrap();
    assert!(rep.series.iter().all(|s| s.values.iter().all(|v| *v == 0.0)));
}

#[test]
fn gelfand_shilov_examples() {
    let (f, ff) = gaussian_pair(0.5, 256);
    let rule = VerdictRule::default();
    let opts = QuadratureOptions::default();
    let params = UncertaintyParams::new(6, RADII.to_vec());
    let rep = gelfand_shilov_integrals(&f, &ff, &params, &rule, &opts).unwrap();
    for s in &rep.series {
        for (v, r) in s.values.iter().zip(RADII) {
            let o = power_oracle(6, r);
            assert!((v - o).abs() <= 1e-4 * o);
        }
    }
    assert_eq!(rep.verdict, Verdict::Converged);
    assert_eq!(rep.expected_a, Some(0.5));
    assert!((rep.fit.unwrap().a - 0.5).abs() <= 1e-3);

    let mut params = UncertaintyParams::new(4, RADII.to_vec());
    params.alpha = 1.0;
    let rep = gelfand_shilov_integrals(&f, &ff, &params, &rule, &opts).unwrap();
    assert!(rep.series.iter().any(|s| s.verdict == Verdict::Diverging));
    assert!(rep.fit.is_none());
}

#[test]
fn b_membership_examples() {
    let rule = VerdictRule::default();
    let opts = QuadratureOptions::default();
    let (f, ff) = gaussian_pair(0.5, 128);
    let rep = b_membership_check(&f, &ff, 6, &[6.0, 8.0], &rule, &opts).unwrap();
    assert!(rep.stable && rep.f_change <= 1e-6 && rep.transform_change <= 1e-6);
    assert_eq!(rep.beurling, Verdict::Converged);
    // 2 pi (1 - e^{-R^2/2})
    let exact = 2.0 * PI * (1.0 - (-32.0f64).exp());
    assert!((rep.f_norms[1] - exact).abs() < 1e-6 * exact);

    let x1 = FunctionSpec::poly_gaussian(0.5, Polynomial::monomial(2, 1.0, &[1, 0]).unwrap()).unwrap();
    let (f, ff) = pair(&x1, 128);
    let rep = b_membership_check(&f, &ff, 6, &[6.0, 8.0], &rule, &opts).unwrap();
    assert!(rep.stable);
    // int |x1| e^{-|x|^2/2} dx = 4 sqrt(pi/2) ... = (2 pi)^{1/2} * 2
    let exact = 2.0 * (2.0 * PI).sqrt();
    assert!((rep.f_norms[1] - exact).abs() < 1e-3 * exact, "{} vs {exact}", rep.f_norms[1]);
}

/// Radial-oracle classification: the integrand behaves like
/// `r e^{c r^2} (1+r)^{-N}` (times the weight of `||f||` or `||Ff||`);
/// it converges iff `c < 0`, or `c = 0` and `N > 2`.
fn analytic_converges(c: f64, n: u32) -> bool {
    c < 0.0 || (c == 0.0 && n > 2)
}

#[test]
fn verdicts_follow_analytic_classification() {
    // f = e^{-|x|^2/2}, Ff = f. Cowling-Price exponent on the f side:
    // alpha p - p/2; Gelfand-Shilov with p = 2: 2 alpha^2 - 1/2.
    let (f, ff) = gaussian_pair(0.5, 128);
    let rule = VerdictRule::default();
    let opts = QuadratureOptions::default();
    let sets = [(0.5, 0.5, 6u32), (0.25, 0.25, 6), (1.0, 0.5, 4), (0.75, 0.5, 6)];
    for (alpha, beta, n) in sets {
        let mut params = UncertaintyParams::new(n, RADII.to_vec());
        params.alpha = alpha;
        params.beta = beta;
        let cp = cowling_price_integrals(&f, &ff, &params, &rule, &opts).unwrap();
        let gs = gelfand_shilov_integrals(&f, &ff, &params, &rule, &opts).unwrap();
        let cp_ok = analytic_converges(2.0 * alpha - 1.0, n) && analytic_converges(2.0 * beta - 1.0, n);
        let gs_ok = analytic_converges(2.0 * alpha * alpha - 0.5, n) && analytic_converges(2.0 * beta * beta - 0.5, n);
        let expect = |ok| if ok { Verdict::Converged } else { Verdict::Diverging };
        assert_eq!(cp.verdict, expect(cp_ok), "cp {alpha} {beta} {n}");
        assert_eq!(gs.verdict, expect(gs_ok), "gs {alpha} {beta} {n}");
    }
}

fn any_field(c: [f64; 4], a: f64) -> SampledField {
    SampledField::from_fn(grid(64), |x| {
        let e = (-a * (x[0] * x[0] + x[1] * x[1])).exp();
        Multivector::from_coeffs(
            2,
            vec![
                Complex::new(c[0] * e, 0.0),
                Complex::new(c[1] * x[0] * e, 0.0),
                Complex::new(0.0, c[2] * x[1] * x[1] * e),
                Complex::new(c[3] * e, c[3] * x[0] * e),
            ],
        )
        .unwrap()
    })
    .unwrap()
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn functionals_are_monotone_in_radius(
        c in prop::array::uniform4(-1.0f64..1.0),
        a in 0.1f64..1.0,
        steps in prop::collection::vec(0.05f64..1.5, 2..6),
        n in 0u32..8,
    ) {
        let f = any_field(c, a);
        let ff = any_field([c[3], c[2], c[1], c[0]], 1.0 / (4.0 * a));
        let mut radii = Vec::new();
        let mut r = 0.5;
        for s in steps {
            r += s;
            radii.push(r.min(8.0));
        }
        radii.dedup();
        let opts = QuadratureOptions::default();
        let rule = VerdictRule::default();
        prop_assert!(nondecreasing(&beurling_values(&f, &ff, n, &radii, &opts).unwrap()));
        let mut params = UncertaintyParams::new(n, radii.clone());
        params.p = 3.0;
        params.q = 1.5;
        for rep in [
            cowling_price_integrals(&f, &ff, &params, &rule, &opts).unwrap(),
            gelfand_shilov_integrals(&f, &ff, &params, &rule, &opts).unwrap(),
        ] {
            for s in &rep.series {
                prop_assert!(nondecreasing(&s.values));
            }
        }
        let b = b_membership_check(&f, &ff, n, &radii, &rule, &opts).unwrap();
        prop_assert!(nondecreasing(&b.f_norms) && nondecreasing(&b.transform_norms));
        let cells = QuadratureOptions { cells: true, ..opts };
        prop_assert!(nondecreasing(&beurling_values(&f, &ff, n, &radii, &cells).unwrap()));
    }
}
