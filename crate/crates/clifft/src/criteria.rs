//! The twelve acceptance checks, shared by `clifft selftest` and the
//! acceptance test target. Every check is deterministic: random inputs come
//! from fixed seeds and no timing enters the results.

use std::f64::consts::PI;

use clifft_core::cft::{cft_forward, kernel_eval, KernelOracle};
use clifft_core::convolution::{convolution_theorem_check, translate, translate_spec};
use clifft_core::field::{sample, SampledField};
use clifft_core::grid::Grid;
use clifft_core::quadrature::integrate;
use clifft_core::spec::{FunctionSpec, PolyTerm, Polynomial};
use clifft_core::uncertainty::{
    beurling_report, beurling_values, cowling_price_integrals, fit_polynomial_with_decay, gaussian_fit,
    gelfand_shilov_integrals, hardy_report, FitOptions, QuadratureOptions, UncertaintyParams, Verdict, VerdictRule,
};
use clifft_core::{Blade, Complex, Multivector, Sign, VectorM};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::io::{field_csv_string, report_json};
use crate::parallel;

pub const COUNT: u8 = 12;
const SEED: u64 = 0x5eed_c11f;
const RADII: [f64; 3] = [4.0, 6.0, 8.0];
/// Grid size of the direct kernel-integral translation check.
pub const KERNEL_TRANSLATION_N: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub n: usize,
    pub radius: f64,
}

impl SuiteConfig {
    pub fn new(n: usize) -> Self {
        SuiteConfig { n, radius: 8.0 }
    }

    fn grid(&self) -> clifft_core::Result<Grid> {
        Grid::cartesian(2, self.n, self.radius)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn name(id: u8) -> &'static str {
    match id {
        1 => "algebra",
        2 => "plancherel",
        3 => "involution",
        4 => "gaussian-eigenfunction",
        5 => "polynomial-closure",
        6 => "kernel",
        7 => "translation",
        8 => "convolution-theorem",
        9 => "beurling",
        10 => "hardy",
        11 => "cowling-price/gelfand-shilov",
        12 => "determinism",
        _ => "unknown",
    }
}

type Check = std::result::Result<(bool, String), String>;

fn e<E: std::fmt::Display>(err: E) -> String {
    format!("error: {err}")
}

/// Runs one criterion; an error inside it counts as a failure.
pub fn run(id: u8, cfg: &SuiteConfig) -> Outcome {
    let result = match id {
        1 => algebra(),
        2 => plancherel(cfg),
        3 => involution(cfg),
        4 => eigenfunction(cfg),
        5 => polynomial_closure(cfg),
        6 => kernel(),
        7 => translation(cfg),
        8 => convolution(cfg),
        9 => beurling(cfg),
        10 => hardy(cfg),
        11 => weighted_integrals(cfg),
        12 => determinism(cfg),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = result.unwrap_or_else(|d| (false, d));
    Outcome { id, name: name(id), passed, detail }
}

/// All criteria in order; `parallel` spreads them over the worker pool.
pub fn run_all(cfg: &SuiteConfig, parallel: bool) -> Vec<Outcome> {
    if parallel {
        (1..=COUNT).into_par_iter().map(|id| run(id, cfg)).collect()
    } else {
        (1..=COUNT).map(|id| run(id, cfg)).collect()
    }
}

pub fn format_line(o: &Outcome) -> String {
    format!("{:>2} {} {:<29} {}", o.id, if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)
}

pub fn render(cfg: &SuiteConfig, outcomes: &[Outcome]) -> String {
    let mut s = format!("clifft selftest m=2 n={} R={}\n", cfg.n, cfg.radius);
    for o in outcomes {
        s.push_str(&format_line(o));
        s.push('\n');
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    s.push_str(&format!("{passed}/{} passed\n", outcomes.len()));
    s
}

fn mono(c: f64, exps: &[u32]) -> Polynomial {
    Polynomial::monomial(2, c, exps).expect("valid monomial")
}

fn blade_term(indices: &[usize], c: Complex, exps: &[u32]) -> PolyTerm {
    let b = Blade::from_indices(indices, 2).expect("valid blade");
    PolyTerm { coeff: Multivector::from_blade(2, b, c).expect("m = 2"), exponents: exps.to_vec() }
}

/// `x1 e1 + 0.5i x2 e12`.
fn bivector_poly() -> Polynomial {
    Polynomial::new(
        2,
        vec![blade_term(&[1], Complex::new(1.0, 0.0), &[1, 0]), blade_term(&[1, 2], Complex::new(0.0, 0.5), &[0, 1])],
    )
    .expect("valid polynomial")
}

/// Three Gaussians and three poly-Gaussians of degree at most 2.
pub fn spec_family() -> Vec<FunctionSpec> {
    let one_plus = Polynomial::one(2)
        .and_then(|p| p.plus(Polynomial::new(2, vec![blade_term(&[1, 2], Complex::new(1.0, 0.0), &[1, 0])])?))
        .expect("valid polynomial");
    vec![
        FunctionSpec::gaussian(2, 0.25).expect("a > 0"),
        FunctionSpec::gaussian(2, 0.5).expect("a > 0"),
        FunctionSpec::gaussian(2, 1.0).expect("a > 0"),
        FunctionSpec::poly_gaussian(0.5, mono(1.0, &[1, 1])).expect("a > 0"),
        FunctionSpec::poly_gaussian(0.25, mono(1.0, &[0, 2])).expect("a > 0"),
        FunctionSpec::poly_gaussian(1.0, one_plus).expect("a > 0"),
    ]
}

fn random_mv(rng: &mut ChaCha8Rng, m: usize) -> Multivector {
    let coeffs = (0..1usize << m).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Multivector::from_coeffs(m, coeffs).expect("m in range")
}

fn random_vector(rng: &mut ChaCha8Rng, m: usize) -> VectorM {
    VectorM::new((0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("m in range")
}

fn algebra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = [0.0f64; 4];
    for t in 0..1000 {
        let m = [2, 4, 6][t % 3];
        let (a, b, c) = (random_mv(&mut rng, m), random_mv(&mut rng, m), random_mv(&mut rng, m));
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        let scale = (a.norm() * b.norm() * c.norm()).max(left.norm());
        worst[0] = worst[0].max((&left - &right).norm() / scale);

        let (x, y) = (random_vector(&mut rng, m), random_vector(&mut rng, m));
        let (xm, ym) = (x.to_multivector(), y.to_multivector());
        let inner = x.inner(&y).map_err(e)?;
        let xy = &xm * &ym;
        let anti = &(&xy + &(&ym * &xm)) + &Multivector::scalar(m, Complex::new(2.0 * inner, 0.0)).map_err(e)?;
        let i = rng.gen_range(1..=m);
        let j = (i % m) + 1;
        let (ei, ej) = (Blade::generator(i, m).map_err(e)?, Blade::generator(j, m).map_err(e)?);
        let (ei, ej) = (
            Multivector::from_blade(m, ei, Complex::new(1.0, 0.0)).map_err(e)?,
            Multivector::from_blade(m, ej, Complex::new(1.0, 0.0)).map_err(e)?,
        );
        let gen = (&(&ei * &ej) + &(&ej * &ei)).norm();
        worst[1] = worst[1].max(anti.norm() / (x.norm() * y.norm())).max(gen);

        let sq = &(&xm * &xm) + &Multivector::scalar(m, Complex::new(x.norm() * x.norm(), 0.0)).map_err(e)?;
        worst[2] = worst[2].max(sq.norm() / (x.norm() * x.norm()));

        let split = &Multivector::scalar(m, Complex::new(-inner, 0.0)).map_err(e)? + &x.wedge(&y).map_err(e)?;
        worst[3] = worst[3].max((&xy - &split).norm() / (x.norm() * y.norm()));
    }
    let max = worst.iter().cloned().fold(0.0, f64::max);
    Ok((
        max <= 1e-12,
        format!(
            "assoc={:.1e} anticomm={:.1e} square={:.1e} split={:.1e} (tol 1e-12)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    ))
}

fn plancherel(cfg: &SuiteConfig) -> Check {
    let g = cfg.grid().map_err(e)?;
    let mut worst: f64 = 0.0;
    for spec in spec_family() {
        let f = sample(&spec, &g).map_err(e)?;
        let nf = f.lp_norm(2.0).map_err(e)?;
        for sign in [Sign::Plus, Sign::Minus] {
            let nff = cft_forward(&f, sign).map_err(e)?.lp_norm(2.0).map_err(e)?;
            worst = worst.max((nff - nf).abs() / nf);
        }
    }
    Ok((worst <= 1e-5, format!("max_rel={worst:.2e} (tol 1e-5)")))
}

fn involution(cfg: &SuiteConfig) -> Check {
    let g = cfg.grid().map_err(e)?;
    let mut worst: f64 = 0.0;
    for spec in spec_family() {
        let f = sample(&spec, &g).map_err(e)?;
        let back = cft_forward(&cft_forward(&f, Sign::Plus).map_err(e)?, Sign::Plus).map_err(e)?;
        worst = worst.max(back.sub(&f).map_err(e)?.sup_norm() / f.sup_norm());
    }
    Ok((worst <= 1e-4, format!("max_rel={worst:.2e} (tol 1e-4)")))
}

fn eigenfunction(cfg: &SuiteConfig) -> Check {
    let g = cfg.grid().map_err(e)?;
    let f = sample(&FunctionSpec::gaussian(2, 0.5).map_err(e)?, &g).map_err(e)?;
    let mut worst: f64 = 0.0;
    for sign in [Sign::Plus, Sign::Minus] {
        worst = worst.max(cft_forward(&f, sign).map_err(e)?.sub(&f).map_err(e)?.sup_norm());
    }
    Ok((worst <= 1e-6, format!("sup={worst:.2e} (tol 1e-6)")))
}

fn closure_polys() -> Vec<Polynomial> {
    vec![
        Polynomial::one(2).expect("m = 2"),
        mono(1.0, &[1, 0]).plus(mono(0.5, &[0, 1])).expect("same m"),
        mono(1.0, &[1, 1]).plus(mono(-0.3, &[2, 0])).expect("same m"),
        mono(1.0, &[2, 1]).plus(mono(0.2, &[0, 1])).expect("same m"),
    ]
}

fn polynomial_closure(cfg: &SuiteConfig) -> Check {
    let g = cfg.grid().map_err(e)?;
    let opts = FitOptions { tolerance: 1e-5, ..FitOptions::default() };
    let (mut worst_res, mut worst_slope): (f64, f64) = (0.0, 0.0);
    let mut degrees_ok = true;
    for a in [0.25, 0.5, 1.0] {
        for p in closure_polys() {
            let deg = p.degree();
            let f = sample(&FunctionSpec::poly_gaussian(a, p).map_err(e)?, &g).map_err(e)?;
            let ff = cft_forward(&f, Sign::Minus).map_err(e)?;
            let decay = 1.0 / (4.0 * a);
            let fixed = fit_polynomial_with_decay(&ff, decay, deg, &opts).map_err(e)?;
            worst_res = worst_res.max(fixed.residual);
            let free = gaussian_fit(&ff, &opts).map_err(e)?;
            degrees_ok &= free.degree == deg;
            worst_slope = worst_slope.max((free.a - decay).abs() / decay);
        }
    }
    Ok((
        worst_res <= 1e-5 && worst_slope <= 0.02 && degrees_ok,
        format!(
            "residual={worst_res:.2e} (tol 1e-5) slope_rel={worst_slope:.2e} (tol 2e-2) degrees={}",
            if degrees_ok { "match" } else { "mismatch" }
        ),
    ))
}

fn polar_vector(r: f64, t: f64) -> VectorM {
    VectorM::new(vec![r * t.cos(), r * t.sin()]).expect("m = 2")
}

/// `(sup ||K|| e^{-|x||y|}, sup ||K||)` over a fixed 20 x 20 set of pairs.
fn kernel_sups(oracle: &KernelOracle) -> clifft_core::Result<(f64, f64)> {
    let (mut weighted, mut plain): (f64, f64) = (0.0, 0.0);
    for i in 0..20 {
        for j in 0..20 {
            let (rx, ry) = (6.0 * (i as f64 + 1.0) / 20.0, 6.0 * (j as f64 + 1.0) / 20.0);
            let k = oracle.eval(&polar_vector(rx, 0.7 * i as f64), &polar_vector(ry, 1.3 * j as f64))?.norm();
            weighted = weighted.max(k * (-rx * ry).exp());
            plain = plain.max(k);
        }
    }
    Ok((weighted, plain))
}

fn kernel() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut worst: f64 = 0.0;
    let mut sup_eval: f64 = 0.0;
    for sign in [Sign::Plus, Sign::Minus] {
        let oracle = KernelOracle::new(256, sign).map_err(e)?;
        for _ in 0..100 {
            let rx = 6.0 * rng.gen::<f64>().sqrt();
            let ry = 6.0 * rng.gen::<f64>().sqrt();
            let x = polar_vector(rx, rng.gen_range(0.0..2.0 * PI));
            let y = polar_vector(ry, rng.gen_range(0.0..2.0 * PI));
            let k = kernel_eval(&x, &y, sign).map_err(e)?;
            worst = worst.max((&k - &oracle.eval(&x, &y).map_err(e)?).norm());
            if sign == Sign::Minus {
                sup_eval = sup_eval.max(k.norm());
            }
        }
    }
    let coarse = kernel_sups(&KernelOracle::new(256, Sign::Minus).map_err(e)?).map_err(e)?;
    let fine = kernel_sups(&KernelOracle::new(512, Sign::Minus).map_err(e)?).map_err(e)?;
    let drift = (coarse.0 - fine.0).abs();
    let bounded = sup_eval.is_finite() && sup_eval <= fine.1 + 1e-6;
    Ok((
        worst <= 1e-8 && coarse.0.is_finite() && drift <= 1e-6 && bounded,
        format!(
            "max_diff={worst:.2e} (tol 1e-8) weighted_sup={:.6} drift={drift:.1e} (tol 1e-6) plain_sup={sup_eval:.6} <= {:.6}",
            fine.0, fine.1
        ),
    ))
}

fn displacements() -> Vec<VectorM> {
    [(1.0, 0.5), (-1.2, 1.5), (0.0, -2.0), (1.9, 0.0), (-0.7, -0.7)]
        .iter()
        .map(|&(a, b)| VectorM::new(vec![a, b]).expect("m = 2"))
        .collect()
}

fn translation(cfg: &SuiteConfig) -> Check {
    let spec = FunctionSpec::gaussian(2, 0.5).map_err(e)?;
    let ys = displacements();
    let coarse = Grid::cartesian(2, KERNEL_TRANSLATION_N, cfg.radius).map_err(e)?;
    let f = sample(&spec, &coarse).map_err(e)?;
    let mut kernel_err: f64 = 0.0;
    for (t, y) in parallel::translate_by_kernel(&f, &ys).map_err(e)?.iter().zip(&ys) {
        let exact = translate_spec(&spec, y, &coarse).map_err(e)?;
        kernel_err = kernel_err.max(t.sub(&exact).map_err(e)?.sup_norm());
    }
    let g = cfg.grid().map_err(e)?;
    let poly = FunctionSpec::poly_gaussian(0.5, bivector_poly()).map_err(e)?;
    let fp = sample(&poly, &g).map_err(e)?;
    let mut shift_err: f64 = 0.0;
    for y in &ys {
        let t = translate(&fp, y).map_err(e)?;
        let exact = translate_spec(&poly, y, &g).map_err(e)?;
        shift_err = shift_err.max(t.sub(&exact).map_err(e)?.sup_norm());
    }
    Ok((
        kernel_err <= 1e-3 && shift_err <= 1e-8,
        format!("kernel_path(n={KERNEL_TRANSLATION_N})={kernel_err:.2e} (tol 1e-3) shift={shift_err:.2e} (tol 1e-8)"),
    ))
}

fn convolution(cfg: &SuiteConfig) -> Check {
    let g = cfg.grid().map_err(e)?;
    let f = FunctionSpec::gaussian(2, 0.5).map_err(e)?;
    let others = [FunctionSpec::gaussian(2, 1.0).map_err(e)?, FunctionSpec::poly_gaussian(0.5, bivector_poly()).map_err(e)?];
    let (mut theorem, mut comm): (f64, f64) = (0.0, 0.0);
    for h in &others {
        for sign in [Sign::Plus, Sign::Minus] {
            let rep = convolution_theorem_check(&f, h, &g, sign).map_err(e)?;
            theorem = theorem.max(rep.transform_sup);
            comm = comm.max(rep.commutativity_sup);
        }
    }
    Ok((
        theorem <= 1e-4 && comm <= 1e-4,
        format!("theorem_sup={theorem:.2e} commutativity_sup={comm:.2e} (tol 1e-4)"),
    ))
}

/// `(2 pi)^2 int_0^R int_0^R e^{-(r-s)^2/2} r s (1+r+s)^{-N} ds dr`, the
/// Beurling integral of `e^{-|x|^2/2}` reduced to radii.
pub fn beurling_radial_oracle(n: i32, r: f64) -> f64 {
    let inner = |x: f64| integrate(|y| (-(x - y) * (x - y) / 2.0).exp() * x * y / (1.0 + x + y).powi(n), 0.0, r, 32, 16);
    4.0 * PI * PI * integrate(inner, 0.0, r, 32, 16)
}

fn gaussian_pair(cfg: &SuiteConfig, spec: &FunctionSpec) -> std::result::Result<(SampledField, SampledField), String> {
    let f = sample(spec, &cfg.grid().map_err(e)?).map_err(e)?;
    let ff = cft_forward(&f, Sign::Minus).map_err(e)?;
    Ok((f, ff))
}

fn beurling(cfg: &SuiteConfig) -> Check {
    let (f, ff) = gaussian_pair(cfg, &FunctionSpec::gaussian(2, 0.5).map_err(e)?)?;
    let opts = QuadratureOptions::default();
    let rule = VerdictRule::default();
    let v6 = beurling_values(&f, &ff, 6, &RADII, &opts).map_err(e)?;
    let mut worst: f64 = 0.0;
    for (v, r) in v6.iter().zip(RADII) {
        let o = beurling_radial_oracle(6, r);
        worst = worst.max((v - o).abs() / o);
    }
    let verdict6 = rule.classify(&v6);
    let verdict0 = rule.classify(&beurling_values(&f, &ff, 0, &RADII, &opts).map_err(e)?);
    Ok((
        worst <= 1e-4 && verdict6 == Verdict::Converged && verdict0 == Verdict::Diverging,
        format!(
            "N=6 {} oracle_rel={worst:.2e} (tol 1e-4); N=0 {}",
            verdict6.name(),
            verdict0.name()
        ),
    ))
}

/// `(f, N)` pairs whose transform is again a Gaussian times a polynomial.
fn hardy_pairs() -> Vec<(FunctionSpec, u32)> {
    vec![
        (FunctionSpec::gaussian(2, 0.25).expect("a > 0"), 0),
        (FunctionSpec::gaussian(2, 0.5).expect("a > 0"), 0),
        (FunctionSpec::gaussian(2, 1.0).expect("a > 0"), 0),
        (FunctionSpec::poly_gaussian(0.5, mono(1.0, &[2, 0])).expect("a > 0"), 2),
    ]
}

fn hardy(cfg: &SuiteConfig) -> Check {
    let mut worst: f64 = 0.0;
    let mut products = Vec::new();
    for (spec, n) in hardy_pairs() {
        let (f, ff) = gaussian_pair(cfg, &spec)?;
        let rep = hardy_report(&f, &ff, &UncertaintyParams::new(n, RADII.to_vec())).map_err(e)?;
        let ab = rep.estimates.iter().find(|(k, _)| *k == "ab").map(|p| p.1).ok_or("missing ab estimate")?;
        worst = worst.max((ab - 0.25).abs() / 0.25);
        products.push(format!("{ab:.4}"));
    }
    Ok((worst <= 0.03, format!("ab=[{}] max_rel={worst:.2e} (tol 3e-2)", products.join(","))))
}

#[derive(Clone, Copy, Debug)]
enum Functional {
    CowlingPrice,
    GelfandShilov,
}

/// One weighted-integral experiment on `f = e^{-|x|^2/2}` (so `Ff = f`).
#[derive(Clone, Copy, Debug)]
struct ParameterSet {
    functional: Functional,
    alpha: f64,
    beta: f64,
    p: f64,
    q: f64,
    n: u32,
}

const F_DECAY: f64 = 0.5;
const FF_DECAY: f64 = 0.5;

fn converges(c: f64, n: u32) -> bool {
    // int r (1+r)^{-N} e^{c r^2} dr in the plane.
    c < 0.0 || (c == 0.0 && n > 2)
}

impl ParameterSet {
    /// Convergence of both integrals from the exact radial profiles.
    fn analytic(&self) -> bool {
        let side = |w: f64, p: f64, decay: f64| match self.functional {
            Functional::CowlingPrice => converges(p * (w - decay), self.n),
            Functional::GelfandShilov => {
                if p < 2.0 {
                    true
                } else if p > 2.0 {
                    false
                } else {
                    converges(2.0 * w * w - decay, self.n)
                }
            }
        };
        side(self.alpha, self.p, F_DECAY) && side(self.beta, self.q, FF_DECAY)
    }

    fn label(&self) -> String {
        let name = match self.functional {
            Functional::CowlingPrice => "cp",
            Functional::GelfandShilov => "gs",
        };
        format!("{name}(a={},b={},p={},q={},N={})", self.alpha, self.beta, self.p, self.q, self.n)
    }
}

fn parameter_sets() -> Vec<ParameterSet> {
    use Functional::*;
    let set = |functional, alpha, beta, p, q, n| ParameterSet { functional, alpha, beta, p, q, n };
    vec![
        set(CowlingPrice, 0.5, 0.5, 2.0, 2.0, 6),
        set(GelfandShilov, 0.5, 0.5, 2.0, 2.0, 6),
        set(CowlingPrice, 0.5, 0.5, 3.0, 1.5, 6),
        set(CowlingPrice, 1.0, 0.5, 2.0, 2.0, 4),
        set(GelfandShilov, 1.0, 0.5, 2.0, 2.0, 4),
        set(CowlingPrice, 0.6, 0.6, 3.0, 1.5, 4),
    ]
}

fn weighted_integrals(cfg: &SuiteConfig) -> Check {
    let (f, ff) = gaussian_pair(cfg, &FunctionSpec::gaussian(2, F_DECAY).map_err(e)?)?;
    let rule = VerdictRule::default();
    let opts = QuadratureOptions::default();
    let mut all = true;
    let mut parts = Vec::new();
    for s in parameter_sets() {
        let mut params = UncertaintyParams::new(s.n, RADII.to_vec());
        params.alpha = s.alpha;
        params.beta = s.beta;
        params.p = s.p;
        params.q = s.q;
        let rep = match s.functional {
            Functional::CowlingPrice => cowling_price_integrals(&f, &ff, &params, &rule, &opts),
            Functional::GelfandShilov => gelfand_shilov_integrals(&f, &ff, &params, &rule, &opts),
        }
        .map_err(e)?;
        let expected = if s.analytic() { Verdict::Converged } else { Verdict::Diverging };
        let ok = rep.verdict == expected;
        all &= ok;
        parts.push(format!("{}:{}{}", s.label(), rep.verdict.name(), if ok { "" } else { "!" }));
    }
    Ok((all, parts.join(" ")))
}

fn pipeline_bytes(cfg: &SuiteConfig) -> std::result::Result<String, String> {
    let spec = FunctionSpec::poly_gaussian(0.5, bivector_poly()).map_err(e)?;
    let (f, ff) = gaussian_pair(cfg, &spec)?;
    let params = UncertaintyParams::new(6, RADII.to_vec());
    let rep = beurling_report(&f, &ff, &params, &VerdictRule::default(), &QuadratureOptions::default()).map_err(e)?;
    let mut out = field_csv_string(&ff).map_err(e)?;
    out.push_str(&report_json(&rep, &params, 2));
    Ok(out)
}

fn determinism(cfg: &SuiteConfig) -> Check {
    let first = pipeline_bytes(cfg)?;
    let second = pipeline_bytes(cfg)?;
    let same = first == second;
    Ok((same, format!("transform csv + report json: {} bytes, {}", first.len(), if same { "identical" } else { "differ" })))
}
