//! Truncated uncertainty functionals, convergence verdicts and Gaussian
//! profile fits.
//!
//! Every functional here integrates a nonnegative weight that depends only on
//! `|x|` (and `|y|`) against `||f||_c`. The integrals are therefore reduced
//! to radial quadrature over angular integrals of the norm: for `m = 2` the
//! field is interpolated onto circles and integrated with composite Simpson
//! in `r`; otherwise grid cells are summed inside the ball. Quadrature
//! segments end exactly at the requested radii, so each value is the previous
//! one plus a nonnegative increment and the sequence is nondecreasing in
//! floating point, not just in exact arithmetic.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::field::SampledField;
use crate::grid::Grid;
use crate::interp::Interpolation;
use crate::linalg::least_squares;
use crate::quadrature::simpson_weights;
use crate::{Blade, Complex, Error, Result};

/// Relative floor (against the sup norm) for magnitudes entering log fits.
pub const MAGNITUDE_FLOOR: f64 = 1e-12;
/// Default relative change below which the last pair counts as converged.
pub const CONVERGED_TOL: f64 = 1e-2;
/// Default per-step growth above which a series counts as diverging.
pub const GROWTH_THRESHOLD: f64 = 0.10;
/// Relative change under which truncated B-norms count as stable.
pub const STABILITY_TOL: f64 = 1e-6;
/// Largest node count per field accepted by the full double sum.
pub const FULL_SUM_MAX_NODES: usize = 64 * 64;
/// Minimum number of radial bins entering the Hardy fit.
pub const HARDY_MIN_NODES: usize = 10;

/// Parameters shared by the Beurling, Hardy, Cowling-Price and
/// Gelfand-Shilov functionals.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintyParams {
    /// Polynomial weight exponent `N`.
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub radii: Vec<f64>,
}

impl UncertaintyParams {
    /// `a = b = alpha = beta = 1/2`, `p = q = 2`.
    pub fn new(n: u32, radii: Vec<f64>) -> Self {
        UncertaintyParams { n, a: 0.5, b: 0.5, alpha: 0.5, beta: 0.5, p: 2.0, q: 2.0, radii }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(alloc::format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.p > 1.0 && self.q > 1.0) || !self.p.is_finite() || !self.q.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!(
                "p and q must exceed 1, got p = {}, q = {}",
                self.p,
                self.q
            )));
        }
        if libm::fabs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-12 {
            return Err(Error::InvalidParameter(alloc::format!(
                "p = {} and q = {} are not conjugate",
                self.p,
                self.q
            )));
        }
        validate_radii(&self.radii)
    }
}

fn validate_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("at least one radius is required".into()));
    }
    let mut prev = 0.0;
    for &r in radii {
        if !(r > prev) || !r.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!(
                "radii must be positive and strictly increasing, got {radii:?}"
            )));
        }
        prev = r;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Converged => "converged",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Diverging if any part diverges, converged if all parts converge.
    pub fn combine(verdicts: &[Verdict]) -> Verdict {
        if verdicts.contains(&Verdict::Diverging) {
            Verdict::Diverging
        } else if !verdicts.is_empty() && verdicts.iter().all(|v| *v == Verdict::Converged) {
            Verdict::Converged
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Thresholds used to classify a series of truncated values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerdictRule {
    pub converged_tol: f64,
    pub growth: f64,
}

impl Default for VerdictRule {
    fn default() -> Self {
        VerdictRule { converged_tol: CONVERGED_TOL, growth: GROWTH_THRESHOLD }
    }
}

impl VerdictRule {
    /// Converged when the last pair differs by less than `converged_tol`
    /// relative; diverging when each of the last two steps grows by more than
    /// `growth` (or the last value is not finite).
    pub fn classify(&self, values: &[f64]) -> Verdict {
        let k = values.len();
        if k == 0 {
            return Verdict::Inconclusive;
        }
        if !values[k - 1].is_finite() {
            return Verdict::Diverging;
        }
        if k < 2 {
            return Verdict::Inconclusive;
        }
        let (prev, last) = (values[k - 2], values[k - 1]);
        if last == 0.0 && prev == 0.0 {
            return Verdict::Converged;
        }
        if last > 0.0 && libm::fabs(last - prev) / last < self.converged_tol {
            return Verdict::Converged;
        }
        if k >= 3 {
            let grows = |lo: f64, hi: f64| if lo > 0.0 { (hi - lo) / lo > self.growth } else { hi > 0.0 };
            if grows(values[k - 3], prev) && grows(prev, last) {
                return Verdict::Diverging;
            }
        }
        Verdict::Inconclusive
    }
}

/// One truncated integral evaluated at every radius.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralSeries {
    pub name: &'static str,
    pub values: Vec<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintyReport {
    pub functional: &'static str,
    pub n: u32,
    pub radii: Vec<f64>,
    pub series: Vec<IntegralSeries>,
    pub verdict: Verdict,
    pub fit: Option<GaussianFit>,
    /// Gaussian parameter the critical case predicts, when there is one.
    pub expected_a: Option<f64>,
    /// Named scalar estimates (fitted exponents, degree bounds, ...).
    pub estimates: Vec<(&'static str, f64)>,
    /// Why an optional part (usually the fit) is missing.
    pub notes: Vec<String>,
}

impl UncertaintyReport {
    /// Values of the first series.
    pub fn values(&self) -> &[f64] {
        self.series.first().map(|s| s.values.as_slice()).unwrap_or(&[])
    }
}

/// How the radial reduction samples the field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Angles per circle (`m = 2` path).
    pub n_theta: usize,
    /// Target radial step; `None` uses half the grid spacing.
    pub dr: Option<f64>,
    pub interpolation: Interpolation,
    /// Sum grid cells inside the ball instead of sampling circles.
    pub cells: bool,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { n_theta: 256, dr: None, interpolation: Interpolation::Quintic, cells: false }
    }
}

#[derive(Clone, Copy, Debug)]
struct Shell {
    r: f64,
    /// Quadrature weight of the shell; the shell integral of `g` is
    /// `weight * mean(g(samples))`.
    weight: f64,
    start: usize,
    len: usize,
}

/// Norm samples grouped by the radius segment `(R_{k-1}, R_k]` they belong to.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    segments: Vec<Vec<Shell>>,
    samples: Vec<f64>,
}

impl RadialProfile {
    /// Builds the profile of `||f||_c` up to each of `radii`.
    pub fn new(f: &SampledField, radii: &[f64], opts: &QuadratureOptions) -> Result<Self> {
        validate_radii(radii)?;
        let r_max = radii[radii.len() - 1];
        if r_max > f.grid().radius() * (1.0 + 1e-12) {
            return Err(Error::InvalidGrid(alloc::format!(
                "grid of radius {} does not cover R = {r_max}",
                f.grid().radius()
            )));
        }
        if f.m() == 2 && !opts.cells {
            Self::circles(f, radii, opts)
        } else {
            Ok(Self::cells(f, radii))
        }
    }

    fn circles(f: &SampledField, radii: &[f64], opts: &QuadratureOptions) -> Result<Self> {
        if opts.n_theta < 4 {
            return Err(Error::AngularResolution(opts.n_theta));
        }
        let dr = match opts.dr {
            Some(d) if d > 0.0 => d,
            Some(d) => return Err(Error::InvalidParameter(alloc::format!("dr must be positive, got {d}"))),
            None => match f.grid() {
                Grid::Cartesian(g) => 0.5 * g.spacing(),
                Grid::Polar(g) => g.radius() / g.n_r() as f64,
            },
        };
        let nt = opts.n_theta;
        let (cos, sin): (Vec<f64>, Vec<f64>) =
            (0..nt).map(|j| libm::sincos(2.0 * PI * j as f64 / nt as f64)).map(|(s, c)| (c, s)).unzip();
        let mut buf = vec![Complex::new(0.0, 0.0); f.components().len()];
        let mut segments = Vec::with_capacity(radii.len());
        let mut samples = Vec::new();
        let mut lo = 0.0;
        for &hi in radii {
            let mut panels = libm::ceil((hi - lo) / dr) as usize;
            panels = panels.max(2);
            panels += panels % 2;
            let h = (hi - lo) / panels as f64;
            let w = simpson_weights(panels, h);
            let mut seg = Vec::with_capacity(panels + 1);
            for (i, wi) in w.iter().enumerate() {
                let r = lo + i as f64 * h;
                let start = samples.len();
                for j in 0..nt {
                    f.interpolate_at(&[r * cos[j], r * sin[j]], opts.interpolation, &mut buf)?;
                    samples.push(libm::sqrt(buf.iter().map(|c| c.norm_sqr()).sum()));
                }
                seg.push(Shell { r, weight: wi * r * 2.0 * PI, start, len: nt });
            }
            segments.push(seg);
            lo = hi;
        }
        Ok(RadialProfile { segments, samples })
    }

    fn cells(f: &SampledField, radii: &[f64]) -> Self {
        let weights = f.grid().weights();
        let node_r = f.grid().node_radii();
        let norms = f.norms();
        let mut segments: Vec<Vec<Shell>> = vec![Vec::new(); radii.len()];
        let mut samples = Vec::new();
        for idx in 0..norms.len() {
            let r = node_r[idx];
            // Segment k holds radii in (R_{k-1}, R_k]; the first also holds 0.
            let k = radii.partition_point(|&rk| rk < r);
            if k < radii.len() {
                segments[k].push(Shell { r, weight: weights[idx], start: samples.len(), len: 1 });
                samples.push(norms[idx]);
            }
        }
        RadialProfile { segments, samples }
    }

    fn shell_integral<G: Fn(f64, f64) -> f64>(&self, s: &Shell, g: &G) -> f64 {
        let vals = &self.samples[s.start..s.start + s.len];
        let mean = vals.iter().map(|&v| g(s.r, v)).sum::<f64>() / s.len as f64;
        s.weight * mean
    }

    /// `int_{|x| <= R_k} g(|x|, ||f(x)||_c) dx` for every radius, where `g` is
    /// nonnegative.
    pub fn ball_integrals<G: Fn(f64, f64) -> f64>(&self, g: G) -> Vec<f64> {
        let mut total = 0.0;
        self.segments
            .iter()
            .map(|seg| {
                total += seg.iter().map(|s| self.shell_integral(s, &g)).sum::<f64>();
                total
            })
            .collect()
    }

    /// Natural logarithm of the shell integral of `||f||_c`, per segment.
    fn log_shell_masses(&self) -> Vec<Vec<(f64, f64)>> {
        self.segments
            .iter()
            .map(|seg| {
                seg.iter()
                    .map(|s| (s.r, libm::log(self.shell_integral(s, &|_, v| v))))
                    .collect()
            })
            .collect()
    }
}

/// `e^{r s} (1 + r + s)^{-N}` in log form.
fn beurling_log_weight(r: f64, s: f64, n: u32) -> f64 {
    r * s - n as f64 * libm::log(1.0 + r + s)
}

/// Truncated Beurling double integral at every radius, by the radial
/// reduction (exact in the angular variables for any field).
pub fn beurling_values(
    f: &SampledField,
    ff: &SampledField,
    n: u32,
    radii: &[f64],
    opts: &QuadratureOptions,
) -> Result<Vec<f64>> {
    if f.m() != ff.m() {
        return Err(Error::DimensionMismatch { left: f.m(), right: ff.m() });
    }
    if f.m() != 2 || opts.cells {
        for g in [f.grid(), ff.grid()] {
            if g.node_count() > FULL_SUM_MAX_NODES {
                return Err(Error::InvalidGrid(alloc::format!(
                    "cell double sum limited to {FULL_SUM_MAX_NODES} nodes, got {}",
                    g.node_count()
                )));
            }
        }
    }
    let a = RadialProfile::new(f, radii, opts)?.log_shell_masses();
    let b = RadialProfile::new(ff, radii, opts)?.log_shell_masses();
    let block = |sa: &[(f64, f64)], sb: &[(f64, f64)]| -> f64 {
        let mut s = 0.0;
        for &(r, la) in sa {
            if la == f64::NEG_INFINITY {
                continue;
            }
            for &(t, lb) in sb {
                if lb != f64::NEG_INFINITY {
                    s += libm::exp(la + lb + beurling_log_weight(r, t, n));
                }
            }
        }
        s
    };
    let mut total = 0.0;
    let mut out = Vec::with_capacity(radii.len());
    for k in 0..radii.len() {
        total += block(&a[k], &b[k]);
        for j in 0..k {
            total += block(&a[k], &b[j]) + block(&a[j], &b[k]);
        }
        out.push(total);
    }
    Ok(out)
}

/// Truncated Beurling double integral at radius `r`.
pub fn beurling_functional(f: &SampledField, ff: &SampledField, n: u32, r: f64) -> Result<f64> {
    Ok(beurling_values(f, ff, n, &[r], &QuadratureOptions::default())?[0])
}

/// Direct double sum over grid nodes with `|x|, |y| <= r`. Quadratic in the
/// node count, so limited to [`FULL_SUM_MAX_NODES`] nodes per field.
pub fn beurling_functional_full(f: &SampledField, ff: &SampledField, n: u32, r: f64) -> Result<f64> {
    for g in [f.grid(), ff.grid()] {
        if g.node_count() > FULL_SUM_MAX_NODES {
            return Err(Error::InvalidGrid(alloc::format!(
                "full double sum limited to {FULL_SUM_MAX_NODES} nodes, got {}",
                g.node_count()
            )));
        }
        if r > g.radius() * (1.0 + 1e-12) {
            return Err(Error::InvalidGrid(alloc::format!(
                "grid of radius {} does not cover R = {r}",
                g.radius()
            )));
        }
    }
    let collect = |fld: &SampledField| -> Vec<(f64, f64)> {
        let w = fld.grid().weights();
        fld.grid()
            .node_radii()
            .into_iter()
            .zip(fld.norms())
            .zip(w)
            .filter(|((rad, v), _)| *rad <= r && *v > 0.0)
            .map(|((rad, v), wi)| (rad, libm::log(wi * v)))
            .collect()
    };
    let xs = collect(f);
    let ys = collect(ff);
    let mut s = 0.0;
    for &(rx, lx) in &xs {
        for &(ry, ly) in &ys {
            s += libm::exp(lx + ly + beurling_log_weight(rx, ry, n));
        }
    }
    Ok(s)
}

/// Beurling values with verdict, the degree bound `(N - m)/2` and, when the
/// series converges, a Gaussian profile fit of `f`.
pub fn beurling_report(
    f: &SampledField,
    ff: &SampledField,
    params: &UncertaintyParams,
    rule: &VerdictRule,
    opts: &QuadratureOptions,
) -> Result<UncertaintyReport> {
    validate_radii(&params.radii)?;
    let values = beurling_values(f, ff, params.n, &params.radii, opts)?;
    let verdict = rule.classify(&values);
    let mut report = UncertaintyReport {
        functional: "beurling",
        n: params.n,
        radii: params.radii.clone(),
        series: vec![IntegralSeries { name: "beurling", values, verdict }],
        verdict,
        fit: None,
        expected_a: None,
        estimates: vec![("degree_bound", (params.n as f64 - f.m() as f64) / 2.0)],
        notes: Vec::new(),
    };
    if verdict == Verdict::Converged {
        attach_fit(&mut report, f);
    }
    Ok(report)
}

fn attach_fit(report: &mut UncertaintyReport, f: &SampledField) {
    if f.sup_norm() == 0.0 {
        report.notes.push("zero field: no profile to fit".into());
        return;
    }
    match gaussian_fit(f, &FitOptions::default()) {
        Ok(fit) => report.fit = Some(fit),
        Err(e) => report.notes.push(alloc::format!("gaussian fit failed: {e}")),
    }
}

/// Integrates `exp(log_weight(r) + power * log ||f||)` over balls.
fn weighted_power_integrals<W: Fn(f64) -> f64>(
    f: &SampledField,
    radii: &[f64],
    power: f64,
    log_weight: W,
    opts: &QuadratureOptions,
) -> Result<Vec<f64>> {
    let profile = RadialProfile::new(f, radii, opts)?;
    Ok(profile.ball_integrals(|r, v| {
        if v > 0.0 {
            libm::exp(log_weight(r) + power * libm::log(v))
        } else {
            0.0
        }
    }))
}

fn two_sided_report(
    functional: &'static str,
    params: &UncertaintyParams,
    rule: &VerdictRule,
    values_f: Vec<f64>,
    values_ff: Vec<f64>,
) -> UncertaintyReport {
    let vf = rule.classify(&values_f);
    let vff = rule.classify(&values_ff);
    UncertaintyReport {
        functional,
        n: params.n,
        radii: params.radii.clone(),
        series: vec![
            IntegralSeries { name: "f", values: values_f, verdict: vf },
            IntegralSeries { name: "transform", values: values_ff, verdict: vff },
        ],
        verdict: Verdict::combine(&[vf, vff]),
        fit: None,
        expected_a: None,
        estimates: vec![("alpha_beta", params.alpha * params.beta)],
        notes: Vec::new(),
    }
}

/// `int e^{alpha p |x|^2} ||f||^p (1+|x|)^{-N} dx` and the matching transform
/// integral with `beta, q`, at every radius.
pub fn cowling_price_integrals(
    f: &SampledField,
    ff: &SampledField,
    params: &UncertaintyParams,
    rule: &VerdictRule,
    opts: &QuadratureOptions,
) -> Result<UncertaintyReport> {
    params.validate()?;
    let n = params.n as f64;
    let vf = weighted_power_integrals(
        f,
        &params.radii,
        params.p,
        |r| params.alpha * params.p * r * r - n * libm::log1p(r),
        opts,
    )?;
    let vff = weighted_power_integrals(
        ff,
        &params.radii,
        params.q,
        |r| params.beta * params.q * r * r - n * libm::log1p(r),
        opts,
    )?;
    Ok(two_sided_report("cowling-price", params, rule, vf, vff))
}

/// `int ||f|| e^{(2 alpha |x|)^p / p} (1+|x|)^{-N} dx` and the matching
/// transform integral with `beta, q`. For `p = q = 2`, `alpha beta = 1/4` the
/// report carries a Gaussian fit of `f` and the expected parameter
/// `2 alpha^2`.
pub fn gelfand_shilov_integrals(
    f: &SampledField,
    ff: &SampledField,
    params: &UncertaintyParams,
    rule: &VerdictRule,
    opts: &QuadratureOptions,
) -> Result<UncertaintyReport> {
    params.validate()?;
    let n = params.n as f64;
    let (p, q) = (params.p, params.q);
    let vf = weighted_power_integrals(
        f,
        &params.radii,
        1.0,
        |r| libm::pow(2.0 * params.alpha * r, p) / p - n * libm::log1p(r),
        opts,
    )?;
    let vff = weighted_power_integrals(
        ff,
        &params.radii,
        1.0,
        |r| libm::pow(2.0 * params.beta * r, q) / q - n * libm::log1p(r),
        opts,
    )?;
    let mut report = two_sided_report("gelfand-shilov", params, rule, vf, vff);
    let critical = libm::fabs(p - 2.0) < 1e-12
        && libm::fabs(q - 2.0) < 1e-12
        && libm::fabs(params.alpha * params.beta - 0.25) < 1e-12;
    if critical {
        report.expected_a = Some(2.0 * params.alpha * params.alpha);
        attach_fit(&mut report, f);
    }
    Ok(report)
}

/// Result of fitting `log||f|| - N log(1+|x|) ~ -a |x|^2 + log C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardyFit {
    pub a: f64,
    pub c: f64,
    /// RMS of the log-domain residuals.
    pub residual: f64,
    pub nodes: usize,
}

/// Hardy-type decay fit. Node norms are binned by radius (bin width one grid
/// step) and each bin contributes its largest value, so angular zeros of a
/// polynomial factor do not enter the fit. Bins below the magnitude floor
/// are dropped, the envelope is cut where its decay rate collapses (a noise
/// or truncation plateau), and only the outer half of the remaining radii is
/// fitted, where the Gaussian dominates the polynomial factor.
pub fn hardy_profile(f: &SampledField, n: u32) -> Result<HardyFit> {
    let sup = f.sup_norm();
    if sup == 0.0 {
        return Err(Error::TooFewNodes { found: 0, needed: HARDY_MIN_NODES });
    }
    let step = match f.grid() {
        Grid::Cartesian(g) => g.spacing(),
        Grid::Polar(g) => g.radius() / g.n_r() as f64,
    };
    let radii = f.grid().node_radii();
    let norms = f.norms();
    let bins = libm::ceil(f.grid().max_node_radius() / step) as usize + 1;
    let mut env: Vec<Option<(f64, f64)>> = vec![None; bins];
    for (r, v) in radii.iter().zip(&norms) {
        if *v <= MAGNITUDE_FLOOR * sup {
            continue;
        }
        let b = libm::floor(r / step) as usize;
        match env[b] {
            Some((_, best)) if best >= *v => {}
            _ => env[b] = Some((*r, *v)),
        }
    }
    let usable: Vec<(f64, f64)> = env.into_iter().flatten().collect();
    let window = ((0.5 / step) as usize).max(2);
    let r_hi = decay_end(&usable, window);
    let fitted: Vec<(f64, f64)> = usable.into_iter().filter(|p| p.0 >= 0.5 * r_hi && p.0 <= r_hi).collect();
    if fitted.len() < HARDY_MIN_NODES {
        return Err(Error::TooFewNodes { found: fitted.len(), needed: HARDY_MIN_NODES });
    }
    let mut a = Vec::with_capacity(2 * fitted.len());
    let mut rhs = Vec::with_capacity(fitted.len());
    for &(r, v) in &fitted {
        a.push(-r * r);
        a.push(1.0);
        rhs.push(libm::log(v) - n as f64 * libm::log1p(r));
    }
    let sol = least_squares(&a, fitted.len(), 2, &[rhs])?;
    let coef = &sol.coefficients[0];
    Ok(HardyFit {
        a: coef[0],
        c: libm::exp(coef[1]),
        residual: sol.residual_norms[0] / libm::sqrt(fitted.len() as f64),
        nodes: fitted.len(),
    })
}

/// Radius at which the log-envelope stops decaying: the decay rate over
/// `window` bins falls below half its running maximum once the envelope has
/// dropped by at least `e^2` from its peak.
fn decay_end(env: &[(f64, f64)], window: usize) -> f64 {
    let Some(last) = env.last() else { return 0.0 };
    let peak = env
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if p.1 > env[best].1 { i } else { best });
    let log_peak = libm::log(env[peak].1);
    let mut rate_max: f64 = 0.0;
    for b in peak..env.len().saturating_sub(window) {
        let (r0, v0) = env[b];
        let (r1, v1) = env[b + window];
        let rate = (libm::log(v0) - libm::log(v1)) / (r1 - r0);
        if rate < 0.5 * rate_max && log_peak - libm::log(v0) >= 2.0 {
            return r0;
        }
        rate_max = rate_max.max(rate);
    }
    last.0
}

/// Hardy fits of `f` (exponent `a`) and its transform (exponent `b`). The
/// verdict is `converged` when the fitted pair lies on `a b = 1/4` within
/// 3%, `inconclusive` otherwise.
pub fn hardy_report(f: &SampledField, ff: &SampledField, params: &UncertaintyParams) -> Result<UncertaintyReport> {
    let hf = hardy_profile(f, params.n)?;
    let hff = hardy_profile(ff, params.n)?;
    let product = hf.a * hff.a;
    let verdict = if libm::fabs(product - 0.25) <= 0.03 * 0.25 { Verdict::Converged } else { Verdict::Inconclusive };
    Ok(UncertaintyReport {
        functional: "hardy",
        n: params.n,
        radii: params.radii.clone(),
        series: Vec::new(),
        verdict,
        fit: None,
        expected_a: None,
        estimates: vec![
            ("a", hf.a),
            ("c", hf.c),
            ("residual_f", hf.residual),
            ("b", hff.a),
            ("c_transform", hff.c),
            ("residual_transform", hff.residual),
            ("ab", product),
        ],
        notes: Vec::new(),
    })
}

/// `f ~ Q(x) e^{-a |x|^2}` with `Q` stored per blade as
/// `(exponents, coefficient)` monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianFit {
    pub a: f64,
    pub degree: u32,
    pub coefficients: Vec<(Blade, Vec<(Vec<u32>, Complex)>)>,
    /// `max_x ||f - Q e^{-a|x|^2}||_c / max_x ||f||_c` over all grid nodes.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    pub max_degree: u32,
    /// A degree is accepted once the relative sup residual is at most this.
    pub tolerance: f64,
    /// Least-squares rows are subsampled to at most this many nodes.
    pub max_nodes: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_degree: 4, tolerance: 1e-6, max_nodes: 16384 }
    }
}

/// All exponent vectors of total degree at most `d` in `m` variables, by
/// increasing degree.
pub fn monomials(m: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=d {
        let mut cur = vec![0u32; m];
        fill_monomials(&mut cur, 0, total, &mut out);
    }
    out
}

fn fill_monomials(cur: &mut Vec<u32>, axis: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if axis + 1 == cur.len() {
        cur[axis] = left;
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[axis] = e;
        fill_monomials(cur, axis + 1, left - e, out);
    }
}

fn monomial_value(x: &[f64], e: &[u32]) -> f64 {
    x.iter().zip(e).map(|(xi, &k)| libm::pow(*xi, k as f64)).product()
}

struct FitData {
    m: usize,
    /// Coordinates of the least-squares rows.
    x: Vec<f64>,
    r2: Vec<f64>,
    /// Real and imaginary part of every blade, one vector each.
    rhs: Vec<Vec<f64>>,
    blades: Vec<Blade>,
}

impl FitData {
    fn new(f: &SampledField, max_nodes: usize) -> Self {
        let m = f.m();
        let total = f.node_count();
        let stride = total.div_ceil(max_nodes.max(1)).max(1);
        let nodes = f.grid().nodes();
        let rows: Vec<usize> = (0..total).step_by(stride).collect();
        let mut x = Vec::with_capacity(rows.len() * m);
        let mut r2 = Vec::with_capacity(rows.len());
        for &i in &rows {
            let xi = &nodes[i * m..(i + 1) * m];
            x.extend_from_slice(xi);
            r2.push(xi.iter().map(|v| v * v).sum());
        }
        let mut rhs = Vec::new();
        let mut blades = Vec::new();
        for (b, vals) in f.components() {
            blades.push(*b);
            rhs.push(rows.iter().map(|&i| vals[i].re).collect());
            rhs.push(rows.iter().map(|&i| vals[i].im).collect());
        }
        FitData { m, x, r2, rhs, blades }
    }

    fn rows(&self) -> usize {
        self.r2.len()
    }

    fn solve(&self, a: f64, basis: &[Vec<u32>]) -> Result<(Vec<Vec<f64>>, f64)> {
        let rows = self.rows();
        let cols = basis.len();
        let mut mat = vec![0.0; rows * cols];
        for i in 0..rows {
            let g = libm::exp(-a * self.r2[i]);
            let xi = &self.x[i * self.m..(i + 1) * self.m];
            for (j, e) in basis.iter().enumerate() {
                mat[i * cols + j] = g * monomial_value(xi, e);
            }
        }
        let sol = least_squares(&mat, rows, cols, &self.rhs)?;
        let ss = sol.residual_norms.iter().map(|r| r * r).sum();
        Ok((sol.coefficients, ss))
    }
}

fn assemble_fit(
    f: &SampledField,
    data: &FitData,
    a: f64,
    degree: u32,
    basis: &[Vec<u32>],
    coef: &[Vec<f64>],
) -> GaussianFit {
    let coefficients: Vec<(Blade, Vec<(Vec<u32>, Complex)>)> = data
        .blades
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let terms = basis
                .iter()
                .enumerate()
                .map(|(j, e)| (e.clone(), Complex::new(coef[2 * k][j], coef[2 * k + 1][j])))
                .collect();
            (*b, terms)
        })
        .collect();
    let residual = fit_residual(f, a, &coefficients);
    GaussianFit { a, degree, coefficients, residual }
}

fn fit_residual(f: &SampledField, a: f64, coefficients: &[(Blade, Vec<(Vec<u32>, Complex)>)]) -> f64 {
    let sup = f.sup_norm();
    let m = f.m();
    let nodes = f.grid().nodes();
    let mut worst: f64 = 0.0;
    for idx in 0..f.node_count() {
        let x = &nodes[idx * m..(idx + 1) * m];
        let g = libm::exp(-a * x.iter().map(|v| v * v).sum::<f64>());
        let mut s = 0.0;
        for ((_, vals), (_, terms)) in f.components().iter().zip(coefficients) {
            let q: Complex = terms.iter().map(|(e, c)| c * monomial_value(x, e)).sum();
            s += (vals[idx] - q * g).norm_sqr();
        }
        worst = worst.max(libm::sqrt(s));
    }
    if sup > 0.0 {
        worst / sup
    } else {
        worst
    }
}

/// Fits `f` by a blade-wise polynomial of degree `degree` times the fixed
/// Gaussian `e^{-a|x|^2}`.
pub fn fit_polynomial_with_decay(f: &SampledField, a: f64, degree: u32, opts: &FitOptions) -> Result<GaussianFit> {
    let data = FitData::new(f, opts.max_nodes);
    let basis = monomials(f.m(), degree);
    let (coef, _) = data.solve(a, &basis)?;
    Ok(assemble_fit(f, &data, a, degree, &basis, &coef))
}

/// Fits `f ~ Q(x) e^{-a|x|^2}`. The starting `a` comes from the Hardy
/// envelope fit; for each degree up to the cap, `a` is refined by
/// golden-section search on the least-squares residual (the polynomial
/// coefficients are solved exactly for every trial `a`). The smallest degree
/// whose relative sup residual meets the tolerance is returned; if none
/// does, the fit at the cap is returned with its residual.
pub fn gaussian_fit(f: &SampledField, opts: &FitOptions) -> Result<GaussianFit> {
    if f.sup_norm() == 0.0 {
        return Err(Error::InvalidParameter("cannot fit a zero field".into()));
    }
    let a0 = hardy_profile(f, 0)?.a;
    if !(a0 > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("field does not decay (envelope slope {a0})")));
    }
    let data = FitData::new(f, opts.max_nodes);
    let mut last = None;
    for degree in 0..=opts.max_degree {
        let basis = monomials(f.m(), degree);
        if basis.len() > data.rows() {
            return Err(Error::IllConditioned);
        }
        let objective = |a: f64| data.solve(a, &basis).map(|(_, ss)| ss);
        let a = golden_section(objective, 0.5 * a0, 2.0 * a0, 1e-10)?;
        let (coef, _) = data.solve(a, &basis)?;
        let fit = assemble_fit(f, &data, a, degree, &basis, &coef);
        if fit.residual <= opts.tolerance {
            return Ok(fit);
        }
        last = Some(fit);
    }
    last.ok_or(Error::IllConditioned)
}

fn golden_section<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64> {
    let g = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while hi - lo > rel_tol * (libm::fabs(c) + libm::fabs(d)) {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Truncated B-norms of `f` and its transform at each radius.
#[derive(Clone, Debug, PartialEq)]
pub struct BMembershipReport {
    pub radii: Vec<f64>,
    pub f_norms: Vec<f64>,
    pub transform_norms: Vec<f64>,
    /// Relative change over the last radius pair (0 for identically zero).
    pub f_change: f64,
    pub transform_change: f64,
    /// Both norms finite and changing by at most [`STABILITY_TOL`].
    pub stable: bool,
    /// Verdict of the Beurling series with the given `N`.
    pub beurling: Verdict,
}

/// B-norms `int_{|x|<=R} (1+|x|)^{(m-2)/2} ||f|| dx` of `f` and `Ff` across
/// the radii, with the Beurling verdict for exponent `n`.
pub fn b_membership_check(
    f: &SampledField,
    ff: &SampledField,
    n: u32,
    radii: &[f64],
    rule: &VerdictRule,
    opts: &QuadratureOptions,
) -> Result<BMembershipReport> {
    let m = f.m();
    if m % 2 != 0 {
        return Err(Error::OddDimension(m));
    }
    let e = (m as f64 - 2.0) / 2.0;
    let norms = |fld: &SampledField| -> Result<Vec<f64>> {
        Ok(RadialProfile::new(fld, radii, opts)?.ball_integrals(|r, v| libm::pow(1.0 + r, e) * v))
    };
    let fn_ = norms(f)?;
    let tn = norms(ff)?;
    let change = |v: &[f64]| -> f64 {
        let k = v.len();
        if k < 2 || v[k - 1] == 0.0 {
            return if v.iter().all(|x| *x == 0.0) { 0.0 } else { f64::INFINITY };
        }
        libm::fabs(v[k - 1] - v[k - 2]) / v[k - 1]
    };
    let (cf, ct) = (change(&fn_), change(&tn));
    let finite = fn_.iter().chain(&tn).all(|v| v.is_finite());
    let beurling = rule.classify(&beurling_values(f, ff, n, radii, opts)?);
    Ok(BMembershipReport {
        radii: radii.to_vec(),
        f_norms: fn_,
        transform_norms: tn,
        f_change: cf,
        transform_change: ct,
        stable: finite && cf <= STABILITY_TOL && ct <= STABILITY_TOL,
        beurling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::sample;
    use crate::spec::{FunctionSpec, Polynomial};

    fn grid(n: usize) -> Grid {
        Grid::cartesian(2, n, 8.0).unwrap()
    }

    #[test]
    fn params_validation() {
        let mut p = UncertaintyParams::new(6, vec![4.0, 6.0, 8.0]);
        assert!(p.validate().is_ok());
        p.q = 3.0;
        assert!(p.validate().is_err());
        p.p = 1.5;
        assert!(p.validate().is_ok());
        p.radii = vec![4.0, 4.0];
        assert!(p.validate().is_err());
        p.radii = vec![4.0, 6.0];
        p.alpha = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn verdict_rule() {
        let rule = VerdictRule::default();
        assert_eq!(rule.classify(&[1.0, 1.001]), Verdict::Converged);
        assert_eq!(rule.classify(&[1.0, 1.2, 1.5]), Verdict::Diverging);
        assert_eq!(rule.classify(&[1.0, 1.05, 1.08]), Verdict::Inconclusive);
        assert_eq!(rule.classify(&[0.0, 0.0, 0.0]), Verdict::Converged);
        assert_eq!(rule.classify(&[1.0, f64::INFINITY]), Verdict::Diverging);
        assert_eq!(rule.classify(&[1.0]), Verdict::Inconclusive);
    }

    #[test]
    fn monomials_are_graded() {
        let m = monomials(2, 2);
        assert_eq!(m, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(4, 3).len(), 35);
    }

    #[test]
    fn ball_integral_of_gaussian() {
        let f = sample(&FunctionSpec::gaussian(2, 0.5).unwrap(), &grid(128)).unwrap();
        let prof = RadialProfile::new(&f, &[1.0, 3.0], &QuadratureOptions::default()).unwrap();
        let v = prof.ball_integrals(|_, v| v);
        for (r, got) in [1.0f64, 3.0].iter().zip(v) {
            let exact = 2.0 * PI * (1.0 - libm::exp(-r * r / 2.0));
            assert!((got - exact).abs() < 1e-6 * exact, "{got} vs {exact}");
        }
    }

    #[test]
    fn zero_field_gives_zero() {
        let z = SampledField::zeros(grid(32));
        let v = beurling_values(&z, &z, 6, &[4.0, 8.0], &QuadratureOptions::default()).unwrap();
        assert_eq!(v, vec![0.0, 0.0]);
        let params = UncertaintyParams::new(4, vec![4.0, 8.0]);
        let cp = cowling_price_integrals(&z, &z, &params, &VerdictRule::default(), &QuadratureOptions::default())
            .unwrap();
        assert!(cp.series.iter().all(|s| s.values.iter().all(|v| *v == 0.0)));
        let b = b_membership_check(&z, &z, 6, &[6.0, 8.0], &VerdictRule::default(), &QuadratureOptions::default())
            .unwrap();
        assert_eq!((b.f_norms[1], b.transform_norms[1]), (0.0, 0.0));
    }

    #[test]
    fn radius_beyond_grid_is_rejected() {
        let f = sample(&FunctionSpec::gaussian(2, 0.5).unwrap(), &grid(32)).unwrap();
        assert!(matches!(beurling_functional(&f, &f, 6, 9.0), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn full_sum_is_capped() {
        let f = sample(&FunctionSpec::gaussian(2, 0.5).unwrap(), &grid(128)).unwrap();
        assert!(beurling_functional_full(&f, &f, 6, 4.0).is_err());
    }

    #[test]
    fn hardy_fit_of_gaussian() {
        let f = sample(&FunctionSpec::gaussian(2, 0.5).unwrap(), &grid(64)).unwrap();
        let fit = hardy_profile(&f, 0).unwrap();
        assert!((fit.a - 0.5).abs() < 1e-9);
        assert!((fit.c - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gaussian_fit_recovers_degree() {
        let p = Polynomial::one(2).unwrap().plus(Polynomial::monomial(2, 1.0, &[1, 0]).unwrap()).unwrap();
        let f = sample(&FunctionSpec::poly_gaussian(0.5, p).unwrap(), &grid(64)).unwrap();
        let fit = gaussian_fit(&f, &FitOptions::default()).unwrap();
        assert_eq!(fit.degree, 1);
        assert!((fit.a - 0.5).abs() < 1e-6, "a = {}", fit.a);
        assert!(fit.residual <= 1e-6);
    }
}
