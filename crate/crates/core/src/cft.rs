//! The Clifford-Fourier transform `F_±` and its kernel `K_±`.
//!
//! `F_± f(y) = (2π)^{-m/2} ∫ K_±(x, y) f(x) dx` with
//! `K_±(x, y) = exp(∓ iπ/2 Γ_y) e^{-i<x,y>}`. Because `Γ_y` does not touch
//! `x`, the transform is the classical Fourier transform followed by
//! `exp(∓ iπ/2 Γ)` in the frequency variable.
//!
//! For `m = 2` the angular step is evaluated exactly on a symmetric
//! cartesian grid. With `ρ` the quarter turn `(y1, y2) -> (-y2, y1)`, mode
//! `k` of `g(ρ y)` picks up `i^k`, hence
//!
//! ```text
//! exp(∓ iπ/2 Γ) g(y) = ½ [g(ρy) + g(ρ⁻¹y)] ∓ e12 (1/2i) [g(ρy) - g(ρ⁻¹y)]
//! ```
//!
//! and the cell-centred node set is closed under `ρ`, so no interpolation is
//! involved. [`cft_forward_polar`] takes the angular-FFT route instead and is
//! kept as a cross-check.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bessel::{bessel_j_into, series_tail_bound, truncation_order};
use crate::fft::{Direction, Fft};
use crate::field::{self, SampledField};
use crate::grid::{CartesianGrid, Grid};
use crate::interp::Interpolation;
use crate::operators::{angular_exponential_factor, apply_angular_exponential, GammaExponential};
use crate::{Blade, Complex, Error, Multivector, Result, Sign, VectorM};

const ZERO: Complex = Complex::new(0.0, 0.0);
const E12: Blade = Blade::from_bits(0b11);

/// Truncation tolerance for the Jacobi-Anger series of the kernel.
pub const KERNEL_SERIES_TOL: f64 = 1e-16;

fn cartesian(f: &SampledField) -> Result<CartesianGrid> {
    match f.grid() {
        Grid::Cartesian(g) => Ok(*g),
        Grid::Polar(_) => Err(Error::WrongGridKind("cartesian")),
    }
}

/// Applies the `n x n` matrix `mat` (row-major) along one axis.
fn apply_axis(values: &[Complex], g: &CartesianGrid, axis: usize, mat: &[Complex]) -> Vec<Complex> {
    let n = g.n();
    let stride = g.stride(axis);
    let mut out = vec![ZERO; values.len()];
    let mut line = vec![ZERO; n];
    let lines = values.len() / n;
    for l in 0..lines {
        let base = (l / stride) * stride * n + l % stride;
        for (k, v) in line.iter_mut().enumerate() {
            *v = values[base + k * stride];
        }
        for j in 0..n {
            let row = &mat[j * n..(j + 1) * n];
            let mut acc = ZERO;
            for (a, b) in row.iter().zip(&line) {
                acc += a * b;
            }
            out[base + j * stride] = acc;
        }
    }
    out
}

/// `(h / sqrt(2π)) e^{∓ i y_j x_k}` on the grid's own axis.
fn dft_matrix(g: &CartesianGrid, inverse: bool) -> Vec<Complex> {
    let n = g.n();
    let axis = g.axis();
    let scale = g.spacing() / libm::sqrt(2.0 * PI);
    let s = if inverse { 1.0 } else { -1.0 };
    let mut mat = Vec::with_capacity(n * n);
    for &y in &axis {
        for &x in &axis {
            let t = s * x * y;
            mat.push(Complex::new(libm::cos(t), libm::sin(t)) * scale);
        }
    }
    mat
}

fn separable(f: &SampledField, g: &CartesianGrid, mat: &[Complex]) -> Result<SampledField> {
    let comps = f
        .components()
        .iter()
        .map(|(b, v)| {
            let mut cur = v.clone();
            for axis in 0..g.m() {
                cur = apply_axis(&cur, g, axis, mat);
            }
            (*b, cur)
        })
        .collect();
    SampledField::from_components(*f.grid(), comps)
}

/// Classical transform `(2π)^{-m/2} ∫ e^{-i<x,y>} f(x) dx`, blade by blade,
/// by direct separable midpoint quadrature. The frequency grid is the
/// input grid itself. Cost `O(m n^{m+1})` per blade.
pub fn classical_ft(f: &SampledField) -> Result<SampledField> {
    let g = cartesian(f)?;
    separable(f, &g, &dft_matrix(&g, false))
}

/// Inverse of [`classical_ft`] (kernel `e^{+i<x,y>}`), same grid.
pub fn classical_ift(f: &SampledField) -> Result<SampledField> {
    let g = cartesian(f)?;
    separable(f, &g, &dft_matrix(&g, true))
}

/// Frequency grid of [`classical_ft_fft`]: `n` cell-centred nodes with
/// spacing `2π / (n h)`, i.e. radius `π / h`.
pub fn reciprocal_grid(g: &CartesianGrid) -> Result<CartesianGrid> {
    CartesianGrid::new(g.m(), g.n(), PI / g.spacing())
}

/// Classical transform by FFT (power-of-two `n`). Both node sets are
/// symmetric about 0, so with `c = (n-1)/2` the phase
/// `y_j x_k = (2π/n)(j-c)(k-c)` splits into a DFT and two diagonal factors.
/// Output lives on [`reciprocal_grid`].
pub fn classical_ft_fft(f: &SampledField) -> Result<SampledField> {
    let g = cartesian(f)?;
    let n = g.n();
    let fft = Fft::new(n)?;
    let c = (n as f64 - 1.0) / 2.0;
    let w = 2.0 * PI / n as f64;
    let twist: Vec<Complex> = (0..n)
        .map(|k| {
            let t = w * c * k as f64;
            Complex::new(libm::cos(t), libm::sin(t))
        })
        .collect();
    let t0 = -w * c * c;
    let post_scale = Complex::new(libm::cos(t0), libm::sin(t0)) * (g.spacing() / libm::sqrt(2.0 * PI));
    let target = Grid::Cartesian(reciprocal_grid(&g)?);
    let mut comps = Vec::new();
    let mut line = vec![ZERO; n];
    for (b, v) in f.components() {
        let mut cur = v.clone();
        for axis in 0..g.m() {
            let stride = g.stride(axis);
            for l in 0..cur.len() / n {
                let base = (l / stride) * stride * n + l % stride;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = cur[base + k * stride] * twist[k];
                }
                fft.process(&mut line, Direction::Forward);
                for (j, v) in line.iter().enumerate() {
                    cur[base + j * stride] = v * twist[j] * post_scale;
                }
            }
        }
        comps.push((*b, cur));
    }
    SampledField::from_components(target, comps)
}

/// Precomputed data for `F_±` on one cartesian grid (`m = 2`).
#[derive(Clone, Debug)]
pub struct TransformPlan {
    grid: CartesianGrid,
    sign: Sign,
    /// `F(k, ±)` for `k mod 4 = 0..3`.
    factors: [Multivector; 4],
    forward: Vec<Complex>,
}

impl TransformPlan {
    pub fn new(grid: CartesianGrid, sign: Sign) -> Result<Self> {
        if grid.m() != 2 {
            return Err(Error::RequiresPlane(grid.m()));
        }
        let factors = [0, 1, 2, 3].map(|k| angular_exponential_factor(2, k, sign).expect("m = 2").factor);
        Ok(TransformPlan { grid, sign, factors, forward: dft_matrix(&grid, false) })
    }

    pub fn grid(&self) -> &CartesianGrid {
        &self.grid
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn factor(&self, k: i64) -> &Multivector {
        &self.factors[k.rem_euclid(4) as usize]
    }

    /// `F_± f` on the plan's grid.
    pub fn forward(&self, f: &SampledField) -> Result<SampledField> {
        if f.grid() != &Grid::Cartesian(self.grid) {
            return Err(Error::GridMismatch);
        }
        let ghat = separable(f, &self.grid, &self.forward)?;
        quarter_turn_exponential(&ghat, &self.grid, self.sign)
    }
}

/// `exp(∓ iπ/2 Γ) g` on a symmetric cartesian grid via quarter turns.
pub fn quarter_turn_exponential(g_field: &SampledField, grid: &CartesianGrid, sign: Sign) -> Result<SampledField> {
    if grid.m() != 2 {
        return Err(Error::RequiresPlane(grid.m()));
    }
    let n = grid.n();
    let count = n * n;
    // ρ y at node (j1, j2) is node (n-1-j2, j1); ρ⁻¹ y is node (j2, n-1-j1).
    let fwd = |idx: usize| {
        let (j1, j2) = (idx / n, idx % n);
        (n - 1 - j2) * n + j1
    };
    let bwd = |idx: usize| {
        let (j1, j2) = (idx / n, idx % n);
        j2 * n + (n - 1 - j1)
    };
    let mut out = SampledField::zeros(*g_field.grid());
    // coefficient of e12 * (g(ρy) - g(ρ⁻¹y)): ∓ 1/(2i) = ± i/2
    let diff_scale = Complex::new(0.0, 0.5 * sign.as_f64());
    for (b, v) in g_field.components() {
        let mut sum = vec![ZERO; count];
        let mut diff = vec![ZERO; count];
        for idx in 0..count {
            let p = v[fwd(idx)];
            let q = v[bwd(idx)];
            sum[idx] = (p + q) * 0.5;
            diff[idx] = (p - q) * diff_scale;
        }
        let dst = out.component_mut(*b);
        for (d, s) in dst.iter_mut().zip(&sum) {
            *d += s;
        }
        let (s, c) = crate::multivector::blade_product(E12, *b, 2)?;
        let dst = out.component_mut(c);
        for (d, x) in dst.iter_mut().zip(&diff) {
            *d += x * s;
        }
    }
    Ok(out.pruned())
}

/// `F_± f` for a field on a cartesian grid (`m = 2`), output on the same grid.
pub fn cft_forward(f: &SampledField, sign: Sign) -> Result<SampledField> {
    let g = cartesian(f)?;
    TransformPlan::new(g, sign)?.forward(f)
}

/// `F_± f` through a polar frequency grid: classical transform, resampling,
/// angular FFT per shell, mode factors. Output lives on `polar`.
pub fn cft_forward_polar(f: &SampledField, sign: Sign, polar: &Grid, kind: Interpolation) -> Result<SampledField> {
    if f.m() != 2 {
        return Err(Error::RequiresPlane(f.m()));
    }
    if !matches!(polar, Grid::Polar(_)) {
        return Err(Error::WrongGridKind("polar"));
    }
    let ghat = classical_ft(f)?;
    let on_polar = ghat.resample(polar, kind)?;
    apply_angular_exponential(&on_polar, sign)
}

fn plane(v: &VectorM) -> Result<(f64, f64)> {
    match v.components() {
        [a, b] => Ok((*a, *b)),
        c => Err(Error::RequiresPlane(c.len())),
    }
}

/// Number of Bessel orders used for argument `z = |x||y|`.
pub fn kernel_series_order(z: f64) -> usize {
    truncation_order(z, KERNEL_SERIES_TOL)
}

/// `K_±(x, y)` by the Jacobi-Anger series
/// `e^{-i<x,y>} = Σ_k (-i)^k J_k(|x||y|) e^{ik(θ_y - θ_x)}`, each mode
/// multiplied by `F(k, ±)`.
pub fn kernel_eval(x: &VectorM, y: &VectorM, sign: Sign) -> Result<Multivector> {
    let (x1, x2) = plane(x)?;
    let (y1, y2) = plane(y)?;
    let [scalar, bivector] = kernel_plane([x1, x2], [y1, y2], sign, &mut Vec::new())?;
    let mut out = Multivector::scalar(2, scalar)?;
    out.set(E12, bivector)?;
    Ok(out)
}

/// Allocation-free core of [`kernel_eval`]: the `1` and `e12` coefficients.
/// `buf` holds the Bessel sequence between calls.
pub fn kernel_plane(x: [f64; 2], y: [f64; 2], sign: Sign, buf: &mut Vec<f64>) -> Result<[Complex; 2]> {
    let z = libm::hypot(x[0], x[1]) * libm::hypot(y[0], y[1]);
    kernel_bessel_sequence(z, buf)?;
    let phi = libm::atan2(y[1], y[0]) - libm::atan2(x[1], x[0]);
    Ok(kernel_from_bessel(buf, phi, sign))
}

/// Fills `buf` with `J_0..J_K(z)` for the certified series order `K`.
pub fn kernel_bessel_sequence(z: f64, buf: &mut Vec<f64>) -> Result<()> {
    let order = kernel_series_order(z);
    let tail = series_tail_bound(z, order);
    if !(tail <= 1e-14) {
        return Err(Error::SeriesTruncation { order, tolerance: tail });
    }
    bessel_j_into(z, order, buf);
    Ok(())
}

/// Sums the angular modes `(-i)^k J_k e^{ikφ} F(k, ±)` for `|k| <= K`, given
/// `j = [J_0..J_K]` and `φ = θ_y - θ_x`.
///
/// Modes `k` and `-k` are paired. With `J_{-k} = (-1)^k J_k` the pair
/// contributes `2 J_k cos(kφ)` to the scalar part for even `k` (where
/// `F = ±1` and `(-i)^k = cos(kπ/2)`), and `∓ 2 J_k sin(kφ)` to the `e12`
/// part for odd `k`.
pub fn kernel_from_bessel(j: &[f64], phi: f64, sign: Sign) -> [Complex; 2] {
    let (s1, c1) = (libm::sin(phi), libm::cos(phi));
    let (mut sk, mut ck) = (0.0, 1.0);
    let mut even = j[0];
    let mut odd = 0.0;
    for (k, &jk) in j.iter().enumerate().skip(1) {
        let (sn, cn) = (sk * c1 + ck * s1, ck * c1 - sk * s1);
        sk = sn;
        ck = cn;
        if k % 64 == 0 {
            // re-anchor the rotation recurrence
            let t = k as f64 * phi;
            sk = libm::sin(t);
            ck = libm::cos(t);
        }
        if k % 2 == 0 {
            even += 2.0 * jk * ck;
        } else {
            odd += 2.0 * jk * sk;
        }
    }
    [Complex::new(even, 0.0), Complex::new(-sign.as_f64() * odd, 0.0)]
}

/// Default angular resolution of [`KernelOracle`].
pub const ORACLE_N_THETA: usize = 256;

/// Brute-force `K_±`: samples `θ ↦ e^{-i<x, y(θ)>}` on the circle through
/// `y`, applies the dense `exp(∓ iπ/2 Γ)` and reads the value at `y`.
#[derive(Clone, Debug)]
pub struct KernelOracle {
    op: GammaExponential,
}

impl KernelOracle {
    pub fn new(n_theta: usize, sign: Sign) -> Result<Self> {
        Ok(KernelOracle { op: GammaExponential::new(n_theta, sign)? })
    }

    pub fn n_theta(&self) -> usize {
        self.op.n_theta()
    }

    pub fn sign(&self) -> Sign {
        self.op.sign()
    }

    pub fn eval(&self, x: &VectorM, y: &VectorM) -> Result<Multivector> {
        let (x1, x2) = plane(x)?;
        let (y1, y2) = plane(y)?;
        let s = libm::hypot(y1, y2);
        let t0 = libm::atan2(y2, y1);
        let n = self.op.n_theta();
        let vals: Vec<[Complex; 4]> = (0..n)
            .map(|j| {
                let t = t0 + 2.0 * PI * j as f64 / n as f64;
                let phase = -(x1 * s * libm::cos(t) + x2 * s * libm::sin(t));
                [Complex::new(libm::cos(phase), libm::sin(phase)), ZERO, ZERO, ZERO]
            })
            .collect();
        let out = self.op.apply_at(&vals, 0);
        Multivector::from_coeffs(2, out.to_vec())
    }
}

/// One-shot [`KernelOracle`] evaluation at [`ORACLE_N_THETA`].
pub fn kernel_oracle(x: &VectorM, y: &VectorM, sign: Sign) -> Result<Multivector> {
    KernelOracle::new(ORACLE_N_THETA, sign)?.eval(x, y)
}

/// `F_± f(y)` at arbitrary points by direct quadrature of the kernel integral
/// with [`kernel_eval`]. `O(nodes)` kernel evaluations per point; reference
/// use only.
pub fn cft_by_kernel_quadrature(f: &SampledField, sign: Sign, points: &[[f64; 2]]) -> Result<Vec<Multivector>> {
    if f.m() != 2 {
        return Err(Error::RequiresPlane(f.m()));
    }
    let grid = f.grid();
    let weights = grid.weights();
    let mut x = [0.0; 2];
    let norm = 1.0 / (2.0 * PI);
    let values: Vec<Multivector> = (0..grid.node_count()).map(|i| f.value(i)).collect();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let y = VectorM::new(p.to_vec())?;
        let mut acc = Multivector::zero(2)?;
        for (idx, (w, v)) in weights.iter().zip(&values).enumerate() {
            if v.is_zero() {
                continue;
            }
            grid.node(idx, &mut x);
            let k = kernel_eval(&VectorM::new(x.to_vec())?, &y, sign)?;
            acc += &(&(&k * v) * (w * norm));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Pointwise growth diagnostics of a transform.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthBoundReport {
    /// `||f||_B`.
    pub b_norm: f64,
    /// `sup_y ||F f(y)|| / e^{|y|²/4}`.
    pub sup_exponential_ratio: f64,
    /// `sup_y ||F f(y)|| / (1 + A)^{(m-2)/2}`.
    pub sup_polynomial_ratio: f64,
    /// Crossover radius `A` of `(1+r)^{(m-2)/2} e^{-r²/4} <= 1`.
    pub crossover: f64,
    /// `sup_exponential_ratio / b_norm`, the measured constant `C`
    /// (0 for the zero field).
    pub measured_constant: f64,
    /// Every ratio is finite.
    pub finite: bool,
}

/// Smallest `A >= 0` with `(1+r)^{(m-2)/2} e^{-r²/4} <= 1` for all `r >= A`.
pub fn crossover_radius(m: usize) -> f64 {
    let e = (m as f64 - 2.0) / 2.0;
    let k = |r: f64| e * libm::log1p(r) - r * r / 4.0;
    if e <= 0.0 {
        return 0.0;
    }
    // k is concave with k(0) = 0, positive just after 0: bisect its root.
    let (mut lo, mut hi) = (1e-9, 1.0);
    while k(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if k(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Growth diagnostics for `f` and a precomputed transform `ff`.
pub fn growth_bound_report_from(f: &SampledField, ff: &SampledField) -> Result<GrowthBoundReport> {
    let m = f.m();
    if m % 2 != 0 {
        return Err(Error::OddDimension(m));
    }
    let b_norm = f.b_norm()?;
    let radii = ff.grid().node_radii();
    let norms = ff.norms();
    let crossover = crossover_radius(m);
    let poly_den = libm::pow(1.0 + crossover, (m as f64 - 2.0) / 2.0);
    let mut sup_exp: f64 = 0.0;
    let mut sup_poly: f64 = 0.0;
    for (v, r) in norms.iter().zip(&radii) {
        sup_exp = sup_exp.max(v * libm::exp(-r * r / 4.0));
        sup_poly = sup_poly.max(v / poly_den);
    }
    let measured_constant = if b_norm > 0.0 { sup_exp / b_norm } else { 0.0 };
    Ok(GrowthBoundReport {
        b_norm,
        sup_exponential_ratio: sup_exp,
        sup_polynomial_ratio: sup_poly,
        crossover,
        measured_constant,
        finite: b_norm.is_finite() && sup_exp.is_finite() && sup_poly.is_finite(),
    })
}

/// Growth diagnostics of `F_± f` (`m = 2`).
pub fn growth_bound_report(f: &SampledField, sign: Sign) -> Result<GrowthBoundReport> {
    let ff = cft_forward(f, sign)?;
    growth_bound_report_from(f, &ff)
}

/// `F_± f` for a spec sampled on `grid`; convenience for callers that start
/// from a [`crate::spec::FunctionSpec`].
pub fn transform_spec(spec: &crate::spec::FunctionSpec, grid: &Grid, sign: Sign) -> Result<(SampledField, SampledField)> {
    let f = field::sample(spec, grid)?;
    let ff = cft_forward(&f, sign)?;
    Ok((f, ff))
}
