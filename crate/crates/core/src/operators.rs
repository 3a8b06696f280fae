//! Dirac, Gamma and Laplace operators on sampled fields, and the angular
//! action of `exp(∓ iπ/2 Γ)` in the plane.
//!
//! Cartesian operators use finite differences of a selectable order. Interior
//! nodes get the central stencil; the outermost `order/2` nodes along each
//! axis fall back to one-sided stencils of the same width and are less
//! accurate (see [`is_interior`]).
//!
//! For `m = 2`, `Γ = -e12 ∂_θ`. On the angular mode `e^{ikθ}` this is left
//! multiplication by `-ik e12`, so `exp(∓ iπ/2 Γ)` acts by left
//! multiplication with
//!
//! ```text
//! F(k, ±) = cos(kπ/2) ∓ sin(kπ/2) e12
//! ```
//!
//! The sign was fixed against [`GammaExponential`], which exponentiates the
//! discretised operator directly.

use alloc::vec;
use alloc::vec::Vec;

use crate::fft::{mode_of_bin, Direction, Fft};
use crate::field::SampledField;
use crate::grid::{CartesianGrid, Grid, PolarGrid};
use crate::multivector::blade_product;
use crate::{Blade, Complex, Error, Multivector, Result, Sign};

const ZERO: Complex = Complex::new(0.0, 0.0);
const E12: Blade = Blade::from_bits(0b11);

/// Finite-difference accuracy order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StencilOrder {
    #[default]
    Second,
    Fourth,
    Sixth,
}

impl StencilOrder {
    pub fn order(self) -> usize {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
            StencilOrder::Sixth => 6,
        }
    }

    /// Number of boundary nodes on each side that use one-sided stencils.
    pub fn half_width(self) -> usize {
        self.order() / 2
    }

    pub fn from_order(order: usize) -> Result<Self> {
        match order {
            2 => Ok(StencilOrder::Second),
            4 => Ok(StencilOrder::Fourth),
            6 => Ok(StencilOrder::Sixth),
            _ => Err(Error::InvalidParameter(alloc::format!("stencil order must be 2, 4 or 6, got {order}"))),
        }
    }
}

/// Fornberg's algorithm: weights for the `deriv`-th derivative at `z` from
/// values at `nodes`.
fn fd_weights(z: f64, nodes: &[f64], deriv: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; deriv + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[deriv]).collect()
}

/// Per-node stencils along one axis of `n` points.
struct AxisStencils {
    width: usize,
    /// `starts[i]`: first node of the window for node `i`.
    starts: Vec<usize>,
    /// `weights[i * width + j]`, already divided by `h^deriv`.
    weights: Vec<f64>,
}

fn axis_stencils(n: usize, h: f64, deriv: usize, order: StencilOrder) -> Result<AxisStencils> {
    let width = order.order() + 1;
    if n < 3 {
        return Err(Error::InvalidGrid(alloc::format!("need at least 3 nodes per axis, got {n}")));
    }
    if n < width {
        return Err(Error::InvalidGrid(alloc::format!(
            "order-{} stencil needs {width} nodes per axis, got {n}",
            order.order()
        )));
    }
    let half = width / 2;
    let scale = libm::pow(h, deriv as f64);
    let mut starts = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n * width);
    let offsets: Vec<f64> = (0..width).map(|j| j as f64).collect();
    for i in 0..n {
        let start = i.saturating_sub(half).min(n - width);
        starts.push(start);
        for w in fd_weights((i - start) as f64, &offsets, deriv) {
            weights.push(w / scale);
        }
    }
    Ok(AxisStencils { width, starts, weights })
}

fn cartesian(f: &SampledField) -> Result<CartesianGrid> {
    match f.grid() {
        Grid::Cartesian(g) => Ok(*g),
        Grid::Polar(_) => Err(Error::WrongGridKind("finite differences need a cartesian grid")),
    }
}

fn differentiate_axis(values: &[Complex], g: &CartesianGrid, axis: usize, st: &AxisStencils) -> Vec<Complex> {
    let n = g.n();
    let stride = g.stride(axis);
    let mut out = vec![ZERO; values.len()];
    for (idx, o) in out.iter_mut().enumerate() {
        let i = (idx / stride) % n;
        let base = idx - i * stride;
        let start = st.starts[i];
        let w = &st.weights[i * st.width..(i + 1) * st.width];
        let mut acc = ZERO;
        for (j, wj) in w.iter().enumerate() {
            acc += values[base + (start + j) * stride] * *wj;
        }
        *o = acc;
    }
    out
}

/// `∂ f / ∂ x_axis` (axis is 0-based).
pub fn partial(f: &SampledField, axis: usize, order: StencilOrder) -> Result<SampledField> {
    derivative(f, axis, 1, order)
}

/// `∂² f / ∂ x_axis²`.
pub fn second_partial(f: &SampledField, axis: usize, order: StencilOrder) -> Result<SampledField> {
    derivative(f, axis, 2, order)
}

fn derivative(f: &SampledField, axis: usize, deriv: usize, order: StencilOrder) -> Result<SampledField> {
    let g = cartesian(f)?;
    if axis >= g.m() {
        return Err(Error::IndexOutOfRange { index: axis + 1, m: g.m() });
    }
    let st = axis_stencils(g.n(), g.spacing(), deriv, order)?;
    let comps = f
        .components()
        .iter()
        .map(|(b, v)| (*b, differentiate_axis(v, &g, axis, &st)))
        .collect();
    SampledField::from_components(*f.grid(), comps)
}

/// `true` when node `idx` is far enough from every face for the central
/// stencil of `order`.
pub fn is_interior(grid: &Grid, idx: usize, order: StencilOrder) -> bool {
    match grid {
        Grid::Cartesian(g) => {
            let half = order.half_width();
            let mut rest = idx;
            for _ in 0..g.m() {
                let i = rest % g.n();
                rest /= g.n();
                if i < half || i + half >= g.n() {
                    return false;
                }
            }
            true
        }
        Grid::Polar(_) => true,
    }
}

/// Adds `u * f` into `acc` for a blade `u`.
fn accumulate_left_blade(acc: &mut SampledField, u: Blade, coeff: Complex, f: &SampledField) -> Result<()> {
    let m = f.m();
    for (b, v) in f.components() {
        let (sign, c) = blade_product(u, *b, m)?;
        let s = coeff * sign;
        let dst = acc.component_mut(c);
        for (d, x) in dst.iter_mut().zip(v) {
            *d += x * s;
        }
    }
    Ok(())
}

/// Dirac operator `∂_x f = Σ e_i ∂_{x_i} f`.
pub fn dirac(f: &SampledField, order: StencilOrder) -> Result<SampledField> {
    let m = f.m();
    let mut out = SampledField::zeros(*f.grid());
    for axis in 0..m {
        let d = partial(f, axis, order)?;
        accumulate_left_blade(&mut out, Blade::generator(axis + 1, m)?, Complex::new(1.0, 0.0), &d)?;
    }
    Ok(out)
}

/// Laplacian `Σ ∂²_{x_i} f`, componentwise.
pub fn laplace(f: &SampledField, order: StencilOrder) -> Result<SampledField> {
    let mut out = SampledField::zeros(*f.grid());
    for axis in 0..f.m() {
        out = out.add(&second_partial(f, axis, order)?)?;
    }
    Ok(out)
}

/// Gamma operator `Γ f = -Σ_{j<k} e_j e_k (x_j ∂_k - x_k ∂_j) f`.
///
/// Cartesian grids (even `m`) use finite differences; polar grids use the
/// exact spectral form `-e12 ∂_θ` (the stencil order is then ignored).
pub fn gamma(f: &SampledField, order: StencilOrder) -> Result<SampledField> {
    match f.grid() {
        Grid::Polar(g) => gamma_polar(f, g),
        Grid::Cartesian(g) => {
            let m = g.m();
            if m % 2 != 0 {
                return Err(Error::OddDimension(m));
            }
            let partials: Vec<SampledField> = (0..m).map(|a| partial(f, a, order)).collect::<Result<_>>()?;
            let nodes = f.grid().nodes();
            let mut out = SampledField::zeros(*f.grid());
            for j in 0..m {
                for k in j + 1..m {
                    // x_j ∂_k f - x_k ∂_j f
                    let mut rot = SampledField::zeros(*f.grid());
                    for (b, dk) in partials[k].components() {
                        let dst = rot.component_mut(*b);
                        for (idx, (d, v)) in dst.iter_mut().zip(dk).enumerate() {
                            *d += v * nodes[idx * m + j];
                        }
                    }
                    for (b, dj) in partials[j].components() {
                        let dst = rot.component_mut(*b);
                        for (idx, (d, v)) in dst.iter_mut().zip(dj).enumerate() {
                            *d -= v * nodes[idx * m + k];
                        }
                    }
                    let ejk = Blade::from_indices(&[j + 1, k + 1], m)?;
                    accumulate_left_blade(&mut out, ejk, Complex::new(-1.0, 0.0), &rot)?;
                }
            }
            Ok(out)
        }
    }
}

fn polar(f: &SampledField) -> Result<PolarGrid> {
    match f.grid() {
        Grid::Polar(g) => Ok(*g),
        Grid::Cartesian(_) => Err(Error::WrongGridKind("angular operators need a polar grid")),
    }
}

/// Applies a per-mode left multiplier along every shell of a polar field:
/// mode `k` of the angular FFT is replaced by `factor(k) * mode`.
fn apply_mode_multiplier<F>(f: &SampledField, g: &PolarGrid, mut factor: F) -> Result<SampledField>
where
    F: FnMut(i64) -> Multivector,
{
    let nt = g.n_theta();
    let fft = Fft::new(nt)?;
    let table: Vec<Multivector> = (0..nt).map(|bin| factor(mode_of_bin(bin, nt))).collect();
    let mut out = SampledField::zeros(*f.grid());
    let mut spectra: Vec<(Blade, Vec<Complex>)> = Vec::new();
    for (b, v) in f.components() {
        let mut spec = v.clone();
        for shell in spec.chunks_mut(nt) {
            fft.process(shell, Direction::Forward);
        }
        spectra.push((*b, spec));
    }
    for (b, spec) in &spectra {
        for bin in 0..nt {
            for (u, cu) in table[bin].terms() {
                let (sign, c) = blade_product(u, *b, 2)?;
                let s = cu * sign / nt as f64;
                let dst = out.component_mut(c);
                for shell in 0..g.shell_count() {
                    let i = shell * nt + bin;
                    dst[i] += spec[i] * s;
                }
            }
        }
    }
    for (_, v) in out.components_mut() {
        for shell in v.chunks_mut(nt) {
            fft.process(shell, Direction::Inverse);
        }
    }
    Ok(out.pruned())
}

fn gamma_polar(f: &SampledField, g: &PolarGrid) -> Result<SampledField> {
    let nt = g.n_theta() as i64;
    apply_mode_multiplier(f, g, |k| {
        // -e12 * (ik); the Nyquist mode has no well-defined derivative.
        let c = if 2 * k.abs() == nt { 0.0 } else { k as f64 };
        Multivector::from_blade(2, E12, Complex::new(0.0, -c)).expect("m = 2")
    })
}

/// The left multiplier by which `exp(∓ iπ/2 Γ)` acts on angular mode `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularFactor {
    pub k: i64,
    pub sign: Sign,
    pub factor: Multivector,
}

/// `F(k, ±) = cos(kπ/2) ∓ sin(kπ/2) e12`, tabulated exactly by `k mod 4`.
pub fn angular_exponential_factor(m: usize, k: i64, sign: Sign) -> Result<AngularFactor> {
    if m != 2 {
        return Err(Error::RequiresPlane(m));
    }
    let (c, s) = match k.rem_euclid(4) {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    };
    let mut factor = Multivector::scalar(2, Complex::new(c, 0.0))?;
    factor.set(E12, Complex::new(-sign.as_f64() * s, 0.0))?;
    Ok(AngularFactor { k, sign, factor })
}

/// `exp(∓ iπ/2 Γ) f` for a field on a polar grid, via angular modes.
pub fn apply_angular_exponential(f: &SampledField, sign: Sign) -> Result<SampledField> {
    let g = polar(f)?;
    apply_mode_multiplier(f, &g, |k| {
        angular_exponential_factor(2, k, sign).expect("m = 2").factor
    })
}

type Block = [[Complex; 4]; 4];

const ZERO_BLOCK: Block = [[ZERO; 4]; 4];

fn block_mul_add(acc: &mut Block, a: &Block, b: &Block) {
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..4 {
                acc[i][j] += aik * b[k][j];
            }
        }
    }
}

/// Product of two block-circulant matrices given by their first block column.
fn circulant_mul(a: &[Block], b: &[Block]) -> Vec<Block> {
    let n = a.len();
    let mut out = vec![ZERO_BLOCK; n];
    for (d, o) in out.iter_mut().enumerate() {
        for e in 0..n {
            block_mul_add(o, &a[e], &b[(d + n - e) % n]);
        }
    }
    out
}

fn circulant_norm1(a: &[Block]) -> f64 {
    let mut best: f64 = 0.0;
    for j in 0..4 {
        let mut s = 0.0;
        for blk in a {
            for row in blk {
                s += row[j].norm();
            }
        }
        best = best.max(s);
    }
    best
}

/// Dense reference for `exp(∓ iπ/2 Γ)` on one shell of `n_theta` angular
/// nodes times the four blades of `Cl(0,2)`.
///
/// `∂_θ` is the spectral differentiation matrix
/// `D_jl = ½ (-1)^{j-l} cot((j-l) π / n_theta)`; the exponential of the
/// block-circulant operator is formed by scaling and squaring of its Taylor
/// series. Independent of the mode-factor path above; slow.
#[derive(Clone, Debug)]
pub struct GammaExponential {
    sign: Sign,
    /// `blocks[d]` couples node `j` to node `j - d`.
    blocks: Vec<Block>,
}

impl GammaExponential {
    pub fn new(n_theta: usize, sign: Sign) -> Result<Self> {
        if n_theta < 8 || n_theta % 2 != 0 {
            return Err(Error::AngularResolution(n_theta));
        }
        let n = n_theta;
        let h = 2.0 * core::f64::consts::PI / n as f64;
        // Left multiplication by e12 on (1, e1, e2, e12), as a 4x4 matrix.
        let mut left_e12 = ZERO_BLOCK;
        for b in 0..4u32 {
            let (s, c) = blade_product(E12, Blade::from_bits(b), 2)?;
            left_e12[c.bits() as usize][b as usize] = Complex::new(s, 0.0);
        }
        // M = ∓ iπ/2 Γ = ± iπ/2 L_e12 ⊗ D
        let pref = Complex::new(0.0, sign.as_f64() * core::f64::consts::FRAC_PI_2);
        let mut m_blocks = vec![ZERO_BLOCK; n];
        for (d, blk) in m_blocks.iter_mut().enumerate().skip(1) {
            let parity = if d % 2 == 0 { 1.0 } else { -1.0 };
            let dd = 0.5 * parity / libm::tan(d as f64 * h / 2.0);
            for i in 0..4 {
                for j in 0..4 {
                    blk[i][j] = pref * left_e12[i][j] * dd;
                }
            }
        }
        let norm = circulant_norm1(&m_blocks);
        let mut squarings = 0u32;
        let mut scale = 1.0;
        while norm * scale > 0.5 {
            scale *= 0.5;
            squarings += 1;
        }
        for blk in &mut m_blocks {
            for row in blk.iter_mut() {
                for v in row.iter_mut() {
                    *v *= scale;
                }
            }
        }
        // Taylor series of exp at ||A|| <= 1/2: 24 terms reach 1e-25.
        let mut identity = vec![ZERO_BLOCK; n];
        for i in 0..4 {
            identity[0][i][i] = Complex::new(1.0, 0.0);
        }
        let mut sum = identity.clone();
        let mut term = identity;
        for k in 1..=24 {
            term = circulant_mul(&term, &m_blocks);
            let inv = 1.0 / k as f64;
            for blk in &mut term {
                for row in blk.iter_mut() {
                    for v in row.iter_mut() {
                        *v *= inv;
                    }
                }
            }
            for (s, t) in sum.iter_mut().zip(&term) {
                for i in 0..4 {
                    for j in 0..4 {
                        s[i][j] += t[i][j];
                    }
                }
            }
        }
        for _ in 0..squarings {
            sum = circulant_mul(&sum, &sum);
        }
        Ok(GammaExponential { sign, blocks: sum })
    }

    pub fn n_theta(&self) -> usize {
        self.blocks.len()
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Applies the operator to one shell: `values[j][b]` is blade `b`
    /// (bitmask order) at angle `j`. Only output node `out_node` is formed.
    pub fn apply_at(&self, values: &[[Complex; 4]], out_node: usize) -> [Complex; 4] {
        let n = self.blocks.len();
        let mut out = [ZERO; 4];
        for (l, v) in values.iter().enumerate() {
            let blk = &self.blocks[(out_node + n - l) % n];
            for i in 0..4 {
                for j in 0..4 {
                    out[i] += blk[i][j] * v[j];
                }
            }
        }
        out
    }

    /// Applies the operator to every shell of a polar field.
    pub fn apply(&self, f: &SampledField) -> Result<SampledField> {
        let g = polar(f)?;
        let nt = g.n_theta();
        if nt != self.n_theta() {
            return Err(Error::GridMismatch);
        }
        let mut dense = vec![[ZERO; 4]; g.node_count()];
        for (b, v) in f.components() {
            for (d, x) in dense.iter_mut().zip(v) {
                d[b.bits() as usize] = *x;
            }
        }
        let mut comps: Vec<(Blade, Vec<Complex>)> =
            (0..4u32).map(|b| (Blade::from_bits(b), vec![ZERO; g.node_count()])).collect();
        for shell in 0..g.shell_count() {
            let vals = &dense[shell * nt..(shell + 1) * nt];
            for j in 0..nt {
                let o = self.apply_at(vals, j);
                for b in 0..4 {
                    comps[b].1[shell * nt + j] = o[b];
                }
            }
        }
        Ok(SampledField::from_components(*f.grid(), comps)?.pruned())
    }
}

/// `exp(∓ iπ/2 Γ) f` by the dense reference operator.
pub fn gamma_exponential_oracle(f: &SampledField, sign: Sign) -> Result<SampledField> {
    let g = polar(f)?;
    GammaExponential::new(g.n_theta(), sign)?.apply(f)
}
