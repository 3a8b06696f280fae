//! Multivector-valued fields sampled on a [`Grid`].
//!
//! A field stores one complex array per blade that is present (absent blades
//! are identically zero), so a scalar Gaussian on a 4-D grid costs a single
//! array rather than sixteen.

use alloc::vec;
use alloc::vec::Vec;

use crate::grid::{CartesianGrid, Grid, PolarGrid};
use crate::interp::{self, Interpolation, Stencil};
use crate::multivector::canonical_blades;
use crate::spec::{FunctionKind, FunctionSpec};
use crate::{Blade, Complex, Error, Multivector, Result};

const ZERO: Complex = Complex::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    grid: Grid,
    /// Sorted by blade bitmask; every array has `grid.node_count()` entries.
    components: Vec<(Blade, Vec<Complex>)>,
}

impl SampledField {
    pub fn zeros(grid: Grid) -> Self {
        SampledField { grid, components: Vec::new() }
    }

    pub fn from_components(grid: Grid, mut components: Vec<(Blade, Vec<Complex>)>) -> Result<Self> {
        let n = grid.node_count();
        for (blade, values) in &components {
            if !blade.fits(grid.m()) {
                return Err(Error::IndexOutOfRange { index: blade.bits() as usize, m: grid.m() });
            }
            if values.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: values.len() });
            }
        }
        components.sort_by_key(|(b, _)| b.bits());
        if components.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("duplicate blade component".into()));
        }
        Ok(SampledField { grid, components })
    }

    /// Builds a field by evaluating `f` at every node.
    pub fn from_fn<F>(grid: Grid, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Multivector,
    {
        let m = grid.m();
        let n = grid.node_count();
        let mut dense = vec![vec![ZERO; n]; 1 << m];
        let mut x = vec![0.0; m];
        for idx in 0..n {
            grid.node(idx, &mut x);
            let v = f(&x);
            if v.m() != m {
                return Err(Error::DimensionMismatch { left: m, right: v.m() });
            }
            for (b, c) in v.coeffs().iter().enumerate() {
                dense[b][idx] = *c;
            }
        }
        let components = dense
            .into_iter()
            .enumerate()
            .map(|(b, v)| (Blade::from_bits(b as u32), v))
            .collect();
        Ok(SampledField { grid, components }.pruned())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn m(&self) -> usize {
        self.grid.m()
    }

    pub fn node_count(&self) -> usize {
        self.grid.node_count()
    }

    pub fn components(&self) -> &[(Blade, Vec<Complex>)] {
        &self.components
    }

    pub fn component(&self, blade: Blade) -> Option<&[Complex]> {
        self.components
            .iter()
            .find(|(b, _)| *b == blade)
            .map(|(_, v)| v.as_slice())
    }

    /// Mutable views of the present components.
    pub fn components_mut(&mut self) -> impl Iterator<Item = (Blade, &mut [Complex])> {
        self.components.iter_mut().map(|(b, v)| (*b, v.as_mut_slice()))
    }

    /// Mutable access to a component, creating a zero array if absent.
    pub fn component_mut(&mut self, blade: Blade) -> &mut Vec<Complex> {
        let pos = match self.components.binary_search_by_key(&blade.bits(), |(b, _)| b.bits()) {
            Ok(p) => p,
            Err(p) => {
                let n = self.grid.node_count();
                self.components.insert(p, (blade, vec![ZERO; n]));
                p
            }
        };
        &mut self.components[pos].1
    }

    /// Drops components that are identically zero.
    pub fn pruned(mut self) -> Self {
        self.components.retain(|(_, v)| v.iter().any(|c| c.re != 0.0 || c.im != 0.0));
        self
    }

    pub fn value(&self, idx: usize) -> Multivector {
        let mut out = Multivector::zero(self.m()).expect("grid dimension is valid");
        for (b, v) in &self.components {
            out.set(*b, v[idx]).expect("component blade fits");
        }
        out
    }

    /// Clifford norm at every node.
    pub fn norms(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.node_count()];
        for (_, v) in &self.components {
            for (a, c) in acc.iter_mut().zip(v) {
                *a += c.norm_sqr();
            }
        }
        for a in &mut acc {
            *a = libm::sqrt(*a);
        }
        acc
    }

    pub fn sup_norm(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex) -> Self {
        SampledField {
            grid: self.grid,
            components: self
                .components
                .iter()
                .map(|(b, v)| (*b, v.iter().map(|c| c * s).collect()))
                .collect(),
        }
    }

    fn zip_with(&self, other: &SampledField, sign: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = self.clone();
        for (b, v) in &other.components {
            let dst = out.component_mut(*b);
            for (d, c) in dst.iter_mut().zip(v) {
                *d += c * sign;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &SampledField) -> Result<Self> {
        self.zip_with(other, 1.0)
    }

    pub fn sub(&self, other: &SampledField) -> Result<Self> {
        self.zip_with(other, -1.0)
    }

    /// Pointwise geometric product `self(x) * other(x)`.
    pub fn product(&self, other: &SampledField) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = SampledField::zeros(self.grid);
        for (a, va) in &self.components {
            for (b, vb) in &other.components {
                let (sign, c) = crate::multivector::blade_product(*a, *b, self.m())?;
                let dst = out.component_mut(c);
                for ((d, x), y) in dst.iter_mut().zip(va).zip(vb) {
                    *d += x * y * sign;
                }
            }
        }
        Ok(out)
    }

    /// `u * f(x)` at every node, for a constant multivector `u`.
    pub fn left_mul(&self, u: &Multivector) -> Result<Self> {
        if u.m() != self.m() {
            return Err(Error::DimensionMismatch { left: self.m(), right: u.m() });
        }
        let mut out = SampledField::zeros(self.grid);
        for (a, ca) in u.terms() {
            for (b, vb) in &self.components {
                let (sign, c) = crate::multivector::blade_product(a, *b, self.m())?;
                let f = ca * sign;
                let dst = out.component_mut(c);
                for (d, y) in dst.iter_mut().zip(vb) {
                    *d += f * y;
                }
            }
        }
        Ok(out)
    }

    /// Complex conjugate of every coefficient.
    pub fn conj(&self) -> Self {
        SampledField {
            grid: self.grid,
            components: self
                .components
                .iter()
                .map(|(b, v)| (*b, v.iter().map(|c| c.conj()).collect()))
                .collect(),
        }
    }

    /// Quadrature value of `(int ||f(x)||_c^p dx)^(1/p)` over the grid.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!("p must be >= 1, got {p}")));
        }
        let weights = self.grid.weights();
        let s: f64 = self
            .norms()
            .iter()
            .zip(&weights)
            .map(|(v, w)| w * libm::pow(*v, p))
            .sum();
        Ok(libm::pow(s, 1.0 / p))
    }

    /// Quadrature value of `int (1 + |y|)^((m-2)/2) ||f(y)||_c dy` over the grid.
    pub fn b_norm(&self) -> Result<f64> {
        let m = self.m();
        if m % 2 != 0 {
            return Err(Error::OddDimension(m));
        }
        let exponent = (m as f64 - 2.0) / 2.0;
        let weights = self.grid.weights();
        Ok(self
            .norms()
            .iter()
            .zip(weights.iter().zip(self.grid.node_radii()))
            .map(|(v, (w, r))| w * libm::pow(1.0 + r, exponent) * v)
            .sum())
    }

    /// Evaluates the field at an arbitrary point by tensor Lagrange
    /// interpolation, writing one value per component into `out`.
    pub fn interpolate_at(&self, x: &[f64], kind: Interpolation, out: &mut [Complex]) -> Result<()> {
        debug_assert_eq!(out.len(), self.components.len());
        match &self.grid {
            Grid::Cartesian(g) => interpolate_cartesian(g, &self.components, x, kind, out),
            Grid::Polar(g) => interpolate_polar(g, &self.components, x, kind, out),
        }
    }

    /// Interpolates onto `target` (bilinear for [`Interpolation::Linear`],
    /// error `O(h^2)`; higher orders as documented on [`Interpolation`]).
    pub fn resample(&self, target: &Grid, kind: Interpolation) -> Result<Self> {
        if target.m() != self.m() {
            return Err(Error::DimensionMismatch { left: self.m(), right: target.m() });
        }
        let n = target.node_count();
        let mut comps: Vec<(Blade, Vec<Complex>)> =
            self.components.iter().map(|(b, _)| (*b, vec![ZERO; n])).collect();
        let mut x = vec![0.0; self.m()];
        let mut buf = vec![ZERO; comps.len()];
        for idx in 0..n {
            target.node(idx, &mut x);
            self.interpolate_at(&x, kind, &mut buf)?;
            for (c, v) in comps.iter_mut().zip(&buf) {
                c.1[idx] = *v;
            }
        }
        Ok(SampledField { grid: *target, components: comps })
    }
}

fn interpolate_cartesian(
    g: &CartesianGrid,
    comps: &[(Blade, Vec<Complex>)],
    x: &[f64],
    kind: Interpolation,
    out: &mut [Complex],
) -> Result<()> {
    let m = g.m();
    let h = g.spacing();
    let mut stencils: Vec<Stencil> = Vec::with_capacity(m);
    for &xi in x {
        if libm::fabs(xi) > g.radius() * (1.0 + 1e-12) {
            return Err(Error::Extrapolation { distance: libm::fabs(xi) });
        }
        let u = (xi + g.radius()) / h - 0.5;
        stencils.push(interp::clamped(u, g.n(), kind));
    }
    for o in out.iter_mut() {
        *o = ZERO;
    }
    // Odometer over the m-fold tensor stencil.
    let mut pos = vec![0usize; m];
    loop {
        let mut w = 1.0;
        let mut flat = 0;
        for (axis, st) in stencils.iter().enumerate() {
            w *= st.weights[pos[axis]];
            flat = flat * g.n() + st.indices[pos[axis]];
        }
        if w != 0.0 {
            for (o, (_, v)) in out.iter_mut().zip(comps) {
                *o += v[flat] * w;
            }
        }
        let mut axis = m;
        loop {
            if axis == 0 {
                return Ok(());
            }
            axis -= 1;
            pos[axis] += 1;
            if pos[axis] < stencils[axis].len {
                break;
            }
            pos[axis] = 0;
        }
    }
}

fn interpolate_polar(
    g: &PolarGrid,
    comps: &[(Blade, Vec<Complex>)],
    x: &[f64],
    kind: Interpolation,
    out: &mut [Complex],
) -> Result<()> {
    let r = libm::hypot(x[0], x[1]);
    if r > g.radius() * (1.0 + 1e-12) {
        return Err(Error::Extrapolation { distance: r });
    }
    let mut theta = libm::atan2(x[1], x[0]);
    if theta < 0.0 {
        theta += 2.0 * core::f64::consts::PI;
    }
    let sr = interp::clamped(r / g.radius() * g.n_r() as f64, g.shell_count(), kind);
    let st = interp::periodic(theta / (2.0 * core::f64::consts::PI) * g.n_theta() as f64, g.n_theta(), kind);
    for o in out.iter_mut() {
        *o = ZERO;
    }
    for a in 0..sr.len {
        for b in 0..st.len {
            let w = sr.weights[a] * st.weights[b];
            let flat = sr.indices[a] * g.n_theta() + st.indices[b];
            for (o, (_, v)) in out.iter_mut().zip(comps) {
                *o += v[flat] * w;
            }
        }
    }
    Ok(())
}

/// Blades that a spec can populate.
fn spec_support(spec: &FunctionSpec) -> Vec<Blade> {
    match spec.kind() {
        FunctionKind::PolyGaussian { poly, .. } => {
            let mut bits: Vec<Blade> = Vec::new();
            for t in poly.terms() {
                for (b, _) in t.coeff.terms() {
                    if !bits.contains(&b) {
                        bits.push(b);
                    }
                }
            }
            bits.sort_by_key(|b| b.bits());
            bits
        }
        _ => vec![Blade::SCALAR],
    }
}

/// Exact pointwise evaluation of `spec` on every node of `grid`.
pub fn sample(spec: &FunctionSpec, grid: &Grid) -> Result<SampledField> {
    if spec.m() != grid.m() {
        return Err(Error::DimensionMismatch { left: spec.m(), right: grid.m() });
    }
    spec.check_coverage(grid.radius())?;
    let m = grid.m();
    let support = spec_support(spec);
    let n = grid.node_count();
    let mut comps: Vec<(Blade, Vec<Complex>)> = support.iter().map(|b| (*b, vec![ZERO; n])).collect();
    let mut x = vec![0.0; m];
    let mut buf = vec![ZERO; 1 << m];
    for idx in 0..n {
        grid.node(idx, &mut x);
        for v in buf.iter_mut() {
            *v = ZERO;
        }
        spec.eval_into(&x, &mut buf);
        for (b, v) in &mut comps {
            v[idx] = buf[b.bits() as usize];
        }
    }
    Ok(SampledField { grid: *grid, components: comps })
}

/// Blades present in any of the fields, in canonical order.
pub fn union_blades(fields: &[&SampledField]) -> Vec<Blade> {
    let m = fields.first().map(|f| f.m()).unwrap_or(1);
    canonical_blades(m)
        .into_iter()
        .filter(|b| fields.iter().any(|f| f.component(*b).is_some()))
        .collect()
}
