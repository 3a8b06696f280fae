//! Clifford translation `T_y` and convolution `*_Cl` in the plane.
//!
//! ```text
//! T_y f(x)   = (2π)^{-1} ∫ conj(K_-(ε, x)) K_-(y, ε) F_-(f)(ε) dε
//! f *_Cl g(x) = (2π)^{-1} ∫ T_y f(x) g(y) dy
//! ```
//!
//! `conj` conjugates every blade coefficient and leaves the blades alone;
//! composing it with reversal instead yields `f(-x - y)` and is ruled out by
//! the tests. For `m = 2` the translation is the ordinary shift
//! `f(x - y)`, which the production paths use; [`KernelTranslation`]
//! evaluates the integral above directly and exists for validation.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::cft::{classical_ft, classical_ift, cft_forward, kernel_bessel_sequence, kernel_eval, kernel_from_bessel};
use crate::field::{sample, SampledField};
use crate::grid::Grid;
use crate::spec::FunctionSpec;
use crate::{Complex, Error, Multivector, Result, Sign, VectorM};

/// Relative magnitude below which a field counts as zero when measuring its
/// support.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;

const ZERO: Complex = Complex::new(0.0, 0.0);

fn require_plane(m: usize) -> Result<()> {
    if m != 2 {
        Err(Error::RequiresPlane(m))
    } else {
        Ok(())
    }
}

/// Largest node radius where `||f|| > rel * sup ||f||` (0 for the zero field).
pub fn support_radius(f: &SampledField, rel: f64) -> f64 {
    let norms = f.norms();
    let sup = norms.iter().cloned().fold(0.0, f64::max);
    if sup == 0.0 {
        return 0.0;
    }
    norms
        .iter()
        .zip(f.grid().node_radii())
        .filter(|(v, _)| **v > rel * sup)
        .map(|(_, r)| r)
        .fold(0.0, f64::max)
}

fn check_support(f: &SampledField, y: &VectorM) -> Result<()> {
    let needed = support_radius(f, SUPPORT_THRESHOLD) + y.norm();
    let radius = f.grid().radius();
    if needed > radius {
        return Err(Error::SupportViolation { needed, radius });
    }
    Ok(())
}

/// `T_y f` by a spectral shift: `f(x - y)` has classical transform
/// `e^{-i<y,ε>} f̂(ε)`.
pub fn translate(f: &SampledField, y: &VectorM) -> Result<SampledField> {
    require_plane(f.m())?;
    if y.m() != 2 {
        return Err(Error::DimensionMismatch { left: 2, right: y.m() });
    }
    check_support(f, y)?;
    let fhat = classical_ft(f)?;
    let nodes = f.grid().nodes();
    let yc = y.components();
    let phase: Vec<Complex> = nodes
        .chunks(2)
        .map(|e| {
            let t = -(yc[0] * e[0] + yc[1] * e[1]);
            Complex::new(libm::cos(t), libm::sin(t))
        })
        .collect();
    let mut shifted = fhat.clone();
    for (_, v) in shifted.components_mut() {
        for (a, p) in v.iter_mut().zip(&phase) {
            *a *= p;
        }
    }
    classical_ift(&shifted)
}

/// `T_y f` for a spec: exact samples of `f(x - y)`.
pub fn translate_spec(spec: &FunctionSpec, y: &VectorM, grid: &Grid) -> Result<SampledField> {
    require_plane(spec.m())?;
    spec.check_coverage(grid.radius() + y.norm())?;
    let yc = y.components().to_vec();
    let mut shifted = [0.0; 2];
    SampledField::from_fn(*grid, |x| {
        shifted[0] = x[0] - yc[0];
        shifted[1] = x[1] - yc[1];
        spec.eval(&shifted).expect("dimension checked")
    })
}

/// Direct evaluation of the translation integral for several displacements
/// at once. `O(nodes^2)` kernel evaluations per output set; coarse grids only.
#[derive(Clone, Debug)]
pub struct KernelTranslation {
    grid: Grid,
    /// Non-negligible integration nodes `ε`, grouped by radius so each group
    /// shares one Bessel sequence: `(|ε|, [(index into weighted, θ_ε)])`.
    groups: Vec<(f64, Vec<(usize, f64)>)>,
    /// `w(ε) (2π)^{-1} K_-(y, ε) F_-(f)(ε)` per displacement, per `ε`,
    /// as bitmask-ordered coefficients.
    weighted: Vec<Vec<[Complex; 4]>>,
}

impl KernelTranslation {
    pub fn new(f: &SampledField, ys: &[VectorM]) -> Result<Self> {
        require_plane(f.m())?;
        for y in ys {
            check_support(f, y)?;
        }
        let grid = *f.grid();
        let ff = cft_forward(f, Sign::Minus)?;
        let weights = grid.weights();
        let norms = ff.norms();
        let sup = norms.iter().cloned().fold(0.0, f64::max);
        let mut x = [0.0; 2];
        let mut eps = Vec::new();
        let mut weighted = vec![Vec::new(); ys.len()];
        let n = match grid {
            Grid::Cartesian(g) => g.n(),
            Grid::Polar(_) => return Err(Error::WrongGridKind("cartesian")),
        };
        // |ε|² = (h/2)² (a² + b²) with odd integers a = 2 i - (n - 1), b alike.
        let mut keyed: Vec<(u64, usize, f64)> = Vec::new();
        for idx in 0..grid.node_count() {
            // Drop nodes where the transform is below rounding level.
            if norms[idx] <= 1e-17 * sup {
                continue;
            }
            grid.node(idx, &mut x);
            let e = VectorM::new(x.to_vec())?;
            let v = ff.value(idx);
            let scale = weights[idx] / (2.0 * PI);
            for (slot, y) in weighted.iter_mut().zip(ys) {
                let k = kernel_eval(y, &e, Sign::Minus)?;
                let kv = &(&k * &v) * scale;
                slot.push([kv.coeffs()[0], kv.coeffs()[1], kv.coeffs()[2], kv.coeffs()[3]]);
            }
            let a = (2 * (idx / n)) as i64 - (n as i64 - 1);
            let b = (2 * (idx % n)) as i64 - (n as i64 - 1);
            keyed.push(((a * a + b * b) as u64, eps.len(), libm::atan2(x[1], x[0])));
            eps.push(libm::hypot(x[0], x[1]));
        }
        keyed.sort_by_key(|k| (k.0, k.1));
        let mut groups: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
        let mut last = None;
        for (key, pos, theta) in keyed {
            if last != Some(key) {
                groups.push((eps[pos], Vec::new()));
                last = Some(key);
            }
            groups.last_mut().expect("pushed above").1.push((pos, theta));
        }
        Ok(KernelTranslation { grid, groups, weighted })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `T_y f(x)` for every displacement, at node `idx`.
    pub fn eval_node(&self, idx: usize) -> Result<Vec<Multivector>> {
        let mut x = [0.0; 2];
        self.grid.node(idx, &mut x);
        let rx = libm::hypot(x[0], x[1]);
        let tx = libm::atan2(x[1], x[0]);
        let mut acc = vec![[ZERO; 4]; self.weighted.len()];
        let mut buf = Vec::new();
        for (r, members) in &self.groups {
            kernel_bessel_sequence(r * rx, &mut buf)?;
            for &(j, te) in members {
                // K_-(ε, x): the frequency argument is x.
                let [a, b] = kernel_from_bessel(&buf, tx - te, Sign::Minus);
                let (a, b) = (a.conj(), b.conj());
                for (o, w) in acc.iter_mut().zip(&self.weighted) {
                    let w = &w[j];
                    // (a + b e12) w, with e12 e1 = e2, e12 e2 = -e1, e12 e12 = -1
                    o[0] += a * w[0] - b * w[3];
                    o[1] += a * w[1] - b * w[2];
                    o[2] += a * w[2] + b * w[1];
                    o[3] += a * w[3] + b * w[0];
                }
            }
        }
        acc.into_iter().map(|c| Multivector::from_coeffs(2, c.to_vec())).collect()
    }

    /// Assembles full fields from per-node values (one `Vec` per node, as
    /// returned by [`Self::eval_node`]).
    pub fn assemble(&self, per_node: &[Vec<Multivector>]) -> Result<Vec<SampledField>> {
        let count = self.weighted.len();
        (0..count)
            .map(|k| {
                let mut coeffs = vec![vec![Complex::new(0.0, 0.0); per_node.len()]; 4];
                for (idx, vals) in per_node.iter().enumerate() {
                    for (b, c) in vals[k].coeffs().iter().enumerate() {
                        coeffs[b][idx] = *c;
                    }
                }
                let comps = coeffs
                    .into_iter()
                    .enumerate()
                    .map(|(b, v)| (crate::Blade::from_bits(b as u32), v))
                    .collect();
                Ok(SampledField::from_components(self.grid, comps)?.pruned())
            })
            .collect()
    }

    /// Evaluates every node sequentially.
    pub fn run(&self) -> Result<Vec<SampledField>> {
        let per_node: Vec<Vec<Multivector>> =
            (0..self.grid.node_count()).map(|i| self.eval_node(i)).collect::<Result<_>>()?;
        self.assemble(&per_node)
    }
}

/// `T_y f` by direct evaluation of the kernel integral.
pub fn translate_by_kernel(f: &SampledField, y: &VectorM) -> Result<SampledField> {
    let mut out = KernelTranslation::new(f, core::slice::from_ref(y))?.run()?;
    Ok(out.remove(0))
}

/// `f *_Cl g` through the classical convolution theorem: with the
/// `(2π)^{-1}` factors as defined, the classical transform of the
/// convolution is the pointwise geometric product `f̂ ĝ`.
pub fn convolve(f: &SampledField, g: &SampledField) -> Result<SampledField> {
    require_plane(f.m())?;
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let prod = classical_ft(f)?.product(&classical_ft(g)?)?;
    Ok(classical_ift(&prod)?.pruned())
}

/// `f *_Cl g` by direct quadrature of `(2π)^{-1} Σ_y w f(x - y) g(y)`,
/// evaluating the spec `f` off-grid. `O(nodes^2)`.
pub fn convolve_direct(f: &FunctionSpec, g: &SampledField) -> Result<SampledField> {
    require_plane(f.m())?;
    let grid = *g.grid();
    f.check_coverage(2.0 * grid.max_node_radius())?;
    let n = grid.node_count();
    let nodes = grid.nodes();
    let weights = grid.weights();
    let gvals: Vec<(usize, Multivector)> =
        (0..n).map(|i| (i, g.value(i))).filter(|(_, v)| !v.is_zero()).collect();
    SampledField::from_fn(grid, |x| {
        let mut acc = Multivector::zero(2).expect("m = 2");
        for (j, gv) in &gvals {
            let d = [x[0] - nodes[2 * j], x[1] - nodes[2 * j + 1]];
            let fv = f.eval(&d).expect("m = 2");
            acc += &(&(&fv * gv) * (weights[*j] / (2.0 * PI)));
        }
        acc
    })
}

/// Residuals of the convolution theorem and of commutativity.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionTheoremReport {
    /// `sup ||F(f*g) - F(f) F(g)||`.
    pub transform_sup: f64,
    /// Discrete L² norm of the same difference.
    pub transform_l2: f64,
    /// `transform_sup / sup ||F(f) F(g)||` (0 when both sides vanish).
    pub transform_relative: f64,
    /// `sup ||f*g - g*f||`.
    pub commutativity_sup: f64,
    pub commutativity_l2: f64,
    pub commutativity_relative: f64,
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Checks `F_±(f * g) = F_±(f) F_±(g)` and `f * g = g * f` for radial `f`.
pub fn convolution_theorem_check(
    f: &FunctionSpec,
    g: &FunctionSpec,
    grid: &Grid,
    sign: Sign,
) -> Result<ConvolutionTheoremReport> {
    if !f.is_radial() {
        return Err(Error::NotRadial);
    }
    let fs = sample(f, grid)?;
    let gs = sample(g, grid)?;
    let fg = convolve(&fs, &gs)?;
    let gf = convolve(&gs, &fs)?;
    let lhs = cft_forward(&fg, sign)?;
    let rhs = cft_forward(&fs, sign)?.product(&cft_forward(&gs, sign)?)?;
    let diff = lhs.sub(&rhs)?;
    let comm = fg.sub(&gf)?;
    let transform_sup = diff.sup_norm();
    let commutativity_sup = comm.sup_norm();
    Ok(ConvolutionTheoremReport {
        transform_sup,
        transform_l2: diff.lp_norm(2.0)?,
        transform_relative: relative(transform_sup, rhs.sup_norm()),
        commutativity_sup,
        commutativity_l2: comm.lp_norm(2.0)?,
        commutativity_relative: relative(commutativity_sup, fg.sup_norm()),
    })
}
