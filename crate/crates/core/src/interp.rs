//! Lagrange interpolation stencils on uniform 1-D node sets.
//!
//! Tensor products of these stencils give bilinear (`Linear`, error
//! `O(h^2)`), bicubic (`Cubic`, `O(h^4)`) and biquintic (`Quintic`, `O(h^6)`)
//! interpolation.

/// Interpolation order used by resampling and radial profiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// 2-point stencil, error `O(h^2)`.
    #[default]
    Linear,
    /// 4-point stencil, error `O(h^4)`.
    Cubic,
    /// 6-point stencil, error `O(h^6)`.
    Quintic,
}

impl Interpolation {
    pub fn points(self) -> usize {
        match self {
            Interpolation::Linear => 2,
            Interpolation::Cubic => 4,
            Interpolation::Quintic => 6,
        }
    }
}

pub const MAX_POINTS: usize = 6;

/// Node indices and weights of one 1-D stencil.
#[derive(Clone, Copy, Debug)]
pub struct Stencil {
    pub indices: [usize; MAX_POINTS],
    pub weights: [f64; MAX_POINTS],
    pub len: usize,
}

fn lagrange(u: f64, offsets: &[f64], weights: &mut [f64]) {
    for (j, w) in weights.iter_mut().enumerate() {
        let mut p = 1.0;
        for (k, &ok) in offsets.iter().enumerate() {
            if k != j {
                p *= (u - ok) / (offsets[j] - ok);
            }
        }
        *w = p;
    }
}

/// Stencil at fractional index `u` on nodes `0..n`; windows near the ends are
/// clamped so they stay inside the node set.
pub fn clamped(u: f64, n: usize, kind: Interpolation) -> Stencil {
    let p = kind.points().min(n);
    let base = libm::floor(u) as i64 - (p as i64 / 2 - 1);
    let start = base.clamp(0, (n - p) as i64) as usize;
    let mut st = Stencil { indices: [0; MAX_POINTS], weights: [0.0; MAX_POINTS], len: p };
    let mut offsets = [0.0; MAX_POINTS];
    for j in 0..p {
        st.indices[j] = start + j;
        offsets[j] = (start + j) as f64;
    }
    lagrange(u, &offsets[..p], &mut st.weights[..p]);
    st
}

/// Stencil at fractional index `u` on `n` periodic nodes.
pub fn periodic(u: f64, n: usize, kind: Interpolation) -> Stencil {
    let p = kind.points().min(n);
    let base = libm::floor(u) as i64 - (p as i64 / 2 - 1);
    let mut st = Stencil { indices: [0; MAX_POINTS], weights: [0.0; MAX_POINTS], len: p };
    let mut offsets = [0.0; MAX_POINTS];
    for j in 0..p {
        let k = base + j as i64;
        st.indices[j] = k.rem_euclid(n as i64) as usize;
        offsets[j] = k as f64;
    }
    lagrange(u, &offsets[..p], &mut st.weights[..p]);
    st
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(st: &Stencil, f: impl Fn(usize) -> f64) -> f64 {
        (0..st.len).map(|j| st.weights[j] * f(st.indices[j])).sum()
    }

    #[test]
    fn reproduces_polynomials_of_stencil_degree() {
        let poly = |x: f64| 1.0 - 2.0 * x + 0.3 * x * x * x - 0.01 * x * x * x * x * x;
        for &u in &[0.2, 3.7, 9.9, 10.4, -0.4] {
            let st = clamped(u, 12, Interpolation::Quintic);
            assert!((apply(&st, |i| poly(i as f64)) - poly(u)).abs() < 1e-9);
            let lin = clamped(u, 12, Interpolation::Linear);
            let line = |x: f64| 3.0 - 0.5 * x;
            assert!((apply(&lin, |i| line(i as f64)) - line(u)).abs() < 1e-13);
        }
    }

    #[test]
    fn periodic_wraps() {
        let n = 64;
        let f = |k: f64| libm::cos(2.0 * core::f64::consts::PI * k / n as f64);
        let st = periodic(63.5, n, Interpolation::Quintic);
        assert!(st.indices[..st.len].contains(&0));
        assert!((apply(&st, |i| f(i as f64)) - f(63.5)).abs() < 1e-7);
    }

    #[test]
    fn error_order_is_visible() {
        // Halving h reduces the cubic error by ~16x.
        let f = |x: f64| libm::sin(x);
        let err = |h: f64| {
            let n = (6.0 / h) as usize;
            let u = 2.345 / h;
            let st = clamped(u, n, Interpolation::Cubic);
            (apply(&st, |i| f(i as f64 * h)) - f(2.345)).abs()
        };
        let ratio = err(0.2) / err(0.1);
        assert!(ratio > 10.0 && ratio < 24.0, "ratio {ratio}");
    }
}
