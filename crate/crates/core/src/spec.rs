//! Symbolic test functions with exact pointwise evaluation.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::multivector::check_dim;
use crate::{Complex, Error, Multivector, Result};

/// One term `c * x_1^{k_1} ... x_m^{k_m}` with a multivector coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyTerm {
    pub coeff: Multivector,
    pub exponents: Vec<u32>,
}

/// Polynomial in `x_1..x_m` with `Cl(0,m)` coefficients (coefficient on the left).
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    m: usize,
    terms: Vec<PolyTerm>,
}

impl Polynomial {
    pub fn new(m: usize, terms: Vec<PolyTerm>) -> Result<Self> {
        check_dim(m)?;
        for t in &terms {
            if t.coeff.m() != m {
                return Err(Error::DimensionMismatch { left: m, right: t.coeff.m() });
            }
            if t.exponents.len() != m {
                return Err(Error::DimensionMismatch { left: m, right: t.exponents.len() });
            }
        }
        Ok(Polynomial { m, terms })
    }

    /// The constant scalar polynomial `1`.
    pub fn one(m: usize) -> Result<Self> {
        let coeff = Multivector::scalar(m, Complex::new(1.0, 0.0))?;
        Self::new(m, alloc::vec![PolyTerm { coeff, exponents: alloc::vec![0; m] }])
    }

    /// A real scalar monomial `c x^exponents`.
    pub fn monomial(m: usize, c: f64, exponents: &[u32]) -> Result<Self> {
        let coeff = Multivector::scalar(m, Complex::new(c, 0.0))?;
        Self::new(m, alloc::vec![PolyTerm { coeff, exponents: exponents.to_vec() }])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[PolyTerm] {
        &self.terms
    }

    /// Sum of two polynomials (terms concatenated).
    pub fn plus(mut self, other: Polynomial) -> Result<Self> {
        if other.m != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: other.m });
        }
        self.terms.extend(other.terms);
        Ok(self)
    }

    /// Total degree of the nonzero terms (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|t| !t.coeff.is_zero())
            .map(|t| t.exponents.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_constant_scalar(&self) -> bool {
        self.terms.iter().all(|t| {
            t.coeff.is_zero()
                || (t.exponents.iter().all(|&k| k == 0)
                    && t.coeff.terms().iter().all(|(b, _)| b.grade() == 0))
        })
    }

    /// Adds `P(x)` into `out`, which is indexed by blade bitmask.
    pub fn eval_into(&self, x: &[f64], scale: f64, out: &mut [Complex]) {
        for t in &self.terms {
            let mut mono = scale;
            for (xi, &k) in x.iter().zip(&t.exponents) {
                mono *= libm::pow(*xi, k as f64);
            }
            if mono == 0.0 {
                continue;
            }
            for (o, c) in out.iter_mut().zip(t.coeff.coeffs()) {
                *o += c * mono;
            }
        }
    }
}

/// Tabulated radial profile `f_0(r)` with monotone (Fritsch-Butland) cubic
/// interpolation. The table must start at `r = 0`; beyond its last knot the
/// profile is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialTable {
    r: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl RadialTable {
    pub fn new(r: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if r.len() != values.len() || r.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "radial table needs >= 2 matching knots, got {} radii and {} values",
                r.len(),
                values.len()
            )));
        }
        if r[0] != 0.0 {
            return Err(Error::RadialTableCoverage { radius: 0.0 });
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("radial table radii must increase".into()));
        }
        let slopes = monotone_slopes(&r, &values);
        Ok(RadialTable { r, values, slopes })
    }

    pub fn max_radius(&self) -> f64 {
        *self.r.last().expect("non-empty")
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r > self.max_radius() || r < 0.0 {
            return 0.0;
        }
        let k = match self.r.partition_point(|&ri| ri <= r) {
            0 => 0,
            p => (p - 1).min(self.r.len() - 2),
        };
        let h = self.r[k + 1] - self.r[k];
        let t = (r - self.r[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[k] + h10 * h * self.slopes[k] + h01 * self.values[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

fn monotone_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut m = alloc::vec![0.0; n];
    if n == 2 {
        m[0] = d[0];
        m[1] = d[0];
        return m;
    }
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m[0] = end_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && libm::fabs(s) > libm::fabs(3.0 * d0) {
        3.0 * d0
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    /// `e^{-a|x|^2}`
    Gaussian { a: f64 },
    /// `P(x) e^{-a|x|^2}`
    PolyGaussian { a: f64, poly: Polynomial },
    /// `f_0(|x|)`
    Radial(RadialTable),
    /// `1` on the closed ball of the given radius, `0` outside.
    Indicator { radius: f64 },
}

/// A symbolic multivector-valued function on `R^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    m: usize,
    kind: FunctionKind,
}

impl FunctionSpec {
    pub fn new(m: usize, kind: FunctionKind) -> Result<Self> {
        check_dim(m)?;
        match &kind {
            FunctionKind::Gaussian { a } | FunctionKind::PolyGaussian { a, .. } if !(*a > 0.0 && a.is_finite()) => {
                return Err(Error::InvalidParameter(format!("Gaussian parameter must be positive, got {a}")));
            }
            FunctionKind::PolyGaussian { poly, .. } if poly.m() != m => {
                return Err(Error::DimensionMismatch { left: m, right: poly.m() });
            }
            FunctionKind::Indicator { radius } if !(*radius > 0.0) => {
                return Err(Error::InvalidParameter(format!("indicator radius must be positive, got {radius}")));
            }
            _ => {}
        }
        Ok(FunctionSpec { m, kind })
    }

    pub fn gaussian(m: usize, a: f64) -> Result<Self> {
        Self::new(m, FunctionKind::Gaussian { a })
    }

    pub fn poly_gaussian(a: f64, poly: Polynomial) -> Result<Self> {
        Self::new(poly.m(), FunctionKind::PolyGaussian { a, poly })
    }

    pub fn radial(m: usize, table: RadialTable) -> Result<Self> {
        Self::new(m, FunctionKind::Radial(table))
    }

    pub fn indicator(m: usize, radius: f64) -> Result<Self> {
        Self::new(m, FunctionKind::Indicator { radius })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn is_radial(&self) -> bool {
        match &self.kind {
            FunctionKind::Gaussian { .. } | FunctionKind::Radial(_) | FunctionKind::Indicator { .. } => true,
            FunctionKind::PolyGaussian { poly, .. } => poly.is_constant_scalar(),
        }
    }

    /// The Gaussian exponent `a`, if the function has the form `P e^{-a|x|^2}`.
    pub fn gaussian_parameter(&self) -> Option<f64> {
        match &self.kind {
            FunctionKind::Gaussian { a } | FunctionKind::PolyGaussian { a, .. } => Some(*a),
            _ => None,
        }
    }

    /// Polynomial degree of the `P e^{-a|x|^2}` families.
    pub fn degree(&self) -> Option<u32> {
        match &self.kind {
            FunctionKind::Gaussian { .. } => Some(0),
            FunctionKind::PolyGaussian { poly, .. } => Some(poly.degree()),
            _ => None,
        }
    }

    /// Checks that a tabulated profile covers `[0, radius]`.
    pub fn check_coverage(&self, radius: f64) -> Result<()> {
        if let FunctionKind::Radial(t) = &self.kind {
            if t.max_radius() < radius {
                return Err(Error::RadialTableCoverage { radius });
            }
        }
        Ok(())
    }

    /// Adds `f(x)` into `out` (indexed by blade bitmask, length `2^m`).
    pub fn eval_into(&self, x: &[f64], out: &mut [Complex]) {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match &self.kind {
            FunctionKind::Gaussian { a } => out[0] += libm::exp(-a * r2),
            FunctionKind::PolyGaussian { a, poly } => poly.eval_into(x, libm::exp(-a * r2), out),
            FunctionKind::Radial(t) => out[0] += t.eval(libm::sqrt(r2)),
            FunctionKind::Indicator { radius } => {
                if r2 <= radius * radius {
                    out[0] += 1.0;
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<Multivector> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: x.len() });
        }
        let mut c = alloc::vec![Complex::new(0.0, 0.0); 1 << self.m];
        self.eval_into(x, &mut c);
        Multivector::from_coeffs(self.m, c)
    }

    /// `int_{|x| > R} e^{-a|x|^2} dx` for the pure Gaussian, `None` otherwise.
    pub fn tail_bound(&self, radius: f64) -> Option<f64> {
        match self.kind {
            FunctionKind::Gaussian { a } => {
                let s = self.m as f64 / 2.0;
                Some(libm::pow(PI / a, s) * regularized_upper_gamma(self.m, a * radius * radius))
            }
            _ => None,
        }
    }
}

/// `Q(m/2, x) = Gamma(m/2, x) / Gamma(m/2)` for integer `m >= 1`.
fn regularized_upper_gamma(m: usize, x: f64) -> f64 {
    let (mut q, mut s) = if m % 2 == 0 {
        (libm::exp(-x), 1.0)
    } else {
        (libm::erfc(libm::sqrt(x)), 0.5)
    };
    // Q(s+1, x) = Q(s, x) + x^s e^{-x} / Gamma(s+1)
    while s < m as f64 / 2.0 {
        q += libm::exp(s * libm::log(x) - x - libm::lgamma(s + 1.0));
        s += 1.0;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Blade;

    #[test]
    fn pointwise_examples() {
        let g = FunctionSpec::gaussian(2, 0.5).unwrap();
        assert_eq!(g.eval(&[0.0, 0.0]).unwrap().coeff(Blade::SCALAR).re, 1.0);

        let p = Polynomial::monomial(2, 1.0, &[1, 0]).unwrap();
        let pg = FunctionSpec::poly_gaussian(0.5, p).unwrap();
        let v = pg.eval(&[2.0, 0.0]).unwrap().coeff(Blade::SCALAR).re;
        assert!((v - 2.0 * libm::exp(-2.0)).abs() < 1e-16);

        let ind = FunctionSpec::indicator(2, 1.0).unwrap();
        assert!(ind.eval(&[2.0, 0.0]).unwrap().is_zero());
        assert_eq!(ind.eval(&[0.6, 0.8]).unwrap().coeff(Blade::SCALAR).re, 1.0);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(FunctionSpec::gaussian(2, 0.0).is_err());
        assert!(FunctionSpec::gaussian(2, -1.0).is_err());
        assert!(FunctionSpec::indicator(2, 0.0).is_err());
        assert!(RadialTable::new(alloc::vec![0.5, 1.0], alloc::vec![1.0, 0.0]).is_err());
        assert!(RadialTable::new(alloc::vec![0.0, 0.0], alloc::vec![1.0, 0.0]).is_err());
        let t = RadialTable::new(alloc::vec![0.0, 1.0, 2.0], alloc::vec![1.0, 0.5, 0.0]).unwrap();
        let f = FunctionSpec::radial(2, t).unwrap();
        assert!(f.check_coverage(2.0).is_ok());
        assert_eq!(f.check_coverage(3.0), Err(Error::RadialTableCoverage { radius: 3.0 }));
    }

    #[test]
    fn monotone_table_stays_monotone() {
        let r: Vec<f64> = (0..20).map(|i| i as f64 * 0.5).collect();
        let v: Vec<f64> = r.iter().map(|&x| libm::exp(-x * x / 2.0)).collect();
        let t = RadialTable::new(r, v).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..=950 {
            let x = i as f64 * 0.01;
            let y = t.eval(x);
            assert!(y <= prev + 1e-15);
            prev = y;
            assert!((y - libm::exp(-x * x / 2.0)).abs() < 1.3e-2);
        }
        assert_eq!(t.eval(10.0), 0.0);
        // Reference PCHIP values (SciPy PchipInterpolator on the same table).
        for (x, expected) in [
            (0.1, 0.9881553383747153),
            (0.27, 0.9519492802144014),
            (1.3, 0.42971698803935465),
            (4.75, 1.4595565944311954e-05),
        ] {
            assert!((t.eval(x) - expected).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn degree_and_radiality() {
        let p = Polynomial::monomial(2, 1.0, &[2, 1]).unwrap();
        let q = Polynomial::one(2).unwrap();
        let pq = p.plus(q.clone()).unwrap();
        assert_eq!(pq.degree(), 3);
        assert!(!FunctionSpec::poly_gaussian(1.0, pq).unwrap().is_radial());
        assert!(FunctionSpec::poly_gaussian(1.0, q).unwrap().is_radial());
    }

    #[test]
    fn gaussian_tail_bound_closed_form() {
        // m = 2: int_{r>R} e^{-a r^2} 2 pi r dr = (pi/a) e^{-a R^2}
        let g = FunctionSpec::gaussian(2, 0.5).unwrap();
        let t = g.tail_bound(3.0).unwrap();
        assert!((t / (2.0 * PI * libm::exp(-4.5)) - 1.0).abs() < 1e-14);
        // m = 1: int_{|x|>R} e^{-x^2} dx = sqrt(pi) erfc(R)
        let g1 = FunctionSpec::gaussian(1, 1.0).unwrap();
        assert!((g1.tail_bound(1.0).unwrap() - libm::sqrt(PI) * libm::erfc(1.0)).abs() < 1e-15);
        // R = 0 recovers the full integral (pi/a)^{m/2}.
        let g4 = FunctionSpec::gaussian(4, 0.5).unwrap();
        assert!((g4.tail_bound(0.0).unwrap() - 4.0 * PI * PI).abs() < 1e-12);
    }
}
