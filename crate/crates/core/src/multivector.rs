//! The complexified Clifford algebra `Cl(0,m)`.
//!
//! Generators satisfy `e_i e_i = -1` and `e_i e_j = -e_j e_i` for `i != j`.
//! A basis blade `e_{i1...ik}` (with `i1 < ... < ik`) is stored as a bitmask
//! where bit `i-1` marks `e_i`; the empty mask is the unit `1`.
//!
//! Coefficients are complex. The Clifford norm is the Hermitian extension
//! `(sum_A |x_A|^2)^(1/2)`, which is the usual Euclidean coefficient norm on
//! real multivectors.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::{Complex, Error, Result};

/// Largest supported dimension (`2^12` coefficients).
pub const MAX_DIM: usize = 12;

pub(crate) fn check_dim(m: usize) -> Result<()> {
    if m == 0 || m > MAX_DIM {
        Err(Error::InvalidDimension(m))
    } else {
        Ok(())
    }
}

/// A basis blade `e_A`, encoded as a bitmask over `{1..m}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Blade(u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub const fn from_bits(bits: u32) -> Self {
        Blade(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The generator `e_i` (1-based).
    pub fn generator(i: usize, m: usize) -> Result<Self> {
        if i == 0 || i > m {
            return Err(Error::IndexOutOfRange { index: i, m });
        }
        Ok(Blade(1 << (i - 1)))
    }

    /// Builds `e_{i1...ik}` from a strictly increasing index list.
    pub fn from_indices(indices: &[usize], m: usize) -> Result<Self> {
        let mut bits = 0u32;
        let mut last = 0;
        for &i in indices {
            if i == 0 || i > m {
                return Err(Error::IndexOutOfRange { index: i, m });
            }
            if i <= last {
                return Err(Error::InvalidBlade(alloc::format!("{indices:?}")));
            }
            last = i;
            bits |= 1 << (i - 1);
        }
        Ok(Blade(bits))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Basis indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |b| bits & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn fits(self, m: usize) -> bool {
        m >= 32 || self.0 >> m == 0
    }

    /// Canonical order: by grade, then lexicographically by index list.
    pub fn canonical_cmp(self, other: Blade) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices().cmp(other.indices()))
    }

    /// Textual name: `""` for the scalar, `"12"` for `e_12`. Indices are
    /// separated by `.` when `m >= 10` so that `e_{1,10}` stays unambiguous.
    pub fn name(self, m: usize) -> String {
        let mut s = String::new();
        for (k, i) in self.indices().enumerate() {
            if m >= 10 && k > 0 {
                s.push('.');
            }
            s.push_str(&alloc::format!("{i}"));
        }
        s
    }

    /// Parses [`Blade::name`] output. `""` and `"0"` both denote the scalar.
    pub fn parse(name: &str, m: usize) -> Result<Self> {
        let name = name.trim();
        if name.is_empty() || name == "0" {
            return Ok(Blade::SCALAR);
        }
        let bad = || Error::InvalidBlade(String::from(name));
        let mut indices = Vec::new();
        if name.contains('.') || m >= 10 {
            for part in name.split('.') {
                indices.push(part.parse::<usize>().map_err(|_| bad())?);
            }
        } else {
            for ch in name.chars() {
                indices.push(ch.to_digit(10).ok_or_else(bad)? as usize);
            }
        }
        Blade::from_indices(&indices, m).map_err(|e| match e {
            Error::IndexOutOfRange { .. } => e,
            _ => bad(),
        })
    }
}

/// All `2^m` blades in canonical order.
pub fn canonical_blades(m: usize) -> Vec<Blade> {
    let mut blades: Vec<Blade> = (0..(1u32 << m)).map(Blade).collect();
    blades.sort_by(|a, b| a.canonical_cmp(*b));
    blades
}

/// Sign and blade of `e_a e_b` (no range check).
#[inline]
pub(crate) fn blade_product_unchecked(a: u32, b: u32) -> (f64, u32) {
    // Transpositions needed to sort the concatenated index list.
    let mut swaps = 0u32;
    let mut t = a >> 1;
    while t != 0 {
        swaps += (t & b).count_ones();
        t >>= 1;
    }
    // Each shared generator contracts via e_i e_i = -1.
    let contractions = (a & b).count_ones();
    let sign = if (swaps + contractions) % 2 == 0 { 1.0 } else { -1.0 };
    (sign, a ^ b)
}

/// `e_a e_b = sign * e_c`.
pub fn blade_product(a: Blade, b: Blade, m: usize) -> Result<(f64, Blade)> {
    for blade in [a, b] {
        if !blade.fits(m) {
            let index = 32 - blade.0.leading_zeros() as usize;
            return Err(Error::IndexOutOfRange { index, m });
        }
    }
    let (sign, c) = blade_product_unchecked(a.0, b.0);
    Ok((sign, Blade(c)))
}

/// A real vector `x = sum_i x_i e_i` of `R^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorM {
    components: Vec<f64>,
}

impl VectorM {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        check_dim(components.len())?;
        Ok(VectorM { components })
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Self::new(vec![0.0; m])
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.components.iter().map(|x| x * x).sum())
    }

    pub fn to_multivector(&self) -> Multivector {
        let mut out = Multivector::zero(self.m()).expect("dimension validated");
        for (i, &x) in self.components.iter().enumerate() {
            out.coeffs[1 << i] = Complex::new(x, 0.0);
        }
        out
    }

    /// `<x,y> = sum_j x_j y_j`.
    pub fn inner(&self, other: &VectorM) -> Result<f64> {
        same_dim(self.m(), other.m())?;
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// `x ^ y = sum_{j<k} e_j e_k (x_j y_k - x_k y_j)`.
    pub fn wedge(&self, other: &VectorM) -> Result<Multivector> {
        same_dim(self.m(), other.m())?;
        let m = self.m();
        let mut out = Multivector::zero(m)?;
        for j in 0..m {
            for k in (j + 1)..m {
                let c = self.components[j] * other.components[k]
                    - self.components[k] * other.components[j];
                out.coeffs[(1 << j) | (1 << k)] = Complex::new(c, 0.0);
            }
        }
        Ok(out)
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// Element of the complexified `Cl(0,m)`.
///
/// Coefficients are held densely (`2^m` entries indexed by blade bitmask);
/// products skip zero entries, so sparse inputs stay cheap.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    m: usize,
    coeffs: Vec<Complex>,
}

impl Multivector {
    pub fn zero(m: usize) -> Result<Self> {
        check_dim(m)?;
        Ok(Multivector {
            m,
            coeffs: vec![Complex::new(0.0, 0.0); 1 << m],
        })
    }

    pub fn scalar(m: usize, c: Complex) -> Result<Self> {
        let mut out = Self::zero(m)?;
        out.coeffs[0] = c;
        Ok(out)
    }

    pub fn from_blade(m: usize, blade: Blade, c: Complex) -> Result<Self> {
        let mut out = Self::zero(m)?;
        out.set(blade, c)?;
        Ok(out)
    }

    /// Builds from coefficients indexed by blade bitmask.
    pub fn from_coeffs(m: usize, coeffs: Vec<Complex>) -> Result<Self> {
        check_dim(m)?;
        if coeffs.len() != 1 << m {
            return Err(Error::DimensionMismatch {
                left: 1 << m,
                right: coeffs.len(),
            });
        }
        Ok(Multivector { m, coeffs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Coefficients indexed by blade bitmask.
    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> Complex {
        self.coeffs
            .get(blade.bits() as usize)
            .copied()
            .unwrap_or_default()
    }

    pub fn set(&mut self, blade: Blade, c: Complex) -> Result<()> {
        if !blade.fits(self.m) {
            let index = 32 - blade.bits().leading_zeros() as usize;
            return Err(Error::IndexOutOfRange { index, m: self.m });
        }
        self.coeffs[blade.bits() as usize] = c;
        Ok(())
    }

    /// Nonzero terms in canonical blade order.
    pub fn terms(&self) -> Vec<(Blade, Complex)> {
        canonical_blades(self.m)
            .into_iter()
            .map(|b| (b, self.coeffs[b.bits() as usize]))
            .filter(|(_, c)| *c != Complex::new(0.0, 0.0))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Clifford norm `(sum_A |x_A|^2)^(1/2)`.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.coeffs.iter().map(|c| c.norm_sqr()).sum())
    }

    /// Geometric product `self * other`.
    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        same_dim(self.m, other.m)?;
        let mut out = Multivector::zero(self.m)?;
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if cb.re == 0.0 && cb.im == 0.0 {
                    continue;
                }
                let (sign, c) = blade_product_unchecked(a as u32, b as u32);
                out.coeffs[c as usize] += ca * cb * sign;
            }
        }
        Ok(out)
    }

    /// Keeps only the grade-`k` part.
    pub fn grade_project(&self, k: usize) -> Result<Multivector> {
        if k > self.m {
            return Err(Error::GradeOutOfRange { k, m: self.m });
        }
        let mut out = self.clone();
        for (bits, c) in out.coeffs.iter_mut().enumerate() {
            if (bits as u32).count_ones() as usize != k {
                *c = Complex::new(0.0, 0.0);
            }
        }
        Ok(out)
    }

    /// Complex conjugation of every coefficient (no blade reversal).
    pub fn conj(&self) -> Multivector {
        Multivector {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Reversion: `e_{i1...ik} -> e_{ik...i1}`.
    pub fn reverse(&self) -> Multivector {
        let mut out = self.clone();
        for (bits, c) in out.coeffs.iter_mut().enumerate() {
            let k = (bits as u32).count_ones();
            if (k * (k.saturating_sub(1)) / 2) % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    pub fn scale(&self, s: Complex) -> Multivector {
        Multivector {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn checked_add(&self, other: &Multivector) -> Result<Multivector> {
        same_dim(self.m, other.m)?;
        Ok(Multivector {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Multivector) -> Result<Multivector> {
        self.checked_add(&-other)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    /// Panics on dimension mismatch; use [`Multivector::checked_add`] otherwise.
    fn add(self, rhs: &Multivector) -> Multivector {
        self.checked_add(rhs).expect("multivector dimensions differ")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.checked_sub(rhs).expect("multivector dimensions differ")
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.m, rhs.m, "multivector dimensions differ");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs)
            .expect("multivector dimensions differ")
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(Complex::new(rhs, 0.0))
    }
}

/// Formats a complex scalar as `a+bi` / `a-bi`, with `-0` printed as `0`.
pub fn format_complex(c: Complex) -> String {
    let re = if c.re == 0.0 { 0.0 } else { c.re };
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    if im < 0.0 || (im.is_nan() && im.is_sign_negative()) {
        alloc::format!("{re}-{}i", -im)
    } else {
        alloc::format!("{re}+{im}i")
    }
}

/// Renders `a+bi + c+di e1 + ...`: scalar first (always present), then
/// nonzero blades in canonical order.
impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_complex(self.coeffs[0]))?;
        for (blade, c) in self.terms() {
            if blade == Blade::SCALAR {
                continue;
            }
            write!(f, " + {} e{}", format_complex(c), blade.name(self.m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn blade(ix: &[usize]) -> Blade {
        Blade::from_indices(ix, 4).unwrap()
    }

    #[test]
    fn blade_product_table() {
        assert_eq!(blade_product(blade(&[1]), blade(&[1]), 2).unwrap(), (-1.0, Blade::SCALAR));
        assert_eq!(blade_product(blade(&[1]), blade(&[2]), 2).unwrap(), (1.0, blade(&[1, 2])));
        assert_eq!(blade_product(blade(&[2]), blade(&[1]), 2).unwrap(), (-1.0, blade(&[1, 2])));
        assert_eq!(blade_product(Blade::SCALAR, blade(&[1, 2]), 2).unwrap(), (1.0, blade(&[1, 2])));
        assert_eq!(blade_product(blade(&[1, 2]), blade(&[1, 2]), 2).unwrap(), (-1.0, Blade::SCALAR));
    }

    #[test]
    fn blade_product_rejects_out_of_range() {
        let e3 = Blade::from_bits(0b100);
        assert_eq!(
            blade_product(e3, Blade::SCALAR, 2),
            Err(Error::IndexOutOfRange { index: 3, m: 2 })
        );
        assert!(Blade::generator(0, 2).is_err());
        assert!(Blade::from_indices(&[2, 1], 2).is_err());
    }

    #[test]
    fn difference_of_vectors_product() {
        let m = 2;
        let e1 = Multivector::from_blade(m, blade(&[1]), c(1.0)).unwrap();
        let e2 = Multivector::from_blade(m, blade(&[2]), c(1.0)).unwrap();
        let prod = &(&e1 + &e2) * &(&e1 - &e2);
        let expected = Multivector::from_blade(m, blade(&[1, 2]), c(-2.0)).unwrap();
        assert_eq!(prod, expected);

        let one = Multivector::scalar(m, c(1.0)).unwrap();
        assert_eq!(&one * &prod, prod);
    }

    #[test]
    fn vector_square_and_norm() {
        let x = VectorM::new(alloc::vec![3.0, 0.0]).unwrap().to_multivector();
        let sq = &x * &x;
        assert_eq!(sq, Multivector::scalar(2, c(-9.0)).unwrap());

        let v = VectorM::new(alloc::vec![1.0, 1.0]).unwrap().to_multivector();
        assert!((v.norm() - libm::sqrt(2.0)).abs() < 1e-15);
        assert_eq!(Multivector::zero(3).unwrap().norm(), 0.0);
    }

    #[test]
    fn inner_and_wedge_units() {
        let e1 = VectorM::new(alloc::vec![1.0, 0.0]).unwrap();
        let e2 = VectorM::new(alloc::vec![0.0, 1.0]).unwrap();
        assert_eq!(e1.inner(&e2).unwrap(), 0.0);
        assert_eq!(
            e1.wedge(&e2).unwrap(),
            Multivector::from_blade(2, blade(&[1, 2]), c(1.0)).unwrap()
        );
        assert_eq!(e1.inner(&e1).unwrap(), 1.0);
        assert!(e1.wedge(&e1).unwrap().is_zero());
        let e3 = VectorM::new(alloc::vec![0.0, 0.0, 1.0]).unwrap();
        assert!(e1.inner(&e3).is_err());
    }

    #[test]
    fn grade_projection() {
        let m = 2;
        let mut u = Multivector::scalar(m, c(1.0)).unwrap();
        u.set(blade(&[1]), c(1.0)).unwrap();
        u.set(blade(&[1, 2]), c(1.0)).unwrap();
        assert_eq!(
            u.grade_project(1).unwrap(),
            Multivector::from_blade(m, blade(&[1]), c(1.0)).unwrap()
        );
        let e12 = Multivector::from_blade(m, blade(&[1, 2]), c(1.0)).unwrap();
        assert!(e12.grade_project(0).unwrap().is_zero());
        let mut sum = Multivector::zero(m).unwrap();
        for k in 0..=m {
            sum += &u.grade_project(k).unwrap();
        }
        assert_eq!(sum, u);
        assert_eq!(u.grade_project(3), Err(Error::GradeOutOfRange { k: 3, m: 2 }));
    }

    #[test]
    fn canonical_order_and_names() {
        let names: Vec<String> = canonical_blades(3).iter().map(|b| b.name(3)).collect();
        assert_eq!(names, ["", "1", "2", "3", "12", "13", "23", "123"]);
        assert_eq!(Blade::parse("12", 2).unwrap(), blade(&[1, 2]));
        assert_eq!(Blade::parse("0", 2).unwrap(), Blade::SCALAR);
        assert_eq!(Blade::from_indices(&[1, 10], 12).unwrap().name(12), "1.10");
        assert_eq!(Blade::parse("1.10", 12).unwrap().name(12), "1.10");
        assert!(Blade::parse("13", 2).is_err());
        assert!(Blade::parse("x", 2).is_err());
    }

    #[test]
    fn display_format() {
        let m = 2;
        let one = Multivector::scalar(m, c(1.0)).unwrap();
        assert_eq!(alloc::format!("{one}"), "1+0i");
        let mut u = Multivector::zero(m).unwrap();
        u.set(blade(&[1, 2]), Complex::new(0.5, -0.25)).unwrap();
        u.set(blade(&[1]), Complex::new(-0.0, 2.0)).unwrap();
        assert_eq!(alloc::format!("{u}"), "0+0i + 0+2i e1 + 0.5-0.25i e12");
    }

    #[test]
    fn reverse_and_conj() {
        let mut u = Multivector::zero(3).unwrap();
        u.set(Blade::from_bits(0b011), Complex::new(1.0, 1.0)).unwrap();
        u.set(Blade::from_bits(0b001), Complex::new(2.0, 0.0)).unwrap();
        let r = u.reverse();
        assert_eq!(r.coeff(Blade::from_bits(0b011)), Complex::new(-1.0, -1.0));
        assert_eq!(r.coeff(Blade::from_bits(0b001)), Complex::new(2.0, 0.0));
        assert_eq!(u.conj().coeff(Blade::from_bits(0b011)), Complex::new(1.0, -1.0));
    }
}
