//! Numerical Clifford analysis in `Cl(0,m)`.
//!
//! The crate covers the complexified Clifford algebra, multivector-valued
//! fields sampled on truncated grids, the Dirac/Gamma/Laplace operators, the
//! Clifford-Fourier transform `F_±` (exact path for `m = 2`), Clifford
//! translation and convolution, and the Beurling / Hardy / Cowling-Price /
//! Gelfand-Shilov functionals used to probe uncertainty principles.
//!
//! Everything here is `no_std` with `alloc`; file formats, the CLI and
//! parallel orchestration live in the `clifft` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bessel;
pub mod cft;
pub mod convolution;
mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod interp;
pub mod linalg;
pub mod multivector;
pub mod operators;
pub mod quadrature;
pub mod spec;
pub mod uncertainty;

pub use error::{Error, Result};
pub use multivector::{Blade, Multivector, VectorM};

/// Complex scalar used for every blade coefficient.
pub type Complex = num_complex::Complex64;

/// Transform branch of `F_±` (and of the kernel `K_±`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1.0` for [`Sign::Plus`], `-1.0` for [`Sign::Minus`].
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}
