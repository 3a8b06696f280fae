//! In-place radix-2 complex FFT.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Complex, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `X_k = sum_j x_j e^{-2 pi i jk/n}`
    Forward,
    /// `x_j = sum_k X_k e^{+2 pi i jk/n}` (unnormalised)
    Inverse,
}

/// Precomputed twiddles and bit-reversal table for one power-of-two length.
#[derive(Clone, Debug)]
pub struct Fft {
    n: usize,
    twiddles: Vec<Complex>,
    reversal: Vec<usize>,
}

impl Fft {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(alloc::format!(
                "FFT length {n} is not a power of two"
            )));
        }
        let bits = n.trailing_zeros();
        let reversal = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        let twiddles = (0..n / 2)
            .map(|k| {
                let t = -2.0 * PI * k as f64 / n as f64;
                Complex::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        Ok(Fft { n, twiddles, reversal })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn process(&self, data: &mut [Complex], direction: Direction) {
        assert_eq!(data.len(), self.n, "FFT buffer length mismatch");
        for i in 0..self.n {
            let j = self.reversal[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= self.n {
            let half = len / 2;
            let stride = self.n / len;
            for start in (0..self.n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if direction == Direction::Inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len *= 2;
        }
    }
}

/// Signed mode number of FFT bin `k` for length `n`: `0, 1, ..., n/2, -(n/2-1), ..., -1`.
/// The Nyquist bin maps to `+n/2`.
pub fn mode_of_bin(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive_dft(x: &[Complex], sign: f64) -> Vec<Complex> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex::new(0.0, 0.0), |acc, (j, v)| {
                    let t = sign * 2.0 * PI * (j * k) as f64 / n as f64;
                    acc + v * Complex::new(libm::cos(t), libm::sin(t))
                })
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for &n in &[1usize, 2, 8, 64] {
            let x: Vec<Complex> = (0..n)
                .map(|j| Complex::new(libm::sin(j as f64 * 0.7) + 0.1, libm::cos(j as f64 * 1.3)))
                .collect();
            let fft = Fft::new(n).unwrap();
            let mut fwd = x.clone();
            fft.process(&mut fwd, Direction::Forward);
            for (a, b) in fwd.iter().zip(naive_dft(&x, -1.0)) {
                assert!((a - b).norm() < 1e-12);
            }
            let mut back = fwd.clone();
            fft.process(&mut back, Direction::Inverse);
            for (a, b) in back.iter().zip(&x) {
                assert!((a / n as f64 - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(Fft::new(12).is_err());
        assert!(Fft::new(0).is_err());
        let _ = vec![0; 1];
    }

    #[test]
    fn mode_numbering() {
        let modes: Vec<i64> = (0..8).map(|k| mode_of_bin(k, 8)).collect();
        assert_eq!(modes, [0, 1, 2, 3, 4, -3, -2, -1]);
    }
}
