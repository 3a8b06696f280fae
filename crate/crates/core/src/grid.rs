//! Quadrature grids over truncated `R^m`.
//!
//! * [`CartesianGrid`]: `n` cell-centred nodes per axis on `[-R, R]`,
//!   spacing `h = 2R/n`, node `i` at `-R + (i + 1/2) h`. The node set is
//!   symmetric under negation and under quarter turns of any coordinate
//!   plane. Weights are the tensor midpoint rule `h^m`.
//! * [`PolarGrid`] (`m = 2` only): shells `r_i = i R / n_r`, `i = 0..=n_r`,
//!   angles `theta_j = 2 pi j / n_theta`. Composite Simpson in `r` (weighted
//!   by `r`), trapezoid in `theta`.
//!
//! Node indices are row-major: the last coordinate (or the angle) varies
//! fastest.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::multivector::check_dim;
use crate::quadrature::simpson_weights;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianGrid {
    m: usize,
    n: usize,
    radius: f64,
}

impl CartesianGrid {
    pub fn new(m: usize, n: usize, radius: f64) -> Result<Self> {
        check_dim(m)?;
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 nodes per axis, got {n}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGrid(format!("radius must be positive, got {radius}")));
        }
        let total = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if total > 1 << 28 {
            return Err(Error::InvalidGrid(format!("{n}^{m} nodes is too many")));
        }
        Ok(CartesianGrid { m, n, radius })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / self.n as f64
    }

    /// Coordinate of index `i` along any axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -self.radius + (i as f64 + 0.5) * self.spacing()
    }

    /// The 1-D node positions.
    pub fn axis(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    pub fn node_count(&self) -> usize {
        self.n.pow(self.m as u32)
    }

    pub fn weight(&self) -> f64 {
        libm::pow(self.spacing(), self.m as f64)
    }

    /// Per-axis indices of a flat node index.
    pub fn multi_index(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = idx % self.n;
            idx /= self.n;
        }
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// Flat-index stride of axis `axis` (0-based).
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.m - 1 - axis) as u32)
    }

    pub fn node(&self, idx: usize, out: &mut [f64]) {
        let mut rest = idx;
        for slot in out.iter_mut().rev() {
            *slot = self.coord(rest % self.n);
            rest /= self.n;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarGrid {
    n_r: usize,
    n_theta: usize,
    radius: f64,
}

impl PolarGrid {
    /// `n_r` radial intervals (even, for Simpson) and `n_theta` angles
    /// (a power of two, for the angular FFT).
    pub fn new(n_r: usize, n_theta: usize, radius: f64) -> Result<Self> {
        if n_r < 2 || n_r % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n_r must be even and >= 2, got {n_r}")));
        }
        if n_theta < 4 || !n_theta.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_theta must be a power of two >= 4, got {n_theta}"
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGrid(format!("radius must be positive, got {radius}")));
        }
        Ok(PolarGrid { n_r, n_theta, radius })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn shell_count(&self) -> usize {
        self.n_r + 1
    }

    pub fn r(&self, i: usize) -> f64 {
        self.radius * i as f64 / self.n_r as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    pub fn node_count(&self) -> usize {
        self.shell_count() * self.n_theta
    }

    /// Radial Simpson weights including the Jacobian `r`.
    pub fn radial_weights(&self) -> Vec<f64> {
        let h = self.radius / self.n_r as f64;
        simpson_weights(self.n_r, h)
            .into_iter()
            .enumerate()
            .map(|(i, w)| w * self.r(i))
            .collect()
    }
}

/// A grid over truncated `R^m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grid {
    Cartesian(CartesianGrid),
    Polar(PolarGrid),
}

impl Grid {
    pub fn cartesian(m: usize, n: usize, radius: f64) -> Result<Self> {
        CartesianGrid::new(m, n, radius).map(Grid::Cartesian)
    }

    pub fn polar(n_r: usize, n_theta: usize, radius: f64) -> Result<Self> {
        PolarGrid::new(n_r, n_theta, radius).map(Grid::Polar)
    }

    pub fn m(&self) -> usize {
        match self {
            Grid::Cartesian(g) => g.m,
            Grid::Polar(_) => 2,
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            Grid::Cartesian(g) => g.radius,
            Grid::Polar(g) => g.radius,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Grid::Cartesian(g) => g.node_count(),
            Grid::Polar(g) => g.node_count(),
        }
    }

    /// Writes the coordinates of node `idx` into `out` (length `m`).
    pub fn node(&self, idx: usize, out: &mut [f64]) {
        match self {
            Grid::Cartesian(g) => g.node(idx, out),
            Grid::Polar(g) => {
                let r = g.r(idx / g.n_theta);
                let t = g.theta(idx % g.n_theta);
                out[0] = r * libm::cos(t);
                out[1] = r * libm::sin(t);
            }
        }
    }

    /// All node coordinates, flattened (`node_count * m`).
    pub fn nodes(&self) -> Vec<f64> {
        let m = self.m();
        let mut out = alloc::vec![0.0; self.node_count() * m];
        for (idx, chunk) in out.chunks_mut(m).enumerate() {
            self.node(idx, chunk);
        }
        out
    }

    /// Euclidean norm of every node.
    pub fn node_radii(&self) -> Vec<f64> {
        match self {
            Grid::Polar(g) => (0..g.node_count()).map(|i| g.r(i / g.n_theta)).collect(),
            Grid::Cartesian(_) => self
                .nodes()
                .chunks(self.m())
                .map(|x| libm::sqrt(x.iter().map(|v| v * v).sum()))
                .collect(),
        }
    }

    /// Quadrature weight of every node.
    pub fn weights(&self) -> Vec<f64> {
        match self {
            Grid::Cartesian(g) => alloc::vec![g.weight(); g.node_count()],
            Grid::Polar(g) => {
                let dt = 2.0 * PI / g.n_theta as f64;
                let radial = g.radial_weights();
                let mut w = Vec::with_capacity(g.node_count());
                for wr in radial {
                    for _ in 0..g.n_theta {
                        w.push(wr * dt);
                    }
                }
                w
            }
        }
    }

    /// Largest node distance from the origin.
    pub fn max_node_radius(&self) -> f64 {
        match self {
            Grid::Cartesian(g) => {
                let c = g.coord(g.n - 1);
                libm::sqrt(g.m as f64) * c
            }
            Grid::Polar(g) => g.radius,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_nodes_are_symmetric() {
        let g = CartesianGrid::new(2, 8, 4.0).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.coord(0), -3.5);
        assert_eq!(g.coord(7), 3.5);
        for i in 0..8 {
            assert_eq!(g.coord(i), -g.coord(7 - i));
        }
        let mut x = [0.0; 2];
        g.node(g.flat_index(&[1, 6]), &mut x);
        assert_eq!(x, [-2.5, 2.5]);
        let mut mi = [0; 2];
        g.multi_index(13, &mut mi);
        assert_eq!(mi, [1, 5]);
        assert_eq!(g.stride(0), 8);
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(Grid::cartesian(2, 1, 1.0).is_err());
        assert!(Grid::cartesian(2, 8, 0.0).is_err());
        assert!(Grid::cartesian(0, 8, 1.0).is_err());
        assert!(Grid::polar(3, 8, 1.0).is_err());
        assert!(Grid::polar(4, 6, 1.0).is_err());
    }

    #[test]
    fn weights_integrate_area() {
        let g = Grid::polar(16, 16, 2.0).unwrap();
        let area: f64 = g.weights().iter().sum();
        assert!((area - PI * 4.0).abs() < 1e-12);
        let c = Grid::cartesian(2, 10, 2.0).unwrap();
        let area: f64 = c.weights().iter().sum();
        assert!((area - 16.0).abs() < 1e-12);
    }
}
