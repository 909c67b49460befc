//! Quadrature grids on the unit sphere.
//!
//! Gauss-Legendre nodes in `cos(theta)` crossed with a uniform longitude
//! rule. The product rule integrates spherical polynomials of degree up to
//! `2 n_theta - 1` in the polar direction and trigonometric degree
//! `n_phi - 1` in longitude, so a grid built by [`SphereGrid::for_band_limit`]
//! is exact on products of two harmonics up to the band limit.

use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point on the unit sphere in ambient coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint(Vector3<f64>);

impl SpherePoint {
    /// Build from ambient coordinates, normalizing onto the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vector3::new(x, y, z);
        let n = v.norm();
        if n < 1e-12 {
            return Err(Error::Domain(format!(
                "cannot normalize near-zero vector ({x}, {y}, {z})"
            )));
        }
        Ok(SpherePoint(v / n))
    }

    /// Build from polar angle `theta` in `[0, pi]` and longitude `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = (theta.sin(), theta.cos());
        SpherePoint(Vector3::new(st * phi.cos(), st * phi.sin(), ct))
    }

    pub(crate) fn from_unit(v: Vector3<f64>) -> Self {
        SpherePoint(v.normalize())
    }

    #[inline]
    pub fn coords(&self) -> Vector3<f64> {
        self.0
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.0.x
    }
    #[inline]
    pub fn y(&self) -> f64 {
        self.0.y
    }
    #[inline]
    pub fn z(&self) -> f64 {
        self.0.z
    }

    /// Polar angle measured from the +z axis.
    pub fn theta(&self) -> f64 {
        self.0.z.clamp(-1.0, 1.0).acos()
    }

    /// Longitude in `(-pi, pi]`.
    pub fn phi(&self) -> f64 {
        self.0.y.atan2(self.0.x)
    }

    pub fn antipode(&self) -> Self {
        SpherePoint(-self.0)
    }

    /// Euclidean chord distance in the ambient space.
    pub fn chord_distance(&self, other: &SpherePoint) -> f64 {
        (self.0 - other.0).norm()
    }

    /// Geodesic (round-metric) distance.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        self.0.dot(&other.0).clamp(-1.0, 1.0).acos()
    }

    /// An orthonormal tangent frame `(e1, e2)` with `e1 x e2 = p`.
    pub fn tangent_frame(&self) -> (Vector3<f64>, Vector3<f64>) {
        let p = self.0;
        let helper = if p.z.abs() < 0.9 {
            Vector3::z()
        } else {
            Vector3::x()
        };
        let e1 = helper.cross(&p).normalize();
        let e2 = p.cross(&e1);
        (e1, e2)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Newton iteration on the Legendre recurrence; nodes are mirrored so the
/// rule is exactly symmetric about zero.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n / 2;
    for i in 0..(n + 1) / 2 {
        // Tricomi-style initial guess for the i-th root (descending order).
        let mut xi = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, xi);
            let dx = p / dp;
            xi -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, xi);
        let wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
        x[i] = -xi;
        w[i] = wi;
        x[n - 1 - i] = xi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[half] = 0.0;
        let (_, dp) = legendre_pair(n, 0.0);
        w[half] = 2.0 / (dp * dp);
    }
    (x, w)
}

/// Legendre polynomial `P_n` and its derivative at `x`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Product quadrature grid over the sphere carrying the round area measure.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Gauss-Legendre abscissae `cos(theta_i)`, ascending.
    pub cos_thetas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// Per-row Gauss-Legendre weight (does not include the `2 pi / n_phi`).
    pub gl_weights: Vec<f64>,
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (xs, ws) = gauss_legendre(n_theta);
        let thetas: Vec<f64> = xs.iter().map(|x| x.clamp(-1.0, 1.0).acos()).collect();
        let phis: Vec<f64> = (0..n_phi)
            .map(|j| 2.0 * PI * j as f64 / n_phi as f64)
            .collect();
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (i, &theta) in thetas.iter().enumerate() {
            for &phi in &phis {
                nodes.push(SpherePoint::from_angles(theta, phi));
                weights.push(ws[i] * dphi);
            }
        }
        SphereGrid {
            n_theta,
            n_phi,
            cos_thetas: xs,
            thetas,
            phis,
            gl_weights: ws,
            nodes,
            weights,
        }
    }

    /// Smallest grid whose quadrature is exact for products of two
    /// harmonics of degree `<= band_limit`, sized per the `2L + 2` rule.
    pub fn for_band_limit(band_limit: usize) -> Self {
        let n = 2 * band_limit + 2;
        SphereGrid::new(n, n)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn node(&self, i_theta: usize, i_phi: usize) -> &SpherePoint {
        &self.nodes[i_theta * self.n_phi + i_phi]
    }

    /// Quadrature of sampled values against the round area measure.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len());
        values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .sum()
    }

    /// Sample a function at every node.
    pub fn sample(&self, f: impl Fn(&SpherePoint) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|p| f(p)).collect()
    }

    /// Index of the antipodal node, available when `n_phi` is even
    /// (Gauss-Legendre rows are symmetric about the equator).
    pub fn antipodal_index(&self, idx: usize) -> Option<usize> {
        if self.n_phi % 2 != 0 {
            return None;
        }
        let i = idx / self.n_phi;
        let j = idx % self.n_phi;
        let i2 = self.n_theta - 1 - i;
        let j2 = (j + self.n_phi / 2) % self.n_phi;
        Some(i2 * self.n_phi + j2)
    }

    /// Check that the grid can hold an exact degree-`band_limit` analysis.
    pub fn check_band_limit(&self, band_limit: usize) -> Result<()> {
        let need_theta = band_limit + 1;
        let need_phi = 2 * band_limit + 1;
        if self.n_theta < need_theta || self.n_phi < need_phi {
            return Err(Error::Resolution {
                band_limit,
                need_theta,
                need_phi,
                got_theta: self.n_theta,
                got_phi: self.n_phi,
            });
        }
        Ok(())
    }

    /// Dump sampled values as `theta,phi,value` CSV rows.
    pub fn to_csv(&self, values: &[f64]) -> String {
        assert_eq!(values.len(), self.len());
        let mut s = String::from("theta,phi,value\n");
        for (idx, v) in values.iter().enumerate() {
            let i = idx / self.n_phi;
            let j = idx % self.n_phi;
            s.push_str(&format!("{},{},{}\n", self.thetas[i], self.phis[j], v));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // Exact for degree <= 15: check x^14 -> 2/15.
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        let s3: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(3)).sum();
        assert!(s3.abs() < 1e-15);
    }

    #[test]
    fn grid_weights_sum_to_sphere_area() {
        for grid in [SphereGrid::new(8, 16), SphereGrid::for_band_limit(16)] {
            let total: f64 = grid.weights().iter().sum();
            assert!((total - 4.0 * PI).abs() < 1e-10, "total {total}");
        }
    }

    #[test]
    fn antipodal_index_flips_nodes() {
        let grid = SphereGrid::new(6, 8);
        for idx in 0..grid.len() {
            let j = grid.antipodal_index(idx).unwrap();
            let p = grid.nodes()[idx];
            let q = grid.nodes()[j];
            assert!(p.chord_distance(&q.antipode()) < 1e-12);
        }
    }

    #[test]
    fn point_invariants() {
        let p = SpherePoint::new(1.0, 2.0, -0.5).unwrap();
        assert!((p.coords().norm() - 1.0).abs() < 1e-12);
        assert!(SpherePoint::new(0.0, 0.0, 0.0).is_err());
        let q = SpherePoint::from_angles(0.7, 1.9);
        assert!((q.theta() - 0.7).abs() < 1e-12);
        assert!((q.phi() - 1.9).abs() < 1e-12);
        let (e1, e2) = q.tangent_frame();
        assert!(e1.dot(&q.coords()).abs() < 1e-12);
        assert!(e2.dot(&q.coords()).abs() < 1e-12);
        assert!((e1.cross(&e2) - q.coords()).norm() < 1e-12);
    }
}
