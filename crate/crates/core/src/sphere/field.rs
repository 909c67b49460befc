//! Band-limited expansions in real orthonormal spherical harmonics.
//!
//! Coefficients are indexed by `(l, m)` with `0 <= l <= L`, `-l <= m <= l`,
//! against the basis
//!
//! ```text
//! Y_{l,0}  = Phat_l^0(cos t)
//! Y_{l,m}  = sqrt(2) Phat_l^m(cos t) cos(m p)   (m > 0)
//! Y_{l,-m} = sqrt(2) Phat_l^m(cos t) sin(m p)   (m > 0)
//! ```
//!
//! which is L2-orthonormal for the round area measure, so Parseval holds
//! coefficient-wise and the Laplacian acts diagonally as `-l(l+1)`.

use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::grid::{SphereGrid, SpherePoint};
use crate::sphere::legendre::{plm, plm_dtheta, plm_over_sin, tri, tri_len};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct HarmonicField {
    band_limit: usize,
    coeffs: Vec<f64>,
}

/// Wire format: `{"band_limit": L, "coeffs": [[l, m, value], ...]}`.
#[derive(Serialize, Deserialize)]
struct FieldRepr {
    band_limit: usize,
    coeffs: Vec<(usize, i64, f64)>,
}

impl From<HarmonicField> for FieldRepr {
    fn from(f: HarmonicField) -> Self {
        let mut coeffs = Vec::with_capacity(f.coeffs.len());
        for l in 0..=f.band_limit {
            for m in -(l as i64)..=(l as i64) {
                coeffs.push((l, m, f.get(l, m)));
            }
        }
        FieldRepr {
            band_limit: f.band_limit,
            coeffs,
        }
    }
}

impl TryFrom<FieldRepr> for HarmonicField {
    type Error = Error;

    fn try_from(r: FieldRepr) -> Result<Self> {
        let mut f = HarmonicField::zeros(r.band_limit);
        for (l, m, v) in r.coeffs {
            if l > r.band_limit || m.unsigned_abs() as usize > l {
                return Err(Error::Domain(format!(
                    "coefficient ({l}, {m}) outside band limit {}",
                    r.band_limit
                )));
            }
            f.set(l, m, v);
        }
        Ok(f)
    }
}

impl HarmonicField {
    pub fn zeros(band_limit: usize) -> Self {
        HarmonicField {
            band_limit,
            coeffs: vec![0.0; (band_limit + 1) * (band_limit + 1)],
        }
    }

    /// The basis field `Y_{l,m}` itself.
    pub fn basis(band_limit: usize, l: usize, m: i64) -> Self {
        let mut f = HarmonicField::zeros(band_limit);
        f.set(l, m, 1.0);
        f
    }

    /// The constant field with the given value everywhere.
    pub fn constant(band_limit: usize, value: f64) -> Self {
        let mut f = HarmonicField::zeros(band_limit);
        f.set(0, 0, value * (4.0 * PI).sqrt());
        f
    }

    #[inline]
    fn idx(l: usize, m: i64) -> usize {
        l * l + (l as i64 + m) as usize
    }

    #[inline]
    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, l: usize, m: i64) -> f64 {
        self.coeffs[Self::idx(l, m)]
    }

    #[inline]
    pub fn set(&mut self, l: usize, m: i64, v: f64) {
        self.coeffs[Self::idx(l, m)] = v;
    }

    /// L2-orthogonal projection of grid samples onto degree `<= band_limit`.
    pub fn analyze(grid: &SphereGrid, values: &[f64], band_limit: usize) -> Result<Self> {
        grid.check_band_limit(band_limit)?;
        assert_eq!(values.len(), grid.len());
        let mut f = HarmonicField::zeros(band_limit);
        let mut p = vec![0.0; tri_len(band_limit)];
        let (cos_tab, sin_tab) = trig_tables(grid.n_phi, band_limit);
        let dphi_weight = 2.0 * PI / grid.n_phi as f64;
        for i in 0..grid.n_theta {
            let x = grid.cos_thetas[i];
            let s = grid.thetas[i].sin();
            plm(band_limit, x, s, &mut p);
            let row_w = grid.gl_weights[i] * dphi_weight;
            for j in 0..grid.n_phi {
                let wv = row_w * values[i * grid.n_phi + j];
                if wv == 0.0 {
                    continue;
                }
                let cm = &cos_tab[j];
                let sm = &sin_tab[j];
                for l in 0..=band_limit {
                    f.coeffs[Self::idx(l, 0)] += wv * p[tri(l, 0)];
                    for m in 1..=l {
                        let b = SQRT_2 * p[tri(l, m)] * wv;
                        f.coeffs[Self::idx(l, m as i64)] += b * cm[m];
                        f.coeffs[Self::idx(l, -(m as i64))] += b * sm[m];
                    }
                }
            }
        }
        Ok(f)
    }

    /// Pointwise evaluation of the expansion at every grid node.
    pub fn synthesize(&self, grid: &SphereGrid) -> Vec<f64> {
        let l_max = self.band_limit;
        let mut out = vec![0.0; grid.len()];
        let mut p = vec![0.0; tri_len(l_max)];
        let (cos_tab, sin_tab) = trig_tables(grid.n_phi, l_max);
        for i in 0..grid.n_theta {
            let x = grid.cos_thetas[i];
            let s = grid.thetas[i].sin();
            plm(l_max, x, s, &mut p);
            for j in 0..grid.n_phi {
                let cm = &cos_tab[j];
                let sm = &sin_tab[j];
                let mut acc = 0.0;
                for l in 0..=l_max {
                    acc += self.coeffs[Self::idx(l, 0)] * p[tri(l, 0)];
                    for m in 1..=l {
                        let b = SQRT_2 * p[tri(l, m)];
                        acc += b
                            * (self.coeffs[Self::idx(l, m as i64)] * cm[m]
                                + self.coeffs[Self::idx(l, -(m as i64))] * sm[m]);
                    }
                }
                out[i * grid.n_phi + j] = acc;
            }
        }
        out
    }

    /// Evaluate at an arbitrary point.
    pub fn eval(&self, point: &SpherePoint) -> f64 {
        let l_max = self.band_limit;
        let x = point.z();
        // the xy-radius avoids the 1 - z^2 cancellation near the poles
        let s = point.x().hypot(point.y());
        let phi = point.phi();
        let mut p = vec![0.0; tri_len(l_max)];
        plm(l_max, x, s, &mut p);
        let mut acc = 0.0;
        for l in 0..=l_max {
            acc += self.coeffs[Self::idx(l, 0)] * p[tri(l, 0)];
            for m in 1..=l {
                let mf = m as f64 * phi;
                let b = SQRT_2 * p[tri(l, m)];
                acc += b
                    * (self.coeffs[Self::idx(l, m as i64)] * mf.cos()
                        + self.coeffs[Self::idx(l, -(m as i64))] * mf.sin());
            }
        }
        acc
    }

    /// Evaluate the field and its tangential gradient in ambient coordinates.
    ///
    /// The longitude derivative is assembled through `Phat/sin` so the
    /// result stays finite at the poles.
    pub fn eval_with_gradient(&self, point: &SpherePoint) -> (f64, Vector3<f64>) {
        let l_max = self.band_limit;
        let x = point.z().clamp(-1.0, 1.0);
        let s = point.x().hypot(point.y());
        let phi = point.phi();
        let n = tri_len(l_max);
        let mut p = vec![0.0; n];
        let mut w = vec![0.0; n];
        let mut dp = vec![0.0; n];
        plm(l_max, x, s, &mut p);
        plm_over_sin(l_max, x, s, &mut w);
        plm_dtheta(l_max, &p, &w, x, &mut dp);

        let mut value = 0.0;
        let mut g_theta = 0.0;
        let mut g_phi = 0.0; // already the (1/sin) d/dphi component
        for l in 0..=l_max {
            let a0 = self.coeffs[Self::idx(l, 0)];
            value += a0 * p[tri(l, 0)];
            g_theta += a0 * dp[tri(l, 0)];
            for m in 1..=l {
                let mf = m as f64 * phi;
                let (sin_m, cos_m) = mf.sin_cos();
                let ac = self.coeffs[Self::idx(l, m as i64)];
                let as_ = self.coeffs[Self::idx(l, -(m as i64))];
                let combo = ac * cos_m + as_ * sin_m;
                value += SQRT_2 * p[tri(l, m)] * combo;
                g_theta += SQRT_2 * dp[tri(l, m)] * combo;
                g_phi += SQRT_2 * m as f64 * w[tri(l, m)] * (-ac * sin_m + as_ * cos_m);
            }
        }
        let (sin_p, cos_p) = phi.sin_cos();
        let e_theta = Vector3::new(x * cos_p, x * sin_p, -s);
        let e_phi = Vector3::new(-sin_p, cos_p, 0.0);
        (value, g_theta * e_theta + g_phi * e_phi)
    }

    /// Laplace-Beltrami operator of the round metric: `a_lm -> -l(l+1) a_lm`.
    pub fn laplacian(&self) -> Self {
        let mut out = self.clone();
        for l in 0..=self.band_limit {
            let lam = -((l * (l + 1)) as f64);
            for m in -(l as i64)..=(l as i64) {
                out.coeffs[Self::idx(l, m)] *= lam;
            }
        }
        out
    }

    /// Parseval: squared L2 norm is the coefficient sum of squares.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum()
    }

    /// `int |grad f|^2 dA = sum l(l+1) a_lm^2`.
    pub fn gradient_energy(&self) -> f64 {
        let mut acc = 0.0;
        for l in 1..=self.band_limit {
            let lam = (l * (l + 1)) as f64;
            for m in -(l as i64)..=(l as i64) {
                let a = self.coeffs[Self::idx(l, m)];
                acc += lam * a * a;
            }
        }
        acc
    }

    /// `( ||f||^2 + ||grad f||^2 + ||lap f||^2 )^(1/2)` in one Parseval sum.
    pub fn h2_norm(&self) -> f64 {
        let mut acc = 0.0;
        for l in 0..=self.band_limit {
            let lam = (l * (l + 1)) as f64;
            let factor = 1.0 + lam + lam * lam;
            for m in -(l as i64)..=(l as i64) {
                let a = self.coeffs[Self::idx(l, m)];
                acc += factor * a * a;
            }
        }
        acc.sqrt()
    }

    /// Mean value over the sphere; zero iff `a_00 = 0`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0] / (4.0 * PI).sqrt()
    }

    pub fn is_mean_zero(&self, tol: f64) -> bool {
        self.coeffs[0].abs() <= tol
    }

    /// Antipodal symmetry holds exactly when every odd-degree coefficient
    /// vanishes.
    pub fn is_antipodal(&self, tol: f64) -> bool {
        self.max_odd_coeff() <= tol
    }

    /// Largest odd-degree coefficient magnitude.
    pub fn max_odd_coeff(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for l in (1..=self.band_limit).step_by(2) {
            for m in -(l as i64)..=(l as i64) {
                worst = worst.max(self.coeffs[Self::idx(l, m)].abs());
            }
        }
        worst
    }

    /// Drop the constant mode.
    pub fn without_mean(&self) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = 0.0;
        f
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut f = self.clone();
        for c in &mut f.coeffs {
            *c *= factor;
        }
        f
    }

    pub fn add(&self, other: &HarmonicField) -> Self {
        let band = self.band_limit.max(other.band_limit);
        let mut f = HarmonicField::zeros(band);
        for (src, _) in [(self, 0), (other, 1)] {
            for l in 0..=src.band_limit {
                for m in -(l as i64)..=(l as i64) {
                    f.coeffs[Self::idx(l, m)] += src.coeffs[Self::idx(l, m)];
                }
            }
        }
        f
    }
}

fn trig_tables(n_phi: usize, l_max: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut cos_tab = Vec::with_capacity(n_phi);
    let mut sin_tab = Vec::with_capacity(n_phi);
    for j in 0..n_phi {
        let phi = 2.0 * PI * j as f64 / n_phi as f64;
        let mut c = Vec::with_capacity(l_max + 1);
        let mut s = Vec::with_capacity(l_max + 1);
        for m in 0..=l_max {
            let mf = m as f64 * phi;
            c.push(mf.cos());
            s.push(mf.sin());
        }
        cos_tab.push(c);
        sin_tab.push(s);
    }
    (cos_tab, sin_tab)
}
