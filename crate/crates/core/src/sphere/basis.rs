//! Dense evaluation tables of the harmonic basis over a quadrature grid.
//!
//! Galerkin assemblies (conformal eigenproblems, the curvature-equation
//! Newton solver) revolve around mass matrices `int w Y_i Y_j dA`. Those are
//! two rank-k updates away once the node-by-mode table is materialized.

use nalgebra::{DMatrix, DVector};

use crate::sphere::field::HarmonicField;
use crate::sphere::grid::SphereGrid;
use crate::sphere::legendre::{plm, tri, tri_len};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Which degrees enter the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    All,
    /// Even degrees only: the antipodally symmetric subspace.
    Even,
}

pub struct BasisTable {
    pub band_limit: usize,
    /// Column index -> `(l, m)`.
    pub modes: Vec<(usize, i64)>,
    /// `grid.len() x modes.len()` values of `Y_{l,m}` at the nodes.
    pub table: DMatrix<f64>,
}

impl BasisTable {
    pub fn new(grid: &SphereGrid, band_limit: usize, parity: Parity) -> Self {
        let mut modes = Vec::new();
        for l in 0..=band_limit {
            if parity == Parity::Even && l % 2 != 0 {
                continue;
            }
            for m in -(l as i64)..=(l as i64) {
                modes.push((l, m));
            }
        }
        let mut table = DMatrix::zeros(grid.len(), modes.len());
        let mut p = vec![0.0; tri_len(band_limit)];
        for i in 0..grid.n_theta {
            let x = grid.cos_thetas[i];
            let s = grid.thetas[i].sin();
            plm(band_limit, x, s, &mut p);
            for j in 0..grid.n_phi {
                let phi = grid.phis[j];
                let row = i * grid.n_phi + j;
                for (col, &(l, m)) in modes.iter().enumerate() {
                    let v = if m == 0 {
                        p[tri(l, 0)]
                    } else {
                        let mm = m.unsigned_abs() as usize;
                        let mf = mm as f64 * phi;
                        let t = if m > 0 { mf.cos() } else { mf.sin() };
                        SQRT_2 * p[tri(l, mm)] * t
                    };
                    table[(row, col)] = v;
                }
            }
        }
        BasisTable {
            band_limit,
            modes,
            table,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// `-Delta` eigenvalue `l(l+1)` per column.
    pub fn laplacian_eigenvalues(&self) -> Vec<f64> {
        self.modes
            .iter()
            .map(|&(l, _)| (l * (l + 1)) as f64)
            .collect()
    }

    /// Mass matrix `M_ij = int w Y_i Y_j dA` for nodewise weights `w`.
    pub fn mass_matrix(&self, grid: &SphereGrid, w: &[f64]) -> DMatrix<f64> {
        assert_eq!(w.len(), grid.len());
        let mut scaled = self.table.clone();
        for (row, (&wi, &qi)) in w.iter().zip(grid.weights()).enumerate() {
            let f = wi * qi;
            scaled.row_mut(row).scale_mut(f);
        }
        let mut m = DMatrix::zeros(self.n_modes(), self.n_modes());
        m.gemm_tr(1.0, &self.table, &scaled, 0.0);
        // symmetrize away the rounding skew
        let mt = m.transpose();
        0.5 * (m + mt)
    }

    /// Coefficients of the projection of nodewise samples: `B^T (q . v)`.
    pub fn project(&self, grid: &SphereGrid, values: &[f64]) -> DVector<f64> {
        let weighted: DVector<f64> = DVector::from_iterator(
            values.len(),
            values.iter().zip(grid.weights()).map(|(v, q)| v * q),
        );
        self.table.tr_mul(&weighted)
    }

    /// Samples of a coefficient vector: `B c`.
    pub fn synthesize(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.table * coeffs
    }

    /// Repackage a coefficient vector as a [`HarmonicField`].
    pub fn to_field(&self, coeffs: &DVector<f64>) -> HarmonicField {
        let mut f = HarmonicField::zeros(self.band_limit);
        for (col, &(l, m)) in self.modes.iter().enumerate() {
            f.set(l, m, coeffs[col]);
        }
        f
    }

    /// Extract the columns of a field's coefficients present in this basis.
    pub fn from_field(&self, field: &HarmonicField) -> DVector<f64> {
        DVector::from_iterator(
            self.n_modes(),
            self.modes.iter().map(|&(l, m)| {
                if l <= field.band_limit() {
                    field.get(l, m)
                } else {
                    0.0
                }
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_weight_mass_matrix_is_identity() {
        let grid = SphereGrid::for_band_limit(6);
        let basis = BasisTable::new(&grid, 6, Parity::All);
        let m = basis.mass_matrix(&grid, &vec![1.0; grid.len()]);
        for i in 0..basis.n_modes() {
            for j in 0..basis.n_modes() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (m[(i, j)] - expect).abs() < 1e-12,
                    "gram defect at ({i},{j}): {}",
                    m[(i, j)]
                );
            }
        }
    }

    #[test]
    fn even_parity_keeps_even_degrees() {
        let grid = SphereGrid::for_band_limit(4);
        let basis = BasisTable::new(&grid, 4, Parity::Even);
        assert!(basis.modes.iter().all(|&(l, _)| l % 2 == 0));
        // l = 0, 2, 4 -> 1 + 5 + 9 modes
        assert_eq!(basis.n_modes(), 15);
    }

    #[test]
    fn table_matches_field_synthesis() {
        let grid = SphereGrid::new(8, 11);
        let basis = BasisTable::new(&grid, 5, Parity::All);
        let mut f = HarmonicField::zeros(5);
        f.set(3, -2, 0.8);
        f.set(5, 4, -0.3);
        f.set(0, 0, 1.1);
        let coeffs = basis.from_field(&f);
        let via_table = basis.synthesize(&coeffs);
        let direct = f.synthesize(&grid);
        for (a, b) in via_table.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
