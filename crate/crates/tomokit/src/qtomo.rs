//! Quantum tomograms via fractional Fourier rotation.
//!
//! The optical tomogram of a pure state is the position density of the
//! phase-space-rotated wavefunction:
//! ψ(X, θ) = c(θ) ∫ exp[i(½ cot θ (y² + X²) - Xy/sin θ)] ψ(y) dy with
//! c(θ) = exp(-iπ/4 · sign sin θ)/√(2π|sin θ|), and w(X, θ) = |ψ(X, θ)|².
//! This family composes additively in θ up to a global phase, which the
//! densities never see.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Result, TomoError};
use crate::grid::{AngleGrid, Grid1D, TWO_PI};
use crate::radon::{filtered_backprojection, OpticalTomogram};
use crate::states::WaveFunction;

/// Below this |sin θ| the rotation is replaced by its exact limit
/// (identity or parity).
pub const EPS_THETA: f64 = 1e-3;

/// Baseline |sin θ| under which the direct kernel is composed out of two
/// well-conditioned quarter-turn legs. The effective threshold also grows
/// with grid coarseness, see [`sin_floor`].
pub const SIN_COMPOSE: f64 = 0.15;

/// Post-transform norm drift beyond this aborts instead of masking
/// aliasing.
pub const NORM_TOL: f64 = 1e-3;

/// Smallest |sin θ| the direct quadrature resolves on this grid: the kernel
/// chirp reaches frequency 2L/|sin θ|, which must stay under Nyquist π/Δy
/// with a safety factor.
fn sin_floor(grid: &Grid1D) -> f64 {
    2.5 * grid.half_width() * grid.step() / PI
}

/// Direct O(N²) quadrature of the rotation kernel. The inner oscillation
/// exp(-iXy/sin θ) advances by a constant phasor per y-node, so each X costs
/// one exponential and N multiplies.
fn frft_direct(grid: &Grid1D, values: &[Complex64], theta: f64) -> Vec<Complex64> {
    let n = grid.len();
    let (sin, cos) = theta.sin_cos();
    let half_cot = 0.5 * cos / sin;
    let c = Complex64::from_polar(
        1.0 / (TWO_PI * sin.abs()).sqrt(),
        -FRAC_PI_4 * sin.signum(),
    );
    let pre: Vec<Complex64> = (0..n)
        .map(|j| {
            let y = grid.point(j);
            values[j] * grid.weight(j) * Complex64::from_polar(1.0, half_cot * y * y)
        })
        .collect();
    let y0 = grid.first();
    let dy = grid.step();
    grid.points()
        .iter()
        .map(|&x| {
            let mut phase = Complex64::from_polar(1.0, -x * y0 / sin);
            let rot = Complex64::from_polar(1.0, -x * dy / sin);
            let mut acc = Complex64::new(0.0, 0.0);
            for p in &pre {
                acc += p * phase;
                phase *= rot;
            }
            c * Complex64::from_polar(1.0, half_cot * x * x) * acc
        })
        .collect()
}

/// Near-singular angles via two Nyquist-safe legs:
/// U_θ = U_{θ-π/2} ∘ U_{π/2}; each leg has |sin| ≥ cos(SIN_COMPOSE-ish).
fn frft_composed(grid: &Grid1D, values: &[Complex64], theta: f64) -> Vec<Complex64> {
    let mid = frft_direct(grid, values, FRAC_PI_2);
    frft_direct(grid, &mid, theta - FRAC_PI_2)
}

/// Rotate a state by the tomographic angle θ. The result is the state whose
/// position density is the tomogram slice w(X, θ). Slices carry a
/// θ-dependent global phase; densities and overlaps are convention-free.
pub fn fractional_fourier(psi: &WaveFunction, theta: f64) -> Result<WaveFunction> {
    let grid = psi.grid();
    let theta = theta.rem_euclid(TWO_PI);
    let sin = theta.sin();
    let floor = sin_floor(grid);
    if floor > 0.5 {
        return Err(TomoError::Numeric(format!(
            "grid too coarse for rotation kernels: resolvable |sin theta| floor is {floor:.2}"
        )));
    }
    let rotated: Vec<Complex64> = if sin.abs() < EPS_THETA {
        if (theta - PI).abs() < 1.0 {
            // Parity limit: ψ(X, π) = ψ(-X) up to global phase.
            if !grid.is_symmetric() {
                return Err(TomoError::Grid(
                    "parity limit needs a grid symmetric about the origin".into(),
                ));
            }
            psi.values().iter().rev().copied().collect()
        } else {
            psi.values().to_vec()
        }
    } else if sin.abs() < SIN_COMPOSE.max(floor) {
        frft_composed(grid, psi.values(), theta)
    } else {
        frft_direct(grid, psi.values(), theta)
    };
    let norm2 = grid.integrate(&rotated.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>());
    if (norm2 - 1.0).abs() > NORM_TOL {
        return Err(TomoError::Numeric(format!(
            "rotation by {theta:.4} drifted the norm to {norm2:.6}; the grid is aliasing"
        )));
    }
    WaveFunction::new(grid.clone(), rotated)
}

/// Optical tomogram of a pure state on its own grid: row k holds
/// |ψ(X, θ_k)|², one rotated density per angle.
pub fn optical_tomogram_quantum(
    psi: &WaveFunction,
    angles: &AngleGrid,
) -> Result<OpticalTomogram> {
    let rows: Vec<Result<Vec<f64>>> = angles
        .thetas()
        .par_iter()
        .map(|&theta| Ok(fractional_fourier(psi, theta)?.position_density()))
        .collect();
    let mut values = Array2::zeros((angles.len(), psi.grid().len()));
    for (k, row) in rows.into_iter().enumerate() {
        values.row_mut(k).assign(&ndarray::Array1::from(row?));
    }
    OpticalTomogram::new(psi.grid().clone(), angles.clone(), values)
}

/// Wigner quasi-density reconstructed from a tomogram, normalized so that
/// ∬ W dq dp = 1 (vacuum peak 1/π). Unlike the classical inverse, negative
/// regions are physical and preserved.
#[derive(Debug, Clone)]
pub struct WignerField {
    qgrid: Grid1D,
    pgrid: Grid1D,
    values: Array2<f64>,
    min_value: f64,
    min_location: (f64, f64),
}

impl WignerField {
    pub fn qgrid(&self) -> &Grid1D {
        &self.qgrid
    }

    pub fn pgrid(&self) -> &Grid1D {
        &self.pgrid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Most negative value and where it sits.
    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    pub fn min_location(&self) -> (f64, f64) {
        self.min_location
    }

    pub fn total_mass(&self) -> f64 {
        crate::states::trapezoid2d(&self.qgrid, &self.pgrid, &self.values)
    }
}

/// Filtered backprojection of a quantum tomogram. The raw mass must land
/// within [`NORM_TOL`] of 1 (it is then renormalized exactly); a larger
/// deficit means the (q, p) window or the angle set undersamples the state.
pub fn wigner_from_tomogram(
    w: &OpticalTomogram,
    qgrid: &Grid1D,
    pgrid: &Grid1D,
) -> Result<WignerField> {
    let mut values = filtered_backprojection(w, qgrid, pgrid)?;
    let mass = crate::states::trapezoid2d(qgrid, pgrid, &values);
    if (mass - 1.0).abs() > NORM_TOL {
        return Err(TomoError::Numeric(format!(
            "reconstructed Wigner mass {mass:.6} is off unity; widen the (q, p) window or add angles"
        )));
    }
    values.mapv_inplace(|v| v / mass);
    let mut min_value = f64::INFINITY;
    let mut min_location = (0.0, 0.0);
    for (i, &q) in qgrid.points().iter().enumerate() {
        for (j, &p) in pgrid.points().iter().enumerate() {
            if values[[i, j]] < min_value {
                min_value = values[[i, j]];
                min_location = (q, p);
            }
        }
    }
    Ok(WignerField {
        qgrid: qgrid.clone(),
        pgrid: pgrid.clone(),
        values,
        min_value,
        min_location,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent_wavefunction, fock_wavefunction};

    fn grid() -> Grid1D {
        Grid1D::uniform(1024, 8.0).unwrap()
    }

    #[test]
    fn vacuum_density_is_rotation_invariant() {
        let psi = fock_wavefunction(0, &grid()).unwrap();
        let sqrt_pi = PI.sqrt();
        for theta in [0.9, 2.2, 4.5, 0.05, PI - 0.05] {
            let rot = fractional_fourier(&psi, theta).unwrap();
            for (x, d) in rot.grid().points().iter().zip(rot.position_density()) {
                let expect = (-x * x).exp() / sqrt_pi;
                assert!(
                    (d - expect).abs() < 1e-8,
                    "theta {theta}, X {x}: {d} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn fock2_density_is_rotation_invariant() {
        let psi = fock_wavefunction(2, &grid()).unwrap();
        let reference = psi.position_density();
        for theta in [0.7, 3.9] {
            let rot = fractional_fourier(&psi, theta).unwrap();
            for (a, b) in rot.position_density().iter().zip(&reference) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn quarter_turn_moves_coherent_center_to_momentum() {
        // alpha = 0.8 + 0.6i: <q> = sqrt(2)*0.8, <p> = sqrt(2)*0.6.
        let psi = coherent_wavefunction(Complex64::new(0.8, 0.6), &grid()).unwrap();
        let rot = fractional_fourier(&psi, FRAC_PI_2).unwrap();
        let center = 2.0f64.sqrt() * 0.6;
        let sqrt_pi = PI.sqrt();
        for (x, d) in rot.grid().points().iter().zip(rot.position_density()) {
            let expect = (-(x - center) * (x - center)).exp() / sqrt_pi;
            assert!((d - expect).abs() < 1e-8, "X {x}: {d} vs {expect}");
        }
    }

    #[test]
    fn rotations_compose_additively() {
        let psi = coherent_wavefunction(Complex64::new(1.0, -0.4), &grid()).unwrap();
        let two_step = fractional_fourier(&fractional_fourier(&psi, 0.7).unwrap(), 0.9).unwrap();
        let one_step = fractional_fourier(&psi, 1.6).unwrap();
        for (a, b) in two_step.values().iter().zip(one_step.values()) {
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
        // Crossing the sin-branch at pi: densities must still agree.
        let across = fractional_fourier(&fractional_fourier(&psi, 2.0).unwrap(), 1.5).unwrap();
        let direct = fractional_fourier(&psi, 3.5).unwrap();
        for (a, b) in across.position_density().iter().zip(direct.position_density()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn composed_route_matches_direct_kernel() {
        let psi = fock_wavefunction(1, &grid()).unwrap();
        for sin_target in [0.2f64, 0.35] {
            let theta = PI - sin_target.asin(); // sin = target, direct route
            let direct = frft_direct(psi.grid(), psi.values(), theta);
            let composed = frft_composed(psi.grid(), psi.values(), theta);
            for (a, b) in direct.iter().zip(&composed) {
                assert!((a - b).norm() < 1e-8, "sin {sin_target}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn limits_patch_smoothly_onto_the_composed_route() {
        let psi = fock_wavefunction(1, &grid()).unwrap();
        // Parity limit vs composed route just outside the cutoff.
        let at_limit = fractional_fourier(&psi, PI + 2e-4).unwrap();
        let composed = fractional_fourier(&psi, PI + 2e-3).unwrap();
        for (a, b) in at_limit
            .position_density()
            .iter()
            .zip(composed.position_density())
        {
            assert!((a - b).abs() < 2e-3);
        }
        // Identity limit returns the state itself.
        let id = fractional_fourier(&psi, 1e-5).unwrap();
        for (a, b) in id.values().iter().zip(psi.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn quantum_tomogram_slices_are_normalized_densities() {
        let psi = fock_wavefunction(1, &grid()).unwrap();
        let w = optical_tomogram_quantum(&psi, &AngleGrid::offset(16).unwrap()).unwrap();
        let sqrt_pi = PI.sqrt();
        for k in 0..16 {
            for (x, v) in w.xgrid().points().iter().zip(w.slice(k)) {
                let expect = 2.0 * x * x * (-x * x).exp() / sqrt_pi;
                assert!((v - expect).abs() < 1e-8, "slice {k} at {x}");
            }
        }
    }

    #[test]
    fn fock1_wigner_shows_the_central_dip() {
        let psi = fock_wavefunction(1, &Grid1D::uniform(512, 8.0).unwrap()).unwrap();
        let w = optical_tomogram_quantum(&psi, &AngleGrid::offset(64).unwrap()).unwrap();
        // The window must hold essentially all Wigner mass for the unit-mass
        // guard: outside r = 4 a Fock-1 state carries only ~4e-6.
        let out = Grid1D::uniform(81, 4.0).unwrap();
        let field = wigner_from_tomogram(&w, &out, &out).unwrap();
        let dip = -1.0 / PI;
        assert!(
            (field.min_value() - dip).abs() < 0.15 * dip.abs(),
            "min {} vs {dip}",
            field.min_value()
        );
        let (q, p) = field.min_location();
        assert!(q.hypot(p) < 0.2, "dip at ({q}, {p})");
        assert!((field.total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coarse_grid_rotation_is_refused_or_guarded() {
        // 64 points over [-8, 8]: sin floor exceeds 0.5.
        let g = Grid1D::uniform(64, 8.0).unwrap();
        let psi = fock_wavefunction(0, &g).unwrap();
        assert!(matches!(
            fractional_fourier(&psi, 1.0),
            Err(TomoError::Numeric(_))
        ));
    }
}
