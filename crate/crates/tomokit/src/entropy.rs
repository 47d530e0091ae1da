//! Entropies of tomograms and the inequalities they satisfy.
//!
//! Every tomogram slice w(·, θ) is a probability density, so Shannon and
//! Rényi entropies apply angle by angle. Three families of bounds are
//! checked here: the position/momentum pair bound S_q + S_p ≥ ln(πe), its
//! rotated version for any quadrature pair (θ, θ + π/2), and the
//! angle-integrated bound 2π ∮ S(θ) dθ ≥ 2π² ln(πe) that every tomogram of
//! a normalized state satisfies, with equality exactly on the ground
//! Gaussian.

use serde::Serialize;

use crate::error::{Result, TomoError};
use crate::grid::{Grid1D, TWO_PI};
use crate::qtomo::fractional_fourier;
use crate::radon::{OpticalTomogram, ParameterWeight, SymplecticEvaluator};
use crate::states::{DensityMatrix, WaveFunction};

pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// ln(πe): the pair bound, and half the value 1.072364942924700…
/// attained per slice by the ground state.
pub fn pair_bound() -> f64 {
    (std::f64::consts::PI * std::f64::consts::E).ln()
}

/// Shannon entropy -Σ p ln p of a discrete distribution (0 ln 0 = 0).
pub fn shannon_discrete(p: &[f64]) -> f64 {
    crate::probkit::shannon(p)
}

/// Rényi entropy (1-q)^{-1} ln Σ p^q; continuous at q = 1 where it becomes
/// Shannon.
pub fn renyi_discrete(p: &[f64], q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(TomoError::Spec(format!(
            "Renyi order must be positive and finite, got {q}"
        )));
    }
    if (q - 1.0).abs() < 1e-12 {
        return Ok(shannon_discrete(p));
    }
    let z: f64 = p.iter().map(|&v| if v > 0.0 { v.powf(q) } else { 0.0 }).sum();
    Ok(z.ln() / (1.0 - q))
}

/// Differential Rényi entropy ln(∫ ρ^q dx)/(1-q) of a density sampled on
/// a grid; continuous in q through the Shannon limit at q = 1.
pub fn renyi_continuous(grid: &Grid1D, density: &[f64], q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(TomoError::Spec(format!(
            "Renyi order must be positive and finite, got {q}"
        )));
    }
    if (q - 1.0).abs() < 1e-12 {
        return Ok(shannon_continuous(grid, density));
    }
    let z = grid.integrate(
        &density
            .iter()
            .map(|&v| if v > 0.0 { v.powf(q) } else { 0.0 })
            .collect::<Vec<_>>(),
    );
    Ok(z.ln() / (1.0 - q))
}

/// Differential entropy -∫ ρ ln ρ of a density sampled on a grid.
pub fn shannon_continuous(grid: &Grid1D, density: &[f64]) -> f64 {
    grid.integrate(
        &density
            .iter()
            .map(|&v| if v > 0.0 { -v * v.ln() } else { 0.0 })
            .collect::<Vec<_>>(),
    )
}

/// Von Neumann entropy -Tr ρ ln ρ via the eigenvalue spectrum.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    shannon_discrete(
        &rho.eigenvalues()
            .into_iter()
            .map(|l| l.max(0.0))
            .collect::<Vec<_>>(),
    )
}

/// Quantum Rényi entropy of a density matrix.
pub fn quantum_renyi(rho: &DensityMatrix, q: f64) -> Result<f64> {
    renyi_discrete(
        &rho.eigenvalues()
            .into_iter()
            .map(|l| l.max(0.0))
            .collect::<Vec<_>>(),
        q,
    )
}

/// Entropy of the symplectic slice at (μ, ν). It decomposes exactly as
/// S(θ) + ln s: rescaling X by s shifts a differential entropy by ln s,
/// so homogeneity of the tomogram becomes additivity of the entropy.
pub fn symplectic_entropy(ev: &SymplecticEvaluator, mu: f64, nu: f64) -> Result<f64> {
    let (slice, scale) = ev.scaled_slice(mu, nu)?;
    Ok(shannon_continuous(ev.tomogram().xgrid(), &slice) + scale.ln())
}

/// Per-angle entropies S(θ_k) of a tomogram.
#[derive(Debug, Clone)]
pub struct EntropyProfile {
    thetas: Vec<f64>,
    values: Vec<f64>,
}

impl EntropyProfile {
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

pub fn optical_entropy_profile(w: &OpticalTomogram) -> EntropyProfile {
    let values = (0..w.angles().len())
        .map(|k| shannon_continuous(w.xgrid(), w.slice(k)))
        .collect();
    EntropyProfile {
        thetas: w.angles().thetas().to_vec(),
        values,
    }
}

/// Outcome of an inequality check: `holds` means lhs ≥ rhs - tol, with
/// `slack = lhs - rhs` and `tol` the absolute tolerance that was applied.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityVerdict {
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub tol: f64,
}

impl InequalityVerdict {
    pub fn new(inequality: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            inequality: inequality.to_string(),
            lhs,
            rhs,
            slack,
            holds: slack >= -tol,
            tol,
        }
    }
}

/// Position/momentum entropic bound S_q + S_p ≥ ln(πe), evaluated from the
/// state itself (exact quarter turn, no angle grid involved).
pub fn check_hirschman(psi: &WaveFunction, tol: f64) -> Result<InequalityVerdict> {
    let s_q = shannon_continuous(psi.grid(), &psi.position_density());
    let momentum = fractional_fourier(psi, std::f64::consts::FRAC_PI_2)?;
    let s_p = shannon_continuous(psi.grid(), &momentum.position_density());
    Ok(InequalityVerdict::new(
        "pair: S_q + S_p >= ln(pi e)",
        s_q + s_p,
        pair_bound(),
        tol,
    ))
}

/// Rotated pair bound S(θ) + S(θ + π/2) ≥ ln(πe) at the grid node nearest
/// to `theta` (the quarter turn lands exactly on a node).
pub fn check_theta_pair(w: &OpticalTomogram, theta: f64, tol: f64) -> InequalityVerdict {
    let k = w.angles().nearest(theta);
    let j = w.angles().quarter_turn(k);
    let lhs = shannon_continuous(w.xgrid(), w.slice(k))
        + shannon_continuous(w.xgrid(), w.slice(j));
    InequalityVerdict::new(
        "pair: S(theta) + S(theta + pi/2) >= ln(pi e)",
        lhs,
        pair_bound(),
        tol,
    )
}

/// Angle-integrated bound 2π ∮ S(θ) dθ ≥ 2π² ln(πe). `tol_rel` is applied
/// relative to the right-hand side.
pub fn check_universal(w: &OpticalTomogram, tol_rel: f64) -> InequalityVerdict {
    let profile = optical_entropy_profile(w);
    let lhs = TWO_PI * w.angles().integrate(profile.values());
    let rhs = 2.0 * std::f64::consts::PI * std::f64::consts::PI * pair_bound();
    InequalityVerdict::new(
        "universal: 2pi * integral S(theta) dtheta >= 2pi^2 ln(pi e)",
        lhs,
        rhs,
        tol_rel * rhs,
    )
}

/// Entropy decomposition of a weighted tomogram family.
#[derive(Debug, Clone, Copy)]
pub struct ModifiedEntropyReport {
    /// ⟨S⟩: slice entropy averaged over the parameter weight.
    pub conditional_mean: f64,
    /// Entropy of the weight itself.
    pub weight_entropy: f64,
    /// Joint entropy; equals conditional_mean + weight_entropy exactly
    /// (chain rule, slices being normalized).
    pub total: f64,
}

/// Entropy report of the tomogram family weighted by `weight`.
///
/// - Circle weight: integrals over the shared angle grid.
/// - Discrete atoms: slice entropies at the nearest nodes, discrete weight
///   entropy.
/// - Gaussian plane weight: the scale integral is closed-form, leaving the
///   angle average minus γ/2; the weight entropy is ln(πe) exactly.
pub fn modified_entropy(
    w: &OpticalTomogram,
    weight: &ParameterWeight,
) -> Result<ModifiedEntropyReport> {
    let profile = optical_entropy_profile(w);
    match weight {
        ParameterWeight::Circle { angles, density } => {
            if angles != w.angles() {
                return Err(TomoError::Grid(
                    "weight and tomogram live on different angle grids".into(),
                ));
            }
            let weighted: Vec<f64> = density
                .iter()
                .zip(profile.values())
                .map(|(r, s)| r * s)
                .collect();
            let conditional_mean = angles.integrate(&weighted);
            let weight_entropy = angles.integrate(
                &density
                    .iter()
                    .map(|&r| if r > 0.0 { -r * r.ln() } else { 0.0 })
                    .collect::<Vec<_>>(),
            );
            Ok(ModifiedEntropyReport {
                conditional_mean,
                weight_entropy,
                total: conditional_mean + weight_entropy,
            })
        }
        ParameterWeight::DiscreteAngles { thetas, weights } => {
            let conditional_mean = thetas
                .iter()
                .zip(weights)
                .map(|(&t, &r)| r * profile.values()[w.angles().nearest(t)])
                .sum();
            let weight_entropy = shannon_discrete(weights);
            Ok(ModifiedEntropyReport {
                conditional_mean,
                weight_entropy,
                total: conditional_mean + weight_entropy,
            })
        }
        ParameterWeight::GaussianPlane => {
            let conditional_mean = profile.mean() - 0.5 * EULER_MASCHERONI;
            let weight_entropy = pair_bound();
            Ok(ModifiedEntropyReport {
                conditional_mean,
                weight_entropy,
                total: conditional_mean + weight_entropy,
            })
        }
    }
}
