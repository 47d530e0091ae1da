//! State catalogue: harmonic-oscillator wave functions (Fock, coherent,
//! cat), classical Gaussian phase-space densities, and finite-dimensional
//! density matrices.
//!
//! Conventions: hbar = 1, q = (a + a†)/√2, so the vacuum position density is
//! exp(-x²)/√π (variance 1/2) and a coherent state |α⟩ has ⟨q⟩ = √2·Re α,
//! ⟨p⟩ = √2·Im α.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::grid::Grid1D;

/// A state leaking more probability density than this past the grid edge is
/// rejected: its tomograms would silently lose mass.
pub const TAIL_DENSITY_MAX: f64 = 1e-10;

/// Normalized single-mode wave function sampled on a grid.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl WaveFunction {
    /// Adopt samples after checking tail containment; the result is
    /// renormalized to unit L2 norm under the trapezoid rule.
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(TomoError::Grid(format!(
                "{} samples on a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        let density: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
        let norm2 = grid.integrate(&density);
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(TomoError::Numeric(format!("wave function norm^2 = {norm2}")));
        }
        let edge = density[0].max(density[density.len() - 1]) / norm2;
        if edge > TAIL_DENSITY_MAX {
            return Err(TomoError::Numeric(format!(
                "state leaks past the grid edge: |psi(edge)|^2 = {edge:.3e} (limit {TAIL_DENSITY_MAX:.0e}); widen the grid"
            )));
        }
        let scale = norm2.sqrt().recip();
        let values = values.into_iter().map(|v| v * scale).collect();
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Position probability density |psi(x)|².
    pub fn position_density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Trapezoid inner product ⟨self|other⟩.
    pub fn inner(&self, other: &WaveFunction) -> Complex64 {
        assert_eq!(self.grid, other.grid);
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (a, b))| a.conj() * b * self.grid.weight(i))
            .sum()
    }
}

/// Normalized Hermite functions phi_0..=phi_n at `x` via the stable upward
/// recurrence phi_k = x·√(2/k)·phi_{k-1} - √((k-1)/k)·phi_{k-2}.
fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut phi = Vec::with_capacity(n + 1);
    phi.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n >= 1 {
        phi.push(std::f64::consts::SQRT_2 * x * phi[0]);
    }
    for k in 2..=n {
        let a = (2.0 / k as f64).sqrt();
        let b = ((k as f64 - 1.0) / k as f64).sqrt();
        let next = a * x * phi[k - 1] - b * phi[k - 2];
        phi.push(next);
    }
    phi
}

/// Number state |n⟩ sampled on `grid`.
pub fn fock_wavefunction(n: usize, grid: &Grid1D) -> Result<WaveFunction> {
    let values = grid
        .points()
        .iter()
        .map(|&x| Complex64::new(*hermite_functions(n, x).last().unwrap(), 0.0))
        .collect();
    WaveFunction::new(grid.clone(), values)
}

fn coherent_samples(alpha: Complex64, grid: &Grid1D) -> Vec<Complex64> {
    let q0 = std::f64::consts::SQRT_2 * alpha.re;
    let p0 = std::f64::consts::SQRT_2 * alpha.im;
    let norm = std::f64::consts::PI.powf(-0.25);
    grid.points()
        .iter()
        .map(|&x| {
            let gauss = (-0.5 * (x - q0) * (x - q0)).exp();
            let phase = p0 * x - 0.5 * q0 * p0;
            norm * gauss * Complex64::new(0.0, phase).exp()
        })
        .collect()
}

/// Coherent state |α⟩ sampled on `grid`.
pub fn coherent_wavefunction(alpha: Complex64, grid: &Grid1D) -> Result<WaveFunction> {
    WaveFunction::new(grid.clone(), coherent_samples(alpha, grid))
}

/// Relative sign between the two coherent branches of a cat state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CatSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// Even (+) or odd (-) superposition of |α⟩ and |-α⟩. The squared norm of
/// the raw sum is 2(1 ± e^{-2|α|²}); the sampled state is renormalized on
/// the grid.
pub fn cat_wavefunction(alpha: Complex64, sign: CatSign, grid: &Grid1D) -> Result<WaveFunction> {
    let plus = coherent_samples(alpha, grid);
    let minus = coherent_samples(-alpha, grid);
    let s = match sign {
        CatSign::Plus => 1.0,
        CatSign::Minus => -1.0,
    };
    let raw: Vec<Complex64> = plus
        .iter()
        .zip(&minus)
        .map(|(a, b)| a + s * b)
        .collect();
    let norm2: f64 = grid.integrate(&raw.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>());
    if norm2 < 1e-12 {
        return Err(TomoError::Spec(
            "cat state with sign '-' degenerates as alpha -> 0".into(),
        ));
    }
    WaveFunction::new(grid.clone(), raw)
}

/// Nonnegative, normalized classical density f(q, p) on a rectangular grid.
/// `values[(iq, ip)]` holds f(q_iq, p_ip).
#[derive(Debug, Clone)]
pub struct PhaseSpaceDensity {
    qgrid: Grid1D,
    pgrid: Grid1D,
    values: ndarray::Array2<f64>,
}

impl PhaseSpaceDensity {
    pub fn new(qgrid: Grid1D, pgrid: Grid1D, values: ndarray::Array2<f64>) -> Result<Self> {
        if values.nrows() != qgrid.len() || values.ncols() != pgrid.len() {
            return Err(TomoError::Grid(format!(
                "density shape {:?} does not match grids ({}, {})",
                values.dim(),
                qgrid.len(),
                pgrid.len()
            )));
        }
        let mut values = values;
        for v in values.iter_mut() {
            if *v < -1e-12 || !v.is_finite() {
                return Err(TomoError::Distribution(format!(
                    "phase-space density entry {v}"
                )));
            }
            *v = v.max(0.0);
        }
        let total = trapezoid2d(&qgrid, &pgrid, &values);
        if !(total > 0.0) {
            return Err(TomoError::Distribution("density has zero mass".into()));
        }
        values.mapv_inplace(|v| v / total);
        Ok(Self { qgrid, pgrid, values })
    }

    /// Gaussian blob at (q0, p0) with standard deviations (sq, sp). The grid
    /// must contain the ±5σ core of the blob.
    pub fn gaussian(
        q0: f64,
        p0: f64,
        sq: f64,
        sp: f64,
        qgrid: &Grid1D,
        pgrid: &Grid1D,
    ) -> Result<Self> {
        if !(sq > 0.0) || !(sp > 0.0) {
            return Err(TomoError::Spec(format!(
                "gaussian widths must be positive, got sq = {sq}, sp = {sp}"
            )));
        }
        for (label, c, s, g) in [("q", q0, sq, qgrid), ("p", p0, sp, pgrid)] {
            if c - 5.0 * s < g.first() || c + 5.0 * s > g.last() {
                return Err(TomoError::Grid(format!(
                    "{label}-grid [{}, {}] does not contain {c} ± 5·{s}",
                    g.first(),
                    g.last()
                )));
            }
        }
        let norm = 1.0 / (2.0 * std::f64::consts::PI * sq * sp);
        let values = ndarray::Array2::from_shape_fn((qgrid.len(), pgrid.len()), |(i, j)| {
            let dq = (qgrid.point(i) - q0) / sq;
            let dp = (pgrid.point(j) - p0) / sp;
            norm * (-0.5 * (dq * dq + dp * dp)).exp()
        });
        Self::new(qgrid.clone(), pgrid.clone(), values)
    }

    pub fn qgrid(&self) -> &Grid1D {
        &self.qgrid
    }

    pub fn pgrid(&self) -> &Grid1D {
        &self.pgrid
    }

    pub fn values(&self) -> &ndarray::Array2<f64> {
        &self.values
    }

    /// Bilinear interpolation of f at (q, p); zero outside the grid.
    pub fn bilinear(&self, q: f64, p: f64) -> f64 {
        let (Some(tq), Some(tp)) = (self.qgrid.fractional_index(q), self.pgrid.fractional_index(p))
        else {
            return 0.0;
        };
        let i = (tq.floor() as usize).min(self.qgrid.len() - 2);
        let j = (tp.floor() as usize).min(self.pgrid.len() - 2);
        let (fq, fp) = (tq - i as f64, tp - j as f64);
        let v = &self.values;
        v[[i, j]] * (1.0 - fq) * (1.0 - fp)
            + v[[i + 1, j]] * fq * (1.0 - fp)
            + v[[i, j + 1]] * (1.0 - fq) * fp
            + v[[i + 1, j + 1]] * fq * fp
    }

    /// Total mass under the 2-D trapezoid rule (1 after construction).
    pub fn total_mass(&self) -> f64 {
        trapezoid2d(&self.qgrid, &self.pgrid, &self.values)
    }
}

pub(crate) fn trapezoid2d(qg: &Grid1D, pg: &Grid1D, values: &ndarray::Array2<f64>) -> f64 {
    let mut total = 0.0;
    for (i, row) in values.rows().into_iter().enumerate() {
        let wq = qg.weight(i);
        let mut acc = 0.0;
        for (j, v) in row.iter().enumerate() {
            acc += pg.weight(j) * v;
        }
        total += wq * acc;
    }
    total
}

/// Complex Ginibre matrix: entries (N(0,1) + i·N(0,1))/√2.
pub(crate) fn complex_ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / std::f64::consts::SQRT_2
    })
}

/// Unit-trace, Hermitian, positive-semidefinite matrix on C^d.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validate Hermiticity (1e-12), positivity (eigenvalues ≥ -1e-12) and
    /// renormalize the trace to exactly 1.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = matrix.nrows();
        if d < 2 || matrix.ncols() != d {
            return Err(TomoError::Spec(format!(
                "density matrix must be square with d >= 2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm_dev = (&matrix - matrix.adjoint()).map(|v| v.norm()).max();
        if herm_dev > 1e-12 {
            return Err(TomoError::Spec(format!(
                "matrix is not Hermitian: max |rho - rho^dag| = {herm_dev:.3e}"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-9 || trace.im.abs() > 1e-12 || trace.re <= 0.0 {
            return Err(TomoError::Spec(format!("trace {trace} is not 1")));
        }
        let matrix = matrix / Complex64::new(trace.re, 0.0);
        let min_eig = matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-12 {
            return Err(TomoError::Spec(format!(
                "matrix is not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Pure basis state |index⟩⟨index| on C^d. Index 0 is m = +j in spin
    /// ordering.
    pub fn pure_basis(d: usize, index: usize) -> Result<Self> {
        if index >= d {
            return Err(TomoError::Spec(format!("basis index {index} out of 0..{d}")));
        }
        let mut m = DMatrix::zeros(d, d);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self::new(m)
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(TomoError::Spec(format!("dimension {d} < 2")));
        }
        Self::new(DMatrix::<Complex64>::identity(d, d) / Complex64::new(d as f64, 0.0))
    }

    /// Random density matrix rho = G G† / tr(G G†) with G complex Ginibre.
    /// A fixed seed gives a bit-identical matrix across runs.
    pub fn random(d: usize, seed: u64) -> Result<Self> {
        if d < 2 {
            return Err(TomoError::Spec(format!("dimension {d} < 2")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_ginibre(d, &mut rng)
    }

    /// Random state on C^{d1} ⊗ C^{d2}.
    pub fn random_bipartite(d1: usize, d2: usize, seed: u64) -> Result<Self> {
        if d1 < 2 || d2 < 2 {
            return Err(TomoError::Spec(format!(
                "bipartite dimensions must each be >= 2, got {d1}x{d2}"
            )));
        }
        Self::random(d1 * d2, seed)
    }

    pub(crate) fn from_ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        let g = complex_ginibre(d, rng);
        let m = &g * g.adjoint();
        let trace = m.trace();
        Self::new(m / trace)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Spin quantum number j with d = 2j + 1.
    pub fn spin(&self) -> f64 {
        (self.dim() as f64 - 1.0) / 2.0
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Real eigenvalues (unsorted); they sum to 1 and are ≥ -1e-12.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }
}

/// JSON state description understood by the toolkit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum StateSpec {
    Fock { n: usize },
    Coherent { alpha: [f64; 2] },
    Cat { alpha: [f64; 2], sign: CatSign },
    Gaussian2d { q0: f64, p0: f64, sq: f64, sp: f64 },
    Mixed { d: usize },
    Random { d: usize, seed: u64 },
    Random2 { d1: usize, d2: usize, seed: u64 },
}

/// Which pipeline a state spec feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Pure continuous-variable state: tomograms via the fractional Fourier
    /// transform.
    Wave,
    /// Classical phase-space density: tomograms via line integrals.
    Classical,
    /// Finite-dimensional density matrix: spin tomograms.
    Discrete,
}

impl StateSpec {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| TomoError::Spec(e.to_string()))
    }

    pub fn kind(&self) -> StateKind {
        match self {
            StateSpec::Fock { .. } | StateSpec::Coherent { .. } | StateSpec::Cat { .. } => {
                StateKind::Wave
            }
            StateSpec::Gaussian2d { .. } => StateKind::Classical,
            StateSpec::Mixed { .. } | StateSpec::Random { .. } | StateSpec::Random2 { .. } => {
                StateKind::Discrete
            }
        }
    }

    /// Build the sampled wave function for a `Wave` spec.
    pub fn build_wavefunction(&self, grid: &Grid1D) -> Result<WaveFunction> {
        match self {
            StateSpec::Fock { n } => fock_wavefunction(*n, grid),
            StateSpec::Coherent { alpha } => {
                coherent_wavefunction(Complex64::new(alpha[0], alpha[1]), grid)
            }
            StateSpec::Cat { alpha, sign } => {
                cat_wavefunction(Complex64::new(alpha[0], alpha[1]), *sign, grid)
            }
            other => Err(TomoError::Spec(format!(
                "{other:?} does not describe a wave function"
            ))),
        }
    }

    /// Build the classical density for a `Classical` spec.
    pub fn build_phase_density(&self, qgrid: &Grid1D, pgrid: &Grid1D) -> Result<PhaseSpaceDensity> {
        match self {
            StateSpec::Gaussian2d { q0, p0, sq, sp } => {
                PhaseSpaceDensity::gaussian(*q0, *p0, *sq, *sp, qgrid, pgrid)
            }
            other => Err(TomoError::Spec(format!(
                "{other:?} does not describe a phase-space density"
            ))),
        }
    }

    /// Build the density matrix for a `Discrete` spec.
    pub fn build_density_matrix(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Mixed { d } => DensityMatrix::maximally_mixed(*d),
            StateSpec::Random { d, seed } => DensityMatrix::random(*d, *seed),
            StateSpec::Random2 { d1, d2, seed } => DensityMatrix::random_bipartite(*d1, *d2, *seed),
            other => Err(TomoError::Spec(format!(
                "{other:?} does not describe a density matrix"
            ))),
        }
    }

    /// Bipartite factor dimensions, when the state carries them.
    pub fn factors(&self) -> Option<(usize, usize)> {
        match self {
            StateSpec::Random2 { d1, d2, .. } => Some((*d1, *d2)),
            _ => None,
        }
    }
}
