//! Unitary spin tomography of qudits.
//!
//! The spin tomogram of a d-level state (spin j, d = 2j + 1) under a
//! unitary u is w(m, u) = ⟨m|uρu†|m⟩: the diagonal of the rotated density
//! matrix, a probability distribution over the projection m for every u.
//! Weighting a finite unitary set by probabilities R(u_k) produces joint
//! distributions over (m, k) whose classical entropy inequalities
//! (subadditivity, strong subadditivity) are checked here.
//!
//! Basis ordering everywhere: index 0 ↔ m = +j, descending to m = -j.

use nalgebra::DMatrix;
use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entropy::InequalityVerdict;
use crate::error::{Result, TomoError};
use crate::probkit::{subadditivity_slack, strong_subadditivity_slack, JointDistribution};
use crate::states::{complex_ginibre, DensityMatrix};

/// Unitarity gate for every sample admitted into a tomogram.
pub const UNITARY_TOL: f64 = 1e-12;

/// How a unitary sample was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitaryProvenance {
    Haar { seed: u64 },
    Su2 { axis: [f64; 3] },
    Explicit,
}

/// A single unitary with its provenance; u†u = I within [`UNITARY_TOL`].
#[derive(Debug, Clone)]
pub struct UnitarySample {
    matrix: DMatrix<Complex64>,
    provenance: UnitaryProvenance,
}

impl UnitarySample {
    fn validated(matrix: DMatrix<Complex64>, provenance: UnitaryProvenance) -> Result<Self> {
        let d = matrix.nrows();
        if d < 2 || matrix.ncols() != d {
            return Err(TomoError::Spec(format!(
                "unitary must be square with dim >= 2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let gram = matrix.adjoint() * &matrix;
        let mut dev = 0.0f64;
        for i in 0..d {
            for k in 0..d {
                let target = if i == k { 1.0 } else { 0.0 };
                dev = dev.max((gram[(i, k)] - Complex64::new(target, 0.0)).norm());
            }
        }
        if dev > UNITARY_TOL {
            return Err(TomoError::Spec(format!(
                "matrix is not unitary: max |u†u - I| = {dev:.3e}"
            )));
        }
        Ok(Self { matrix, provenance })
    }

    /// Adopt an explicit matrix (validated).
    pub fn explicit(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::validated(matrix, UnitaryProvenance::Explicit)
    }

    /// The identity sample (tomogram = diag ρ).
    pub fn identity(d: usize) -> Result<Self> {
        Self::validated(
            DMatrix::<Complex64>::identity(d, d),
            UnitaryProvenance::Explicit,
        )
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn provenance(&self) -> &UnitaryProvenance {
        &self.provenance
    }
}

/// Wigner little-d matrix d^j_{m'm}(β) = ⟨m'|e^{-iβJy}|m⟩, indexed
/// [(i', i)] with m' = j - i', m = j - i. Real orthogonal.
pub fn wigner_d(j: f64, beta: f64) -> Result<DMatrix<f64>> {
    let two_j = (2.0 * j).round();
    if (2.0 * j - two_j).abs() > 1e-9 || two_j < 1.0 || two_j > 200.0 {
        return Err(TomoError::Spec(format!(
            "spin must be a half-integer with 1/2 <= j <= 100, got {j}"
        )));
    }
    let two_j = two_j as i64;
    let d = two_j as usize + 1;
    // ln k! up to 2j.
    let mut lnf = vec![0.0f64; two_j as usize + 1];
    for k in 1..lnf.len() {
        lnf[k] = lnf[k - 1] + (k as f64).ln();
    }
    let (half_sin, half_cos) = (0.5 * beta).sin_cos();
    let mut out = DMatrix::<f64>::zeros(d, d);
    for ip in 0..d {
        let two_mp = two_j - 2 * ip as i64;
        for i in 0..d {
            let two_m = two_j - 2 * i as i64;
            let jpm = ((two_j + two_m) / 2) as i64;
            let jmm = ((two_j - two_m) / 2) as i64;
            let jpmp = ((two_j + two_mp) / 2) as i64;
            let jmmp = ((two_j - two_mp) / 2) as i64;
            let mp_minus_m = (two_mp - two_m) / 2;
            let prefactor = 0.5
                * (lnf[jpm as usize] + lnf[jmm as usize] + lnf[jpmp as usize]
                    + lnf[jmmp as usize]);
            let s_min = 0.max(-mp_minus_m);
            let s_max = jpm.min(jmmp);
            let mut acc = 0.0;
            for s in s_min..=s_max {
                let ln_den = lnf[(jpm - s) as usize]
                    + lnf[s as usize]
                    + lnf[(mp_minus_m + s) as usize]
                    + lnf[(jmmp - s) as usize];
                let exp_cos = (two_j + (two_m - two_mp) / 2 - 2 * s) as i32;
                let exp_sin = (mp_minus_m + 2 * s) as i32;
                let sign = if (mp_minus_m + s) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign
                    * (prefactor - ln_den).exp()
                    * half_cos.powi(exp_cos)
                    * half_sin.powi(exp_sin);
            }
            out[(ip, i)] = acc;
        }
    }
    Ok(out)
}

/// Unitary realizing the tomogram along axis n⃗: with β, φ the polar and
/// azimuthal angles of n⃗ (z-y-z Euler, third angle 0), the sample is
/// u = e^{iβJy} e^{iφJz}, so that ⟨m|uρu†|m⟩ = ⟨n⃗, m|ρ|n⃗, m⟩.
pub fn su2_unitary(axis: [f64; 3], j: f64) -> Result<UnitarySample> {
    let [x, y, z] = axis;
    let norm = (x * x + y * y + z * z).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(TomoError::Spec(format!(
            "quantization axis must be a unit vector, |n| = {norm}"
        )));
    }
    let beta = z.clamp(-1.0, 1.0).acos();
    let phi = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x) };
    let dmat = wigner_d(j, beta)?;
    let d = dmat.nrows();
    let two_j = d as i64 - 1;
    // u_{m'm} = d^j_{m m'}(β) e^{iφ m}.
    let matrix = DMatrix::from_fn(d, d, |ip, i| {
        let m = 0.5 * (two_j - 2 * i as i64) as f64;
        Complex64::from_polar(1.0, phi * m) * dmat[(i, ip)]
    });
    UnitarySample::validated(matrix, UnitaryProvenance::Su2 { axis })
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the R-diagonal
/// phases folded into Q. Fixed seed gives a bit-identical sample.
pub fn haar_unitary(d: usize, seed: u64) -> Result<UnitarySample> {
    if d < 2 {
        return Err(TomoError::Spec(format!("need dim >= 2, got {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = complex_ginibre(d, &mut rng);
    let qr = g.qr();
    let r = qr.r();
    let mut u = qr.q();
    for i in 0..d {
        let rii = r[(i, i)];
        if rii.norm() < 1e-300 {
            return Err(TomoError::Numeric("degenerate Ginibre draw".into()));
        }
        let phase = rii / rii.norm();
        for k in 0..d {
            u[(k, i)] *= phase;
        }
    }
    UnitarySample::validated(u, UnitaryProvenance::Haar { seed })
}

/// Stable per-sample seed derivation (splitmix64 finalizer), so parallel
/// sample generation is scheduling-independent.
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Finite sample set u_1..u_K with probabilities R(u_k).
#[derive(Debug, Clone)]
pub struct WeightedUnitarySet {
    samples: Vec<UnitarySample>,
    weights: Vec<f64>,
}

impl WeightedUnitarySet {
    pub fn new(samples: Vec<UnitarySample>, weights: Vec<f64>) -> Result<Self> {
        if samples.is_empty() || samples.len() != weights.len() {
            return Err(TomoError::Spec(format!(
                "{} samples with {} weights",
                samples.len(),
                weights.len()
            )));
        }
        let d = samples[0].dim();
        if samples.iter().any(|s| s.dim() != d) {
            return Err(TomoError::Spec("samples have mixed dimensions".into()));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(TomoError::Distribution("negative sample weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(TomoError::Distribution(format!(
                "weights sum to {total}, want 1"
            )));
        }
        Ok(Self { samples, weights })
    }

    /// Uniform weights 1/K.
    pub fn uniform(samples: Vec<UnitarySample>) -> Result<Self> {
        let k = samples.len();
        Self::new(samples, vec![1.0 / k as f64; k])
    }

    /// K Haar samples with per-sample derived seeds, uniform weights.
    pub fn haar(d: usize, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(TomoError::Spec("need at least one sample".into()));
        }
        let samples: Vec<UnitarySample> = (0..count)
            .into_par_iter()
            .map(|k| haar_unitary(d, derive_seed(seed, k as u64)))
            .collect::<Result<_>>()?;
        Self::uniform(samples)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn samples(&self) -> &[UnitarySample] {
        &self.samples
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// w(m, u) = ⟨m|uρu†|m⟩: probability vector over m for one sample.
pub fn spin_tomogram(rho: &DensityMatrix, u: &UnitarySample) -> Result<Vec<f64>> {
    if rho.dim() != u.dim() {
        return Err(TomoError::Spec(format!(
            "state dim {} vs unitary dim {}",
            rho.dim(),
            u.dim()
        )));
    }
    let rotated = u.matrix() * rho.matrix() * u.matrix().adjoint();
    let mut w = Vec::with_capacity(rho.dim());
    for i in 0..rho.dim() {
        let v = rotated[(i, i)];
        if v.im.abs() > 1e-10 {
            return Err(TomoError::Numeric(format!(
                "tomogram diagonal picked up imaginary part {:.3e}; Hermiticity broken upstream",
                v.im
            )));
        }
        if v.re < -1e-12 {
            return Err(TomoError::Distribution(format!(
                "negative tomogram probability {:.3e} at m index {i}",
                v.re
            )));
        }
        w.push(v.re.max(0.0));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(TomoError::Numeric(format!(
            "tomogram row sums to {total}, want 1"
        )));
    }
    for v in &mut w {
        *v /= total;
    }
    Ok(w)
}

/// Tomogram rows of one state over a whole sample set: `values[(k, i)]`
/// is w(m_i, u_k).
#[derive(Debug, Clone)]
pub struct SpinTomogram {
    j: f64,
    values: Array2<f64>,
}

impl SpinTomogram {
    pub fn collect(rho: &DensityMatrix, set: &WeightedUnitarySet) -> Result<Self> {
        let rows: Vec<Vec<f64>> = set
            .samples()
            .par_iter()
            .map(|u| spin_tomogram(rho, u))
            .collect::<Result<_>>()?;
        let mut values = Array2::zeros((set.len(), rho.dim()));
        for (k, row) in rows.into_iter().enumerate() {
            values.row_mut(k).assign(&ndarray::Array1::from(row));
        }
        Ok(Self { j: rho.spin(), values })
    }

    /// Spin quantum number j = (d - 1)/2.
    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.values.ncols()
    }

    pub fn n_samples(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn row(&self, k: usize) -> &[f64] {
        self.values.row(k).to_slice().expect("row-major layout")
    }
}

/// Joint distribution over (m, k): joint[m, k] = w(m, u_k) R(u_k).
pub fn modified_spin_tomogram(
    w: &SpinTomogram,
    set: &WeightedUnitarySet,
) -> Result<JointDistribution> {
    if w.n_samples() != set.len() || w.dim() != set.dim() {
        return Err(TomoError::Spec(format!(
            "tomogram is {}x{}, set has {} samples of dim {}",
            w.n_samples(),
            w.dim(),
            set.len(),
            set.dim()
        )));
    }
    let joint =
        Array2::from_shape_fn((w.dim(), set.len()), |(m, k)| {
            w.values()[[k, m]] * set.weights()[k]
        });
    JointDistribution::new(joint.into_dyn())
}

/// Joint over (m1, m2, k) for a bipartite state:
/// joint[m1, m2, k] = ⟨m1 m2|u_k ρ u_k†|m1 m2⟩ R(u_k), basis index
/// flattened as i = i1·d2 + i2.
pub fn two_qudit_tomogram(
    rho12: &DensityMatrix,
    d1: usize,
    d2: usize,
    set: &WeightedUnitarySet,
) -> Result<JointDistribution> {
    if d1 < 2 || d2 < 2 || d1 * d2 != rho12.dim() {
        return Err(TomoError::Spec(format!(
            "factor dims {d1}x{d2} do not compose the state dim {}",
            rho12.dim()
        )));
    }
    if set.dim() != rho12.dim() {
        return Err(TomoError::Spec(format!(
            "unitary dim {} vs state dim {}",
            set.dim(),
            rho12.dim()
        )));
    }
    let mut joint = Array3::zeros((d1, d2, set.len()));
    let slices: Vec<Vec<f64>> = set
        .samples()
        .par_iter()
        .map(|u| spin_tomogram(rho12, u))
        .collect::<Result<_>>()?;
    for (k, slice) in slices.into_iter().enumerate() {
        let r = set.weights()[k];
        for i1 in 0..d1 {
            for i2 in 0..d2 {
                joint[[i1, i2, k]] = slice[i1 * d2 + i2] * r;
            }
        }
    }
    JointDistribution::new(joint.into_dyn())
}

/// Subadditivity S(m) + S(u) ≥ S(m, u) on a two-axis joint.
pub fn spin_subadditivity_check(joint: &JointDistribution) -> Result<InequalityVerdict> {
    let slack = subadditivity_slack(joint)?;
    let rhs = joint.shannon();
    Ok(InequalityVerdict::new(
        "subadditivity: S(m) + S(u) >= S(m, u)",
        rhs + slack,
        rhs,
        1e-12,
    ))
}

/// Strong subadditivity S(m1, u) + S(m2, u) ≥ S(m1, m2, u) + S(u) on a
/// three-axis joint over (m1, m2, k): the conditioning variable is the
/// unitary label, so the axes are permuted to put it in the middle.
pub fn spin_ssa_check(joint: &JointDistribution) -> Result<InequalityVerdict> {
    if joint.ndim() != 3 {
        return Err(TomoError::Distribution(format!(
            "strong subadditivity needs a three-axis joint, got {} axes",
            joint.ndim()
        )));
    }
    let permuted = JointDistribution::new(
        joint
            .values()
            .clone()
            .permuted_axes(vec![0, 2, 1])
            .as_standard_layout()
            .to_owned(),
    )?;
    let slack = strong_subadditivity_slack(&permuted)?;
    let s_k = permuted.marginal(0)?.marginal(1)?.shannon();
    let rhs = joint.shannon() + s_k;
    Ok(InequalityVerdict::new(
        "strong subadditivity: S(m1, u) + S(m2, u) >= S(m1, m2, u) + S(u)",
        rhs + slack,
        rhs,
        1e-12,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn wigner_d_matches_spin_half_and_spin_one_closed_forms() {
        for beta in [0.0, 0.4, 1.3, 2.2, std::f64::consts::PI] {
            let (hs, hc) = (0.5 * beta).sin_cos();
            let d_half = wigner_d(0.5, beta).unwrap();
            let expect_half = [[hc, -hs], [hs, hc]];
            for i in 0..2 {
                for k in 0..2 {
                    assert!((d_half[(i, k)] - expect_half[i][k]).abs() < 1e-14);
                }
            }
            let (s, c) = beta.sin_cos();
            let r = 0.5f64.sqrt();
            let d_one = wigner_d(1.0, beta).unwrap();
            let expect_one = [
                [0.5 * (1.0 + c), -s * r, 0.5 * (1.0 - c)],
                [s * r, c, -s * r],
                [0.5 * (1.0 - c), s * r, 0.5 * (1.0 + c)],
            ];
            for i in 0..3 {
                for k in 0..3 {
                    assert!(
                        (d_one[(i, k)] - expect_one[i][k]).abs() < 1e-14,
                        "beta {beta}: ({i}, {k})"
                    );
                }
            }
        }
    }

    #[test]
    fn wigner_d_is_orthogonal_for_larger_spins() {
        for j in [1.5, 2.0, 3.5] {
            let d = wigner_d(j, 0.77).unwrap();
            let gram = &d * d.transpose();
            let n = gram.nrows();
            for i in 0..n {
                for k in 0..n {
                    let target = if i == k { 1.0 } else { 0.0 };
                    assert!((gram[(i, k)] - target).abs() < 1e-13, "j {j}");
                }
            }
        }
        assert!(wigner_d(1.2, 0.5).is_err());
    }

    #[test]
    fn rotation_about_y_gives_cos_squared_law() {
        let up = DensityMatrix::pure_basis(2, 0).unwrap();
        for beta in [0.3f64, 1.0, 2.0, 2.9] {
            let axis = [beta.sin(), 0.0, beta.cos()];
            let u = su2_unitary(axis, 0.5).unwrap();
            let w = spin_tomogram(&up, &u).unwrap();
            let expect = (0.5 * beta).cos().powi(2);
            assert!((w[0] - expect).abs() < 1e-12, "beta {beta}: {w:?}");
            assert!((w[0] + w[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn axis_examples_for_spin_half() {
        let up = DensityMatrix::pure_basis(2, 0).unwrap();
        let w_x = spin_tomogram(&up, &su2_unitary([1.0, 0.0, 0.0], 0.5).unwrap()).unwrap();
        assert!((w_x[0] - 0.5).abs() < 1e-12 && (w_x[1] - 0.5).abs() < 1e-12);
        let w_down = spin_tomogram(&up, &su2_unitary([0.0, 0.0, -1.0], 0.5).unwrap()).unwrap();
        assert!(w_down[0].abs() < 1e-12 && (w_down[1] - 1.0).abs() < 1e-12);
        // z-axis leaves the tomogram at diag(rho) for any state.
        let rho = DensityMatrix::random(2, 11).unwrap();
        let w_z = spin_tomogram(&rho, &su2_unitary([0.0, 0.0, 1.0], 0.5).unwrap()).unwrap();
        assert!((w_z[0] - rho.matrix()[(0, 0)].re).abs() < 1e-12);
        assert!(su2_unitary([0.0, 0.0, 0.9], 0.5).is_err());
    }

    #[test]
    fn maximally_mixed_is_uniform_under_any_unitary() {
        for d in 2..=6 {
            let rho = DensityMatrix::maximally_mixed(d).unwrap();
            let u = haar_unitary(d, 3 + d as u64).unwrap();
            let w = spin_tomogram(&rho, &u).unwrap();
            for v in w {
                assert!((v - 1.0 / d as f64).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn stretched_state_under_identity_is_a_point_mass() {
        let rho = DensityMatrix::pure_basis(4, 0).unwrap();
        let w = spin_tomogram(&rho, &UnitarySample::identity(4).unwrap()).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-14);
        assert!(w[1..].iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn haar_samples_are_unitary_and_deterministic() {
        for d in 2..=6 {
            for s in 0..20u64 {
                // validated() inside already enforces UNITARY_TOL.
                haar_unitary(d, s).unwrap();
            }
        }
        let a = haar_unitary(3, 42).unwrap();
        let b = haar_unitary(3, 42).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = haar_unitary(3, 43).unwrap();
        assert!(a.matrix() != c.matrix());
        assert_eq!(*a.provenance(), UnitaryProvenance::Haar { seed: 42 });
    }

    #[test]
    fn haar_first_entry_moment_matches_one_over_d() {
        // E|u_00|² = 1/d; for d = 2 the density of |u_00|² is uniform on
        // [0, 1], so the sample mean of 1e4 draws sits within 3·sqrt(1/12e4).
        let n = 10_000u64;
        let mean: f64 = (0..n)
            .into_par_iter()
            .map(|k| {
                haar_unitary(2, derive_seed(7, k))
                    .unwrap()
                    .matrix()[(0, 0)]
                    .norm_sqr()
            })
            .sum::<f64>()
            / n as f64;
        let three_sigma = 3.0 * (1.0 / 12.0f64 / n as f64).sqrt();
        assert!((mean - 0.5).abs() < three_sigma, "mean {mean}");
    }

    #[test]
    fn mixed_state_modified_tomogram_is_uniform_with_additive_entropy() {
        let d = 3;
        let k = 5;
        let rho = DensityMatrix::maximally_mixed(d).unwrap();
        let set = WeightedUnitarySet::haar(d, k, 9).unwrap();
        let w = SpinTomogram::collect(&rho, &set).unwrap();
        assert!((w.j() - 1.0).abs() < 1e-15);
        let joint = modified_spin_tomogram(&w, &set).unwrap();
        for &v in joint.values().iter() {
            assert!((v - 1.0 / (d * k) as f64).abs() < 1e-13);
        }
        assert!(
            (joint.shannon() - (d as f64).ln() - (k as f64).ln()).abs() < 1e-12
        );
        // Product structure: subadditivity is tight.
        let verdict = spin_subadditivity_check(&joint).unwrap();
        assert!(verdict.holds && verdict.slack.abs() < 1e-12);
    }

    #[test]
    fn stretched_state_on_sphere_directions_has_positive_slack() {
        let rho = DensityMatrix::pure_basis(3, 0).unwrap(); // |1, +1>
        let r = 3.0f64.sqrt().recip();
        let dirs: [[f64; 3]; 8] = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [r, r, r],
            [-r, r, -r],
        ];
        let samples: Vec<UnitarySample> = dirs
            .iter()
            .map(|&axis| su2_unitary(axis, 1.0).unwrap())
            .collect();
        let set = WeightedUnitarySet::uniform(samples).unwrap();
        let w = SpinTomogram::collect(&rho, &set).unwrap();
        let joint = modified_spin_tomogram(&w, &set).unwrap();
        let verdict = spin_subadditivity_check(&joint).unwrap();
        assert!(verdict.holds && verdict.slack > 0.1, "slack {}", verdict.slack);
    }

    #[test]
    fn bell_state_under_identity_is_perfectly_correlated() {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        for (a, b) in [(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            m[(a, b)] = Complex64::new(0.5, 0.0);
        }
        let rho = DensityMatrix::new(m).unwrap();
        let set = WeightedUnitarySet::uniform(vec![UnitarySample::identity(4).unwrap()]).unwrap();
        let joint = two_qudit_tomogram(&rho, 2, 2, &set).unwrap();
        let v = joint.values();
        assert!((v[[0, 0, 0]] - 0.5).abs() < 1e-14);
        assert!((v[[1, 1, 0]] - 0.5).abs() < 1e-14);
        assert!(v[[0, 1, 0]].abs() < 1e-14 && v[[1, 0, 0]].abs() < 1e-14);
        // SSA also holds (single unitary: reduces to subadditivity of m1, m2).
        let verdict = spin_ssa_check(&joint).unwrap();
        assert!(verdict.holds, "slack {}", verdict.slack);
    }

    #[test]
    fn product_states_under_product_unitaries_saturate_ssa() {
        let rho1 = DensityMatrix::random(2, 5).unwrap();
        let rho2 = DensityMatrix::random(2, 6).unwrap();
        let rho12 = DensityMatrix::new(rho1.matrix().kronecker(rho2.matrix())).unwrap();
        let samples: Vec<UnitarySample> = (0..4)
            .map(|k| {
                let u1 = haar_unitary(2, derive_seed(100, k)).unwrap();
                let u2 = haar_unitary(2, derive_seed(200, k)).unwrap();
                UnitarySample::explicit(u1.matrix().kronecker(u2.matrix())).unwrap()
            })
            .collect();
        let set = WeightedUnitarySet::uniform(samples).unwrap();
        let joint = two_qudit_tomogram(&rho12, 2, 2, &set).unwrap();
        // Per-slice factorization over (m1, m2).
        for k in 0..4 {
            let u = &set.samples()[k];
            let w12 = spin_tomogram(&rho12, u).unwrap();
            let m1: Vec<f64> = (0..2).map(|i| w12[2 * i] + w12[2 * i + 1]).collect();
            let m2: Vec<f64> = (0..2).map(|i| w12[i] + w12[i + 2]).collect();
            for i1 in 0..2 {
                for i2 in 0..2 {
                    assert!(
                        (w12[i1 * 2 + i2] - m1[i1] * m2[i2]).abs() < 1e-12,
                        "slice {k} does not factorize"
                    );
                }
            }
        }
        let verdict = spin_ssa_check(&joint).unwrap();
        assert!(verdict.holds && verdict.slack.abs() < 1e-12, "slack {}", verdict.slack);
    }

    #[test]
    fn random_states_never_violate_the_entropy_inequalities() {
        for trial in 0..10u64 {
            let rho = DensityMatrix::random(3, 50 + trial).unwrap();
            let set = WeightedUnitarySet::haar(3, 6, 60 + trial).unwrap();
            let w = SpinTomogram::collect(&rho, &set).unwrap();
            let joint = modified_spin_tomogram(&w, &set).unwrap();
            assert!(spin_subadditivity_check(&joint).unwrap().holds);

            let rho12 = DensityMatrix::random(4, 70 + trial).unwrap();
            let set12 = WeightedUnitarySet::haar(4, 5, 80 + trial).unwrap();
            let joint12 = two_qudit_tomogram(&rho12, 2, 2, &set12).unwrap();
            assert!(spin_ssa_check(&joint12).unwrap().holds);
        }
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let u = haar_unitary(2, 1).unwrap();
        assert!(spin_tomogram(&rho, &u).is_err());
        let set = WeightedUnitarySet::haar(4, 3, 2).unwrap();
        let rho6 = DensityMatrix::maximally_mixed(6).unwrap();
        assert!(two_qudit_tomogram(&rho6, 2, 3, &set).is_err());
        assert!(WeightedUnitarySet::new(
            vec![UnitarySample::identity(2).unwrap()],
            vec![0.5]
        )
        .is_err());
        // Non-unitary explicit matrix.
        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
        ]));
        assert!(UnitarySample::explicit(bad).is_err());
    }
}
