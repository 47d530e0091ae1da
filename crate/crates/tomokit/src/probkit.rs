//! Classical probability core: conditional families P(a|b), joint
//! distributions, marginals, and the entropic slack functionals
//! (subadditivity and strong subadditivity) used throughout the crate.

use ndarray::{ArrayD, Axis, IxDyn};
use rand::Rng;

use crate::error::{Result, TomoError};

const COLUMN_TOL: f64 = 1e-9;

/// Family of conditional distributions P(a|b): column `b` is a distribution
/// over outcomes `a`. Columns are renormalized to unit sum on construction.
#[derive(Debug, Clone)]
pub struct ConditionalFamily {
    values: ndarray::Array2<f64>,
}

/// Result of a no-signaling audit of a candidate conditional family.
#[derive(Debug, Clone, Copy)]
pub struct NoSignalingReport {
    pub ok: bool,
    /// Column with the largest normalization deviation.
    pub worst_column: usize,
    /// |column sum - 1| of that column.
    pub worst_deviation: f64,
}

/// Verify that every column of `values` is normalized within `tol`.
/// Negative entries are a hard error; normalization drift is reported.
pub fn verify_no_signaling(values: &ndarray::Array2<f64>, tol: f64) -> Result<NoSignalingReport> {
    for ((a, b), &v) in values.indexed_iter() {
        if v < -1e-12 || !v.is_finite() {
            return Err(TomoError::Distribution(format!(
                "P({a}|{b}) = {v} is not a probability"
            )));
        }
    }
    let mut worst_column = 0;
    let mut worst_deviation = 0.0f64;
    for (b, col) in values.columns().into_iter().enumerate() {
        let dev = (col.sum() - 1.0).abs();
        if dev > worst_deviation {
            worst_deviation = dev;
            worst_column = b;
        }
    }
    Ok(NoSignalingReport {
        ok: worst_deviation <= tol,
        worst_column,
        worst_deviation,
    })
}

impl ConditionalFamily {
    /// Validate and adopt `values[(a, b)] = P(a|b)`.
    pub fn new(values: ndarray::Array2<f64>) -> Result<Self> {
        let report = verify_no_signaling(&values, COLUMN_TOL)?;
        if !report.ok {
            return Err(TomoError::Distribution(format!(
                "column {} sums to 1{:+e}",
                report.worst_column, report.worst_deviation
            )));
        }
        let mut values = values;
        for mut col in values.columns_mut() {
            let s = col.sum();
            col.mapv_inplace(|v| (v / s).max(0.0));
        }
        Ok(Self { values })
    }

    /// The two-outcome family P(1|1) = x, P(2|1) = 1-x, P(1|2) = y,
    /// P(2|2) = 1-y.
    pub fn family_2x2(x: f64, y: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("y", y)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(TomoError::Distribution(format!(
                    "{name} = {v} outside [0, 1]"
                )));
            }
        }
        Self::new(ndarray::arr2(&[[x, y], [1.0 - x, 1.0 - y]]))
    }

    pub fn n_outcomes(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_conditions(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &ndarray::Array2<f64> {
        &self.values
    }

    /// Joint distribution with the uniform mix over conditions:
    /// f(a, b) = P(a|b) / N_b.
    pub fn uniform_mix(&self) -> JointDistribution {
        let nb = self.n_conditions() as f64;
        JointDistribution::new(self.values.mapv(|v| v / nb).into_dyn())
            .expect("columns are normalized, so the mix is a distribution")
    }
}

/// Joint probability distribution over one, two, or three finite axes.
/// Entries are nonnegative and sum to 1 (renormalized on construction).
#[derive(Debug, Clone)]
pub struct JointDistribution {
    values: ArrayD<f64>,
}

impl JointDistribution {
    pub fn new(values: ArrayD<f64>) -> Result<Self> {
        if values.ndim() == 0 || values.ndim() > 3 {
            return Err(TomoError::Distribution(format!(
                "joint distributions carry 1..=3 axes, got {}",
                values.ndim()
            )));
        }
        let mut total = 0.0;
        for &v in values.iter() {
            if v < -1e-12 || !v.is_finite() {
                return Err(TomoError::Distribution(format!(
                    "entry {v} is not a probability"
                )));
            }
            total += v;
        }
        if (total - 1.0).abs() > COLUMN_TOL {
            return Err(TomoError::Distribution(format!(
                "total mass {total} is not 1"
            )));
        }
        let values = values.mapv(|v| (v / total).max(0.0));
        Ok(Self { values })
    }

    /// Flat (Dirichlet-1) random joint distribution of the given shape.
    pub fn sample_flat<R: Rng + ?Sized>(shape: &[usize], rng: &mut R) -> Self {
        let n: usize = shape.iter().product();
        let mut raw: Vec<f64> = (0..n)
            .map(|_| -(1.0 - rng.gen::<f64>()).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.iter_mut().for_each(|v| *v /= total);
        let values = ArrayD::from_shape_vec(IxDyn(shape), raw).expect("shape matches length");
        Self::new(values).expect("normalized by construction")
    }

    pub fn ndim(&self) -> usize {
        self.values.ndim()
    }

    pub fn shape(&self) -> &[usize] {
        self.values.shape()
    }

    pub fn values(&self) -> &ArrayD<f64> {
        &self.values
    }

    /// Marginal distribution obtained by summing out `axis`.
    pub fn marginal(&self, axis: usize) -> Result<JointDistribution> {
        if axis >= self.values.ndim() {
            return Err(TomoError::Distribution(format!(
                "axis {axis} out of range for {}-axis joint",
                self.values.ndim()
            )));
        }
        if self.values.ndim() == 1 {
            return Err(TomoError::Distribution(
                "cannot marginalize a single-axis distribution".into(),
            ));
        }
        Ok(JointDistribution {
            values: self.values.sum_axis(Axis(axis)),
        })
    }

    /// Shannon entropy (nats) of the flattened distribution.
    pub fn shannon(&self) -> f64 {
        shannon_from_iter(self.values.iter().copied())
    }
}

fn shannon_from_iter<I: Iterator<Item = f64>>(probs: I) -> f64 {
    -probs.filter(|&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
}

/// Shannon entropy (nats) of a probability vector; 0·ln 0 = 0.
pub fn shannon(probs: &[f64]) -> f64 {
    shannon_from_iter(probs.iter().copied())
}

/// Joint f(a, b) = P(a|b)·K(b) from a conditional family and a distribution
/// over conditions.
pub fn conditional_to_joint(family: &ConditionalFamily, weights: &[f64]) -> Result<JointDistribution> {
    if weights.len() != family.n_conditions() {
        return Err(TomoError::Distribution(format!(
            "{} weights for {} conditions",
            weights.len(),
            family.n_conditions()
        )));
    }
    let mut values = family.values().clone();
    for (b, mut col) in values.columns_mut().into_iter().enumerate() {
        let k = weights[b];
        if k < 0.0 || !k.is_finite() {
            return Err(TomoError::Distribution(format!("weight K({b}) = {k}")));
        }
        col.mapv_inplace(|v| v * k);
    }
    JointDistribution::new(values.into_dyn())
}

/// Split a two-axis joint into its conditional family and condition weights:
/// K(b) = Σ_a f(a, b), P(a|b) = f(a, b)/K(b).
///
/// Conditions with zero mass admit no conditional and are a typed error.
pub fn joint_to_conditional(joint: &JointDistribution) -> Result<(ConditionalFamily, Vec<f64>)> {
    if joint.ndim() != 2 {
        return Err(TomoError::Distribution(format!(
            "conditional split needs a two-axis joint, got {} axes",
            joint.ndim()
        )));
    }
    let values = joint
        .values()
        .view()
        .into_dimensionality::<ndarray::Ix2>()
        .expect("checked ndim");
    let weights: Vec<f64> = values.columns().into_iter().map(|c| c.sum()).collect();
    if let Some(b) = weights.iter().position(|&k| k <= 0.0) {
        return Err(TomoError::Distribution(format!(
            "condition {b} has zero mass; no conditional exists there"
        )));
    }
    let mut cond = values.to_owned();
    for (b, mut col) in cond.columns_mut().into_iter().enumerate() {
        col.mapv_inplace(|v| v / weights[b]);
    }
    Ok((ConditionalFamily::new(cond)?, weights))
}

/// Subadditivity slack S(Π₁) + S(Π₂) - S(f) of a two-axis joint;
/// nonnegative for every distribution, zero iff the axes are independent.
pub fn subadditivity_slack(joint: &JointDistribution) -> Result<f64> {
    if joint.ndim() != 2 {
        return Err(TomoError::Distribution(format!(
            "subadditivity needs a two-axis joint, got {} axes",
            joint.ndim()
        )));
    }
    let m1 = joint.marginal(1)?.shannon();
    let m2 = joint.marginal(0)?.shannon();
    Ok(m1 + m2 - joint.shannon())
}

/// Strong-subadditivity slack S(f_{ab}) + S(f_{bc}) - S(f) - S(f_b) of a
/// three-axis joint with the middle axis `b`; nonnegative for every
/// distribution.
pub fn strong_subadditivity_slack(joint: &JointDistribution) -> Result<f64> {
    if joint.ndim() != 3 {
        return Err(TomoError::Distribution(format!(
            "strong subadditivity needs a three-axis joint, got {} axes",
            joint.ndim()
        )));
    }
    let s_ab = joint.marginal(2)?.shannon();
    let s_bc = joint.marginal(0)?.shannon();
    let s_b = joint.marginal(0)?.marginal(1)?.shannon();
    Ok(s_ab + s_bc - joint.shannon() - s_b)
}
