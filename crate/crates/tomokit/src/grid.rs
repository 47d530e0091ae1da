//! Sample grids: uniform 1-D coordinate grids with trapezoidal quadrature
//! and full-circle angle grids with midpoint quadrature.

use crate::error::{Result, TomoError};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Uniform 1-D grid with inclusive endpoints.
///
/// The canonical constructor builds a symmetric grid on `[-L, L]`; grids
/// ingested from external files only have to be uniform and ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    points: Vec<f64>,
    step: f64,
}

impl Grid1D {
    /// Symmetric grid of `n` points on `[-half_width, half_width]`.
    pub fn uniform(n: usize, half_width: f64) -> Result<Self> {
        if n < 2 {
            return Err(TomoError::Grid(format!("need at least 2 points, got {n}")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(TomoError::Grid(format!("half-width must be positive, got {half_width}")));
        }
        let step = 2.0 * half_width / (n - 1) as f64;
        let points = (0..n).map(|i| -half_width + step * i as f64).collect();
        Ok(Self { points, step })
    }

    /// Rebuild a grid from explicit node positions (CSV ingestion).
    /// Nodes must be strictly ascending and uniformly spaced.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(TomoError::Grid("need at least 2 points".into()));
        }
        let step = points[1] - points[0];
        if !(step > 0.0) {
            return Err(TomoError::Grid("nodes must be strictly ascending".into()));
        }
        for w in points.windows(2) {
            let d = w[1] - w[0];
            if (d - step).abs() > 1e-9 * step.max(1.0) {
                return Err(TomoError::Grid(format!(
                    "non-uniform spacing: {d} vs {step}"
                )));
            }
        }
        Ok(Self { points, step })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn point(&self, i: usize) -> f64 {
        self.points[i]
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Largest |x| reachable on the grid.
    pub fn half_width(&self) -> f64 {
        self.first().abs().max(self.last().abs())
    }

    /// True when the grid is symmetric about the origin, so that index
    /// reversal realizes x -> -x exactly.
    pub fn is_symmetric(&self) -> bool {
        (self.first() + self.last()).abs() < 1e-9 * self.step
    }

    /// Trapezoidal weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.points.len() {
            0.5 * self.step
        } else {
            self.step
        }
    }

    /// Trapezoidal integral of `values` sampled on this grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.points.len());
        let inner: f64 = values[1..values.len() - 1].iter().sum();
        self.step * (inner + 0.5 * (values[0] + values[values.len() - 1]))
    }

    /// Fractional node index of coordinate `x`, or `None` outside the grid.
    pub fn fractional_index(&self, x: f64) -> Option<f64> {
        let t = (x - self.first()) / self.step;
        if t < 0.0 || t > (self.points.len() - 1) as f64 {
            None
        } else {
            Some(t)
        }
    }

    /// Linear interpolation of `values` at `x`; zero outside the grid.
    pub fn interp(&self, values: &[f64], x: f64) -> f64 {
        match self.fractional_index(x) {
            None => 0.0,
            Some(t) => {
                let i = (t.floor() as usize).min(self.points.len() - 2);
                let frac = t - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        }
    }
}

/// Uniform grid of tomographic angles covering the full circle `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    thetas: Vec<f64>,
    step: f64,
}

impl AngleGrid {
    /// Offset grid θ_k = (k + 1/2)·2π/n.
    ///
    /// `n` must be a multiple of 4: odd `n` would place a node exactly on π,
    /// and `n ≡ 2 (mod 4)` exactly on π/2 and 3π/2. With `4 | n` no node hits
    /// a multiple of π/2, and θ_k + π/2 is again a node (index shift n/4).
    pub fn offset(n: usize) -> Result<Self> {
        if n < 4 || n % 4 != 0 {
            return Err(TomoError::Grid(format!(
                "offset angle grid needs a multiple of 4 angles (>= 4), got {n}"
            )));
        }
        let step = TWO_PI / n as f64;
        let thetas = (0..n).map(|k| (k as f64 + 0.5) * step).collect();
        Ok(Self { thetas, step })
    }

    /// Rebuild an angle grid from explicit samples (CSV ingestion).
    /// Samples must be ascending, uniformly spaced, inside `[0, 2π)`, and
    /// cover the full circle (`n·Δθ = 2π`).
    pub fn from_samples(thetas: Vec<f64>) -> Result<Self> {
        if thetas.len() < 4 {
            return Err(TomoError::Grid(format!(
                "need at least 4 angles, got {}",
                thetas.len()
            )));
        }
        let step = thetas[1] - thetas[0];
        if !(step > 0.0) {
            return Err(TomoError::Grid("angles must be strictly ascending".into()));
        }
        for w in thetas.windows(2) {
            if (w[1] - w[0] - step).abs() > 1e-9 {
                return Err(TomoError::Grid("non-uniform angle spacing".into()));
            }
        }
        let span = step * thetas.len() as f64;
        if (span - TWO_PI).abs() > 1e-6 {
            return Err(TomoError::Grid(format!(
                "angles must cover the full circle: n·Δθ = {span}, want 2π"
            )));
        }
        if thetas[0] < 0.0 || thetas[0] >= step + 1e-12 {
            return Err(TomoError::Grid("first angle must lie in [0, Δθ)".into()));
        }
        Ok(Self { thetas, step })
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta(&self, k: usize) -> f64 {
        self.thetas[k]
    }

    /// Midpoint-rule integral over the circle (spectrally accurate for
    /// smooth periodic integrands).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.thetas.len());
        self.step * values.iter().sum::<f64>()
    }

    /// Continuous index of `theta` with circular wrap; lies in `[0, n)`.
    /// The interval `[n-1, n)` interpolates between the last and first node.
    pub fn fractional_index(&self, theta: f64) -> f64 {
        (theta - self.thetas[0]).rem_euclid(TWO_PI) / self.step
    }

    /// Index of the node circularly nearest to `theta`.
    pub fn nearest(&self, theta: f64) -> usize {
        (self.fractional_index(theta).round() as usize) % self.thetas.len()
    }

    /// Periodic linear interpolation of per-angle `values` at `theta`.
    pub fn interp_periodic(&self, values: &[f64], theta: f64) -> f64 {
        assert_eq!(values.len(), self.thetas.len());
        let t = self.fractional_index(theta);
        let i = (t.floor() as usize).min(values.len() - 1);
        let frac = t - i as f64;
        let j = (i + 1) % values.len();
        values[i] * (1.0 - frac) + values[j] * frac
    }

    /// Node index of θ_k + π/2; exact for offset grids (4 | n).
    pub fn quarter_turn(&self, k: usize) -> usize {
        debug_assert_eq!(self.thetas.len() % 4, 0);
        (k + self.thetas.len() / 4) % self.thetas.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_covers_interval_symmetrically() {
        let g = Grid1D::uniform(101, 5.0).unwrap();
        assert_eq!(g.len(), 101);
        assert!((g.first() + 5.0).abs() < 1e-12);
        assert!((g.last() - 5.0).abs() < 1e-12);
        assert!((g.step() - 0.1).abs() < 1e-12);
        assert!(g.is_symmetric());
    }

    #[test]
    fn trapezoid_integrates_gaussian() {
        let g = Grid1D::uniform(2001, 10.0).unwrap();
        let vals: Vec<f64> = g.points().iter().map(|x| (-x * x).exp()).collect();
        let got = g.integrate(&vals);
        assert!((got - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn interp_is_exact_on_nodes_and_zero_outside() {
        let g = Grid1D::uniform(11, 1.0).unwrap();
        let vals: Vec<f64> = g.points().iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((g.interp(&vals, 0.37) - 1.74).abs() < 1e-12);
        assert_eq!(g.interp(&vals, 1.5), 0.0);
        assert_eq!(g.interp(&vals, -1.5), 0.0);
    }

    #[test]
    fn offset_grid_avoids_axis_angles() {
        for n in [16usize, 64, 180, 720] {
            if n % 4 != 0 {
                continue;
            }
            let ag = AngleGrid::offset(n).unwrap();
            for &t in ag.thetas() {
                let r = (t / (std::f64::consts::PI / 2.0)).fract().abs();
                assert!(r > 1e-9, "node {t} sits on a multiple of pi/2");
            }
        }
    }

    #[test]
    fn offset_grid_rejects_bad_counts() {
        assert!(AngleGrid::offset(18).is_err());
        assert!(AngleGrid::offset(15).is_err());
        assert!(AngleGrid::offset(2).is_err());
        assert!(AngleGrid::offset(64).is_ok());
    }

    #[test]
    fn quarter_turn_lands_on_grid_node() {
        let ag = AngleGrid::offset(64).unwrap();
        for k in 0..ag.len() {
            let j = ag.quarter_turn(k);
            let expect = (ag.theta(k) + std::f64::consts::FRAC_PI_2).rem_euclid(TWO_PI);
            assert!((ag.theta(j) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_interp_wraps_across_zero() {
        let ag = AngleGrid::offset(8).unwrap();
        let vals: Vec<f64> = ag.thetas().iter().map(|t| t.cos()).collect();
        // theta = 0 sits midway between the last node (2π - Δθ/2) and the
        // first (Δθ/2); both carry cos(Δθ/2).
        let got = ag.interp_periodic(&vals, 0.0);
        assert!((got - (ag.step() / 2.0).cos()).abs() < 1e-12);
    }

    #[test]
    fn midpoint_rule_is_exact_for_low_harmonics() {
        let ag = AngleGrid::offset(16).unwrap();
        let vals: Vec<f64> = ag.thetas().iter().map(|t| 1.0 + (3.0 * t).cos()).collect();
        assert!((ag.integrate(&vals) - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn from_samples_recovers_offset_grid() {
        let ag = AngleGrid::offset(16).unwrap();
        let back = AngleGrid::from_samples(ag.thetas().to_vec()).unwrap();
        assert_eq!(ag, back);
        // A plain (non-offset) measured grid is also acceptable.
        let plain: Vec<f64> = (0..12).map(|k| k as f64 * TWO_PI / 12.0).collect();
        assert!(AngleGrid::from_samples(plain).is_ok());
        // Half-circle coverage is not.
        let half: Vec<f64> = (0..12)
            .map(|k| k as f64 * std::f64::consts::PI / 12.0)
            .collect();
        assert!(AngleGrid::from_samples(half).is_err());
    }
}
