//! Property-based invariants over random distributions and tomograms.

use std::f64::consts::PI;
use std::sync::OnceLock;

use ndarray::{ArrayD, IxDyn};
use proptest::prelude::*;

use tomokit::entropy::renyi_discrete;
use tomokit::grid::{AngleGrid, Grid1D};
use tomokit::probkit::{
    conditional_to_joint, joint_to_conditional, strong_subadditivity_slack, subadditivity_slack,
    JointDistribution,
};
use tomokit::qtomo::{fractional_fourier, optical_tomogram_quantum};
use tomokit::radon::{OpticalTomogram, SymplecticEvaluator};
use tomokit::states::{fock_wavefunction, WaveFunction};

fn normalized(mut cells: Vec<f64>) -> Vec<f64> {
    let z: f64 = cells.iter().sum();
    for v in &mut cells {
        *v /= z;
    }
    cells
}

fn joint2(rows: usize, cols: usize) -> impl Strategy<Value = JointDistribution> {
    proptest::collection::vec(1e-3..1.0f64, rows * cols).prop_map(move |cells| {
        let arr = ArrayD::from_shape_vec(IxDyn(&[rows, cols]), normalized(cells)).unwrap();
        JointDistribution::new(arr).unwrap()
    })
}

fn joint3() -> impl Strategy<Value = JointDistribution> {
    (2usize..=3, 2usize..=3, 2usize..=3).prop_flat_map(|(a, b, c)| {
        proptest::collection::vec(1e-3..1.0f64, a * b * c).prop_map(move |cells| {
            let arr = ArrayD::from_shape_vec(IxDyn(&[a, b, c]), normalized(cells)).unwrap();
            JointDistribution::new(arr).unwrap()
        })
    })
}

fn vacuum_tomogram() -> &'static OpticalTomogram {
    static CELL: OnceLock<OpticalTomogram> = OnceLock::new();
    CELL.get_or_init(|| {
        let psi = fock_wavefunction(0, &Grid1D::uniform(256, 6.0).unwrap()).unwrap();
        optical_tomogram_quantum(&psi, &AngleGrid::offset(16).unwrap()).unwrap()
    })
}

fn vacuum_wavefunction() -> &'static WaveFunction {
    static CELL: OnceLock<WaveFunction> = OnceLock::new();
    CELL.get_or_init(|| fock_wavefunction(0, &Grid1D::uniform(256, 6.0).unwrap()).unwrap())
}

proptest! {
    #[test]
    fn subadditivity_slack_is_nonnegative(
        joint in (2usize..=5, 2usize..=5).prop_flat_map(|(r, c)| joint2(r, c))
    ) {
        prop_assert!(subadditivity_slack(&joint).unwrap() >= -1e-12);
    }

    #[test]
    fn strong_subadditivity_slack_is_nonnegative(joint in joint3()) {
        prop_assert!(strong_subadditivity_slack(&joint).unwrap() >= -1e-12);
    }

    #[test]
    fn renyi_entropy_is_nonincreasing_in_order(
        cells in proptest::collection::vec(1e-6..1.0f64, 2..12),
        q1 in 0.05..4.0f64,
        dq in 0.01..3.0f64,
    ) {
        let p = normalized(cells);
        let lo = renyi_discrete(&p, q1).unwrap();
        let hi = renyi_discrete(&p, q1 + dq).unwrap();
        prop_assert!(lo >= hi - 1e-9, "R({q1}) = {lo} rose to R({}) = {hi}", q1 + dq);
    }

    #[test]
    fn conditional_split_reassembles_the_joint(joint in joint2(4, 3)) {
        let (family, weights) = joint_to_conditional(&joint).unwrap();
        for col in family.values().columns() {
            prop_assert!((col.sum() - 1.0).abs() < 1e-9);
        }
        let back = conditional_to_joint(&family, &weights).unwrap();
        for (a, b) in back.values().iter().zip(joint.values().iter()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn symplectic_tomogram_is_homogeneous_of_degree_minus_one(
        x in -3.0..3.0f64,
        angle in 0.0..std::f64::consts::TAU,
        radius in 0.4..2.0f64,
        lambda in 0.2..4.0f64,
    ) {
        let ev = SymplecticEvaluator::new(vacuum_tomogram());
        let (mu, nu) = (radius * angle.cos(), radius * angle.sin());
        let base = ev.evaluate(x, mu, nu).unwrap();
        let scaled = ev.evaluate(lambda * x, lambda * mu, lambda * nu).unwrap();
        prop_assert!(
            (scaled - base / lambda).abs() < 1e-12 * (1.0 + base.abs()),
            "M({x}, {mu}, {nu})/{lambda} = {} but M(scaled) = {scaled}", base / lambda
        );
    }

    #[test]
    fn vacuum_is_invariant_under_every_rotation(theta in 0.02..6.26f64) {
        let psi = vacuum_wavefunction();
        let rotated = fractional_fourier(psi, theta).unwrap();
        let g = psi.grid();
        for (i, d) in rotated.position_density().iter().enumerate() {
            let x = g.point(i);
            prop_assert!(
                (d - (-x * x).exp() / PI.sqrt()).abs() < 1e-6,
                "density at x = {x} drifted to {d} for theta = {theta}"
            );
        }
    }
}
