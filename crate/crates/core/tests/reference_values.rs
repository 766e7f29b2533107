//! Bundled instances checked against values frozen from independent solvers
//! (HiGHS for the LPs, Clarabel for the distance problem).

mod common;

use common::*;
use mmstp::pareto::sweep;
use mmstp::scalarize::{ideal_point, solve_distance};
use mmstp::transform::transform;
use mmstp::MmstpModel;

const LP_TOL: f64 = 1e-6;

struct Frozen {
    scalars: [f64; 5],
    ideal: [f64; 2],
    distance: f64,
    compromise: [f64; 2],
}

const REFERENCE: Frozen = Frozen {
    scalars: [
        336.96397326121144,
        778.2543903318486,
        1054.8251767107138,
        1256.567633469966,
        1408.990767294303,
    ],
    ideal: [336.96397326121144, 1408.990767294303],
    distance: 268.5114487953911,
    compromise: [560.3790032644872, 1557.9341206298423],
};

const TABULATED: Frozen = Frozen {
    scalars: [
        368.2323336565098,
        861.6366847193109,
        1169.4758314934743,
        1371.2182882527268,
        1523.6414220770637,
    ],
    ideal: [368.2323336565098, 1523.641422077064],
    distance: 332.59617694840034,
    compromise: [626.1108564245276, 1733.6863801590816],
};

fn check(model: &MmstpModel, frozen: &Frozen) {
    let det = transform(model).unwrap();
    let points = sweep(&det, 5).unwrap();
    for (p, want) in points.iter().zip(frozen.scalars) {
        assert!(
            (p.scalar_value - want).abs() < LP_TOL,
            "λ = {:?}: {} vs {want}",
            p.weights.as_slice(),
            p.scalar_value
        );
    }
    let ideal = ideal_point(&det).unwrap();
    for (got, want) in ideal.e_star.iter().zip(frozen.ideal) {
        assert!((got - want).abs() < LP_TOL, "ideal {got} vs {want}");
    }
    let r = solve_distance(&det, &ideal, 1e-8).unwrap();
    assert!((r.scalar_value - frozen.distance).abs() < 1e-6, "distance {}", r.scalar_value);
    for (got, want) in r.objective_values.iter().zip(frozen.compromise) {
        assert!((got - want).abs() < 1e-3, "compromise {got} vs {want}");
    }
    assert!(det.max_violation(&r.x) < 1e-7);
}

#[test]
fn reference_instance_matches_frozen_values() {
    check(&reference_model(), &REFERENCE);
}

#[test]
fn tabulated_instance_matches_frozen_values() {
    check(&tabulated_model(), &TABULATED);
}

#[test]
fn reference_sweep_pairs_on_the_optimal_face() {
    // lexicographic (E[f1], E[f2]) minimizers of each optimal face, from HiGHS
    let pairs = [
        (336.96397326121144, 2232.085148232789),
        (462.5411840627783, 1725.3940092223927),
        (578.5786008385157, 1531.0717526400554),
        (716.8095448580743, 1436.4869964339298),
        (826.794459976581, 1408.990767369303),
    ];
    let det = transform(&reference_model()).unwrap();
    for (p, (e1, e2)) in sweep(&det, 5).unwrap().iter().zip(pairs) {
        assert!((p.objective_values[0] - e1).abs() < 1e-4, "{:?}", p.objective_values);
        assert!((p.objective_values[1] - e2).abs() < 1e-4, "{:?}", p.objective_values);
    }
}

#[test]
fn published_compromise_is_not_optimal_for_distance() {
    let model = reference_model();
    let det = transform(&model).unwrap();
    let ideal = ideal_point(&det).unwrap();
    let published = det.objective_values(&published_compromise(det.dims));
    let ours = solve_distance(&det, &ideal, 1e-4).unwrap();
    assert!(ideal.distance(&published) > 269.0);
    assert!(ours.scalar_value < ideal.distance(&published) - 0.5);
}
