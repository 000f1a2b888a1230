mod common;

use ncjet::algebra::is_left_linear;
use ncjet::fixtures;
use ncjet::jets::{delta, elemental_span, exactness_report};
use ncjet::linalg::Subspace;
use ncjet::spencer::{
    delta_cohomology, flavor_compatibility, nu_identity, restriction_symbol_check, sesqui_curvature_identity, spencer, spencer_bar,
    spencer_sesqui,
};
use ncjet::Mat;

use common::tower;

#[test]
fn jet_dimensions() {
    let expected = [("quaternion", vec![4, 12, 16, 16], vec![4, 8, 4, 0]), ("two-point-universal", vec![2, 4, 4, 4], vec![2, 2, 0, 0])];
    for (name, jets, syms) in expected {
        let (_, tw) = tower(name);
        let j: Vec<usize> = (0..=3).map(|n| tw.level(n).unwrap().dim()).collect();
        let s: Vec<usize> = (0..=3).map(|n| tw.sym(n).unwrap().dim()).collect();
        assert_eq!(j, jets, "{name}");
        assert_eq!(s, syms, "{name}");
    }
}

#[test]
fn sequences_are_exact_and_prolongations_project() {
    for name in fixtures::NAMES {
        let (_, tw) = tower(name);
        for n in 1..=tw.order() {
            let rep = exactness_report(&tw, n).unwrap();
            assert!(rep.exact() && rep.pullback, "{name} at {n}: {rep:?}");
            let lv = tw.level(n).unwrap();
            assert_eq!(lv.pi.mul(&lv.prolong), tw.level(n - 1).unwrap().prolong, "{name} at {n}");
            assert!(is_left_linear(&lv.pi, lv.module(), tw.level(n - 1).unwrap().module()));
            assert_eq!(elemental_span(&tw, n).unwrap(), Subspace::full(lv.dim()), "{name} at {n}");
        }
    }
}

#[test]
fn prolongation_is_not_linear_but_lifts_itself() {
    let (_, tw) = tower("quaternion");
    let lv = tw.level(2).unwrap();
    assert!(!is_left_linear(&lv.prolong, tw.level(0).unwrap().module(), lv.module()));
    let lift = ncjet::quant::op_lift(&tw, lv.module(), &lv.prolong, 2).unwrap().unwrap();
    assert_eq!(lift, Mat::identity(lv.dim()));
}

#[test]
fn delta_squares_to_zero() {
    let (calc, tw) = tower("quaternion");
    for k in 0..calc.max_degree() - 1 {
        assert!(delta(&tw, 1, k + 1).unwrap().mul(&delta(&tw, 2, k).unwrap()).is_zero());
    }
    assert!(delta_cohomology(&tw, 2).unwrap().iter().all(|&d| d == 0));
}

#[test]
fn spencer_flavors_agree() {
    for name in ["quaternion", "two-point-universal"] {
        let (calc, tw) = tower(name);
        for n in 1..=2 {
            for m in 0..calc.max_degree() {
                assert!(flavor_compatibility(&tw, n, m).unwrap(), "{name} ({n}, {m})");
                assert!(restriction_symbol_check(&tw, n, m).unwrap(), "{name} ({n}, {m})");
                let s = spencer(&tw, n, m).unwrap();
                assert_eq!(s.cols(), tw.level(n).unwrap().forms.dim(m).unwrap());
                let sesqui = spencer_sesqui(&tw, n, m).unwrap();
                if n == 1 {
                    assert_eq!(sesqui, s);
                } else {
                    assert_eq!(spencer_bar(&tw, n, m).unwrap().rows(), s.rows());
                }
            }
        }
        assert!(sesqui_curvature_identity(&tw, 2).unwrap(), "{name}");
        assert!(nu_identity(&tw, 0).unwrap(), "{name}");
    }
}

#[test]
fn spencer_needs_positive_order() {
    let (_, tw) = tower("quaternion");
    assert!(spencer(&tw, 0, 0).is_err());
}
