mod common;

use ncjet::algebra::{quaternion_algebra, Algebra, Module};
use ncjet::calculus::{validate_fodc, Calculus};
use ncjet::fixtures;
use ncjet::linalg::kernel_of;
use ncjet::{Error, Mat, Rat};

use common::{e, qmap, qmul};

#[test]
fn fixtures_satisfy_calculus_axioms() {
    for name in fixtures::NAMES {
        let c = fixtures::calculus(name).unwrap();
        assert!(c.algebra().validate().is_empty(), "{name}");
        assert!(c.check_d_squared().is_empty(), "{name}");
        assert!(c.check_leibniz().unwrap().is_empty(), "{name}");
        assert!(c.check_wedge_assoc().unwrap().is_empty(), "{name}");
    }
}

#[test]
fn quaternion_form_dimensions() {
    let c = fixtures::calculus("quaternion").unwrap();
    assert_eq!((c.dim(0), c.dim(1), c.dim(2)), (4, 8, 12));
    let w = c.wedge(1, 1).unwrap();
    assert_eq!(kernel_of(&w).dim(), 4);
    // di ∧ dj = dj ∧ di
    let frame = c.frame().unwrap();
    let pair = c.pair(1, 1).unwrap();
    let ij = ncjet::linalg::kron_vec(&frame[0], &frame[1]);
    let ji = ncjet::linalg::kron_vec(&frame[1], &frame[0]);
    assert_eq!(w.mul_vec(&pair.q.mul_vec(&ij)), w.mul_vec(&pair.q.mul_vec(&ji)));
    assert_ne!(w.mul_vec(&pair.q.mul_vec(&ij)), vec![Rat::zero(); 12]);
}

#[test]
fn quaternion_partials() {
    let c = fixtures::calculus("quaternion").unwrap();
    let p = c.partials().unwrap();
    assert_eq!(p.len(), 2);
    let col = |m: &Mat, x: usize| m.col(x);
    let v = |q: [i64; 4]| q.iter().map(|&x| Rat::from_int(x)).collect::<Vec<_>>();
    assert_eq!(col(&p[0], 3), v([0, 0, -1, 0]));
    assert_eq!(col(&p[1], 3), v([0, 1, 0, 0]));
    assert_eq!(col(&p[0], 0), v([0; 4]));
    assert_eq!(col(&p[1], 0), v([0; 4]));
    // d = Σ_s ∂_s(h) θ_s
    let frame = c.frame().unwrap();
    let w = c.omega(1).unwrap();
    let mut rebuilt = Mat::zeros(8, 4);
    for (s, th) in frame.iter().enumerate() {
        for x in 0..4 {
            let coeff = p[s].col(x);
            let mut term = vec![Rat::zero(); 8];
            for a in 0..4 {
                let v = w.left[a].mul_vec(th);
                for (t, y) in term.iter_mut().zip(v) {
                    *t += &(&coeff[a] * &y);
                }
            }
            for (r, t) in term.into_iter().enumerate() {
                rebuilt[(r, x)] += t;
            }
        }
    }
    assert_eq!(&rebuilt, c.d(0).unwrap());
}

#[test]
fn quaternion_table_matches_hamilton() {
    let h = quaternion_algebra();
    for a in 0..4 {
        assert_eq!(h.left_mat(a), &qmap(|x| qmul(e(a), x)));
        assert_eq!(h.right_mat(a), &qmap(|x| qmul(x, e(a))));
    }
}

fn quaternion_parts() -> (Algebra, Module, Mat) {
    let c = fixtures::calculus("quaternion").unwrap();
    (c.algebra().clone(), c.omega(1).unwrap().clone(), c.d(0).unwrap().clone())
}

#[test]
fn broken_leibniz_is_named() {
    let (alg, w, mut d) = quaternion_parts();
    d[(0, 1)] = Rat::from_int(2);
    let report = validate_fodc(&alg, &w, &d);
    assert!(report.iter().any(|s| s.contains("Leibniz rule fails at")), "{report:?}");
    assert!(matches!(Calculus::build(alg, w, d, 2, "bad"), Err(Error::Invalid(_))));
}

#[test]
fn perturbed_right_action_is_rejected() {
    let (alg, mut w, d) = quaternion_parts();
    let right = w.right.as_mut().unwrap();
    right[1] = right[1].neg();
    assert!(!validate_fodc(&alg, &w, &d).is_empty());
}

#[test]
fn degree_overflow_is_reported() {
    let c = fixtures::calculus("two-point-universal").unwrap();
    assert!(matches!(c.omega(c.max_degree() + 1), Err(Error::DegreeOverflow { .. })));
}

#[test]
fn unknown_fixture() {
    assert!(matches!(fixtures::calculus("torus"), Err(Error::Invalid(_))));
}
