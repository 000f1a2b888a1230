mod common;

use std::sync::Arc;

use ncjet::algebra::Module;
use ncjet::calculus::FormBundle;
use ncjet::connections::{
    bimodule_defects, curvature_in_symbols, higher_curvature, leibniz_defects, omega1_bundle, solve_bimodule_connections,
    solve_higher_connections, solve_left_connections, torsion, Ansatz, Connection, HigherConnection,
};
use ncjet::quant::exterior_connection;
use ncjet::{fixtures, Mat, Rat};

use common::{quaternion, tower};

#[test]
fn connections_on_the_algebra() {
    for name in fixtures::NAMES {
        let calc = Arc::new(fixtures::calculus(name).unwrap());
        let forms = Arc::new(FormBundle::new(&calc, Module::regular(calc.algebra())));
        let space = solve_left_connections(&forms).unwrap();
        // left-linear maps A -> Ω^1 are fixed by the image of 1
        assert_eq!(space.dim(), Some(calc.dim(1)), "{name}");
        let (_, tw) = tower(name);
        let ext = exterior_connection(&tw).unwrap();
        assert!(space.contains(&ext.matrix), "{name}");
        assert!(ext.is_flat().unwrap(), "{name}");
    }
}

#[test]
fn leibniz_defects_are_located() {
    let calc = Arc::new(fixtures::calculus("quaternion").unwrap());
    let forms = Arc::new(FormBundle::new(&calc, Module::regular(calc.algebra())));
    let rep = solve_left_connections(&forms).unwrap().representative().unwrap();
    assert!(leibniz_defects(&forms, &rep.matrix).unwrap().is_empty());
    let bump = Mat::from_fn(rep.matrix.rows(), rep.matrix.cols(), |r, c| Rat::from_int(i64::from(r == 0 && c == 0)));
    // rank one, so never left-linear over ℍ
    let bad = rep.matrix.add(&bump);
    assert!(!leibniz_defects(&forms, &bad).unwrap().is_empty());
    assert!(Connection::new(forms.clone(), bad).is_err());
    assert!(leibniz_defects(&forms, &Mat::zeros(1, 1)).is_err());
}

#[test]
fn quaternion_bimodule_connections() {
    let calc = Arc::new(fixtures::calculus("quaternion").unwrap());
    let general = solve_bimodule_connections(&calc, Ansatz::General).unwrap();
    assert_eq!(general.dim(), Some(24));
    let frame = solve_bimodule_connections(&calc, Ansatz::FrameConstant).unwrap();
    assert_eq!(frame.dim(), Some(0));
    let b = frame.representative().unwrap();
    assert!(general.contains(&b));
    assert!(bimodule_defects(&b).unwrap().is_empty());
    assert!(torsion(&b.base).unwrap().is_zero());
    let mut broken = b.clone();
    broken.sigma = broken.sigma.neg();
    assert!(!bimodule_defects(&broken).unwrap().is_empty());
}

#[test]
fn two_point_bimodule_connections() {
    let calc = Arc::new(fixtures::calculus("two-point-universal").unwrap());
    let space = solve_bimodule_connections(&calc, Ansatz::General).unwrap();
    assert_eq!(space.dim(), Some(2));
    let b = space.representative().unwrap();
    assert!(bimodule_defects(&b).unwrap().is_empty());
    let forms = omega1_bundle(&calc).unwrap();
    assert!(solve_left_connections(&forms).unwrap().contains(&b.base.matrix));
}

#[test]
fn higher_connections_section_and_split() {
    let h = quaternion();
    let tw = &h.tower;
    for n in 1..=2 {
        let (c0, dir) = solve_higher_connections(tw, n).unwrap();
        let c0 = c0.unwrap();
        let prev = tw.level(n - 1).unwrap().dim();
        // differences are left-linear maps J^{n-1} -> S^n; J^{n-1} is free
        assert_eq!(dir.len(), prev / 4 * tw.sym(n).unwrap().dim(), "order {n}");
        let again = HigherConnection::from_split(tw, n, c0.split.clone()).unwrap();
        assert_eq!(again, c0);
        let moved = HigherConnection::from_section(tw, n, c0.c.add(&dir[0])).unwrap();
        assert_ne!(moved.split, c0.split);
        assert!(curvature_in_symbols(tw, &c0).unwrap(), "order {n}");
        let r = higher_curvature(tw, &c0).unwrap();
        assert_eq!(r.cols(), prev);
    }
    assert!(solve_higher_connections(tw, 0).is_err());
    let (c3, _) = solve_higher_connections(tw, 3).unwrap();
    assert!(higher_curvature(tw, &c3.unwrap()).is_err());
}
