#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use ncjet::algebra::Module;
use ncjet::calculus::Calculus;
use ncjet::connections::{solve_bimodule_connections, Ansatz, BimoduleConnection};
use ncjet::fixtures;
use ncjet::jets::JetTower;
use ncjet::quant::{braiding_retraction, exterior_connection, Quantization};
use ncjet::{Mat, Rat};

pub struct Quaternion {
    pub calc: Arc<Calculus>,
    pub tower: Arc<JetTower>,
    pub bconn: BimoduleConnection,
    pub q: Quantization,
}

pub fn quaternion() -> Quaternion {
    let calc = Arc::new(fixtures::calculus("quaternion").unwrap());
    let tower = Arc::new(JetTower::build(&calc, Module::regular(calc.algebra()), 3).unwrap());
    let bconn = solve_bimodule_connections(&calc, Ansatz::FrameConstant).unwrap().representative().unwrap();
    let s11 = braiding_retraction(&tower, &bconn).unwrap();
    let q = Quantization::build(tower.clone(), &bconn, &exterior_connection(&tower).unwrap(), &BTreeMap::from([(1, s11)]))
        .unwrap();
    Quaternion { calc, tower, bconn, q }
}

pub fn tower(name: &str) -> (Arc<Calculus>, JetTower) {
    let calc = Arc::new(fixtures::calculus(name).unwrap());
    let tw = JetTower::build(&calc, Module::regular(calc.algebra()), fixtures::jet_order(name)).unwrap();
    (calc, tw)
}

/// Hamilton product on coefficient vectors `(1, i, j, k)`.
pub fn qmul(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    let [a0, a1, a2, a3] = a;
    let [b0, b1, b2, b3] = b;
    [
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

pub fn e(i: usize) -> [i64; 4] {
    let mut v = [0; 4];
    v[i] = 1;
    v
}

/// Matrix of a map on ℍ given its values on the basis.
pub fn qmap(f: impl Fn([i64; 4]) -> [i64; 4]) -> Mat {
    let cols: Vec<Vec<Rat>> = (0..4).map(|c| f(e(c)).iter().map(|&x| Rat::from_int(x)).collect()).collect();
    Mat::from_cols(&cols, 4)
}

pub fn r(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

pub fn mat(rows: &[&[i64]]) -> Mat {
    Mat::from_i64(rows)
}
