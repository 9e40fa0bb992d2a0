#![allow(dead_code)]

use kneading::affine::{Branch, PiecewiseAffineSystem};
use kneading::strings::check_conditions;
use kneading::EpString;
use rand::Rng;

pub fn ep(s: &str) -> EpString {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Largest root in `[lo, hi]` of the polynomial with coefficients `c`
/// (lowest degree first), by plain bisection on a sign change.
pub fn poly_root(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let f = |x: f64| c.iter().rev().fold(0.0, |acc, &a| acc * x + a);
    let neg_lo = f(lo) < 0.0;
    assert_ne!(neg_lo, f(hi) < 0.0, "no sign change");
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if (f(m) < 0.0) == neg_lo {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

pub fn plastic() -> f64 {
    poly_root(&[-1.0, -1.0, 0.0, 1.0], 1.0, 2.0)
}

pub fn golden() -> f64 {
    poly_root(&[-1.0, -1.0, 1.0], 1.0, 2.0)
}

/// Admissible eventually periodic pairs with positive entropy.
pub const CORPUS: &[(&str, &str)] = &[
    ("(0)", "(1)"),
    ("(0)", "(2)"),
    ("(0)", "(3)"),
    ("(0)", "(4)"),
    ("(0)", "(10)"),
    ("(01)", "(110)"),
    ("0(011)", "11(10)"),
    ("(001)", "(110)"),
    ("(0)", "(110)"),
    ("(01)", "(1)"),
    ("(0011)", "(1110)"),
    ("(00101)", "(11010)"),
    ("(01)", "(1110)"),
    ("(0001)", "(1)"),
    ("(001)", "(11)"),
    ("(01)", "(21)"),
    ("(0)", "(21)"),
    ("(02)", "(2)"),
    ("(011)", "(210)"),
    ("(013)", "(31)"),
    ("(012)", "(320)"),
    ("(0)", "(41)"),
];

pub fn corpus() -> Vec<(EpString, EpString)> {
    CORPUS
        .iter()
        .map(|(u, v)| {
            let (u, v) = (ep(u), ep(v));
            assert!(check_conditions(&u, &v).admissible(), "corpus pair {u} {v} not admissible");
            (u, v)
        })
        .collect()
}

/// Random system whose branches map their interval onto `[0, 1]` or a random
/// subinterval; branch 0 is always full so the images cover.
pub fn random_system(rng: &mut impl Rng) -> PiecewiseAffineSystem<f64> {
    let k = rng.gen_range(2..=5);
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(0.05..0.95)).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let mut bps = vec![0.0];
    bps.extend(cuts);
    bps.push(1.0);
    let branches = bps
        .windows(2)
        .enumerate()
        .map(|(j, w)| {
            let (y0, y1) = if j == 0 || rng.gen_bool(0.5) {
                (0.0, 1.0)
            } else {
                let a: f64 = rng.gen_range(0.0..0.5);
                (a, rng.gen_range(a + 0.1..=1.0))
            };
            let (y0, y1) = if rng.gen_bool(0.5) { (y0, y1) } else { (y1, y0) };
            let slope = (y1 - y0) / (w[1] - w[0]);
            Branch::new(slope, y0 - slope * w[0])
        })
        .collect();
    PiecewiseAffineSystem::new(bps, branches).expect("valid random system")
}

/// Random eventually periodic string over `k` symbols.
pub fn random_string(rng: &mut impl Rng, k: u32) -> EpString {
    let pre = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..k)).collect();
    let per = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0..k)).collect();
    EpString::new(pre, per, k).unwrap()
}
