//! Build, expand, substitute and evaluate sparse integer polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use polyorbit::polymap::{Polynomial, VarIndex};

fn main() {
    let p: Polynomial = "x0^2 - 2*x0*x1 + x1^2".parse().expect("valid polynomial");
    let q: Polynomial = "x0 - x1".parse().expect("valid polynomial");
    println!("p = {p}");
    println!("q^2 = {}", q.pow(2));
    println!("p == q^2: {}", p == q.pow(2));

    // substitute x0 -> x2 + 1, x1 -> x2
    let subs = BTreeMap::from([
        (VarIndex(0), "x2 + 1".parse().unwrap()),
        (VarIndex(1), Polynomial::var(2)),
    ]);
    println!("p(x2 + 1, x2) = {}", p.substitute(&subs));

    // coefficients are unbounded
    let big = vec![BigInt::from(10).pow(30), BigInt::from(3)];
    println!("p(10^30, 3) = {}", p.evaluate_slice(&big));
}
