//! Polynomial maps given by finitely many non-identity components.

use polyorbit::dynamics::{FiniteComponentMap, SparsePoint};

fn main() {
    let f: FiniteComponentMap = "# a shear and a square\n0: x0 + x1\n2: x2^2 - 1\n".parse().unwrap();
    let g: FiniteComponentMap = "1: -1*x1\n".parse().unwrap();
    print!("f:\n{f}g:\n{g}");

    let x: SparsePoint = "0:1 1:2 2:1".parse().unwrap();
    println!("x = {x}");
    println!("f(x) = {}", f.apply(&x));
    println!("f(g(x)) = {}", f.apply(&g.apply(&x)));
    let fg = f.compose(&g);
    print!("f o g:\n{fg}");
    println!("(f o g)(x) = {}", fg.apply(&x));
    // zero results are dropped from the support
    println!("support of f(x): {:?}", f.apply(&x).support().collect::<Vec<_>>());
}
