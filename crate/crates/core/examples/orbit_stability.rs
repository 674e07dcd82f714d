//! Is the orbit of a point finite? Stable when it is found to be, Unknown
//! when the budget runs out first.

use polyorbit::dynamics::PolyMapDesc;
use polyorbit::life::patterns;
use polyorbit::lifepoly::{build_gol_map, encode};
use polyorbit::orbit::{explore_orbit, is_stable_singleton, GeneratorSet};

fn main() {
    let phi: PolyMapDesc = build_gol_map();
    for (name, c) in [
        ("block", patterns::block()),
        ("blinker", patterns::blinker()),
        ("toad", patterns::toad()),
        ("glider", patterns::glider()),
    ] {
        let x = encode(&c.translate(1, 1)).expect("quadrant cells");
        println!("{name}: {}", is_stable_singleton(&phi, &x, 500).unwrap());
    }

    // breadth-first closure under several maps
    let maps: Vec<PolyMapDesc> = ["0: x1\n1: x0\n", "0: -1*x0\n"]
        .iter()
        .map(|t| t.parse::<polyorbit::dynamics::FiniteComponentMap>().unwrap().into())
        .collect();
    let gens = GeneratorSet::new(maps).unwrap();
    let start = "0:3 1:4".parse().unwrap();
    let e = explore_orbit(&gens, &start, 1000, 100).unwrap();
    println!("swap and negate from ({start}): {}", e.verdict);
    for p in &e.visited {
        println!("  {p}");
    }
}
