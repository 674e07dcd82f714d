//! Cycle detection on an arbitrary step function, with both detectors.

use polyorbit::cycles::{Algorithm, CycleSearch, Transition};

fn main() {
    // x -> x^2 + 1 mod 10007 falls into a cycle eventually
    let step = |&x: &u64| Ok::<_, ()>(Transition::Next((x * x + 1) % 10007));
    for algorithm in [Algorithm::HashSet, Algorithm::Brent] {
        let v = CycleSearch::new(100_000).with_algorithm(algorithm).run(2, step).unwrap();
        println!("{algorithm}: {v}");
    }

    // a countdown halts; as a fixed point it counts as periodic
    let countdown = |&n: &u32| Ok::<_, ()>(if n == 0 { Transition::Halt } else { Transition::Next(n - 1) });
    let search = CycleSearch::new(100);
    println!("countdown: {}", search.run(5, countdown).unwrap());
    println!(
        "countdown, halting as fixed point: {}",
        search.with_halting_as_fixed_point(true).run(5, countdown).unwrap()
    );
    println!("budget too small: {}", CycleSearch::new(3).run(5, countdown).unwrap());
}
