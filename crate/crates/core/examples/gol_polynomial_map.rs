//! Life as a polynomial map on finitely supported integer sequences.
//!
//! Cells `(x, y)` of the first quadrant become coordinates via the Cantor
//! pairing; one application of the map is one Life generation.

use polyorbit::life::patterns;
use polyorbit::lifepoly::{
    check_commuting_square, decode, encode, gol_grid_map, local_rule, quadrant_safe,
};

fn main() {
    let rule = local_rule();
    println!(
        "local rule: {} pattern summands, {} expanded terms",
        rule.unexpanded().summand_count(),
        rule.expanded().term_count()
    );
    println!("first summand: {}", rule.unexpanded().summands()[0]);

    let phi = gol_grid_map();
    let blinker = patterns::blinker().translate(1, 1);
    assert!(quadrant_safe(&blinker));
    let x = encode(&blinker).expect("cells in the quadrant");
    let y = phi.apply(&x).expect("well-formed point");
    println!("x      = {x}");
    println!("phi(x) = {y}");
    println!("decodes to the next generation: {}", decode(&y).unwrap() == blinker.step());

    let check = check_commuting_square(&phi, 200, 16, 0.3, 1);
    println!("random soups: {} trials, {} failures", check.trials, check.failures);
}
