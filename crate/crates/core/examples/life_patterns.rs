//! Run Life patterns on the unbounded plane and read/write RLE.

use polyorbit::life::{emit_rle, parse_rle, patterns};

fn main() {
    let glider = patterns::glider();
    println!("glider:\n{}", glider.render_grid());
    let later = glider.run(4);
    println!("after 4 generations:\n{}", later.render_grid());
    println!("moved by (1, 1): {}", later == glider.translate(1, 1));

    let r = parse_rle("#N R-pentomino\nx = 3, y = 3\nb2o$2ob$bo!").expect("valid RLE");
    for n in [0, 10, 100] {
        let c = r.run(n);
        let bb = c.bounding_box().expect("nonempty");
        println!("R-pentomino gen {n}: population {} in {}x{}", c.population(), bb.width(), bb.height());
    }
    println!("toad as RLE:\n{}", emit_rle(&patterns::toad()));
    println!("blinker: {}", patterns::blinker().recurrence(10));
}
