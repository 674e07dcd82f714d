//! Load Turing machines and ask whether their runs become periodic.

use polyorbit::cycles::{CycleSearch, Transition};
use polyorbit::turing::{StepOutcome, TmDesc};

fn load(name: &str) -> TmDesc {
    let path = format!("{}/data/machines/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .expect("machine file")
        .parse()
        .unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn main() {
    let search = CycleSearch::new(1000);
    for (name, word) in [
        ("left-looper.tm", "aa"),
        ("bouncer.tm", ""),
        ("two-state.tm", "aa"),
        ("two-state.tm", "b"),
        ("right-mover.tm", "a"),
    ] {
        let m = load(name);
        let start = m.initial_config(&TmDesc::split_word(word)).expect("input word");
        println!("{name} on {word:?}: {}", m.render(&start));
        let verdict = search
            .run(start, |c| {
                m.step(c).map(|o| match o {
                    StepOutcome::Next(n) => Transition::Next(n),
                    StepOutcome::Halted(_) => Transition::Halt,
                })
            })
            .expect("valid configuration");
        println!("  {verdict}");
    }
}
