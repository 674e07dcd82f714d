//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Thresholds are fixed constants below.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyorbit::cycles::{detect_brent, detect_hashset, CycleVerdict, Transition};
use polyorbit::dynamics::{FiniteComponentMap, PolyMapDesc, SparsePoint};
use polyorbit::life::{patterns, LifeConfig};
use polyorbit::lifepoly::{
    self, check_commuting_square, encode, gol_grid_map, quadrant_safe, random_soup, LocalRule,
    Pattern9, LIVE_PATTERN_COUNT,
};
use polyorbit::orbit::{is_stable_singleton, orbit_closure, GeneratorSet, StabilityVerdict};
use polyorbit::polymap::{Monomial, PolyExpr, Polynomial, VarIndex};
use polyorbit::turing::{StepOutcome, TmDesc};

const TRUTH_TABLE_LIMIT: Duration = Duration::from_secs(1);
const SOUP_TRIALS: u64 = 1000;
const SOUP_SIZE: u32 = 16;
const SOUP_DENSITY: f64 = 0.3;
const SOUP_SEED: u64 = 0;
const SOUP_LIMIT: Duration = Duration::from_secs(30);
const GLIDER_BUDGET: u64 = 1000;
const PATTERN_BUDGET: u64 = 1000;
const RHO_SEQUENCES: usize = 200;
const RHO_MAX: u64 = 50;
const RANDOM_MAPS: usize = 50;
const MATCHED_BUDGET: u64 = 16;
const FUZZ_APPLIES: usize = 100_000;
const BLINKER_ITERATIONS: u64 = 10_000;
const BLINKER_LIMIT: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ms(d: Duration) -> u128 {
    d.as_millis()
}

/// Life cells of a 3x3 neighbourhood pattern, centred at (1, 1).
fn pattern_config(p: Pattern9) -> LifeConfig {
    let offsets = polyorbit::dynamics::NEIGHBORHOOD;
    LifeConfig::from_cells(
        p.bits()
            .iter()
            .zip(offsets)
            .filter(|(b, _)| **b == 1)
            .map(|(_, (dx, dy))| (1 + dx, 1 + dy)),
    )
}

fn truth_table() -> Outcome {
    let rule = lifepoly::local_rule().expanded();
    let start = Instant::now();
    let mut agree = 0;
    for p in Pattern9::all() {
        let engine = pattern_config(p).step().is_alive(polyorbit::life::Cell::new(1, 1));
        let value = rule.evaluate_slice(&p.values());
        let expected = if engine { BigInt::one() } else { BigInt::zero() };
        ensure(value == expected, || format!("pattern {:?}: rule={value} engine={engine}", p.bits()))?;
        agree += 1;
    }
    let took = start.elapsed();
    ensure(took < TRUTH_TABLE_LIMIT, || format!("took {} ms", ms(took)))?;
    Ok(format!("{agree}/512 inputs agree with the Life engine in {} ms (limit {} ms)", ms(took), ms(TRUTH_TABLE_LIMIT)))
}

fn rule_structure() -> Outcome {
    let rule = lifepoly::local_rule();
    let summands = rule.unexpanded().summands();
    ensure(summands.len() == LIVE_PATTERN_COUNT, || format!("{} summands", summands.len()))?;
    let mut indicated = BTreeSet::new();
    for (k, s) in summands.iter().enumerate() {
        ensure(s.factor_count() == 9, || format!("summand {k} has {} factors", s.factor_count()))?;
        let term = s.expand();
        ensure(term.degree() == Some(9), || format!("summand {k} has degree {:?}", term.degree()))?;
        let ones: Vec<u16> = (0..512u16)
            .filter(|&i| term.evaluate_slice(&Pattern9::from_index(i).values()).is_one())
            .collect();
        ensure(ones.len() == 1, || format!("summand {k} is 1 on {} inputs", ones.len()))?;
        indicated.insert(ones[0]);
    }
    ensure(indicated.len() == LIVE_PATTERN_COUNT, || "summands repeat a pattern".into())?;
    let independent = PolyExpr::Sum(summands.to_vec()).expand();
    ensure(&independent == rule.expanded(), || "re-expansion differs".into())?;
    for p in Pattern9::all() {
        let v = p.values();
        ensure(
            rule.unexpanded().evaluate_slice(&v) == rule.expanded().evaluate_slice(&v),
            || format!("forms disagree on {:?}", p.bits()),
        )?;
    }
    let live = LocalRule::live_patterns().count();
    Ok(format!(
        "{} summands of degree 9 over {live} distinct live patterns; expanded form has {} terms and agrees on 512 inputs",
        summands.len(),
        rule.expanded().term_count()
    ))
}

fn commuting_square() -> Outcome {
    let map = gol_grid_map();
    let start = Instant::now();
    let check = check_commuting_square(&map, SOUP_TRIALS, SOUP_SIZE, SOUP_DENSITY, SOUP_SEED);
    let took = start.elapsed();
    ensure(check.failures == 0, || format!("{} failures, first at trial {:?}", check.failures, check.first_failure))?;
    ensure(took < SOUP_LIMIT, || format!("took {} ms", ms(took)))?;
    Ok(format!(
        "{} soups {SOUP_SIZE}x{SOUP_SIZE} density {SOUP_DENSITY} seed {SOUP_SEED}: 0 failures in {} ms (limit {} ms)",
        check.trials,
        ms(took),
        ms(SOUP_LIMIT)
    ))
}

/// `orbit check --encode <pattern> --map gol` through the command-line
/// front end, at the default (1, 1) translation.
fn orbit_check_cli(name: &str) -> Result<String, String> {
    let path = format!("{}/data/patterns/{name}.rle", env!("CARGO_MANIFEST_DIR"));
    let budget = GLIDER_BUDGET.to_string();
    let args = ["polyorbit", "orbit", "check", "--encode", &path, "--map", "gol", "--max-steps", &budget];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = polyorbit::cli::run(args, &mut std::io::empty(), &mut out, &mut err);
    let out = String::from_utf8_lossy(&out).into_owned();
    ensure(code == 0, || format!("{name}: exit {code}: {}", String::from_utf8_lossy(&err)))?;
    Ok(out)
}

fn oscillator_stability() -> Outcome {
    let phi: PolyMapDesc = gol_grid_map().into();
    let cases = [
        ("block", patterns::block(), 1, (0, 1)),
        ("blinker", patterns::blinker(), 2, (0, 2)),
        ("toad", patterns::toad(), 2, (0, 2)),
    ];
    let mut notes = Vec::new();
    for (name, pattern, size, witness) in cases {
        let c = pattern.translate(1, 1);
        ensure(quadrant_safe(&c), || format!("{name} is not quadrant safe"))?;
        let x = encode(&c).map_err(|e| e.to_string())?;
        let v = is_stable_singleton(&phi, &x, PATTERN_BUDGET).map_err(|e| e.to_string())?;
        let expected = StabilityVerdict::Stable { orbit_size: size, witness: Some(witness) };
        ensure(v == expected, || format!("{name}: got {v}"))?;
        let engine = c.recurrence(PATTERN_BUDGET);
        ensure(
            engine == CycleVerdict::Periodic { preperiod: witness.0, period: witness.1 },
            || format!("{name}: engine says {engine}"),
        )?;
        let report = orbit_check_cli(name)?;
        ensure(report.contains(&format!("\n{v}\n")), || format!("{name}: orbit check printed\n{report}"))?;
        notes.push(format!("{name}={size}"));
    }
    let glider = patterns::glider().translate(1, 1);
    let x = encode(&glider).map_err(|e| e.to_string())?;
    let v = is_stable_singleton(&phi, &x, GLIDER_BUDGET).map_err(|e| e.to_string())?;
    ensure(!v.is_stable(), || format!("glider: got {v}"))?;
    let report = orbit_check_cli("glider")?;
    ensure(report.contains("verdict=unknown"), || format!("glider: orbit check printed\n{report}"))?;
    let engine = glider.recurrence(GLIDER_BUDGET);
    ensure(
        engine == CycleVerdict::Exhausted { budget: GLIDER_BUDGET },
        || format!("glider: engine says {engine}"),
    )?;
    Ok(format!("stable {}; glider unknown at budget {GLIDER_BUDGET}; orbit check and engine agree", notes.join(" ")))
}

fn rho_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tally = [0usize; 3];
    for n in 0..RHO_SEQUENCES {
        let tail = rng.gen_range(0..=RHO_MAX);
        let period = rng.gen_range(1..=RHO_MAX);
        let halts = rng.gen_bool(0.2);
        let budget = rng.gen_range(0..=2 * (tail + period));
        // states 0..tail+period; the last links back to `tail`, or halts
        let step = |&s: &u64| -> Result<Transition<u64>, ()> {
            Ok(if s + 1 < tail + period {
                Transition::Next(s + 1)
            } else if halts {
                Transition::Halt
            } else {
                Transition::Next(tail)
            })
        };
        let expected = if halts {
            let h = tail + period - 1;
            if h < budget { CycleVerdict::Terminated { steps: h } } else { CycleVerdict::Exhausted { budget } }
        } else if tail + period <= budget {
            CycleVerdict::Periodic { preperiod: tail, period }
        } else {
            CycleVerdict::Exhausted { budget }
        };
        let h = detect_hashset(0u64, budget, step).unwrap();
        let b = detect_brent(0u64, budget, step).unwrap();
        ensure(h == expected && b == expected, || {
            format!("sequence {n} (tail {tail}, period {period}, halts {halts}, budget {budget}): hashset {h}, brent {b}, expected {expected}")
        })?;
        tally[match expected {
            CycleVerdict::Periodic { .. } => 0,
            CycleVerdict::Terminated { .. } => 1,
            CycleVerdict::Exhausted { .. } => 2,
        }] += 1;
    }
    Ok(format!(
        "{RHO_SEQUENCES} sequences agree ({} periodic, {} terminated, {} exhausted)",
        tally[0], tally[1], tally[2]
    ))
}

fn turing_reduction() -> Outcome {
    let load = |text: &str| text.parse::<TmDesc>().map_err(|e| e.to_string());
    let left = load(include_str!("../data/machines/left-looper.tm"))?;
    let right = load(include_str!("../data/machines/right-mover.tm"))?;
    let accept = load(include_str!("../data/machines/accept-on-start.tm"))?;

    let periodicity = |m: &TmDesc, word: &[&str], budget: u64| -> Result<CycleVerdict, String> {
        let c0 = m.initial_config(word).map_err(|e| e.to_string())?;
        detect_hashset(c0, budget, |c| {
            m.step(c).map(|o| match o {
                StepOutcome::Next(n) => Transition::Next(n),
                StepOutcome::Halted(_) => Transition::Halt,
            })
        })
        .map_err(|e| e.to_string())
    };

    let c0 = left.initial_config(&["a"]).map_err(|e| e.to_string())?;
    let c1 = match left.step(&c0).map_err(|e| e.to_string())? {
        StepOutcome::Next(c) => c,
        other => return Err(format!("left looper halted: {other:?}")),
    };
    ensure(c1.head == 0, || format!("head moved to {} from cell 0", c1.head))?;

    let v = periodicity(&left, &["a"], 100)?;
    ensure(matches!(v, CycleVerdict::Periodic { period: 1, .. }), || format!("left looper: {v}"))?;
    for budget in [1, 2, 3, 10, 100, 1000] {
        let v = periodicity(&right, &["a"], budget)?;
        ensure(v == CycleVerdict::Exhausted { budget }, || format!("right mover at {budget}: {v}"))?;
    }
    let v = periodicity(&accept, &["a"], 100)?;
    ensure(v == CycleVerdict::Terminated { steps: 0 }, || format!("accept on start: {v}"))?;
    Ok("left edge clamps; left looper periodic with period 1; right mover exhausted at budgets 1..1000; accept-on-start terminated at 0".into())
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> Polynomial {
    let monomials = [
        Monomial::one(),
        Monomial::from_powers([(VarIndex(0), 1)]),
        Monomial::from_powers([(VarIndex(1), 1)]),
        Monomial::from_powers([(VarIndex(0), 2)]),
        Monomial::from_powers([(VarIndex(0), 1), (VarIndex(1), 1)]),
        Monomial::from_powers([(VarIndex(1), 2)]),
    ];
    let mut terms = Vec::new();
    for m in monomials {
        if rng.gen_bool(0.35) {
            terms.push((rng.gen_range(-1..=1), m));
        }
    }
    Polynomial::from_terms(terms)
}

fn random_component_map(rng: &mut ChaCha8Rng) -> FiniteComponentMap {
    let mut components = Vec::new();
    for i in 0..2u64 {
        if rng.gen_bool(0.7) {
            components.push((i, random_polynomial(rng)));
        }
    }
    FiniteComponentMap::new(components)
}

fn random_point(rng: &mut ChaCha8Rng, indices: u64, range: i64) -> SparsePoint {
    SparsePoint::from_entries((0..indices).map(|i| (i, rng.gen_range(-range..=range))))
}

fn closure_matches_singleton() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut stable, mut unknown) = (0, 0);
    for n in 0..RANDOM_MAPS {
        let map: PolyMapDesc = random_component_map(&mut rng).into();
        let x = random_point(&mut rng, 2, 3);
        let single = is_stable_singleton(&map, &x, MATCHED_BUDGET).map_err(|e| e.to_string())?;
        let closure = orbit_closure(&GeneratorSet::singleton(map.clone()), &x, MATCHED_BUDGET, MATCHED_BUDGET)
            .map_err(|e| e.to_string())?;
        let same = match (single, closure) {
            (StabilityVerdict::Stable { orbit_size: a, .. }, StabilityVerdict::Stable { orbit_size: b, .. }) => a == b,
            (
                StabilityVerdict::Unknown { points_explored: a, .. },
                StabilityVerdict::Unknown { points_explored: b, .. },
            ) => a == b,
            _ => false,
        };
        ensure(same, || format!("map {n} from {x}: singleton {single}, closure {closure}"))?;
        if single.is_stable() {
            stable += 1;
        } else {
            unknown += 1;
        }
    }
    ensure(stable > 0 && unknown > 0, || format!("degenerate sample: {stable} stable, {unknown} unknown"))?;
    Ok(format!("{RANDOM_MAPS} maps at budget {MATCHED_BUDGET} agree ({stable} stable, {unknown} unknown)"))
}

fn finite_support_and_zero_one() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let maps: Vec<FiniteComponentMap> = (0..64)
        .map(|_| {
            // components on indices 0..6, some cancelling to zero at typical points
            let mut components = Vec::new();
            for i in 0..6u64 {
                if rng.gen_bool(0.5) {
                    components.push((i, &random_polynomial(&mut rng) - &Polynomial::var(i)));
                }
            }
            FiniteComponentMap::new(components)
        })
        .collect();
    for n in 0..FUZZ_APPLIES {
        let map = &maps[n % maps.len()];
        let x = random_point(&mut rng, 6, 2);
        let y = map.apply(&x);
        ensure(y.iter().all(|(_, v)| !v.is_zero()), || format!("apply {n} stored a zero: {y}"))?;
    }
    let phi = gol_grid_map();
    let mut soups = 0;
    for _ in 0..200 {
        let soup = random_soup(&mut rng, 8, 0.4);
        let mut x = encode(&soup).map_err(|e| e.to_string())?;
        for _ in 0..4 {
            x = phi.apply(&x).map_err(|e| e.to_string())?;
            ensure(x.iter().all(|(_, v)| v.is_one()), || format!("non-0/1 value in {x}"))?;
        }
        soups += 1;
    }
    Ok(format!("{FUZZ_APPLIES} applies kept no zero entries; {soups} soups x 4 steps stayed 0/1"))
}

fn blinker_iterations() -> Outcome {
    let phi = gol_grid_map();
    let x0 = encode(&patterns::blinker().translate(1, 1)).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut x = x0.clone();
    let mut seen = HashSet::new();
    for _ in 0..BLINKER_ITERATIONS {
        x = phi.apply(&x).map_err(|e| e.to_string())?;
        seen.insert(x.clone());
    }
    let took = start.elapsed();
    ensure(x == x0, || "blinker did not return after an even number of steps".into())?;
    ensure(seen.len() == 2, || format!("{} distinct states", seen.len()))?;
    ensure(took < BLINKER_LIMIT, || format!("took {} ms", ms(took)))?;
    Ok(format!("{BLINKER_ITERATIONS} iterations in {} ms (limit {} ms)", ms(took), ms(BLINKER_LIMIT)))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("truth table", truth_table),
        ("rule structure", rule_structure),
        ("commuting square", commuting_square),
        ("oscillator stability", oscillator_stability),
        ("cycle detector agreement", rho_agreement),
        ("turing periodicity", turing_reduction),
        ("closure vs singleton", closure_matches_singleton),
        ("finite support", finite_support_and_zero_one),
        ("blinker iteration", blinker_iterations),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
