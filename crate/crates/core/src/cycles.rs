//! Budgeted detection of eventual periodicity for deterministic step
//! functions.
//!
//! Whether a trajectory eventually revisits a state is undecidable in
//! general, so these are semi-decisions: a revisit or a halt found within
//! the budget is reported exactly, and anything else is
//! [`CycleVerdict::Exhausted`]. There is deliberately no total `decide`.
//!
//! The budget is a horizon on the trajectory `s_0, s_1, ...`: a verdict of
//! `Periodic` means `s_{λ+μ} = s_λ` with `λ + μ <= budget`, `Terminated`
//! means the step function refused to continue from `s_h` with
//! `h < budget`. [`detect_hashset`] calls the step function at most
//! `budget` times; [`detect_brent`] returns the same verdict with constant
//! memory and may call it up to about five times as often.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

/// Result of one step: a successor, or the end of the trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transition<S> {
    Next(S),
    Halt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleVerdict {
    /// `s_{preperiod + period} = s_preperiod`, both minimal.
    Periodic { preperiod: u64, period: u64 },
    /// The trajectory ends at `s_steps`.
    Terminated { steps: u64 },
    /// Neither a revisit nor a halt within the budget.
    Exhausted { budget: u64 },
}

impl CycleVerdict {
    /// Reads a finite trajectory as ending in a fixed point: the halting
    /// state repeats forever with period 1.
    pub fn halting_as_fixed_point(self) -> CycleVerdict {
        match self {
            CycleVerdict::Terminated { steps } => CycleVerdict::Periodic {
                preperiod: steps,
                period: 1,
            },
            other => other,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, CycleVerdict::Periodic { .. })
    }
}

impl fmt::Display for CycleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleVerdict::Periodic { preperiod, period } => {
                write!(f, "verdict=periodic preperiod={preperiod} period={period}")
            }
            CycleVerdict::Terminated { steps } => write!(f, "verdict=terminated steps={steps}"),
            CycleVerdict::Exhausted { budget } => write!(f, "verdict=exhausted budget={budget}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    #[default]
    HashSet,
    Brent,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hashset" => Ok(Algorithm::HashSet),
            "brent" => Ok(Algorithm::Brent),
            other => Err(format!("unknown algorithm {other:?} (expected hashset or brent)")),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::HashSet => "hashset",
            Algorithm::Brent => "brent",
        })
    }
}

/// Options shared by both detectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CycleSearch {
    pub budget: u64,
    pub algorithm: Algorithm,
    pub halting_as_fixed_point: bool,
}

impl CycleSearch {
    pub fn new(budget: u64) -> Self {
        CycleSearch {
            budget,
            ..CycleSearch::default()
        }
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn with_halting_as_fixed_point(mut self, on: bool) -> Self {
        self.halting_as_fixed_point = on;
        self
    }

    pub fn run<S, E, F>(&self, start: S, step: F) -> Result<CycleVerdict, E>
    where
        S: Clone + Eq + Hash,
        F: FnMut(&S) -> Result<Transition<S>, E>,
    {
        let verdict = match self.algorithm {
            Algorithm::HashSet => detect_hashset(start, self.budget, step)?,
            Algorithm::Brent => detect_brent(start, self.budget, step)?,
        };
        Ok(if self.halting_as_fixed_point {
            verdict.halting_as_fixed_point()
        } else {
            verdict
        })
    }
}

/// Walks the trajectory remembering the index of every state seen.
pub fn detect_hashset<S, E, F>(start: S, budget: u64, mut step: F) -> Result<CycleVerdict, E>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S) -> Result<Transition<S>, E>,
{
    let mut seen: HashMap<S, u64> = HashMap::new();
    let mut current = start;
    seen.insert(current.clone(), 0);
    for k in 1..=budget {
        match step(&current)? {
            Transition::Halt => return Ok(CycleVerdict::Terminated { steps: k - 1 }),
            Transition::Next(next) => {
                if let Some(&first) = seen.get(&next) {
                    return Ok(CycleVerdict::Periodic {
                        preperiod: first,
                        period: k - first,
                    });
                }
                seen.insert(next.clone(), k);
                current = next;
            }
        }
    }
    Ok(CycleVerdict::Exhausted { budget })
}

/// Brent's power-of-two search: a turtle parked at indices `2^k - 1` and a
/// hare scanning the next `2^k` states. The period found is minimal; a
/// second pass from the start recovers the preperiod.
pub fn detect_brent<S, E, F>(start: S, budget: u64, mut step: F) -> Result<CycleVerdict, E>
where
    S: Clone + Eq,
    F: FnMut(&S) -> Result<Transition<S>, E>,
{
    let exhausted = Ok(CycleVerdict::Exhausted { budget });
    if budget == 0 {
        return exhausted;
    }
    // a cycle with preperiod + period <= budget is seen before the hare
    // passes index 2 * max(preperiod + 1, period) + period
    let hare_limit = budget.saturating_mul(4).saturating_add(4);

    let mut power: u64 = 1;
    let mut period: u64 = 1;
    let mut turtle = start.clone();
    let mut hare_index: u64 = 0;
    let mut hare = match step(&start)? {
        Transition::Halt => return Ok(CycleVerdict::Terminated { steps: 0 }),
        Transition::Next(s) => s,
    };
    hare_index += 1;
    while turtle != hare {
        if hare_index >= hare_limit {
            return exhausted;
        }
        if power == period {
            turtle = hare.clone();
            power *= 2;
            period = 0;
        }
        hare = match step(&hare)? {
            Transition::Halt => {
                return if hare_index < budget {
                    Ok(CycleVerdict::Terminated { steps: hare_index })
                } else {
                    exhausted
                };
            }
            Transition::Next(s) => s,
        };
        hare_index += 1;
        period += 1;
    }
    if period > budget {
        return exhausted;
    }

    let advance = |s: &S, step: &mut F| -> Result<S, E> {
        match step(s)? {
            Transition::Next(n) => Ok(n),
            Transition::Halt => unreachable!("a cyclic trajectory never halts"),
        }
    };
    let mut turtle = start.clone();
    let mut hare = start;
    for _ in 0..period {
        hare = advance(&hare, &mut step)?;
    }
    let mut preperiod = 0;
    while turtle != hare {
        if preperiod + period >= budget {
            return exhausted;
        }
        turtle = advance(&turtle, &mut step)?;
        hare = advance(&hare, &mut step)?;
        preperiod += 1;
    }
    Ok(CycleVerdict::Periodic { preperiod, period })
}
