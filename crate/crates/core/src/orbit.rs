//! Semi-deciding `S`-stability: is the orbit of a point under the monoid
//! generated by a finite set of polynomial maps finite?
//!
//! The orbit includes the point itself (the identity of the monoid).
//! Points are compared by exact equality. Finiteness cannot be decided in
//! general, so running out of budget yields [`StabilityVerdict::Unknown`],
//! which is an answer, not an error.

use std::collections::HashSet;
use std::fmt;

use crate::cycles::{Algorithm, CycleSearch, CycleVerdict, Transition};
use crate::dynamics::{DynamicsError, PolyMapDesc, SparsePoint};

/// A nonempty list of generating maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    maps: Vec<PolyMapDesc>,
}

impl GeneratorSet {
    pub fn new(maps: Vec<PolyMapDesc>) -> Option<Self> {
        (!maps.is_empty()).then_some(GeneratorSet { maps })
    }

    pub fn singleton(map: PolyMapDesc) -> Self {
        GeneratorSet { maps: vec![map] }
    }

    pub fn maps(&self) -> &[PolyMapDesc] {
        &self.maps
    }
}

/// Which budget stopped an exploration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Limit {
    MaxPoints,
    MaxDepth,
    MaxSteps,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limit::MaxPoints => "max_points",
            Limit::MaxDepth => "max_depth",
            Limit::MaxSteps => "max_steps",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabilityVerdict {
    /// The orbit is finite with `orbit_size` points. For a single map the
    /// witness is `(preperiod, period)` of the trajectory.
    Stable {
        orbit_size: u64,
        witness: Option<(u64, u64)>,
    },
    Unknown {
        points_explored: u64,
        limit: Limit,
    },
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable { .. })
    }

    pub fn orbit_size(&self) -> Option<u64> {
        match self {
            StabilityVerdict::Stable { orbit_size, .. } => Some(*orbit_size),
            StabilityVerdict::Unknown { .. } => None,
        }
    }
}

impl fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityVerdict::Stable {
                orbit_size,
                witness,
            } => {
                write!(f, "verdict=stable orbit_size={orbit_size}")?;
                if let Some((preperiod, period)) = witness {
                    write!(f, " preperiod={preperiod} period={period}")?;
                }
                Ok(())
            }
            StabilityVerdict::Unknown {
                points_explored,
                limit,
            } => write!(f, "verdict=unknown points={points_explored} limit={limit}"),
        }
    }
}

/// Single-map check through cycle detection on `x, f(x), f²(x), ...`.
/// Finds orbits of size up to `budget`.
pub fn is_stable_singleton(
    f: &PolyMapDesc,
    x: &SparsePoint,
    budget: u64,
) -> Result<StabilityVerdict, DynamicsError> {
    is_stable_singleton_with(f, x, budget, Algorithm::HashSet)
}

pub fn is_stable_singleton_with(
    f: &PolyMapDesc,
    x: &SparsePoint,
    budget: u64,
    algorithm: Algorithm,
) -> Result<StabilityVerdict, DynamicsError> {
    let verdict = CycleSearch::new(budget)
        .with_algorithm(algorithm)
        .run(x.clone(), |p| f.apply(p).map(Transition::Next))?;
    Ok(match verdict {
        CycleVerdict::Periodic { preperiod, period } => StabilityVerdict::Stable {
            orbit_size: preperiod + period,
            witness: Some((preperiod, period)),
        },
        CycleVerdict::Exhausted { budget } => StabilityVerdict::Unknown {
            points_explored: budget.saturating_add(1),
            limit: Limit::MaxSteps,
        },
        CycleVerdict::Terminated { .. } => unreachable!("polynomial maps are total"),
    })
}

/// Breadth-first orbit exploration, keeping the visited points.
#[derive(Clone, Debug)]
pub struct OrbitExploration {
    pub verdict: StabilityVerdict,
    /// Visited points in discovery order; `visited[0]` is the start point.
    pub visited: Vec<SparsePoint>,
    /// Number of completed breadth-first layers.
    pub depth: u64,
}

/// Applies every generator to every frontier point until no new point
/// appears (`Stable`) or a limit fires (`Unknown`). `max_depth` bounds the
/// number of expansion rounds and `max_points` the number of distinct
/// points kept.
pub fn explore_orbit(
    generators: &GeneratorSet,
    x: &SparsePoint,
    max_points: u64,
    max_depth: u64,
) -> Result<OrbitExploration, DynamicsError> {
    let mut seen: HashSet<SparsePoint> = HashSet::from([x.clone()]);
    let mut visited = vec![x.clone()];
    let mut frontier_start = 0;
    let mut depth = 0;
    let unknown = |visited: Vec<SparsePoint>, depth, limit| OrbitExploration {
        verdict: StabilityVerdict::Unknown {
            points_explored: visited.len() as u64,
            limit,
        },
        visited,
        depth,
    };
    if (visited.len() as u64) > max_points {
        return Ok(unknown(visited, depth, Limit::MaxPoints));
    }
    while frontier_start < visited.len() {
        if depth >= max_depth {
            return Ok(unknown(visited, depth, Limit::MaxDepth));
        }
        let frontier_end = visited.len();
        for i in frontier_start..frontier_end {
            for g in generators.maps() {
                let image = g.apply(&visited[i])?;
                if !seen.contains(&image) {
                    seen.insert(image.clone());
                    visited.push(image);
                    if (visited.len() as u64) > max_points {
                        return Ok(unknown(visited, depth, Limit::MaxPoints));
                    }
                }
            }
        }
        frontier_start = frontier_end;
        depth += 1;
    }
    Ok(OrbitExploration {
        verdict: StabilityVerdict::Stable {
            orbit_size: visited.len() as u64,
            witness: None,
        },
        visited,
        depth,
    })
}

pub fn orbit_closure(
    generators: &GeneratorSet,
    x: &SparsePoint,
    max_points: u64,
    max_depth: u64,
) -> Result<StabilityVerdict, DynamicsError> {
    explore_orbit(generators, x, max_points, max_depth).map(|e| e.verdict)
}

/// Re-applies every generator to every point and reports the first image
/// that falls outside `points`, if any.
pub fn audit_closure(
    generators: &GeneratorSet,
    points: &[SparsePoint],
) -> Result<Option<SparsePoint>, DynamicsError> {
    let set: HashSet<&SparsePoint> = points.iter().collect();
    for p in points {
        for g in generators.maps() {
            let image = g.apply(p)?;
            if !set.contains(&image) {
                return Ok(Some(image));
            }
        }
    }
    Ok(None)
}
