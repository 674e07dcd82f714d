//! The Game of Life written as a polynomial map on `Z^N`.
//!
//! Each 3×3 neighbourhood pattern gets an indicator polynomial, a product
//! of nine factors `x_i` or `1 - x_i`. Summing the indicators of the 140
//! patterns whose centre is alive one generation later gives the local
//! rule. Lifting that rule to every cell of `N²` and flattening `N²` onto
//! `N` with the Cantor pairing gives the global map `φ`.
//!
//! Variable order is centre first, then NW, N, NE, W, E, SW, S, SE (see
//! [`crate::dynamics::NEIGHBORHOOD`]).

pub mod pairing;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamics::{GridRuleMap, PolyMapDesc, SparsePoint};
use crate::life::{Cell, LifeConfig};
use crate::polymap::{PolyExpr, Polynomial};

pub use pairing::{pair, unpair, PairingSpec};

/// Number of neighbourhood patterns whose centre is alive next generation:
/// C(8,3) births plus C(8,2) + C(8,3) survivals.
pub const LIVE_PATTERN_COUNT: usize = 140;

/// A 0/1 assignment to the nine neighbourhood variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern9 {
    bits: [u8; 9],
}

impl Pattern9 {
    pub fn new(bits: [u8; 9]) -> Option<Self> {
        bits.iter().all(|&b| b <= 1).then_some(Pattern9 { bits })
    }

    /// Pattern whose variable `i` is bit `i` of `index` (`index < 512`).
    pub fn from_index(index: u16) -> Self {
        assert!(index < 512, "pattern index {index} out of range");
        let mut bits = [0u8; 9];
        for (i, b) in bits.iter_mut().enumerate() {
            *b = ((index >> i) & 1) as u8;
        }
        Pattern9 { bits }
    }

    /// All 512 patterns, in `from_index` order.
    pub fn all() -> impl Iterator<Item = Pattern9> {
        (0..512).map(Pattern9::from_index)
    }

    pub fn bits(&self) -> [u8; 9] {
        self.bits
    }

    pub fn center_alive(&self) -> bool {
        self.bits[0] == 1
    }

    pub fn live_neighbors(&self) -> u8 {
        self.bits[1..].iter().sum()
    }

    /// Centre state one generation later.
    pub fn next_center_alive(&self) -> bool {
        matches!(
            (self.center_alive(), self.live_neighbors()),
            (false, 3) | (true, 2 | 3)
        )
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.bits.iter().map(|&b| BigInt::from(b)).collect()
    }
}

/// Indicator of `p` as an un-expanded product of nine affine factors.
pub fn pattern_factors(p: Pattern9) -> PolyExpr {
    PolyExpr::Product(
        p.bits
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let x = Polynomial::var(i as u64);
                PolyExpr::Leaf(if b == 1 { x } else { &Polynomial::one() - &x })
            })
            .collect(),
    )
}

/// Expanded indicator polynomial: 1 on `p`, 0 on every other 0/1 input.
pub fn pattern_term(p: Pattern9) -> Polynomial {
    pattern_factors(p).expand()
}

/// The Life update rule as a polynomial in nine variables, held both as the
/// 140-summand pattern sum and in expanded canonical form.
#[derive(Clone, Debug)]
pub struct LocalRule {
    unexpanded: PolyExpr,
    expanded: Polynomial,
}

impl LocalRule {
    pub fn unexpanded(&self) -> &PolyExpr {
        &self.unexpanded
    }

    pub fn expanded(&self) -> &Polynomial {
        &self.expanded
    }

    /// Patterns whose indicators make up the sum, in summand order.
    pub fn live_patterns() -> impl Iterator<Item = Pattern9> {
        Pattern9::all().filter(Pattern9::next_center_alive)
    }
}

/// Builds the rule from scratch. Panics if the expanded and un-expanded
/// forms disagree on some 0/1 input, which would be a bug here.
pub fn build_local_rule() -> LocalRule {
    let unexpanded = PolyExpr::Sum(LocalRule::live_patterns().map(pattern_factors).collect());
    let expanded = unexpanded.expand();
    for p in Pattern9::all() {
        let v = p.values();
        assert_eq!(
            unexpanded.evaluate_slice(&v),
            expanded.evaluate_slice(&v),
            "rule forms disagree on {p:?}"
        );
    }
    LocalRule {
        unexpanded,
        expanded,
    }
}

/// Shared instance of [`build_local_rule`].
pub fn local_rule() -> &'static LocalRule {
    static RULE: OnceLock<LocalRule> = OnceLock::new();
    RULE.get_or_init(build_local_rule)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("live cell ({x}, {y}) lies outside the non-negative quadrant")]
    OutOfQuadrant { x: i64, y: i64 },
    #[error("live cell ({x}, {y}) has no coordinate under the pairing")]
    CoordinateOverflow { x: i64, y: i64 },
    #[error("coordinate {index} holds {value}, not a Life configuration (values must be 1)")]
    NotAConfiguration { index: u64, value: BigInt },
    #[error("coordinate {index} is not in the image of the pairing")]
    NotInImage { index: u64 },
    #[error("cell ({a}, {b}) does not fit in signed 64-bit lattice coordinates")]
    CellOutOfRange { a: u64, b: u64 },
}

/// Sets coordinate `pair(x, y)` to 1 for each live cell `(x, y)`.
pub fn encode(c: &LifeConfig) -> Result<SparsePoint, EncodeError> {
    encode_with(c, PairingSpec::CANTOR)
}

pub fn encode_with(c: &LifeConfig, pairing: PairingSpec) -> Result<SparsePoint, EncodeError> {
    let mut out = SparsePoint::new();
    for Cell { x, y } in c.cells() {
        let (Ok(a), Ok(b)) = (u64::try_from(x), u64::try_from(y)) else {
            return Err(EncodeError::OutOfQuadrant { x, y });
        };
        let index = pairing
            .pair(a, b)
            .ok_or(EncodeError::CoordinateOverflow { x, y })?;
        out.set(index, BigInt::one());
    }
    Ok(out)
}

/// Inverse of [`encode`]; every stored value must be 1.
pub fn decode(x: &SparsePoint) -> Result<LifeConfig, EncodeError> {
    decode_with(x, PairingSpec::CANTOR)
}

pub fn decode_with(x: &SparsePoint, pairing: PairingSpec) -> Result<LifeConfig, EncodeError> {
    let mut out = LifeConfig::empty();
    for (index, value) in x.iter() {
        if !value.is_one() {
            return Err(EncodeError::NotAConfiguration {
                index,
                value: value.clone(),
            });
        }
        let (a, b) = pairing.cell_of(index).ok_or(EncodeError::NotInImage { index })?;
        let (Ok(cx), Ok(cy)) = (i64::try_from(a), i64::try_from(b)) else {
            return Err(EncodeError::CellOutOfRange { a, b });
        };
        out.insert(Cell::new(cx, cy));
    }
    Ok(out)
}

/// The local rule lifted to `N²` through the Cantor pairing.
pub fn gol_grid_map() -> GridRuleMap {
    GridRuleMap::new(local_rule().expanded().clone(), PairingSpec::CANTOR)
        .expect("the Life rule vanishes on the all-dead neighbourhood")
}

/// `φ`: one Life generation acting on encoded configurations.
pub fn build_gol_map() -> PolyMapDesc {
    PolyMapDesc::Grid(gol_grid_map())
}

/// True when `c` sits at coordinates `>= 1` and its successor stays in
/// the quadrant, so the quadrant boundary cannot affect the next step.
pub fn quadrant_safe(c: &LifeConfig) -> bool {
    c.cells().all(|cell| cell.x >= 1 && cell.y >= 1)
        && c.step().cells().all(|cell| cell.x >= 0 && cell.y >= 0)
}

/// `size × size` random soup with its top-left cell at `(1, 1)`, each cell
/// alive with probability `density`.
pub fn random_soup<R: Rng>(rng: &mut R, size: u32, density: f64) -> LifeConfig {
    let size = i64::from(size);
    (1..=size)
        .flat_map(|y| (1..=size).map(move |x| Cell::new(x, y)))
        .filter(|_| rng.gen_bool(density))
        .collect()
}

/// Outcome of running random soups through both Life implementations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCheck {
    pub trials: u64,
    pub failures: u64,
    /// Trial index of the first disagreement.
    pub first_failure: Option<u64>,
}

/// For `trials` seeded soups, compares `decode(map(encode(c)))` with the
/// plane engine's `c.step()`. A soup whose image does not decode counts as
/// a failure.
pub fn check_commuting_square(
    map: &GridRuleMap,
    trials: u64,
    size: u32,
    density: f64,
    seed: u64,
) -> SquareCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut first_failure = None;
    for t in 0..trials {
        let soup = random_soup(&mut rng, size, density);
        debug_assert!(quadrant_safe(&soup));
        let agrees = encode_with(&soup, map.pairing())
            .ok()
            .and_then(|x| map.apply(&x).ok())
            .and_then(|y| decode_with(&y, map.pairing()).ok())
            .is_some_and(|next| next == soup.step());
        if !agrees {
            failures += 1;
            first_failure.get_or_insert(t);
        }
    }
    SquareCheck {
        trials,
        failures,
        first_failure,
    }
}
