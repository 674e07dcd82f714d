//! Finitely supported points of `Z^N` and finitely described polynomial
//! maps acting on them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::lifepoly::PairingSpec;
use crate::polymap::{Polynomial, VarIndex};

/// Offsets `(dx, dy)` of the nine local variables of a grid rule, in
/// variable order: centre, then the eight neighbours row by row
/// (NW, N, NE, W, E, SW, S, SE). `y` grows downward.
pub const NEIGHBORHOOD: [(i64, i64); 9] = [
    (0, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("coordinate {index} is not in the image of the {pairing} pairing")]
    MalformedPoint { index: u64, pairing: &'static str },
    #[error("cell ({a}, {b}) has no coordinate under the {pairing} pairing")]
    CoordinateOverflow { a: u64, b: u64, pairing: &'static str },
    #[error("grid rule does not vanish at the all-zero neighbourhood (value {value})")]
    NonzeroAtZero { value: BigInt },
    #[error("grid rule uses variable {var}, outside the nine local variables")]
    RuleVariableOutOfRange { var: VarIndex },
}

/// Point of `Z^N` with finitely many nonzero coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SparsePoint {
    entries: BTreeMap<u64, BigInt>,
}

impl SparsePoint {
    pub fn new() -> Self {
        SparsePoint::default()
    }

    /// Builds a point from `(index, value)` pairs; zero values are dropped
    /// and later pairs overwrite earlier ones.
    pub fn from_entries<V: Into<BigInt>>(entries: impl IntoIterator<Item = (u64, V)>) -> Self {
        let mut p = SparsePoint::new();
        for (i, v) in entries {
            p.set(i, v.into());
        }
        p
    }

    pub fn get(&self, index: u64) -> Option<&BigInt> {
        self.entries.get(&index)
    }

    /// Value at `index`, 0 if unset.
    pub fn value(&self, index: u64) -> BigInt {
        self.entries.get(&index).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, index: u64, value: BigInt) {
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of nonzero coordinates.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.entries.iter().map(|(&i, v)| (i, v))
    }
}

impl fmt::Display for SparsePoint {
    /// `0:1 5:-3 12:7`, indices increasing; the zero point prints empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}:{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParsePointError {
    #[error("token {token:?} is not of the form index:value")]
    BadToken { token: String },
    #[error("index {index} appears more than once")]
    Duplicate { index: u64 },
    #[error("index {index} has an explicit zero value")]
    ZeroValue { index: u64 },
}

impl FromStr for SparsePoint {
    type Err = ParsePointError;

    /// Whitespace-separated `index:value` tokens; `#` comments to end of line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = BTreeMap::new();
        let tokens = s
            .lines()
            .flat_map(|l| l.split('#').next().unwrap_or("").split_whitespace());
        for token in tokens {
            let bad = || ParsePointError::BadToken {
                token: token.to_string(),
            };
            let (idx, val) = token.split_once(':').ok_or_else(bad)?;
            let index: u64 = idx.parse().map_err(|_| bad())?;
            let value: BigInt = val.parse().map_err(|_| bad())?;
            if value.is_zero() {
                return Err(ParsePointError::ZeroValue { index });
            }
            if entries.insert(index, value).is_some() {
                return Err(ParsePointError::Duplicate { index });
            }
        }
        Ok(SparsePoint { entries })
    }
}

/// Polynomial map with finitely many non-identity components; every other
/// coordinate is the projection `x_i ↦ x_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteComponentMap {
    components: BTreeMap<u64, Polynomial>,
}

impl FiniteComponentMap {
    pub fn identity() -> Self {
        FiniteComponentMap::default()
    }

    pub fn new(components: impl IntoIterator<Item = (u64, Polynomial)>) -> Self {
        FiniteComponentMap {
            components: components.into_iter().collect(),
        }
    }

    pub fn components(&self) -> &BTreeMap<u64, Polynomial> {
        &self.components
    }

    pub fn component(&self, index: u64) -> Polynomial {
        self.components
            .get(&index)
            .cloned()
            .unwrap_or_else(|| Polynomial::var(index))
    }

    pub fn apply(&self, x: &SparsePoint) -> SparsePoint {
        let mut out = x.clone();
        for (&i, p) in &self.components {
            out.set(i, p.evaluate(x));
        }
        out
    }

    /// `self ∘ inner`, computed symbolically: applying the result once
    /// equals applying `inner` and then `self`.
    pub fn compose(&self, inner: &FiniteComponentMap) -> FiniteComponentMap {
        let subs: BTreeMap<VarIndex, Polynomial> = inner
            .components
            .iter()
            .map(|(&i, p)| (VarIndex(i), p.clone()))
            .collect();
        let mut components: BTreeMap<u64, Polynomial> = inner.components.clone();
        for (&i, p) in &self.components {
            components.insert(i, p.substitute(&subs));
        }
        FiniteComponentMap { components }
    }
}

impl fmt::Display for FiniteComponentMap {
    /// One `index: polynomial` line per non-identity component.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in &self.components {
            writeln!(f, "{i}: {p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseMapError {
    #[error("line {line}: expected `index: polynomial`")]
    BadLine { line: usize },
    #[error("line {line}: {source}")]
    Polynomial {
        line: usize,
        source: crate::polymap::ParsePolyError,
    },
    #[error("line {line}: component {index} defined twice")]
    Duplicate { line: usize, index: u64 },
}

impl FromStr for FiniteComponentMap {
    type Err = ParseMapError;

    /// Lines of `index: polynomial`; blank lines and `#` comments skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut components = BTreeMap::new();
        for (n, raw) in s.lines().enumerate() {
            let line = n + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (idx, poly) = text.split_once(':').ok_or(ParseMapError::BadLine { line })?;
            let index: u64 = idx.trim().parse().map_err(|_| ParseMapError::BadLine { line })?;
            let poly: Polynomial = poly
                .parse()
                .map_err(|source| ParseMapError::Polynomial { line, source })?;
            if components.insert(index, poly).is_some() {
                return Err(ParseMapError::Duplicate { line, index });
            }
        }
        Ok(FiniteComponentMap { components })
    }
}

/// Shift-invariant local rule on `N²`, lifted to `Z^N` through a pairing.
///
/// Every cell's new value is the rule evaluated on its 3×3 neighbourhood
/// (variables ordered as in [`NEIGHBORHOOD`]); neighbours with a negative
/// coordinate read 0. Because the rule vanishes on the all-zero
/// neighbourhood, only cells within Chebyshev distance 1 of the support
/// can become nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRuleMap {
    rule: Polynomial,
    pairing: PairingSpec,
    // the rule with machine-width coefficients, when they all fit
    small_rule: Option<Vec<SmallTerm>>,
}

impl GridRuleMap {
    pub fn new(rule: Polynomial, pairing: PairingSpec) -> Result<Self, DynamicsError> {
        if let Some(&var) = rule.support_vars().iter().find(|v| v.0 >= 9) {
            return Err(DynamicsError::RuleVariableOutOfRange { var });
        }
        let at_zero = rule.evaluate(&SparsePoint::new());
        if !at_zero.is_zero() {
            return Err(DynamicsError::NonzeroAtZero { value: at_zero });
        }
        let small_rule = rule
            .terms()
            .map(|(m, c)| {
                let powers = m.powers().iter().map(|&(v, e)| (v.0 as usize, e)).collect();
                c.to_i64().map(|c| (c, powers))
            })
            .collect();
        Ok(GridRuleMap {
            rule,
            pairing,
            small_rule,
        })
    }

    fn evaluate_local(&self, local: &[Option<&BigInt>; 9]) -> BigInt {
        if let Some(terms) = &self.small_rule {
            let mut values = [0i64; 9];
            let fits = local.iter().zip(values.iter_mut()).all(|(v, slot)| match v {
                None => true,
                Some(b) => b.to_i64().map(|x| *slot = x).is_some(),
            });
            if fits {
                if let Some(v) = evaluate_small_terms(terms, &values) {
                    return BigInt::from(v);
                }
            }
        }
        self.rule.evaluate_with(|v| local[v.0 as usize])
    }

    pub fn rule(&self) -> &Polynomial {
        &self.rule
    }

    pub fn pairing(&self) -> PairingSpec {
        self.pairing
    }

    /// Support of `x` as grid cells.
    pub fn cells_of(&self, x: &SparsePoint) -> Result<Vec<(u64, u64)>, DynamicsError> {
        x.support()
            .map(|index| {
                self.pairing.cell_of(index).ok_or(DynamicsError::MalformedPoint {
                    index,
                    pairing: self.pairing.name(),
                })
            })
            .collect()
    }

    pub fn apply(&self, x: &SparsePoint) -> Result<SparsePoint, DynamicsError> {
        let mut grid: HashMap<(u64, u64), &BigInt> = HashMap::with_capacity(x.len());
        for (index, value) in x.iter() {
            let cell = self.pairing.cell_of(index).ok_or(DynamicsError::MalformedPoint {
                index,
                pairing: self.pairing.name(),
            })?;
            grid.insert(cell, value);
        }
        let mut candidates = BTreeSet::new();
        for &(a, b) in grid.keys() {
            for (dx, dy) in NEIGHBORHOOD {
                if let (Some(ca), Some(cb)) = (a.checked_add_signed(dx), b.checked_add_signed(dy)) {
                    candidates.insert((ca, cb));
                }
            }
        }
        let mut out = SparsePoint::new();
        for (a, b) in candidates {
            let mut local: [Option<&BigInt>; 9] = [None; 9];
            for (slot, (dx, dy)) in local.iter_mut().zip(NEIGHBORHOOD) {
                if let (Some(na), Some(nb)) = (a.checked_add_signed(dx), b.checked_add_signed(dy)) {
                    *slot = grid.get(&(na, nb)).copied();
                }
            }
            let value = self.evaluate_local(&local);
            if !value.is_zero() {
                let index = self.pairing.pair(a, b).ok_or(DynamicsError::CoordinateOverflow {
                    a,
                    b,
                    pairing: self.pairing.name(),
                })?;
                out.set(index, value);
            }
        }
        Ok(out)
    }
}

/// Coefficient and `(local variable, exponent)` pairs.
type SmallTerm = (i64, Vec<(usize, u32)>);

fn evaluate_small_terms(terms: &[SmallTerm], values: &[i64; 9]) -> Option<i128> {
    let mut total: i128 = 0;
    'terms: for (c, powers) in terms {
        let mut term = i128::from(*c);
        for &(v, e) in powers {
            let x = values[v];
            if x == 0 {
                continue 'terms;
            }
            for _ in 0..e {
                term = term.checked_mul(i128::from(x))?;
            }
        }
        total = total.checked_add(term)?;
    }
    Some(total)
}

/// Finite description of a polynomial map on `Z^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyMapDesc {
    Components(FiniteComponentMap),
    Grid(GridRuleMap),
}

impl PolyMapDesc {
    pub fn apply(&self, x: &SparsePoint) -> Result<SparsePoint, DynamicsError> {
        match self {
            PolyMapDesc::Components(m) => Ok(m.apply(x)),
            PolyMapDesc::Grid(m) => m.apply(x),
        }
    }

    /// `n`-fold application; `n = 0` returns `x`.
    pub fn iterate(&self, x: &SparsePoint, n: u64) -> Result<SparsePoint, DynamicsError> {
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }
}

impl From<FiniteComponentMap> for PolyMapDesc {
    fn from(m: FiniteComponentMap) -> Self {
        PolyMapDesc::Components(m)
    }
}

impl From<GridRuleMap> for PolyMapDesc {
    fn from(m: GridRuleMap) -> Self {
        PolyMapDesc::Grid(m)
    }
}
