//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! A [`Polynomial`] is kept in canonical expanded form: a map from
//! [`Monomial`] to a nonzero [`BigInt`] coefficient. Two polynomials are
//! equal exactly when their term maps are equal. [`PolyExpr`] keeps a
//! polynomial in un-expanded sum/product shape for display, with all
//! semantics defined through [`PolyExpr::expand`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::dynamics::SparsePoint;

/// Label of a polynomial variable: a coordinate of `Z^N`, or one of the
/// nine local neighbourhood variables of a grid rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex(pub u64);

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl From<u64> for VarIndex {
    fn from(i: u64) -> Self {
        VarIndex(i)
    }
}

/// A product of variable powers. Entries are sorted by variable and never
/// carry a zero exponent; the empty monomial is the constant `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    powers: Vec<(VarIndex, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarIndex) -> Self {
        Monomial {
            powers: vec![(v, 1)],
        }
    }

    /// Builds a monomial from `(variable, exponent)` pairs in any order.
    /// Repeated variables are merged and zero exponents dropped.
    pub fn from_powers(powers: impl IntoIterator<Item = (VarIndex, u32)>) -> Self {
        let mut merged: BTreeMap<VarIndex, u32> = BTreeMap::new();
        for (v, e) in powers {
            *merged.entry(v).or_default() += e;
        }
        Monomial {
            powers: merged.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn powers(&self) -> &[(VarIndex, u32)] {
        &self.powers
    }

    pub fn is_constant(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.powers.iter().map(|&(_, e)| u64::from(e)).sum()
    }

    pub fn exponent(&self, v: VarIndex) -> u32 {
        self.powers
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            let (a, ea) = self.powers[i];
            let (b, eb) = other.powers[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.powers[i..]);
        out.extend_from_slice(&other.powers[j..]);
        Monomial { powers: out }
    }

    /// Graded order used for printing: higher total degree first, then
    /// the monomial with the larger exponent at the first differing
    /// variable (so `x0` precedes `x1`).
    fn display_cmp(&self, other: &Monomial) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.powers.get(i), other.powers.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Less,
                    (None, Some(_)) => return Ordering::Greater,
                    (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                        Ordering::Less => return Ordering::Less,
                        Ordering::Greater => return Ordering::Greater,
                        Ordering::Equal => match eb.cmp(&ea) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            ord => return ord,
                        },
                    },
                }
            }
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.powers.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse integer polynomial in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Polynomial::monomial(c, Monomial::one())
    }

    pub fn var(v: impl Into<VarIndex>) -> Self {
        Polynomial::monomial(1, Monomial::var(v.into()))
    }

    pub fn monomial(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c.into());
        p
    }

    /// Collects `(coefficient, monomial)` pairs, merging like terms.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (C, Monomial)>) -> Self {
        let mut p = Polynomial::zero();
        for (c, m) in terms {
            p.add_term(m, c.into());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Total degree; the zero polynomial has degree `None`.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Rebuilds the term map from scratch. On a well-formed value this is
    /// the identity.
    pub fn normalized(&self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (c.clone(), m.clone())))
    }

    /// Variables that occur with positive exponent in some term.
    pub fn support_vars(&self) -> BTreeSet<VarIndex> {
        self.terms
            .keys()
            .flat_map(|m| m.powers.iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluates at a finitely supported point; unlisted variables read 0.
    pub fn evaluate(&self, point: &SparsePoint) -> BigInt {
        self.evaluate_with(|v| point.get(v.0))
    }

    /// Evaluates with variable `i` bound to `values[i]`; variables past the
    /// end of the slice read 0.
    pub fn evaluate_slice(&self, values: &[BigInt]) -> BigInt {
        self.evaluate_with(|v| usize::try_from(v.0).ok().and_then(|i| values.get(i)))
    }

    /// Evaluates with a caller-supplied assignment; `None` means 0.
    ///
    /// Tries machine-width arithmetic first and falls back to big integers
    /// on the first overflow, so the result is always exact.
    pub fn evaluate_with<'a, F>(&self, lookup: F) -> BigInt
    where
        F: Fn(VarIndex) -> Option<&'a BigInt>,
    {
        match self.evaluate_small(&lookup) {
            Some(v) => BigInt::from(v),
            None => self.evaluate_big(&lookup),
        }
    }

    fn evaluate_small<'a, F>(&self, lookup: &F) -> Option<i128>
    where
        F: Fn(VarIndex) -> Option<&'a BigInt>,
    {
        let mut total: i128 = 0;
        'terms: for (m, c) in &self.terms {
            let mut term = i128::from(c.to_i64()?);
            for &(v, e) in &m.powers {
                let Some(value) = lookup(v) else {
                    continue 'terms;
                };
                if value.is_zero() {
                    continue 'terms;
                }
                let value = i128::from(value.to_i64()?);
                for _ in 0..e {
                    term = term.checked_mul(value)?;
                }
            }
            total = total.checked_add(term)?;
        }
        Some(total)
    }

    fn evaluate_big<'a, F>(&self, lookup: &F) -> BigInt
    where
        F: Fn(VarIndex) -> Option<&'a BigInt>,
    {
        let mut total = BigInt::zero();
        'terms: for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in &m.powers {
                match lookup(v) {
                    Some(value) if !value.is_zero() => term *= num_traits::pow(value.clone(), e as usize),
                    _ => continue 'terms,
                }
            }
            total += term;
        }
        total
    }

    /// Replaces each mapped variable by its image; unmapped variables stay.
    pub fn substitute(&self, subs: &BTreeMap<VarIndex, Polynomial>) -> Polynomial {
        if subs.is_empty() {
            return self.clone();
        }
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut term = Polynomial::constant(c.clone());
            for &(v, e) in &m.powers {
                match subs.get(&v) {
                    Some(image) => term = &term * &image.pow(e),
                    None => kept.push((v, e)),
                }
            }
            let kept = Polynomial::monomial(1, Monomial { powers: kept });
            out = &out + &(&term * &kept);
        }
        out
    }

    fn sorted_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.display_cmp(b.0));
        terms
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    /// `-1*x0^2*x1 + 3*x4 + 2`: every coefficient is written out, terms
    /// run from highest total degree down, and `0` is the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let magnitude = c.abs();
            match (k, c.is_negative()) {
                (0, false) => write!(f, "{magnitude}")?,
                (0, true) => write!(f, "-{magnitude}")?,
                (_, false) => write!(f, " + {magnitude}")?,
                (_, true) => write!(f, " - {magnitude}")?,
            }
            if !m.is_constant() {
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial parse error at byte {offset}: {message}")]
pub struct ParsePolyError {
    pub offset: usize,
    pub message: String,
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParsePolyError> {
        Err(ParsePolyError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<&'a str, ParsePolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        // ASCII digits only
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn factor(&mut self, coeff: &mut BigInt, powers: &mut Vec<(VarIndex, u32)>) -> Result<(), ParsePolyError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return self.err("expected variable index after 'x'");
                }
                let idx = self.digits()?;
                let idx: u64 = match idx.parse() {
                    Ok(i) => i,
                    Err(_) => return self.err("variable index out of range"),
                };
                let mut exp = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    exp = match self.digits()?.parse() {
                        Ok(e) => e,
                        Err(_) => return self.err("exponent out of range"),
                    };
                }
                powers.push((VarIndex(idx), exp));
                Ok(())
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits()?.parse().expect("digit string");
                *coeff *= n;
                Ok(())
            }
            _ => self.err("expected coefficient or variable"),
        }
    }

    fn parse(mut self) -> Result<Polynomial, ParsePolyError> {
        let mut out = Polynomial::zero();
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                None if first => return self.err("empty input"),
                None => break,
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(_) if first => {}
                Some(_) => return self.err("expected '+' or '-' between terms"),
            }
            if self.peek() == Some(b'-') {
                self.pos += 1;
                negative = !negative;
            }
            let mut coeff = BigInt::one();
            let mut powers = Vec::new();
            self.factor(&mut coeff, &mut powers)?;
            while self.peek() == Some(b'*') {
                self.pos += 1;
                self.factor(&mut coeff, &mut powers)?;
            }
            if negative {
                coeff = -coeff;
            }
            out.add_term(Monomial::from_powers(powers), coeff);
            first = false;
        }
        Ok(out)
    }
}

impl FromStr for Polynomial {
    type Err = ParsePolyError;

    /// Accepts the [`Display`](fmt::Display) format, plus bare variables
    /// without a coefficient and `+ -c` in place of `- c`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolyParser {
            src: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

/// A polynomial held as an un-expanded sum/product tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Leaf(Polynomial),
    Sum(Vec<PolyExpr>),
    Product(Vec<PolyExpr>),
}

impl PolyExpr {
    pub fn expand(&self) -> Polynomial {
        match self {
            PolyExpr::Leaf(p) => p.clone(),
            PolyExpr::Sum(parts) => parts
                .iter()
                .fold(Polynomial::zero(), |acc, e| acc + e.expand()),
            PolyExpr::Product(parts) => parts
                .iter()
                .fold(Polynomial::one(), |acc, e| &acc * &e.expand()),
        }
    }

    /// Evaluates the tree directly, without expanding it.
    pub fn evaluate_slice(&self, values: &[BigInt]) -> BigInt {
        match self {
            PolyExpr::Leaf(p) => p.evaluate_slice(values),
            PolyExpr::Sum(parts) => parts.iter().map(|e| e.evaluate_slice(values)).sum(),
            PolyExpr::Product(parts) => parts.iter().map(|e| e.evaluate_slice(values)).product(),
        }
    }

    /// Number of top-level summands (1 for a non-sum).
    pub fn summand_count(&self) -> usize {
        match self {
            PolyExpr::Sum(parts) => parts.len(),
            _ => 1,
        }
    }

    pub fn summands(&self) -> &[PolyExpr] {
        match self {
            PolyExpr::Sum(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    /// Number of top-level factors (1 for a non-product).
    pub fn factor_count(&self) -> usize {
        match self {
            PolyExpr::Product(parts) => parts.len(),
            _ => 1,
        }
    }

    pub fn factors(&self) -> &[PolyExpr] {
        match self {
            PolyExpr::Product(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyExpr::Leaf(p) => {
                let bare_var = p.term_count() == 1
                    && p.terms().all(|(m, c)| c.is_one() && !m.is_constant());
                if bare_var {
                    let (m, _) = p.terms().next().expect("one term");
                    write!(f, "{m}")
                } else {
                    write!(f, "{p}")
                }
            }
            PolyExpr::Sum(parts) => {
                if parts.is_empty() {
                    return write!(f, "0");
                }
                for (k, e) in parts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            PolyExpr::Product(parts) => {
                if parts.is_empty() {
                    return write!(f, "1");
                }
                for (k, e) in parts.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    let needs_parens = match e {
                        PolyExpr::Leaf(p) => p.term_count() > 1,
                        PolyExpr::Sum(parts) => parts.len() > 1,
                        PolyExpr::Product(_) => false,
                    };
                    if needs_parens {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
        }
    }
}
