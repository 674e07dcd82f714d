//! Bijections between grid cells `N²` and coordinates `N`.

use std::fmt;

/// Cantor pairing `(a + b)(a + b + 1)/2 + b`. `None` when the result does
/// not fit in a `u64`.
pub fn pair(a: u64, b: u64) -> Option<u64> {
    let w = a.checked_add(b)?;
    let w = u128::from(w);
    let tri = w * (w + 1) / 2;
    u64::try_from(tri + u128::from(b)).ok()
}

/// Exact inverse of [`pair`]; total on `u64`.
pub fn unpair(n: u64) -> (u64, u64) {
    let n = u128::from(n);
    let w = ((8 * n + 1).isqrt() - 1) / 2;
    let b = n - w * (w + 1) / 2;
    let a = w - b;
    // both are bounded by w, which is below 2^33
    (a as u64, b as u64)
}

/// A named bijection between `N²` and (a subset of) `N`.
///
/// `forward` may fail on overflow or for cells outside its domain; indices
/// outside the image of `forward` are detected by the round trip
/// `forward(inverse(n)) == Some(n)`.
#[derive(Clone, Copy)]
pub struct PairingSpec {
    name: &'static str,
    forward: fn(u64, u64) -> Option<u64>,
    inverse: fn(u64) -> (u64, u64),
}

impl PairingSpec {
    pub const CANTOR: PairingSpec = PairingSpec {
        name: "cantor",
        forward: pair,
        inverse: unpair,
    };

    pub const fn new(
        name: &'static str,
        forward: fn(u64, u64) -> Option<u64>,
        inverse: fn(u64) -> (u64, u64),
    ) -> Self {
        PairingSpec {
            name,
            forward,
            inverse,
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn pair(&self, a: u64, b: u64) -> Option<u64> {
        (self.forward)(a, b)
    }

    pub fn unpair(&self, n: u64) -> (u64, u64) {
        (self.inverse)(n)
    }

    /// The cell `n` encodes, if `n` is in the image of the pairing.
    pub fn cell_of(&self, n: u64) -> Option<(u64, u64)> {
        let (a, b) = self.unpair(n);
        (self.pair(a, b) == Some(n)).then_some((a, b))
    }
}

impl fmt::Debug for PairingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PairingSpec").field("name", &self.name).finish()
    }
}

impl PartialEq for PairingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for PairingSpec {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn base_values() {
        assert_eq!(pair(0, 0), Some(0));
        assert_eq!(pair(1, 0), Some(1));
        assert_eq!(pair(0, 1), Some(2));
        assert_eq!(pair(2, 0), Some(3));
        assert_eq!(unpair(0), (0, 0));
        assert_eq!(unpair(2), (0, 1));
    }

    #[test]
    fn first_diagonals_enumerate_in_order() {
        let mut n = 0;
        for w in 0..40u64 {
            for b in 0..=w {
                assert_eq!(pair(w - b, b), Some(n));
                assert_eq!(unpair(n), (w - b, b));
                n += 1;
            }
        }
    }

    #[test]
    fn extremes() {
        assert_eq!(pair(u64::MAX, 1), None);
        assert_eq!(pair(u64::MAX / 2, u64::MAX / 2), None);
        let (a, b) = unpair(u64::MAX);
        assert_eq!(pair(a, b), Some(u64::MAX));
        assert_eq!(PairingSpec::CANTOR.cell_of(u64::MAX), Some((a, b)));
    }

    proptest! {
        #[test]
        fn unpair_inverts_pair(a in 0u64..1 << 31, b in 0u64..1 << 31) {
            let n = pair(a, b).unwrap();
            prop_assert_eq!(unpair(n), (a, b));
        }

        #[test]
        fn pair_inverts_unpair(n in any::<u64>()) {
            let (a, b) = unpair(n);
            prop_assert_eq!(pair(a, b), Some(n));
        }
    }
}
