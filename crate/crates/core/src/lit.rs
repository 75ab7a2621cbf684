//! Variables and literals in DIMACS numbering.

use std::fmt;
use std::num::NonZeroI32;
use std::ops::Not;

/// A propositional variable, 1-based as in DIMACS. Variable 0 does not exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics on 0 or on indices that do not fit a signed 32-bit literal.
    pub fn new(index: u32) -> Var {
        assert!(
            index != 0 && index <= i32::MAX as u32,
            "variable index out of range: {index}"
        );
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn positive(self) -> Lit {
        Lit::from_dimacs(self.0 as i32)
    }

    pub fn negative(self) -> Lit {
        Lit::from_dimacs(-(self.0 as i32))
    }

    /// The literal of this variable with the given polarity (`true` = positive).
    pub fn lit(self, polarity: bool) -> Lit {
        if polarity {
            self.positive()
        } else {
            self.negative()
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal: a variable or its negation, stored as a nonzero DIMACS integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit(NonZeroI32);

impl Lit {
    /// Panics if `value` is 0 or `i32::MIN`.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != i32::MIN, "literal out of range");
        Lit(NonZeroI32::new(value).expect("literal 0 is not a literal"))
    }

    /// Fallible counterpart of [`Lit::from_dimacs`].
    pub fn try_from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 || value.unsigned_abs() > i32::MAX as u64 {
            return None;
        }
        Some(Lit(NonZeroI32::new(value as i32)?))
    }

    pub fn to_dimacs(self) -> i32 {
        self.0.get()
    }

    pub fn var(self) -> Var {
        Var(self.0.get().unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0.get() > 0
    }

    pub fn is_negative(self) -> bool {
        self.0.get() < 0
    }

    /// Dense index for per-literal tables: `2 * var + (negative as usize)`.
    /// Indices 0 and 1 are never produced.
    pub fn code(self) -> usize {
        2 * self.var().index() as usize + self.is_negative() as usize
    }

    pub fn from_code(code: usize) -> Lit {
        let var = Var::new((code / 2) as u32);
        var.lit(code.is_multiple_of(2))
    }

    /// Sort key: by variable, positive before negative.
    pub fn sort_key(self) -> (u32, bool) {
        (self.var().index(), self.is_negative())
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building literal vectors from DIMACS integers.
pub fn lits(values: &[i32]) -> Vec<Lit> {
    values.iter().map(|&v| Lit::from_dimacs(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ordering_is_by_variable_then_sign() {
        let mut v = lits(&[3, -1, 2, 1]);
        v.sort();
        assert_eq!(v, lits(&[1, -1, 2, 3]));
    }

    #[test]
    #[should_panic]
    fn zero_is_rejected() {
        Lit::from_dimacs(0);
    }

    #[test]
    fn try_from_rejects_out_of_range() {
        assert!(Lit::try_from_dimacs(0).is_none());
        assert!(Lit::try_from_dimacs(1 << 40).is_none());
        assert_eq!(Lit::try_from_dimacs(-7), Some(Lit::from_dimacs(-7)));
    }

    proptest! {
        #[test]
        fn negation_is_an_involution(v in 1i32..1000, neg in any::<bool>()) {
            let l = Lit::from_dimacs(if neg { -v } else { v });
            prop_assert_eq!(!!l, l);
            prop_assert_eq!((!l).var(), l.var());
            prop_assert_eq!(l.var().index(), v as u32);
            prop_assert_eq!(Lit::from_code(l.code()), l);
        }
    }
}
