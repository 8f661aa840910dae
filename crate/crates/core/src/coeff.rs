//! Exact arithmetic in the base ring of Laurent polynomials in `q^{1/2}`
//! with integer coefficients, together with the bar involution `q ↦ q^{-1}`.
//!
//! Exponents are stored as integer counts of `q^{1/2}` units, so `q` itself
//! has stored exponent 2 and `q^{-1/2}` has stored exponent -1. This keeps
//! all arithmetic in integers; the formulas only ever produce half-integer
//! powers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent polynomial in `q^{1/2}` over the integers.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coefficient {
    /// half-exponent (units of `q^{1/2}`) -> nonzero integer coefficient
    terms: BTreeMap<i64, BigInt>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn one() -> Self {
        Coefficient::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !n.is_zero() {
            terms.insert(0, n);
        }
        Coefficient { terms }
    }

    /// `q^{half/2}`, i.e. the monomial with stored exponent `half`.
    pub fn q_half(half: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(half, BigInt::one());
        Coefficient { terms }
    }

    /// `c * q^{half/2}`.
    pub fn monomial(half: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half, c);
        }
        Coefficient { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Iterate over `(half-exponent, coefficient)` pairs in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff_at(&self, half: i64) -> BigInt {
        self.terms.get(&half).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Coefficient { terms }
    }

    pub fn neg(&self) -> Self {
        Coefficient {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let entry = terms.entry(e1 + e2).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Coefficient { terms }
    }

    /// Multiply by `q^{half/2}`.
    pub fn mul_q_half(&self, half: i64) -> Self {
        Coefficient {
            terms: self.terms.iter().map(|(e, c)| (e + half, c.clone())).collect(),
        }
    }

    /// The bar involution `q^{a} ↦ q^{-a}`.
    pub fn bar(&self) -> Self {
        Coefficient {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Membership in `𝗆 = q^{-1/2} ℤ[q^{-1/2}]`: every exponent strictly negative.
    pub fn in_mm(&self) -> bool {
        self.terms.keys().all(|e| *e <= -1)
    }

    /// Specialize `q^{1/2} ↦ 1`, the semiclassical limit of a coefficient.
    pub fn specialize_q_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// If this is exactly `q^{e/2}` for a single `e` with coefficient 1,
    /// return `e`.
    pub fn as_unit_q_power(&self) -> Option<i64> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if c.is_one() {
                return Some(*e);
            }
        }
        None
    }

    /// The part with strictly negative exponents (lies in `𝗆`).
    pub fn negative_part(&self) -> Self {
        Coefficient {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e < 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// True when `bar(self) = -self`; such an element has no constant term.
    pub fn is_bar_antisymmetric(&self) -> bool {
        self.bar() == self.neg()
    }

    /// Exact division in `ℤ[q^{±1/2}]`: returns `c` with `self = d * c`, if
    /// such a Laurent polynomial exists.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Coefficient::zero());
        }
        let (d_top_e, d_top_c) = d.terms.iter().next_back().unwrap();
        let d_low_e = d.terms.keys().next().unwrap();
        let low_bound = self.terms.keys().next().unwrap() - d_low_e;
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while !rem.is_zero() {
            let (r_top_e, r_top_c) = rem.terms.iter().next_back().unwrap();
            let e = r_top_e - d_top_e;
            if e < low_bound {
                return None;
            }
            let (c, r) = num_integer::div_rem(r_top_c.clone(), d_top_c.clone());
            if !r.is_zero() {
                return None;
            }
            rem = rem.sub(&d.mul(&Coefficient::monomial(e, c.clone())));
            quot.insert(e, c);
        }
        Some(Coefficient { terms: quot })
    }
}

impl fmt::Display for Coefficient {
    /// Canonical rendering: `c*q^(e/2)` terms sorted by exponent, constants
    /// and plain powers of `q` shortened.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if *e == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if e % 2 == 0 {
                    let p = e / 2;
                    if p == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{p}")?;
                    }
                } else {
                    write!(f, "q^({e}/2)")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(half: i64) -> Coefficient {
        Coefficient::q_half(half)
    }

    #[test]
    fn add_cancellation() {
        // (q^{1/2} + 1) + (-1) = q^{1/2}
        let a = q(1).add(&Coefficient::one());
        let b = Coefficient::from_int(-1);
        assert_eq!(a.add(&b), q(1));
    }

    #[test]
    fn add_identity_and_doubling() {
        let z = q(3).add(&Coefficient::from_int(7));
        assert_eq!(Coefficient::zero().add(&z), z);
        assert_eq!(q(2).add(&q(2)), Coefficient::monomial(2, BigInt::from(2)));
    }

    #[test]
    fn mul_examples() {
        // q^{1/2} * q^{1/2} = q
        assert_eq!(q(1).mul(&q(1)), q(2));
        // (q - q^{-1})(q + q^{-1}) = q^2 - q^{-2}
        let a = q(2).sub(&q(-2));
        let b = q(2).add(&q(-2));
        assert_eq!(a.mul(&b), q(4).sub(&q(-4)));
        assert_eq!(a.mul(&Coefficient::zero()), Coefficient::zero());
    }

    #[test]
    fn bar_examples() {
        let z = q(1).add(&Coefficient::from_int(2));
        assert_eq!(z.bar(), q(-1).add(&Coefficient::from_int(2)));
        assert_eq!(z.bar().bar(), z);
        assert_eq!(Coefficient::from_int(3).bar(), Coefficient::from_int(3));
    }

    #[test]
    fn mm_membership() {
        assert!(q(-1).add(&q(-2)).in_mm());
        assert!(!Coefficient::one().in_mm());
        assert!(Coefficient::zero().in_mm());
    }

    #[test]
    fn bar_is_ring_involution() {
        // deterministic pseudo-random sample
        let mut vals = vec![];
        let mut s = 1u64;
        for _ in 0..24 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let e = (s >> 33) as i64 % 5 - 2;
            let c = (s >> 11) as i64 % 7 - 3;
            vals.push(Coefficient::monomial(e, BigInt::from(c)).add(&q((s % 5) as i64 - 2)));
        }
        for a in &vals {
            for b in &vals {
                assert_eq!(a.mul(b).bar(), a.bar().mul(&b.bar()));
                assert_eq!(a.add(b).bar(), a.bar().add(&b.bar()));
            }
            assert_eq!(a.bar().bar(), *a);
        }
    }

    #[test]
    fn specialization_is_ring_hom() {
        let a = q(1).add(&Coefficient::from_int(-2));
        let b = q(-3).add(&q(2));
        assert_eq!(
            a.mul(&b).specialize_q_one(),
            a.specialize_q_one() * b.specialize_q_one()
        );
        assert_eq!(
            a.add(&b).specialize_q_one(),
            a.specialize_q_one() + b.specialize_q_one()
        );
    }

    #[test]
    fn exact_div_roundtrip_and_failure() {
        let d = q(2).add(&Coefficient::one()); // q + 1
        let c = q(-2).add(&q(3));
        let a = d.mul(&c);
        assert_eq!(a.exact_div(&d), Some(c));
        // q is not divisible by q + 1
        assert_eq!(q(2).exact_div(&d), None);
        // 2 is not divisible by 3 over the integers
        assert_eq!(
            Coefficient::from_int(2).exact_div(&Coefficient::from_int(3)),
            None
        );
    }

    #[test]
    fn display_canonical() {
        let z = q(1).add(&Coefficient::from_int(2)).add(&q(-4).neg());
        assert_eq!(format!("{z}"), "-q^-2 + 2 + q^(1/2)");
        assert_eq!(format!("{}", Coefficient::zero()), "0");
    }
}
