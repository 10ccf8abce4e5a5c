//! Exact Laurent polynomials in `q` with arbitrary-precision integer
//! coefficients, i.e. the scalar ring `Z[q, q^-1]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("cannot evaluate a Laurent polynomial at q = 0")]
    ZeroEvaluation,
}

/// A Laurent polynomial. Zero coefficients are never stored, so the zero
/// polynomial is the empty map and equal values have identical maps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentCoeff {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentCoeff {
    /// `c * q^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentCoeff { terms }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn q_inv() -> Self {
        Self::monomial(1, -1)
    }

    /// `q^exp`.
    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    /// Builds from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = LaurentCoeff::zero();
        for (e, c) in terms {
            out.add_term(e, c.into());
        }
        out
    }

    /// Iterates `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    pub fn coefficient(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentCoeff {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The specialization `q = 1`: sum of all coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact value at a nonzero rational `q`.
    pub fn eval_at_rational(&self, q: &BigRational) -> Result<BigRational, CoeffError> {
        if q.is_zero() {
            return Err(CoeffError::ZeroEvaluation);
        }
        Ok(self
            .terms
            .iter()
            .map(|(&e, c)| BigRational::from_integer(c.clone()) * Pow::pow(q, e as i32))
            .fold(BigRational::zero(), |acc, t| acc + t))
    }
}

impl Zero for LaurentCoeff {
    fn zero() -> Self {
        LaurentCoeff::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentCoeff {
    fn one() -> Self {
        LaurentCoeff::constant(1)
    }
}

impl From<i64> for LaurentCoeff {
    fn from(c: i64) -> Self {
        LaurentCoeff::constant(c)
    }
}

impl From<BigInt> for LaurentCoeff {
    fn from(c: BigInt) -> Self {
        LaurentCoeff::constant(c)
    }
}

impl AddAssign<&LaurentCoeff> for LaurentCoeff {
    fn add_assign(&mut self, rhs: &LaurentCoeff) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl Add<&LaurentCoeff> for &LaurentCoeff {
    type Output = LaurentCoeff;
    fn add(self, rhs: &LaurentCoeff) -> LaurentCoeff {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentCoeff {
    type Output = LaurentCoeff;
    fn add(mut self, rhs: LaurentCoeff) -> LaurentCoeff {
        self += &rhs;
        self
    }
}

impl Neg for &LaurentCoeff {
    type Output = LaurentCoeff;
    fn neg(self) -> LaurentCoeff {
        LaurentCoeff {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentCoeff {
    type Output = LaurentCoeff;
    fn neg(mut self) -> LaurentCoeff {
        self.terms.values_mut().for_each(|c| *c = -std::mem::take(c));
        self
    }
}

impl Sub<&LaurentCoeff> for &LaurentCoeff {
    type Output = LaurentCoeff;
    fn sub(self, rhs: &LaurentCoeff) -> LaurentCoeff {
        self + &(-rhs)
    }
}

impl Sub for LaurentCoeff {
    type Output = LaurentCoeff;
    fn sub(self, rhs: LaurentCoeff) -> LaurentCoeff {
        &self - &rhs
    }
}

impl Mul<&LaurentCoeff> for &LaurentCoeff {
    type Output = LaurentCoeff;
    fn mul(self, rhs: &LaurentCoeff) -> LaurentCoeff {
        let mut out = LaurentCoeff::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentCoeff {
    type Output = LaurentCoeff;
    fn mul(self, rhs: LaurentCoeff) -> LaurentCoeff {
        &self * &rhs
    }
}

/// Terms in increasing exponent, e.g. `-2*q^-1 + 3 + q^2`.
impl fmt::Display for LaurentCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&e, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                write_monomial(f, c, e)?;
            } else if c.is_negative() {
                write!(f, " - ")?;
                write_monomial(f, &-c, e)?;
            } else {
                write!(f, " + ")?;
                write_monomial(f, c, e)?;
            }
        }
        Ok(())
    }
}

/// Writes `c*q^e` in the expression-language coefficient syntax.
pub(crate) fn write_monomial(f: &mut impl fmt::Write, c: &BigInt, e: i64) -> fmt::Result {
    match e {
        0 => write!(f, "{c}"),
        _ => {
            if c.is_one() {
            } else if *c == -BigInt::one() {
                write!(f, "-")?;
            } else {
                write!(f, "{c}*")?;
            }
            if e == 1 {
                write!(f, "q")
            } else {
                write!(f, "q^{e}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn lc(terms: &[(i64, i64)]) -> LaurentCoeff {
        LaurentCoeff::from_terms(terms.iter().copied())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn addition_examples() {
        assert!((LaurentCoeff::q() + -LaurentCoeff::q()).is_zero());
        assert_eq!(LaurentCoeff::q_inv() + LaurentCoeff::q_inv(), lc(&[(-1, 2)]));
        assert_eq!(lc(&[(1, 1), (-1, -1)]) + LaurentCoeff::q_inv(), LaurentCoeff::q());
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(LaurentCoeff::q() * LaurentCoeff::q_inv(), LaurentCoeff::one());
        assert!((LaurentCoeff::zero() * lc(&[(3, 5), (-2, 1)])).is_zero());
        assert_eq!(lc(&[(0, 1), (1, 1)]) * lc(&[(0, 1), (1, -1)]), lc(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(lc(&[(1, 1), (-1, -1)]).eval_at_one(), BigInt::from(0));
        assert_eq!(LaurentCoeff::constant(3).eval_at_one(), BigInt::from(3));
        assert_eq!(lc(&[(2, 1), (-1, 2)]).eval_at_one(), BigInt::from(3));
        assert_eq!(LaurentCoeff::q_inv().eval_at_rational(&rat(2, 1)).unwrap(), rat(1, 2));
        let zero = &LaurentCoeff::q() - &LaurentCoeff::q();
        assert_eq!(zero.eval_at_rational(&rat(7, 3)).unwrap(), rat(0, 1));
        assert_eq!(LaurentCoeff::q_pow(2).eval_at_rational(&rat(3, 2)).unwrap(), rat(9, 4));
        assert_eq!(
            LaurentCoeff::q().eval_at_rational(&rat(0, 1)),
            Err(CoeffError::ZeroEvaluation)
        );
    }

    #[test]
    fn display() {
        assert_eq!(LaurentCoeff::zero().to_string(), "0");
        assert_eq!(lc(&[(-1, -2)]).to_string(), "-2*q^-1");
        assert_eq!(lc(&[(2, 1)]).to_string(), "q^2");
        assert_eq!(lc(&[(0, 3)]).to_string(), "3");
        assert_eq!(lc(&[(-1, -1), (0, 3), (1, -1)]).to_string(), "-q^-1 + 3 - q");
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let mut x = lc(&[(0, 3), (1, 1)]);
        for _ in 0..7 {
            x = &x * &x;
        }
        // (3 + q)^128 at q = 1 is 4^128
        assert_eq!(x.eval_at_one(), BigInt::from(4).pow(128u32));
    }

    fn arb_coeff() -> impl Strategy<Value = LaurentCoeff> {
        prop::collection::vec((-4i64..=4, -6i64..=6), 0..5).prop_map(LaurentCoeff::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_coeff(), b in arb_coeff(), c in arb_coeff()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &LaurentCoeff::one(), a.clone());
            prop_assert_eq!(&a + &LaurentCoeff::zero(), a.clone());
            prop_assert!((&a + &(-&a)).terms.is_empty());
        }

        #[test]
        fn evaluations_are_homomorphisms(a in arb_coeff(), b in arb_coeff(), n in 1i64..5, d in 1i64..5, neg: bool) {
            prop_assert_eq!((&a + &b).eval_at_one(), a.eval_at_one() + b.eval_at_one());
            prop_assert_eq!((&a * &b).eval_at_one(), a.eval_at_one() * b.eval_at_one());
            let q = rat(if neg { -n } else { n }, d);
            let ev = |x: &LaurentCoeff| x.eval_at_rational(&q).unwrap();
            prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
            prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        }

        #[test]
        fn stored_coefficients_are_nonzero(a in arb_coeff(), b in arb_coeff()) {
            prop_assert!((&a * &b).terms.values().all(|c| !c.is_zero()));
            prop_assert!((&a - &b).terms.values().all(|c| !c.is_zero()));
        }
    }
}
