//! Finitely supported linear combinations of biwords with Laurent polynomial
//! coefficients.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::biword::{Alphabet, Biword, BiwordError};
use crate::coeff::LaurentCoeff;

/// `sum c(alpha) * alpha` over finitely many biwords. Zero coefficients are
/// never stored and iteration follows the canonical biword order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Expression {
    terms: BTreeMap<Biword, LaurentCoeff>,
}

impl Expression {
    pub fn zero() -> Self {
        Expression::default()
    }

    /// The unit: the empty biword with coefficient 1.
    pub fn one() -> Self {
        Expression::from_biword(Biword::empty())
    }

    pub fn from_biword(b: Biword) -> Self {
        Expression::term(LaurentCoeff::one(), b)
    }

    pub fn term(c: LaurentCoeff, b: Biword) -> Self {
        let mut e = Expression::zero();
        e.add_term(b, c);
        e
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Biword, LaurentCoeff)>,
    {
        let mut e = Expression::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of biwords in the support.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Biword, LaurentCoeff> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Biword> + '_ {
        self.terms.keys()
    }

    pub fn coefficient(&self, b: &Biword) -> LaurentCoeff {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, b: Biword, c: LaurentCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &LaurentCoeff, other: &Expression) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (b, d) in &other.terms {
            let coeff = if unit { d.clone() } else { c * d };
            self.add_term(b.clone(), coeff);
        }
    }

    pub fn scale(&self, c: &LaurentCoeff) -> Expression {
        let mut out = Expression::zero();
        out.add_scaled(c, self);
        out
    }

    /// Bilinear extension of concatenation. With `max_degree`, products longer
    /// than the cutoff are dropped.
    pub fn product(&self, other: &Expression, max_degree: Option<usize>) -> Expression {
        let mut out = Expression::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if max_degree.is_some_and(|d| a.len() + b.len() > d) {
                    continue;
                }
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }

    /// The degree-`n` homogeneous component.
    pub fn homogeneous_component(&self, n: usize) -> Expression {
        Expression {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.len() == n)
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest biword length in the support, `None` for zero.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Biword::len).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut lens = self.terms.keys().map(Biword::len);
        match lens.next() {
            None => true,
            Some(n) => lens.all(|m| m == n),
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.terms.keys().all(Biword::is_irreducible)
    }

    pub fn is_circular(&self) -> bool {
        self.terms.keys().all(Biword::is_circuit)
    }

    pub fn validate(&self, alphabet: &Alphabet) -> Result<(), BiwordError> {
        self.terms.keys().try_for_each(|b| b.validate(alphabet))
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Biword, &LaurentCoeff) -> LaurentCoeff) -> Expression {
        Expression::from_terms(self.terms.iter().map(|(b, c)| (b.clone(), f(b, c))))
    }

    /// Coefficientwise specialization `q = 1`.
    pub fn eval_at_one(&self) -> Expression {
        self.map_coefficients(|_, c| LaurentCoeff::constant(c.eval_at_one()))
    }

    /// Total number of `(biword, monomial)` pairs.
    pub fn monomial_count(&self) -> usize {
        self.terms.values().map(LaurentCoeff::num_terms).sum()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Biword, LaurentCoeff)> {
        self.terms.into_iter()
    }
}

impl<'a> IntoIterator for &'a Expression {
    type Item = (&'a Biword, &'a LaurentCoeff);
    type IntoIter = btree_map::Iter<'a, Biword, LaurentCoeff>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl FromIterator<(Biword, LaurentCoeff)> for Expression {
    fn from_iter<T: IntoIterator<Item = (Biword, LaurentCoeff)>>(iter: T) -> Self {
        Expression::from_terms(iter)
    }
}

impl From<Biword> for Expression {
    fn from(b: Biword) -> Self {
        Expression::from_biword(b)
    }
}

impl Add<&Expression> for &Expression {
    type Output = Expression;
    fn add(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        out.add_scaled(&LaurentCoeff::one(), rhs);
        out
    }
}

impl Add for Expression {
    type Output = Expression;
    fn add(mut self, rhs: Expression) -> Expression {
        // merge the smaller map into the larger one
        if self.len() < rhs.len() {
            return rhs + self;
        }
        for (b, c) in rhs.terms {
            self.add_term(b, c);
        }
        self
    }
}

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }
}

impl Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression {
            terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect(),
        }
    }
}

impl Sub<&Expression> for &Expression {
    type Output = Expression;
    fn sub(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        out.add_scaled(&-LaurentCoeff::one(), rhs);
        out
    }
}

impl Sub for Expression {
    type Output = Expression;
    fn sub(self, rhs: Expression) -> Expression {
        self + (-rhs)
    }
}

impl Mul<&Expression> for &Expression {
    type Output = Expression;
    fn mul(self, rhs: &Expression) -> Expression {
        self.product(rhs, None)
    }
}

impl Mul<&Expression> for &LaurentCoeff {
    type Output = Expression;
    fn mul(self, rhs: &Expression) -> Expression {
        rhs.scale(self)
    }
}

/// Canonical text form; see [`crate::io::print_expression`].
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::print_expression(self))
    }
}
