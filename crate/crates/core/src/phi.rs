//! The weight isomorphism `phi(alpha) = q^{inv-(alpha)} alpha` and the checks
//! that transport ideal membership and products between the `q = 1` and
//! symbolic-`q` quotients.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::biword::{Biword, Letter};
use crate::coeff::LaurentCoeff;
use crate::expr::Expression;
use crate::par::{self, Parallelism};
use crate::rewrite::{ReductionSystem, Reducer, RewriteError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhiError {
    #[error("expression is not circular: {0}")]
    NotCircular(Expression),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

fn weight(e: &Expression, sign: i64) -> Expression {
    // support is preserved: q^k is a unit
    e.map_coefficients(|b, c| c.shift(sign * b.inv_minus()))
}

pub fn phi(e: &Expression) -> Expression {
    weight(e, 1)
}

pub fn phi_inv(e: &Expression) -> Expression {
    weight(e, -1)
}

/// `E in I` iff `phi(E) in I_q`. Returns whether both sides agree, along with
/// the two memberships.
pub fn check_principle(e: &Expression) -> Result<PrincipleOutcome, RewriteError> {
    check_principle_with(&Reducer::canonical(ReductionSystem::S), &Reducer::canonical(ReductionSystem::Sq), e)
}

/// Same as [`check_principle`], with caller-provided engines so memo tables
/// can be shared across many checks.
pub fn check_principle_with(one: &Reducer, q: &Reducer, e: &Expression) -> Result<PrincipleOutcome, RewriteError> {
    debug_assert_eq!(one.system(), ReductionSystem::S);
    debug_assert_eq!(q.system(), ReductionSystem::Sq);
    Ok(PrincipleOutcome {
        in_one_ideal: one.in_ideal(e)?,
        in_q_ideal: q.in_ideal(&phi(e))?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrincipleOutcome {
    pub in_one_ideal: bool,
    pub in_q_ideal: bool,
}

impl PrincipleOutcome {
    pub fn holds(&self) -> bool {
        self.in_one_ideal == self.in_q_ideal
    }
}

/// `phi(EF) = phi(E) phi(F)` for circular `E`, `F`.
pub fn check_circuit_multiplicativity(e: &Expression, f: &Expression) -> Result<bool, PhiError> {
    for x in [e, f] {
        if !x.is_circular() {
            return Err(PhiError::NotCircular(x.clone()));
        }
    }
    Ok(is_multiplicative_on(e, f))
}

/// `phi(EF) == phi(E) phi(F)`, with no precondition.
pub fn is_multiplicative_on(e: &Expression, f: &Expression) -> bool {
    phi(&e.product(f, None)) == phi(e).product(&phi(f), None)
}

/// The weight `q^{inv-(b)}` that `phi` attaches to a single biword.
pub fn weight_of(b: &Biword) -> LaurentCoeff {
    LaurentCoeff::q_pow(b.inv_minus())
}

fn random_biword(rng: &mut ChaCha8Rng, r: Letter, n: usize) -> Biword {
    let top = (0..n).map(|_| rng.gen_range(1..=r)).collect();
    let bottom = (0..n).map(|_| rng.gen_range(1..=r)).collect();
    Biword::from_letters(top, bottom).expect("equal lengths")
}

fn random_scalar(rng: &mut ChaCha8Rng) -> LaurentCoeff {
    let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    LaurentCoeff::monomial(c, rng.gen_range(-2..=2))
}

/// A random element of the ideal of the `q = 1` system: a sum of one to three
/// generators `beta (g - [g]) gamma` with random Laurent coefficients and
/// `len(beta g gamma) <= max_len`.
pub fn random_ideal_element(rng: &mut ChaCha8Rng, r: Letter, max_len: usize) -> Expression {
    assert!(r >= 2 && max_len >= 2, "need two letters and room for a generator");
    let mut out = Expression::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let x = rng.gen_range(2..=r);
        let y = rng.gen_range(1..x);
        let a = rng.gen_range(1..=r);
        let b = rng.gen_range(1..=a);
        let g = Biword::from_letters(vec![x, y], vec![a, b]).expect("length 2");
        let generator = &Expression::from_biword(g.clone()) - &ReductionSystem::S.rule(&g).expect("reducible pair");
        let ctx = rng.gen_range(0..=max_len - 2);
        let split = rng.gen_range(0..=ctx);
        let before = Expression::from_biword(random_biword(rng, r, split));
        let after = Expression::from_biword(random_biword(rng, r, ctx - split));
        let wrapped = before.product(&generator, None).product(&after, None);
        out.add_scaled(&random_scalar(rng), &wrapped);
    }
    out
}

/// A random ideal element plus a nonzero multiple of a random irreducible
/// biword, which therefore lies outside the ideal.
pub fn random_non_member(rng: &mut ChaCha8Rng, r: Letter, max_len: usize) -> Expression {
    let mut e = random_ideal_element(rng, r, max_len);
    let witness = loop {
        let n = rng.gen_range(0..=max_len);
        let b = random_biword(rng, r, n);
        if b.is_irreducible() {
            break b;
        }
    };
    e.add_term(witness.clone(), random_scalar(rng));
    // a zero coefficient would only arise by cancelling with the member part
    if e.coefficient(&witness).is_zero() {
        e.add_term(witness, LaurentCoeff::constant(1));
    }
    e
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipleFailure {
    pub trial: usize,
    pub expression: Expression,
    pub expected_member: bool,
    pub outcome: PrincipleOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipleReport {
    pub members: usize,
    pub non_members: usize,
    pub failures: Vec<PrincipleFailure>,
}

impl PrincipleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the membership correspondence on `trials` random ideal elements and
/// `trials` random non-members. A trial fails if the two memberships differ
/// or disagree with how the sample was built.
pub fn principle_fuzz(r: Letter, max_len: usize, trials: usize, seed: u64, parallelism: Parallelism) -> Result<PrincipleReport, RewriteError> {
    let one = Reducer::canonical(ReductionSystem::S).with_parallelism(Parallelism::Sequential);
    let q = Reducer::canonical(ReductionSystem::Sq).with_parallelism(Parallelism::Sequential);
    let outcomes = par::map_range(parallelism, 0..2 * trials, |trial| -> Result<Option<PrincipleFailure>, RewriteError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let expected_member = trial < trials;
        let e = if expected_member {
            random_ideal_element(&mut rng, r, max_len)
        } else {
            random_non_member(&mut rng, r, max_len)
        };
        let outcome = check_principle_with(&one, &q, &e)?;
        let ok = outcome.holds() && outcome.in_one_ideal == expected_member;
        Ok((!ok).then_some(PrincipleFailure {
            trial,
            expression: e,
            expected_member,
            outcome,
        }))
    });
    let mut failures = Vec::new();
    for o in outcomes {
        failures.extend(o?);
    }
    Ok(PrincipleReport {
        members: trials,
        non_members: trials,
        failures,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::biword::{all_biwords, cross_inversions, Biword};
    use proptest::prelude::*;

    fn bw(t: &str, b: &str) -> Biword {
        Biword::digits(t, b)
    }

    fn ex(b: Biword) -> Expression {
        Expression::from_biword(b)
    }

    fn lin(terms: &[(i64, &str, &str)]) -> Expression {
        terms
            .iter()
            .map(|&(c, t, b)| (bw(t, b), LaurentCoeff::constant(c)))
            .collect()
    }

    #[test]
    fn phi_examples() {
        assert!(phi(&Expression::zero()).is_zero());
        // inv-(21/12) = inv(12) - inv(21) = -1
        assert_eq!(phi(&ex(bw("21", "12"))), Expression::term(LaurentCoeff::q_inv(), bw("21", "12")));
        assert_eq!(phi(&ex(bw("12", "21"))), Expression::term(LaurentCoeff::q(), bw("12", "21")));
        assert_eq!(phi_inv(&Expression::term(LaurentCoeff::q(), bw("12", "21"))), ex(bw("12", "21")));
        assert!(phi_inv(&Expression::zero()).is_zero());
        assert_eq!(weight_of(&bw("321", "123")), LaurentCoeff::q_pow(-3));
    }

    #[test]
    fn principle_examples() {
        let e2 = lin(&[(1, "21", "21"), (-1, "12", "12"), (-1, "12", "21"), (1, "21", "12")]);
        let out = check_principle(&e2).unwrap();
        assert!(out.holds() && out.in_one_ideal && out.in_q_ideal);
        let e1 = lin(&[(1, "21", "11"), (-1, "12", "11")]);
        let out = check_principle(&e1).unwrap();
        assert!(out.holds() && out.in_one_ideal);
        let out = check_principle(&lin(&[(1, "12", "12")])).unwrap();
        assert!(out.holds() && !out.in_one_ideal && !out.in_q_ideal);
    }

    #[test]
    fn multiplicativity_examples() {
        assert!(check_circuit_multiplicativity(&Expression::one(), &Expression::one()).unwrap());
        assert!(check_circuit_multiplicativity(&ex(bw("21", "12")), &ex(bw("12", "21"))).unwrap());
        assert!(matches!(
            check_circuit_multiplicativity(&ex(bw("1", "2")), &Expression::one()),
            Err(PhiError::NotCircular(_))
        ));
    }

    #[test]
    fn non_circular_counterexample_exists() {
        // search over pairs of length-1 biwords
        let singles = all_biwords(2, 1);
        let found = singles
            .iter()
            .flat_map(|a| singles.iter().map(move |b| (a, b)))
            .find(|(a, b)| !is_multiplicative_on(&ex((*a).clone()), &ex((*b).clone())));
        let (a, b) = found.expect("phi is not multiplicative on all biwords");
        assert!(!a.is_circuit() || !b.is_circuit());
        // 1/2 * 2/1 = 12/21 has inv- = 1 while both factors have inv- = 0
        assert!(!is_multiplicative_on(&ex(bw("1", "2")), &ex(bw("2", "1"))));
    }

    #[test]
    fn random_samples_have_the_intended_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_ideal_element(&mut rng, 3, 5);
            assert!(m.max_degree().unwrap_or(0) <= 5);
            assert!(crate::rewrite::in_ideal(&m, ReductionSystem::S).unwrap());
            let n = random_non_member(&mut rng, 3, 5);
            assert!(!crate::rewrite::in_ideal(&n, ReductionSystem::S).unwrap());
        }
    }

    #[test]
    fn small_principle_fuzz() {
        let rep = principle_fuzz(2, 4, 40, 11, Parallelism::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!((rep.members, rep.non_members), (40, 40));
    }

    #[test]
    fn circuit_cross_inversions_agree() {
        for (u, v) in [(bw("21", "12"), bw("312", "231")), (bw("1", "1"), bw("2211", "1212"))] {
            assert_eq!(
                cross_inversions(&u.top_word(), &v.top_word()),
                cross_inversions(&u.bottom_word(), &v.bottom_word())
            );
        }
    }

    pub(crate) fn arb_circuit(r: u32, max_len: usize) -> impl Strategy<Value = Biword> {
        (0..=max_len)
            .prop_flat_map(move |n| prop::collection::vec(1..=r, n))
            .prop_flat_map(|bottom| (Just(bottom.clone()).prop_shuffle(), Just(bottom)))
            .prop_map(|(top, bottom)| Biword::from_letters(top, bottom).unwrap())
    }

    fn arb_circular(r: u32, max_len: usize) -> impl Strategy<Value = Expression> {
        prop::collection::vec((arb_circuit(r, max_len), -2i64..=2, -1i64..=1), 0..4)
            .prop_map(|ts| ts.into_iter().map(|(b, c, e)| (b, LaurentCoeff::monomial(c, e))).collect())
    }

    proptest! {
        #[test]
        fn phi_is_an_invertible_module_map(e in arb_circular(3, 3), f in arb_circular(3, 3), c in -2i64..=2) {
            prop_assert_eq!(phi_inv(&phi(&e)), e.clone());
            prop_assert_eq!(phi(&phi_inv(&e)), e.clone());
            prop_assert!(phi(&e).support().eq(e.support()));
            let s = LaurentCoeff::monomial(c, 1);
            prop_assert_eq!(phi(&(&e.scale(&s) + &f)), &phi(&e).scale(&s) + &phi(&f));
        }

        #[test]
        fn phi_multiplicative_on_circuits(e in arb_circular(3, 3), f in arb_circular(3, 3)) {
            prop_assert!(check_circuit_multiplicativity(&e, &f).unwrap());
        }

        #[test]
        fn circuit_inv_minus_is_additive(a in arb_circuit(3, 4), b in arb_circuit(3, 4)) {
            prop_assert_eq!(a.concat(&b).inv_minus(), a.inv_minus() + b.inv_minus());
            prop_assert_eq!(
                cross_inversions(&a.top_word(), &b.top_word()),
                cross_inversions(&a.bottom_word(), &b.bottom_word())
            );
        }
    }
}
