//! The Fermion and Boson sums and degree-by-degree verification that their
//! product reduces to the unit.

use std::fmt;

use crate::biword::{all_words, Biword, Letter};
use crate::coeff::LaurentCoeff;
use crate::expr::Expression;
use crate::par::Parallelism;
use crate::rewrite::{ReductionSystem, Reducer, RewriteError, DEFAULT_TERM_CAP};

/// Whether `q` stays symbolic or is specialized to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Q,
    One,
}

impl Variant {
    pub fn system(self) -> ReductionSystem {
        match self {
            Variant::Q => ReductionSystem::Sq,
            Variant::One => ReductionSystem::S,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Q => "q",
            Variant::One => "one",
        })
    }
}

/// Rearranges `xs` into the next permutation in lexicographic order; returns
/// false (leaving `xs` sorted) after the last one.
fn next_permutation(xs: &mut [Letter]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        xs.reverse();
        return false;
    };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).expect("pivot exists");
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// `sum over J of (-1)^|J| sum over sigma in S_J of (-q)^(-inv sigma) (sigma(J) / J)`.
///
/// Subsets are visited in increasing bitmask order and permutations in
/// lexicographic order.
pub fn ferm(r: Letter, variant: Variant) -> Expression {
    assert!((1..32).contains(&r), "alphabet size out of range");
    let mut out = Expression::zero();
    for mask in 0u32..(1 << r) {
        let subset: Vec<Letter> = (1..=r).filter(|&x| mask & (1 << (x - 1)) != 0).collect();
        let mut perm = subset.clone();
        loop {
            let b = Biword::from_letters(perm.clone(), subset.clone()).expect("equal lengths");
            let inv = b.top_word().inv() as i64;
            let sign = if (subset.len() as i64 + inv) % 2 == 0 { 1 } else { -1 };
            let exp = match variant {
                Variant::Q => -inv,
                Variant::One => 0,
            };
            out.add_term(b, LaurentCoeff::monomial(sign, exp));
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    out
}

/// `sum over words w with |w| <= max_len of q^(inv w) (sorted(w) / w)`.
pub fn bos(r: Letter, max_len: usize, variant: Variant) -> Expression {
    assert!(r >= 1, "alphabet must contain at least one letter");
    let mut out = Expression::zero();
    for n in 0..=max_len {
        for w in all_words(r, n) {
            let exp = match variant {
                Variant::Q => w.inv() as i64,
                Variant::One => 0,
            };
            let b = Biword::new(w.sorted_rearrangement(), w).expect("equal lengths");
            out.add_term(b, LaurentCoeff::q_pow(exp));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeResult {
    pub degree: usize,
    pub normal_form: Expression,
    pub ok: bool,
    pub terms_before_reduction: usize,
    pub rewrite_steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmmReport {
    pub r: Letter,
    pub max_degree: usize,
    pub variant: Variant,
    pub system: ReductionSystem,
    pub per_degree: Vec<DegreeResult>,
}

impl QmmReport {
    pub fn passed(&self) -> bool {
        self.per_degree.iter().all(|d| d.ok)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QmmOptions {
    pub parallelism: Parallelism,
    pub term_cap: usize,
}

impl Default for QmmOptions {
    fn default() -> Self {
        QmmOptions {
            parallelism: Parallelism::default(),
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

/// Reduces each homogeneous component of `Ferm * Bos` up to `max_degree`.
/// Degree 0 must give exactly the unit and every higher degree must vanish.
pub fn qmm_check(r: Letter, max_degree: usize, variant: Variant) -> Result<QmmReport, RewriteError> {
    qmm_check_with(r, max_degree, variant, &QmmOptions::default())
}

pub fn qmm_check_with(r: Letter, max_degree: usize, variant: Variant, options: &QmmOptions) -> Result<QmmReport, RewriteError> {
    let system = variant.system();
    // components of degree <= d only involve Bos terms of length <= d
    let product = ferm(r, variant).product(&bos(r, max_degree, variant), Some(max_degree));
    let reducer = Reducer::canonical(system)
        .with_parallelism(options.parallelism)
        .with_term_cap(options.term_cap);
    let mut per_degree = Vec::with_capacity(max_degree + 1);
    for degree in 0..=max_degree {
        let component = product.homogeneous_component(degree);
        let report = reducer.reduce(&component)?;
        let expected = if degree == 0 { Expression::one() } else { Expression::zero() };
        per_degree.push(DegreeResult {
            degree,
            ok: report.normal_form == expected,
            normal_form: report.normal_form,
            terms_before_reduction: component.len(),
            rewrite_steps: report.rewrite_steps,
        });
    }
    Ok(QmmReport {
        r,
        max_degree,
        variant,
        system,
        per_degree,
    })
}

/// The canonical reduction of `Ferm(1) * Bos(1)` is literally the unit.
pub fn strong_qmm_check(r: Letter, max_degree: usize) -> Result<QmmReport, RewriteError> {
    qmm_check(r, max_degree, Variant::One)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::phi;

    fn bw(t: &str, b: &str) -> Biword {
        Biword::digits(t, b)
    }

    fn term(c: i64, e: i64, t: &str, b: &str) -> Expression {
        Expression::term(LaurentCoeff::monomial(c, e), bw(t, b))
    }

    #[test]
    fn permutations_in_lex_order() {
        let mut xs = vec![1, 2, 3];
        let mut seen = vec![xs.clone()];
        while next_permutation(&mut xs) {
            seen.push(xs.clone());
        }
        assert_eq!(seen, vec![vec![1, 2, 3], vec![1, 3, 2], vec![2, 1, 3], vec![2, 3, 1], vec![3, 1, 2], vec![3, 2, 1]]);
        assert_eq!(xs, vec![1, 2, 3]);
        let mut empty: Vec<Letter> = vec![];
        assert!(!next_permutation(&mut empty));
    }

    #[test]
    fn small_fermions() {
        assert_eq!(ferm(1, Variant::Q), Expression::one() - term(1, 0, "1", "1"));
        let expected = Expression::one() - term(1, 0, "1", "1") - term(1, 0, "2", "2")
            + term(1, 0, "12", "12")
            + term(-1, -1, "21", "12");
        assert_eq!(ferm(2, Variant::Q), expected);
        // sum_k C(r,k) k!
        assert_eq!(ferm(3, Variant::Q).len(), 16);
        assert_eq!(ferm(4, Variant::One).len(), 65);
    }

    #[test]
    fn small_bosons() {
        assert_eq!(bos(3, 0, Variant::Q), Expression::one());
        let expected = Expression::one()
            + term(1, 0, "1", "1")
            + term(1, 0, "2", "2")
            + term(1, 0, "11", "11")
            + term(1, 0, "12", "12")
            + term(1, 1, "12", "21")
            + term(1, 0, "22", "22");
        assert_eq!(bos(2, 2, Variant::Q), expected);
        assert_eq!(
            bos(1, 3, Variant::Q),
            Expression::one() + term(1, 0, "1", "1") + term(1, 0, "11", "11") + term(1, 0, "111", "111")
        );
        assert_eq!(bos(3, 3, Variant::One).len(), 1 + 3 + 9 + 27);
    }

    #[test]
    fn structure_of_ferm_and_bos() {
        for r in 1..=3 {
            for v in [Variant::Q, Variant::One] {
                let f = ferm(r, v);
                assert!(f.is_circular());
                assert!(f.is_irreducible());
                let b = bos(r, 3, v);
                assert!(b.is_circular());
                assert!(b.support().all(|x| x.top().windows(2).all(|w| w[0] <= w[1])));
            }
            assert_eq!(phi(&ferm(r, Variant::One)), ferm(r, Variant::Q));
            assert_eq!(phi(&bos(r, 4, Variant::One)), bos(r, 4, Variant::Q));
        }
    }

    #[test]
    fn low_degree_components() {
        let p = ferm(2, Variant::One).product(&bos(2, 1, Variant::One), Some(1));
        assert!(p.homogeneous_component(1).is_zero());
        let p = ferm(2, Variant::Q).product(&bos(2, 2, Variant::Q), Some(2));
        let expected = term(1, 1, "12", "21") - term(1, 0, "21", "21") + term(1, 0, "12", "12") + term(-1, -1, "21", "12");
        assert_eq!(p.homogeneous_component(2), expected);
    }

    #[test]
    fn rank_one_alphabet_telescopes() {
        for v in [Variant::Q, Variant::One] {
            let rep = qmm_check(1, 5, v).unwrap();
            assert!(rep.passed());
            assert!(rep.per_degree.iter().all(|d| d.rewrite_steps == 0));
        }
    }

    #[test]
    fn small_checks_pass() {
        let rep = qmm_check(2, 4, Variant::Q).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let rep = strong_qmm_check(3, 3).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.per_degree[0].normal_form, Expression::one());
        assert_eq!(rep.per_degree.len(), 4);
    }

    #[test]
    fn truncated_bos_is_not_the_unit() {
        // dropping the top-degree Bos terms must break the identity
        let p = ferm(2, Variant::One).product(&bos(2, 2, Variant::One), Some(3));
        let comp = p.homogeneous_component(3);
        let nf = Reducer::canonical(ReductionSystem::S).reduce(&comp).unwrap().normal_form;
        assert!(!nf.is_zero());
    }
}
