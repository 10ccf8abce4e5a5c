//! The two reduction systems on biwords and the reduction `E -> [E]` they
//! induce.
//!
//! A biword with a double descent `xy/ab` (`x > y`, `a >= b`) at some position
//! is rewritten by
//!
//! ```text
//!   xy/ab  ->  yx/ba + q yx/ab - q^-1 xy/ba     (a > b)
//!   xy/aa  ->  q yx/aa
//! ```
//!
//! with `q = 1` for the system [`ReductionSystem::S`]. Every produced biword
//! has a strictly smaller `inv+`, which is asserted on each application.
//!
//! The canonical normal form always rewrites at the first double descent.
//! Other position choices exist to test that the result does not depend on
//! them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::biword::{Biword, Letter};
use crate::coeff::LaurentCoeff;
use crate::expr::Expression;
use crate::par::{self, Parallelism};

/// Default hard cap on the number of terms held by one reduction.
pub const DEFAULT_TERM_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("{biword} has no double descent at position {position}")]
    NotADoubleDescent { biword: Biword, position: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("reduction exceeded the cap of {cap} terms")]
    ResourceExhausted { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionSystem {
    /// The `q = 1` system.
    S,
    /// The system with symbolic `q`.
    Sq,
}

impl ReductionSystem {
    pub fn name(self) -> &'static str {
        match self {
            ReductionSystem::S => "S",
            ReductionSystem::Sq => "S_q",
        }
    }

    /// Coefficients of `yx/ba`, `yx/ab`, `xy/ba` for distinct bottom letters
    /// and of `yx/aa` for equal ones.
    fn coefficients(self) -> &'static RuleCoefficients {
        static ONE: OnceLock<RuleCoefficients> = OnceLock::new();
        static Q: OnceLock<RuleCoefficients> = OnceLock::new();
        match self {
            ReductionSystem::S => ONE.get_or_init(|| RuleCoefficients {
                distinct: [LaurentCoeff::constant(1), LaurentCoeff::constant(1), LaurentCoeff::constant(-1)],
                equal: LaurentCoeff::constant(1),
            }),
            ReductionSystem::Sq => Q.get_or_init(|| RuleCoefficients {
                distinct: [LaurentCoeff::constant(1), LaurentCoeff::q(), LaurentCoeff::monomial(-1, -1)],
                equal: LaurentCoeff::q(),
            }),
        }
    }

    /// The rule applied to a reducible length-2 biword.
    pub fn rule(self, pair: &Biword) -> Result<Expression, RewriteError> {
        if pair.len() != 2 || !pair.has_double_descent_at(0) {
            return Err(RewriteError::NotADoubleDescent {
                biword: pair.clone(),
                position: 1,
            });
        }
        rewrite_at(pair, 1, self)
    }

    fn apply(self, b: &Biword, i: usize) -> Vec<(&'static LaurentCoeff, Biword)> {
        let (x, y) = (b.top()[i], b.top()[i + 1]);
        let (a, c) = (b.bottom()[i], b.bottom()[i + 1]);
        debug_assert!(x > y && a >= c);
        let k = self.coefficients();
        let out = if a > c {
            vec![
                (&k.distinct[0], b.with_pair_replaced(i, [y, x], [c, a])),
                (&k.distinct[1], b.with_pair_replaced(i, [y, x], [a, c])),
                (&k.distinct[2], b.with_pair_replaced(i, [x, y], [c, a])),
            ]
        } else {
            vec![(&k.equal, b.with_pair_replaced(i, [y, x], [a, a]))]
        };
        check_measure(b, out.iter().map(|(_, nb)| nb));
        out
    }
}

impl fmt::Display for ReductionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct RuleCoefficients {
    distinct: [LaurentCoeff; 3],
    equal: LaurentCoeff,
}

static MEASURE_CHECKS: AtomicU64 = AtomicU64::new(0);

/// Number of `inv+` decrease checks performed by this process so far.
pub fn measure_checks() -> u64 {
    MEASURE_CHECKS.load(Ordering::Relaxed)
}

fn check_measure<'a>(consumed: &Biword, produced: impl Iterator<Item = &'a Biword>) {
    let before = consumed.inv_plus();
    for nb in produced {
        let after = nb.inv_plus();
        assert!(
            after < before,
            "termination measure violated: {consumed} (inv+ {before}) produced {nb} (inv+ {after})"
        );
        MEASURE_CHECKS.fetch_add(1, Ordering::Relaxed);
    }
}

/// Which double descent a non-canonical reduction rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    RandomSeeded(u64),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Leftmost => write!(f, "leftmost"),
            Strategy::Rightmost => write!(f, "rightmost"),
            Strategy::RandomSeeded(s) => write!(f, "random:{s}"),
        }
    }
}

/// The two reduction rule shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// `a > b`, three output terms.
    Distinct,
    /// `a = b`, one output term.
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub biword: Biword,
    /// 1-based.
    pub position: usize,
    pub rule: RuleKind,
    pub result: Expression,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "STEP {} @ {} -> {}", self.biword, self.position, self.result)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub input: Expression,
    pub normal_form: Expression,
    pub rewrite_steps: u64,
    pub max_intermediate_terms: usize,
    pub trace: Option<Vec<TraceEvent>>,
}

/// Rewrites `b` once at the 1-based position `position`, keeping the
/// surrounding columns as context.
pub fn rewrite_at(b: &Biword, position: usize, system: ReductionSystem) -> Result<Expression, RewriteError> {
    if position == 0 || !b.has_double_descent_at(position - 1) {
        return Err(RewriteError::NotADoubleDescent {
            biword: b.clone(),
            position,
        });
    }
    Ok(system
        .apply(b, position - 1)
        .into_iter()
        .map(|(c, nb)| (nb, c.clone()))
        .collect())
}

/// A reduction engine for one system and strategy.
///
/// Leftmost reduction memoizes normal forms per biword in a concurrent map;
/// the other strategies run a worklist without memoization.
pub struct Reducer {
    system: ReductionSystem,
    strategy: Strategy,
    term_cap: usize,
    parallelism: Parallelism,
    memo: DashMap<Biword, Arc<Expression>>,
    steps: AtomicU64,
    peak_terms: AtomicUsize,
}

impl Reducer {
    pub fn new(system: ReductionSystem, strategy: Strategy) -> Self {
        Reducer {
            system,
            strategy,
            term_cap: DEFAULT_TERM_CAP,
            parallelism: Parallelism::default(),
            memo: DashMap::new(),
            steps: AtomicU64::new(0),
            peak_terms: AtomicUsize::new(0),
        }
    }

    pub fn canonical(system: ReductionSystem) -> Self {
        Self::new(system, Strategy::Leftmost)
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn system(&self) -> ReductionSystem {
        self.system
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Rule applications performed by this engine so far.
    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn note_size(&self, n: usize) -> Result<(), RewriteError> {
        self.peak_terms.fetch_max(n, Ordering::Relaxed);
        if n > self.term_cap {
            Err(RewriteError::ResourceExhausted { cap: self.term_cap })
        } else {
            Ok(())
        }
    }

    /// Normal form of a single biword.
    pub fn reduce_biword(&self, b: &Biword) -> Result<Expression, RewriteError> {
        match self.strategy {
            Strategy::Leftmost => Ok(self.leftmost(b)?.as_ref().clone()),
            _ => self.worklist(&Expression::from_biword(b.clone()), None),
        }
    }

    fn leftmost(&self, b: &Biword) -> Result<Arc<Expression>, RewriteError> {
        let Some(i) = b.first_double_descent() else {
            return Ok(Arc::new(Expression::from_biword(b.clone())));
        };
        if let Some(hit) = self.memo.get(b) {
            return Ok(Arc::clone(hit.value()));
        }
        let mut acc = Expression::zero();
        for (c, nb) in self.system.apply(b, i) {
            let sub = self.leftmost(&nb)?;
            acc.add_scaled(c, &sub);
            self.note_size(acc.len())?;
        }
        self.steps.fetch_add(1, Ordering::Relaxed);
        let acc = Arc::new(acc);
        // concurrent callers computing the same entry produce identical values
        Ok(Arc::clone(self.memo.entry(b.clone()).or_insert(acc).value()))
    }

    /// Worklist reduction: repeatedly rewrites the pending biword of largest
    /// `inv+`, so each biword is rewritten at most once.
    fn worklist(&self, e: &Expression, mut trace: Option<&mut Vec<TraceEvent>>) -> Result<Expression, RewriteError> {
        let mut rng = match self.strategy {
            Strategy::RandomSeeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut pending: BTreeMap<(usize, Biword), LaurentCoeff> = BTreeMap::new();
        let mut done = Expression::zero();
        let push = |pending: &mut BTreeMap<(usize, Biword), LaurentCoeff>, done: &mut Expression, b: Biword, c: LaurentCoeff| {
            if b.is_irreducible() {
                done.add_term(b, c);
            } else {
                let slot = pending.entry((b.inv_plus(), b)).or_default();
                *slot += &c;
            }
        };
        for (b, c) in e {
            push(&mut pending, &mut done, b.clone(), c.clone());
        }
        while let Some(((_, b), c)) = pending.pop_last() {
            if num_traits::Zero::is_zero(&c) {
                continue;
            }
            let i = match (self.strategy, rng.as_mut()) {
                (Strategy::Rightmost, _) => b.last_double_descent(),
                (Strategy::RandomSeeded(_), Some(rng)) => {
                    let dds = b.double_descents();
                    Some(dds[rng.gen_range(0..dds.len())] - 1)
                }
                _ => b.first_double_descent(),
            }
            .expect("pending biwords are reducible");
            let produced = self.system.apply(&b, i);
            self.steps.fetch_add(1, Ordering::Relaxed);
            if let Some(events) = trace.as_deref_mut() {
                events.push(TraceEvent {
                    biword: b.clone(),
                    position: i + 1,
                    rule: if produced.len() == 3 { RuleKind::Distinct } else { RuleKind::Equal },
                    result: produced.iter().map(|(k, nb)| (nb.clone(), (*k).clone())).collect(),
                });
            }
            for (k, nb) in produced {
                push(&mut pending, &mut done, nb, k * &c);
            }
            self.note_size(pending.len() + done.len())?;
        }
        Ok(done)
    }

    fn normal_form(&self, e: &Expression) -> Result<Expression, RewriteError> {
        match self.strategy {
            Strategy::Leftmost => {
                let terms: Vec<(&Biword, &LaurentCoeff)> = e.iter().collect();
                let parts = par::try_map(self.parallelism, &terms, |(b, c)| {
                    self.leftmost(b).map(|nf| nf.scale(c))
                })?;
                let mut acc = Expression::zero();
                for part in parts {
                    acc = acc + part;
                    self.note_size(acc.len())?;
                }
                Ok(acc)
            }
            _ => self.worklist(e, None),
        }
    }

    pub fn reduce(&self, e: &Expression) -> Result<ReductionReport, RewriteError> {
        let steps_before = self.steps();
        self.peak_terms.store(e.len(), Ordering::Relaxed);
        let normal_form = self.normal_form(e)?;
        Ok(ReductionReport {
            input: e.clone(),
            normal_form,
            rewrite_steps: self.steps() - steps_before,
            max_intermediate_terms: self.peak_terms.load(Ordering::Relaxed),
            trace: None,
        })
    }

    /// Like [`Reducer::reduce`] but records every rule application. Tracing
    /// always uses the worklist, so steps are not shared through the memo.
    pub fn reduce_traced(&self, e: &Expression) -> Result<ReductionReport, RewriteError> {
        let steps_before = self.steps();
        self.peak_terms.store(e.len(), Ordering::Relaxed);
        let mut events = Vec::new();
        let normal_form = self.worklist(e, Some(&mut events))?;
        Ok(ReductionReport {
            input: e.clone(),
            normal_form,
            rewrite_steps: self.steps() - steps_before,
            max_intermediate_terms: self.peak_terms.load(Ordering::Relaxed),
            trace: Some(events),
        })
    }

    pub fn in_ideal(&self, e: &Expression) -> Result<bool, RewriteError> {
        Ok(self.normal_form(e)?.is_zero())
    }
}

pub fn reduce_biword(b: &Biword, system: ReductionSystem, strategy: Strategy) -> Result<Expression, RewriteError> {
    Reducer::new(system, strategy).reduce_biword(b)
}

pub fn reduce(e: &Expression, system: ReductionSystem, strategy: Strategy) -> Result<ReductionReport, RewriteError> {
    Reducer::new(system, strategy).reduce(e)
}

/// Membership in the two-sided ideal generated by the rules of `system`,
/// decided by a zero normal form.
pub fn in_ideal(e: &Expression, system: ReductionSystem) -> Result<bool, RewriteError> {
    Reducer::canonical(system).in_ideal(e)
}

/// Resolves the overlap `xyz/abc` (`x > y > z`, `a >= b >= c`): rewrites at
/// position 1 or at position 2, normalizes both and compares.
pub fn check_ambiguity(letters: [Letter; 6], system: ReductionSystem) -> Result<bool, RewriteError> {
    check_ambiguity_with(&Reducer::canonical(system), letters)
}

pub fn check_ambiguity_with(reducer: &Reducer, letters: [Letter; 6]) -> Result<bool, RewriteError> {
    let [x, y, z, a, b, c] = letters;
    if !(x > y && y > z && a >= b && b >= c) {
        return Err(RewriteError::PreconditionViolation(format!(
            "{x}{y}{z}/{a}{b}{c} is not an overlap (need x > y > z and a >= b >= c)"
        )));
    }
    let alpha = Biword::from_letters(vec![x, y, z], vec![a, b, c]).expect("equal lengths");
    let left = reducer.reduce(&rewrite_at(&alpha, 1, reducer.system())?)?.normal_form;
    let right = reducer.reduce(&rewrite_at(&alpha, 2, reducer.system())?)?.normal_form;
    Ok(left == right)
}

/// Every overlap pattern `x > y > z`, `a >= b >= c` over `{1..r}`.
pub fn overlap_patterns(r: Letter) -> Vec<[Letter; 6]> {
    let mut out = Vec::new();
    for x in 1..=r {
        for y in 1..x {
            for z in 1..y {
                for a in 1..=r {
                    for b in 1..=a {
                        for c in 1..=b {
                            out.push([x, y, z, a, b, c]);
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub trial: usize,
    pub biword: Biword,
    pub strategy: Strategy,
    pub leftmost: Expression,
    pub other: Expression,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub system: ReductionSystem,
    pub trials: usize,
    pub counterexamples: Vec<Disagreement>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// The random biword and strategy seed used by trial `trial`.
///
/// Each trial draws from its own ChaCha stream, so results do not depend on
/// how trials are scheduled.
pub fn fuzz_case(r: Letter, max_len: usize, seed: u64, trial: usize) -> (Biword, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let n = rng.gen_range(0..=max_len);
    let top = (0..n).map(|_| rng.gen_range(1..=r)).collect();
    let bottom = (0..n).map(|_| rng.gen_range(1..=r)).collect();
    (Biword::from_letters(top, bottom).expect("equal lengths"), rng.gen())
}

/// Normalizes random biwords under leftmost and random-position reduction
/// and reports every disagreement.
pub fn check_confluence_fuzz(
    r: Letter,
    max_len: usize,
    trials: usize,
    seed: u64,
    system: ReductionSystem,
    parallelism: Parallelism,
) -> Result<ConfluenceReport, RewriteError> {
    assert!(r >= 1, "alphabet must contain at least one letter");
    let canonical = Reducer::canonical(system).with_parallelism(Parallelism::Sequential);
    let outcomes = par::map_range(parallelism, 0..trials, |trial| -> Result<Option<Disagreement>, RewriteError> {
        let (b, strategy_seed) = fuzz_case(r, max_len, seed, trial);
        let strategy = Strategy::RandomSeeded(strategy_seed);
        let leftmost = canonical.reduce_biword(&b)?;
        let other = Reducer::new(system, strategy).reduce_biword(&b)?;
        Ok((leftmost != other).then_some(Disagreement {
            trial,
            biword: b,
            strategy,
            leftmost,
            other,
        }))
    });
    let mut counterexamples = Vec::new();
    for o in outcomes {
        counterexamples.extend(o?);
    }
    Ok(ConfluenceReport {
        system,
        trials,
        counterexamples,
    })
}
