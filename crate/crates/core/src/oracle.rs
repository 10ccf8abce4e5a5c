//! Brute-force linear algebra that checks the irreducible biwords give a basis
//! of each graded piece of the quotient, without going through the rewrite
//! engine.
//!
//! The degree-`n` piece of the ideal is spanned by `beta * g * gamma` where
//! `g` runs over the defining relations of length 2. Its rank is computed
//! exactly with fraction-free (Bareiss) elimination. The relations permute
//! top letters and bottom letters separately, so the relation matrix is block
//! diagonal over the pair of letter multisets and each block is eliminated on
//! its own.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::biword::{all_biwords, Biword, Letter};
use crate::par::{self, Parallelism};
use crate::rewrite::{ReductionSystem, Reducer, RewriteError};

/// Largest ambient dimension `r^(2n)` the oracle will attempt by default.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("q = 0 is not allowed (q^-1 appears in the relations)")]
    ZeroQ,
    #[error("ambient dimension {dim} exceeds the budget {budget}")]
    BudgetExceeded { dim: u64, budget: u64 },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// The value substituted for `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QValue {
    One,
    Rational(BigRational),
}

impl QValue {
    pub fn rational(p: i64, s: i64) -> Self {
        QValue::Rational(BigRational::new(p.into(), s.into()))
    }

    fn as_rational(&self) -> BigRational {
        match self {
            QValue::One => BigRational::one(),
            QValue::Rational(q) => q.clone(),
        }
    }

    /// `count` distinct random nonzero rationals `p/s` with `|p|, s <= 12`,
    /// excluding 1 and -1.
    pub fn random_samples(seed: u64, count: usize) -> Vec<QValue> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<QValue> = Vec::with_capacity(count);
        while out.len() < count {
            let p: i64 = rng.gen_range(-12..=12);
            let s: i64 = rng.gen_range(1..=12);
            if p == 0 {
                continue;
            }
            let q = QValue::rational(p, s);
            let abs = q.as_rational().abs();
            if abs.is_one() || out.contains(&q) {
                continue;
            }
            out.push(q);
        }
        out
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::One => write!(f, "1"),
            QValue::Rational(q) => write!(f, "{q}"),
        }
    }
}

/// The defining relations of length 2 at a given `q`, written directly from
/// the commutation rules: for `x > y`
///
/// ```text
///   xy/ab - yx/ba - q yx/ab + q^-1 xy/ba = 0     (a > b)
///   xy/aa - q yx/aa = 0
/// ```
fn relation_generators(r: Letter, q: &BigRational) -> Vec<Vec<(Biword, BigRational)>> {
    let one = BigRational::one();
    let q_inv = q.recip();
    let pair = |t: [Letter; 2], b: [Letter; 2]| Biword::from_letters(t.to_vec(), b.to_vec()).expect("length 2");
    let mut out = Vec::new();
    for x in 1..=r {
        for y in 1..x {
            for a in 1..=r {
                for b in 1..=a {
                    let rel = if a > b {
                        vec![
                            (pair([x, y], [a, b]), one.clone()),
                            (pair([y, x], [b, a]), -one.clone()),
                            (pair([y, x], [a, b]), -q.clone()),
                            (pair([x, y], [b, a]), q_inv.clone()),
                        ]
                    } else {
                        vec![(pair([x, y], [a, a]), one.clone()), (pair([y, x], [a, a]), -q.clone())]
                    };
                    out.push(rel);
                }
            }
        }
    }
    out
}

fn clear_denominators(row: Vec<(usize, BigRational)>) -> Vec<(usize, BigInt)> {
    let lcm = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    row.into_iter()
        .map(|(j, v)| (j, (v * BigRational::from_integer(lcm.clone())).to_integer()))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

/// Sparse integer matrix whose columns are all biwords of one length.
#[derive(Debug, Clone)]
pub struct RelationMatrix {
    pub columns: Vec<Biword>,
    /// Each row as `(column, nonzero entry)` pairs.
    pub rows: Vec<Vec<(usize, BigInt)>>,
}

impl RelationMatrix {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn rank(&self, parallelism: Parallelism) -> usize {
        block_rank(&self.columns, &self.rows, parallelism)
    }
}

fn check_budget(r: Letter, n: usize, budget: u64) -> Result<u64, OracleError> {
    let dim = (r as u64)
        .checked_pow(2 * n as u32)
        .ok_or(OracleError::BudgetExceeded { dim: u64::MAX, budget })?;
    if dim > budget {
        return Err(OracleError::BudgetExceeded { dim, budget });
    }
    Ok(dim)
}

/// Rows are `beta * g * gamma` for every relation `g` and all contexts with
/// `len(beta) + len(gamma) = n - 2`, with denominators cleared.
pub fn relation_matrix(r: Letter, n: usize, q: &QValue, parallelism: Parallelism) -> Result<RelationMatrix, OracleError> {
    let q = q.as_rational();
    if q.is_zero() {
        return Err(OracleError::ZeroQ);
    }
    let columns = all_biwords(r, n);
    if n < 2 {
        return Ok(RelationMatrix { columns, rows: Vec::new() });
    }
    let index: HashMap<&Biword, usize> = columns.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let generators = relation_generators(r, &q);
    let contexts = all_biwords(r, n - 2);
    let jobs: Vec<(usize, &Biword)> = (0..=n - 2).flat_map(|split| contexts.iter().map(move |c| (split, c))).collect();
    let per_job = par::map(parallelism, &jobs, |&(split, ctx)| {
        let before = Biword::from_letters(ctx.top()[..split].to_vec(), ctx.bottom()[..split].to_vec()).expect("split");
        let after = Biword::from_letters(ctx.top()[split..].to_vec(), ctx.bottom()[split..].to_vec()).expect("split");
        generators
            .iter()
            .map(|g| {
                let row = g
                    .iter()
                    .map(|(b, v)| (index[&before.concat(b).concat(&after)], v.clone()))
                    .collect();
                clear_denominators(row)
            })
            .collect::<Vec<_>>()
    });
    Ok(RelationMatrix {
        columns,
        rows: per_job.into_iter().flatten().collect(),
    })
}

/// Exact rank of a dense integer matrix by fraction-free elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = &pivot_row[col];
        for row in tail.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..ncols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

/// Rank of a sparse matrix whose rows each live inside one content block.
fn block_rank(columns: &[Biword], rows: &[Vec<(usize, BigInt)>], parallelism: Parallelism) -> usize {
    let mut block_of_col = Vec::with_capacity(columns.len());
    let mut blocks: BTreeMap<(Vec<Letter>, Vec<Letter>), Vec<usize>> = BTreeMap::new();
    let mut block_ids: HashMap<(Vec<Letter>, Vec<Letter>), usize> = HashMap::new();
    for (j, b) in columns.iter().enumerate() {
        let key = b.content();
        let next = block_ids.len();
        let id = *block_ids.entry(key.clone()).or_insert(next);
        block_of_col.push(id);
        blocks.entry(key).or_default().push(j);
    }
    let mut local_col = vec![0usize; columns.len()];
    let mut block_cols: Vec<usize> = vec![0; block_ids.len()];
    for (key, cols) in &blocks {
        let id = block_ids[key];
        block_cols[id] = cols.len();
        for (k, &j) in cols.iter().enumerate() {
            local_col[j] = k;
        }
    }
    let mut block_rows: Vec<Vec<&Vec<(usize, BigInt)>>> = vec![Vec::new(); block_ids.len()];
    for row in rows.iter().filter(|r| !r.is_empty()) {
        let id = block_of_col[row[0].0];
        debug_assert!(row.iter().all(|(j, _)| block_of_col[*j] == id), "row crosses blocks");
        block_rows[id].push(row);
    }
    let ids: Vec<usize> = (0..block_ids.len()).collect();
    par::map(parallelism, &ids, |&id| {
        let width = block_cols[id];
        let dense: Vec<Vec<BigInt>> = block_rows[id]
            .iter()
            .map(|row| {
                let mut d = vec![BigInt::zero(); width];
                for (j, v) in row.iter() {
                    d[local_col[*j]] += v;
                }
                d
            })
            .collect();
        bareiss_rank(dense)
    })
    .into_iter()
    .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub r: Letter,
    pub degree: usize,
    pub q: QValue,
    pub ambient_dim: u64,
    pub relation_rank: u64,
    pub quotient_dim: u64,
    pub irreducible_count: u64,
    pub matches: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub parallelism: Parallelism,
    pub budget: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            parallelism: Parallelism::default(),
            budget: DEFAULT_BUDGET,
        }
    }
}

pub fn irreducible_count(r: Letter, n: usize) -> u64 {
    all_biwords(r, n).iter().filter(|b| b.is_irreducible()).count() as u64
}

pub fn check_basis_dimension(r: Letter, n: usize, q: &QValue) -> Result<DimensionReport, OracleError> {
    check_basis_dimension_with(r, n, q, &OracleOptions::default())
}

pub fn check_basis_dimension_with(r: Letter, n: usize, q: &QValue, options: &OracleOptions) -> Result<DimensionReport, OracleError> {
    let ambient_dim = check_budget(r, n, options.budget)?;
    let matrix = relation_matrix(r, n, q, options.parallelism)?;
    let relation_rank = matrix.rank(options.parallelism) as u64;
    let quotient_dim = ambient_dim - relation_rank;
    let irreducible_count = irreducible_count(r, n);
    Ok(DimensionReport {
        r,
        degree: n,
        q: q.clone(),
        ambient_dim,
        relation_rank,
        quotient_dim,
        irreducible_count,
        matches: quotient_dim == irreducible_count,
    })
}

/// Rank of the linear map `alpha -> [alpha]` over all biwords of length `n`,
/// with normal forms taken from the rewrite engine.
pub fn spanning_rank(r: Letter, n: usize, q: &QValue, options: &OracleOptions) -> Result<usize, OracleError> {
    check_budget(r, n, options.budget)?;
    let qr = q.as_rational();
    if qr.is_zero() {
        return Err(OracleError::ZeroQ);
    }
    let system = match q {
        QValue::One => ReductionSystem::S,
        QValue::Rational(_) => ReductionSystem::Sq,
    };
    let columns = all_biwords(r, n);
    let index: HashMap<&Biword, usize> = columns.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let reducer = Reducer::canonical(system).with_parallelism(Parallelism::Sequential);
    let rows = par::try_map(options.parallelism, &columns, |b| -> Result<_, OracleError> {
        let nf = reducer.reduce_biword(b)?;
        let row = nf
            .iter()
            .map(|(t, c)| Ok((index[t], c.eval_at_rational(&qr).map_err(|_| OracleError::ZeroQ)?)))
            .collect::<Result<Vec<_>, OracleError>>()?;
        Ok(clear_denominators(row))
    })?;
    Ok(block_rank(&columns, &rows, options.parallelism))
}
