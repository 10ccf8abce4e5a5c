//! Letters, words and biwords over the alphabet `{1, ..., r}`, together with
//! the inversion statistics that drive the rewriting.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// A letter of the alphabet. Validity (`1 <= letter <= r`) is checked against
/// an [`Alphabet`] at construction or parse time.
pub type Letter = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiwordError {
    #[error("top word has {top} letters but bottom word has {bottom}")]
    LengthMismatch { top: usize, bottom: usize },
    #[error("letter {letter} is outside the alphabet 1..={r}")]
    LetterOutOfRange { letter: Letter, r: Letter },
}

/// The alphabet `{1, ..., r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    r: Letter,
}

impl Alphabet {
    pub fn new(r: Letter) -> Self {
        assert!(r >= 1, "alphabet must contain at least one letter");
        Alphabet { r }
    }

    /// Accepts every positive letter.
    pub fn unbounded() -> Self {
        Alphabet { r: Letter::MAX }
    }

    pub fn size(&self) -> Letter {
        self.r
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (1..=self.r).contains(&letter)
    }

    pub fn check(&self, letter: Letter) -> Result<Letter, BiwordError> {
        if self.contains(letter) {
            Ok(letter)
        } else {
            Err(BiwordError::LetterOutOfRange { letter, r: self.r })
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        1..=self.r
    }
}

/// A finite word. Ordered by length first, then lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Number of pairs `i < j` with `w_i > w_j`.
    pub fn inv(&self) -> usize {
        count_pairs(&self.0, |x, y| x > y)
    }

    /// Number of pairs `i < j` with `w_i >= w_j` (large inversions).
    pub fn imv(&self) -> usize {
        count_pairs(&self.0, |x, y| x >= y)
    }

    /// The nondecreasing rearrangement.
    pub fn sorted_rearrangement(&self) -> Word {
        let mut letters = self.0.clone();
        letters.sort_unstable();
        Word(letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn validate(&self, alphabet: &Alphabet) -> Result<(), BiwordError> {
        self.0.iter().try_for_each(|&l| alphabet.check(l).map(|_| ()))
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn count_pairs(letters: &[Letter], pred: impl Fn(Letter, Letter) -> bool) -> usize {
    letters
        .iter()
        .enumerate()
        .map(|(i, &x)| letters[i + 1..].iter().filter(|&&y| pred(x, y)).count())
        .sum()
}

/// Number of pairs `(x, y)` with `x` a letter of `u`, `y` a letter of `v`
/// and `x > y`, counted over all positions.
pub fn cross_inversions(u: &Word, v: &Word) -> usize {
    u.0.iter()
        .map(|&x| v.0.iter().filter(|&&y| x > y).count())
        .sum()
}

/// A two-row array of letters of equal length. Multiplication is
/// concatenation and the empty biword is the unit.
///
/// Biwords order by length, then top word, then bottom word; this is the
/// canonical term order used everywhere downstream.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Biword {
    top: Vec<Letter>,
    bottom: Vec<Letter>,
}

impl Biword {
    pub fn new(top: Word, bottom: Word) -> Result<Self, BiwordError> {
        Self::from_letters(top.0, bottom.0)
    }

    pub fn from_letters(top: Vec<Letter>, bottom: Vec<Letter>) -> Result<Self, BiwordError> {
        if top.len() != bottom.len() {
            return Err(BiwordError::LengthMismatch {
                top: top.len(),
                bottom: bottom.len(),
            });
        }
        Ok(Biword { top, bottom })
    }

    /// Builds a biword from single-digit strings, e.g. `Biword::digits("321", "231")`.
    ///
    /// Panics on malformed input; meant for tests and literals.
    pub fn digits(top: &str, bottom: &str) -> Self {
        let parse = |s: &str| -> Vec<Letter> {
            s.chars()
                .map(|c| c.to_digit(10).expect("digit"))
                .collect()
        };
        Self::from_letters(parse(top), parse(bottom)).expect("equal lengths")
    }

    pub fn empty() -> Self {
        Biword::default()
    }

    pub fn biletter(top: Letter, bottom: Letter) -> Self {
        Biword {
            top: vec![top],
            bottom: vec![bottom],
        }
    }

    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty()
    }

    pub fn top(&self) -> &[Letter] {
        &self.top
    }

    pub fn bottom(&self) -> &[Letter] {
        &self.bottom
    }

    pub fn top_word(&self) -> Word {
        Word(self.top.clone())
    }

    pub fn bottom_word(&self) -> Word {
        Word(self.bottom.clone())
    }

    pub fn columns(&self) -> impl Iterator<Item = (Letter, Letter)> + '_ {
        self.top.iter().copied().zip(self.bottom.iter().copied())
    }

    pub fn validate(&self, alphabet: &Alphabet) -> Result<(), BiwordError> {
        self.top
            .iter()
            .chain(&self.bottom)
            .try_for_each(|&l| alphabet.check(l).map(|_| ()))
    }

    /// Largest letter used, or 0 for the empty biword.
    pub fn max_letter(&self) -> Letter {
        self.top.iter().chain(&self.bottom).copied().max().unwrap_or(0)
    }

    /// `inv(bottom) - inv(top)`; may be negative.
    pub fn inv_minus(&self) -> i64 {
        count_pairs(&self.bottom, |x, y| x > y) as i64 - count_pairs(&self.top, |x, y| x > y) as i64
    }

    /// `imv(bottom) + inv(top)`, the termination measure of the rewriting.
    pub fn inv_plus(&self) -> usize {
        count_pairs(&self.bottom, |x, y| x >= y) + count_pairs(&self.top, |x, y| x > y)
    }

    /// Whether columns `i, i+1` (0-based) form a double descent: top strictly
    /// decreasing, bottom weakly decreasing.
    #[inline]
    pub fn has_double_descent_at(&self, i: usize) -> bool {
        i + 1 < self.len() && self.top[i] > self.top[i + 1] && self.bottom[i] >= self.bottom[i + 1]
    }

    /// 1-based positions of all double descents, ascending.
    pub fn double_descents(&self) -> Vec<usize> {
        (0..self.len().saturating_sub(1))
            .filter(|&i| self.has_double_descent_at(i))
            .map(|i| i + 1)
            .collect()
    }

    /// 0-based index of the first double descent.
    pub fn first_double_descent(&self) -> Option<usize> {
        (0..self.len().saturating_sub(1)).find(|&i| self.has_double_descent_at(i))
    }

    /// 0-based index of the last double descent.
    pub fn last_double_descent(&self) -> Option<usize> {
        (0..self.len().saturating_sub(1))
            .rev()
            .find(|&i| self.has_double_descent_at(i))
    }

    pub fn is_irreducible(&self) -> bool {
        self.first_double_descent().is_none()
    }

    /// Whether the top word is a rearrangement of the bottom word.
    pub fn is_circuit(&self) -> bool {
        let mut top = self.top.clone();
        let mut bottom = self.bottom.clone();
        top.sort_unstable();
        bottom.sort_unstable();
        top == bottom
    }

    pub fn concat(&self, other: &Biword) -> Biword {
        let mut top = Vec::with_capacity(self.len() + other.len());
        top.extend_from_slice(&self.top);
        top.extend_from_slice(&other.top);
        let mut bottom = Vec::with_capacity(self.len() + other.len());
        bottom.extend_from_slice(&self.bottom);
        bottom.extend_from_slice(&other.bottom);
        Biword { top, bottom }
    }

    /// Replaces columns `i, i+1` (0-based) by the given pair of biletters.
    pub(crate) fn with_pair_replaced(&self, i: usize, top: [Letter; 2], bottom: [Letter; 2]) -> Biword {
        let mut out = self.clone();
        out.top[i..i + 2].copy_from_slice(&top);
        out.bottom[i..i + 2].copy_from_slice(&bottom);
        out
    }

    /// Key identifying the multisets of top and bottom letters. Every rewrite
    /// rule permutes the top letters and the bottom letters, so this is
    /// invariant under reduction.
    pub fn content(&self) -> (Vec<Letter>, Vec<Letter>) {
        let mut top = self.top.clone();
        let mut bottom = self.bottom.clone();
        top.sort_unstable();
        bottom.sort_unstable();
        (top, bottom)
    }
}

impl Ord for Biword {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.top.cmp(&other.top))
            .then_with(|| self.bottom.cmp(&other.bottom))
    }
}

impl PartialOrd for Biword {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.0, self.0.iter().all(|&l| (1..=9).contains(&l)))
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, letters: &[Letter], compact: bool) -> fmt::Result {
    if compact {
        letters.iter().try_for_each(|l| write!(f, "{l}"))
    } else {
        write!(f, "(")?;
        for (k, l) in letters.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// `e` for the empty biword, `321/231` when every letter is a single digit,
/// and `(10,2)/(1,10)` otherwise.
impl fmt::Display for Biword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        let compact = self.top.iter().chain(&self.bottom).all(|&l| (1..=9).contains(&l));
        write_word(f, &self.top, compact)?;
        write!(f, "/")?;
        write_word(f, &self.bottom, compact)
    }
}

/// All words of length `n` over `{1..r}`, in lexicographic order.
pub fn all_words(r: Letter, n: usize) -> Vec<Word> {
    let mut out = Vec::with_capacity((r as usize).pow(n as u32));
    let mut current = vec![1; n];
    loop {
        out.push(Word(current.clone()));
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if current[k] < r {
                current[k] += 1;
                current[k + 1..].iter_mut().for_each(|l| *l = 1);
                break;
            }
        }
    }
}

/// All biwords of length `n` over `{1..r}`, in canonical order.
pub fn all_biwords(r: Letter, n: usize) -> Vec<Biword> {
    let words = all_words(r, n);
    let mut out = Vec::with_capacity(words.len() * words.len());
    for top in &words {
        for bottom in &words {
            out.push(Biword {
                top: top.0.clone(),
                bottom: bottom.0.clone(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word(s.chars().map(|c| c.to_digit(10).unwrap()).collect())
    }

    fn bw(top: &str, bottom: &str) -> Biword {
        Biword::digits(top, bottom)
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(Word::empty().inv(), 0);
        assert_eq!(w("321").inv(), 3);
        assert_eq!(w("231").inv(), 2);
        assert_eq!(w("11").imv(), 1);
        assert_eq!(w("123").imv(), 0);
        assert_eq!(w("221").imv(), 3);
    }

    #[test]
    fn biword_statistics() {
        assert_eq!(bw("32", "12").inv_minus(), -1);
        assert_eq!(Biword::empty().inv_minus(), 0);
        assert_eq!(bw("321", "231").inv_minus(), -1);
        assert_eq!(bw("21", "11").inv_plus(), 2);
        assert_eq!(bw("12", "12").inv_plus(), 0);
        assert_eq!(bw("321", "321").inv_plus(), 6);
    }

    #[test]
    fn double_descents_and_irreducibility() {
        assert_eq!(bw("21", "11").double_descents(), vec![1]);
        assert!(bw("21", "12").double_descents().is_empty());
        assert_eq!(bw("321", "321").double_descents(), vec![1, 2]);
        assert!(Biword::empty().is_irreducible());
        assert!(!bw("21", "21").is_irreducible());
        assert!(bw("231", "312").is_irreducible());
        assert_eq!(bw("1", "1").double_descents(), Vec::<usize>::new());
    }

    #[test]
    fn circuits() {
        assert!(bw("21", "12").is_circuit());
        assert!(!bw("11", "12").is_circuit());
        assert!(bw("321", "231").is_circuit());
        assert!(Biword::empty().is_circuit());
    }

    #[test]
    fn rearrangement_and_concat() {
        assert_eq!(w("212").sorted_rearrangement(), w("122"));
        assert_eq!(Word::empty().sorted_rearrangement(), Word::empty());
        assert_eq!(w("312").sorted_rearrangement(), w("123"));
        assert_eq!(Biword::empty().concat(&bw("21", "11")), bw("21", "11"));
        assert_eq!(bw("3", "3").concat(&bw("21", "21")), bw("321", "321"));
        assert_eq!(bw("12", "12").concat(&bw("12", "12")), bw("1212", "1212"));
    }

    #[test]
    fn cross_inversion_examples() {
        // position pairs: (2,1) yes, (2,2) no, (1,1) no, (1,2) no
        assert_eq!(cross_inversions(&w("21"), &w("12")), 1);
        assert_eq!(cross_inversions(&Word::empty(), &w("312")), 0);
        assert_eq!(cross_inversions(&w("11"), &w("22")), 0);
        assert_eq!(cross_inversions(&w("32"), &w("21")), 3);
    }

    #[test]
    fn ordering_is_length_then_lex() {
        assert!(w("9") < w("11"));
        assert!(bw("9", "9") < bw("11", "11"));
        assert!(bw("12", "21") < bw("21", "12"));
        assert!(bw("12", "12") < bw("12", "21"));
    }

    #[test]
    fn validation() {
        let a = Alphabet::new(2);
        assert!(bw("21", "12").validate(&a).is_ok());
        assert_eq!(
            bw("31", "12").validate(&a),
            Err(BiwordError::LetterOutOfRange { letter: 3, r: 2 })
        );
        assert_eq!(
            Biword::from_letters(vec![1], vec![]),
            Err(BiwordError::LengthMismatch { top: 1, bottom: 0 })
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(bw("321", "231").to_string(), "321/231");
        assert_eq!(Biword::empty().to_string(), "e");
        let big = Biword::from_letters(vec![10, 2], vec![1, 10]).unwrap();
        assert_eq!(big.to_string(), "(10,2)/(1,10)");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_words(3, 2).len(), 9);
        assert_eq!(all_words(2, 0), vec![Word::empty()]);
        assert_eq!(all_biwords(2, 2).len(), 16);
        let reducible = all_biwords(2, 2).into_iter().filter(|b| !b.is_irreducible()).count();
        assert_eq!(reducible, 3);
    }
}
