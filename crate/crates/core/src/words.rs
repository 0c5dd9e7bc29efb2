//! Free-group word algebra.
//!
//! Generators are numbered `1..=m` and carry no names; a [`Letter`] is a
//! generator index together with a sign. All words handed out by this module
//! are freely reduced.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A signed generator: `+g` stands for `x_g`, `-g` for its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, positive: bool) -> Self {
        assert!(generator >= 1, "generator indices start at 1");
        let g = generator as i32;
        Letter(if positive { g } else { -g })
    }

    /// Builds a letter from its signed encoding. Panics on zero.
    pub fn from_signed(value: i32) -> Self {
        assert!(value != 0, "zero is not a letter");
        Letter(value)
    }

    pub fn gen(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Position of the letter in the alphabet `x1, x1^-1, x2, x2^-1, ...`.
    pub fn alphabet_index(self) -> usize {
        2 * (self.gen() - 1) + usize::from(!self.is_positive())
    }

    pub fn from_alphabet_index(i: usize) -> Self {
        Letter::new(i / 2 + 1, i.is_multiple_of(2))
    }
}

// (index, sign) lexicographically, with +1 before -1.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet_index().cmp(&other.alphabet_index())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.gen())
        } else {
            write!(f, "x{}^-1", self.gen())
        }
    }
}

/// A freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence. No rank check.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Convenience constructor from signed integers; zero entries are rejected.
    pub fn from_signed(letters: &[i32]) -> Self {
        Word::reduce(letters.iter().map(|&l| Letter::from_signed(l)))
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g, true)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `self^k`, negative exponents allowed.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `u^-1 self u`.
    pub fn conjugate_by(&self, u: &Word) -> Self {
        u.inverse().concat(self).concat(u)
    }

    /// Largest generator index occurring, or 0 for the empty word.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.gen()).max().unwrap_or(0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        match self.0.iter().find(|l| l.gen() > rank) {
            Some(l) => Err(Error::GeneratorOutOfRange { index: l.gen(), rank }),
            None => Ok(()),
        }
    }

    /// Sorted, deduplicated generator indices occurring in the word.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.0.iter().map(|l| l.gen()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => self.0.len() == 1 || *a != b.inverse(),
            _ => true,
        }
    }

    /// Splits `self = u c u^-1` with `c` cyclically reduced; returns `(u, c)`.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let l = &self.0;
        let mut i = 0;
        while l.len() >= 2 * (i + 1) && l[i] == l[l.len() - 1 - i].inverse() {
            i += 1;
        }
        (Word(l[..i].to_vec()), Word(l[i..l.len() - i].to_vec()))
    }

    pub fn cyclically_reduced(&self) -> Word {
        self.cyclic_reduction().1
    }

    /// Rotation `w[k..] w[..k]` of the letter sequence (no reduction).
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::empty();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Replaces every letter `x_g^e` by `images[g-1]^e`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        Word::reduce(self.0.iter().flat_map(|l| {
            let img = &images[l.gen() - 1];
            if l.is_positive() {
                img.0.clone()
            } else {
                img.inverse().0
            }
        }))
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

/// Freely reduces `raw` (signed generator indices) in the free group of the given rank.
pub fn free_reduce(raw: &[i32], rank: usize) -> Result<Word> {
    for &l in raw {
        if l == 0 || l.unsigned_abs() as usize > rank {
            return Err(Error::GeneratorOutOfRange { index: l.unsigned_abs() as usize, rank });
        }
    }
    Ok(Word::from_signed(raw))
}

/// A conjugacy class of the free group, stored as the least rotation of a
/// cyclically reduced representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CyclicWord(Word);

impl CyclicWord {
    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> CyclicWord {
        cyclic_normal_form(&self.0.inverse())
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.support()
    }

    /// All distinct rotations of the representative.
    pub fn rotations(&self) -> Vec<Word> {
        let mut out: Vec<Word> = (0..self.0.len().max(1)).map(|k| self.0.rotate(k)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Accepts `w` only if it is already in normal form.
    pub fn from_normal_form(w: Word) -> Option<CyclicWord> {
        let c = cyclic_normal_form(&w);
        (c.0 == w).then_some(c)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.0)
    }
}

/// Canonical representative of the conjugacy class of `w`.
pub fn cyclic_normal_form(w: &Word) -> CyclicWord {
    let c = w.cyclically_reduced();
    let n = c.len();
    let mut best = 0;
    for k in 1..n {
        let better = (0..n)
            .map(|i| c.0[(k + i) % n].cmp(&c.0[(best + i) % n]))
            .find(|o| *o != Ordering::Equal)
            == Some(Ordering::Less);
        if better {
            best = k;
        }
    }
    CyclicWord(c.rotate(best))
}

/// Writes the cyclic reduction of `w` as `root^n` with `n` maximal.
pub fn root_and_exponent(w: &Word) -> Result<(CyclicWord, u32)> {
    let c = w.cyclically_reduced();
    if c.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = c.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (0..n - p).all(|i| c.0[i] == c.0[i + p]) {
            let root = cyclic_normal_form(&Word(c.0[..p].to_vec()));
            return Ok((root, (n / p) as u32));
        }
    }
    unreachable!("the full length is always a period")
}

/// Signed number of occurrences of generator `g`.
pub fn exponent_sum(w: &Word, g: usize) -> i64 {
    w.0.iter()
        .filter(|l| l.gen() == g)
        .map(|l| if l.is_positive() { 1 } else { -1 })
        .sum()
}

/// Exponent-sum vector `(e_1, .., e_rank)`.
pub fn exponent_vector(w: &Word, rank: usize) -> Vec<i64> {
    let mut v = vec![0; rank];
    for l in &w.0 {
        v[l.gen() - 1] += if l.is_positive() { 1 } else { -1 };
    }
    v
}

/// `[u, v] = u v u^-1 v^-1`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.concat(v).concat(&u.inverse()).concat(&v.inverse())
}

/// All freely reduced words of length exactly `len` over rank `rank`, in
/// lexicographic order.
pub fn reduced_words_of_length(rank: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * (2 * rank).saturating_sub(1).max(1));
        for w in &out {
            for i in 0..2 * rank {
                let l = Letter::from_alphabet_index(i);
                if w.0.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out = next;
    }
    out
}

/// All freely reduced words of length `<= max_len`, shortlex ordered.
pub fn reduced_words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|l| reduced_words_of_length(rank, l)).collect()
}

/// Cyclic normal forms of length exactly `len` that are not proper powers,
/// in increasing order.
pub fn primitive_cyclic_words(rank: usize, len: usize) -> Vec<CyclicWord> {
    let mut out: Vec<CyclicWord> = reduced_words_of_length(rank, len)
        .into_iter()
        .filter(|w| w.is_cyclically_reduced())
        .filter_map(CyclicWord::from_normal_form)
        .filter(|c| matches!(root_and_exponent(c.word()), Ok((_, 1))))
        .collect();
    out.sort();
    out
}
