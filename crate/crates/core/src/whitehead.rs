//! Whitehead automorphisms of the free group `F_m` and cyclic-length
//! minimization over the `Aut(F_m)` orbit of a word.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{cyclic_normal_form, CyclicWord, Letter, Word};

/// Rank above which the type-II enumeration is refused unless the cap is raised.
pub const DEFAULT_MAX_RANK: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub enum WhiteheadAut {
    /// Type I: `x_g -> images[g-1]`, a signed permutation of the basis.
    Permutation(Vec<Letter>),
    /// Type II: multiplier `a` and letter set `A` with `a` in `A`, `a^-1` not in `A`.
    /// Each generator `x` other than `a^{±1}` goes to
    /// `a^-[x^-1 in A] x a^[x in A]`.
    Multiplier { multiplier: Letter, set: Vec<Letter> },
}

impl fmt::Debug for WhiteheadAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhiteheadAut::Permutation(images) => write!(f, "I{images:?}"),
            WhiteheadAut::Multiplier { multiplier, set } => write!(f, "II({multiplier:?}, {set:?})"),
        }
    }
}

impl WhiteheadAut {
    pub fn transposition(rank: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<Letter> = (1..=rank).map(|g| Letter::new(g, true)).collect();
        images.swap(i - 1, j - 1);
        WhiteheadAut::Permutation(images)
    }

    pub fn inversion(rank: usize, i: usize) -> Self {
        let images = (1..=rank).map(|g| Letter::new(g, g != i)).collect();
        WhiteheadAut::Permutation(images)
    }

    pub fn multiplier(multiplier: Letter, mut set: Vec<Letter>) -> Result<Self> {
        set.sort();
        set.dedup();
        if !set.contains(&multiplier) || set.contains(&multiplier.inverse()) {
            return Err(Error::domain("type-II set must contain the multiplier and not its inverse"));
        }
        Ok(WhiteheadAut::Multiplier { multiplier, set })
    }

    pub fn is_valid(&self, rank: usize) -> bool {
        match self {
            WhiteheadAut::Permutation(images) => {
                let mut seen = vec![false; rank + 1];
                images.len() == rank
                    && images.iter().all(|l| l.gen() <= rank && !std::mem::replace(&mut seen[l.gen()], true))
            }
            WhiteheadAut::Multiplier { multiplier, set } => {
                multiplier.gen() <= rank
                    && set.iter().all(|l| l.gen() <= rank)
                    && set.contains(multiplier)
                    && !set.contains(&multiplier.inverse())
            }
        }
    }

    /// Type-II moves that never change cyclic length: `A = {a}` (identity)
    /// and `A = L \ {a^-1}` (inner).
    pub fn is_degenerate(&self, rank: usize) -> bool {
        match self {
            WhiteheadAut::Permutation(_) => false,
            WhiteheadAut::Multiplier { set, .. } => set.len() == 1 || set.len() == 2 * rank - 1,
        }
    }

    /// Images of the basis `x_1..x_rank`.
    pub fn images(&self, rank: usize) -> Vec<Word> {
        match self {
            WhiteheadAut::Permutation(images) => images.iter().map(|&l| Word::letter(l)).collect(),
            WhiteheadAut::Multiplier { multiplier, set } => (1..=rank)
                .map(|g| {
                    let x = Letter::new(g, true);
                    if g == multiplier.gen() {
                        return Word::letter(x);
                    }
                    let mut v = Vec::with_capacity(3);
                    if set.contains(&x.inverse()) {
                        v.push(multiplier.inverse());
                    }
                    v.push(x);
                    if set.contains(&x) {
                        v.push(*multiplier);
                    }
                    Word::reduce(v)
                })
                .collect(),
        }
    }

    pub fn apply(&self, w: &Word, rank: usize) -> Word {
        w.substitute(&self.images(rank))
    }
}

/// Type-I generators (transpositions, then single inversions) followed by every
/// valid type-II automorphism, `2m * 2^(2m-2)` of them.
pub fn enumerate_whitehead_auts(rank: usize) -> Result<Vec<WhiteheadAut>> {
    enumerate_with_cap(rank, DEFAULT_MAX_RANK)
}

pub fn enumerate_with_cap(rank: usize, max_rank: usize) -> Result<Vec<WhiteheadAut>> {
    if rank == 0 {
        return Err(Error::domain("rank must be at least 1"));
    }
    if rank > max_rank {
        return Err(Error::ResourceCap { what: "whitehead rank", value: rank, cap: max_rank });
    }
    let mut out = Vec::new();
    for i in 1..=rank {
        for j in i + 1..=rank {
            out.push(WhiteheadAut::transposition(rank, i, j));
        }
    }
    for i in 1..=rank {
        out.push(WhiteheadAut::inversion(rank, i));
    }
    out.extend(type_two(rank));
    Ok(out)
}

fn type_two(rank: usize) -> impl Iterator<Item = WhiteheadAut> {
    (0..2 * rank).flat_map(move |ai| {
        let a = Letter::from_alphabet_index(ai);
        let others: Vec<Letter> = (0..2 * rank)
            .map(Letter::from_alphabet_index)
            .filter(|l| l.gen() != a.gen())
            .collect();
        (0u64..1 << others.len()).map(move |mask| {
            let mut set = vec![a];
            set.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &l)| l));
            set.sort();
            WhiteheadAut::Multiplier { multiplier: a, set }
        })
    })
}

/// Result of minimizing a word over its automorphic orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalForm {
    pub word: CyclicWord,
    pub support: Vec<usize>,
    pub witness_chain: Vec<WhiteheadAut>,
}

impl MinimalForm {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Applies the witness chain to `w` and returns the resulting normal form.
    pub fn replay(&self, w: &Word, rank: usize) -> CyclicWord {
        let mut cur = cyclic_normal_form(w);
        for aut in &self.witness_chain {
            cur = cyclic_normal_form(&aut.apply(cur.word(), rank));
        }
        cur
    }
}

/// Greedy first-improvement minimizer for a fixed rank.
#[derive(Debug, Clone)]
pub struct Minimizer {
    rank: usize,
    moves: Vec<WhiteheadAut>,
}

impl Minimizer {
    pub fn new(rank: usize) -> Result<Self> {
        Self::with_max_rank(rank, DEFAULT_MAX_RANK)
    }

    pub fn with_max_rank(rank: usize, max_rank: usize) -> Result<Self> {
        let moves = enumerate_with_cap(rank, max_rank)?
            .into_iter()
            .filter(|a| matches!(a, WhiteheadAut::Multiplier { .. }) && !a.is_degenerate(rank))
            .collect();
        Ok(Minimizer { rank, moves })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The length-changing type-II moves, in search order.
    pub fn moves(&self) -> &[WhiteheadAut] {
        &self.moves
    }

    pub fn minimize(&self, w: &Word) -> Result<MinimalForm> {
        w.check_rank(self.rank)?;
        let mut cur = cyclic_normal_form(w);
        let mut chain = Vec::new();
        'outer: loop {
            for aut in &self.moves {
                let img = cyclic_normal_form(&aut.apply(cur.word(), self.rank));
                if img.len() < cur.len() {
                    chain.push(aut.clone());
                    cur = img;
                    continue 'outer;
                }
            }
            break;
        }
        Ok(MinimalForm { support: cur.support(), word: cur, witness_chain: chain })
    }

    pub fn is_primitive(&self, w: &Word) -> Result<bool> {
        if w.cyclically_reduced().is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(self.minimize(w)?.len() == 1)
    }
}

pub fn minimize(w: &Word, rank: usize) -> Result<MinimalForm> {
    Minimizer::new(rank)?.minimize(w)
}

pub fn is_primitive(w: &Word, rank: usize) -> Result<bool> {
    Minimizer::new(rank)?.is_primitive(w)
}
