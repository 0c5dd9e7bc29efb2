//! Word problem for `<X; R^n>`, `n >= 2`, by greedy Dehn reduction.
//!
//! Every freely reduced nontrivial relation contains a subword of a cyclic
//! rotation of `R^{±n}` longer than `(n-1)|R|`. Replacing such a piece by the
//! inverse of the rest of its rotation shortens the word, so reduction to a
//! fixed point decides triviality.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::presentation::OneRelatorPresentation;
use crate::words::{Letter, Word};

/// Long pieces of `R^{±n}` and their shorter replacements.
#[derive(Debug, Clone)]
pub struct RelatorTable {
    threshold: usize,
    max_len: usize,
    pieces: HashMap<Vec<Letter>, Vec<Letter>>,
}

/// One replacement `w = p S q -> p C q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DehnStep {
    pub position: usize,
    pub piece: Word,
    pub replacement: Word,
}

/// Trace of a reduction to a fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DehnReduction {
    pub input: Word,
    pub steps: Vec<DehnStep>,
    pub result: Word,
}

impl RelatorTable {
    pub fn build(p: &OneRelatorPresentation) -> Result<Self> {
        p.require_torsion()?;
        let relator = p.relator();
        let total = relator.len();
        let threshold = (p.exponent() as usize - 1) * p.root().len();
        let mut pieces: HashMap<Vec<Letter>, Vec<Letter>> = HashMap::new();
        for base in [relator.clone(), relator.inverse()] {
            for k in 0..total {
                let rot = base.rotate(k);
                let letters = rot.letters();
                for len in threshold + 1..=total {
                    let piece = letters[..len].to_vec();
                    // rot = piece * rest, so piece = rest^-1
                    let replacement: Vec<Letter> = letters[len..].iter().rev().map(|l| l.inverse()).collect();
                    match pieces.get(&piece) {
                        Some(existing) if (existing.len(), existing) <= (replacement.len(), &replacement) => {}
                        _ => {
                            pieces.insert(piece, replacement);
                        }
                    }
                }
            }
        }
        Ok(RelatorTable { threshold, max_len: total, pieces })
    }

    /// Pieces must be strictly longer than this.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (Word, Word)> + '_ {
        self.pieces
            .iter()
            .map(|(s, c)| (Word::reduce(s.iter().copied()), Word::reduce(c.iter().copied())))
    }

    pub fn lookup(&self, piece: &[Letter]) -> Option<&[Letter]> {
        self.pieces.get(piece).map(Vec::as_slice)
    }

    /// Leftmost-longest replacement, if any piece occurs in `w`.
    pub fn step(&self, w: &Word) -> Option<(Word, DehnStep)> {
        let letters = w.letters();
        for i in 0..letters.len() {
            let longest = self.max_len.min(letters.len() - i);
            for len in (self.threshold + 1..=longest).rev() {
                if let Some(rep) = self.pieces.get(&letters[i..i + len]) {
                    let out = Word::reduce(
                        letters[..i].iter().chain(rep.iter()).chain(letters[i + len..].iter()).copied(),
                    );
                    let step = DehnStep {
                        position: i,
                        piece: Word::reduce(letters[i..i + len].iter().copied()),
                        replacement: Word::reduce(rep.iter().copied()),
                    };
                    return Some((out, step));
                }
            }
        }
        None
    }

    pub fn reduce(&self, w: &Word) -> DehnReduction {
        let mut cur = w.clone();
        let mut steps = Vec::new();
        while let Some((next, step)) = self.step(&cur) {
            debug_assert!(next.len() < cur.len());
            steps.push(step);
            cur = next;
        }
        DehnReduction { input: w.clone(), steps, result: cur }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.reduce(w).result.is_empty()
    }

    pub fn are_equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&u.concat(&v.inverse()))
    }
}

impl DehnReduction {
    /// Re-executes the recorded steps by direct substitution.
    pub fn replays(&self) -> bool {
        let mut cur = self.input.clone();
        for s in &self.steps {
            let l = cur.letters();
            let end = s.position + s.piece.len();
            if end > l.len() || l[s.position..end] != *s.piece.letters() {
                return false;
            }
            let next = Word::reduce(
                l[..s.position].iter().chain(s.replacement.letters()).chain(l[end..].iter()).copied(),
            );
            if next.len() >= cur.len() {
                return false;
            }
            cur = next;
        }
        cur == self.result
    }
}

/// Dehn step on a standalone word.
pub fn dehn_step(w: &Word, table: &RelatorTable) -> Option<Word> {
    table.step(w).map(|(out, _)| out)
}

pub fn is_trivial(w: &Word, p: &OneRelatorPresentation) -> Result<bool> {
    w.check_rank(p.rank())?;
    Ok(RelatorTable::build(p)?.is_trivial(w))
}

pub fn are_equal(u: &Word, v: &Word, p: &OneRelatorPresentation) -> Result<bool> {
    is_trivial(&u.concat(&v.inverse()), p)
}
