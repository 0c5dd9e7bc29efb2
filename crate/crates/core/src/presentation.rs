//! Group presentations: the one-relator record `<X; R^n>` and general finite
//! presentations with named generators.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{cyclic_normal_form, exponent_vector, root_and_exponent, CyclicWord, Word};

/// Anything with a rank and a finite relator list.
pub trait FinitePresentation {
    fn rank(&self) -> usize;
    fn relator_words(&self) -> Vec<Word>;
}

/// `<x_1..x_m; R^n>` with `R` cyclically reduced and not a proper power.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OneRelatorPresentation {
    rank: usize,
    root: CyclicWord,
    exponent: u32,
}

impl OneRelatorPresentation {
    /// Splits `relator` into root and exponent.
    pub fn new(rank: usize, relator: &Word) -> Result<Self> {
        if rank == 0 {
            return Err(Error::domain("a presentation needs at least one generator"));
        }
        relator.check_rank(rank)?;
        let (root, exponent) = root_and_exponent(relator)?;
        Ok(OneRelatorPresentation { rank, root, exponent })
    }

    pub fn from_root(rank: usize, root: &Word, exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::domain("exponent must be at least 1"));
        }
        let p = Self::new(rank, root)?;
        if p.exponent != 1 {
            return Err(Error::domain("root is a proper power"));
        }
        Ok(OneRelatorPresentation { exponent, ..p })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn root(&self) -> &CyclicWord {
        &self.root
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn relator(&self) -> Word {
        self.root.word().pow(self.exponent as i64)
    }

    /// Torsion case: `m >= 2` and `n >= 2`.
    pub fn has_torsion(&self) -> bool {
        self.rank >= 2 && self.exponent >= 2
    }

    /// The torsion-free quotient `<X; R>`.
    pub fn hat(&self) -> Self {
        OneRelatorPresentation { exponent: 1, ..self.clone() }
    }

    pub fn require_torsion(&self) -> Result<()> {
        if self.exponent < 2 {
            return Err(Error::domain(format!("exponent {} < 2: no torsion", self.exponent)));
        }
        Ok(())
    }

    pub fn to_named(&self, names: Vec<String>) -> Result<Presentation> {
        Presentation::new(names, vec![self.relator()])
    }
}

impl fmt::Debug for OneRelatorPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<rank {}; {:?}^{}>", self.rank, self.root, self.exponent)
    }
}

impl FinitePresentation for OneRelatorPresentation {
    fn rank(&self) -> usize {
        self.rank
    }

    fn relator_words(&self) -> Vec<Word> {
        vec![self.relator()]
    }
}

/// A finite presentation whose generators carry names.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::domain(format!("duplicate generator name {g:?}")));
            }
        }
        for r in &relators {
            r.check_rank(generators.len())?;
        }
        Ok(Presentation { generators, relators })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name).map(|i| i + 1)
    }

    /// `Some` when there is exactly one nonempty relator.
    pub fn as_one_relator(&self) -> Option<OneRelatorPresentation> {
        match self.relators.as_slice() {
            [r] if !r.cyclically_reduced().is_empty() => OneRelatorPresentation::new(self.rank(), r).ok(),
            _ => None,
        }
    }

    pub fn abelian_invariants(&self) -> AbelianInvariants {
        abelian_invariants(self)
    }

    /// Relator classes up to rotation and inversion, sorted; used to compare presentations.
    pub fn relator_classes(&self) -> Vec<CyclicWord> {
        let mut v: Vec<CyclicWord> = self
            .relators
            .iter()
            .map(|r| {
                let c = cyclic_normal_form(r);
                let ci = c.inverse();
                c.min(ci)
            })
            .collect();
        v.sort();
        v
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}; {:?}>", self.generators.join(","), self.relators)
    }
}

impl FinitePresentation for Presentation {
    fn rank(&self) -> usize {
        self.generators.len()
    }

    fn relator_words(&self) -> Vec<Word> {
        self.relators.clone()
    }
}

/// `Z^free_rank + Z/d_1 + ... + Z/d_k` with `1 < d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

/// Abelianization via Smith normal form of the exponent-sum matrix.
pub fn abelian_invariants<P: FinitePresentation + ?Sized>(p: &P) -> AbelianInvariants {
    let rank = p.rank();
    let rows: Vec<Vec<i128>> = p
        .relator_words()
        .iter()
        .map(|r| exponent_vector(r, rank).into_iter().map(i128::from).collect())
        .collect();
    let diag = smith_diagonal(rows, rank);
    let nonzero: Vec<u64> = diag.iter().filter(|&&d| d != 0).map(|&d| d.unsigned_abs() as u64).collect();
    AbelianInvariants {
        free_rank: rank - nonzero.len(),
        torsion: nonzero.into_iter().filter(|&d| d > 1).collect(),
    }
}

/// Nonzero-or-zero diagonal of the Smith normal form, in divisibility order.
fn smith_diagonal(mut a: Vec<Vec<i128>>, cols: usize) -> Vec<i128> {
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                let q = a[i][t] / a[t][t];
                if q != 0 {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0][t..cols].iter_mut().zip(&top[t][t..cols]) {
                        *x -= q * y;
                    }
                }
                if a[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / a[t][t];
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    done = false;
                }
            }
            if done {
                // the pivot must divide the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % a[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let (top, rest) = a.split_at_mut(i);
                        for (x, y) in top[t][t..cols].iter_mut().zip(&rest[0][t..cols]) {
                            *x += y;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/col t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}
