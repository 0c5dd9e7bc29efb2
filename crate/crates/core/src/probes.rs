//! Bounded searches for subgroup phenomena in `<X; R^n>`: conjugation
//! witnesses against malnormality of a cyclic subgroup, membership in the
//! normal closure `T` of the root, and an exhaustive check of the ends
//! dichotomy over small roots.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use serde::Serialize;

use crate::classify::{classify_ends_with, Ends};
use crate::dehn::{DehnReduction, RelatorTable};
use crate::error::{Error, Result};
use crate::presentation::OneRelatorPresentation;
use crate::quotients::{certify_nontrivial, FiniteQuotientHom};
use crate::verdict::{Exhausted, Verdict};
use crate::whitehead::Minimizer;
use crate::words::{exponent_vector, primitive_cyclic_words, reduced_words_up_to, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_y_length: usize,
    /// Cap on `|i|`, `|j|`; for `T`-membership, the number of conjugates.
    pub max_power: u32,
    /// `y = x^k` is excluded for `|k|` up to this.
    pub max_coset_power: u32,
}

impl SearchBounds {
    pub fn new(max_y_length: usize, max_power: u32, max_coset_power: u32) -> Result<Self> {
        if max_y_length == 0 || max_power == 0 || max_coset_power == 0 {
            return Err(Error::domain("search bounds must be positive"));
        }
        Ok(SearchBounds { max_y_length, max_power, max_coset_power })
    }
}

/// `y^-1 x^i y = x^j` with `y` not among `x^k`, `|k| <= exclusion_bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MalnormalityWitness {
    pub x: Word,
    pub y: Word,
    pub i: i64,
    pub j: i64,
    pub exclusion_bound: u32,
    pub relation: DehnReduction,
}

impl MalnormalityWitness {
    /// Rechecks the relation and every power exclusion with a fresh solver.
    pub fn verify(&self, p: &OneRelatorPresentation) -> Result<bool> {
        let table = RelatorTable::build(p)?;
        let lhs = self.x.pow(self.i).conjugate_by(&self.y);
        if !table.are_equal(&lhs, &self.x.pow(self.j)) || !self.relation.replays() {
            return Ok(false);
        }
        let b = self.exclusion_bound as i64;
        Ok((-b..=b).all(|k| !table.are_equal(&self.y, &self.x.pow(k))))
    }
}

fn signed_range(max: u32) -> impl Iterator<Item = i64> {
    (1..=max as i64).flat_map(|k| [k, -k])
}

pub fn malnormal_witness_search(
    p: &OneRelatorPresentation,
    x: &Word,
    bounds: SearchBounds,
) -> Result<Verdict<MalnormalityWitness>> {
    x.check_rank(p.rank())?;
    let table = RelatorTable::build(p)?;
    if table.is_trivial(x) {
        return Err(Error::domain("x is trivial in G"));
    }
    let powers: HashMap<i64, Word> = (-(bounds.max_power.max(bounds.max_coset_power) as i64)
        ..=bounds.max_power.max(bounds.max_coset_power) as i64)
        .map(|k| (k, x.pow(k)))
        .collect();
    let c = bounds.max_coset_power as i64;
    for y in reduced_words_up_to(p.rank(), bounds.max_y_length).into_iter().skip(1) {
        let mut in_coset: Option<bool> = None;
        // negative i is the same relation inverted
        for i in 1..=bounds.max_power as i64 {
            let lhs = powers[&i].conjugate_by(&y);
            for j in signed_range(bounds.max_power) {
                let red = table.reduce(&lhs.concat(&powers[&j].inverse()));
                if !red.result.is_empty() {
                    continue;
                }
                let excluded =
                    *in_coset.get_or_insert_with(|| (-c..=c).any(|k| table.are_equal(&y, &powers[&k])));
                if excluded {
                    break;
                }
                return Ok(Verdict::ProvenTrue(MalnormalityWitness {
                    x: x.clone(),
                    y,
                    i,
                    j,
                    exclusion_bound: bounds.max_coset_power,
                    relation: red,
                }));
            }
            if in_coset == Some(true) {
                break;
            }
        }
    }
    Ok(Verdict::Unknown(Exhausted::new(format!(
        "|y| <= {}, |i|,|j| <= {}, <x>-exclusion up to |k| <= {}",
        bounds.max_y_length, bounds.max_power, bounds.max_coset_power
    ))))
}

/// `w = prod u_l R^{e_l} u_l^-1` in the free group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugateProduct {
    pub factors: Vec<(Word, i8)>,
}

impl ConjugateProduct {
    pub fn evaluate(&self, root: &Word) -> Word {
        self.factors.iter().fold(Word::empty(), |acc, (u, e)| {
            acc.concat(&root.pow(*e as i64).conjugate_by(&u.inverse()))
        })
    }

    pub fn replays(&self, root: &Word, w: &Word) -> bool {
        &self.evaluate(root) == w
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NonMembership {
    /// Exponent sums of `w` are not a multiple of those of `R`.
    ExponentSum { word: Vec<i64>, root: Vec<i64> },
    /// A quotient of `<X; R>` in which `w` survives.
    Quotient(FiniteQuotientHom),
}

fn exponent_obstruction(w: &[i64], r: &[i64]) -> bool {
    match r.iter().position(|&e| e != 0) {
        None => w.iter().any(|&e| e != 0),
        Some(k) => {
            if w[k] % r[k] != 0 {
                return true;
            }
            let lambda = w[k] / r[k];
            w.iter().zip(r).any(|(a, b)| *a != lambda * b)
        }
    }
}

/// Semi-decides `w in T = <<R>>`, i.e. `w = 1` in `<X; R>`.
pub fn t_membership(
    p: &OneRelatorPresentation,
    w: &Word,
    bounds: SearchBounds,
    max_degree: usize,
) -> Result<Verdict<ConjugateProduct, NonMembership>> {
    w.check_rank(p.rank())?;
    let root = p.root().word().clone();
    let ew = exponent_vector(w, p.rank());
    let er = exponent_vector(&root, p.rank());
    if exponent_obstruction(&ew, &er) {
        return Ok(Verdict::ProvenFalse(NonMembership::ExponentSum { word: ew, root: er }));
    }
    if w.is_empty() {
        return Ok(Verdict::ProvenTrue(ConjugateProduct { factors: Vec::new() }));
    }

    let mut singles: Vec<(Word, (Word, i8))> = Vec::new();
    for u in reduced_words_up_to(p.rank(), bounds.max_y_length) {
        for e in [1i8, -1] {
            singles.push((root.pow(e as i64).conjugate_by(&u.inverse()), (u.clone(), e)));
        }
    }
    let mut lookup: HashMap<&Word, &(Word, i8)> = HashMap::new();
    for (word, f) in &singles {
        lookup.entry(word).or_insert(f);
    }
    for count in 1..=bounds.max_power as usize {
        if let Some(factors) = split_product(w, count, &singles, &lookup) {
            return Ok(Verdict::ProvenTrue(ConjugateProduct { factors }));
        }
    }

    let hat = p.hat();
    if let Verdict::ProvenTrue(h) = certify_nontrivial(&hat, w, max_degree)? {
        return Ok(Verdict::ProvenFalse(NonMembership::Quotient(h)));
    }
    Ok(Verdict::Unknown(Exhausted::new(format!(
        "<= {} conjugates with |u| <= {}; quotients of <X; R> up to S_{}",
        bounds.max_power, bounds.max_y_length, max_degree
    ))))
}

fn split_product(
    w: &Word,
    count: usize,
    singles: &[(Word, (Word, i8))],
    lookup: &HashMap<&Word, &(Word, i8)>,
) -> Option<Vec<(Word, i8)>> {
    if count == 1 {
        return lookup.get(w).map(|f| vec![(*f).clone()]);
    }
    for (word, f) in singles {
        let rest = word.inverse().concat(w);
        if let Some(mut tail) = split_product(&rest, count - 1, singles, lookup) {
            tail.insert(0, f.clone());
            return Some(tail);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub rank: usize,
    pub max_root_length: usize,
    pub exponent: u32,
    pub roots_checked: usize,
    pub expected_roots: u64,
    pub violations: Vec<Word>,
    /// `"ends_g/ends_ghat" -> count`.
    pub tally: BTreeMap<String, usize>,
    pub runtime_ms: u128,
}

pub const HARNESS_MAX_LENGTH_RANK2: usize = 8;
pub const HARNESS_MAX_LENGTH_RANK3: usize = 6;

/// Checks the ends dichotomy on every non-power cyclic root up to the given length.
pub fn ends_lemma_harness(rank: usize, max_root_length: usize, exponent: u32) -> Result<HarnessReport> {
    let cap = match rank {
        2 => HARNESS_MAX_LENGTH_RANK2,
        3 => HARNESS_MAX_LENGTH_RANK3,
        _ => return Err(Error::ResourceCap { what: "harness rank", value: rank, cap: 3 }),
    };
    if max_root_length > cap {
        return Err(Error::ResourceCap { what: "harness root length", value: max_root_length, cap });
    }
    if exponent < 2 {
        return Err(Error::domain("harness exponent must be at least 2"));
    }
    let start = Instant::now();
    let minimizer = Minimizer::new(rank)?;
    let mut report = HarnessReport {
        rank,
        max_root_length,
        exponent,
        roots_checked: 0,
        expected_roots: (1..=max_root_length).map(|l| primitive_cyclic_count(rank as u64, l as u64)).sum(),
        violations: Vec::new(),
        tally: BTreeMap::new(),
        runtime_ms: 0,
    };
    for len in 1..=max_root_length {
        for root in primitive_cyclic_words(rank, len) {
            let p = OneRelatorPresentation::from_root(rank, root.word(), exponent)?;
            let c = classify_ends_with(&p, &minimizer)?;
            report.roots_checked += 1;
            *report.tally.entry(format!("{}/{}", ends_label(c.ends_g), ends_label(c.ends_ghat))).or_default() += 1;
            if !c.lemma_consistent {
                report.violations.push(root.word().clone());
            }
        }
    }
    report.runtime_ms = start.elapsed().as_millis();
    Ok(report)
}

fn ends_label(e: Ends) -> &'static str {
    match e {
        Ends::Zero => "zero",
        Ends::One => "one",
        Ends::Two => "two",
        Ends::Infinite => "infinite",
    }
}

/// Number of conjugacy classes of cyclically reduced non-power words of
/// length `len` in `F_rank`, by Möbius inversion of the trace formula
/// `(2m-1)^L + (m-1)(-1)^L + m`.
pub fn primitive_cyclic_count(rank: u64, len: u64) -> u64 {
    let cyclically_reduced = |l: u64| -> i64 {
        let sign = if l.is_multiple_of(2) { 1 } else { -1 };
        (2 * rank as i64 - 1).pow(l as u32) + (rank as i64 - 1) * sign + rank as i64
    };
    let aperiodic: i64 = (1..=len).filter(|d| len.is_multiple_of(*d)).map(|d| mobius(len / d) * cyclically_reduced(d)).sum();
    (aperiodic / len as i64) as u64
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}
