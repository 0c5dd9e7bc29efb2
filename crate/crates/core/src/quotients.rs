//! Homomorphisms into small symmetric groups, used as certificates that an
//! element is nontrivial or has at least a given order.
//!
//! Permutations act on `{0..k-1}` and compose left to right: the image of
//! `g1 g2` sends `i` to `image(g2)[image(g1)[i]]`.

use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::FinitePresentation;
use crate::verdict::{Exhausted, Verdict};
use crate::words::Word;

/// Largest symmetric group searched unless a caller raises the cap.
pub const DEFAULT_DEGREE_CAP: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(k: usize) -> Self {
        Perm((0..k as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if (i as usize) >= images.len() || std::mem::replace(&mut seen[i as usize], true) {
                return None;
            }
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut order = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// All permutations of degree `k` in lexicographic order of image vectors.
pub fn all_perms(k: usize) -> Vec<Perm> {
    let mut cur: Vec<u8> = (0..k as u8).collect();
    let mut out = vec![Perm(cur.clone())];
    // next permutation
    while let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Perm(cur.clone()));
    }
    out
}

/// A homomorphism to `S_k` given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteQuotientHom {
    pub degree: usize,
    pub images: Vec<Perm>,
}

impl FiniteQuotientHom {
    pub fn image_of(&self, w: &Word) -> Perm {
        let inverses: Vec<Perm> = self.images.iter().map(Perm::inverse).collect();
        image_with(&self.images, &inverses, w, self.degree)
    }

    /// Every relator maps to the identity.
    pub fn satisfies<P: FinitePresentation + ?Sized>(&self, p: &P) -> bool {
        self.images.len() == p.rank() && p.relator_words().iter().all(|r| self.image_of(r).is_identity())
    }
}

fn image_with(images: &[Perm], inverses: &[Perm], w: &Word, k: usize) -> Perm {
    let mut pts: Vec<u8> = (0..k as u8).collect();
    for l in w.letters() {
        let p = if l.is_positive() { &images[l.gen() - 1] } else { &inverses[l.gen() - 1] };
        for x in pts.iter_mut() {
            *x = p.0[*x as usize];
        }
    }
    Perm(pts)
}

fn maps_to_identity(images: &[&Perm], inverses: &[&Perm], w: &Word, k: usize) -> bool {
    (0..k as u8).all(|start| {
        let mut x = start;
        for l in w.letters() {
            let p = if l.is_positive() { images[l.gen() - 1] } else { inverses[l.gen() - 1] };
            x = p.0[x as usize];
        }
        x == start
    })
}

fn check_degree(k: usize, cap: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("degree must be at least 1"));
    }
    if k > cap {
        return Err(Error::ResourceCap { what: "quotient degree", value: k, cap });
    }
    Ok(())
}

/// Visits every homomorphism to `S_k` in lexicographic order of image tuples.
///
/// Relators are checked as soon as all generators they involve are assigned.
/// Returns whether `visit` stopped the walk early.
pub fn for_each_hom<P, F>(p: &P, k: usize, cap: usize, mut visit: F) -> Result<bool>
where
    P: FinitePresentation + ?Sized,
    F: FnMut(&[&Perm]) -> ControlFlow<()>,
{
    check_degree(k, cap)?;
    let rank = p.rank();
    let perms = all_perms(k);
    let inverses: Vec<Perm> = perms.iter().map(Perm::inverse).collect();
    let mut by_level: Vec<Vec<Word>> = vec![Vec::new(); rank + 1];
    for r in p.relator_words() {
        by_level[r.max_generator()].push(r);
    }
    // level-0 relators are empty words and always hold
    let mut chosen: Vec<usize> = Vec::with_capacity(rank);
    Ok(descend(&perms, &inverses, &by_level, k, &mut chosen, rank, &mut visit).is_break())
}

fn descend<F>(
    perms: &[Perm],
    inverses: &[Perm],
    by_level: &[Vec<Word>],
    k: usize,
    chosen: &mut Vec<usize>,
    rank: usize,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[&Perm]) -> ControlFlow<()>,
{
    if chosen.len() == rank {
        let imgs: Vec<&Perm> = chosen.iter().map(|&i| &perms[i]).collect();
        return visit(&imgs);
    }
    let level = chosen.len() + 1;
    for idx in 0..perms.len() {
        chosen.push(idx);
        let imgs: Vec<&Perm> = chosen.iter().map(|&i| &perms[i]).collect();
        let invs: Vec<&Perm> = chosen.iter().map(|&i| &inverses[i]).collect();
        let ok = by_level[level].iter().all(|r| maps_to_identity(&imgs, &invs, r, k));
        if ok {
            descend(perms, inverses, by_level, k, chosen, rank, visit)?;
        }
        chosen.pop();
    }
    ControlFlow::Continue(())
}

pub fn enumerate_homs<P: FinitePresentation + ?Sized>(p: &P, k: usize) -> Result<Vec<FiniteQuotientHom>> {
    enumerate_homs_with_cap(p, k, DEFAULT_DEGREE_CAP)
}

pub fn enumerate_homs_with_cap<P: FinitePresentation + ?Sized>(
    p: &P,
    k: usize,
    cap: usize,
) -> Result<Vec<FiniteQuotientHom>> {
    let mut out = Vec::new();
    for_each_hom(p, k, cap, |imgs| {
        out.push(FiniteQuotientHom { degree: k, images: imgs.iter().map(|&q| q.clone()).collect() });
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn count_homs<P: FinitePresentation + ?Sized>(p: &P, k: usize, cap: usize) -> Result<u64> {
    let mut n = 0u64;
    for_each_hom(p, k, cap, |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

/// First homomorphism (degrees `2..=max_degree`, lexicographic within a degree)
/// satisfying `pred` on the generator images.
fn find_hom<P, F>(p: &P, max_degree: usize, cap: usize, mut pred: F) -> Result<Option<FiniteQuotientHom>>
where
    P: FinitePresentation + ?Sized,
    F: FnMut(&[&Perm], &[Perm], usize) -> bool,
{
    check_degree(max_degree.max(1), cap)?;
    for k in 2..=max_degree {
        let mut found = None;
        let mut inverses = Vec::new();
        for_each_hom(p, k, cap, |imgs| {
            inverses.clear();
            inverses.extend(imgs.iter().map(|q| q.inverse()));
            if pred(imgs, &inverses, k) {
                found = Some(FiniteQuotientHom { degree: k, images: imgs.iter().map(|&q| q.clone()).collect() });
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// `ProvenTrue(hom)` if some quotient of degree `<= max_degree` sees `w` as
/// nontrivial. Never `ProvenFalse`.
pub fn certify_nontrivial<P: FinitePresentation + ?Sized>(
    p: &P,
    w: &Word,
    max_degree: usize,
) -> Result<Verdict<FiniteQuotientHom>> {
    certify_nontrivial_with_cap(p, w, max_degree, DEFAULT_DEGREE_CAP)
}

pub fn certify_nontrivial_with_cap<P: FinitePresentation + ?Sized>(
    p: &P,
    w: &Word,
    max_degree: usize,
    cap: usize,
) -> Result<Verdict<FiniteQuotientHom>> {
    w.check_rank(p.rank())?;
    if w.is_empty() {
        return Err(Error::domain("the empty word is the identity; nothing to certify"));
    }
    let hit = find_hom(p, max_degree, cap, |imgs, inv, k| {
        let invs: Vec<&Perm> = inv.iter().collect();
        !maps_to_identity(imgs, &invs, w, k)
    })?;
    Ok(match hit {
        Some(h) => Verdict::ProvenTrue(h),
        None => Verdict::Unknown(Exhausted::new(format!("all homomorphisms into S_2..S_{max_degree}"))),
    })
}

/// A quotient in which the image of the element has the given order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderWitness {
    pub hom: FiniteQuotientHom,
    pub image_order: u64,
}

/// Certifies `w^e != 1` for every `0 < e < d`: each such `e` is excluded by
/// some witness whose image order does not divide `e`.
pub fn certify_order_lower_bound<P: FinitePresentation + ?Sized>(
    p: &P,
    w: &Word,
    d: u64,
    max_degree: usize,
) -> Result<Verdict<Vec<OrderWitness>>> {
    certify_order_lower_bound_with_cap(p, w, d, max_degree, DEFAULT_DEGREE_CAP)
}

pub fn certify_order_lower_bound_with_cap<P: FinitePresentation + ?Sized>(
    p: &P,
    w: &Word,
    d: u64,
    max_degree: usize,
    cap: usize,
) -> Result<Verdict<Vec<OrderWitness>>> {
    w.check_rank(p.rank())?;
    let mut pending: Vec<u64> = (1..d).collect();
    let mut witnesses = Vec::new();
    if pending.is_empty() {
        return Ok(Verdict::ProvenTrue(witnesses));
    }
    check_degree(max_degree.max(1), cap)?;
    for k in 2..=max_degree {
        for_each_hom(p, k, cap, |imgs| {
            let inverses: Vec<Perm> = imgs.iter().map(|q| q.inverse()).collect();
            let image = image_with(&imgs.iter().map(|&q| q.clone()).collect::<Vec<_>>(), &inverses, w, k);
            let o = image.order();
            let before = pending.len();
            pending.retain(|e| e % o == 0);
            if pending.len() < before {
                witnesses.push(OrderWitness {
                    hom: FiniteQuotientHom { degree: k, images: imgs.iter().map(|&q| q.clone()).collect() },
                    image_order: o,
                });
            }
            if pending.is_empty() {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if pending.is_empty() {
            return Ok(Verdict::ProvenTrue(witnesses));
        }
    }
    Ok(Verdict::Unknown(Exhausted::new(format!(
        "S_2..S_{max_degree}; exponents {pending:?} not excluded"
    ))))
}
