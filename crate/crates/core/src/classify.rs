//! Presentation-level classifiers for `<X; R^n>`: free-factor decomposition,
//! ends of `G` and of the torsion-free quotient, element orders, and the
//! two-generator Fuchsian test.

use serde::Serialize;

use crate::dehn::{DehnReduction, RelatorTable};
use crate::error::{Error, Result};
use crate::presentation::OneRelatorPresentation;
use crate::quotients::{certify_order_lower_bound_with_cap, OrderWitness, DEFAULT_DEGREE_CAP};
use crate::verdict::{Exhausted, Verdict};
use crate::whitehead::{MinimalForm, Minimizer};
use crate::words::{commutator, cyclic_normal_form, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ends {
    Zero,
    One,
    Two,
    Infinite,
}

/// `G = core * F(free_rank)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeFactorization {
    pub core: OneRelatorPresentation,
    pub free_rank: usize,
    /// Generators of the minimized relator, in the original numbering.
    pub support: Vec<usize>,
    pub minimal: MinimalForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EndsClassification {
    pub ends_g: Ends,
    pub ends_ghat: Ends,
    pub lemma_consistent: bool,
}

/// Renumbers the support of `w` to `1..=k`, preserving order.
fn compress_support(w: &Word, support: &[usize]) -> Word {
    Word::reduce(w.letters().iter().map(|l| {
        let g = support.iter().position(|&s| s == l.gen()).unwrap() + 1;
        Letter::new(g, l.is_positive())
    }))
}

pub fn decompose_free_factors(p: &OneRelatorPresentation) -> Result<FreeFactorization> {
    decompose_with(p, &Minimizer::new(p.rank())?)
}

pub fn decompose_with(p: &OneRelatorPresentation, minimizer: &Minimizer) -> Result<FreeFactorization> {
    let minimal = minimizer.minimize(p.root().word())?;
    let support = minimal.support.clone();
    let root = compress_support(minimal.word.word(), &support);
    let core = OneRelatorPresentation::from_root(support.len(), &root, p.exponent())?;
    Ok(FreeFactorization { free_rank: p.rank() - support.len(), core, support, minimal })
}

pub fn classify_ends(p: &OneRelatorPresentation) -> Result<EndsClassification> {
    classify_ends_with(p, &Minimizer::new(p.rank())?)
}

/// `G` is read off the minimized full relator `R^n`; the quotient `<X; R>` is
/// read off the minimized root. The two searches run independently.
pub fn classify_ends_with(p: &OneRelatorPresentation, minimizer: &Minimizer) -> Result<EndsClassification> {
    if p.rank() < 2 || p.exponent() < 2 {
        return Err(Error::domain(format!(
            "ends classification needs rank >= 2 and exponent >= 2 (got {}, {})",
            p.rank(),
            p.exponent()
        )));
    }
    let m = p.rank();

    let full = minimizer.minimize(&p.relator())?;
    let ends_g = if full.support.len() == m { Ends::One } else { Ends::Infinite };

    let root = minimizer.minimize(p.root().word())?;
    let ends_ghat = match (root.len() == 1, root.support.len() == m) {
        (true, _) if m == 2 => Ends::Two,
        (true, _) => Ends::Infinite,
        (false, true) => Ends::One,
        (false, false) => Ends::Infinite,
    };

    assert!(
        matches!(ends_g, Ends::One | Ends::Infinite),
        "a one-relator group with torsion is neither finite nor virtually cyclic"
    );
    let lemma_consistent = (ends_g == Ends::Infinite) == matches!(ends_ghat, Ends::Infinite | Ends::Two);
    Ok(EndsClassification { ends_g, ends_ghat, lemma_consistent })
}

/// Exact order `d` of an element: `w^d = 1` by Dehn reduction, and
/// `w^e != 1` for `0 < e < d` by finite quotients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionCertificate {
    pub order: u64,
    pub upper: DehnReduction,
    pub lower: Vec<OrderWitness>,
}

pub fn torsion_order(p: &OneRelatorPresentation, w: &Word, bound: u64) -> Result<Verdict<TorsionCertificate>> {
    torsion_order_with(p, w, bound, DEFAULT_DEGREE_CAP)
}

pub fn torsion_order_with(
    p: &OneRelatorPresentation,
    w: &Word,
    bound: u64,
    max_degree: usize,
) -> Result<Verdict<TorsionCertificate>> {
    if bound == 0 {
        return Err(Error::domain("order bound must be at least 1"));
    }
    w.check_rank(p.rank())?;
    let table = RelatorTable::build(p)?;
    let mut upper = None;
    for d in 1..=bound {
        let red = table.reduce(&w.pow(d as i64));
        if red.result.is_empty() {
            upper = Some((d, red));
            break;
        }
    }
    let Some((order, upper)) = upper else {
        return Ok(Verdict::Unknown(Exhausted::new(format!("no power w^d, 1 <= d <= {bound}, reduces to 1"))));
    };
    let cap = max_degree.max(DEFAULT_DEGREE_CAP);
    match certify_order_lower_bound_with_cap(p, w, order, max_degree, cap)? {
        Verdict::ProvenTrue(lower) => Ok(Verdict::ProvenTrue(TorsionCertificate { order, upper, lower })),
        Verdict::Unknown(e) => Ok(Verdict::Unknown(Exhausted::new(format!(
            "w^{order} = 1, but lower bound not certified: {}",
            e.searched
        )))),
        Verdict::ProvenFalse(_) => unreachable!("lower-bound search never disproves"),
    }
}

/// For rank 2: the root is a cyclic shift of `[a,b]` or its inverse.
pub fn is_fuchsian_2gen(p: &OneRelatorPresentation) -> Result<bool> {
    if p.rank() != 2 {
        return Err(Error::domain(format!("Fuchsian test is for rank 2 (got {})", p.rank())));
    }
    let c = cyclic_normal_form(&commutator(&Word::generator(1), &Word::generator(2)));
    Ok(p.root() == &c || p.root() == &c.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i32]) -> Word {
        Word::from_signed(s)
    }

    fn ab() -> Word {
        commutator(&w(&[1]), &w(&[2]))
    }

    #[test]
    fn free_factor_examples() {
        let p = OneRelatorPresentation::new(3, &w(&[1, 2, 1, 2])).unwrap();
        let f = decompose_free_factors(&p).unwrap();
        // ab is primitive, so this is C_2 * F_2
        assert_eq!(f.free_rank, 2);
        assert_eq!(f.core, OneRelatorPresentation::new(1, &w(&[1, 1])).unwrap());

        let p = OneRelatorPresentation::new(3, &w(&[1, 1, 2, 2]).pow(2)).unwrap();
        let f = decompose_free_factors(&p).unwrap();
        assert_eq!(f.free_rank, 1);
        assert_eq!(f.core.rank(), 2);
        assert_eq!(f.core.exponent(), 2);
        assert_eq!(f.core.root().len(), 4);

        let p = OneRelatorPresentation::new(2, &ab().pow(2)).unwrap();
        let f = decompose_free_factors(&p).unwrap();
        assert_eq!(f.free_rank, 0);
        assert_eq!(f.core, p);

        let p = OneRelatorPresentation::new(2, &w(&[1, 2, -1]).pow(2)).unwrap();
        let f = decompose_free_factors(&p).unwrap();
        assert_eq!(f.free_rank, 1);
        assert_eq!(f.core, OneRelatorPresentation::new(1, &w(&[1, 1])).unwrap());
    }

    #[test]
    fn ends_examples() {
        let p = OneRelatorPresentation::new(2, &ab().pow(2)).unwrap();
        assert_eq!(
            classify_ends(&p).unwrap(),
            EndsClassification { ends_g: Ends::One, ends_ghat: Ends::One, lemma_consistent: true }
        );
        let p = OneRelatorPresentation::new(2, &w(&[1, 1])).unwrap();
        assert_eq!(
            classify_ends(&p).unwrap(),
            EndsClassification { ends_g: Ends::Infinite, ends_ghat: Ends::Two, lemma_consistent: true }
        );
        let p = OneRelatorPresentation::new(3, &w(&[1, 1])).unwrap();
        assert_eq!(
            classify_ends(&p).unwrap(),
            EndsClassification { ends_g: Ends::Infinite, ends_ghat: Ends::Infinite, lemma_consistent: true }
        );
        assert!(classify_ends(&OneRelatorPresentation::new(2, &ab()).unwrap()).is_err());
        assert!(classify_ends(&OneRelatorPresentation::new(1, &w(&[1, 1])).unwrap()).is_err());
    }

    #[test]
    fn torsion_order_examples() {
        let p = OneRelatorPresentation::new(2, &ab().pow(3)).unwrap();
        let c = torsion_order(&p, &ab(), 6).unwrap().proven_true().unwrap();
        assert_eq!(c.order, 3);
        assert!(c.upper.replays());
        assert!(c.lower.iter().all(|x| x.hom.satisfies(&p)));

        let p = OneRelatorPresentation::new(2, &w(&[1, 2, 1, 2])).unwrap();
        let c = torsion_order(&p, &w(&[1, 2]), 4).unwrap().proven_true().unwrap();
        assert_eq!(c.order, 2);

        let p = OneRelatorPresentation::new(2, &ab().pow(2)).unwrap();
        assert!(torsion_order(&p, &w(&[1]), 8).unwrap().is_unknown());
    }

    #[test]
    fn fuchsian_examples() {
        for n in 2..5 {
            let p = OneRelatorPresentation::new(2, &ab().pow(n)).unwrap();
            assert!(is_fuchsian_2gen(&p).unwrap());
        }
        let p = OneRelatorPresentation::new(2, &w(&[2, 1, -2, -1]).pow(5)).unwrap();
        assert!(is_fuchsian_2gen(&p).unwrap());
        let p = OneRelatorPresentation::new(2, &w(&[1, 1, 2, 2]).pow(2)).unwrap();
        assert!(!is_fuchsian_2gen(&p).unwrap());
        let p = OneRelatorPresentation::new(3, &ab().pow(2)).unwrap();
        assert!(is_fuchsian_2gen(&p).is_err());
    }

    #[test]
    fn fuchsian_is_shift_invariant() {
        let r = ab();
        for k in 0..4 {
            for base in [r.rotate(k), r.inverse().rotate(k)] {
                let p = OneRelatorPresentation::new(2, &base.pow(3)).unwrap();
                assert!(is_fuchsian_2gen(&p).unwrap());
            }
        }
    }
}
