//! Replayable Tietze moves on named presentations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TietzeMove {
    /// New generator `g` with relator `g w^-1`.
    AddGenerator { name: String, definition: Word },
    /// Relator `relator` must read `g w^-1` with `g` absent from `w`;
    /// substitutes `g := w` everywhere and drops both.
    RemoveGenerator { name: String, relator: usize },
    /// `r_target := r_target * u r_other^sign u^-1`.
    ReplaceRelatorByProduct { target: usize, conjugator: Word, other: usize, sign: i8 },
    /// Moves the first `by` letters of the relator to its end.
    CyclicShiftRelator { relator: usize, by: usize },
    InvertRelator { relator: usize },
    /// New names for all generators, by position.
    RenameGenerators { names: Vec<String> },
    /// Substitutes `g := g^-1`.
    InvertGenerator { generator: usize },
}

impl TietzeMove {
    pub fn kind(&self) -> &'static str {
        match self {
            TietzeMove::AddGenerator { .. } => "add-generator",
            TietzeMove::RemoveGenerator { .. } => "remove-generator",
            TietzeMove::ReplaceRelatorByProduct { .. } => "replace-relator",
            TietzeMove::CyclicShiftRelator { .. } => "cyclic-shift",
            TietzeMove::InvertRelator { .. } => "invert-relator",
            TietzeMove::RenameGenerators { .. } => "rename",
            TietzeMove::InvertGenerator { .. } => "invert-generator",
        }
    }

    /// Generator names after this move, given the names before it.
    pub fn next_names(&self, names: &[String]) -> Vec<String> {
        let mut out = names.to_vec();
        match self {
            TietzeMove::AddGenerator { name, .. } => out.push(name.clone()),
            TietzeMove::RemoveGenerator { name, .. } => out.retain(|n| n != name),
            TietzeMove::RenameGenerators { names } => out = names.clone(),
            _ => {}
        }
        out
    }

    pub fn apply(&self, p: &Presentation) -> std::result::Result<Presentation, String> {
        let rels = &p.relators;
        let check_rel = |i: usize| {
            if i < rels.len() {
                Ok(())
            } else {
                Err(format!("relator index {i} out of range (have {})", rels.len()))
            }
        };
        match self {
            TietzeMove::AddGenerator { name, definition } => {
                if p.index_of(name).is_some() {
                    return Err(format!("generator {name:?} already exists"));
                }
                definition.check_rank(p.rank()).map_err(|e| e.to_string())?;
                let g = Word::generator(p.rank() + 1);
                let mut gens = p.generators.clone();
                gens.push(name.clone());
                let mut relators = rels.clone();
                relators.push(g.concat(&definition.inverse()));
                Ok(Presentation { generators: gens, relators })
            }
            TietzeMove::RemoveGenerator { name, relator } => {
                check_rel(*relator)?;
                let g = p.index_of(name).ok_or_else(|| format!("no generator named {name:?}"))?;
                let r = rels[*relator].letters();
                if r.first() != Some(&Letter::new(g, true)) || r[1..].iter().any(|l| l.gen() == g) {
                    return Err(format!("relator {relator} is not of the form {name} w^-1 with {name} absent from w"));
                }
                let value = Word::reduce(r[1..].iter().copied()).inverse();
                let images: Vec<Word> = (1..=p.rank())
                    .map(|h| match h.cmp(&g) {
                        std::cmp::Ordering::Less => Word::generator(h),
                        std::cmp::Ordering::Equal => shift_down(&value, g),
                        std::cmp::Ordering::Greater => Word::generator(h - 1),
                    })
                    .collect();
                let relators = rels
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i != relator)
                    .map(|(_, r)| r.substitute(&images))
                    .collect();
                let mut gens = p.generators.clone();
                gens.remove(g - 1);
                Ok(Presentation { generators: gens, relators })
            }
            TietzeMove::ReplaceRelatorByProduct { target, conjugator, other, sign } => {
                check_rel(*target)?;
                check_rel(*other)?;
                if target == other {
                    return Err("target and other relator must differ".into());
                }
                if sign.abs() != 1 {
                    return Err(format!("sign must be 1 or -1, got {sign}"));
                }
                conjugator.check_rank(p.rank()).map_err(|e| e.to_string())?;
                let factor = rels[*other].pow(*sign as i64).conjugate_by(&conjugator.inverse());
                let mut relators = rels.clone();
                relators[*target] = rels[*target].concat(&factor);
                Ok(Presentation { generators: p.generators.clone(), relators })
            }
            TietzeMove::CyclicShiftRelator { relator, by } => {
                check_rel(*relator)?;
                let mut relators = rels.clone();
                let r = &rels[*relator];
                relators[*relator] = Word::reduce(r.rotate(*by).letters().iter().copied());
                Ok(Presentation { generators: p.generators.clone(), relators })
            }
            TietzeMove::InvertRelator { relator } => {
                check_rel(*relator)?;
                let mut relators = rels.clone();
                relators[*relator] = rels[*relator].inverse();
                Ok(Presentation { generators: p.generators.clone(), relators })
            }
            TietzeMove::RenameGenerators { names } => {
                if names.len() != p.rank() {
                    return Err(format!("expected {} names, got {}", p.rank(), names.len()));
                }
                Presentation::new(names.clone(), rels.clone()).map_err(|e| e.to_string())
            }
            TietzeMove::InvertGenerator { generator } => {
                if *generator == 0 || *generator > p.rank() {
                    return Err(format!("generator index {generator} out of range"));
                }
                let images: Vec<Word> = (1..=p.rank())
                    .map(|h| Word::letter(Letter::new(h, h != *generator)))
                    .collect();
                let relators = rels.iter().map(|r| r.substitute(&images)).collect();
                Ok(Presentation { generators: p.generators.clone(), relators })
            }
        }
    }
}

// indices above the removed generator move down by one
fn shift_down(w: &Word, removed: usize) -> Word {
    Word::reduce(w.letters().iter().map(|l| {
        let g = if l.gen() > removed { l.gen() - 1 } else { l.gen() };
        Letter::new(g, l.is_positive())
    }))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TietzeCertificate {
    pub moves: Vec<TietzeMove>,
}

/// Every presentation along a replay, starting with the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Replay {
    pub steps: Vec<Presentation>,
}

impl Replay {
    pub fn result(&self) -> &Presentation {
        self.steps.last().expect("replay always holds the input")
    }
}

pub fn apply_certificate(p: &Presentation, cert: &TietzeCertificate) -> Result<Replay> {
    let mut steps = vec![p.clone()];
    for (index, mv) in cert.moves.iter().enumerate() {
        let next = mv
            .apply(steps.last().unwrap())
            .map_err(|reason| Error::Certificate { index, kind: mv.kind(), reason })?;
        steps.push(next);
    }
    Ok(Replay { steps })
}

/// Same generator names, and the same multiset of relators up to rotation and
/// inversion once generators are matched by name.
pub fn same_presentation(a: &Presentation, b: &Presentation) -> bool {
    if a.rank() != b.rank() || a.relators.len() != b.relators.len() {
        return false;
    }
    let Some(map): Option<Vec<Word>> = a
        .generators
        .iter()
        .map(|n| b.index_of(n).map(Word::generator))
        .collect()
    else {
        return false;
    };
    let renamed = Presentation { generators: b.generators.clone(), relators: a.relators.iter().map(|r| r.substitute(&map)).collect() };
    renamed.relator_classes() == b.relator_classes()
}

pub fn verify_isomorphic(p1: &Presentation, p2: &Presentation, cert: &TietzeCertificate) -> bool {
    match apply_certificate(p1, cert) {
        Ok(replay) => same_presentation(replay.result(), p2),
        Err(_) => false,
    }
}

/// Greedily eliminates generators that occur exactly once in some relator,
/// returning the moves used. Relators are scanned in order.
pub fn eliminate_generators(p: &Presentation) -> TietzeCertificate {
    let mut cur = p.clone();
    let mut moves = Vec::new();
    'outer: loop {
        for (ri, r) in cur.relators.iter().enumerate() {
            for g in r.support() {
                let positions: Vec<usize> =
                    r.letters().iter().enumerate().filter(|(_, l)| l.gen() == g).map(|(i, _)| i).collect();
                if positions.len() != 1 {
                    continue;
                }
                let mut local = Vec::new();
                let pos = positions[0];
                let mut word = r.clone();
                if !r.letters()[pos].is_positive() {
                    local.push(TietzeMove::InvertRelator { relator: ri });
                    word = word.inverse();
                }
                let pos = word.letters().iter().position(|l| l.gen() == g).unwrap();
                if pos != 0 {
                    local.push(TietzeMove::CyclicShiftRelator { relator: ri, by: pos });
                }
                local.push(TietzeMove::RemoveGenerator { name: cur.generators[g - 1].clone(), relator: ri });
                for mv in &local {
                    cur = mv.apply(&cur).expect("elimination moves are valid by construction");
                }
                moves.extend(local);
                continue 'outer;
            }
        }
        break;
    }
    TietzeCertificate { moves }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i32]) -> Word {
        Word::from_signed(s)
    }

    fn pres(names: &[&str], rels: Vec<Word>) -> Presentation {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), rels).unwrap()
    }

    #[test]
    fn remove_generator_example() {
        // <b,c,t; (b c^2)^2, t^-1 c t b> ; solve b = t^-1 c^-1 t
        let p = pres(&["b", "c", "t"], vec![w(&[1, 2, 2]).pow(2), w(&[-3, 2, 3, 1])]);
        let cert = TietzeCertificate {
            moves: vec![
                TietzeMove::CyclicShiftRelator { relator: 1, by: 3 },
                TietzeMove::RemoveGenerator { name: "b".into(), relator: 1 },
                TietzeMove::RenameGenerators { names: vec!["a".into(), "t".into()] },
            ],
        };
        let replay = apply_certificate(&p, &cert).unwrap();
        assert_eq!(replay.steps.len(), 4);
        let target = pres(&["a", "t"], vec![w(&[-2, -1, 2, 1, 1]).pow(2)]);
        assert!(same_presentation(replay.result(), &target));
        assert!(verify_isomorphic(&p, &target, &cert));
    }

    #[test]
    fn empty_certificate_is_identity() {
        let p = pres(&["a", "b"], vec![w(&[1, 2, -1, -2]).pow(3)]);
        let replay = apply_certificate(&p, &TietzeCertificate::default()).unwrap();
        assert_eq!(replay.result(), &p);
        assert!(verify_isomorphic(&p, &p, &TietzeCertificate::default()));
    }

    #[test]
    fn rename_swaps_letters() {
        let p = pres(&["a", "b"], vec![w(&[1, 1, 2])]);
        let q = TietzeMove::RenameGenerators { names: vec!["b".into(), "a".into()] }.apply(&p).unwrap();
        let expected = pres(&["a", "b"], vec![w(&[2, 2, 1])]);
        assert!(same_presentation(&q, &expected));
    }

    #[test]
    fn non_isomorphic_cyclic_groups() {
        let p = pres(&["a"], vec![w(&[1, 1])]);
        let q = pres(&["a"], vec![w(&[1, 1, 1])]);
        assert!(!verify_isomorphic(&p, &q, &TietzeCertificate::default()));
        let cert = TietzeCertificate { moves: vec![TietzeMove::InvertGenerator { generator: 1 }] };
        assert!(!verify_isomorphic(&p, &q, &cert));
        assert_ne!(p.abelian_invariants(), q.abelian_invariants());
    }

    #[test]
    fn bad_moves_name_their_index() {
        let p = pres(&["a", "b"], vec![w(&[1, 2, 1])]);
        let cert = TietzeCertificate {
            moves: vec![
                TietzeMove::InvertRelator { relator: 0 },
                TietzeMove::RemoveGenerator { name: "a".into(), relator: 0 },
            ],
        };
        match apply_certificate(&p, &cert) {
            Err(Error::Certificate { index: 1, kind: "remove-generator", .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn moves_preserve_abelianization() {
        let p = pres(&["a", "b", "c"], vec![w(&[1, 2, 1, 2]), w(&[3, -1, -2]), w(&[1, 1, 3, 3, 3])]);
        let moves = vec![
            TietzeMove::AddGenerator { name: "d".into(), definition: w(&[1, 3]) },
            TietzeMove::ReplaceRelatorByProduct { target: 0, conjugator: w(&[2, 3]), other: 2, sign: -1 },
            TietzeMove::CyclicShiftRelator { relator: 2, by: 2 },
            TietzeMove::InvertGenerator { generator: 2 },
            TietzeMove::InvertRelator { relator: 0 },
            TietzeMove::RemoveGenerator { name: "c".into(), relator: 1 },
            TietzeMove::RenameGenerators { names: vec!["x".into(), "y".into(), "z".into()] },
        ];
        let replay = apply_certificate(&p, &TietzeCertificate { moves }).unwrap();
        let inv = p.abelian_invariants();
        for step in &replay.steps {
            assert_eq!(step.abelian_invariants(), inv);
        }
    }

    #[test]
    fn elimination_removes_solvable_generators() {
        let p = pres(&["x", "b", "c", "s"], vec![w(&[2, 3, 3]).pow(2), w(&[1, -2]), w(&[-4, 1, 4, 3])]);
        let cert = eliminate_generators(&p);
        let out = apply_certificate(&p, &cert).unwrap();
        assert_eq!(out.result().rank(), 2);
        assert_eq!(out.result().relators.len(), 1);
        assert_eq!(out.result().abelian_invariants(), p.abelian_invariants());
    }
}
