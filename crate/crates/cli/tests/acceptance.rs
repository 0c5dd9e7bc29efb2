//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails. Oracles here are written independently
//! of the library code they check.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use orelt_cli::parse::{parse_certificate, parse_graph, parse_presentation};
use orelt_core::classify::{is_fuchsian_2gen, torsion_order};
use orelt_core::dehn::RelatorTable;
use orelt_core::gog::{apply_certificate, verify_isomorphic};
use orelt_core::probes::{ends_lemma_harness, malnormal_witness_search, SearchBounds};
use orelt_core::whitehead::Minimizer;
use orelt_core::{OneRelatorPresentation, Presentation, Status, Verdict, Word};

const LIMIT_HNN: Duration = Duration::from_secs(5);
const LIMIT_AMALGAM: Duration = Duration::from_secs(30);
const LIMIT_HARNESS: Duration = Duration::from_secs(300);
const LIMIT_DEHN_ORACLE: Duration = Duration::from_secs(60);
const LIMIT_TORSION_PER_CASE: Duration = Duration::from_secs(60);
const LIMIT_PRIMITIVITY: Duration = Duration::from_secs(60);
const LIMIT_MALNORMAL: Duration = Duration::from_secs(120);
const LIMIT_FUCHSIAN: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn pres(name: &str) -> Presentation {
    parse_presentation(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---- independent word helpers over signed generator indices ----

fn reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

fn letters(rank: i32) -> Vec<i32> {
    (1..=rank).flat_map(|g| [g, -g]).collect()
}

/// All freely reduced words of exactly `len` letters.
fn reduced_words(rank: i32, len: usize) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for l in letters(rank) {
                if w.last() != Some(&-l) {
                    let mut v: Vec<i32> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

fn cyclically_reduced(w: &[i32]) -> bool {
    w.len() <= 1 || w[0] != -w[w.len() - 1]
}

fn rotations(w: &[i32]) -> Vec<Vec<i32>> {
    (0..w.len().max(1)).map(|k| [&w[k..], &w[..k]].concat()).collect()
}

fn is_proper_power(w: &[i32]) -> bool {
    let n = w.len();
    (1..n).any(|d| n.is_multiple_of(d) && (0..n).all(|i| w[i] == w[i % d]))
}

/// Cyclic reduction, then the least rotation.
fn cyclic_class(w: &[i32]) -> Vec<i32> {
    let mut v = reduce(w.iter().copied());
    while v.len() >= 2 && v[0] == -v[v.len() - 1] {
        v = v[1..v.len() - 1].to_vec();
    }
    rotations(&v).into_iter().min().unwrap_or_default()
}

/// Normal form in `Z * C_2 = <s> * <c | c^2>`; tokens are `1`, `-1` (for s) and `2` (for c).
fn zc2_normal_form(tokens: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for t in tokens {
        let cancels = match (out.last(), t) {
            (Some(2), 2) => true,
            (Some(&x), y) => x != 2 && y != 2 && x == -y,
            _ => false,
        };
        if cancels {
            out.pop();
        } else {
            out.push(t);
        }
    }
    out
}

// ---- criteria ----

fn hnn_graph() -> Outcome {
    let g = parse_graph(&fixture("hnn.gog")).map_err(|e| e.to_string())?;
    let report = g.validate().map_err(|e| e.to_string())?;
    check(report.status == Status::ProvenTrue, format!("validation: {report:?}"))?;
    let pi1 = g.fundamental_group().map_err(|e| e.to_string())?;
    let target = pres("hnn_target.pres");
    let cert = parse_certificate(&fixture("hnn.cert"), &pi1).map_err(|e| e.to_string())?;
    check(verify_isomorphic(&pi1, &target, &cert), "certificate does not reach the target")?;
    // every intermediate presentation keeps the abelianization
    let replay = apply_certificate(&pi1, &cert).map_err(|e| e.to_string())?;
    let inv = pi1.abelian_invariants();
    check(replay.steps.iter().all(|s| s.abelian_invariants() == inv), "abelianization changed during replay")?;
    Ok(format!("{} moves, abelianization {:?}", cert.moves.len(), inv))
}

fn amalgam_graph() -> Outcome {
    let g = parse_graph(&fixture("amalgam.gog")).map_err(|e| e.to_string())?;
    let report = g.validate().map_err(|e| e.to_string())?;
    check(report.status == Status::ProvenTrue, format!("validation: {report:?}"))?;
    let pi1 = g.fundamental_group().map_err(|e| e.to_string())?;
    let amalgam = pres("amalgam_direct.pres");
    let target = pres("amalgam_target.pres");

    let to_amalgam = parse_certificate(&fixture("amalgam_to_direct.cert"), &pi1).map_err(|e| e.to_string())?;
    check(verify_isomorphic(&pi1, &amalgam, &to_amalgam), "pi1 does not match the amalgam presentation")?;
    let to_target = parse_certificate(&fixture("amalgam.cert"), &pi1).map_err(|e| e.to_string())?;
    check(verify_isomorphic(&pi1, &target, &to_target), "pi1 does not reach the one-relator target")?;
    let amalgam_cert =
        parse_certificate(&fixture("amalgam_direct_to_target.cert"), &amalgam).map_err(|e| e.to_string())?;
    check(verify_isomorphic(&amalgam, &target, &amalgam_cert), "amalgam does not reach the target")?;

    // the target relator, built by hand
    let c = |x: i32, y: i32| vec![x, y, -x, -y];
    let ab = c(1, 2);
    let cd = c(3, 4);
    let root = [ab.clone(), ab.clone(), cd.clone(), inverse(&ab), inverse(&ab), cd].concat();
    let relator: Vec<i32> = (0..3).flat_map(|_| root.clone()).collect();
    check(
        target.relators.len() == 1 && target.relators[0] == Word::from_signed(&reduce(relator)),
        "target fixture is not ([a,b]^2 [c,d] [a,b]^-2 [c,d])^3",
    )?;
    Ok(format!("{} + {} + {} moves", to_amalgam.moves.len(), to_target.moves.len(), amalgam_cert.moves.len()))
}

/// Non-power cyclic classes of length `1..=max_len`, by brute force.
fn count_roots(rank: i32, max_len: usize) -> usize {
    let mut classes = HashSet::new();
    for len in 1..=max_len {
        for w in reduced_words(rank, len) {
            if cyclically_reduced(&w) && !is_proper_power(&w) {
                classes.insert(cyclic_class(&w));
            }
        }
    }
    classes.len()
}

fn ends_harness() -> Outcome {
    let mut summary = Vec::new();
    for (rank, len) in [(2usize, 6usize), (3, 4)] {
        let r = ends_lemma_harness(rank, len, 2).map_err(|e| e.to_string())?;
        check(r.violations.is_empty(), format!("rank {rank}: violations {:?}", r.violations))?;
        let brute = count_roots(rank as i32, len);
        check(
            r.roots_checked == brute && r.expected_roots as usize == brute,
            format!("rank {rank}: checked {}, closed form {}, brute force {brute}", r.roots_checked, r.expected_roots),
        )?;
        summary.push(format!("rank {rank} |R|<={len}: {} roots", r.roots_checked));
    }
    Ok(summary.join("; "))
}

fn dehn_oracle() -> Outcome {
    let p = OneRelatorPresentation::new(2, &Word::from_signed(&[1, 2, 1, 2])).map_err(|e| e.to_string())?;
    let table = RelatorTable::build(&p).map_err(|e| e.to_string())?;
    let (mut total, mut trivial) = (0usize, 0usize);
    for len in 0..=8 {
        for w in reduced_words(2, len) {
            // c = ab, so b = a^-1 c and b^-1 = c a
            let tokens = w.iter().flat_map(|&l| match l {
                1 => vec![1],
                -1 => vec![-1],
                2 => vec![-1, 2],
                _ => vec![2, 1],
            });
            let oracle = zc2_normal_form(tokens).is_empty();
            let solver = table.is_trivial(&Word::from_signed(&w));
            check(oracle == solver, format!("disagreement on {w:?}: oracle {oracle}, solver {solver}"))?;
            total += 1;
            trivial += usize::from(oracle);
        }
    }
    check(total == 1 + 4 * (3usize.pow(8) - 1) / 2, format!("enumerated {total} words"))?;
    Ok(format!("{total} words, {trivial} trivial, 0 disagreements"))
}

fn torsion_orders() -> Outcome {
    let ab = Word::from_signed(&[1, 2, -1, -2]);
    let mut out = Vec::new();
    for n in 2..=4u32 {
        let start = Instant::now();
        let p = OneRelatorPresentation::new(2, &ab.pow(n as i64)).map_err(|e| e.to_string())?;
        let cert = match torsion_order(&p, &ab, 8).map_err(|e| e.to_string())? {
            Verdict::ProvenTrue(c) => c,
            other => return Err(format!("n={n}: {other:?}")),
        };
        check(cert.order == n as u64, format!("n={n}: order {}", cert.order))?;
        check(cert.upper.replays() && cert.upper.result.is_empty(), format!("n={n}: upper bound does not replay"))?;
        check(cert.upper.input == ab.pow(n as i64), format!("n={n}: upper bound is for the wrong power"))?;
        for w in &cert.lower {
            check(w.hom.satisfies(&p), format!("n={n}: witness is not a homomorphism"))?;
            check(w.hom.image_of(&ab).order() == w.image_order, format!("n={n}: witness order mismatch"))?;
        }
        for e in 1..n as u64 {
            check(
                cert.lower.iter().any(|w| e % w.image_order != 0),
                format!("n={n}: nothing rules out [a,b]^{e} = 1"),
            )?;
        }
        let took = start.elapsed();
        check(took < LIMIT_TORSION_PER_CASE, format!("n={n}: took {took:?}"))?;
        let degrees: Vec<usize> = cert.lower.iter().map(|w| w.hom.degree).collect();
        out.push(format!("n={n} via S{degrees:?}"));
    }
    Ok(out.join(", "))
}

/// Whitehead automorphisms of `F_rank` as generator images, built from scratch.
fn whitehead_generators(rank: i32) -> Vec<Vec<Vec<i32>>> {
    let mut auts = Vec::new();
    // signed permutations
    let gens: Vec<i32> = (1..=rank).collect();
    let mut perms: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..rank {
        let mut next = Vec::new();
        for p in &perms {
            for &g in gens.iter().filter(|g| !p.iter().any(|x| x.abs() == **g)) {
                for s in [g, -g] {
                    next.push([p.clone(), vec![s]].concat());
                }
            }
        }
        perms = next;
    }
    for p in perms {
        auts.push(p.into_iter().map(|l| vec![l]).collect());
    }
    // multiplier x, set S of letters other than x^{+-1}
    for x in letters(rank) {
        let others: Vec<i32> = letters(rank).into_iter().filter(|l| l.abs() != x.abs()).collect();
        for mask in 0u32..1 << others.len() {
            let in_s = |l: i32| others.iter().position(|&o| o == l).is_some_and(|i| mask >> i & 1 == 1);
            let images = (1..=rank)
                .map(|g| {
                    if g == x.abs() {
                        return vec![g];
                    }
                    let mut img = Vec::new();
                    if in_s(-g) {
                        img.push(-x);
                    }
                    img.push(g);
                    if in_s(g) {
                        img.push(x);
                    }
                    img
                })
                .collect();
            auts.push(images);
        }
    }
    auts
}

fn apply(aut: &[Vec<i32>], w: &[i32]) -> Vec<i32> {
    reduce(w.iter().flat_map(|&l| {
        let img = &aut[l.unsigned_abs() as usize - 1];
        if l > 0 {
            img.clone()
        } else {
            inverse(img)
        }
    }))
}

/// Primitive iff the length-bounded orbit closure reaches a single letter.
fn primitive_by_orbit(w: &[i32], auts: &[Vec<Vec<i32>>]) -> bool {
    let start = cyclic_class(w);
    let bound = start.len();
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if u.len() == 1 {
            return true;
        }
        for a in auts {
            let v = cyclic_class(&apply(a, &u));
            if v.len() <= bound && seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    false
}

fn primitivity_oracle() -> Outcome {
    let auts = whitehead_generators(2);
    check(auts.len() == 8 + 4 * 4, format!("{} automorphisms generated", auts.len()))?;
    let minimizer = Minimizer::new(2).map_err(|e| e.to_string())?;
    let (mut total, mut primitive) = (0usize, 0usize);
    for len in 1..=5 {
        for w in reduced_words(2, len) {
            let oracle = primitive_by_orbit(&w, &auts);
            let fast = minimizer.is_primitive(&Word::from_signed(&w)).map_err(|e| e.to_string())?;
            check(oracle == fast, format!("disagreement on {w:?}: oracle {oracle}, library {fast}"))?;
            total += 1;
            primitive += usize::from(oracle);
        }
    }
    Ok(format!("{total} words, {primitive} primitive, 0 disagreements"))
}

fn malnormality() -> Outcome {
    let surface = pres("surface.pres").as_one_relator().ok_or("surface.pres is not one-relator")?;
    let bounds = SearchBounds::new(5, 3, 6).map_err(|e| e.to_string())?;
    for (name, x) in [("a", 1), ("b", 2)] {
        let v = malnormal_witness_search(&surface, &Word::from_signed(&[x]), bounds).map_err(|e| e.to_string())?;
        check(v.is_unknown(), format!("<{name}>: expected no witness, got {v:?}"))?;
    }

    let dihedral = pres("dihedral.pres").as_one_relator().ok_or("dihedral.pres is not one-relator")?;
    let z = vec![1, 2, 2];
    let x = reduce([z.clone(), vec![2], z.clone(), vec![-2]].concat());
    let bounds = SearchBounds::new(4, 2, 6).map_err(|e| e.to_string())?;
    let wit = match malnormal_witness_search(&dihedral, &Word::from_signed(&x), bounds).map_err(|e| e.to_string())? {
        Verdict::ProvenTrue(w) => w,
        other => return Err(format!("dihedral: expected a witness, got {other:?}")),
    };
    check((wit.i, wit.j) == (1, -1), format!("dihedral: (i, j) = ({}, {})", wit.i, wit.j))?;
    check(wit.verify(&dihedral).map_err(|e| e.to_string())?, "dihedral: witness does not replay")?;

    // independent replay in <z> * <c>, z = b c^2 of order 2: b = z c^-2
    let to_zc = |w: &[i32]| -> Vec<i32> {
        w.iter()
            .flat_map(|&l| match l {
                1 => vec![2, -1, -1],
                -1 => vec![1, 1, 2],
                2 => vec![1],
                _ => vec![-1],
            })
            .collect()
    };
    let y: Vec<i32> = wit.y.letters().iter().map(|l| l.signed()).collect();
    let relation = [inverse(&y), x.clone(), y.clone(), x.clone()].concat();
    check(zc2_normal_form(to_zc(&relation)).is_empty(), "dihedral: y^-1 x y x fails in the free product")?;
    check(!zc2_normal_form(to_zc(&y)).is_empty(), "dihedral: y is trivial")?;
    Ok(format!("surface: no witness for <a>, <b>; dihedral: y = {y:?}, (i, j) = (1, -1)"))
}

fn fuchsian() -> Outcome {
    let targets = [vec![1, 2, -1, -2], vec![2, 1, -2, -1]];
    let (mut total, mut hits) = (0usize, 0usize);
    for len in 1..=6 {
        for w in reduced_words(2, len) {
            if !cyclically_reduced(&w) || is_proper_power(&w) {
                continue;
            }
            let p = OneRelatorPresentation::new(2, &Word::from_signed(&w).pow(2)).map_err(|e| e.to_string())?;
            let oracle = rotations(&w).iter().any(|r| targets.contains(r));
            let lib = is_fuchsian_2gen(&p).map_err(|e| e.to_string())?;
            check(oracle == lib, format!("disagreement on {w:?}: oracle {oracle}, library {lib}"))?;
            total += 1;
            hits += usize::from(oracle);
        }
    }
    check(hits == 8, format!("{hits} Fuchsian roots, expected the 8 rotations of [a,b] and [a,b]^-1"))?;
    Ok(format!("{total} roots, {hits} Fuchsian"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 HNN graph of groups", LIMIT_HNN, hnn_graph),
        ("2 amalgam graph of groups (n=3)", LIMIT_AMALGAM, amalgam_graph),
        ("3 ends dichotomy harness", LIMIT_HARNESS, ends_harness),
        ("4 Dehn solver vs Z*C2 normal forms", LIMIT_DEHN_ORACLE, dehn_oracle),
        ("5 torsion order of [a,b] in <a,b;[a,b]^n>", 3 * LIMIT_TORSION_PER_CASE, torsion_orders),
        ("6 primitivity vs Whitehead orbits", LIMIT_PRIMITIVITY, primitivity_oracle),
        ("7 malnormality witnesses", LIMIT_MALNORMAL, malnormality),
        ("8 Fuchsian criterion", LIMIT_FUCHSIAN, fuchsian),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = outcome.and_then(|d| if took <= limit { Ok(d) } else { Err(format!("{took:?} > {limit:?}")) });
        match outcome {
            Ok(detail) => println!("PASS  {name}  [{:.2}s]  {detail}", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  [{:.2}s]  {why}", took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
