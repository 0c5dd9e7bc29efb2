//! Subcommand handlers. Each builds a JSON report with a fixed key order:
//! `command`, `inputs`, `caps`, `result`, then `timings_ms` if enabled.

use std::path::Path;
use std::time::Instant;

use orelt_core::classify::{classify_ends_with, decompose_with, is_fuchsian_2gen, torsion_order_with};
use orelt_core::dehn::RelatorTable;
use orelt_core::gog::{apply_certificate, eliminate_generators, same_presentation, GraphOfGroups};
use orelt_core::probes::{ends_lemma_harness, malnormal_witness_search, t_membership, NonMembership, SearchBounds};
use orelt_core::quotients::{count_homs, enumerate_homs_with_cap, OrderWitness};
use orelt_core::{Minimizer, OneRelatorPresentation, Perm, Presentation, Status, Verdict, Word};
use serde::Serialize;
use serde_json::{json, Value};

use crate::parse::{parse_certificate, parse_graph, parse_presentation, parse_word, print_presentation, print_word};
use crate::{Cli, CliError, Command, GogCommand, HarnessCommand};

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub caps: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<u128>,
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    /// The question asked was answered in the negative.
    pub negative: bool,
    /// Exit 1 on a negative answer even without `--fail-on-negative`.
    pub always_fail_on_negative: bool,
}

struct Body {
    inputs: Value,
    caps: Value,
    result: Value,
    negative: bool,
    always: bool,
}

impl Body {
    fn new(inputs: Value, caps: Value, result: Value) -> Self {
        Body { inputs, caps, result, negative: false, always: false }
    }

    fn negative(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }

    fn strict(mut self) -> Self {
        self.always = true;
        self
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_presentation(path: &Path) -> Result<Presentation, CliError> {
    parse_presentation(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn load_graph(path: &Path) -> Result<GraphOfGroups, CliError> {
    parse_graph(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn word_arg(text: &str, names: &[String]) -> Result<Word, CliError> {
    parse_word(text, names).map_err(|source| CliError::Parse { path: "<word>".into(), source })
}

fn one_relator(p: &Presentation) -> Result<OneRelatorPresentation, CliError> {
    p.as_one_relator()
        .ok_or_else(|| CliError::Usage(format!("expected exactly one relator, found {}", p.relators.len())))
}

fn perm_json(p: &Perm) -> Value {
    json!(p.images().iter().map(|&i| i as u64 + 1).collect::<Vec<_>>())
}

fn hom_json(images: &[Perm], names: &[String]) -> Value {
    let map: serde_json::Map<String, Value> =
        names.iter().zip(images).map(|(n, p)| (n.clone(), perm_json(p))).collect();
    Value::Object(map)
}

fn witnesses_json(ws: &[OrderWitness], names: &[String]) -> Value {
    json!(ws
        .iter()
        .map(|w| json!({"degree": w.hom.degree, "images": hom_json(&w.hom.images, names), "image_order": w.image_order}))
        .collect::<Vec<_>>())
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::ProvenTrue => "proven_true",
        Status::ProvenFalse => "proven_false",
        Status::Unknown => "unknown",
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (name, body) = match &cli.command {
        Command::Classify(a) => ("classify", classify(a)?),
        Command::Wp(a) => ("wp", wp(a)?),
        Command::Minimize(a) => ("minimize", minimize(a)?),
        Command::Primitive(a) => ("primitive", primitive(a)?),
        Command::Order(a) => ("order", order(a)?),
        Command::Quotients(a) => ("quotients", quotients(a)?),
        Command::Malnormal(a) => ("malnormal", malnormal(a)?),
        Command::Tmember(a) => ("tmember", tmember(a)?),
        Command::Gog(GogCommand::Validate { graph }) => ("gog validate", gog_validate(graph)?),
        Command::Gog(GogCommand::Pi1 { graph, simplify }) => ("gog pi1", gog_pi1(graph, *simplify)?),
        Command::Gog(GogCommand::Verify { graph, source, target, certificate }) => {
            ("gog verify", gog_verify(graph.as_deref(), source.as_deref(), target, certificate)?)
        }
        Command::Harness(HarnessCommand::Ends { rank, max_length, exponent }) => {
            ("harness ends", harness_ends(*rank, *max_length, *exponent)?)
        }
    };
    let timings_ms = (!cli.no_timings).then(|| start.elapsed().as_millis());
    Ok(Outcome {
        report: Report { command: name.into(), inputs: body.inputs, caps: body.caps, result: body.result, timings_ms },
        negative: body.negative,
        always_fail_on_negative: body.always,
    })
}

fn classify(a: &crate::ClassifyArgs) -> Result<Body, CliError> {
    let p = load_presentation(&a.pres.path)?;
    let one = one_relator(&p)?;
    let names = &p.generators;
    let minimizer = Minimizer::with_max_rank(one.rank(), a.max_rank)?;
    let root = one.root().word().clone();

    let ff = decompose_with(&one, &minimizer)?;
    let core_names: Vec<String> = ff.support.iter().map(|&g| names[g - 1].clone()).collect();
    let ends = classify_ends_with(&one, &minimizer)?;
    let torsion = match torsion_order_with(&one, &root, one.exponent() as u64, a.max_degree)? {
        Verdict::ProvenTrue(c) => json!({
            "status": "proven_true",
            "order": c.order,
            "upper": {"dehn_steps": c.upper.steps.len(), "replays": c.upper.replays()},
            "lower": witnesses_json(&c.lower, names),
        }),
        Verdict::Unknown(e) => json!({"status": "unknown", "searched": e.searched}),
        Verdict::ProvenFalse(_) => unreachable!(),
    };
    let fuchsian = if one.rank() == 2 { json!(is_fuchsian_2gen(&one)?) } else { Value::Null };
    let result = json!({
        "root": print_word(&root, names),
        "exponent": one.exponent(),
        "free_factors": {
            "free_rank": ff.free_rank,
            "core_generators": core_names,
            "core_root": print_word(ff.core.root().word(), &core_names),
            "whitehead_moves": ff.minimal.witness_chain.len(),
        },
        "ends": {
            "group": ends.ends_g,
            "torsion_free_quotient": ends.ends_ghat,
            "lemma_consistent": ends.lemma_consistent,
        },
        "root_order": torsion,
        "fuchsian": fuchsian,
    });
    Ok(Body::new(
        json!({"presentation": print_presentation(&p)}),
        json!({"max_rank": a.max_rank, "max_degree": a.max_degree}),
        result,
    ))
}

fn wp(a: &crate::WpArgs) -> Result<Body, CliError> {
    let p = load_presentation(&a.pres.path)?;
    let one = one_relator(&p)?;
    let names = &p.generators;
    let w = word_arg(&a.word, names)?;
    let table = RelatorTable::build(&one)?;
    let (question, subject) = match &a.other {
        Some(o) => {
            let v = word_arg(o, names)?;
            ("equal", w.concat(&v.inverse()))
        }
        None => ("trivial", w.clone()),
    };
    let red = table.reduce(&subject);
    let yes = red.result.is_empty();
    let steps: Vec<Value> = red
        .steps
        .iter()
        .map(|s| {
            json!({"position": s.position, "piece": print_word(&s.piece, names), "replacement": print_word(&s.replacement, names)})
        })
        .collect();
    let result = json!({
        question: yes,
        "reduced": print_word(&red.result, names),
        "steps": steps,
    });
    let inputs = json!({"presentation": print_presentation(&p), "word": print_word(&w, names), "other": a.other});
    Ok(Body::new(inputs, json!({"piece_threshold": table.threshold()}), result).negative(!yes))
}

fn free_names(path: Option<&Path>, gens: Option<&str>) -> Result<Vec<String>, CliError> {
    match (path, gens) {
        (Some(p), _) => Ok(load_presentation(p)?.generators),
        (None, Some(g)) => {
            let p = parse_presentation(&format!("gens: {g}"))
                .map_err(|source| CliError::Parse { path: "--gens".into(), source })?;
            Ok(p.generators)
        }
        (None, None) => Err(CliError::Usage("give generator names with -p or --gens".into())),
    }
}

fn minimize(a: &crate::FreeWordArgs) -> Result<Body, CliError> {
    let names = free_names(a.path.as_deref(), a.gens.as_deref())?;
    let w = word_arg(&a.word, &names)?;
    let m = Minimizer::with_max_rank(names.len(), a.max_rank)?.minimize(&w)?;
    let support: Vec<&String> = m.support.iter().map(|&g| &names[g - 1]).collect();
    let result = json!({
        "minimal": print_word(m.word.word(), &names),
        "length": m.len(),
        "support": support,
        "moves": m.witness_chain.len(),
        "replays": m.replay(&w, names.len()) == m.word,
    });
    Ok(Body::new(json!({"generators": names, "word": print_word(&w, &names)}), json!({"max_rank": a.max_rank}), result))
}

fn primitive(a: &crate::FreeWordArgs) -> Result<Body, CliError> {
    let names = free_names(a.path.as_deref(), a.gens.as_deref())?;
    let w = word_arg(&a.word, &names)?;
    let minimizer = Minimizer::with_max_rank(names.len(), a.max_rank)?;
    let yes = minimizer.is_primitive(&w)?;
    let m = minimizer.minimize(&w)?;
    let result = json!({"primitive": yes, "minimal": print_word(m.word.word(), &names)});
    Ok(Body::new(json!({"generators": names, "word": print_word(&w, &names)}), json!({"max_rank": a.max_rank}), result)
        .negative(!yes))
}

fn order(a: &crate::OrderArgs) -> Result<Body, CliError> {
    let p = load_presentation(&a.pres.path)?;
    let one = one_relator(&p)?;
    let names = &p.generators;
    let w = word_arg(&a.word, names)?;
    let result = match torsion_order_with(&one, &w, a.bound, a.max_degree)? {
        Verdict::ProvenTrue(c) => json!({
            "status": "proven_true",
            "order": c.order,
            "upper": {"power": c.order, "dehn_steps": c.upper.steps.len(), "replays": c.upper.replays()},
            "lower": witnesses_json(&c.lower, names),
        }),
        Verdict::Unknown(e) => json!({"status": "unknown", "searched": e.searched}),
        Verdict::ProvenFalse(_) => unreachable!(),
    };
    Ok(Body::new(
        json!({"presentation": print_presentation(&p), "word": print_word(&w, names)}),
        json!({"bound": a.bound, "max_degree": a.max_degree}),
        result,
    ))
}

fn quotients(a: &crate::QuotientArgs) -> Result<Body, CliError> {
    let p = load_presentation(&a.pres.path)?;
    let count = count_homs(&p, a.degree, a.degree_cap)?;
    let mut result = json!({"degree": a.degree, "count": count});
    if a.list {
        let homs = enumerate_homs_with_cap(&p, a.degree, a.degree_cap)?;
        result["homomorphisms"] = json!(homs.iter().map(|h| hom_json(&h.images, &p.generators)).collect::<Vec<_>>());
    }
    Ok(Body::new(json!({"presentation": print_presentation(&p)}), json!({"degree_cap": a.degree_cap}), result))
}

fn malnormal(a: &crate::MalnormalArgs) -> Result<Body, CliError> {
    let p = load_presentation(&a.pres.path)?;
    let one = one_relator(&p)?;
    let names = &p.generators;
    let x = word_arg(&a.word, names)?;
    let bounds = SearchBounds::new(a.max_y_length, a.max_power, a.max_coset_power)?;
    let verdict = malnormal_witness_search(&one, &x, bounds)?;
    let result = match &verdict {
        Verdict::ProvenTrue(wit) => json!({
            "status": "proven_true",
            "y": print_word(&wit.y, names),
            "i": wit.i,
            "j": wit.j,
            "exclusion_bound": wit.exclusion_bound,
            "dehn_steps": wit.relation.steps.len(),
            "verified": wit.verify(&one)?,
        }),
        Verdict::Unknown(e) => json!({"status": "unknown", "searched": e.searched}),
        Verdict::ProvenFalse(_) => unreachable!(),
    };
    Ok(Body::new(
        json!({"presentation": print_presentation(&p), "x": print_word(&x, names)}),
        json!(bounds),
        result,
    ))
}

fn tmember(a: &crate::TmemberArgs) -> Result<Body, CliError> {
    let p = load_presentation(&a.pres.path)?;
    let one = one_relator(&p)?;
    let names = &p.generators;
    let w = word_arg(&a.word, names)?;
    // only `max_y_length` and `max_power` steer this search
    let bounds = SearchBounds::new(a.max_conjugator_length, a.max_conjugates, 1)?;
    let verdict = t_membership(&one, &w, bounds, a.max_degree)?;
    let root = one.root().word();
    let result = match &verdict {
        Verdict::ProvenTrue(c) => json!({
            "status": "proven_true",
            "factors": c.factors.iter().map(|(u, e)| json!({"conjugator": print_word(u, names), "sign": e})).collect::<Vec<_>>(),
            "replays": c.replays(root, &w),
        }),
        Verdict::ProvenFalse(NonMembership::ExponentSum { word, root }) => {
            json!({"status": "proven_false", "obstruction": "exponent_sum", "word_sums": word, "root_sums": root})
        }
        Verdict::ProvenFalse(NonMembership::Quotient(h)) => json!({
            "status": "proven_false",
            "obstruction": "quotient",
            "degree": h.degree,
            "images": hom_json(&h.images, names),
        }),
        Verdict::Unknown(e) => json!({"status": "unknown", "searched": e.searched}),
    };
    Ok(Body::new(
        json!({"presentation": print_presentation(&p), "word": print_word(&w, names)}),
        json!({"max_conjugator_length": a.max_conjugator_length, "max_conjugates": a.max_conjugates, "max_degree": a.max_degree}),
        result,
    )
    .negative(verdict.is_proven_false()))
}

fn gog_validate(path: &Path) -> Result<Body, CliError> {
    let g = load_graph(path)?;
    let report = g.validate()?;
    let result = json!({
        "status": status_str(report.status),
        "violations": report.violations,
        "warnings": report.warnings,
    });
    Ok(Body::new(
        json!({"graph": path.display().to_string(), "vertices": g.vertices.len(), "edges": g.edges.len(), "jsj_candidate": g.jsj_candidate}),
        json!({"quotient_degree": orelt_core::gog::VALIDATION_DEGREE}),
        result,
    )
    .negative(report.status == Status::ProvenFalse)
    .strict())
}

fn gog_pi1(path: &Path, simplify: bool) -> Result<Body, CliError> {
    let g = load_graph(path)?;
    let p = g.fundamental_group()?;
    let mut result = json!({
        "presentation": print_presentation(&p),
        "generators": p.rank(),
        "relators": p.relators.len(),
        "abelianization": p.abelian_invariants(),
    });
    if simplify {
        let cert = eliminate_generators(&p);
        let replay = apply_certificate(&p, &cert)?;
        result["simplified"] = json!(print_presentation(replay.result()));
        result["certificate"] = json!(crate::parse::print_certificate(&cert, &p));
    }
    Ok(Body::new(json!({"graph": path.display().to_string()}), json!({}), result))
}

fn gog_verify(graph: Option<&Path>, source: Option<&Path>, target: &Path, cert_path: &Path) -> Result<Body, CliError> {
    let (start, origin) = match (graph, source) {
        (Some(g), _) => (load_graph(g)?.fundamental_group()?, g),
        (None, Some(s)) => (load_presentation(s)?, s),
        (None, None) => return Err(CliError::Usage("give -g or -s".into())),
    };
    let target_p = load_presentation(target)?;
    let cert = parse_certificate(&read(cert_path)?, &start)
        .map_err(|source| CliError::Parse { path: cert_path.display().to_string(), source })?;
    let replay = apply_certificate(&start, &cert)?;
    let ok = same_presentation(replay.result(), &target_p);
    let steps: Vec<String> = replay.steps.iter().map(print_presentation).collect();
    let result = json!({
        "isomorphic": ok,
        "moves": cert.moves.len(),
        "start": print_presentation(&start),
        "end": print_presentation(replay.result()),
        "target": print_presentation(&target_p),
        "steps": steps,
    });
    Ok(Body::new(
        json!({"source": origin.display().to_string(), "target": target.display().to_string(), "certificate": cert_path.display().to_string()}),
        json!({}),
        result,
    )
    .negative(!ok)
    .strict())
}

fn harness_ends(rank: usize, max_length: usize, exponent: u32) -> Result<Body, CliError> {
    let r = ends_lemma_harness(rank, max_length, exponent)?;
    let names = ["a", "b", "c"].iter().take(rank).map(|s| s.to_string()).collect::<Vec<_>>();
    let result = json!({
        "roots_checked": r.roots_checked,
        "expected_roots": r.expected_roots,
        "violations": r.violations.iter().map(|w| print_word(w, &names)).collect::<Vec<_>>(),
        "tally": r.tally,
    });
    Ok(Body::new(
        json!({"rank": rank, "max_length": max_length, "exponent": exponent}),
        json!({"max_length_cap": if rank == 2 { orelt_core::probes::HARNESS_MAX_LENGTH_RANK2 } else { orelt_core::probes::HARNESS_MAX_LENGTH_RANK3 }}),
        result,
    )
    .negative(!r.violations.is_empty())
    .strict())
}
