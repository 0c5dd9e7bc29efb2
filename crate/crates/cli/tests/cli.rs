use std::path::PathBuf;

use clap::Parser;
use orelt_cli::parse::{
    parse_certificate, parse_graph, parse_presentation, parse_word, print_certificate, print_graph,
    print_presentation, print_word,
};
use orelt_cli::{execute, run, Cli};
use orelt_core::gog::verify_isomorphic;
use orelt_core::{AbelianInvariants, Word};
use proptest::prelude::*;

fn fixture_path(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

fn cli(args: &[&str]) -> Cli {
    let mut full = vec!["orelt", "--no-timings"];
    full.extend_from_slice(args);
    Cli::parse_from(full)
}

fn report(args: &[&str]) -> serde_json::Value {
    let out = execute(&cli(args)).unwrap();
    serde_json::to_value(&out.report).unwrap()
}

const PRESENTATIONS: &[&str] =
    &["hnn.pres", "hnn_target.pres", "amalgam_direct.pres", "amalgam_target.pres", "dihedral.pres", "surface.pres"];
const GRAPHS: &[&str] = &["hnn.gog", "hnn_swapped.gog", "amalgam.gog", "dihedral_vertex.gog"];

#[test]
fn fixtures_round_trip() {
    for name in PRESENTATIONS {
        let p = parse_presentation(&fixture(name)).unwrap();
        assert_eq!(parse_presentation(&print_presentation(&p)).unwrap(), p, "{name}");
    }
    for name in GRAPHS {
        let g = parse_graph(&fixture(name)).unwrap();
        assert_eq!(parse_graph(&print_graph(&g)).unwrap(), g, "{name}");
    }
    for (cert, start) in [
        ("hnn.cert", None),
        ("amalgam.cert", None),
        ("amalgam_to_direct.cert", None),
        ("amalgam_direct_to_target.cert", Some("amalgam_direct.pres")),
    ] {
        let p = match start {
            Some(s) => parse_presentation(&fixture(s)).unwrap(),
            None => {
                let graph = if cert.starts_with("hnn") { "hnn.gog" } else { "amalgam.gog" };
                parse_graph(&fixture(graph)).unwrap().fundamental_group().unwrap()
            }
        };
        let c = parse_certificate(&fixture(cert), &p).unwrap();
        assert_eq!(parse_certificate(&print_certificate(&c, &p), &p).unwrap(), c, "{cert}");
    }
}

#[test]
fn classify_reports_the_hnn_example() {
    let r = report(&["classify", "-p", &fixture_path("hnn.pres")]);
    let res = &r["result"];
    assert_eq!(res["ends"]["group"], "One");
    assert_eq!(res["root_order"]["order"], 2);
    assert_eq!(res["root_order"]["status"], "proven_true");
    assert_eq!(res["fuchsian"], false);
    assert_eq!(res["free_factors"]["free_rank"], 0);
}

#[test]
fn wp_on_the_relator() {
    let r = report(&["wp", "-p", &fixture_path("hnn.pres"), "-w", "t^-1 a^-1 t a^2 t^-1 a^-1 t a^2"]);
    assert_eq!(r["result"]["trivial"], true);
    let r = report(&["wp", "-p", &fixture_path("hnn.pres"), "-w", "a", "--other", "a^3"]);
    assert_eq!(r["result"]["equal"], false);
}

#[test]
fn exit_codes() {
    let verify = |cert: &str, graph: &str| {
        run(&cli(&[
            "gog",
            "verify",
            "-g",
            &fixture_path(graph),
            "-t",
            &fixture_path("hnn_target.pres"),
            "-c",
            &fixture_path(cert),
        ]))
    };
    assert_eq!(verify("hnn.cert", "hnn.gog"), 0);
    // the swapped edge maps give a different group; the certificate cannot apply cleanly
    assert_ne!(verify("hnn.cert", "hnn_swapped.gog"), 0);
    assert_eq!(run(&cli(&["gog", "validate", "-g", &fixture_path("dihedral_vertex.gog")])), 1);
    assert_eq!(run(&cli(&["classify", "-p", &fixture_path("missing.pres")])), 2);
    // a multi-relator presentation is not a valid `classify` input
    assert_eq!(run(&cli(&["classify", "-p", &fixture_path("amalgam_direct.pres")])), 2);
    let primitive = |extra: &[&str]| {
        let mut args = vec!["primitive", "--gens", "a b", "-w", "a b a^-1 b^-1"];
        args.extend_from_slice(extra);
        run(&cli(&args))
    };
    assert_eq!(primitive(&[]), 0);
    assert_eq!(primitive(&["--fail-on-negative"]), 1);
    assert!(Cli::try_parse_from(["orelt", "wp", "--bogus"]).is_err());
}

#[test]
fn resource_caps_are_reported() {
    let err = execute(&cli(&["harness", "ends", "--rank", "2", "--max-length", "12"])).unwrap_err();
    assert!(err.to_string().contains("12 > 8"), "{err}");
    let err = execute(&cli(&["quotients", "-p", &fixture_path("surface.pres"), "-k", "9"])).unwrap_err();
    assert!(err.to_string().contains("9 > 6"), "{err}");
}

#[test]
fn reports_are_deterministic() {
    let commands: Vec<Vec<String>> = vec![
        vec!["classify".into(), "-p".into(), fixture_path("surface.pres")],
        vec!["gog".into(), "pi1".into(), "-g".into(), fixture_path("amalgam.gog"), "--simplify".into()],
        vec!["harness".into(), "ends".into(), "--rank".into(), "3".into(), "--max-length".into(), "3".into()],
        vec!["quotients".into(), "-p".into(), fixture_path("dihedral.pres"), "-k".into(), "3".into(), "--list".into()],
    ];
    for c in commands {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let a = serde_json::to_string(&execute(&cli(&args)).unwrap().report).unwrap();
        let b = serde_json::to_string(&execute(&cli(&args)).unwrap().report).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timings_ms"));
    }
}

#[test]
fn swapped_edge_maps_give_another_group() {
    let swapped = parse_graph(&fixture("hnn_swapped.gog")).unwrap().fundamental_group().unwrap();
    let target = parse_presentation(&fixture("hnn_target.pres")).unwrap();
    assert_eq!(swapped.abelian_invariants(), AbelianInvariants { free_rank: 1, torsion: vec![8] });
    assert_eq!(target.abelian_invariants(), AbelianInvariants { free_rank: 1, torsion: vec![2] });

    let graph = parse_graph(&fixture("hnn.gog")).unwrap();
    let pi1 = graph.fundamental_group().unwrap();
    let cert = parse_certificate(&fixture("hnn.cert"), &pi1).unwrap();
    assert!(verify_isomorphic(&pi1, &target, &cert));
    // the spanning tree choice does not change the group
    for tree in graph.spanning_trees() {
        assert_eq!(graph.with_tree(&tree).fundamental_group().unwrap().abelian_invariants(), target.abelian_invariants());
    }
}

#[test]
fn amalgam_spanning_tree_is_forced() {
    let g = parse_graph(&fixture("amalgam.gog")).unwrap();
    assert_eq!(g.spanning_trees(), vec![vec![0, 1, 2, 3]]);
    let p = g.fundamental_group().unwrap();
    assert_eq!(p.rank(), 2 + 1 + 2 + 1 + 2);
    assert_eq!(p.relators.len(), 1 + 4);
}

proptest! {
    #[test]
    fn printed_words_reparse(raw in prop::collection::vec((1i32..=3, any::<bool>()), 0..16)) {
        let names: Vec<String> = ["a", "t_e2", "x.b"].iter().map(|s| s.to_string()).collect();
        let w = Word::from_signed(&raw.iter().map(|&(g, s)| if s { g } else { -g }).collect::<Vec<_>>());
        prop_assert_eq!(parse_word(&print_word(&w, &names), &names).unwrap(), w);
    }
}
