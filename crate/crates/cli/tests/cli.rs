use opkit_cli::commands::COMMANDS;
use opkit_cli::elaborate::Env;
use opkit_cli::{diag::Phase, run, syntax, EXIT_LAW, EXIT_OK, EXIT_USAGE};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn opkit(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("opkit").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn elaborate(docs: &[&str]) -> Result<Env, Vec<opkit_cli::diag::Diagnostic>> {
    let mut env = Env::default();
    for (i, text) in docs.iter().enumerate() {
        let doc = syntax::parse(text)?;
        env.elaborate(&doc, &format!("doc{i}"))?;
    }
    Ok(env)
}

const I: &str = "colors C\n  color x\nend\n\nmulticategory I over C cap 1\n  op 1 : x -> x\n  unit x = 1\n  comp 1 1 1 = 1\nend\n";

#[test]
fn fixtures_print_back_to_themselves() {
    let mut seen = 0;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("opk") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let printed = syntax::print(&syntax::parse(&text).unwrap());
        assert_eq!(printed, text, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn exports_are_deterministic() {
    for args in [
        vec!["export", "--builtin", "as3"],
        vec!["export", "--builtin", "op2v3", "--format", "dsl"],
        vec!["check"],
        vec!["tensor", "--left", "I", "--right", "As3"],
    ] {
        let mut args = args.clone();
        let files = [fixture("i"), fixture("as3")];
        if args[0] != "export" {
            args.extend(files.iter().map(String::as_str));
        }
        let (c1, a, _) = opkit(&args);
        let (c2, b, _) = opkit(&args);
        assert_eq!((c1, c2), (EXIT_OK, EXIT_OK), "{args:?}");
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn exported_documents_elaborate_to_the_same_tables() {
    for b in ["com3", "as3", "as2nu", "op2v2"] {
        let (code, text, _) = opkit(&["export", "--builtin", b, "--format", "dsl"]);
        assert_eq!(code, EXIT_OK);
        let env = elaborate(&[&text]).unwrap();
        let original = opkit_cli::commands::builtin(b).unwrap();
        let back = &env.multicategories[original.name()].multicategory;
        assert!(back.same_tables(&original), "{b}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(opkit(&["check", &fixture("as3")]).0, EXIT_OK);
    let (code, _, err) = opkit(&["check", "--bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Usage"));
    assert_eq!(opkit(&["--help"]).0, EXIT_OK);
    assert_eq!(opkit(&["check", &fixture("no_such_file")]).0, EXIT_USAGE);
    assert_eq!(opkit(&["equiv", &fixture("i"), &fixture("equiv"), "--functor", "Fold"]).0, EXIT_LAW);
    assert_eq!(opkit(&["equiv", &fixture("i"), &fixture("equiv"), "--functor", "Skeleton"]).0, EXIT_OK);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.opk");
    let mut text = String::from("algebra Bad over As3\n  carrier x 2\n  action w = 0\n  action w1 = 0 1\n  action w12 = 1 1 1 0\n  action w21 = 1 1 1 0\n");
    for w in ["w123", "w132", "w213", "w231", "w312", "w321"] {
        text += &format!("  action {w} = 0 1 1 1 1 1 1 1\n");
    }
    text += "end\n";
    std::fs::write(&bad, text).unwrap();
    let (code, _, err) = opkit(&["check", &fixture("as3"), bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_LAW);
    assert!(err.contains("error[E501]"), "{err}");
}

#[test]
fn out_flag_writes_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("as3.json");
    let (code, out, _) = opkit(&["export", "--builtin", "as3", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (EXIT_OK, ""));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["schema"], "opkit.multicategory.v1");
}

#[test]
fn tensor_with_the_unit_stabilizes() {
    let (code, out, err) = opkit(&["tensor", &fixture("i"), &fixture("as3"), "--left", "I", "--right", "As3", "--compare", "As3"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stabilized"], true, "{out}");
    assert_eq!(v["isomorphic_to"]["isomorphic"], true, "{out}");
    assert_eq!(v["isomorphic_to"]["operations"].as_object().unwrap().len(), 10);
}

#[test]
fn lexical_and_syntactic_diagnostics() {
    let cases = [
        ("colors C\n  color \"x\nend\n", "E101", Phase::Lexical, (2, 9)),
        ("colors C\n  color m(x\nend\n", "E102", Phase::Lexical, (2, 10)),
        ("shapes C\nend\n", "E201", Phase::Syntactic, (1, 1)),
        ("colors C\n  colour x\nend\n", "E202", Phase::Syntactic, (2, 3)),
        ("colors C\n  color x\n", "E204", Phase::Syntactic, (1, 1)),
    ];
    for (text, code, phase, (line, col)) in cases {
        let ds = syntax::parse(text).unwrap_err();
        let d = &ds[0];
        assert_eq!((d.code, d.phase), (code, phase), "{text:?}: {d}");
        let s = d.span.unwrap();
        assert_eq!((s.line, s.col), (line, col), "{text:?}: {d}");
    }
    let mixed = "colors C\n  color x\nend\n\nmulticategory M over C\n  generator m : x x -> x\n  op u : x -> x\nend\n";
    assert_eq!(syntax::parse(mixed).unwrap_err()[0].code, "E206");
}

#[test]
fn resolution_and_structural_diagnostics() {
    let first = |docs: &[&str]| elaborate(docs).unwrap_err().remove(0);

    let d = first(&[I, "multifunctor F : I -> I\n  object z -> x\n  map 1 -> 1\nend\n"]);
    assert_eq!((d.code, d.phase), ("E301", Phase::Resolution));
    assert_eq!(d.span.map(|s| (s.line, s.col)), Some((2, 10)));

    let d = first(&[I, "multifunctor F : I -> J\n  object x -> x\nend\n"]);
    assert_eq!(d.code, "E303");
    let d = first(&[I, I]);
    assert_eq!(d.code, "E304");
    let d = first(&[I, "multifunctor F : I -> I\n  object x -> x\n  map 1 -> 2\nend\n"]);
    assert_eq!(d.code, "E302");

    let d = first(&["colors C\n  color x\nend\n\nmulticategory M over C\n  generator m : x x -> x\n  relation m(1,2) = 1 : x\nend\n"]);
    assert_eq!((d.code, d.phase), ("E402", Phase::Structural));
    assert_eq!(d.span.map(|s| s.line), Some(7));

    let d = first(&[I, "bimodule L over I I\n  element a : x -> x\n  left 1 a = a\nend\n"]);
    assert_eq!((d.code, d.phase), ("E401", Phase::Structural));
}

#[test]
fn command_table_matches_the_parser() {
    use clap::CommandFactory;
    let cli = opkit_cli::commands::Cli::command();
    let parsed: BTreeSet<&str> = cli.get_subcommands().map(|c| c.get_name()).collect();
    let listed: BTreeSet<&str> = COMMANDS.iter().map(|(c, _)| *c).collect();
    assert_eq!(parsed, listed);
    assert_eq!(listed.len(), COMMANDS.len());
    let mut ops = BTreeSet::new();
    for (c, names) in COMMANDS {
        assert!(!names.is_empty(), "{c}");
        for n in *names {
            assert!(ops.insert(*n), "{n} listed twice");
        }
    }
}
