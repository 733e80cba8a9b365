mod common;

use std::collections::BTreeSet;
use std::fs;

use chatnet::cohesion::maximal_cliques;
use chatnet::config::{Analyses, AnalysisConfig};
use chatnet::connectivity::{gomory_hu, CapacityMode};
use chatnet::equivalence::{high_eq_tie_fraction, rege, RegeOptions};
use chatnet::export::{to_dot, ExportFormat, NodeAttributes};
use chatnet::graph::{read_csv, write_csv, MentionGraph};
use chatnet::ingest::{build_roster, discover_inputs, parse_corpus, write_ndjson};
use chatnet::pipeline::{run_analysis, run_pipeline, Stage};
use chatnet::Error;

use common::*;

fn fixture_config() -> AnalysisConfig {
    AnalysisConfig {
        inputs: vec![fixture_dir().join("logs")],
        ..AnalysisConfig::default()
    }
}

fn fixture_graph() -> MentionGraph {
    run_analysis(&AnalysisConfig {
        analyses: Analyses::none(),
        ..fixture_config()
    })
    .unwrap()
    .graph
}

#[test]
fn corpus_matches_golden_serialization() {
    let files = discover_inputs(&[fixture_dir().join("logs")]).unwrap();
    let corpus = parse_corpus(&files).unwrap();
    assert_eq!(corpus.total_lines, 12);
    assert_eq!(corpus.message_count, 11);
    assert_eq!(corpus.skipped_lines, 1);
    let mut buf = Vec::new();
    write_ndjson(&corpus, &mut buf).unwrap();
    let golden = fs::read_to_string(fixture_dir().join("corpus.ndjson")).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), golden);
}

#[test]
fn roster_matches_hand_count() {
    let files = discover_inputs(&[fixture_dir().join("logs")]).unwrap();
    let roster = build_roster(&parse_corpus(&files).unwrap());
    let counts: Vec<(&str, usize)> = roster.counts().iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assert_eq!(
        counts,
        [("alice", 3), ("bob", 2), ("carol", 1), ("dave", 2), ("erin", 2)]
    );
}

#[test]
fn graph_matches_hand_traced_table() {
    let g = fixture_graph();
    let table: Vec<(&str, &str, u64)> = g
        .edges()
        .iter()
        .map(|e| (g.nick(e.source), g.nick(e.target), e.weight))
        .collect();
    assert_eq!(
        table,
        [
            ("alice", "bob", 2),
            ("bob", "alice", 2),
            ("carol", "alice", 1),
            ("carol", "bob", 1),
            ("dave", "alice", 1),
            ("dave", "carol", 1),
        ]
    );
    let mut buf = Vec::new();
    write_csv(&g, &mut buf).unwrap();
    assert_eq!(buf, fs::read(fixture_dir().join("graph.csv")).unwrap());
    assert_eq!(read_csv(buf.as_slice()).unwrap(), g);
}

#[test]
fn undirected_view_matches_symmetrization() {
    let g = fixture_graph();
    let u = g.to_undirected();
    let n = g.node_count();
    let mut expected = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let w = g.weight(a, b).unwrap_or(0) + g.weight(b, a).unwrap_or(0);
            if w > 0 {
                expected.push((a, b, w));
            }
        }
    }
    assert_eq!(u.edges(), expected.as_slice());
}

#[test]
fn report_matches_golden_bytes() {
    let report = run_pipeline(&fixture_config()).unwrap();
    let golden = fs::read_to_string(fixture_dir().join("report.json")).unwrap();
    assert_eq!(report.to_json().unwrap(), golden);
}

#[test]
fn golden_report_sections_agree_with_oracles() {
    let report = run_pipeline(&fixture_config()).unwrap();
    let g = fixture_graph();
    let u = g.to_undirected();
    let id = |s: &str| g.node_id(s).unwrap();

    let stats = report.stats.unwrap();
    assert_eq!((stats.node_count, stats.edge_count, stats.total_weight), (5, 6, 8));
    assert_eq!(stats.density, 6.0 / 20.0);

    let c = report.centrality.unwrap();
    let oracle = hits_authority_oracle(&g);
    for r in &c.top_authorities {
        assert!((r.authority - oracle[id(&r.nick)]).abs() <= 1e-8);
    }
    let auths: Vec<f64> = c.top_authorities.iter().map(|r| r.authority).collect();
    assert!(auths.windows(2).all(|w| w[0] >= w[1]));

    let s = report.skeleton.unwrap();
    let closure_core = scc_oracle(&g).into_iter().max_by_key(|c| (c.len(), std::cmp::Reverse(c[0]))).unwrap();
    assert_eq!(s.core_size, closure_core.len());
    assert_eq!(s.links.iter().flatten().sum::<u64>(), 6);
    assert_eq!(s.weighted_links.iter().flatten().sum::<u64>(), 8);

    let coh = report.cohesion.unwrap();
    assert_eq!(coh.clique_count, cliques_oracle(&u, 3).len());

    let con = report.connectivity.unwrap();
    assert_eq!(con.cutpoint_count, cutpoints_oracle(&u).len());
    assert_eq!(con.block_count, blocks_oracle(&u).len());
    let l = lambda_matrix_oracle(&u, false);
    for level in &con.lambda_levels {
        for set in &level.sets {
            let ids: Vec<usize> = set.iter().map(|n| id(n)).collect();
            assert!(satisfies_lambda_inequality(&l, &ids));
        }
    }
    for link in &con.top_links {
        assert_eq!(link.score, min_cut_oracle(&u, id(&link.a), id(&link.b), true));
    }

    let eq = report.equivalence.unwrap();
    let o = rege_oracle(&g, 3);
    let e = rege(&g, &RegeOptions::default()).unwrap();
    let fractions = high_eq_tie_fraction(&g, &e, 0.5).unwrap();
    for v in 0..g.node_count() {
        let nb = g.neighbors(v);
        let tally = if nb.is_empty() {
            0.0
        } else {
            nb.iter().filter(|&&x| o[v][x] > 0.5).count() as f64 / nb.len() as f64
        };
        assert_eq!(fractions[v], tally);
    }
    assert_eq!(eq.roles.components.len(), 4);
}

#[test]
fn csv_input_reproduces_the_log_report() {
    let from_logs = run_pipeline(&fixture_config()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("graph.csv");
    let mut buf = Vec::new();
    write_csv(&fixture_graph(), &mut buf).unwrap();
    fs::write(&path, buf).unwrap();
    let from_csv = run_pipeline(&AnalysisConfig {
        inputs: vec![path],
        ..AnalysisConfig::default()
    })
    .unwrap();
    assert_eq!(from_csv.to_json().unwrap(), from_logs.to_json().unwrap());
}

#[test]
fn corpus_input_reproduces_the_log_report() {
    let from_logs = run_pipeline(&fixture_config()).unwrap();
    let from_corpus = run_pipeline(&AnalysisConfig {
        inputs: vec![fixture_dir().join("corpus.ndjson")],
        ..AnalysisConfig::default()
    })
    .unwrap();
    assert_eq!(from_corpus.to_json().unwrap(), from_logs.to_json().unwrap());
}

#[test]
fn manifest_input_matches_directory_input() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.txt");
    let logs = fixture_dir().join("logs");
    fs::write(
        &manifest,
        format!(
            "# fixture days\n2012-03-01 {}\n2012-03-02 {}\n",
            logs.join("2012-03-01.txt").display(),
            logs.join("2012-03-02.txt").display()
        ),
    )
    .unwrap();
    let via_manifest = run_pipeline(&AnalysisConfig {
        manifest: Some(manifest),
        ..AnalysisConfig::default()
    })
    .unwrap();
    assert_eq!(
        via_manifest.to_json().unwrap(),
        run_pipeline(&fixture_config()).unwrap().to_json().unwrap()
    );
}

#[test]
fn stats_only_config_yields_only_stats() {
    let mut c = fixture_config();
    c.analyses = Analyses::parse_list("stats").unwrap();
    let r = run_pipeline(&c).unwrap();
    assert_eq!(r.sections(), ["stats"]);
    let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    let keys: BTreeSet<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, BTreeSet::from(["config", "stats", "tool"]));
}

#[test]
fn each_enabled_analysis_contributes_one_section() {
    for name in Analyses::NAMES {
        let mut c = fixture_config();
        c.analyses = Analyses::parse_list(name).unwrap();
        assert_eq!(run_pipeline(&c).unwrap().sections(), [name]);
    }
    let mut c = fixture_config();
    c.analyses = Analyses::none();
    assert!(run_pipeline(&c).unwrap().sections().is_empty());
}

#[test]
fn reports_validate_against_the_schema() {
    let schema: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json")).unwrap(),
    )
    .unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let mut configs = vec![fixture_config()];
    for (key, value) in [
        ("analyses", "stats"),
        ("lambda_mode", "weighted"),
        ("clique_mutual_only", "true"),
        ("rege_binarize", "true"),
        ("hits_weighted", "true"),
    ] {
        let mut c = fixture_config();
        c.set(key, value).unwrap();
        configs.push(c);
    }
    for c in configs {
        let json: serde_json::Value = serde_json::from_str(&run_pipeline(&c).unwrap().to_json().unwrap()).unwrap();
        let msgs: Vec<String> = match compiled.validate(&json) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
        };
        assert!(msgs.is_empty(), "schema violations: {msgs:#?}");
    }
}

#[test]
fn report_json_round_trips() {
    let r = run_pipeline(&fixture_config()).unwrap();
    let back: chatnet::AnalysisReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(back.to_json().unwrap(), r.to_json().unwrap());
    let md = r.to_markdown();
    assert!(md.contains("## Roles"));
    assert!(md.contains("| alice - bob | 5 | 4 |"));
}

#[test]
fn errors_name_the_failing_stage() {
    let missing = run_pipeline(&AnalysisConfig {
        inputs: vec![fixture_dir().join("no-such-dir").join("2012-01-01.txt")],
        ..AnalysisConfig::default()
    })
    .unwrap_err();
    assert_eq!(missing.stage, Stage::Ingest);
    assert!(missing.to_string().starts_with("ingest stage failed"));

    let empty = run_pipeline(&AnalysisConfig::default()).unwrap_err();
    assert_eq!(empty.stage, Stage::Ingest);
    assert!(matches!(empty.source, Error::EmptyInput));

    let mut bad = fixture_config();
    bad.eq_threshold = 2.0;
    assert_eq!(run_pipeline(&bad).unwrap_err().stage, Stage::Config);

    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("2012-05-05.txt");
    fs::write(&log, "[10:00] === server notice has joined #x\n").unwrap();
    let no_people = run_pipeline(&AnalysisConfig {
        inputs: vec![log],
        ..AnalysisConfig::default()
    })
    .unwrap_err();
    assert_eq!(no_people.stage, Stage::Extract);
    assert!(matches!(no_people.source, Error::NoParticipants));
}

#[test]
fn exports_of_the_fixture() {
    let g = fixture_graph();
    let dot = to_dot(&g, &NodeAttributes::default()).unwrap();
    assert!(dot.contains("alice -> bob [weight=2];"));
    assert!(dot.contains("  erin;"));
    let dir = tempfile::tempdir().unwrap();
    for (fmt, name) in [("dot", "g.dot"), ("graphml", "g.graphml"), ("csv", "g.csv")] {
        let path = dir.path().join(name);
        chatnet::export_graph(&g, fmt.parse::<ExportFormat>().unwrap(), &NodeAttributes::default(), &path).unwrap();
        assert!(fs::metadata(&path).unwrap().len() > 0);
    }
    let back = read_csv(fs::File::open(dir.path().join("g.csv")).unwrap()).unwrap();
    assert_eq!(back, g);
    let unwritable = dir.path().join("missing").join("g.dot");
    assert!(matches!(
        chatnet::export_graph(&g, ExportFormat::Dot, &NodeAttributes::default(), &unwritable),
        Err(Error::Write { .. })
    ));
}

#[test]
fn fixture_cliques_and_tree() {
    let u = fixture_graph().to_undirected();
    let r = maximal_cliques(&u, 3).unwrap();
    let got: BTreeSet<Vec<usize>> = r.cliques.into_iter().collect();
    assert_eq!(got, cliques_oracle(&u, 3));
    let t = gomory_hu(&u, CapacityMode::Weighted);
    let l = lambda_matrix_oracle(&u, true);
    for a in 0..5 {
        for b in a + 1..5 {
            assert_eq!(t.min_cut(a, b), l[a][b]);
        }
    }
}
