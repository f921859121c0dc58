use genusforge::current_graph::{check_star_pattern, AnchorStatus, CurrentGraph};
use genusforge::data::{parse_rows, K12_ROWS, K24_ROWS, S3_LOG};
use genusforge::derivation::{derive_rotation_system, expand_index4, DerivationSpec};
use genusforge::{Log, RotationSystem, VertexLabel};

fn labels(text: &str) -> Vec<VertexLabel> {
    text.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

/// Genus of a triangulation with `v` vertices and `e` edges, straight from
/// Euler's formula with `f = 2e/3`.
fn triangulation_genus(v: i64, e: i64) -> i64 {
    assert_eq!(2 * e % 3, 0);
    (2 - v + e - 2 * e / 3) / 2
}

fn complete_edges(v: i64) -> i64 {
    v * (v - 1) / 2
}

fn s3_derived() -> RotationSystem {
    derive_rotation_system(&DerivationSpec::new(Log::parse(32, S3_LOG).unwrap())).unwrap()
}

#[test]
fn k12_table_is_a_genus_6_triangulation() {
    let rs = expand_index4(&parse_rows(&K12_ROWS), 12).unwrap();
    assert!(rs.satisfies_rule_r_star());
    assert!(rs.check_complete_minus(12, &[]));
    let expected = triangulation_genus(12, complete_edges(12));
    assert_eq!(expected, 6);
    assert_eq!(rs.euler_genus().unwrap() as i64, expected);
}

#[test]
fn k24_table_is_a_genus_35_triangulation() {
    let rs = expand_index4(&parse_rows(&K24_ROWS), 24).unwrap();
    assert!(rs.satisfies_rule_r_star());
    assert!(rs.check_complete_minus(24, &[]));
    assert_eq!(rs.euler_genus().unwrap() as i64, triangulation_genus(24, complete_edges(24)));
    assert_eq!(rs.euler_genus().unwrap(), 7 * 5);
}

#[test]
fn s3_rows_start_as_printed() {
    let rs = s3_derived();
    let printed = [
        "3 x 1 y 31 z 29 24 20",
        "4 z 2 y 0 x 30 25 21",
        "5 x 3 y 1 z 31 26 22",
        "6 z 4 y 2 x 0 27 23",
    ];
    for (k, p) in printed.iter().enumerate() {
        let row = rs.rotation(VertexLabel::Number(k as u32)).unwrap();
        let want = labels(p);
        let at = row.iter().position(|&l| l == want[0]).unwrap();
        let got: Vec<_> = (0..want.len()).map(|i| row[(at + i) % row.len()]).collect();
        assert_eq!(got, want, "row {k}");
    }
}

#[test]
fn s3_rotation_at_x_contains_the_printed_run() {
    let rs = s3_derived();
    let x = rs.rotation(VertexLabel::Letter('x')).unwrap();
    let run = labels("31 30 1 0 3 2 5 4");
    let found = (0..x.len()).any(|i| run.iter().enumerate().all(|(j, &r)| x[(i + j) % x.len()] == r));
    assert!(found, "{x:?}");
}

#[test]
fn s3_is_k36_minus_k4_of_genus_87() {
    let rs = s3_derived();
    assert!(rs.satisfies_rule_r_star());
    let letters: Vec<VertexLabel> = "x y z w".split(' ').map(|t| t.parse().unwrap()).collect();
    let mut missing = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            missing.push((letters[i], letters[j]));
        }
    }
    assert!(rs.check_complete_minus(36, &missing));
    let expected = triangulation_genus(36, complete_edges(36) - 6);
    assert_eq!(expected, 87);
    assert_eq!(rs.euler_genus().unwrap() as i64, expected);
}

#[test]
fn s3_current_graph_is_reconstructed() {
    let log = Log::parse(32, S3_LOG).unwrap();
    let graph = CurrentGraph::reconstruct_from_log(&log).unwrap();
    assert_eq!(graph.trace_and_index().index(), 1);
    let report = graph.validate_principles();
    assert!(report.all_pass(), "{report}");
    assert!(graph.extract_log().unwrap().cyclic_eq(&log));
    // 32 group elements minus 0 give 15 arc classes plus the order-2 arc
    assert_eq!(graph.arcs().len(), 16);
    let cgf = graph.to_cgf();
    assert_eq!(CurrentGraph::from_cgf(&cgf).unwrap(), graph);
}

#[test]
fn s3_anchor_report() {
    let report = check_star_pattern(&Log::parse(32, S3_LOG).unwrap(), 3);
    let status: Vec<(String, AnchorStatus)> = report
        .anchors
        .iter()
        .map(|a| {
            let p: Vec<String> = a.pattern.iter().map(ToString::to_string).collect();
            (p.join(" "), a.status)
        })
        .collect();
    assert_eq!(
        status,
        vec![
            ("x 1 y 31 z".to_string(), AnchorStatus::Present),
            ("20 2 21".to_string(), AnchorStatus::Present),
            ("16 6 15".to_string(), AnchorStatus::Reversed),
            ("13 w".to_string(), AnchorStatus::Present),
        ]
    );
}
