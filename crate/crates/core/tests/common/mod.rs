#![allow(dead_code)]

use qg_spectra::{Graph, GraphKind};

/// Named fixture graphs used across the integration tests.
pub fn fixtures() -> Vec<(String, Graph)> {
    let g = |k: GraphKind, s: usize| Graph::generate(k, s).unwrap();
    let mut out: Vec<(String, Graph)> = vec![
        ("P2".into(), g(GraphKind::Path, 2)),
        ("P3".into(), g(GraphKind::Path, 3)),
        ("P4".into(), g(GraphKind::Path, 4)),
        ("K1,3".into(), g(GraphKind::Star, 3)),
        ("C3".into(), g(GraphKind::Circuit, 3)),
        ("C4".into(), g(GraphKind::Circuit, 4)),
        ("C5".into(), g(GraphKind::Circuit, 5)),
        ("C8".into(), g(GraphKind::Circuit, 8)),
        ("K4".into(), g(GraphKind::Complete, 4)),
        ("K5".into(), g(GraphKind::Complete, 5)),
        ("Petersen".into(), g(GraphKind::Petersen, 0)),
        ("Q3".into(), g(GraphKind::CubeQ3, 0)),
        ("BG1".into(), g(GraphKind::ButlerGrout1, 0)),
        ("BG2".into(), g(GraphKind::ButlerGrout2, 0)),
    ];
    out.push(("C3+C4".into(), g(GraphKind::Circuit, 3).disjoint_union(&g(GraphKind::Circuit, 4))));
    out.push(("C4+K4".into(), g(GraphKind::Circuit, 4).disjoint_union(&g(GraphKind::Complete, 4))));
    out
}

pub fn fixture(name: &str) -> Graph {
    fixtures()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap_or_else(|| panic!("no fixture {name}"))
        .1
}
