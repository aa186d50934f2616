//! Exhaustive pairing of connected unicyclic graphs on at most 8 vertices:
//! CK-isospectral pairs must be isomorphic unless both are bipartite.

use std::f64::consts::PI;

use qg_spectra::inverse::isospectral;
use qg_spectra::matrices::default_cluster_tol;
use qg_spectra::spectra::{ck_spectrum, default_match_tol, SpectrumWindow};
use qg_spectra::{Graph, GraphKind};

fn push_unique(classes: &mut Vec<Graph>, g: Graph) {
    if !classes.iter().any(|h| h.is_isomorphic(&g)) {
        classes.push(g);
    }
}

/// Every unicyclic graph other than a circuit has a leaf, so all classes on
/// `n` vertices arise from `C_n` or from a class on `n - 1` vertices by
/// attaching a pendant vertex.
fn unicyclic_classes(max_n: usize) -> Vec<Vec<Graph>> {
    let mut by_n: Vec<Vec<Graph>> = vec![Vec::new(); max_n + 1];
    for n in 3..=max_n {
        let mut classes = vec![Graph::generate(GraphKind::Circuit, n).unwrap()];
        for g in by_n[n - 1].clone() {
            for v in 0..g.n() {
                let mut edges = g.edges().to_vec();
                edges.push((v, g.n()));
                push_unique(&mut classes, Graph::from_edge_list(n, edges).unwrap());
            }
        }
        by_n[n] = classes;
    }
    by_n
}

#[test]
fn unicyclic_isospectrality() {
    let by_n = unicyclic_classes(8);
    // 1, 2, 5, 13, 33, 89 classes for n = 3..8
    let counts: Vec<usize> = by_n[3..].iter().map(Vec::len).collect();
    assert_eq!(counts, [1, 2, 5, 13, 33, 89]);

    let lam = 4.0 * PI * PI + 1.0;
    let tol = default_match_tol::<f64>();
    let mut bipartite_pairs = Vec::new();
    for classes in &by_n[3..] {
        let windows: Vec<SpectrumWindow<f64>> = classes
            .iter()
            .map(|g| ck_spectrum(g, lam, default_cluster_tol(g.n())).unwrap())
            .collect();
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                if !isospectral(&windows[i], &windows[j], tol).unwrap() {
                    continue;
                }
                // representatives are pairwise non-isomorphic
                let both_bipartite = classes[i].analyze().is_bipartite() && classes[j].analyze().is_bipartite();
                assert!(both_bipartite, "non-isomorphic isospectral pair with a non-bipartite member: {:?} / {:?}",
                    classes[i].edges(), classes[j].edges());
                bipartite_pairs.push((classes[i].clone(), classes[j].clone()));
            }
        }
    }
    // the Butler–Grout pair is one of the bipartite exceptions
    let bg1 = Graph::generate(GraphKind::ButlerGrout1, 0).unwrap();
    let bg2 = Graph::generate(GraphKind::ButlerGrout2, 0).unwrap();
    assert!(bipartite_pairs.iter().any(|(a, b)| {
        (a.is_isomorphic(&bg1) && b.is_isomorphic(&bg2)) || (a.is_isomorphic(&bg2) && b.is_isomorphic(&bg1))
    }));
}
