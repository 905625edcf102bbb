#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use popan::{validate, EdgeKind, PopanEdge, PopanGraph, PopanNode, ProductKind};

const SUFFIXES: &[&str] = &["", "", "", ":x", "<&>", "ü", " sp", "\"q\""];
const LABELS: &[&str] = &[
    "",
    "",
    "Housing",
    "a < b & c",
    "Ünïcode ✓",
    "  padded  ",
    "two\nlines",
];

fn suffix(rng: &mut impl Rng) -> &'static str {
    SUFFIXES.choose(rng).unwrap()
}

fn arrowed(rng: &mut impl Rng, id: String, kind: EdgeKind, x: &str, y: &str) -> PopanEdge {
    if rng.gen_bool(0.5) {
        PopanEdge::assembly(id, kind, x, y)
    } else {
        PopanEdge::assembly(id, kind, y, x)
    }
}

/// A random graph that passes validation with at most `max_steps`
/// product-to-process links (and at least one). May contain cycles.
pub fn random_valid_graph(seed: u64, max_steps: usize) -> PopanGraph {
    assert!(max_steps >= 4);
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let mut builder = PopanGraph::builder();

    let product_count = rng.gen_range(2..=5usize.min(max_steps));
    let products: Vec<String> = (0..product_count)
        .map(|i| format!("P{i}{}", suffix(rng)))
        .collect();
    for (i, id) in products.iter().enumerate() {
        let kind = match i {
            0 => ProductKind::InitialProduct,
            1 => ProductKind::LastProduct,
            _ => *[
                ProductKind::ElementaryProduct,
                ProductKind::SubProduct,
                ProductKind::FastenerProduct,
            ]
            .choose(rng)
            .unwrap(),
        };
        let mut node =
            PopanNode::product(id.as_str(), kind).with_label(*LABELS.choose(rng).unwrap());
        if rng.gen_bool(0.1) {
            node.metadata.insert("serial".into(), format!("S-{seed}"));
        }
        builder.add_node(node).unwrap();
    }

    let processes: Vec<String> = (0..rng.gen_range(1..=4))
        .map(|i| format!("Op{i}{}", suffix(rng)))
        .collect();
    for id in &processes {
        builder
            .add_node(
                PopanNode::process(id.as_str(), "Handling")
                    .with_label(*LABELS.choose(rng).unwrap()),
            )
            .unwrap();
    }
    let resources: Vec<String> = (0..rng.gen_range(1..=3))
        .map(|i| format!("Res{i}{}", suffix(rng)))
        .collect();
    for id in &resources {
        builder
            .add_node(PopanNode::resource(id.as_str(), "Robot"))
            .unwrap();
    }

    let mut edge_no = 0;
    let mut next_id = |prefix: &str| {
        edge_no += 1;
        format!("{prefix}{edge_no}")
    };

    // Mandatory links for ordinary products, optional ones for the anchors,
    // then extra links while the step budget allows.
    let mut links: Vec<(usize, usize)> = Vec::new();
    for p in 0..product_count {
        if p >= 2 || rng.gen_bool(0.6) {
            links.push((p, rng.gen_range(0..processes.len())));
        }
    }
    if links.is_empty() {
        links.push((1, 0));
    }
    while links.len() < max_steps && rng.gen_bool(0.4) {
        let candidate = (
            rng.gen_range(0..product_count),
            rng.gen_range(0..processes.len()),
        );
        if !links.contains(&candidate) {
            links.push(candidate);
        }
    }
    for (p, q) in links {
        let edge = PopanEdge::new(
            next_id("L"),
            EdgeKind::LinkingP2P,
            products[p].as_str(),
            processes[q].as_str(),
        )
        .with_conditional(rng.gen_bool(0.3));
        builder.add_edge(edge).unwrap();
    }

    for q in &processes {
        let r = resources.choose(rng).unwrap();
        builder
            .add_edge(PopanEdge::new(
                next_id("R"),
                EdgeKind::LinkingP2R,
                q.as_str(),
                r.as_str(),
            ))
            .unwrap();
    }

    for x in 0..product_count {
        for y in x + 1..product_count {
            for kind in [EdgeKind::Physical, EdgeKind::Structural] {
                if rng.gen_bool(0.25) {
                    let id = next_id(if kind == EdgeKind::Physical {
                        "PH"
                    } else {
                        "ST"
                    });
                    let edge = arrowed(rng, id, kind, &products[x], &products[y]);
                    builder.add_edge(edge).unwrap();
                }
            }
        }
    }
    for x in 0..processes.len() {
        for y in x + 1..processes.len() {
            if rng.gen_bool(0.3) {
                let id = next_id("SQ");
                let edge = arrowed(
                    rng,
                    id,
                    EdgeKind::SequenceProcess,
                    &processes[x],
                    &processes[y],
                );
                builder.add_edge(edge).unwrap();
            }
        }
    }

    let graph = builder.build();
    let report = validate(&graph);
    assert!(
        report.ok,
        "generator produced an invalid graph (seed {seed}):\n{report}"
    );
    graph
}
