//! Writes the stand-in real-network edge lists under `data/`.
//!
//! Each file holds a connected heavy-tailed graph with the published node and
//! edge counts, plus a detached triangle, one repeated edge and one self-loop
//! so that loading exercises cleanup and largest-component extraction.
//!
//! cargo run -p kgdrift --example make_fixtures -- [out_dir]

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use kgdrift::rng::rng_from_seed;
use rand::seq::SliceRandom;
use rand::Rng;

const NETWORKS: [(&str, usize, usize, u64); 4] = [
    ("pira", 391, 864, 391),
    ("asg", 207, 2550, 207),
    ("ns", 379, 914, 379),
    ("ht", 113, 2196, 113),
];

/// Connected graph on `n` nodes with exactly `m` edges: a preferential
/// spanning tree, then degree-biased extra edges.
fn connected_graph(n: usize, m: usize, seed: u64) -> Vec<(usize, usize)> {
    assert!(m >= n - 1 && m <= n * (n - 1) / 2);
    let mut rng = rng_from_seed(seed);
    let mut edges = HashSet::new();
    // every node appears once per incident edge, plus once for itself
    let mut urn: Vec<usize> = vec![0];
    for v in 1..n {
        let u = urn[rng.random_range(0..urn.len())];
        edges.insert((u, v));
        urn.extend([u, v, v]);
    }
    while edges.len() < m {
        let u = urn[rng.random_range(0..urn.len())];
        let v = if rng.random::<f64>() < 0.5 {
            urn[rng.random_range(0..urn.len())]
        } else {
            rng.random_range(0..n)
        };
        if u != v && edges.insert((u.min(v), u.max(v))) {
            urn.extend([u, v]);
        }
    }
    let mut out: Vec<(usize, usize)> = edges.into_iter().collect();
    out.sort_unstable();
    out.shuffle(&mut rng);
    out
}

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, n, m, seed) in NETWORKS {
        let mut text = format!(
            "# {name}: synthetic stand-in, {n} nodes and {m} edges in the largest component\n"
        );
        for (i, (u, v)) in connected_graph(n, m, seed).into_iter().enumerate() {
            let _ = writeln!(text, "{name}{u} {name}{v}");
            if i == 0 {
                let _ = writeln!(text, "{name}{v} {name}{u}");
                let _ = writeln!(text, "{name}{u} {name}{u}");
            }
        }
        text.push_str("\n# detached triangle\nx0 x1\nx1 x2\nx2 x0\n");
        let path = dir.join(format!("{name}.edges"));
        std::fs::write(&path, text)?;
        println!("{}", path.display());
    }
    Ok(())
}
