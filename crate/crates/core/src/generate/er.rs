use rand::Rng as _;

use crate::error::{param, Result};
use crate::graph::Graph;
use crate::rng::rng_from_seed;

/// G(n, p) with `p = target_avg_degree / (n - 1)`.
pub fn gen_er(n: usize, target_avg_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(param("ER needs at least 2 nodes"));
    }
    let p = target_avg_degree / (n - 1) as f64;
    if !(p > 0.0 && p <= 1.0) {
        return Err(param(format!("ER edge probability {p} outside (0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_one_is_complete() {
        let g = gen_er(2, 1.0, 0).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(gen_er(6, 5.0, 4).unwrap().edge_count(), 15);
    }

    #[test]
    fn deterministic() {
        assert_eq!(gen_er(100, 5.0, 42).unwrap(), gen_er(100, 5.0, 42).unwrap());
        assert_ne!(gen_er(100, 5.0, 42).unwrap(), gen_er(100, 5.0, 43).unwrap());
    }

    #[test]
    fn mean_degree_over_seeds() {
        let seeds = 100;
        let mean = (0..seeds)
            .map(|s| 2.0 * gen_er(500, 12.0, s).unwrap().edge_count() as f64 / 500.0)
            .sum::<f64>()
            / seeds as f64;
        assert!((mean - 12.0).abs() <= 0.3, "mean degree {mean}");
    }

    #[test]
    fn edge_count_within_three_standard_errors() {
        let (n, avg, seeds) = (200usize, 8.0, 200u64);
        let pairs = (n * (n - 1) / 2) as f64;
        let p = avg / (n - 1) as f64;
        let mean = (0..seeds)
            .map(|s| gen_er(n, avg, s).unwrap().edge_count() as f64)
            .sum::<f64>()
            / seeds as f64;
        let se = (pairs * p * (1.0 - p) / seeds as f64).sqrt();
        assert!((mean - pairs * p).abs() < 3.0 * se);
    }
}
