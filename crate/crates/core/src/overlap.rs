//! Top-k node sets and their overlap.

use crate::centrality::ScoreVector;
use crate::error::{param, Result};
use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopKSet {
    pub k: usize,
    /// Ordered by (score descending, node id ascending).
    pub members: Vec<NodeId>,
}

impl TopKSet {
    pub fn contains(&self, v: NodeId) -> bool {
        self.members.contains(&v)
    }
}

/// The `min(k, n)` highest-scoring nodes; equal scores are ordered by node id.
pub fn top_k(scores: &ScoreVector, k: usize) -> Result<TopKSet> {
    if k == 0 {
        return Err(param("k must be at least 1"));
    }
    let mut members = scores.ranking();
    members.truncate(k);
    Ok(TopKSet { k, members })
}

pub fn overlap(a: &TopKSet, b: &TopKSet) -> Result<usize> {
    if a.k != b.k {
        return Err(param(format!("top-k sets differ in k ({} vs {})", a.k, b.k)));
    }
    let mut left = a.members.clone();
    left.sort_unstable();
    Ok(b.members
        .iter()
        .filter(|v| left.binary_search(v).is_ok())
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::Metric;
    use proptest::prelude::*;

    fn sv(scores: &[f64]) -> ScoreVector {
        ScoreVector {
            metric: Metric::Degree,
            scores: scores.to_vec(),
        }
    }

    fn set(k: usize, members: &[NodeId]) -> TopKSet {
        TopKSet {
            k,
            members: members.to_vec(),
        }
    }

    #[test]
    fn top_k_examples() {
        // a=0, b=1, c=2, d=3
        assert_eq!(top_k(&sv(&[3.0, 2.0, 2.0, 1.0]), 2).unwrap().members, vec![0, 1]);
        assert_eq!(top_k(&sv(&[1.0, 5.0, 2.0]), 10).unwrap().members, vec![1, 2, 0]);
        assert_eq!(top_k(&sv(&[0.5; 6]), 3).unwrap().members, vec![0, 1, 2]);
        assert!(top_k(&sv(&[1.0]), 0).is_err());
    }

    #[test]
    fn overlap_examples() {
        let all: Vec<NodeId> = (0..20).collect();
        assert_eq!(overlap(&set(20, &all), &set(20, &all)).unwrap(), 20);
        assert_eq!(overlap(&set(5, &[0, 1, 2, 3, 4]), &set(5, &[5, 6, 7, 8, 9])).unwrap(), 0);
        assert_eq!(overlap(&set(3, &[1, 2, 3]), &set(3, &[3, 4, 5])).unwrap(), 1);
        assert!(overlap(&set(3, &[1]), &set(4, &[1])).is_err());
    }

    proptest! {
        #[test]
        fn overlap_symmetric_and_bounded(
            a in proptest::collection::vec(0u32..50, 5..40),
            b in proptest::collection::vec(0u32..50, 5..40),
            k in 1usize..15,
        ) {
            let n = a.len().min(b.len());
            let sa = sv(&a[..n].iter().map(|&x| x as f64).collect::<Vec<_>>());
            let sb = sv(&b[..n].iter().map(|&x| x as f64).collect::<Vec<_>>());
            let (ta, tb) = (top_k(&sa, k).unwrap(), top_k(&sb, k).unwrap());
            let ab = overlap(&ta, &tb).unwrap();
            prop_assert_eq!(ab, overlap(&tb, &ta).unwrap());
            let kk = k.min(n);
            prop_assert!(ab <= kk);
            prop_assert!(ab + n >= 2 * kk);
        }
    }
}
