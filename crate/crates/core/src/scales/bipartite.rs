//! Induced matchings of bipartite graphs via scale enumeration.
//!
//! For a bipartite graph `(S, T, E)` the context `(S, T, (S×T) \ E)` has a
//! contranominal scale on `H ⊆ S`, `N ⊆ T` of dimension `k` exactly when the
//! edges between `H` and `N` form an induced matching of size `k`.

use serde::Serialize;

use super::ContraFinder;
use crate::{Execution, FormalContext, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartiteGraph {
    pub left: Vec<String>,
    pub right: Vec<String>,
    /// `(left index, right index)`, sorted and deduplicated.
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(left: Vec<String>, right: Vec<String>, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        BipartiteGraph { left, right, edges }
    }

    /// The context whose incidence is the non-edges.
    pub fn complement_context(&self) -> Result<FormalContext> {
        let edge_set: std::collections::HashSet<(usize, usize)> =
            self.edges.iter().copied().collect();
        FormalContext::from_fn(self.left.clone(), self.right.clone(), |s, t| {
            !edge_set.contains(&(s, t))
        })
    }
}

/// The bipartite graph associated with the complement of `ctx`: objects on
/// the left, attributes on the right, an edge for every non-incident pair.
pub fn to_bipartite(ctx: &FormalContext) -> BipartiteGraph {
    let edges = (0..ctx.n_objects())
        .flat_map(|g| {
            (0..ctx.n_attributes())
                .filter(move |&m| !ctx.incident(g, m))
                .map(move |m| (g, m))
        })
        .collect();
    BipartiteGraph::new(ctx.objects().to_vec(), ctx.attributes().to_vec(), edges)
}

/// Every nonempty induced matching of `graph`, as sorted edge lists.
pub fn induced_matchings(graph: &BipartiteGraph) -> Result<Vec<Vec<(usize, usize)>>> {
    let ctx = graph.complement_context()?;
    Ok(ContraFinder::new(&ctx)
        .scales(Execution::Sequential)
        .into_iter()
        .map(|s| {
            let mut edges = s.pairs().to_vec();
            edges.sort_unstable();
            edges
        })
        .collect())
}
