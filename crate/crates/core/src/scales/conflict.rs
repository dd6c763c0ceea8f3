//! Conflict graph of a context and the clique-based scale oracle.
//!
//! Vertices are the non-incident pairs `(g, m)`; `(g, m)` and `(h, n)` are
//! adjacent iff `(g, n) ∈ I` and `(h, m) ∈ I`. Cliques of size `k` are exactly
//! the contranominal scales of dimension `k`. All cliques are recovered from
//! the maximal ones (Bron–Kerbosch with Tomita pivoting): every nonempty
//! subset of the `i`-th maximal clique is reported unless an earlier maximal
//! clique already contains it.

use std::ops::ControlFlow;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::ContranominalScale;
use crate::bits;
use crate::FormalContext;

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    /// Non-incident pairs in row-major order.
    pub vertices: Vec<(usize, usize)>,
    adjacency: Vec<FixedBitSet>,
}

impl ConflictGraph {
    pub fn new(ctx: &FormalContext) -> Self {
        let vertices: Vec<(usize, usize)> = (0..ctx.n_objects())
            .flat_map(|g| {
                (0..ctx.n_attributes())
                    .filter(move |&m| !ctx.incident(g, m))
                    .map(move |m| (g, m))
            })
            .collect();
        let n = vertices.len();
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for (i, &(g, m)) in vertices.iter().enumerate() {
            for (j, &(h, k)) in vertices.iter().enumerate().skip(i + 1) {
                if ctx.incident(g, k) && ctx.incident(h, m) {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        ConflictGraph {
            vertices,
            adjacency,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn neighbors(&self, i: usize) -> &FixedBitSet {
        &self.adjacency[i]
    }

    /// Edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n_vertices())
            .flat_map(|i| self.adjacency[i].ones().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    /// Maximal cliques as ascending vertex lists, sorted.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let _ = self.for_each_maximal_clique(None, |c| {
            out.push(c.to_vec());
            ControlFlow::Continue(())
        });
        out.sort_unstable();
        out
    }

    fn for_each_maximal_clique<F>(&self, deadline: Option<Instant>, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = self.n_vertices();
        if n == 0 {
            return ControlFlow::Continue(());
        }
        let mut r = Vec::new();
        let p = bits::full(n);
        let x = FixedBitSet::with_capacity(n);
        let mut ticks = 0u32;
        self.bron_kerbosch(&mut r, p, x, deadline, &mut ticks, &mut f)
    }

    fn bron_kerbosch<F>(
        &self,
        r: &mut Vec<usize>,
        mut p: FixedBitSet,
        mut x: FixedBitSet,
        deadline: Option<Instant>,
        ticks: &mut u32,
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        *ticks = ticks.wrapping_add(1);
        if *ticks % 1024 == 1 && deadline.is_some_and(|d| Instant::now() >= d) {
            return ControlFlow::Break(());
        }
        if p.is_clear() {
            if x.is_clear() {
                let mut clique = r.clone();
                clique.sort_unstable();
                return f(&clique);
            }
            return ControlFlow::Continue(());
        }
        // pivot maximizing |P ∩ N(u)| over P ∪ X
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| p.intersection(&self.adjacency[u]).count())
            .expect("P is nonempty");
        let mut candidates = p.clone();
        candidates.difference_with(&self.adjacency[pivot]);
        for v in candidates.ones() {
            let mut p2 = p.clone();
            p2.intersect_with(&self.adjacency[v]);
            let mut x2 = x.clone();
            x2.intersect_with(&self.adjacency[v]);
            r.push(v);
            let flow = self.bron_kerbosch(r, p2, x2, deadline, ticks, f);
            r.pop();
            flow?;
            p.set(v, false);
            x.insert(v);
        }
        ControlFlow::Continue(())
    }

    fn clique_to_scale(&self, clique: impl Iterator<Item = usize>) -> ContranominalScale {
        ContranominalScale::new(clique.map(|v| self.vertices[v]).collect())
    }
}

/// Visits every scale of `ctx` through the cliques of its conflict graph.
/// Returns `Break` if `f` stops the stream or `deadline` passes.
pub fn for_each_bronkerbosch<F>(
    ctx: &FormalContext,
    deadline: Option<Instant>,
    mut f: F,
) -> ControlFlow<()>
where
    F: FnMut(ContranominalScale) -> ControlFlow<()>,
{
    let graph = ConflictGraph::new(ctx);
    let mut maximal: Vec<Vec<usize>> = Vec::new();
    graph.for_each_maximal_clique(deadline, |c| {
        maximal.push(c.to_vec());
        ControlFlow::Continue(())
    })?;
    maximal.sort_unstable();
    let n = graph.n_vertices();
    let masks: Vec<FixedBitSet> = maximal
        .iter()
        .map(|c| bits::from_indices(n, c.iter().copied()))
        .collect();

    let mut ticks = 0u32;
    for (i, clique) in maximal.iter().enumerate() {
        let size = clique.len();
        assert!(size < 64, "clique of size {size} is beyond the subset oracle");
        let mut subset = FixedBitSet::with_capacity(n);
        for bitmask in 1u64..(1u64 << size) {
            ticks = ticks.wrapping_add(1);
            if ticks % 4096 == 1 && deadline.is_some_and(|d| Instant::now() >= d) {
                return ControlFlow::Break(());
            }
            subset.clear();
            for (b, &v) in clique.iter().enumerate() {
                if bitmask >> b & 1 == 1 {
                    subset.insert(v);
                }
            }
            if masks[..i].iter().any(|earlier| subset.is_subset(earlier)) {
                continue;
            }
            f(graph.clique_to_scale(subset.ones()))?;
        }
    }
    ControlFlow::Continue(())
}

/// All scales via cliques of the conflict graph.
pub fn enumerate_bronkerbosch(ctx: &FormalContext) -> Vec<ContranominalScale> {
    let mut out = Vec::new();
    let _ = for_each_bronkerbosch(ctx, None, |s| {
        out.push(s);
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_incidence_has_no_vertices() {
        let k = FormalContext::from_matrix(&vec![vec![true; 2]; 3]).unwrap();
        assert_eq!(ConflictGraph::new(&k).n_vertices(), 0);
        assert!(enumerate_bronkerbosch(&k).is_empty());
    }

    #[test]
    fn contranominal_two_is_one_edge() {
        let n2 = FormalContext::contranominal(2).unwrap();
        let g = ConflictGraph::new(&n2);
        assert_eq!(g.vertices, vec![(0, 0), (1, 1)]);
        assert_eq!(g.edges(), vec![(0, 1)]);
        let mut scales = enumerate_bronkerbosch(&n2);
        scales.sort();
        let dims: Vec<usize> = scales.iter().map(|s| s.dimension()).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 2);
        assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 1);
    }

    #[test]
    fn empty_incidence_has_no_edges() {
        let k = FormalContext::from_matrix(&vec![vec![false; 3]; 2]).unwrap();
        let g = ConflictGraph::new(&k);
        assert_eq!(g.n_vertices(), 6);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn maximal_cliques_of_contranominal() {
        let n4 = FormalContext::contranominal(4).unwrap();
        let g = ConflictGraph::new(&n4);
        assert_eq!(g.maximal_cliques(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(enumerate_bronkerbosch(&n4).len(), 15);
    }
}
