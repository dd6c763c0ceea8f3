//! Lexicographic backtracking over characterizing tuples.
//!
//! A search node is a generator `N = {m1 < … < mk}` together with its
//! characterizing tuples, stored per attribute as the object class
//! `H(mi) = {g | (g,mi) ∉ I, (g,n) ∈ I for all other n ∈ N}`, and the set of
//! objects still allowed to enter (`G` minus every object missing some
//! attribute of `N`, the complement of the forbidden set). Extending `N` by
//! a later attribute `m`:
//!
//! - each class shrinks to its members incident with `m`;
//! - the new class `H(m)` is the allowed objects missing `m`;
//! - the child exists only if no class became empty and `H(m)` is nonempty;
//! - the allowed set shrinks to its members incident with `m`.
//!
//! The pruning condition compares classes per generator attribute: a child
//! is explored iff every attribute of `N` keeps at least one tuple. This is
//! the reading under which the search agrees with brute force; counting
//! objects instead of attributes skips generators whose classes merely
//! shrink. Because the set of generators admitting a scale is closed under
//! subsets, visiting attributes in increasing order reaches every such
//! generator exactly once, and each generator yields one scale per choice of
//! one object from every class.

use std::cell::Cell;
use std::ops::ControlFlow;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{ContranominalScale, ScaleCounts};
use crate::par::{self, Execution};
use crate::FormalContext;

/// A generator reached by the search, borrowed from the search state.
pub struct Generator<'s> {
    attributes: &'s [usize],
    classes: &'s [FixedBitSet],
}

impl<'s> Generator<'s> {
    pub fn dimension(&self) -> usize {
        self.attributes.len()
    }

    /// Generator attributes, ascending.
    pub fn attributes(&self) -> &'s [usize] {
        self.attributes
    }

    /// `H(m)` for each generator attribute, aligned with [`attributes`](Self::attributes).
    pub fn classes(&self) -> &'s [FixedBitSet] {
        self.classes
    }

    /// Number of scales on this generator: the product of the class sizes.
    pub fn scale_count(&self) -> u128 {
        self.classes
            .iter()
            .map(|c| c.count_ones(..) as u128)
            .product()
    }

    /// Calls `f` once per choice of one object from every class, varying the
    /// last attribute's object fastest.
    pub fn for_each_scale<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(ContranominalScale) -> ControlFlow<()>,
    {
        let members: Vec<Vec<usize>> = self.classes.iter().map(|c| c.ones().collect()).collect();
        for_each_choice(self.attributes, &members, &mut f)
    }

    pub fn scales(&self) -> Vec<ContranominalScale> {
        let mut out = Vec::new();
        let _ = self.for_each_scale(|s| {
            out.push(s);
            ControlFlow::Continue(())
        });
        out
    }

    pub fn to_owned(&self) -> OwnedGenerator {
        OwnedGenerator {
            attributes: self.attributes.to_vec(),
            classes: self.classes.iter().map(|c| c.ones().collect()).collect(),
        }
    }
}

fn for_each_choice<F>(attributes: &[usize], members: &[Vec<usize>], f: &mut F) -> ControlFlow<()>
where
    F: FnMut(ContranominalScale) -> ControlFlow<()>,
{
    let k = attributes.len();
    let mut pos = vec![0usize; k];
    loop {
        let pairs = (0..k).map(|i| (members[i][pos[i]], attributes[i])).collect();
        f(ContranominalScale { pairs })?;
        let mut i = k;
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < members[i].len() {
                break;
            }
            pos[i] = 0;
        }
    }
}

/// An owned generator with its object classes as sorted index lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OwnedGenerator {
    pub attributes: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl OwnedGenerator {
    pub fn dimension(&self) -> usize {
        self.attributes.len()
    }

    pub fn scale_count(&self) -> u128 {
        self.classes.iter().map(|c| c.len() as u128).product()
    }

    pub fn scales(&self) -> Vec<ContranominalScale> {
        let mut out = Vec::new();
        let _ = for_each_choice(&self.attributes, &self.classes, &mut |s| {
            out.push(s);
            ControlFlow::Continue(())
        });
        out
    }
}

#[derive(Clone)]
struct Level {
    classes: Vec<FixedBitSet>,
    allowed: FixedBitSet,
}

/// Search state for one thread: per-depth buffers plus the current generator.
struct Search<'c> {
    ctx: &'c FormalContext,
    levels: Vec<Level>,
    attrs: Vec<usize>,
    deadline: Option<Instant>,
    timed_out: &'c Cell<bool>,
    ticks: u32,
}

impl<'c> Search<'c> {
    fn new(ctx: &'c FormalContext, deadline: Option<Instant>, timed_out: &'c Cell<bool>) -> Self {
        let depth = ctx.n_attributes().min(ctx.n_objects()) + 1;
        let empty = Level {
            classes: Vec::new(),
            allowed: FixedBitSet::with_capacity(ctx.n_objects()),
        };
        let mut levels = vec![empty; depth + 1];
        levels[0].allowed = ctx.all_objects();
        Search {
            ctx,
            levels,
            attrs: Vec::with_capacity(depth),
            deadline,
            timed_out,
            ticks: 0,
        }
    }

    fn expired(&mut self) -> bool {
        if let Some(deadline) = self.deadline {
            self.ticks = self.ticks.wrapping_add(1);
            if self.ticks % 1024 == 1 && Instant::now() >= deadline {
                self.timed_out.set(true);
            }
        }
        self.timed_out.get()
    }

    /// Computes the child of the generator at `depth` extended by `m` into
    /// level `depth + 1`. Returns false if the child admits no scale.
    fn extend(&mut self, depth: usize, m: usize) -> bool {
        let ext = self.ctx.extent(m);
        let (lo, hi) = self.levels.split_at_mut(depth + 1);
        let cur = &lo[depth];
        let next = &mut hi[0];
        if cur.classes.iter().any(|h| h.is_disjoint(ext)) {
            return false;
        }
        if cur.allowed.is_subset(ext) {
            return false;
        }
        next.classes.resize_with(depth + 1, FixedBitSet::new);
        for (dst, h) in next.classes.iter_mut().zip(&cur.classes) {
            dst.clone_from(h);
            dst.intersect_with(ext);
        }
        let fresh = &mut next.classes[depth];
        fresh.clone_from(&cur.allowed);
        fresh.difference_with(ext);
        next.allowed.clone_from(&cur.allowed);
        next.allowed.intersect_with(ext);
        true
    }

    fn emit<F>(&self, depth: usize, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Generator) -> ControlFlow<()>,
    {
        f(&Generator {
            attributes: &self.attrs,
            classes: &self.levels[depth].classes,
        })
    }

    /// Visits all descendants of the generator at `depth` using attributes `>= start`.
    fn descend<F>(&mut self, depth: usize, start: usize, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Generator) -> ControlFlow<()>,
    {
        if self.levels[depth].allowed.is_clear() {
            return ControlFlow::Continue(());
        }
        for m in start..self.ctx.n_attributes() {
            if self.expired() {
                return ControlFlow::Break(());
            }
            if !self.extend(depth, m) {
                continue;
            }
            self.attrs.push(m);
            self.emit(depth + 1, f)?;
            self.descend(depth + 1, m + 1, f)?;
            self.attrs.pop();
        }
        ControlFlow::Continue(())
    }

    /// Rebuilds the state for `prefix`; false if some prefix admits no scale.
    fn enter(&mut self, prefix: &[usize]) -> bool {
        self.attrs.clear();
        for (depth, &m) in prefix.iter().enumerate() {
            if !self.extend(depth, m) {
                return false;
            }
            self.attrs.push(m);
        }
        true
    }
}

/// One unit of parallel work, in search order: either a single top-level
/// generator `{m0}` (emitted only), or the whole subtree below `{m0, m1}`.
#[derive(Clone, Copy)]
enum Task {
    Root(usize),
    Subtree(usize, usize),
}

/// Scale enumeration on one context.
pub struct ContraFinder<'c> {
    ctx: &'c FormalContext,
    deadline: Option<Instant>,
}

impl<'c> ContraFinder<'c> {
    pub fn new(ctx: &'c FormalContext) -> Self {
        ContraFinder {
            ctx,
            deadline: None,
        }
    }

    /// Stops the search once `deadline` has passed; the visitor methods then
    /// return `Break` and the collecting methods return `None`.
    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    /// Visits every generator admitting a scale, in lexicographic order.
    pub fn for_each_generator<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&Generator) -> ControlFlow<()>,
    {
        let timed_out = Cell::new(false);
        let mut search = Search::new(self.ctx, self.deadline, &timed_out);
        search.descend(0, 0, &mut f)
    }

    /// Visits every scale: generators in lexicographic order, then choices of
    /// objects in row-major order. Returning `Break` stops the search.
    pub fn for_each_scale<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(ContranominalScale) -> ControlFlow<()>,
    {
        self.for_each_generator(|gen| gen.for_each_scale(&mut f))
    }

    fn tasks(&self) -> Vec<Task> {
        let k = self.ctx.n_attributes();
        let mut tasks = Vec::new();
        for m0 in 0..k {
            tasks.push(Task::Root(m0));
            tasks.extend((m0 + 1..k).map(|m1| Task::Subtree(m0, m1)));
        }
        tasks
    }

    /// Runs `f` over the generators of one task; `None` on timeout.
    fn run_task<T, F>(&self, task: Task, mut f: F) -> Option<T>
    where
        F: FnMut(&Generator) -> ControlFlow<()>,
        T: Default,
    {
        let timed_out = Cell::new(false);
        let mut search = Search::new(self.ctx, self.deadline, &timed_out);
        let _ = match task {
            Task::Root(m0) => {
                if search.enter(&[m0]) {
                    search.emit(1, &mut f)
                } else {
                    ControlFlow::Continue(())
                }
            }
            Task::Subtree(m0, m1) => {
                if search.enter(&[m0, m1]) {
                    match search.emit(2, &mut f) {
                        ControlFlow::Continue(()) => search.descend(2, m1 + 1, &mut f),
                        brk => brk,
                    }
                } else {
                    ControlFlow::Continue(())
                }
            }
        };
        if timed_out.get() {
            return None;
        }
        Some(T::default())
    }

    /// Collects per-task results in search order; `None` if any task timed out.
    fn collect<T, F>(&self, exec: Execution, per_generator: F) -> Option<Vec<T>>
    where
        T: Send,
        F: Fn(&Generator, &mut Vec<T>) + Sync + Send,
    {
        let parts = par::map_ordered(exec, self.tasks(), |task| {
            let mut buf = Vec::new();
            self.run_task::<(), _>(task, |gen| {
                per_generator(gen, &mut buf);
                ControlFlow::Continue(())
            })
            .map(|_| buf)
        });
        let mut out = Vec::new();
        for part in parts {
            out.extend(part?);
        }
        Some(out)
    }

    /// All scales in search order. Sequential and parallel runs agree exactly.
    pub fn scales(&self, exec: Execution) -> Vec<ContranominalScale> {
        self.try_scales(exec)
            .expect("no deadline set; use try_scales with a deadline")
    }

    pub fn try_scales(&self, exec: Execution) -> Option<Vec<ContranominalScale>> {
        self.collect(exec, |gen, buf| buf.extend(gen.scales()))
    }

    /// All generators admitting a scale, with their classes, in search order.
    pub fn generators(&self, exec: Execution) -> Vec<OwnedGenerator> {
        self.try_generators(exec)
            .expect("no deadline set; use try_generators with a deadline")
    }

    pub fn try_generators(&self, exec: Execution) -> Option<Vec<OwnedGenerator>> {
        self.collect(exec, |gen, buf| buf.push(gen.to_owned()))
    }

    /// Dimension histogram without materializing scales: each generator
    /// contributes the product of its class sizes.
    pub fn count(&self, exec: Execution) -> ScaleCounts {
        self.try_count(exec)
            .expect("no deadline set; use try_count with a deadline")
    }

    pub fn try_count(&self, exec: Execution) -> Option<ScaleCounts> {
        let parts = par::map_ordered(exec, self.tasks(), |task| {
            let mut counts = ScaleCounts::default();
            self.run_task::<(), _>(task, |gen| {
                counts.add(gen.dimension(), gen.scale_count());
                ControlFlow::Continue(())
            })
            .map(|_| counts)
        });
        let mut total = ScaleCounts::default();
        for part in parts {
            total.merge(&part?);
        }
        Some(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(rows: &[&str]) -> FormalContext {
        let m: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.chars().map(|c| c == 'x').collect())
            .collect();
        FormalContext::from_matrix(&m).unwrap()
    }

    #[test]
    fn contranominal_three_has_seven_scales() {
        let n3 = FormalContext::contranominal(3).unwrap();
        let scales = ContraFinder::new(&n3).scales(Execution::Sequential);
        let counts = ScaleCounts::from_scales(&scales);
        assert_eq!(counts.total, 7);
        assert_eq!(
            counts.histogram.into_iter().collect::<Vec<_>>(),
            vec![(1, 3), (2, 3), (3, 1)]
        );
    }

    #[test]
    fn empty_incidence_two_by_two() {
        let k = ctx(&["..", ".."]);
        let scales = ContraFinder::new(&k).scales(Execution::Sequential);
        assert_eq!(scales.len(), 4);
        assert!(scales.iter().all(|s| s.dimension() == 1));
    }

    #[test]
    fn search_order_is_lexicographic() {
        let n3 = FormalContext::contranominal(3).unwrap();
        let mut gens = Vec::new();
        let _ = ContraFinder::new(&n3).for_each_generator(|g| {
            gens.push(g.attributes().to_vec());
            ControlFlow::Continue(())
        });
        let expected: Vec<Vec<usize>> = vec![
            vec![0],
            vec![0, 1],
            vec![0, 1, 2],
            vec![0, 2],
            vec![1],
            vec![1, 2],
            vec![2],
        ];
        assert_eq!(gens, expected);
    }

    #[test]
    fn choice_functions_row_major() {
        // attribute 0 missed by objects 0,1; attribute 1 missed by objects 2,3
        let k = ctx(&[".x", ".x", "x.", "x."]);
        let gen = ContraFinder::new(&k)
            .generators(Execution::Sequential)
            .into_iter()
            .find(|g| g.dimension() == 2)
            .unwrap();
        let pairs: Vec<Vec<(usize, usize)>> =
            gen.scales().iter().map(|s| s.pairs().to_vec()).collect();
        assert_eq!(
            pairs,
            vec![
                vec![(0, 0), (2, 1)],
                vec![(0, 0), (3, 1)],
                vec![(1, 0), (2, 1)],
                vec![(1, 0), (3, 1)],
            ]
        );
    }

    #[test]
    fn break_stops_the_stream() {
        let n4 = FormalContext::contranominal(4).unwrap();
        let mut seen = 0;
        let flow = ContraFinder::new(&n4).for_each_scale(|_| {
            seen += 1;
            if seen == 3 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        assert!(flow.is_break());
        assert_eq!(seen, 3);
    }

    #[test]
    fn parallel_matches_sequential() {
        let n5 = FormalContext::contranominal(5).unwrap();
        let cf = ContraFinder::new(&n5);
        assert_eq!(
            cf.scales(Execution::Sequential),
            cf.scales(Execution::Parallel)
        );
        assert_eq!(cf.count(Execution::Sequential), cf.count(Execution::Parallel));
        assert_eq!(cf.count(Execution::Parallel).total, 31);
    }

    #[test]
    fn expired_deadline_reports_none() {
        let n8 = FormalContext::contranominal(8).unwrap();
        let cf = ContraFinder::new(&n8).with_deadline(Instant::now());
        assert!(cf.try_count(Execution::Sequential).is_none());
    }

    #[test]
    fn full_incidence_has_none() {
        let k = ctx(&["xx", "xx"]);
        assert_eq!(ContraFinder::new(&k).count(Execution::Sequential).total, 0);
    }
}
