//! Formal contexts and the basic operations on them.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::bits;
use crate::{Error, Result};

/// A formal context `(G, M, I)`.
///
/// Incidence is stored twice, as object intents (rows) and attribute extents
/// (columns), so that both derivation operators are word-parallel
/// intersections. The attribute order given at construction is fixed and is
/// the linear order used by every lexicographic enumeration in this crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    intents: Vec<FixedBitSet>,
    extents: Vec<FixedBitSet>,
}

impl std::fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FormalContext {}x{}", self.n_objects(), self.n_attributes())?;
        for (g, row) in self.intents.iter().enumerate() {
            let cells: String = (0..self.n_attributes())
                .map(|m| if row.contains(m) { 'X' } else { '.' })
                .collect();
            writeln!(f, "  {cells} {}", self.objects[g])?;
        }
        Ok(())
    }
}

fn check_unique(kind: &'static str, labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel {
                kind,
                label: label.clone(),
            });
        }
    }
    Ok(())
}

impl FormalContext {
    /// Builds a context from labels and a row-major boolean matrix.
    pub fn from_rows(
        objects: Vec<String>,
        attributes: Vec<String>,
        rows: &[Vec<bool>],
    ) -> Result<Self> {
        if rows.len() != objects.len() {
            return Err(Error::InvalidArgument(format!(
                "{} incidence rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        for (g, row) in rows.iter().enumerate() {
            if row.len() != attributes.len() {
                return Err(Error::RaggedIncidence {
                    row: g,
                    found: row.len(),
                    expected: attributes.len(),
                });
            }
        }
        Self::from_fn(objects, attributes, |g, m| rows[g][m])
    }

    /// Builds a context whose incidence is given by a predicate on `(object, attribute)`.
    pub fn from_fn(
        objects: Vec<String>,
        attributes: Vec<String>,
        incident: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        check_unique("object", &objects)?;
        check_unique("attribute", &attributes)?;
        let (n, k) = (objects.len(), attributes.len());
        let mut intents = vec![FixedBitSet::with_capacity(k); n];
        let mut extents = vec![FixedBitSet::with_capacity(n); k];
        for (g, intent) in intents.iter_mut().enumerate() {
            for (m, extent) in extents.iter_mut().enumerate() {
                if incident(g, m) {
                    intent.insert(m);
                    extent.insert(g);
                }
            }
        }
        Ok(FormalContext {
            objects,
            attributes,
            intents,
            extents,
        })
    }

    /// Builds a context from a `0/1` matrix with generated labels `g0.. / m0..`.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            (0..n).map(|g| format!("g{g}")).collect(),
            (0..k).map(|m| format!("m{m}")).collect(),
            rows,
        )
    }

    /// The contranominal scale `({1..k}, {1..k}, ≠)`.
    pub fn contranominal(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "contranominal scale needs dimension at least 1".into(),
            ));
        }
        let labels: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
        Self::from_fn(labels.clone(), labels, |g, m| g != m)
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_label(&self, g: usize) -> &str {
        &self.objects[g]
    }

    pub fn attribute_label(&self, m: usize) -> &str {
        &self.attributes[m]
    }

    pub fn attribute_index(&self, label: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == label)
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    #[inline]
    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.intents[g].contains(m)
    }

    /// `g'` as a bitset over attributes.
    #[inline]
    pub fn intent(&self, g: usize) -> &FixedBitSet {
        &self.intents[g]
    }

    /// `m'` as a bitset over objects.
    #[inline]
    pub fn extent(&self, m: usize) -> &FixedBitSet {
        &self.extents[m]
    }

    pub fn n_incidences(&self) -> usize {
        self.intents.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Fraction of crosses; 0 for an empty context.
    pub fn density(&self) -> f64 {
        let cells = self.n_objects() * self.n_attributes();
        if cells == 0 {
            0.0
        } else {
            self.n_incidences() as f64 / cells as f64
        }
    }

    pub fn all_objects(&self) -> FixedBitSet {
        bits::full(self.n_objects())
    }

    pub fn all_attributes(&self) -> FixedBitSet {
        bits::full(self.n_attributes())
    }

    /// `A'` for an object set given as a bitset of length `|G|`.
    pub fn attribute_derivation(&self, objects: &FixedBitSet) -> FixedBitSet {
        let mut out = self.all_attributes();
        for g in objects.ones() {
            out.intersect_with(&self.intents[g]);
        }
        out
    }

    /// `B'` for an attribute set given as a bitset of length `|M|`.
    pub fn object_derivation(&self, attributes: &FixedBitSet) -> FixedBitSet {
        let mut out = self.all_objects();
        for m in attributes.ones() {
            out.intersect_with(&self.extents[m]);
        }
        out
    }

    /// `B''`.
    pub fn attribute_closure(&self, attributes: &FixedBitSet) -> FixedBitSet {
        self.attribute_derivation(&self.object_derivation(attributes))
    }

    /// `A''`.
    pub fn object_closure(&self, objects: &FixedBitSet) -> FixedBitSet {
        self.object_derivation(&self.attribute_derivation(objects))
    }

    /// Checked index-list form of [`attribute_derivation`](Self::attribute_derivation).
    pub fn derive_attributes(&self, objects: &[usize]) -> Result<Vec<usize>> {
        let set = self.object_set(objects)?;
        Ok(bits::to_vec(&self.attribute_derivation(&set)))
    }

    /// Checked index-list form of [`object_derivation`](Self::object_derivation).
    pub fn derive_objects(&self, attributes: &[usize]) -> Result<Vec<usize>> {
        let set = self.attribute_set(attributes)?;
        Ok(bits::to_vec(&self.object_derivation(&set)))
    }

    pub fn object_set(&self, objects: &[usize]) -> Result<FixedBitSet> {
        index_set("object", self.n_objects(), objects)
    }

    pub fn attribute_set(&self, attributes: &[usize]) -> Result<FixedBitSet> {
        index_set("attribute", self.n_attributes(), attributes)
    }

    /// `K^C = (G, M, (G×M) \ I)`.
    pub fn complement(&self) -> FormalContext {
        let negate = |sets: &[FixedBitSet]| -> Vec<FixedBitSet> {
            sets.iter()
                .map(|s| {
                    let mut t = s.clone();
                    t.toggle_range(..);
                    t
                })
                .collect()
        };
        FormalContext {
            objects: self.objects.clone(),
            attributes: self.attributes.clone(),
            intents: negate(&self.intents),
            extents: negate(&self.extents),
        }
    }

    /// `(M, G, I⁻¹)`; object-side operations are the attribute-side ones on the transpose.
    pub fn transpose(&self) -> FormalContext {
        FormalContext {
            objects: self.attributes.clone(),
            attributes: self.objects.clone(),
            intents: self.extents.clone(),
            extents: self.intents.clone(),
        }
    }

    /// A hash of labels and incidence, used to detect stale selections.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    /// The full subcontext selection `K[G, M]`.
    pub fn select_all(&self) -> SubcontextSelection {
        SubcontextSelection {
            parent: self.fingerprint(),
            objects: (0..self.n_objects()).collect(),
            attributes: (0..self.n_attributes()).collect(),
        }
    }

    /// Selection `K[H, N]`; indices are sorted and deduplicated.
    pub fn select(
        &self,
        objects: impl IntoIterator<Item = usize>,
        attributes: impl IntoIterator<Item = usize>,
    ) -> Result<SubcontextSelection> {
        let objects = sorted_checked("object", self.n_objects(), objects)?;
        let attributes = sorted_checked("attribute", self.n_attributes(), attributes)?;
        Ok(SubcontextSelection {
            parent: self.fingerprint(),
            objects,
            attributes,
        })
    }

    /// `K[G, N]`.
    pub fn select_attributes(
        &self,
        attributes: impl IntoIterator<Item = usize>,
    ) -> Result<SubcontextSelection> {
        self.select(0..self.n_objects(), attributes)
    }

    /// Materializes a selection taken from this context.
    pub fn apply_selection(&self, sel: &SubcontextSelection) -> Result<FormalContext> {
        if sel.parent != self.fingerprint() {
            return Err(Error::StaleSelection);
        }
        Ok(self.restrict(&sel.objects, &sel.attributes))
    }

    /// Induced subcontext on sorted, in-range index lists.
    pub(crate) fn restrict(&self, objects: &[usize], attributes: &[usize]) -> FormalContext {
        let mut intents = vec![FixedBitSet::with_capacity(attributes.len()); objects.len()];
        let mut extents = vec![FixedBitSet::with_capacity(objects.len()); attributes.len()];
        for (i, &g) in objects.iter().enumerate() {
            for (j, &m) in attributes.iter().enumerate() {
                if self.incident(g, m) {
                    intents[i].insert(j);
                    extents[j].insert(i);
                }
            }
        }
        FormalContext {
            objects: objects.iter().map(|&g| self.objects[g].clone()).collect(),
            attributes: attributes.iter().map(|&m| self.attributes[m].clone()).collect(),
            intents,
            extents,
        }
    }

    /// The unique `(p,q)`-core: the largest subcontext in which every object
    /// has at least `p` and every attribute at least `q` incidences, computed
    /// by peeling to a fixpoint.
    pub fn pq_core(&self, p: usize, q: usize) -> SubcontextSelection {
        let (n, k) = (self.n_objects(), self.n_attributes());
        let mut obj_alive = vec![true; n];
        let mut att_alive = vec![true; k];
        let mut obj_deg: Vec<usize> = self.intents.iter().map(|r| r.count_ones(..)).collect();
        let mut att_deg: Vec<usize> = self.extents.iter().map(|c| c.count_ones(..)).collect();

        // Work queue of elements whose degree fell below threshold; `true` marks objects.
        let mut queue: VecDeque<(bool, usize)> = VecDeque::new();
        for g in 0..n {
            if obj_deg[g] < p {
                obj_alive[g] = false;
                queue.push_back((true, g));
            }
        }
        for m in 0..k {
            if att_deg[m] < q {
                att_alive[m] = false;
                queue.push_back((false, m));
            }
        }
        while let Some((is_object, i)) = queue.pop_front() {
            if is_object {
                for m in self.intents[i].ones() {
                    if att_alive[m] {
                        att_deg[m] -= 1;
                        if att_deg[m] < q {
                            att_alive[m] = false;
                            queue.push_back((false, m));
                        }
                    }
                }
            } else {
                for g in self.extents[i].ones() {
                    if obj_alive[g] {
                        obj_deg[g] -= 1;
                        if obj_deg[g] < p {
                            obj_alive[g] = false;
                            queue.push_back((true, g));
                        }
                    }
                }
            }
        }
        SubcontextSelection {
            parent: self.fingerprint(),
            objects: (0..n).filter(|&g| obj_alive[g]).collect(),
            attributes: (0..k).filter(|&m| att_alive[m]).collect(),
        }
    }
}

fn index_set(kind: &'static str, len: usize, indices: &[usize]) -> Result<FixedBitSet> {
    if let Some(&index) = indices.iter().find(|&&i| i >= len) {
        return Err(Error::IndexOutOfRange { kind, index, len });
    }
    Ok(bits::from_indices(len, indices.iter().copied()))
}

fn sorted_checked(
    kind: &'static str,
    len: usize,
    indices: impl IntoIterator<Item = usize>,
) -> Result<Vec<usize>> {
    let mut v: Vec<usize> = indices.into_iter().collect();
    if let Some(&index) = v.iter().find(|&&i| i >= len) {
        return Err(Error::IndexOutOfRange { kind, index, len });
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// A subcontext `K[H, N]` of a parent context, as sorted index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcontextSelection {
    parent: u64,
    objects: Vec<usize>,
    attributes: Vec<usize>,
}

impl SubcontextSelection {
    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn attributes(&self) -> &[usize] {
        &self.attributes
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty() && self.attributes.is_empty()
    }

    pub fn belongs_to(&self, ctx: &FormalContext) -> bool {
        self.parent == ctx.fingerprint()
    }
}
