//! Cubic attribute sets, contranominal influence and δ-adjusted subcontexts.
//!
//! An attribute set is cubic when it carries a contranominal scale and no
//! proper superset does. The influence of an attribute is
//! `ζ(m) = Σ_k c_k(m) · 2^k / k` where `c_k(m)` counts the cubic sets of size
//! `k` containing `m`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::preprocess::{is_clarified, is_reduced};
use crate::scales::{ContraFinder, OwnedGenerator};
use crate::{Error, Execution, FormalContext, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CubicSet {
    pub attributes: Vec<usize>,
    /// `classes[i]` holds the objects that can face `attributes[i]`.
    pub classes: Vec<Vec<usize>>,
}

impl CubicSet {
    pub fn dimension(&self) -> usize {
        self.attributes.len()
    }
}

/// Cubic sets of a clarified and reduced context, in lexicographic order.
pub fn cubic_sets(ctx: &FormalContext, exec: Execution) -> Result<Vec<CubicSet>> {
    if !is_clarified(ctx) {
        return Err(Error::NotClarified {
            operation: "cubic_sets",
        });
    }
    if !is_reduced(ctx) {
        return Err(Error::NotReduced {
            operation: "cubic_sets",
        });
    }
    Ok(cubic_sets_unchecked(ctx, exec))
}

/// [`cubic_sets`] without the preprocessing check.
pub fn cubic_sets_unchecked(ctx: &FormalContext, exec: Execution) -> Vec<CubicSet> {
    let generators = ContraFinder::new(ctx).generators(exec);
    maximal_generators(generators, ctx.n_attributes())
}

fn maximal_generators(generators: Vec<OwnedGenerator>, n_attributes: usize) -> Vec<CubicSet> {
    // admitting a scale is inherited by subsets, so checking one-element
    // extensions decides maximality
    let known: HashSet<&[usize]> = generators.iter().map(|g| g.attributes.as_slice()).collect();
    let mut out = Vec::new();
    let mut extended = Vec::new();
    for g in &generators {
        let is_maximal = (0..n_attributes)
            .filter(|m| g.attributes.binary_search(m).is_err())
            .all(|m| {
                extended.clear();
                extended.extend_from_slice(&g.attributes);
                let pos = extended.partition_point(|&a| a < m);
                extended.insert(pos, m);
                !known.contains(extended.as_slice())
            });
        if is_maximal {
            out.push(CubicSet {
                attributes: g.attributes.clone(),
                classes: g.classes.clone(),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeInfluence {
    pub attribute: usize,
    pub label: String,
    /// Dimension `k` to the number of cubic sets of size `k` containing the attribute.
    pub counts: BTreeMap<usize, u64>,
    pub zeta: BigRational,
}

impl AttributeInfluence {
    pub fn count(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn zeta_f64(&self) -> f64 {
        self.zeta.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `Σ_k counts[k] · 2^k / k`.
pub fn zeta_from_counts(counts: &BTreeMap<usize, u64>) -> BigRational {
    counts
        .iter()
        .filter(|&(&k, _)| k > 0)
        .map(|(&k, &c)| {
            BigRational::new(BigInt::from(c) * (BigInt::from(1) << k), BigInt::from(k))
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceReport {
    pub attributes: Vec<AttributeInfluence>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceJson {
    pub label: String,
    pub counts: BTreeMap<usize, u64>,
    pub zeta: f64,
}

impl InfluenceReport {
    pub fn from_cubic_sets(ctx: &FormalContext, sets: &[CubicSet]) -> Self {
        let mut counts = vec![BTreeMap::<usize, u64>::new(); ctx.n_attributes()];
        for set in sets {
            for &m in &set.attributes {
                *counts[m].entry(set.dimension()).or_default() += 1;
            }
        }
        let attributes = counts
            .into_iter()
            .enumerate()
            .map(|(m, counts)| AttributeInfluence {
                attribute: m,
                label: ctx.attribute_label(m).to_string(),
                zeta: zeta_from_counts(&counts),
                counts,
            })
            .collect();
        InfluenceReport { attributes }
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    /// Attribute indices by ascending ζ, ties by index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<&AttributeInfluence> = self.attributes.iter().collect();
        order.sort_by(|a, b| a.zeta.cmp(&b.zeta).then(a.attribute.cmp(&b.attribute)));
        order.into_iter().map(|a| a.attribute).collect()
    }

    /// Dimensions with a nonzero count for some attribute.
    pub fn dimensions(&self) -> Vec<usize> {
        let dims: BTreeSet<usize> = self
            .attributes
            .iter()
            .flat_map(|a| a.counts.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k))
            .collect();
        dims.into_iter().collect()
    }

    pub fn to_json(&self) -> Vec<InfluenceJson> {
        self.attributes
            .iter()
            .map(|a| InfluenceJson {
                label: a.label.clone(),
                counts: a.counts.clone(),
                zeta: a.zeta_f64(),
            })
            .collect()
    }
}

/// Influence of every attribute of a clarified and reduced context.
pub fn influence(ctx: &FormalContext, exec: Execution) -> Result<InfluenceReport> {
    let sets = cubic_sets(ctx, exec)?;
    Ok(InfluenceReport::from_cubic_sets(ctx, &sets))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjustedSelection {
    pub delta: f64,
    /// Chosen attributes, ascending.
    pub attributes: Vec<usize>,
    pub report: InfluenceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionJson {
    pub delta: f64,
    pub chosen: Vec<String>,
    pub excluded: Vec<String>,
}

impl AdjustedSelection {
    pub fn from_report(report: InfluenceReport, delta: f64) -> Result<Self> {
        let n = selection_size(delta, report.len())?;
        let mut attributes: Vec<usize> = report.ranking().into_iter().take(n).collect();
        attributes.sort_unstable();
        Ok(AdjustedSelection {
            delta,
            attributes,
            report,
        })
    }

    pub fn contains(&self, m: usize) -> bool {
        self.attributes.binary_search(&m).is_ok()
    }

    /// The δ-adjusted subcontext `K[G, N]`.
    pub fn subcontext(&self, ctx: &FormalContext) -> Result<FormalContext> {
        if ctx.n_attributes() != self.report.len() {
            return Err(Error::Mismatch(format!(
                "selection over {} attributes, context has {}",
                self.report.len(),
                ctx.n_attributes()
            )));
        }
        ctx.apply_selection(&ctx.select_attributes(self.attributes.iter().copied())?)
    }

    pub fn to_json(&self) -> SelectionJson {
        let (chosen, excluded): (Vec<_>, Vec<_>) =
            self.report.attributes.iter().partition(|a| self.contains(a.attribute));
        SelectionJson {
            delta: self.delta,
            chosen: chosen.into_iter().map(|a| a.label.clone()).collect(),
            excluded: excluded.into_iter().map(|a| a.label.clone()).collect(),
        }
    }
}

/// `⌈δ·n⌉`, tolerant to rounding noise in `δ·n`.
pub fn selection_size(delta: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    let size = (delta * n as f64 - 1e-9).ceil().max(0.0) as usize;
    Ok(size.min(n))
}

/// The `⌈δ·|M|⌉` attributes of smallest influence.
pub fn delta_adjust(ctx: &FormalContext, delta: f64, exec: Execution) -> Result<AdjustedSelection> {
    selection_size(delta, ctx.n_attributes())?;
    AdjustedSelection::from_report(influence(ctx, exec)?, delta)
}

/// Per-attribute counts and ζ with an optional selection marker.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceTable {
    pub dimensions: Vec<usize>,
    pub rows: Vec<InfluenceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceRow {
    pub label: String,
    pub counts: Vec<u64>,
    pub zeta: f64,
    pub selected: bool,
}

impl InfluenceTable {
    pub fn new(report: &InfluenceReport, selection: Option<&AdjustedSelection>) -> Self {
        let dimensions = report.dimensions();
        let rows = report
            .attributes
            .iter()
            .map(|a| InfluenceRow {
                label: a.label.clone(),
                counts: dimensions.iter().map(|&k| a.count(k)).collect(),
                zeta: a.zeta_f64(),
                selected: selection.is_some_and(|s| s.contains(a.attribute)),
            })
            .collect();
        InfluenceTable { dimensions, rows }
    }

    /// Aligned text; selected rows are marked with `*`.
    pub fn to_text(&self) -> String {
        if self.rows.is_empty() {
            return String::new();
        }
        let width = self
            .rows
            .iter()
            .map(|r| r.label.chars().count())
            .max()
            .unwrap_or(0)
            .max("attribute".len());
        let mut out = String::new();
        let _ = write!(out, "  {:<width$}", "attribute");
        for k in &self.dimensions {
            let _ = write!(out, " {:>6}", k);
        }
        let _ = writeln!(out, " {:>8}", "zeta");
        for r in &self.rows {
            let pad = width - r.label.chars().count();
            let mark = if r.selected { '*' } else { ' ' };
            let _ = write!(out, "{mark} {}{}", r.label, " ".repeat(pad));
            for c in &r.counts {
                let _ = write!(out, " {:>6}", c);
            }
            let _ = writeln!(out, " {:>8.1}", r.zeta);
        }
        out
    }

    /// Header `attribute,k=..,zeta,selected`; ζ at one decimal.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["attribute".to_string()];
        header.extend(self.dimensions.iter().map(|k| format!("k={k}")));
        header.push("zeta".into());
        header.push("selected".into());
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.label.clone()];
            rec.extend(r.counts.iter().map(u64::to_string));
            rec.push(format!("{:.1}", r.zeta));
            rec.push(if r.selected { "1" } else { "0" }.into());
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv writes utf-8"))
    }
}

/// Influence table of a clarified and reduced context, marking the
/// δ-adjusted selection when `delta` is given.
pub fn influence_table(
    ctx: &FormalContext,
    delta: Option<f64>,
    exec: Execution,
) -> Result<InfluenceTable> {
    let report = influence(ctx, exec)?;
    match delta {
        Some(d) => {
            let sel = AdjustedSelection::from_report(report, d)?;
            Ok(InfluenceTable::new(&sel.report, Some(&sel)))
        }
        None => Ok(InfluenceTable::new(&report, None)),
    }
}
