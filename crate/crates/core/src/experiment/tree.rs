//! Binary-feature decision tree with Gini splits, grown until no split
//! lowers the impurity. Ties go to the lowest feature index; leaves predict
//! the strict majority and `false` on a tie.

use crate::FormalContext;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(bool),
    Split {
        feature: usize,
        /// Subtree for objects without the feature.
        absent: Box<DecisionTree>,
        present: Box<DecisionTree>,
    },
}

/// `(numerator, denominator)` of `Σ_c (p_c² + q_c²) / n_c`; larger is purer.
#[derive(Debug, Clone, Copy)]
struct Purity(u128, u128);

impl Purity {
    fn of(pos: usize, total: usize) -> Purity {
        let (p, q) = (pos as u128, (total - pos) as u128);
        Purity(p * p + q * q, total as u128)
    }

    fn add(self, other: Purity) -> Purity {
        Purity(self.0 * other.1 + other.0 * self.1, self.1 * other.1)
    }

    fn gt(self, other: Purity) -> bool {
        self.0 * other.1 > other.0 * self.1
    }
}

impl DecisionTree {
    pub fn fit(ctx: &FormalContext, features: &[usize], label: usize, rows: &[usize]) -> Self {
        let pos = rows.iter().filter(|&&g| ctx.incident(g, label)).count();
        let leaf = DecisionTree::Leaf(2 * pos > rows.len());
        if rows.is_empty() || pos == 0 || pos == rows.len() {
            return leaf;
        }
        let mut best = None;
        let mut threshold = Purity::of(pos, rows.len());
        for &f in features {
            let (mut n1, mut p1) = (0, 0);
            for &g in rows {
                if ctx.incident(g, f) {
                    n1 += 1;
                    if ctx.incident(g, label) {
                        p1 += 1;
                    }
                }
            }
            let n0 = rows.len() - n1;
            if n0 == 0 || n1 == 0 {
                continue;
            }
            let purity = Purity::of(pos - p1, n0).add(Purity::of(p1, n1));
            if purity.gt(threshold) {
                threshold = purity;
                best = Some(f);
            }
        }
        let Some(feature) = best else {
            return leaf;
        };
        let (present, absent): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&g| ctx.incident(g, feature));
        DecisionTree::Split {
            feature,
            absent: Box::new(DecisionTree::fit(ctx, features, label, &absent)),
            present: Box::new(DecisionTree::fit(ctx, features, label, &present)),
        }
    }

    pub fn predict(&self, ctx: &FormalContext, g: usize) -> bool {
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf(v) => return *v,
                DecisionTree::Split {
                    feature,
                    absent,
                    present,
                } => {
                    node = if ctx.incident(g, *feature) {
                        present
                    } else {
                        absent
                    }
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Split {
                absent, present, ..
            } => 1 + absent.depth().max(present.depth()),
        }
    }
}

/// Fraction of `test` objects whose label the tree trained on `train` predicts.
pub(crate) fn accuracy(
    ctx: &FormalContext,
    features: &[usize],
    label: usize,
    train: &[usize],
    test: &[usize],
) -> f64 {
    let tree = DecisionTree::fit(ctx, features, label, train);
    let hits = test
        .iter()
        .filter(|&&g| tree.predict(ctx, g) == ctx.incident(g, label))
        .count();
    hits as f64 / test.len() as f64
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
    fn constant_label_is_a_leaf() {
        let k = ctx(&["x.", ".x", "xx"]);
        let all: Vec<usize> = (0..3).collect();
        // column 1 is the label, column 0 is noise
        let k2 = ctx(&["xx", ".x", "xx"]);
        assert_eq!(DecisionTree::fit(&k2, &[0], 1, &all), DecisionTree::Leaf(true));
        assert_eq!(DecisionTree::fit(&k, &[], 1, &all).depth(), 0);
    }

    #[test]
    fn copied_feature_gives_one_split() {
        let k = ctx(&["xx.", "..x", "xxx", "...", "..."]);
        let all: Vec<usize> = (0..5).collect();
        let tree = DecisionTree::fit(&k, &[0, 2], 1, &all);
        assert_eq!(tree.depth(), 1);
        assert!(matches!(tree, DecisionTree::Split { feature: 0, .. }));
    }

    #[test]
    fn xor_label_stays_a_leaf() {
        // label = a xor b: no single split lowers the impurity, so the tree stays a leaf
        let k = ctx(&["...", "x.x", ".xx", "xx."]);
        let all: Vec<usize> = (0..4).collect();
        assert_eq!(DecisionTree::fit(&k, &[0, 1], 2, &all), DecisionTree::Leaf(false));
    }

    #[test]
    fn majority_tie_is_false() {
        let k = ctx(&["x", "."]);
        assert_eq!(DecisionTree::fit(&k, &[], 0, &[0, 1]), DecisionTree::Leaf(false));
    }

    #[test]
    fn accuracy_on_held_out_rows() {
        let k = ctx(&["xx", "..", "xx", "..", "x.", ".x"]);
        let acc = accuracy(&k, &[0], 1, &[0, 1, 2, 3], &[4, 5]);
        assert_eq!(acc, 0.0);
        let acc = accuracy(&k, &[0], 1, &[0, 1], &[2, 3]);
        assert_eq!(acc, 1.0);
    }
}
