use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Axis-aligned binary tree stored as an arena; node 0 is the root.
/// A sample goes left when `x[feature] <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree<L> {
    pub nodes: Vec<Node<L>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node<L> {
    Leaf(L),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Payload of a regression or classification leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LeafValue {
    Mean(f64),
    /// Per-class accumulated sample weight.
    Histogram(Vec<f64>),
}

impl<L> Tree<L> {
    pub fn single_leaf(leaf: L) -> Self {
        Self {
            nodes: vec![Node::Leaf(leaf)],
        }
    }

    pub fn leaf_for(&self, x: &[f64]) -> &L {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Leaf(l) => return l,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => idx = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = &L> {
        self.nodes.iter().filter_map(|n| match n {
            Node::Leaf(l) => Some(l),
            Node::Split { .. } => None,
        })
    }

    pub fn depth(&self) -> usize {
        fn walk<L>(t: &Tree<L>, idx: usize) -> usize {
            match &t.nodes[idx] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + walk(t, *left).max(walk(t, *right)),
            }
        }
        walk(self, 0)
    }
}

pub(crate) enum SplitTarget<'a> {
    /// Weighted variance reduction on a real target.
    Scalar(&'a [f64]),
    /// Weighted Gini impurity reduction.
    Classes { labels: &'a [usize], n_classes: usize },
}

pub(crate) struct GrowParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    pub features_per_split: usize,
}

pub(crate) struct Grower<'a, F> {
    pub x: &'a [Vec<f64>],
    pub target: SplitTarget<'a>,
    pub weights: &'a [f64],
    pub params: GrowParams,
    pub make_leaf: F,
}

struct Split {
    feature: usize,
    threshold: f64,
    left: Vec<usize>,
    right: Vec<usize>,
}

/// Running sufficient statistics of one side of a candidate split.
#[derive(Clone)]
enum Acc {
    Scalar { w: f64, s: f64, q: f64 },
    Classes { w: f64, per_class: Vec<f64> },
}

impl Acc {
    fn impurity(&self) -> f64 {
        match self {
            Acc::Scalar { w, s, q } => {
                if *w > 0.0 {
                    (q - s * s / w).max(0.0)
                } else {
                    0.0
                }
            }
            Acc::Classes { w, per_class } => {
                if *w > 0.0 {
                    (w - per_class.iter().map(|c| c * c).sum::<f64>() / w).max(0.0)
                } else {
                    0.0
                }
            }
        }
    }
}

impl<'a, L, F> Grower<'a, F>
where
    F: FnMut(&[usize]) -> L,
{
    pub fn grow<R: Rng>(mut self, samples: Vec<usize>, rng: &mut R) -> Tree<L> {
        let mut nodes: Vec<Option<Node<L>>> = Vec::new();
        self.build(samples, 0, rng, &mut nodes);
        Tree {
            nodes: nodes.into_iter().map(|n| n.expect("every node filled")).collect(),
        }
    }

    fn build<R: Rng>(&mut self, samples: Vec<usize>, depth: usize, rng: &mut R, nodes: &mut Vec<Option<Node<L>>>) -> usize {
        let idx = nodes.len();
        nodes.push(None);
        let split = if depth < self.params.max_depth && samples.len() >= 2 * self.params.min_leaf.max(1) {
            self.best_split(&samples, rng)
        } else {
            None
        };
        match split {
            None => nodes[idx] = Some(Node::Leaf((self.make_leaf)(&samples))),
            Some(s) => {
                let left = self.build(s.left, depth + 1, rng, nodes);
                let right = self.build(s.right, depth + 1, rng, nodes);
                nodes[idx] = Some(Node::Split {
                    feature: s.feature,
                    threshold: s.threshold,
                    left,
                    right,
                });
            }
        }
        idx
    }

    fn empty_acc(&self) -> Acc {
        match self.target {
            SplitTarget::Scalar(_) => Acc::Scalar { w: 0.0, s: 0.0, q: 0.0 },
            SplitTarget::Classes { n_classes, .. } => Acc::Classes {
                w: 0.0,
                per_class: vec![0.0; n_classes],
            },
        }
    }

    fn add(&self, acc: &mut Acc, i: usize, sign: f64) {
        let w = self.weights[i] * sign;
        match (acc, &self.target) {
            (Acc::Scalar { w: aw, s, q }, SplitTarget::Scalar(y)) => {
                *aw += w;
                *s += w * y[i];
                *q += w * y[i] * y[i];
            }
            (Acc::Classes { w: aw, per_class }, SplitTarget::Classes { labels, .. }) => {
                *aw += w;
                per_class[labels[i]] += w;
            }
            _ => unreachable!("accumulator matches target kind"),
        }
    }

    fn best_split<R: Rng>(&self, samples: &[usize], rng: &mut R) -> Option<Split> {
        let d = self.x[samples[0]].len();
        let m = self.params.features_per_split.clamp(1, d);
        let mut features = sample(rng, d, m).into_vec();
        features.sort_unstable();

        let mut total = self.empty_acc();
        for &i in samples {
            self.add(&mut total, i, 1.0);
        }
        let parent = total.impurity();
        if parent <= 1e-12 {
            return None;
        }
        let min_gain = parent * 1e-10;
        let n = samples.len();
        let min_leaf = self.params.min_leaf.max(1);

        let mut best: Option<(f64, usize, f64)> = None;
        let mut sorted = samples.to_vec();
        for &f in &features {
            sorted.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]));
            let mut left = self.empty_acc();
            let mut right = total.clone();
            for k in 0..n - 1 {
                let i = sorted[k];
                self.add(&mut left, i, 1.0);
                self.add(&mut right, i, -1.0);
                let n_left = k + 1;
                if n_left < min_leaf {
                    continue;
                }
                if n - n_left < min_leaf {
                    break;
                }
                let a = self.x[i][f];
                let b = self.x[sorted[k + 1]][f];
                if a == b {
                    continue;
                }
                let gain = parent - left.impurity() - right.impurity();
                if gain > min_gain && best.is_none_or(|(g, _, _)| gain > g) {
                    let mid = 0.5 * (a + b);
                    let threshold = if mid < b { mid } else { a };
                    best = Some((gain, f, threshold));
                }
            }
        }

        let (_, feature, threshold) = best?;
        let (left, right): (Vec<usize>, Vec<usize>) =
            samples.iter().partition(|&&i| self.x[i][feature] <= threshold);
        Some(Split {
            feature,
            threshold,
            left,
            right,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separates_two_groups() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y: Vec<f64> = (0..10).map(|i| if i < 5 { 0.0 } else { 1.0 }).collect();
        let w = vec![1.0; 10];
        let grower = Grower {
            x: &x,
            target: SplitTarget::Scalar(&y),
            weights: &w,
            params: GrowParams {
                max_depth: 4,
                min_leaf: 1,
                features_per_split: 1,
            },
            make_leaf: |s: &[usize]| s.iter().map(|&i| y[i]).sum::<f64>() / s.len() as f64,
        };
        let tree = grower.grow((0..10).collect(), &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(tree.depth(), 1);
        assert_eq!(*tree.leaf_for(&[4.4]), 0.0);
        assert_eq!(*tree.leaf_for(&[4.6]), 1.0);
        match &tree.nodes[0] {
            Node::Split { threshold, .. } => assert_eq!(*threshold, 4.5),
            _ => panic!("root must split"),
        }
    }

    #[test]
    fn min_leaf_respected() {
        let x: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, (i * 7 % 5) as f64]).collect();
        let y: Vec<f64> = (0..20).map(|i| ((i * 13) % 7) as f64).collect();
        let w = vec![1.0; 20];
        let grower = Grower {
            x: &x,
            target: SplitTarget::Scalar(&y),
            weights: &w,
            params: GrowParams {
                max_depth: 10,
                min_leaf: 3,
                features_per_split: 2,
            },
            make_leaf: |s: &[usize]| s.len(),
        };
        let tree = grower.grow((0..20).collect(), &mut ChaCha8Rng::seed_from_u64(3));
        assert!(tree.leaves().all(|&n| n >= 3));
        assert_eq!(tree.leaves().sum::<usize>(), 20);
    }
}
