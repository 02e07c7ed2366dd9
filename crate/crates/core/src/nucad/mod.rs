//! The NuCAD tree: a root cell for `R^n` whose non-leaf cells are split
//! into a refined child around their sample plus siblings, until the
//! formula is truth-invariant on every leaf.

mod split;

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::formula::{FactorSet, Formula};
use crate::label::{Branch, Label};
use crate::onecell::{CellError, Membership, OpenCell};
use crate::polynomial::Rational;

pub use split::{perturb_sample, split, SplitError, SplitPolicy};

/// A cell of the tree with the cached truth value of the formula at its
/// sample when it is a leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub cell: OpenCell,
    pub truth: Option<bool>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.truth.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error("tree has no root cell")]
    MissingRoot,
    #[error("cell {0} has no parent in the tree")]
    Orphan(Label),
    #[error("non-leaf cell {0} has no X child")]
    MissingXChild(Label),
    #[error("cell {parent} needs child {child}, which is missing")]
    MissingChild { parent: Label, child: Label },
    #[error("cell {0} has dimension different from the formula")]
    Dimension(Label),
}

/// A built (or loaded) tree. Cells are keyed by label; iteration order is
/// a preorder traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuCadTree {
    formula: Formula,
    nodes: BTreeMap<Label, TreeNode>,
}

impl NuCadTree {
    /// Checks that every cell but the root has a parent, that every
    /// non-leaf has an X child, and that dimensions match the formula.
    pub fn from_nodes(
        formula: Formula,
        nodes: BTreeMap<Label, TreeNode>,
    ) -> Result<NuCadTree, TreeError> {
        if !nodes.contains_key(&Label::root()) {
            return Err(TreeError::MissingRoot);
        }
        for (label, node) in &nodes {
            if node.cell.dimension() != formula.dimension() {
                return Err(TreeError::Dimension(label.clone()));
            }
            if let Some(parent) = label.parent() {
                if !nodes.contains_key(&parent) {
                    return Err(TreeError::Orphan(label.clone()));
                }
            }
            let x = label.child(formula.dimension(), Branch::X);
            if !node.is_leaf() && !nodes.contains_key(&x) {
                return Err(TreeError::MissingXChild(label.clone()));
            }
        }
        Ok(NuCadTree { formula, nodes })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn dimension(&self) -> usize {
        self.formula.dimension()
    }

    pub fn nodes(&self) -> &BTreeMap<Label, TreeNode> {
        &self.nodes
    }

    pub fn into_nodes(self) -> BTreeMap<Label, TreeNode> {
        self.nodes
    }

    pub fn get(&self, label: &Label) -> Option<&TreeNode> {
        self.nodes.get(label)
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[&Label::root()]
    }

    pub fn leaves(&self) -> impl Iterator<Item = (&Label, &TreeNode)> {
        self.nodes.iter().filter(|(_, n)| n.is_leaf())
    }

    /// Children of `label` in label order.
    pub fn children<'a>(&'a self, label: &'a Label) -> impl Iterator<Item = (&'a Label, &'a TreeNode)> {
        self.nodes
            .range(label.clone()..)
            .skip(1)
            .take_while(move |(l, _)| l.parts().starts_with(label.parts()))
            .filter(move |(l, _)| l.depth() == label.depth() + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error("cell cap of {cap} exceeded")]
    CellCap { cap: usize },
}

/// Incremental construction shared by the sequential and parallel
/// drivers. Pending cells are handed out in FIFO order and their children
/// absorbed; since a split depends only on the cell and the formula, the
/// finished tree does not depend on batch sizes or on the order children
/// are absorbed in.
#[derive(Debug, Clone)]
pub struct Builder {
    formula: Formula,
    policy: SplitPolicy,
    nodes: BTreeMap<Label, TreeNode>,
    queue: VecDeque<Label>,
}

impl Builder {
    /// Starts from the `R^n` cell sampled at the origin.
    pub fn new(formula: Formula, policy: SplitPolicy) -> Builder {
        let root = OpenCell::universe(alloc::vec![Rational::zero(); formula.dimension()]);
        let mut nodes = BTreeMap::new();
        nodes.insert(
            Label::root(),
            TreeNode {
                cell: root,
                truth: None,
            },
        );
        Builder {
            formula,
            policy,
            nodes,
            queue: VecDeque::from([Label::root()]),
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn policy(&self) -> &SplitPolicy {
        &self.policy
    }

    pub fn is_done(&self) -> bool {
        self.queue.is_empty()
    }

    /// Up to `max` pending cells. Cells whose label ends in `X` were made
    /// truth-invariant when they were created and become leaves here
    /// without being handed out.
    pub fn take_batch(&mut self, max: usize) -> Vec<OpenCell> {
        let mut out = Vec::new();
        while out.len() < max {
            let Some(label) = self.queue.pop_front() else {
                break;
            };
            if label.ends_in_x() {
                self.make_leaf(&label);
            } else {
                out.push(self.nodes[&label].cell.clone());
            }
        }
        out
    }

    fn make_leaf(&mut self, label: &Label) {
        let node = self.nodes.get_mut(label).expect("queued label exists");
        node.truth = Some(self.formula.evaluate(node.cell.sample()));
    }

    /// Records the result of splitting the cell `label`.
    pub fn absorb(&mut self, label: &Label, children: Vec<OpenCell>) -> Result<(), BuildError> {
        if children.is_empty() {
            self.make_leaf(label);
            return Ok(());
        }
        if self.nodes.len() + children.len() > self.policy.cell_cap {
            return Err(BuildError::CellCap {
                cap: self.policy.cell_cap,
            });
        }
        for c in children {
            let l = c.label().clone();
            self.queue.push_back(l.clone());
            self.nodes.insert(l, TreeNode { cell: c, truth: None });
        }
        Ok(())
    }

    pub fn finish(self) -> NuCadTree {
        debug_assert!(self.queue.is_empty(), "finish with pending cells");
        NuCadTree {
            formula: self.formula,
            nodes: self.nodes,
        }
    }
}

/// Sequential FIFO construction.
pub fn build(formula: &Formula, policy: &SplitPolicy) -> Result<NuCadTree, BuildError> {
    let mut b = Builder::new(formula.clone(), *policy);
    while !b.is_done() {
        for cell in b.take_batch(usize::MAX) {
            let children = split(&cell, formula, policy)?;
            b.absorb(cell.label(), children)?;
        }
    }
    Ok(b.finish())
}

/// Where a point ends up in a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Leaf { label: Label, truth: bool },
    /// The point lies on a bounding section of the X child of `parent`
    /// at `level`.
    Boundary { parent: Label, level: usize },
}

/// Descends from the root, at each non-leaf choosing the X child if it
/// contains the point and otherwise the sibling for the first level at
/// which the point leaves it.
pub fn locate(tree: &NuCadTree, point: &[Rational]) -> Result<Location, TreeError> {
    let n = tree.dimension();
    if point.len() != n {
        return Err(CellError::Arity {
            expected: n,
            got: point.len(),
        }
        .into());
    }
    let mut label = Label::root();
    loop {
        let node = &tree.nodes[&label];
        if let Some(truth) = node.truth {
            return Ok(Location::Leaf { label, truth });
        }
        let x = label.child(n, Branch::X);
        let Some(xnode) = tree.nodes.get(&x) else {
            return Err(TreeError::MissingXChild(label));
        };
        let next = match xnode.cell.contains(point)? {
            Membership::Inside => x,
            Membership::Boundary { level } => {
                return Ok(Location::Boundary {
                    parent: label,
                    level,
                })
            }
            Membership::Outside { level, side } => label.child(level, Branch::from(side)),
        };
        if !tree.nodes.contains_key(&next) {
            return Err(TreeError::MissingChild {
                parent: label,
                child: next,
            });
        }
        label = next;
    }
}

/// Summary counts of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TreeStats {
    pub cells: usize,
    pub leaves: usize,
    pub x_cells: usize,
    /// Distinct polynomials over all `P` sets.
    pub factors: usize,
    pub depth: usize,
}

pub fn stats(tree: &NuCadTree) -> TreeStats {
    let mut factors = FactorSet::new();
    let mut s = TreeStats::default();
    for (label, node) in &tree.nodes {
        s.cells += 1;
        s.leaves += usize::from(node.is_leaf());
        s.x_cells += usize::from(label.ends_in_x());
        s.depth = s.depth.max(label.depth());
        for p in node.cell.p() {
            factors.insert(p.clone());
        }
    }
    s.factors = factors.len();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::formula::tests::example;
    use crate::onecell::Bound;
    use crate::polynomial::test_util::*;
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn leaf_labels(t: &NuCadTree) -> Vec<String> {
        t.leaves().map(|(l, _)| l.to_string()).collect()
    }

    #[test]
    fn example_tree() {
        let t = build(&example(), &SplitPolicy::default()).unwrap();
        let s = stats(&t);
        assert_eq!(s.leaves, 7);
        assert_eq!(s.factors, 5);
        let x = &t.get(&"2X".parse().unwrap()).unwrap().cell;
        assert_eq!(x.level(2).upper, Bound::Root { poly: f1(), index: 1 });
        assert_eq!(
            locate(&t, &[q(0, 1), q(0, 1)]).unwrap(),
            Location::Leaf {
                label: "2X".parse().unwrap(),
                truth: false
            }
        );
        match locate(&t, &[q(0, 1), q(1, 16)]).unwrap() {
            Location::Boundary { level, .. } => assert_eq!(level, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_and_univariate() {
        let t = build(&parse_formula("vars x; 0 < 1").unwrap(), &SplitPolicy::default()).unwrap();
        assert_eq!(
            stats(&t),
            TreeStats {
                cells: 1,
                leaves: 1,
                x_cells: 0,
                factors: 0,
                depth: 0
            }
        );
        let t = build(&parse_formula("vars x; x > 0").unwrap(), &SplitPolicy::default()).unwrap();
        assert_eq!(leaf_labels(&t), vec!["1X", "1U1X"]);
        assert_eq!(
            locate(&t, &[q(5, 1)]).unwrap(),
            Location::Leaf {
                label: "1U1X".parse().unwrap(),
                truth: true
            }
        );
    }

    #[test]
    fn children_in_label_order() {
        let t = build(&example(), &SplitPolicy::default()).unwrap();
        let root = Label::root();
        let kids: Vec<_> = t.children(&root).map(|(l, _)| l.to_string()).collect();
        assert_eq!(kids, vec!["2X", "2U"]);
    }

    #[test]
    fn cell_cap_aborts() {
        let policy = SplitPolicy {
            cell_cap: 3,
            ..SplitPolicy::default()
        };
        assert_eq!(
            build(&example(), &policy).unwrap_err(),
            BuildError::CellCap { cap: 3 }
        );
    }

    #[test]
    fn batches_do_not_change_the_tree() {
        let f = example();
        let policy = SplitPolicy::default();
        let mut b = Builder::new(f.clone(), policy);
        while !b.is_done() {
            let mut batch = b.take_batch(2);
            batch.reverse();
            for cell in batch {
                let kids = split(&cell, &f, &policy).unwrap();
                b.absorb(cell.label(), kids).unwrap();
            }
        }
        assert_eq!(b.finish(), build(&f, &policy).unwrap());
    }
}
