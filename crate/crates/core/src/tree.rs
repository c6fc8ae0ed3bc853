//! Plane trees stored as preorder balanced-parenthesis words.
//!
//! A tree with `n` edges is a word of `2n` steps: `true` descends along a new
//! edge into the next child, `false` climbs back. The subtree of any vertex is
//! a contiguous slice of the word, so traversal, subtree extraction and
//! decomposition never allocate per node.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered rooted tree without vertex labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PlaneTree {
    steps: Vec<bool>,
}

/// Borrowed view of a plane tree (or of a subtree inside a larger word).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeView<'a> {
    steps: &'a [bool],
}

/// `(n, d0, d1, r)`: edges, leaves, internal nodes and root degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeStats {
    pub edges: usize,
    pub leaves: usize,
    pub internal: usize,
    pub root_degree: usize,
}

/// Whether the root of a subtree may be counted as a leaf or internal node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootConvention {
    /// The root is never a leaf or internal node (whole-tree definitions).
    Standard,
    /// The subtree root counts as a leaf when it has no children and as an
    /// internal node when it has exactly one.
    Extended,
}

/// Statistics of the subtree hanging below one non-root vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubtreeRecord {
    /// Preorder index of the vertex; the root is 0, so records use `1..=n`.
    pub vertex: usize,
    pub depth: usize,
    pub standard: TreeStats,
    pub extended: TreeStats,
}

impl SubtreeRecord {
    pub fn stats(&self, convention: RootConvention) -> TreeStats {
        match convention {
            RootConvention::Standard => self.standard,
            RootConvention::Extended => self.extended,
        }
    }

    /// Vertex count of the subtree.
    pub fn vertices(&self) -> usize {
        self.standard.edges + 1
    }
}

impl PlaneTree {
    pub fn single_vertex() -> Self {
        PlaneTree { steps: Vec::new() }
    }

    /// The path with `n` edges hanging from the root.
    pub fn path(n: usize) -> Self {
        let mut steps = vec![true; n];
        steps.resize(2 * n, false);
        PlaneTree { steps }
    }

    /// The root with `n` leaf children.
    pub fn star(n: usize) -> Self {
        let mut steps = Vec::with_capacity(2 * n);
        for _ in 0..n {
            steps.push(true);
            steps.push(false);
        }
        PlaneTree { steps }
    }

    /// Validates a step word.
    pub fn from_steps(steps: Vec<bool>) -> Result<Self> {
        let mut depth = 0usize;
        for (i, &s) in steps.iter().enumerate() {
            if s {
                depth += 1;
            } else if depth == 0 {
                return Err(Error::Parens {
                    index: i,
                    reason: "closing parenthesis without a matching opening one",
                });
            } else {
                depth -= 1;
            }
        }
        if depth != 0 {
            return Err(Error::Parens { index: steps.len(), reason: "unclosed parenthesis" });
        }
        Ok(PlaneTree { steps })
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<bool>) -> Self {
        debug_assert!(PlaneTree::from_steps(steps.clone()).is_ok());
        PlaneTree { steps }
    }

    /// Parses the balanced-parenthesis encoding; the empty string is the single vertex.
    pub fn from_parens(s: &str) -> Result<Self> {
        let mut steps = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '(' => steps.push(true),
                ')' => steps.push(false),
                _ => return Err(Error::Parens { index: i, reason: "expected '(' or ')'" }),
            }
        }
        PlaneTree::from_steps(steps)
    }

    pub fn to_parens(&self) -> String {
        self.view().to_parens()
    }

    pub fn steps(&self) -> &[bool] {
        &self.steps
    }

    pub fn view(&self) -> TreeView<'_> {
        TreeView { steps: &self.steps }
    }

    pub fn edges(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn vertices(&self) -> usize {
        self.edges() + 1
    }

    pub fn is_single_vertex(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn stats(&self) -> TreeStats {
        self.view().stats()
    }
}

impl fmt::Debug for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneTree({:?})", self.to_parens())
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_parens())
    }
}

impl<'a> TreeView<'a> {
    /// Wraps a word that is already known to be balanced.
    pub(crate) fn new_unchecked(steps: &'a [bool]) -> Self {
        TreeView { steps }
    }

    pub fn steps(&self) -> &'a [bool] {
        self.steps
    }

    pub fn edges(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn is_single_vertex(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_owned_tree(&self) -> PlaneTree {
        PlaneTree { steps: self.steps.to_vec() }
    }

    pub fn to_parens(&self) -> String {
        self.steps.iter().map(|&s| if s { '(' } else { ')' }).collect()
    }

    pub fn root_degree(&self) -> usize {
        let mut depth = 0usize;
        let mut degree = 0;
        for &s in self.steps {
            if s {
                if depth == 0 {
                    degree += 1;
                }
                depth += 1;
            } else {
                depth -= 1;
            }
        }
        degree
    }

    /// Number of leading opening steps: the edge length of the leftmost root-to-leaf path.
    pub fn leftmost_path(&self) -> usize {
        self.steps.iter().take_while(|&&s| s).count()
    }

    /// Leaves are exactly the `()` factors of the word.
    pub fn leaves(&self) -> usize {
        self.steps.windows(2).filter(|w| w[0] && !w[1]).count()
    }

    pub fn stats(&self) -> TreeStats {
        SubtreeScan::new().scan(*self, |_| {})
    }

    /// Subtrees below the root's children, left to right.
    pub fn children(&self) -> Children<'a> {
        Children { steps: self.steps, pos: 0 }
    }

    /// Splits `T = T1 ⋉ T2` into `(T1, T2)`; `T2` hangs below the leftmost root edge.
    pub fn unjoin(&self) -> Result<(TreeView<'a>, TreeView<'a>)> {
        if self.steps.is_empty() {
            return Err(Error::SingleVertex);
        }
        let close = matching_close(self.steps, 0);
        Ok((TreeView { steps: &self.steps[close + 1..] }, TreeView { steps: &self.steps[1..close] }))
    }
}

/// Iterator over the child subtrees of a root.
pub struct Children<'a> {
    steps: &'a [bool],
    pos: usize,
}

impl<'a> Iterator for Children<'a> {
    type Item = TreeView<'a>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos >= self.steps.len() {
            return None;
        }
        let close = matching_close(self.steps, self.pos);
        let child = TreeView { steps: &self.steps[self.pos + 1..close] };
        self.pos = close + 1;
        Some(child)
    }
}

fn matching_close(steps: &[bool], open: usize) -> usize {
    debug_assert!(steps[open]);
    let mut depth = 0usize;
    for (i, &s) in steps.iter().enumerate().skip(open) {
        if s {
            depth += 1;
        } else {
            depth -= 1;
            if depth == 0 {
                return i;
            }
        }
    }
    unreachable!("unbalanced word inside a tree view")
}

/// `T1 ⋉ T2`: a new leftmost root edge of `t1` with `t2` attached below it.
pub fn join(t1: &PlaneTree, t2: &PlaneTree) -> PlaneTree {
    let mut steps = Vec::with_capacity(t1.steps.len() + t2.steps.len() + 2);
    steps.push(true);
    steps.extend_from_slice(&t2.steps);
    steps.push(false);
    steps.extend_from_slice(&t1.steps);
    PlaneTree { steps }
}

/// Inverse of [`join`]; rejects the single-vertex tree.
pub fn unjoin(t: &PlaneTree) -> Result<(PlaneTree, PlaneTree)> {
    let (t1, t2) = t.view().unjoin()?;
    Ok((t1.to_owned_tree(), t2.to_owned_tree()))
}

pub fn stats(t: &PlaneTree) -> TreeStats {
    t.stats()
}

/// One record per non-root vertex, in post-order.
pub fn subtree_records(t: &PlaneTree) -> Vec<SubtreeRecord> {
    let mut out = Vec::with_capacity(t.edges());
    SubtreeScan::new().scan(t.view(), |rec| out.push(*rec));
    out
}

#[derive(Clone, Copy, Default)]
struct Frame {
    vertex: usize,
    edges_at_open: usize,
    leaves: usize,
    internal: usize,
    children: usize,
}

/// Reusable post-order scanner. Keeps its stack between calls so that
/// scanning many trees does not allocate.
#[derive(Default)]
pub struct SubtreeScan {
    stack: Vec<Frame>,
}

impl SubtreeScan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Visits every non-root vertex in post-order and returns the whole-tree stats.
    pub fn scan<F: FnMut(&SubtreeRecord)>(&mut self, t: TreeView<'_>, mut visit: F) -> TreeStats {
        self.stack.clear();
        self.stack.push(Frame::default());
        let mut edges_seen = 0usize;
        let mut next_vertex = 1usize;
        for &s in t.steps {
            if s {
                edges_seen += 1;
                self.stack.push(Frame { vertex: next_vertex, edges_at_open: edges_seen, ..Frame::default() });
                next_vertex += 1;
            } else {
                let f = self.stack.pop().expect("balanced word");
                let standard = TreeStats {
                    edges: edges_seen - f.edges_at_open,
                    leaves: f.leaves,
                    internal: f.internal,
                    root_degree: f.children,
                };
                let is_leaf = usize::from(f.children == 0);
                let is_internal = usize::from(f.children == 1);
                let extended = TreeStats {
                    leaves: f.leaves + is_leaf,
                    internal: f.internal + is_internal,
                    ..standard
                };
                visit(&SubtreeRecord { vertex: f.vertex, depth: self.stack.len(), standard, extended });
                let parent = self.stack.last_mut().expect("root frame");
                parent.children += 1;
                parent.leaves += extended.leaves;
                parent.internal += extended.internal;
            }
        }
        let root = self.stack[0];
        TreeStats { edges: edges_seen, leaves: root.leaves, internal: root.internal, root_degree: root.children }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_trees;

    fn t(s: &str) -> PlaneTree {
        PlaneTree::from_parens(s).unwrap()
    }

    #[test]
    fn smallest_join() {
        let one = join(&PlaneTree::single_vertex(), &PlaneTree::single_vertex());
        assert_eq!(one.to_parens(), "()");
        assert_eq!(unjoin(&one).unwrap(), (PlaneTree::single_vertex(), PlaneTree::single_vertex()));
    }

    #[test]
    fn unjoin_path() {
        let (t1, t2) = unjoin(&PlaneTree::path(3)).unwrap();
        assert!(t1.is_single_vertex());
        assert_eq!(t2, PlaneTree::path(2));
        assert_eq!(unjoin(&PlaneTree::single_vertex()), Err(Error::SingleVertex));
    }

    #[test]
    fn join_unjoin_exhaustive() {
        let small: Vec<PlaneTree> = (0..=4).flat_map(enumerate_trees).collect();
        for a in &small {
            for b in &small {
                let j = join(a, b);
                assert_eq!(j.edges(), a.edges() + b.edges() + 1);
                assert_eq!(unjoin(&j).unwrap(), (a.clone(), b.clone()));
            }
        }
        for n in 1..=6 {
            for tree in enumerate_trees(n) {
                let (a, b) = unjoin(&tree).unwrap();
                assert_eq!(join(&a, &b), tree);
            }
        }
    }

    #[test]
    fn stats_examples() {
        let s = |edges, leaves, internal, root_degree| TreeStats { edges, leaves, internal, root_degree };
        assert_eq!(stats(&PlaneTree::path(3)), s(3, 1, 2, 1));
        assert_eq!(stats(&PlaneTree::star(3)), s(3, 3, 0, 3));
        assert_eq!(stats(&PlaneTree::single_vertex()), s(0, 0, 0, 0));
        assert_eq!(stats(&t("(()())()")), s(4, 3, 0, 2));
    }

    #[test]
    fn vertex_classes_partition_non_root_vertices() {
        for n in 0..=6 {
            for tree in enumerate_trees(n) {
                let st = tree.stats();
                let branching = subtree_records(&tree).iter().filter(|r| r.standard.root_degree >= 2).count();
                assert_eq!(st.leaves + st.internal + branching, n);
                assert!(st.leaves <= n && st.root_degree <= n);
                if n >= 1 {
                    assert!(st.internal < n);
                }
            }
        }
    }

    #[test]
    fn record_examples() {
        let recs = subtree_records(&PlaneTree::path(1));
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].standard, TreeStats::default());
        assert_eq!(recs[0].extended.leaves, 1);

        let recs = subtree_records(&PlaneTree::path(2));
        let middle = recs.iter().find(|r| r.vertex == 1).unwrap();
        assert_eq!(middle.standard, TreeStats { edges: 1, leaves: 1, internal: 0, root_degree: 1 });
        assert_eq!(middle.extended.internal, 1);
        assert_eq!(middle.depth, 1);
    }

    #[test]
    fn records_sum_to_path_length_and_obey_conventions() {
        for n in 0..=6 {
            for tree in enumerate_trees(n) {
                let recs = subtree_records(&tree);
                assert_eq!(recs.len(), n);
                let via_records: usize = recs.iter().map(|r| r.standard.edges + 1).sum();
                let via_depth: usize = recs.iter().map(|r| r.depth).sum();
                assert_eq!(via_records, via_depth);
                for r in &recs {
                    let zero = usize::from(r.standard.root_degree == 0);
                    let one = usize::from(r.standard.root_degree == 1);
                    assert_eq!(r.extended.leaves, r.standard.leaves + zero);
                    assert_eq!(r.extended.internal, r.standard.internal + one);
                    assert_eq!(r.stats(RootConvention::Standard), r.standard);
                }
            }
        }
    }

    #[test]
    fn parens_errors_name_the_index() {
        assert_eq!(PlaneTree::from_parens("").unwrap(), PlaneTree::single_vertex());
        match PlaneTree::from_parens("())(") {
            Err(Error::Parens { index, .. }) => assert_eq!(index, 2),
            other => panic!("{other:?}"),
        }
        match PlaneTree::from_parens("(()") {
            Err(Error::Parens { index, .. }) => assert_eq!(index, 3),
            other => panic!("{other:?}"),
        }
        match PlaneTree::from_parens("(x)") {
            Err(Error::Parens { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn children_in_order() {
        let tree = t("(())()((()))");
        let kids: Vec<String> = tree.view().children().map(|c| c.to_parens()).collect();
        assert_eq!(kids, vec!["()", "", "(())"]);
        assert_eq!(tree.view().root_degree(), 3);
        assert_eq!(tree.view().leftmost_path(), 2);
    }
}
