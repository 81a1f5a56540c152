//! Ranked alphabets, finite ordered trees, one-hole contexts, node
//! addressing, and bounded enumeration.
//!
//! Trees are immutable values with structural equality and a total order
//! (hole first, then label, then children lexicographically). The order is
//! what makes enumeration, search results, and reports reproducible.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

/// The reserved hole label of contexts. Not admissible as an alphabet symbol
/// or state name.
pub const HOLE: &str = "x";

/// Default ceiling on how many trees/contexts a bounded enumeration may
/// produce before giving up.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Identifier syntax shared by symbols and states: letters, digits,
/// underscore, apostrophe.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("invalid symbol name {0:?}")]
    BadName(String),
    #[error("symbol name {0:?} is reserved for the context hole")]
    ReservedHole(String),
    #[error("duplicate symbol {0:?}")]
    Duplicate(String),
}

/// Index of a symbol in its alphabet's canonical (alphabetical) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

/// A finite set of symbols, each with a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedAlphabet {
    /// Sorted by name; `SymbolId` is the index into this vector.
    symbols: Vec<(String, usize)>,
    index: HashMap<String, SymbolId>,
}

impl RankedAlphabet {
    pub fn new<S, I>(symbols: I) -> Result<Self, AlphabetError>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, usize)>,
    {
        let mut list: Vec<(String, usize)> = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if name == HOLE {
                return Err(AlphabetError::ReservedHole(name));
            }
            if !is_valid_name(&name) {
                return Err(AlphabetError::BadName(name));
            }
            list.push((name, arity));
        }
        list.sort();
        for pair in list.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(AlphabetError::Duplicate(pair[0].0.clone()));
            }
        }
        let index = list
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.clone(), SymbolId(i as u32)))
            .collect();
        Ok(RankedAlphabet { symbols: list, index })
    }

    pub fn id(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.id(name).map(|id| self.arity_of(id))
    }

    pub fn arity_of(&self, id: SymbolId) -> usize {
        self.symbols[id.0 as usize].1
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.0 as usize].0
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbols in canonical (alphabetical) order.
    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, &str, usize)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, (name, arity))| (SymbolId(i as u32), name.as_str(), *arity))
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|(_, a)| *a).max().unwrap_or(0)
    }

    pub fn has_nullary(&self) -> bool {
        self.symbols.iter().any(|(_, a)| *a == 0)
    }

    /// True iff every node of `t` carries a declared symbol whose arity
    /// equals the node's child count. Total predicate; the hole does not
    /// validate.
    pub fn validates(&self, t: &Tree) -> bool {
        match self.arity(t.label()) {
            Some(k) if k == t.children().len() => t.children().iter().all(|c| self.validates(c)),
            _ => false,
        }
    }
}

/// A ranked ordered tree. May carry the reserved hole label as a leaf, in
/// which case it is the underlying tree of a [`Context`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    label: String,
    children: Vec<Tree>,
}

impl Tree {
    pub fn new(label: impl Into<String>, children: Vec<Tree>) -> Self {
        Tree { label: label.into(), children }
    }

    pub fn leaf(label: impl Into<String>) -> Self {
        Tree::new(label, Vec::new())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn is_hole(&self) -> bool {
        self.label == HOLE
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Tree::node_count).sum::<usize>()
    }

    fn count_holes(&self) -> usize {
        let here = usize::from(self.is_hole());
        here + self.children.iter().map(Tree::count_holes).sum::<usize>()
    }

    /// All node addresses in preorder (root first).
    pub fn nodes(&self) -> Vec<NodeAddress> {
        let mut out = Vec::with_capacity(self.node_count());
        self.collect_nodes(&mut Vec::new(), &mut out);
        out
    }

    fn collect_nodes(&self, prefix: &mut Vec<usize>, out: &mut Vec<NodeAddress>) {
        out.push(NodeAddress(prefix.clone()));
        for (i, child) in self.children.iter().enumerate() {
            prefix.push(i + 1);
            child.collect_nodes(prefix, out);
            prefix.pop();
        }
    }

    pub fn subtree(&self, addr: &NodeAddress) -> Option<&Tree> {
        let mut node = self;
        for &step in &addr.0 {
            node = node.children.get(step.checked_sub(1)?)?;
        }
        Some(node)
    }

    /// A copy of `self` with the subtree at `addr` replaced by `sub`.
    pub fn replace(&self, addr: &NodeAddress, sub: Tree) -> Option<Tree> {
        self.replace_steps(&addr.0, sub)
    }

    fn replace_steps(&self, steps: &[usize], sub: Tree) -> Option<Tree> {
        match steps.split_first() {
            None => Some(sub),
            Some((&step, rest)) => {
                let i = step.checked_sub(1)?;
                if i >= self.children.len() {
                    return None;
                }
                let mut children = self.children.clone();
                children[i] = children[i].replace_steps(rest, sub)?;
                Some(Tree::new(self.label.clone(), children))
            }
        }
    }

    /// Parses the textual syntax: `f(a,b)`, nullary symbols bare,
    /// whitespace insignificant.
    pub fn parse(text: &str) -> Result<Tree, TreeSyntaxError> {
        let mut p = TreeParser { text, pos: 0 };
        let tree = p.parse_tree()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.err("trailing input"));
        }
        Ok(tree)
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        // The hole sorts before every regular label so that the canonical
        // context order starts with the trivial context.
        let rank = |t: &Tree| (!t.is_hole(), t.label.clone());
        rank(self)
            .cmp(&rank(other))
            .then_with(|| self.children.cmp(&other.children))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)?;
        if let Some((first, rest)) = self.children.split_first() {
            write!(f, "({first}")?;
            for child in rest {
                write!(f, ",{child}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("tree syntax error at byte {pos}: {message}")]
pub struct TreeSyntaxError {
    pub pos: usize,
    pub message: String,
}

struct TreeParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> TreeParser<'a> {
    fn err(&self, message: &str) -> TreeSyntaxError {
        TreeSyntaxError { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn parse_tree(&mut self) -> Result<Tree, TreeSyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a symbol name"));
        }
        let label = self.text[start..self.pos].to_string();
        self.skip_ws();
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.parse_tree()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected ',' or ')'")),
                }
            }
        }
        Ok(Tree::new(label, children))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("a context must contain exactly one hole, found none")]
    NoHole,
    #[error("a context must contain exactly one hole, found {0}")]
    MultipleHoles(usize),
    #[error("the hole must be a leaf")]
    HoleNotLeaf,
}

/// A tree with exactly one leaf labeled by the reserved hole symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context(Tree);

impl Context {
    pub fn new(tree: Tree) -> Result<Self, ContextError> {
        if hole_has_children(&tree) {
            return Err(ContextError::HoleNotLeaf);
        }
        match tree.count_holes() {
            0 => Err(ContextError::NoHole),
            1 => Ok(Context(tree)),
            n => Err(ContextError::MultipleHoles(n)),
        }
    }

    /// The trivial context consisting of the hole alone.
    pub fn hole() -> Self {
        Context(Tree::leaf(HOLE))
    }

    pub fn tree(&self) -> &Tree {
        &self.0
    }

    pub fn node_count(&self) -> usize {
        self.0.node_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_hole()
    }

    pub fn hole_address(&self) -> NodeAddress {
        let mut steps = Vec::new();
        let mut node = &self.0;
        while !node.is_hole() {
            let (i, child) = node
                .children
                .iter()
                .enumerate()
                .find(|(_, c)| c.count_holes() == 1)
                .expect("context invariant: exactly one hole");
            steps.push(i + 1);
            node = child;
        }
        NodeAddress(steps)
    }

    /// Replaces the hole with `t`.
    pub fn plug(&self, t: &Tree) -> Tree {
        substitute_hole(&self.0, t)
    }

    /// Replaces the hole with another context; the result again has exactly
    /// one hole.
    pub fn plug_context(&self, inner: &Context) -> Context {
        Context(substitute_hole(&self.0, &inner.0))
    }

    /// Every non-hole node must carry a declared symbol of matching arity.
    pub fn validates(&self, alphabet: &RankedAlphabet) -> bool {
        fn walk(alphabet: &RankedAlphabet, t: &Tree) -> bool {
            if t.is_hole() {
                return true;
            }
            match alphabet.arity(t.label()) {
                Some(k) if k == t.children().len() => {
                    t.children().iter().all(|c| walk(alphabet, c))
                }
                _ => false,
            }
        }
        walk(alphabet, &self.0)
    }

    pub fn parse(text: &str) -> Result<Self, ContextParseError> {
        let tree = Tree::parse(text)?;
        Ok(Context::new(tree)?)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextParseError {
    #[error(transparent)]
    Syntax(#[from] TreeSyntaxError),
    #[error(transparent)]
    Shape(#[from] ContextError),
}

fn hole_has_children(t: &Tree) -> bool {
    (t.is_hole() && !t.children().is_empty())
        || t.children().iter().any(hole_has_children)
}

fn substitute_hole(node: &Tree, filler: &Tree) -> Tree {
    if node.is_hole() {
        filler.clone()
    } else {
        Tree::new(
            node.label().to_string(),
            node.children().iter().map(|c| substitute_hole(c, filler)).collect(),
        )
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Dewey path of 1-based child indices; the empty path is the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeAddress(Vec<usize>);

impl NodeAddress {
    pub fn root() -> Self {
        NodeAddress(Vec::new())
    }

    pub fn from_steps(steps: Vec<usize>) -> Self {
        NodeAddress(steps)
    }

    pub fn child(&self, i: usize) -> Self {
        let mut steps = self.0.clone();
        steps.push(i);
        NodeAddress(steps)
    }

    pub fn steps(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.0.iter().map(|i| i.to_string()).join("."))
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("enumeration exceeded the cap of {cap} items")]
pub struct EnumerationError {
    pub cap: usize,
}

/// All well-formed trees with at most `max_nodes` nodes, in canonical
/// order: by node count, then by the structural tree order within each
/// size class.
pub fn enumerate_trees(
    alphabet: &RankedAlphabet,
    max_nodes: usize,
) -> Result<Vec<Tree>, EnumerationError> {
    enumerate_trees_with_cap(alphabet, max_nodes, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_trees_with_cap(
    alphabet: &RankedAlphabet,
    max_nodes: usize,
    cap: usize,
) -> Result<Vec<Tree>, EnumerationError> {
    let by_size = trees_by_size(alphabet, max_nodes, cap)?;
    Ok(by_size.into_iter().flatten().collect())
}

/// Trees grouped by exact node count, index 0 holding size-1 trees. Each
/// size class is sorted; classes are disjoint, so the flattened sequence is
/// the canonical enumeration.
fn trees_by_size(
    alphabet: &RankedAlphabet,
    max_nodes: usize,
    cap: usize,
) -> Result<Vec<Vec<Tree>>, EnumerationError> {
    let mut by_size: Vec<Vec<Tree>> = Vec::new();
    let mut total = 0usize;
    for size in 1..=max_nodes {
        let mut class: Vec<Tree> = Vec::new();
        for (_, name, arity) in alphabet.symbols() {
            if size == 1 && arity == 0 {
                class.push(Tree::leaf(name));
                continue;
            }
            if arity == 0 || arity > size - 1 {
                continue;
            }
            for split in compositions(size - 1, arity) {
                let pools: Vec<&[Tree]> =
                    split.iter().map(|&s| by_size[s - 1].as_slice()).collect();
                for combo in pools.iter().map(|p| p.iter()).multi_cartesian_product() {
                    class.push(Tree::new(name, combo.into_iter().cloned().collect()));
                }
            }
        }
        class.sort();
        total += class.len();
        if total > cap {
            return Err(EnumerationError { cap });
        }
        by_size.push(class);
    }
    Ok(by_size)
}

/// All contexts with at most `max_nodes` nodes (the hole counts as a node),
/// canonical order, starting with the trivial context.
pub fn enumerate_contexts(
    alphabet: &RankedAlphabet,
    max_nodes: usize,
) -> Result<Vec<Context>, EnumerationError> {
    enumerate_contexts_with_cap(alphabet, max_nodes, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_contexts_with_cap(
    alphabet: &RankedAlphabet,
    max_nodes: usize,
    cap: usize,
) -> Result<Vec<Context>, EnumerationError> {
    if max_nodes == 0 {
        return Ok(Vec::new());
    }
    let trees = trees_by_size(alphabet, max_nodes.saturating_sub(1), cap)?;
    let mut by_size: Vec<Vec<Tree>> = vec![vec![Tree::leaf(HOLE)]];
    let mut total = 1usize;
    for size in 2..=max_nodes {
        let mut class: Vec<Tree> = Vec::new();
        for (_, name, arity) in alphabet.symbols() {
            if arity == 0 || arity > size - 1 {
                continue;
            }
            for split in compositions(size - 1, arity) {
                for hole_pos in 0..arity {
                    let pools: Vec<&[Tree]> = split
                        .iter()
                        .enumerate()
                        .map(|(i, &s)| {
                            if i == hole_pos {
                                by_size[s - 1].as_slice()
                            } else {
                                trees[s - 1].as_slice()
                            }
                        })
                        .collect();
                    for combo in pools.iter().map(|p| p.iter()).multi_cartesian_product() {
                        class.push(Tree::new(name, combo.into_iter().cloned().collect()));
                    }
                }
            }
        }
        class.sort();
        total += class.len();
        if total > cap {
            return Err(EnumerationError { cap });
        }
        by_size.push(class);
    }
    Ok(by_size.into_iter().flatten().map(Context).collect())
}

/// Ordered splits of `total` into exactly `parts` positive summands,
/// lexicographically.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            acc.push(total);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for first in 1..=total.saturating_sub(parts - 1) {
            acc.push(first);
            go(total - first, parts - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && total >= parts {
        go(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(pairs: &[(&str, usize)]) -> RankedAlphabet {
        RankedAlphabet::new(pairs.iter().map(|&(n, a)| (n, a))).unwrap()
    }

    fn t(text: &str) -> Tree {
        Tree::parse(text).unwrap()
    }

    fn ctx(text: &str) -> Context {
        Context::parse(text).unwrap()
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert_eq!(
            RankedAlphabet::new([("x", 0usize)]),
            Err(AlphabetError::ReservedHole("x".into()))
        );
        assert_eq!(
            RankedAlphabet::new([("f f", 2usize)]),
            Err(AlphabetError::BadName("f f".into()))
        );
        assert_eq!(
            RankedAlphabet::new([("", 0usize)]),
            Err(AlphabetError::BadName("".into()))
        );
        assert_eq!(
            RankedAlphabet::new([("a", 0usize), ("a", 1usize)]),
            Err(AlphabetError::Duplicate("a".into()))
        );
    }

    #[test]
    fn validate_tree_checks_arity_per_node() {
        let fa = alpha(&[("f", 2), ("a", 0)]);
        assert!(fa.validates(&t("f(a,a)")));
        assert!(!fa.validates(&t("f(a)")));
        let gfab = alpha(&[("g", 1), ("f", 2), ("a", 0), ("b", 0)]);
        assert!(gfab.validates(&t("g(f(a,b))")));
        assert!(!gfab.validates(&t("g(f(a,c))")));
    }

    #[test]
    fn nodes_are_preorder_dewey_paths() {
        let addr = |steps: &[usize]| NodeAddress::from_steps(steps.to_vec());
        assert_eq!(t("a").nodes(), vec![addr(&[])]);
        assert_eq!(t("f(a,b)").nodes(), vec![addr(&[]), addr(&[1]), addr(&[2])]);
        assert_eq!(
            t("g(f(a,b))").nodes(),
            vec![addr(&[]), addr(&[1]), addr(&[1, 1]), addr(&[1, 2])]
        );
        assert_eq!(addr(&[1, 2]).to_string(), "1.2");
        assert_eq!(NodeAddress::root().to_string(), "ε");
    }

    #[test]
    fn plug_replaces_the_hole() {
        assert_eq!(Context::hole().plug(&t("f(a,b)")), t("f(a,b)"));
        assert_eq!(ctx("g(x)").plug(&t("f(a,b)")), t("g(f(a,b))"));
        assert_eq!(ctx("g(g(x))").plug(&t("f(b,a)")), t("g(g(f(b,a)))"));
    }

    #[test]
    fn plug_context_composes() {
        assert_eq!(Context::hole().plug_context(&ctx("g(x)")), ctx("g(x)"));
        assert_eq!(ctx("g(x)").plug_context(&ctx("g(x)")), ctx("g(g(x))"));
        assert_eq!(ctx("g(x)").plug_context(&ctx("f(x,a)")), ctx("g(f(x,a))"));
    }

    #[test]
    fn context_shape_is_enforced() {
        assert_eq!(Context::new(t("f(a,b)")), Err(ContextError::NoHole));
        assert_eq!(Context::new(t("f(x,x)")), Err(ContextError::MultipleHoles(2)));
        assert_eq!(Context::new(t("x(a)")), Err(ContextError::HoleNotLeaf));
        assert_eq!(ctx("f(a,x)").hole_address(), NodeAddress::from_steps(vec![2]));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["a", "f(a,b)", "g(g(f(b,a)))", "f(g(a),f(a,b))"] {
            assert_eq!(t(text).to_string(), text);
        }
        assert_eq!(Tree::parse(" f ( a , b ) ").unwrap(), t("f(a,b)"));
        assert!(Tree::parse("f(a,b").is_err());
        assert!(Tree::parse("f()").is_err());
        assert!(Tree::parse("f(a,b))").is_err());
        assert!(Tree::parse("").is_err());
    }

    #[test]
    fn enumerate_trees_matches_hand_enumeration() {
        let only_a = alpha(&[("a", 0)]);
        assert_eq!(enumerate_trees(&only_a, 3).unwrap(), vec![t("a")]);

        let fa = alpha(&[("f", 2), ("a", 0)]);
        assert_eq!(enumerate_trees(&fa, 3).unwrap(), vec![t("a"), t("f(a,a)")]);
        assert_eq!(
            enumerate_trees(&fa, 5).unwrap(),
            vec![t("a"), t("f(a,a)"), t("f(a,f(a,a))"), t("f(f(a,a),a)")]
        );
    }

    #[test]
    fn enumerate_trees_without_nullary_is_empty() {
        let f_only = alpha(&[("f", 2)]);
        assert_eq!(enumerate_trees(&f_only, 6).unwrap(), Vec::<Tree>::new());
    }

    #[test]
    fn enumerate_respects_the_cap() {
        let fa = alpha(&[("f", 2), ("a", 0), ("b", 0)]);
        assert_eq!(
            enumerate_trees_with_cap(&fa, 9, 10),
            Err(EnumerationError { cap: 10 })
        );
    }

    #[test]
    fn enumerate_contexts_matches_hand_enumeration() {
        let only_a = alpha(&[("a", 0)]);
        assert_eq!(enumerate_contexts(&only_a, 1).unwrap(), vec![Context::hole()]);

        let ga = alpha(&[("g", 1), ("a", 0)]);
        assert_eq!(
            enumerate_contexts(&ga, 2).unwrap(),
            vec![Context::hole(), ctx("g(x)")]
        );

        let fa = alpha(&[("f", 2), ("a", 0)]);
        assert_eq!(
            enumerate_contexts(&fa, 3).unwrap(),
            vec![Context::hole(), ctx("f(x,a)"), ctx("f(a,x)")]
        );
    }

    #[test]
    fn canonical_order_puts_holes_first() {
        assert!(Tree::leaf(HOLE) < t("a"));
        assert!(ctx("f(x,a)") < ctx("f(a,x)"));
        assert!(t("f(a,a)") < t("f(a,b)"));
        assert!(t("f(a,b)") < t("f(b,a)"));
        assert!(t("a") < t("f(a,a)"));
    }

    #[test]
    fn subtree_and_replace_agree() {
        let base = t("g(f(a,b))");
        let at = NodeAddress::from_steps(vec![1, 2]);
        assert_eq!(base.subtree(&at), Some(&t("b")));
        assert_eq!(base.replace(&at, t("a")).unwrap(), t("g(f(a,a))"));
        assert_eq!(base.subtree(&NodeAddress::from_steps(vec![3])), None);
    }
}
