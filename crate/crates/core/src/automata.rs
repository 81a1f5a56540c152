//! Deterministic bottom-up and top-down tree automata.
//!
//! Both kinds are immutable after construction: a builder assembles states
//! and transitions, validates them, and freezes the result. Bottom-up
//! automata may carry an implicit trap state: the trap is never mentioned by
//! an explicit transition, lookups of missing keys fall through to it, and
//! the size measure excludes it.

use std::borrow::Cow;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;

use thiserror::Error;

use crate::trees::{
    is_valid_name, Context, NodeAddress, RankedAlphabet, SymbolId, Tree, HOLE,
};

/// Index of a state in its automaton's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

/// An explicit transition `symbol(args...) -> target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub symbol: SymbolId,
    pub args: Vec<StateId>,
    pub target: StateId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("invalid state name {0:?}")]
    BadStateName(String),
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("symbol {symbol:?} has arity {expected}, got {got} arguments")]
    ArityMismatch { symbol: String, expected: usize, got: usize },
    #[error("duplicate transition for {key} (the automaton must be deterministic)")]
    DuplicateTransition { key: String },
    #[error("transition arity {got} does not match symbol {symbol:?} of arity {expected}")]
    EntryArity { symbol: String, expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("tree node {label:?} is not a declared symbol of matching arity")]
    InvalidTree { label: String },
    #[error("automaton is incomplete: no transition for {key} and no trap state")]
    Incomplete { key: String },
    #[error("state {0:?} is not declared")]
    UnknownState(String),
}

/// A deterministic bottom-up tree automaton.
#[derive(Debug, Clone)]
pub struct Dba {
    alphabet: RankedAlphabet,
    state_names: Vec<String>,
    state_index: HashMap<String, StateId>,
    /// Canonical order: by symbol (alphabetical), then argument tuple.
    transitions: Vec<Transition>,
    /// Per-symbol key lookup over the explicit transitions.
    lookup: Vec<HashMap<Vec<StateId>, StateId>>,
    finals: BTreeSet<StateId>,
    trap: Option<StateId>,
}

impl PartialEq for Dba {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.state_names == other.state_names
            && self.transitions == other.transitions
            && self.finals == other.finals
            && self.trap == other.trap
    }
}

impl Eq for Dba {}

impl Dba {
    pub fn builder(alphabet: RankedAlphabet) -> DbaBuilder {
        DbaBuilder {
            alphabet,
            state_names: Vec::new(),
            state_index: HashMap::new(),
            finals: BTreeSet::new(),
            transitions: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    /// Number of states, trap included when present.
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_names.len() as u32).map(StateId)
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.state_names[id.0 as usize]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, id: StateId) -> bool {
        self.finals.contains(&id)
    }

    pub fn trap(&self) -> Option<StateId> {
        self.trap
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Explicit transition lookup; `None` for keys that fall to the trap (or
    /// are missing).
    pub fn lookup(&self, symbol: SymbolId, args: &[StateId]) -> Option<StateId> {
        self.lookup[symbol.0 as usize].get(args).copied()
    }

    /// Lookup under the implicit-trap convention: a missing key yields the
    /// trap when one is enabled, and a key mentioning the trap is absorbed.
    pub fn lookup_total(&self, symbol: SymbolId, args: &[StateId]) -> Option<StateId> {
        if let Some(trap) = self.trap {
            if args.contains(&trap) {
                return Some(trap);
            }
        }
        self.lookup(symbol, args).or(self.trap)
    }

    fn key_display(&self, symbol: SymbolId, args: &[StateId]) -> String {
        let name = self.alphabet.name(symbol);
        if args.is_empty() {
            name.to_string()
        } else {
            let args: Vec<&str> = args.iter().map(|&q| self.state_name(q)).collect();
            format!("{}({})", name, args.join(","))
        }
    }

    /// The unique state reached by evaluating `t` bottom-up.
    pub fn eval_tree(&self, t: &Tree) -> Result<StateId, EvalError> {
        let symbol = self
            .alphabet
            .id(t.label())
            .filter(|&s| self.alphabet.arity_of(s) == t.children().len())
            .ok_or_else(|| EvalError::InvalidTree { label: t.label().to_string() })?;
        let mut args = Vec::with_capacity(t.children().len());
        for child in t.children() {
            args.push(self.eval_tree(child)?);
        }
        self.lookup_total(symbol, &args)
            .ok_or_else(|| EvalError::Incomplete { key: self.key_display(symbol, &args) })
    }

    /// Evaluates a context bottom-up with the hole already carrying state
    /// `q`.
    pub fn eval_context(&self, q: StateId, c: &Context) -> Result<StateId, EvalError> {
        self.eval_context_node(q, c.tree())
    }

    fn eval_context_node(&self, q: StateId, node: &Tree) -> Result<StateId, EvalError> {
        if node.is_hole() {
            return Ok(q);
        }
        let symbol = self
            .alphabet
            .id(node.label())
            .filter(|&s| self.alphabet.arity_of(s) == node.children().len())
            .ok_or_else(|| EvalError::InvalidTree { label: node.label().to_string() })?;
        let mut args = Vec::with_capacity(node.children().len());
        for child in node.children() {
            args.push(self.eval_context_node(q, child)?);
        }
        self.lookup_total(symbol, &args)
            .ok_or_else(|| EvalError::Incomplete { key: self.key_display(symbol, &args) })
    }

    pub fn member(&self, t: &Tree) -> Result<bool, EvalError> {
        Ok(self.finals.contains(&self.eval_tree(t)?))
    }

    /// The unique bottom-up run on `t`; its root state equals
    /// [`Dba::eval_tree`].
    pub fn run(&self, t: &Tree) -> Result<Run, EvalError> {
        let mut assignments = Vec::new();
        self.run_node(t, &NodeAddress::root(), &mut assignments)?;
        Ok(Run { assignments: assignments.into_iter().collect() })
    }

    fn run_node(
        &self,
        t: &Tree,
        at: &NodeAddress,
        out: &mut Vec<(NodeAddress, StateId)>,
    ) -> Result<StateId, EvalError> {
        let symbol = self
            .alphabet
            .id(t.label())
            .filter(|&s| self.alphabet.arity_of(s) == t.children().len())
            .ok_or_else(|| EvalError::InvalidTree { label: t.label().to_string() })?;
        let mut args = Vec::with_capacity(t.children().len());
        for (i, child) in t.children().iter().enumerate() {
            args.push(self.run_node(child, &at.child(i + 1), out)?);
        }
        let state = self
            .lookup_total(symbol, &args)
            .ok_or_else(|| EvalError::Incomplete { key: self.key_display(symbol, &args) })?;
        out.push((at.clone(), state));
        Ok(state)
    }

    /// Restricts the automaton to its reachable states. The language is
    /// unchanged; a result with no states recognizes the empty language.
    pub fn reduce(&self) -> Dba {
        self.reduce_with_witnesses().0
    }

    /// Like [`Dba::reduce`], additionally returning, per reachable state, a
    /// smallest tree evaluating to it (ties broken by the canonical tree
    /// order). The witness vector is indexed by the new state ids.
    pub fn reduce_with_witnesses(&self) -> (Dba, Vec<Tree>) {
        let n = self.state_names.len();
        let mut best: Vec<Option<Tree>> = vec![None; n];

        // Smallest-first search over transitions: an entry fires once all of
        // its argument states have witnesses.
        let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut remaining: Vec<usize> = Vec::with_capacity(self.transitions.len());
        for (ti, tr) in self.transitions.iter().enumerate() {
            remaining.push(tr.args.len());
            for &arg in &tr.args {
                occurrences[arg.0 as usize].push(ti);
            }
        }

        let mut heap: BinaryHeap<Reverse<(usize, Tree, StateId)>> = BinaryHeap::new();
        for tr in &self.transitions {
            if tr.args.is_empty() {
                let tree = Tree::leaf(self.alphabet.name(tr.symbol));
                heap.push(Reverse((1, tree, tr.target)));
            }
        }
        while let Some(Reverse((_, tree, state))) = heap.pop() {
            if best[state.0 as usize].is_some() {
                continue;
            }
            best[state.0 as usize] = Some(tree);
            for &ti in &occurrences[state.0 as usize] {
                remaining[ti] -= 1;
                if remaining[ti] == 0 {
                    let tr = &self.transitions[ti];
                    let children: Vec<Tree> = tr
                        .args
                        .iter()
                        .map(|&a| best[a.0 as usize].clone().expect("witnessed"))
                        .collect();
                    let tree = Tree::new(self.alphabet.name(tr.symbol), children);
                    heap.push(Reverse((tree.node_count(), tree, tr.target)));
                }
            }
        }

        // Keep reachable states in declaration order. The trap has no
        // explicit transitions and is dropped; reduce runs before complete.
        let mut remap: Vec<Option<StateId>> = vec![None; n];
        let mut names = Vec::new();
        let mut witnesses = Vec::new();
        for (i, tree) in best.iter().enumerate() {
            if let Some(tree) = tree {
                remap[i] = Some(StateId(names.len() as u32));
                names.push(self.state_names[i].clone());
                witnesses.push(tree.clone());
            }
        }
        let transitions: Vec<Transition> = self
            .transitions
            .iter()
            .filter(|tr| {
                tr.args.iter().all(|a| remap[a.0 as usize].is_some())
                    && remap[tr.target.0 as usize].is_some()
            })
            .map(|tr| Transition {
                symbol: tr.symbol,
                args: tr.args.iter().map(|a| remap[a.0 as usize].unwrap()).collect(),
                target: remap[tr.target.0 as usize].unwrap(),
            })
            .collect();
        let finals = self
            .finals
            .iter()
            .filter_map(|&q| remap[q.0 as usize])
            .collect();
        let state_index = names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), StateId(i as u32)))
            .collect();
        let lookup = build_lookup(&self.alphabet, &transitions);
        let dba = Dba {
            alphabet: self.alphabet.clone(),
            state_names: names,
            state_index,
            transitions,
            lookup,
            finals,
            trap: None,
        };
        (dba, witnesses)
    }

    /// Enables a fresh implicit trap state. No explicit transitions are
    /// added; the language is unchanged. A no-op when a trap is already
    /// enabled.
    pub fn complete(&self) -> Dba {
        if self.trap.is_some() {
            return self.clone();
        }
        let mut name = "trap".to_string();
        let mut counter = 0;
        while self.state_index.contains_key(&name) {
            counter += 1;
            name = format!("trap{counter}");
        }
        let mut out = self.clone();
        let id = StateId(out.state_names.len() as u32);
        out.state_index.insert(name.clone(), id);
        out.state_names.push(name);
        out.trap = Some(id);
        out
    }

    /// Size measure: states (trap excluded) plus, per explicit transition,
    /// its arity plus one.
    pub fn size(&self) -> usize {
        let states = self.state_names.len() - usize::from(self.trap.is_some());
        states + self.transitions.iter().map(|t| t.args.len() + 1).sum::<usize>()
    }
}

/// A completed view of `dba`: borrowed when a trap is already enabled,
/// otherwise a freshly completed copy.
pub(crate) fn ensure_completed(dba: &Dba) -> Cow<'_, Dba> {
    if dba.trap().is_some() {
        Cow::Borrowed(dba)
    } else {
        Cow::Owned(dba.complete())
    }
}

fn build_lookup(
    alphabet: &RankedAlphabet,
    transitions: &[Transition],
) -> Vec<HashMap<Vec<StateId>, StateId>> {
    let mut lookup = vec![HashMap::new(); alphabet.len()];
    for tr in transitions {
        lookup[tr.symbol.0 as usize].insert(tr.args.clone(), tr.target);
    }
    lookup
}

pub struct DbaBuilder {
    alphabet: RankedAlphabet,
    state_names: Vec<String>,
    state_index: HashMap<String, StateId>,
    finals: BTreeSet<StateId>,
    transitions: Vec<Transition>,
}

impl DbaBuilder {
    pub fn add_state(&mut self, name: &str) -> Result<StateId, BuildError> {
        if !is_valid_name(name) || name == HOLE {
            return Err(BuildError::BadStateName(name.to_string()));
        }
        if self.state_index.contains_key(name) {
            return Err(BuildError::DuplicateState(name.to_string()));
        }
        let id = StateId(self.state_names.len() as u32);
        self.state_names.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_states<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) -> Result<(), BuildError> {
        for name in names {
            self.add_state(name)?;
        }
        Ok(())
    }

    pub fn mark_final(&mut self, name: &str) -> Result<(), BuildError> {
        let id = self
            .state_index
            .get(name)
            .copied()
            .ok_or_else(|| BuildError::UnknownState(name.to_string()))?;
        self.finals.insert(id);
        Ok(())
    }

    pub fn add_transition(
        &mut self,
        symbol: &str,
        args: &[&str],
        target: &str,
    ) -> Result<(), BuildError> {
        let sym = self
            .alphabet
            .id(symbol)
            .ok_or_else(|| BuildError::UnknownSymbol(symbol.to_string()))?;
        let expected = self.alphabet.arity_of(sym);
        if expected != args.len() {
            return Err(BuildError::ArityMismatch {
                symbol: symbol.to_string(),
                expected,
                got: args.len(),
            });
        }
        let mut arg_ids = Vec::with_capacity(args.len());
        for arg in args {
            arg_ids.push(
                self.state_index
                    .get(*arg)
                    .copied()
                    .ok_or_else(|| BuildError::UnknownState(arg.to_string()))?,
            );
        }
        let target = self
            .state_index
            .get(target)
            .copied()
            .ok_or_else(|| BuildError::UnknownState(target.to_string()))?;
        self.transitions.push(Transition { symbol: sym, args: arg_ids, target });
        Ok(())
    }

    pub fn finish(self) -> Result<Dba, BuildError> {
        let mut transitions = self.transitions;
        transitions.sort_by(|a, b| (a.symbol, &a.args).cmp(&(b.symbol, &b.args)));
        for pair in transitions.windows(2) {
            if pair[0].symbol == pair[1].symbol && pair[0].args == pair[1].args {
                let args: Vec<&str> = pair[0]
                    .args
                    .iter()
                    .map(|a| self.state_names[a.0 as usize].as_str())
                    .collect();
                let name = self.alphabet.name(pair[0].symbol);
                let key = if args.is_empty() {
                    name.to_string()
                } else {
                    format!("{}({})", name, args.join(","))
                };
                return Err(BuildError::DuplicateTransition { key });
            }
        }
        let lookup = build_lookup(&self.alphabet, &transitions);
        Ok(Dba {
            alphabet: self.alphabet,
            state_names: self.state_names,
            state_index: self.state_index,
            transitions,
            lookup,
            finals: self.finals,
            trap: None,
        })
    }
}

/// A node-to-state assignment over a specific tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    assignments: std::collections::BTreeMap<NodeAddress, StateId>,
}

impl Run {
    pub fn state_at(&self, addr: &NodeAddress) -> Option<StateId> {
        self.assignments.get(addr).copied()
    }

    pub fn root_state(&self) -> Option<StateId> {
        self.state_at(&NodeAddress::root())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeAddress, StateId)> {
        self.assignments.iter().map(|(a, &s)| (a, s))
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

/// A deterministic top-down tree automaton with a partial transition map.
///
/// A tree is accepted iff the unique top-down descent from the initial state
/// finds an entry at every node; leaf acceptance is the presence of the
/// (state, nullary symbol) entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Dta {
    alphabet: RankedAlphabet,
    state_names: Vec<String>,
    state_index: HashMap<String, StateId>,
    initial: StateId,
    delta: HashMap<(StateId, SymbolId), Vec<StateId>>,
}

impl Dta {
    pub fn builder(alphabet: RankedAlphabet) -> DtaBuilder {
        DtaBuilder {
            alphabet,
            state_names: Vec::new(),
            state_index: HashMap::new(),
            initial: None,
            delta: HashMap::new(),
        }
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_names.len() as u32).map(StateId)
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.state_names[id.0 as usize]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn entry(&self, state: StateId, symbol: SymbolId) -> Option<&[StateId]> {
        self.delta.get(&(state, symbol)).map(Vec::as_slice)
    }

    /// Entries in canonical order: by source state, then symbol.
    pub fn entries(&self) -> Vec<(StateId, SymbolId, &[StateId])> {
        let mut out: Vec<_> = self
            .delta
            .iter()
            .map(|(&(q, s), v)| (q, s, v.as_slice()))
            .collect();
        out.sort_by_key(|&(q, s, _)| (q, s));
        out
    }

    pub fn member(&self, t: &Tree) -> bool {
        self.descend(self.initial, t)
    }

    fn descend(&self, state: StateId, t: &Tree) -> bool {
        let Some(symbol) = self.alphabet.id(t.label()) else {
            return false;
        };
        if self.alphabet.arity_of(symbol) != t.children().len() {
            return false;
        }
        match self.entry(state, symbol) {
            None => false,
            Some(children) => t
                .children()
                .iter()
                .zip(children.iter())
                .all(|(child, &q)| self.descend(q, child)),
        }
    }

    /// The unique top-down run on `t`, if the descent completes.
    pub fn run(&self, t: &Tree) -> Option<Run> {
        let mut assignments = Vec::new();
        self.run_node(self.initial, t, &NodeAddress::root(), &mut assignments)?;
        Some(Run { assignments: assignments.into_iter().collect() })
    }

    fn run_node(
        &self,
        state: StateId,
        t: &Tree,
        at: &NodeAddress,
        out: &mut Vec<(NodeAddress, StateId)>,
    ) -> Option<()> {
        let symbol = self.alphabet.id(t.label())?;
        if self.alphabet.arity_of(symbol) != t.children().len() {
            return None;
        }
        let children = self.entry(state, symbol)?.to_vec();
        out.push((at.clone(), state));
        for (i, (child, q)) in t.children().iter().zip(children).enumerate() {
            self.run_node(q, child, &at.child(i + 1), out)?;
        }
        Some(())
    }
}

pub struct DtaBuilder {
    alphabet: RankedAlphabet,
    state_names: Vec<String>,
    state_index: HashMap<String, StateId>,
    initial: Option<StateId>,
    delta: HashMap<(StateId, SymbolId), Vec<StateId>>,
}

impl DtaBuilder {
    pub fn add_state(&mut self, name: &str) -> Result<StateId, BuildError> {
        if name.is_empty() {
            return Err(BuildError::BadStateName(name.to_string()));
        }
        if self.state_index.contains_key(name) {
            return Err(BuildError::DuplicateState(name.to_string()));
        }
        let id = StateId(self.state_names.len() as u32);
        self.state_names.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn set_initial(&mut self, id: StateId) {
        self.initial = Some(id);
    }

    pub fn add_entry(
        &mut self,
        state: StateId,
        symbol: SymbolId,
        children: Vec<StateId>,
    ) -> Result<(), BuildError> {
        let expected = self.alphabet.arity_of(symbol);
        if expected != children.len() {
            return Err(BuildError::EntryArity {
                symbol: self.alphabet.name(symbol).to_string(),
                expected,
                got: children.len(),
            });
        }
        if self.delta.insert((state, symbol), children).is_some() {
            return Err(BuildError::DuplicateTransition {
                key: format!(
                    "({},{})",
                    self.state_names[state.0 as usize],
                    self.alphabet.name(symbol)
                ),
            });
        }
        Ok(())
    }

    pub fn finish(self) -> Result<Dta, BuildError> {
        let initial = self
            .initial
            .ok_or_else(|| BuildError::UnknownState("<initial>".to_string()))?;
        Ok(Dta {
            alphabet: self.alphabet,
            state_names: self.state_names,
            state_index: self.state_index,
            initial,
            delta: self.delta,
        })
    }
}
