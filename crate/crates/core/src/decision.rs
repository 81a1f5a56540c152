//! The decision procedure: conflict seeds, context closure over state
//! triples, witness materialization, the top-level answer, and the
//! subset-state top-down automaton.
//!
//! A triple (q, q', q'') is *conflicting* when q and q' arise from two
//! transitions over the same symbol, q'' from the single-position mix of
//! their argument tuples, and some context accepts from q and q' but
//! rejects from q''. The language is deterministic top-down iff no such
//! triple exists. Instead of quantifying over contexts, the checker closes
//! the seed triples under one-symbol contexts and intersects the closure
//! with F x F x (Q \ F).
//!
//! Triples that can never become conflicting are pruned eagerly: a trap in
//! the first or second component can never reach a final state, and a third
//! component equal to the first or second keeps that equality under every
//! context because the automaton is deterministic.

use std::collections::HashMap;

use thiserror::Error;

use crate::automata::{Dba, Dta, StateId, Transition};
use crate::trees::{Context, Tree, HOLE};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecisionError {
    #[error("the automaton must have a trap state enabled; run complete() first")]
    TrapRequired,
    #[error("triple closure exceeded the cap of {cap} triples")]
    TripleLimit { cap: usize },
    #[error("subset construction exceeded the cap of {cap} states")]
    DtaStateLimit { cap: usize },
}

/// A state triple (q, q', q'') tracked by the fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    pub first: StateId,
    pub second: StateId,
    pub third: StateId,
}

/// How a triple entered the set. Transition indices refer to the canonical
/// transition order of the automaton the set was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Two explicit transitions over one symbol of arity >= 2: `first` is
    /// the target of `left`, `second` the target of `right`, `third` the
    /// lookup of left's tuple with `position` replaced by right's state at
    /// that position.
    Seed { left: usize, right: usize, position: usize },
    /// A one-symbol context step: `transition` carries the parent triple's
    /// first component at `position`; the three components are the images
    /// of the parent's components under that context.
    Step { parent: usize, transition: usize, position: usize },
}

/// Triples in discovery order with first-discovery provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSet {
    records: Vec<(Triple, Provenance)>,
    index: HashMap<Triple, usize>,
}

impl TripleSet {
    fn new() -> Self {
        TripleSet { records: Vec::new(), index: HashMap::new() }
    }

    /// Inserts unless pruned or already present.
    fn insert(&mut self, triple: Triple, provenance: Provenance, trap: StateId) {
        if triple.third == triple.first
            || triple.third == triple.second
            || triple.first == trap
            || triple.second == trap
        {
            return;
        }
        if let std::collections::hash_map::Entry::Vacant(e) = self.index.entry(triple) {
            e.insert(self.records.len());
            self.records.push((triple, provenance));
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.index.contains_key(triple)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Triple, Provenance)> {
        self.records.iter()
    }

    pub fn get(&self, idx: usize) -> Option<&(Triple, Provenance)> {
        self.records.get(idx)
    }

    /// Keeps only the first `len` records. Valid on seed sets (seeds never
    /// reference other records), where it yields a smaller seed set for
    /// monotonicity experiments.
    pub fn truncate(mut self, len: usize) -> TripleSet {
        self.records.truncate(len);
        self.index.retain(|_, &mut idx| idx < len);
        self
    }

    /// Rechecks every record against the transition table: seed conditions
    /// for seeds, image-under-context consistency for steps, and the
    /// pruning invariants for all. `dba` must be the automaton the set was
    /// computed for.
    pub fn validate(&self, dba: &Dba) -> Result<(), String> {
        let trap = dba.trap().ok_or("automaton has no trap state")?;
        let transitions = dba.transitions();
        for (i, (triple, provenance)) in self.records.iter().enumerate() {
            if triple.first == trap || triple.second == trap {
                return Err(format!("record {i}: trap in first or second component"));
            }
            if triple.third == triple.first || triple.third == triple.second {
                return Err(format!("record {i}: unpruned trivial triple"));
            }
            match *provenance {
                Provenance::Seed { left, right, position } => {
                    let (l, r) = (&transitions[left], &transitions[right]);
                    if l.symbol != r.symbol {
                        return Err(format!("record {i}: seed symbols differ"));
                    }
                    if l.args.len() < 2 {
                        return Err(format!("record {i}: seed symbol arity below 2"));
                    }
                    let mut mixed = l.args.clone();
                    mixed[position] = r.args[position];
                    let third = dba.lookup(l.symbol, &mixed).unwrap_or(trap);
                    if (l.target, r.target, third)
                        != (triple.first, triple.second, triple.third)
                    {
                        return Err(format!("record {i}: seed components do not re-derive"));
                    }
                }
                Provenance::Step { parent, transition, position } => {
                    if parent >= i {
                        return Err(format!("record {i}: parent not discovered earlier"));
                    }
                    let (p, _) = self.records[parent];
                    let tr = &transitions[transition];
                    if tr.args[position] != p.first {
                        return Err(format!(
                            "record {i}: step transition does not consume the parent"
                        ));
                    }
                    let mut buf = tr.args.clone();
                    buf[position] = p.second;
                    let second = dba.lookup(tr.symbol, &buf).unwrap_or(trap);
                    buf[position] = p.third;
                    let third = if p.third == trap {
                        trap
                    } else {
                        dba.lookup(tr.symbol, &buf).unwrap_or(trap)
                    };
                    if (tr.target, second, third)
                        != (triple.first, triple.second, triple.third)
                    {
                        return Err(format!("record {i}: step components do not re-derive"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn transitions_by_symbol(dba: &Dba) -> Vec<Vec<usize>> {
    let mut by_symbol = vec![Vec::new(); dba.alphabet().len()];
    for (i, tr) in dba.transitions().iter().enumerate() {
        by_symbol[tr.symbol.0 as usize].push(i);
    }
    by_symbol
}

/// The seed triples: every ordered pair of explicit transitions sharing a
/// symbol of arity >= 2, mixed at every position. Requires a trap-enabled,
/// reduced automaton.
pub fn seed_triples(dba: &Dba) -> Result<TripleSet, DecisionError> {
    let trap = dba.trap().ok_or(DecisionError::TrapRequired)?;
    let transitions = dba.transitions();
    let mut set = TripleSet::new();
    let mut mixed: Vec<StateId> = Vec::new();
    for group in transitions_by_symbol(dba) {
        let arity = match group.first() {
            Some(&i) => transitions[i].args.len(),
            None => continue,
        };
        if arity < 2 {
            continue;
        }
        for &li in &group {
            let left = &transitions[li];
            for &ri in &group {
                let right = &transitions[ri];
                for position in 0..arity {
                    mixed.clear();
                    mixed.extend_from_slice(&left.args);
                    mixed[position] = right.args[position];
                    let third = dba.lookup(left.symbol, &mixed).unwrap_or(trap);
                    set.insert(
                        Triple { first: left.target, second: right.target, third },
                        Provenance::Seed { left: li, right: ri, position },
                        trap,
                    );
                }
            }
        }
    }
    Ok(set)
}

/// Least superset of `seeds` closed under one-symbol context steps, FIFO
/// worklist, each (triple, transition, position) processed at most once.
pub fn close_triples(
    dba: &Dba,
    seeds: TripleSet,
    cap: usize,
) -> Result<TripleSet, DecisionError> {
    let trap = dba.trap().ok_or(DecisionError::TrapRequired)?;
    let transitions = dba.transitions();

    // occurrence index: state -> (transition, position) pairs consuming it
    let mut occurrences: Vec<Vec<(u32, u32)>> = vec![Vec::new(); dba.state_count()];
    for (ti, tr) in transitions.iter().enumerate() {
        for (j, &arg) in tr.args.iter().enumerate() {
            occurrences[arg.0 as usize].push((ti as u32, j as u32));
        }
    }

    let mut set = seeds;
    if set.len() > cap {
        return Err(DecisionError::TripleLimit { cap });
    }
    let mut buf: Vec<StateId> = Vec::new();
    let mut cursor = 0;
    while cursor < set.records.len() {
        let (triple, _) = set.records[cursor];
        for &(ti, j) in &occurrences[triple.first.0 as usize] {
            let (ti, j) = (ti as usize, j as usize);
            let tr = &transitions[ti];
            let first = tr.target;
            buf.clear();
            buf.extend_from_slice(&tr.args);
            buf[j] = triple.second;
            let second = dba.lookup(tr.symbol, &buf).unwrap_or(trap);
            let third = if triple.third == trap {
                trap
            } else {
                buf[j] = triple.third;
                dba.lookup(tr.symbol, &buf).unwrap_or(trap)
            };
            set.insert(
                Triple { first, second, third },
                Provenance::Step { parent: cursor, transition: ti, position: j },
                trap,
            );
            if set.len() > cap {
                return Err(DecisionError::TripleLimit { cap });
            }
        }
        cursor += 1;
    }
    Ok(set)
}

/// A conflict made concrete: a separating context and three trees, two
/// accepted and the exchanged one rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictWitness {
    /// The conflicting triple, as state names of the completed automaton.
    pub triple: [String; 3],
    /// The seed symbol under which the exchange happens.
    pub symbol: String,
    /// 0-based argument position of the exchange (reports show it 1-based).
    pub position: usize,
    /// The separating context.
    pub context: Context,
    pub left_trees: Vec<Tree>,
    pub right_trees: Vec<Tree>,
    /// Both in the language: context plugged with symbol(left_trees) resp.
    /// symbol(right_trees).
    pub accepted: (Tree, Tree),
    /// Not in the language: left_trees with `position` replaced by the
    /// right tree at that position, under the same context.
    pub violating: Tree,
    /// The triple chain from seed to conflict.
    pub trail: Vec<TrailStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailStep {
    pub triple: [String; 3],
    /// The context symbol and 0-based position that produced this triple
    /// from its predecessor; absent on the seed entry.
    pub via: Option<(String, usize)>,
}

/// Outcome of the top-level decision.
#[derive(Debug, Clone)]
pub struct Decision {
    pub answer: bool,
    pub witness: Option<ConflictWitness>,
    pub stats: DecisionStats,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecisionStats {
    /// Reachable states after reduction (trap excluded).
    pub states: usize,
    /// Explicit transitions after reduction.
    pub transitions: usize,
    /// Seed triples.
    pub seeds: usize,
    /// Triples in the closure.
    pub triples: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecisionConfig {
    /// Cap on the triple closure; defaults to |Q|^3 of the completed
    /// automaton, which the closure cannot exceed.
    pub triple_cap: Option<usize>,
    /// Cap on constructed subset states; defaults to min(2^|Q|, 10^6).
    pub dta_state_cap: Option<usize>,
}

struct Analysis {
    completed: Dba,
    representatives: Vec<Tree>,
    triples: TripleSet,
    seed_count: usize,
    conflict: Option<usize>,
    reduced_states: usize,
    reduced_transitions: usize,
}

fn analyze(dba: &Dba, config: &DecisionConfig) -> Result<Analysis, DecisionError> {
    let (reduced, representatives) = dba.reduce_with_witnesses();
    let reduced_states = reduced.state_count();
    let reduced_transitions = reduced.transitions().len();
    let completed = reduced.complete();
    let cap = config
        .triple_cap
        .unwrap_or_else(|| completed.state_count().pow(3).max(1));
    let seeds = seed_triples(&completed)?;
    let seed_count = seeds.len();
    let triples = close_triples(&completed, seeds, cap)?;
    let conflict = triples.records.iter().position(|(t, _)| {
        completed.is_final(t.first)
            && completed.is_final(t.second)
            && !completed.is_final(t.third)
    });
    Ok(Analysis {
        completed,
        representatives,
        triples,
        seed_count,
        conflict,
        reduced_states,
        reduced_transitions,
    })
}

fn materialize(analysis: &Analysis) -> ConflictWitness {
    let dba = &analysis.completed;
    let records = &analysis.triples.records;
    let name = |q: StateId| dba.state_name(q).to_string();
    let names = |t: &Triple| [name(t.first), name(t.second), name(t.third)];
    let rep = |q: StateId| analysis.representatives[q.0 as usize].clone();
    let one_symbol_context = |tr: &Transition, j: usize| {
        let children = tr
            .args
            .iter()
            .enumerate()
            .map(|(i, &a)| if i == j { Tree::leaf(HOLE) } else { rep(a) })
            .collect();
        Context::new(Tree::new(dba.alphabet().name(tr.symbol), children))
            .expect("one-symbol context has exactly one hole")
    };

    // Chain of record indices from the conflict back to its seed.
    let mut chain = vec![analysis.conflict.expect("conflict present")];
    loop {
        match records[*chain.last().unwrap()].1 {
            Provenance::Step { parent, .. } => chain.push(parent),
            Provenance::Seed { .. } => break,
        }
    }
    chain.reverse(); // seed first

    let Provenance::Seed { left, right, position } = records[chain[0]].1 else {
        unreachable!("chain starts at a seed");
    };
    let (lt, rt) = (&dba.transitions()[left], &dba.transitions()[right]);
    let symbol = dba.alphabet().name(lt.symbol).to_string();
    let left_trees: Vec<Tree> = lt.args.iter().map(|&a| rep(a)).collect();
    let right_trees: Vec<Tree> = rt.args.iter().map(|&a| rep(a)).collect();

    let mut context = Context::hole();
    let mut trail = vec![TrailStep { triple: names(&records[chain[0]].0), via: None }];
    for &idx in &chain[1..] {
        let Provenance::Step { transition, position, .. } = records[idx].1 else {
            unreachable!("inner chain entries are steps");
        };
        let tr = &dba.transitions()[transition];
        context = one_symbol_context(tr, position).plug_context(&context);
        trail.push(TrailStep {
            triple: names(&records[idx].0),
            via: Some((dba.alphabet().name(tr.symbol).to_string(), position)),
        });
    }

    let mut mixed = left_trees.clone();
    mixed[position] = right_trees[position].clone();
    let accepted = (
        context.plug(&Tree::new(symbol.clone(), left_trees.clone())),
        context.plug(&Tree::new(symbol.clone(), right_trees.clone())),
    );
    let violating = context.plug(&Tree::new(symbol.clone(), mixed));

    ConflictWitness {
        triple: names(&records[*chain.last().unwrap()].0),
        symbol,
        position,
        context,
        left_trees,
        right_trees,
        accepted,
        violating,
        trail,
    }
}

/// Searches for a conflict, materializing a witness for the first one in
/// discovery order. Accepts an arbitrary automaton; reduction and
/// completion happen internally.
pub fn find_conflict(dba: &Dba) -> Result<Option<ConflictWitness>, DecisionError> {
    find_conflict_with(dba, &DecisionConfig::default())
}

pub fn find_conflict_with(
    dba: &Dba,
    config: &DecisionConfig,
) -> Result<Option<ConflictWitness>, DecisionError> {
    let analysis = analyze(dba, config)?;
    Ok(analysis.conflict.map(|_| materialize(&analysis)))
}

/// The top-level decision: reduce, complete, seed, close, check.
pub fn is_top_down_deterministic(dba: &Dba) -> Result<Decision, DecisionError> {
    is_top_down_deterministic_with(dba, &DecisionConfig::default())
}

pub fn is_top_down_deterministic_with(
    dba: &Dba,
    config: &DecisionConfig,
) -> Result<Decision, DecisionError> {
    let analysis = analyze(dba, config)?;
    let mut notes = Vec::new();
    if analysis.reduced_states == 0 {
        notes.push("empty automaton".to_string());
    }
    if analysis.completed.finals().is_empty() {
        notes.push("empty language".to_string());
    }
    let witness = analysis.conflict.map(|_| materialize(&analysis));
    if witness.is_some() {
        notes.push("witness is one of possibly many".to_string());
    }
    Ok(Decision {
        answer: witness.is_none(),
        witness,
        stats: DecisionStats {
            states: analysis.reduced_states,
            transitions: analysis.reduced_transitions,
            seeds: analysis.seed_count,
            triples: analysis.triples.len(),
        },
        notes,
    })
}

/// The subset-state top-down automaton of a reduced automaton, built
/// on-the-fly from the final set. Entries whose child sets would all be
/// empty are omitted; the empty set is never constructed as a child.
pub fn associated_dta(dba: &Dba) -> Result<Dta, DecisionError> {
    let cap = 1usize
        .checked_shl(dba.state_count() as u32)
        .unwrap_or(usize::MAX)
        .min(1_000_000);
    associated_dta_with_cap(dba, cap)
}

pub fn associated_dta_with_cap(dba: &Dba, cap: usize) -> Result<Dta, DecisionError> {
    let mut builder = Dta::builder(dba.alphabet().clone());
    let mut interned: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut queue: Vec<Vec<StateId>> = Vec::new();

    let render = |set: &[StateId]| {
        let names: Vec<&str> = set.iter().map(|&q| dba.state_name(q)).collect();
        format!("{{{}}}", names.join(","))
    };

    let initial: Vec<StateId> = dba.finals().iter().copied().collect();
    let initial_id = builder.add_state(&render(&initial)).expect("fresh state");
    builder.set_initial(initial_id);
    interned.insert(initial.clone(), initial_id);
    queue.push(initial);

    let by_symbol = transitions_by_symbol(dba);
    let transitions = dba.transitions();

    let mut cursor = 0;
    while cursor < queue.len() {
        let set = queue[cursor].clone();
        let source = interned[&set];
        for (symbol, _, arity) in dba.alphabet().symbols() {
            let matching: Vec<&Transition> = by_symbol[symbol.0 as usize]
                .iter()
                .map(|&i| &transitions[i])
                .filter(|tr| set.binary_search(&tr.target).is_ok())
                .collect();
            if matching.is_empty() {
                continue;
            }
            if arity == 0 {
                builder.add_entry(source, symbol, Vec::new()).expect("fresh entry");
                continue;
            }
            let mut children = Vec::with_capacity(arity);
            for i in 0..arity {
                let mut child: Vec<StateId> =
                    matching.iter().map(|tr| tr.args[i]).collect();
                child.sort();
                child.dedup();
                let id = match interned.get(&child) {
                    Some(&id) => id,
                    None => {
                        if interned.len() >= cap {
                            return Err(DecisionError::DtaStateLimit { cap });
                        }
                        let id = builder.add_state(&render(&child)).expect("fresh state");
                        interned.insert(child.clone(), id);
                        queue.push(child);
                        id
                    }
                };
                children.push(id);
            }
            builder.add_entry(source, symbol, children).expect("fresh entry");
        }
        cursor += 1;
    }
    Ok(builder.finish().expect("initial state set"))
}
