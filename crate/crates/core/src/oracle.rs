//! Independent brute-force verification.
//!
//! Nothing here re-runs the triple fixpoint: the searches enumerate trees
//! up to a size bound and decide everything by direct membership
//! evaluation, so they can corroborate (or refute) the decision procedure
//! on small instances. The seeded generator produces reproducible random
//! automata for differential testing; its pseudo-random sequence is a
//! documented splitmix-style generator so the same seeds yield the same
//! automata in any implementation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{ensure_completed, Dba, Dta, StateId};
use crate::decision::{
    associated_dta, is_top_down_deterministic, ConflictWitness, DecisionError,
};
use crate::par;
use crate::trees::{
    enumerate_trees, Context, EnumerationError, NodeAddress, RankedAlphabet, Tree, HOLE,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error("the two automata are over different alphabets")]
    AlphabetMismatch,
    #[error("invalid generator spec: {0}")]
    Spec(String),
}

/// A concrete failure of the exchange property: `base` is in the language,
/// replacing the subtree at `node` with `symbol(original)` or
/// `symbol(alternative)` stays in the language, but the single-position
/// exchange `exchanged` does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeViolation {
    pub base: Tree,
    pub node: NodeAddress,
    pub symbol: String,
    pub original: Vec<Tree>,
    pub alternative: Vec<Tree>,
    /// 0-based position of the exchanged child.
    pub position: usize,
    pub exchanged: Tree,
}

impl fmt::Display for ExchangeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "base {} at {} with {}-children ({}) and ({}): exchanging position {} gives {}",
            self.base,
            self.node,
            self.symbol,
            self.original.iter().map(Tree::to_string).collect::<Vec<_>>().join(","),
            self.alternative.iter().map(Tree::to_string).collect::<Vec<_>>().join(","),
            self.position + 1,
            self.exchanged,
        )
    }
}

/// Exhaustively searches for an exchange-property violation among member
/// trees of at most `max_tree_size` nodes, with replacement tuples drawn
/// from the same bounded enumeration so that every inspected tree stays
/// within the bound. Returns the first violation in canonical order
/// (member tree, node, symbol, tuples, position), or `None`.
pub fn exchange_violation_search(
    dba: &Dba,
    max_tree_size: usize,
) -> Result<Option<ExchangeViolation>, OracleError> {
    exchange_impl(dba, max_tree_size, cfg!(feature = "parallel"))
}

/// Sequential twin of [`exchange_violation_search`]; same results.
pub fn exchange_violation_search_seq(
    dba: &Dba,
    max_tree_size: usize,
) -> Result<Option<ExchangeViolation>, OracleError> {
    exchange_impl(dba, max_tree_size, false)
}

fn exchange_impl(
    dba: &Dba,
    max_tree_size: usize,
    parallel: bool,
) -> Result<Option<ExchangeViolation>, OracleError> {
    let a = ensure_completed(dba);
    let pool = enumerate_trees(a.alphabet(), max_tree_size)?;
    let pool_sizes: Vec<usize> = pool.iter().map(Tree::node_count).collect();
    let pool_states: Vec<StateId> = pool
        .iter()
        .map(|t| a.eval_tree(t).expect("completed automaton is total"))
        .collect();
    let members: Vec<Tree> = pool
        .iter()
        .zip(&pool_states)
        .filter(|(_, &q)| a.is_final(q))
        .map(|(t, _)| t.clone())
        .collect();

    let found = par::find_map_first(&members, parallel, |base| {
        search_base_tree(&a, &pool, &pool_sizes, &pool_states, base, max_tree_size)
    });
    Ok(found)
}

fn search_base_tree(
    a: &Dba,
    pool: &[Tree],
    pool_sizes: &[usize],
    pool_states: &[StateId],
    base: &Tree,
    max_tree_size: usize,
) -> Option<ExchangeViolation> {
    let alphabet = a.alphabet();
    for node in base.nodes() {
        let removed = base.subtree(&node).expect("address from nodes()").node_count();
        let context_nodes = base.node_count() - removed;
        let context = Context::new(base.replace(&node, Tree::leaf(HOLE)).unwrap())
            .expect("single fresh hole");
        // Membership of any replaced tree only depends on the state the
        // replacement evaluates to, so precompute acceptance per state.
        let accepts: Vec<bool> = (0..a.state_count() as u32)
            .map(|q| {
                let reached = a
                    .eval_context(StateId(q), &context)
                    .expect("completed automaton is total");
                a.is_final(reached)
            })
            .collect();
        for (symbol, name, arity) in alphabet.symbols() {
            if arity < 2 {
                continue;
            }
            if max_tree_size < context_nodes + 1 + arity {
                continue;
            }
            let budget = max_tree_size - context_nodes - 1;
            let tuples = tuples_within_budget(pool_sizes, arity, budget);
            // (tuple, state of symbol(tuple), accepted through the context)
            let mut arg_states = Vec::with_capacity(arity);
            let infos: Vec<(&[u32], bool)> = tuples
                .iter()
                .map(|ix| {
                    arg_states.clear();
                    arg_states.extend(ix.iter().map(|&i| pool_states[i as usize]));
                    let q = a
                        .lookup_total(symbol, &arg_states)
                        .expect("completed automaton is total");
                    (ix.as_slice(), accepts[q.0 as usize])
                })
                .collect();
            for &(left, left_in) in &infos {
                if !left_in {
                    continue;
                }
                for &(right, right_in) in &infos {
                    if !right_in {
                        continue;
                    }
                    for position in 0..arity {
                        if left[position] == right[position] {
                            continue;
                        }
                        arg_states.clear();
                        arg_states.extend(left.iter().map(|&i| pool_states[i as usize]));
                        arg_states[position] = pool_states[right[position] as usize];
                        let q = a
                            .lookup_total(symbol, &arg_states)
                            .expect("completed automaton is total");
                        if !accepts[q.0 as usize] {
                            let fetch = |ix: &[u32]| -> Vec<Tree> {
                                ix.iter().map(|&i| pool[i as usize].clone()).collect()
                            };
                            let mut mixed = fetch(left);
                            mixed[position] = pool[right[position] as usize].clone();
                            let exchanged = base
                                .replace(&node, Tree::new(name, mixed))
                                .expect("address valid");
                            return Some(ExchangeViolation {
                                base: base.clone(),
                                node,
                                symbol: name.to_string(),
                                original: fetch(left),
                                alternative: fetch(right),
                                position,
                                exchanged,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// All index tuples of length `arity` whose pooled tree sizes sum to at
/// most `budget`, lexicographically. The pool is sorted by size, so each
/// position can stop early.
fn tuples_within_budget(pool_sizes: &[usize], arity: usize, budget: usize) -> Vec<Vec<u32>> {
    fn go(
        sizes: &[usize],
        remaining_positions: usize,
        budget: usize,
        acc: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if remaining_positions == 0 {
            out.push(acc.clone());
            return;
        }
        let reserve = remaining_positions - 1; // at least one node per later position
        for (i, &size) in sizes.iter().enumerate() {
            if size + reserve > budget {
                break;
            }
            acc.push(i as u32);
            go(sizes, remaining_positions - 1, budget - size, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(pool_sizes, arity, budget, &mut Vec::new(), &mut out);
    out
}

/// First tree (canonical order, at most `max_tree_size` nodes) on which the
/// two automata disagree, or `None`.
pub fn bounded_language_equal(
    dba: &Dba,
    dta: &Dta,
    max_tree_size: usize,
) -> Result<Option<Tree>, OracleError> {
    compare_impl(dba, dta, max_tree_size, false, cfg!(feature = "parallel"))
}

/// Sequential twin of [`bounded_language_equal`]; same results.
pub fn bounded_language_equal_seq(
    dba: &Dba,
    dta: &Dta,
    max_tree_size: usize,
) -> Result<Option<Tree>, OracleError> {
    compare_impl(dba, dta, max_tree_size, false, false)
}

/// First tree accepted by the bottom-up automaton but not the top-down one,
/// or `None` when the bounded inclusion holds.
pub fn bounded_subset(
    dba: &Dba,
    dta: &Dta,
    max_tree_size: usize,
) -> Result<Option<Tree>, OracleError> {
    compare_impl(dba, dta, max_tree_size, true, cfg!(feature = "parallel"))
}

/// Sequential twin of [`bounded_subset`]; same results.
pub fn bounded_subset_seq(
    dba: &Dba,
    dta: &Dta,
    max_tree_size: usize,
) -> Result<Option<Tree>, OracleError> {
    compare_impl(dba, dta, max_tree_size, true, false)
}

fn compare_impl(
    dba: &Dba,
    dta: &Dta,
    max_tree_size: usize,
    subset_only: bool,
    parallel: bool,
) -> Result<Option<Tree>, OracleError> {
    if dba.alphabet() != dta.alphabet() {
        return Err(OracleError::AlphabetMismatch);
    }
    let a = ensure_completed(dba);
    let trees = enumerate_trees(a.alphabet(), max_tree_size)?;
    Ok(par::find_map_first(&trees, parallel, |t| {
        let in_a = a.member(t).expect("completed automaton is total");
        let in_b = dta.member(t);
        let disagree = if subset_only { in_a && !in_b } else { in_a != in_b };
        disagree.then(|| t.clone())
    }))
}

/// Checks a produced witness by direct evaluation only: the trees must
/// reconstruct from the context, symbol, position, and child tuples, the
/// two accepted trees must be members, and the exchanged tree must not be.
pub fn confirm_witness(dba: &Dba, witness: &ConflictWitness) -> Result<(), String> {
    let a = ensure_completed(dba);
    let arity = a
        .alphabet()
        .arity(&witness.symbol)
        .ok_or_else(|| format!("unknown symbol {:?}", witness.symbol))?;
    if arity < 2 {
        return Err(format!("witness symbol {:?} has arity below 2", witness.symbol));
    }
    if witness.left_trees.len() != arity || witness.right_trees.len() != arity {
        return Err("child tuple lengths do not match the symbol arity".to_string());
    }
    if witness.position >= arity {
        return Err("exchange position out of range".to_string());
    }
    if !witness.context.validates(a.alphabet()) {
        return Err("context does not validate against the alphabet".to_string());
    }

    let plugfix = |children: &[Tree]| {
        witness
            .context
            .plug(&Tree::new(witness.symbol.clone(), children.to_vec()))
    };
    let mut mixed = witness.left_trees.clone();
    mixed[witness.position] = witness.right_trees[witness.position].clone();
    if witness.accepted.0 != plugfix(&witness.left_trees) {
        return Err("first accepted tree does not reconstruct".to_string());
    }
    if witness.accepted.1 != plugfix(&witness.right_trees) {
        return Err("second accepted tree does not reconstruct".to_string());
    }
    if witness.violating != plugfix(&mixed) {
        return Err("violating tree does not reconstruct".to_string());
    }

    let member = |t: &Tree| a.member(t).map_err(|e| e.to_string());
    if !member(&witness.accepted.0)? {
        return Err(format!("{} is not in the language", witness.accepted.0));
    }
    if !member(&witness.accepted.1)? {
        return Err(format!("{} is not in the language", witness.accepted.1));
    }
    if member(&witness.violating)? {
        return Err(format!("{} is unexpectedly in the language", witness.violating));
    }
    Ok(())
}

/// Splitmix-style 64-bit generator. The entire sequence is fixed by the
/// constants below, so seeds are portable across implementations:
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// output z ^ (z >> 31)
/// ```
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1): the top 53 bits scaled by 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in 0..n by modulo (documented bias is irrelevant here; only
    /// reproducibility matters).
    pub fn next_below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Parameters of the seeded random-automaton generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub seed: u64,
    pub states: usize,
    /// Symbols with arities, serialized as `"name/arity"` strings.
    #[serde(with = "symbol_list")]
    pub symbols: Vec<(String, usize)>,
    /// Probability that any particular transition key gets an entry.
    pub density: f64,
    /// Probability that any particular state is final.
    pub final_prob: f64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.states == 0 {
            return Err("state count must be positive".to_string());
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err("density must lie in [0,1]".to_string());
        }
        if !(0.0..=1.0).contains(&self.final_prob) {
            return Err("final probability must lie in [0,1]".to_string());
        }
        if !self.symbols.iter().any(|(_, a)| *a == 0) {
            return Err("the alphabet needs at least one nullary symbol".to_string());
        }
        RankedAlphabet::new(self.symbols.clone()).map_err(|e| e.to_string())?;
        Ok(())
    }
}

/// `"f/2,a/0"`-style symbol lists, as used on the command line.
pub fn parse_symbol_list(text: &str) -> Result<Vec<(String, usize)>, String> {
    text.split(',')
        .map(|item| {
            let item = item.trim();
            let (name, arity) = item
                .split_once('/')
                .ok_or_else(|| format!("expected `name/arity`, got {item:?}"))?;
            let arity: usize =
                arity.parse().map_err(|_| format!("invalid arity in {item:?}"))?;
            Ok((name.to_string(), arity))
        })
        .collect()
}

mod symbol_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        symbols: &[(String, usize)],
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let rendered: Vec<String> =
            symbols.iter().map(|(n, a)| format!("{n}/{a}")).collect();
        rendered.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<(String, usize)>, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        items
            .iter()
            .map(|item| {
                super::parse_symbol_list(item).map(|mut v| v.remove(0)).map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// Deterministic function of the spec: states `s0..s{n-1}`; for every
/// symbol (alphabetical) and argument tuple (lexicographic), one inclusion
/// draw and, if included, one uniform target draw; then one final-state
/// draw per state in order. The result is reduced before it is returned.
pub fn random_dba(spec: &GenSpec) -> Result<Dba, OracleError> {
    spec.validate().map_err(OracleError::Spec)?;
    let alphabet =
        RankedAlphabet::new(spec.symbols.clone()).map_err(|e| OracleError::Spec(e.to_string()))?;
    let n = spec.states;
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();

    let mut builder = Dba::builder(alphabet.clone());
    for name in &name_refs {
        builder.add_state(name).expect("fresh generated state");
    }
    let mut rng = SplitMix64::new(spec.seed);
    for (_, symbol, arity) in alphabet.symbols() {
        let mut tuple = vec![0usize; arity];
        loop {
            if rng.next_f64() < spec.density {
                let target = rng.next_below(n as u64) as usize;
                let args: Vec<&str> = tuple.iter().map(|&i| name_refs[i]).collect();
                builder
                    .add_transition(symbol, &args, name_refs[target])
                    .expect("generated transition is valid");
            }
            // advance the odometer
            let mut pos = arity;
            loop {
                if pos == 0 {
                    break;
                }
                tuple[pos - 1] += 1;
                if tuple[pos - 1] < n {
                    break;
                }
                tuple[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    for name in &name_refs {
        if rng.next_f64() < spec.final_prob {
            builder.mark_final(name).expect("state exists");
        }
    }
    Ok(builder.finish().expect("generated automaton is deterministic").reduce())
}

#[derive(Debug, Clone, Copy)]
pub struct DifferentialOptions {
    /// Tree-size bound for the bounded comparisons.
    pub bound: usize,
    /// Also run the full exchange-property search per automaton.
    pub exchange_search: bool,
}

impl Default for DifferentialOptions {
    fn default() -> Self {
        DifferentialOptions { bound: 6, exchange_search: false }
    }
}

/// Outcome of one differential run; see [`DifferentialOutcome::consistent`].
#[derive(Debug, Clone)]
pub struct DifferentialOutcome {
    pub seed: u64,
    pub answer: bool,
    /// Reachable states of the generated automaton.
    pub states: usize,
    /// When the answer is no: the witness survived [`confirm_witness`].
    pub witness_confirmed: Option<bool>,
    /// When the answer is yes: bounded language equality with the
    /// subset-state automaton held.
    pub bounded_equal: Option<bool>,
    /// The bounded inclusion holds unconditionally.
    pub subset_holds: bool,
    /// When the full search ran: whether a violation exists at the bound.
    pub exchange_violation: Option<bool>,
}

impl DifferentialOutcome {
    /// Everything the decision claims is corroborated by the oracle side.
    pub fn consistent(&self) -> bool {
        self.subset_holds
            && self.witness_confirmed.unwrap_or(true)
            && self.bounded_equal.unwrap_or(true)
            && match self.exchange_violation {
                Some(true) => !self.answer,
                _ => true,
            }
    }
}

/// Runs the generator, the decision, and the oracle checks for one seed.
/// Inner searches run sequentially; parallelism belongs to the batch layer.
pub fn differential_check(
    spec: &GenSpec,
    options: &DifferentialOptions,
) -> Result<DifferentialOutcome, OracleError> {
    let dba = random_dba(spec)?;
    let decision = is_top_down_deterministic(&dba)?;
    let dta = associated_dta(&dba)?;
    let subset_holds = bounded_subset_seq(&dba, &dta, options.bound)?.is_none();
    let witness_confirmed = match &decision.witness {
        Some(w) => Some(confirm_witness(&dba, w).is_ok()),
        None => None,
    };
    let bounded_equal = if decision.answer {
        Some(bounded_language_equal_seq(&dba, &dta, options.bound)?.is_none())
    } else {
        None
    };
    let exchange_violation = if options.exchange_search {
        Some(exchange_violation_search_seq(&dba, options.bound)?.is_some())
    } else {
        None
    };
    Ok(DifferentialOutcome {
        seed: spec.seed,
        answer: decision.answer,
        states: decision.stats.states,
        witness_confirmed,
        bounded_equal,
        subset_holds,
        exchange_violation,
    })
}

/// Differential checks for `count` consecutive seeds starting at
/// `base.seed`, in seed order. Seeds are sharded across workers when the
/// `parallel` feature is enabled; the output does not depend on sharding.
pub fn differential_batch(
    base: &GenSpec,
    count: u64,
    options: &DifferentialOptions,
) -> Result<Vec<DifferentialOutcome>, OracleError> {
    let results = par::map_indexed(count, cfg!(feature = "parallel"), |i| {
        let spec = GenSpec { seed: base.seed.wrapping_add(i), ..base.clone() };
        differential_check(&spec, options)
    });
    results.into_iter().collect()
}
