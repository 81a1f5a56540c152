//! Shared fixtures for the integration suites.

#![allow(dead_code)]

use tdcheck::format::parse_dba;
use tdcheck::oracle::GenSpec;
use tdcheck::{Dba, RankedAlphabet, Tree};

pub const ZIGZAG_TEXT: &str = include_str!("../../../../samples/gzigzag.dba");
pub const FAB_TEXT: &str = include_str!("../../../../samples/fab.dba");

pub fn zigzag() -> Dba {
    parse_dba(ZIGZAG_TEXT).expect("shipped sample parses")
}

pub fn fab() -> Dba {
    parse_dba(FAB_TEXT).expect("shipped sample parses")
}

pub fn single_a() -> Dba {
    let alphabet = RankedAlphabet::new([("a", 0)]).unwrap();
    let mut b = Dba::builder(alphabet);
    b.add_state("q").unwrap();
    b.mark_final("q").unwrap();
    b.add_transition("a", &[], "q").unwrap();
    b.finish().unwrap()
}

pub fn monadic_chain() -> Dba {
    let alphabet = RankedAlphabet::new([("a", 0), ("g", 1)]).unwrap();
    let mut b = Dba::builder(alphabet);
    b.add_states(["s0", "s1", "s2"]).unwrap();
    b.mark_final("s2").unwrap();
    b.add_transition("a", &[], "s0").unwrap();
    b.add_transition("g", &["s0"], "s1").unwrap();
    b.add_transition("g", &["s1"], "s2").unwrap();
    b.add_transition("g", &["s2"], "s1").unwrap();
    b.finish().unwrap()
}

pub fn empty_language() -> Dba {
    let alphabet = RankedAlphabet::new([("a", 0), ("f", 2)]).unwrap();
    let mut b = Dba::builder(alphabet);
    b.add_states(["q", "dead"]).unwrap();
    b.mark_final("dead").unwrap();
    b.add_transition("a", &[], "q").unwrap();
    b.finish().unwrap()
}

/// The named automata used by corpus-wide properties.
pub fn named_corpus() -> Vec<(&'static str, Dba)> {
    vec![
        ("zigzag", zigzag()),
        ("fab", fab()),
        ("single_a", single_a()),
        ("monadic_chain", monadic_chain()),
        ("empty_language", empty_language()),
    ]
}

/// The seeded random corpus: 4-state automata over arities at most 2.
pub fn corpus_spec(seed: u64) -> GenSpec {
    GenSpec {
        seed,
        states: 4,
        symbols: vec![
            ("f".to_string(), 2),
            ("g".to_string(), 1),
            ("a".to_string(), 0),
            ("b".to_string(), 0),
        ],
        density: 0.7,
        final_prob: 0.5,
    }
}

pub fn t(text: &str) -> Tree {
    Tree::parse(text).unwrap()
}
