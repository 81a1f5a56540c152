//! The `.dba` and `.dta` text formats.
//!
//! A `.dba` file has four sections, in order:
//!
//! ```text
//! alphabet: a/0 b/0 f/2
//! states: qa qb qf
//! final: qf
//! trans:
//! a -> qa
//! b -> qb
//! f(qa,qb) -> qf
//! f(qb,qa) -> qf
//! ```
//!
//! Section items may sit on the header line, on following lines, or both.
//! `#` starts a comment, blank lines are ignored, CRLF is accepted. Every
//! referenced symbol and state must be declared, and transition keys must
//! be unique (the automaton is deterministic).
//!
//! A `.dta` file mirrors this with sections `alphabet:`, `states:`,
//! `initial:`, and `trans:`; transition lines read `Q0 --f--> Q1 Q2`, with
//! `.` standing for the empty child list of nullary symbols. Subset states
//! produced by the top-down construction render as brace sets like
//! `{q,p}`, ordered by base-state declaration.
//!
//! Rendering is canonical: symbols alphabetically, states in declaration
//! order, transitions sorted by symbol then argument tuple. Parsing a
//! rendered automaton reproduces it exactly; an implicit trap state is
//! never rendered.

use std::collections::HashSet;

use thiserror::Error;

use crate::automata::{Dba, Dta, StateId};
use crate::trees::{is_valid_name, RankedAlphabet, HOLE};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, col, message: message.into() }
}

/// A run of content: (line number, column offset, text).
type Piece<'a> = (usize, usize, &'a str);

/// Splits the document into the named sections, which must appear in order.
fn split_sections<'a>(
    text: &'a str,
    names: &[&str],
) -> Result<Vec<Vec<Piece<'a>>>, ParseError> {
    let mut out: Vec<Vec<Piece<'a>>> = names.iter().map(|_| Vec::new()).collect();
    let mut current: Option<usize> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        if content.trim().is_empty() {
            continue;
        }
        let trimmed = content.trim_start();
        let indent = content.len() - trimmed.len();
        let header = names
            .iter()
            .position(|n| trimmed.strip_prefix(n).is_some_and(|r| r.starts_with(':')));
        if let Some(section) = header {
            let expected = current.map_or(0, |c| c + 1);
            if section != expected {
                let message = if expected < names.len() {
                    format!("expected section `{}:`", names[expected])
                } else {
                    format!("unexpected section `{}:`", names[section])
                };
                return Err(err(line_no, indent + 1, message));
            }
            current = Some(section);
            let rest_off = indent + names[section].len() + 1;
            if !content[rest_off..].trim().is_empty() {
                out[section].push((line_no, rest_off, &content[rest_off..]));
            }
        } else {
            match current {
                None => {
                    return Err(err(line_no, indent + 1, format!("expected section `{}:`", names[0])))
                }
                Some(c) => out[c].push((line_no, 0, content)),
            }
        }
    }
    let complete = current == Some(names.len() - 1);
    if !complete {
        let expected = current.map_or(0, |c| c + 1);
        return Err(err(
            last_line + 1,
            1,
            format!("missing section `{}:`", names[expected]),
        ));
    }
    Ok(out)
}

/// Whitespace-separated tokens of a piece, with 1-based columns.
fn tokens<'a>(piece: &Piece<'a>) -> Vec<(usize, usize, &'a str)> {
    let (line, base, text) = *piece;
    let mut out = Vec::new();
    let mut offset = 0;
    for chunk in text.split_inclusive(char::is_whitespace) {
        let token = chunk.trim_end_matches(char::is_whitespace);
        if !token.is_empty() {
            out.push((line, base + offset + 1, token));
        }
        offset += chunk.len();
    }
    out
}

fn section_tokens<'a>(pieces: &[Piece<'a>]) -> Vec<(usize, usize, &'a str)> {
    pieces.iter().flat_map(|p| tokens(p)).collect()
}

fn parse_alphabet(pieces: &[Piece<'_>]) -> Result<RankedAlphabet, ParseError> {
    let mut symbols = Vec::new();
    let mut seen = HashSet::new();
    for (line, col, tok) in section_tokens(pieces) {
        let Some((name, arity_text)) = tok.split_once('/') else {
            return Err(err(line, col, format!("expected `name/arity`, got {tok:?}")));
        };
        if name == HOLE {
            return Err(err(line, col, format!("symbol name {name:?} is reserved")));
        }
        if !is_valid_name(name) {
            return Err(err(line, col, format!("invalid symbol name {name:?}")));
        }
        let arity: usize = arity_text
            .parse()
            .map_err(|_| err(line, col, format!("invalid arity {arity_text:?}")))?;
        if !seen.insert(name.to_string()) {
            return Err(err(line, col, format!("duplicate symbol {name:?}")));
        }
        symbols.push((name.to_string(), arity));
    }
    RankedAlphabet::new(symbols).map_err(|e| err(1, 1, e.to_string()))
}

pub fn parse_dba(text: &str) -> Result<Dba, ParseError> {
    let sections = split_sections(text, &["alphabet", "states", "final", "trans"])?;
    let alphabet = parse_alphabet(&sections[0])?;
    let mut builder = Dba::builder(alphabet.clone());
    for (line, col, tok) in section_tokens(&sections[1]) {
        builder.add_state(tok).map_err(|e| err(line, col, e.to_string()))?;
    }
    for (line, col, tok) in section_tokens(&sections[2]) {
        builder.mark_final(tok).map_err(|e| err(line, col, e.to_string()))?;
    }
    let mut keys: HashSet<String> = HashSet::new();
    for piece in &sections[3] {
        let (line, base, text) = *piece;
        let Some(arrow) = text.find("->") else {
            return Err(err(line, base + 1, "expected `lhs -> state`"));
        };
        let lhs = &text[..arrow];
        let rhs = &text[arrow + 2..];

        let rhs_tokens = tokens(&(line, base + arrow + 2, rhs));
        let (_, _, target) = match rhs_tokens.as_slice() {
            [one] => *one,
            _ => return Err(err(line, base + arrow + 3, "expected a single target state")),
        };

        let lhs_trim = lhs.trim();
        let lhs_col = base + (lhs.len() - lhs.trim_start().len()) + 1;
        if lhs_trim.is_empty() {
            return Err(err(line, lhs_col, "missing left-hand side"));
        }
        let (symbol, args): (&str, Vec<&str>) = match lhs_trim.split_once('(') {
            None => (lhs_trim, Vec::new()),
            Some((sym, rest)) => {
                let Some(inner) = rest.strip_suffix(')') else {
                    return Err(err(line, lhs_col, "unbalanced parentheses"));
                };
                if inner.trim().is_empty() {
                    return Err(err(line, lhs_col, "empty argument list; write nullary symbols bare"));
                }
                (sym.trim(), inner.split(',').map(str::trim).collect())
            }
        };
        let Some(arity) = alphabet.arity(symbol) else {
            return Err(err(line, lhs_col, format!("unknown symbol {symbol:?}")));
        };
        if arity != args.len() {
            return Err(err(
                line,
                lhs_col,
                format!("symbol {symbol:?} has arity {arity}, got {} arguments", args.len()),
            ));
        }
        let key = if args.is_empty() {
            symbol.to_string()
        } else {
            format!("{symbol}({})", args.join(","))
        };
        if !keys.insert(key.clone()) {
            return Err(err(line, lhs_col, format!("duplicate transition for {key}")));
        }
        builder
            .add_transition(symbol, &args, target)
            .map_err(|e| err(line, lhs_col, e.to_string()))?;
    }
    builder.finish().map_err(|e| err(1, 1, e.to_string()))
}

pub fn render_dba(dba: &Dba) -> String {
    let mut out = String::from("alphabet:");
    for (_, name, arity) in dba.alphabet().symbols() {
        out.push_str(&format!(" {name}/{arity}"));
    }
    out.push_str("\nstates:");
    for q in dba.states() {
        if Some(q) != dba.trap() {
            out.push_str(&format!(" {}", dba.state_name(q)));
        }
    }
    out.push_str("\nfinal:");
    for &q in dba.finals() {
        out.push_str(&format!(" {}", dba.state_name(q)));
    }
    out.push_str("\ntrans:\n");
    for tr in dba.transitions() {
        let symbol = dba.alphabet().name(tr.symbol);
        if tr.args.is_empty() {
            out.push_str(&format!("{} -> {}\n", symbol, dba.state_name(tr.target)));
        } else {
            let args: Vec<&str> = tr.args.iter().map(|&a| dba.state_name(a)).collect();
            out.push_str(&format!(
                "{}({}) -> {}\n",
                symbol,
                args.join(","),
                dba.state_name(tr.target)
            ));
        }
    }
    out
}

pub fn parse_dta(text: &str) -> Result<Dta, ParseError> {
    let sections = split_sections(text, &["alphabet", "states", "initial", "trans"])?;
    let alphabet = parse_alphabet(&sections[0])?;
    let mut builder = Dta::builder(alphabet.clone());
    let mut ids: std::collections::HashMap<String, StateId> = std::collections::HashMap::new();
    for (line, col, tok) in section_tokens(&sections[1]) {
        let id = builder.add_state(tok).map_err(|e| err(line, col, e.to_string()))?;
        ids.insert(tok.to_string(), id);
    }
    let initial_tokens = section_tokens(&sections[2]);
    let (line, col, initial) = match initial_tokens.as_slice() {
        [one] => *one,
        [] => return Err(err(1, 1, "missing initial state")),
        [_, (l, c, _), ..] => return Err(err(*l, *c, "expected a single initial state")),
    };
    let Some(&initial_id) = ids.get(initial) else {
        return Err(err(line, col, format!("unknown state {initial:?}")));
    };
    builder.set_initial(initial_id);

    for piece in &sections[3] {
        let toks = tokens(piece);
        if toks.len() < 3 {
            let (line, base, _) = *piece;
            return Err(err(line, base + 1, "expected `state --symbol--> children`"));
        }
        let (line, col, source) = toks[0];
        let Some(&source_id) = ids.get(source) else {
            return Err(err(line, col, format!("unknown state {source:?}")));
        };
        let (sline, scol, arrow) = toks[1];
        let symbol = arrow
            .strip_prefix("--")
            .and_then(|m| m.strip_suffix("-->"))
            .ok_or_else(|| err(sline, scol, format!("expected `--symbol-->`, got {arrow:?}")))?;
        let Some(sym) = alphabet.id(symbol) else {
            return Err(err(sline, scol, format!("unknown symbol {symbol:?}")));
        };
        let arity = alphabet.arity_of(sym);
        let rest = &toks[2..];
        let children: Vec<StateId> = if arity == 0 {
            match rest {
                [(_, _, ".")] => Vec::new(),
                _ => return Err(err(sline, scol, "nullary entries must end with `.`")),
            }
        } else {
            if rest.len() != arity {
                return Err(err(
                    sline,
                    scol,
                    format!("symbol {symbol:?} has arity {arity}, got {} children", rest.len()),
                ));
            }
            let mut out = Vec::with_capacity(arity);
            for (cline, ccol, child) in rest {
                let Some(&id) = ids.get(*child) else {
                    return Err(err(*cline, *ccol, format!("unknown state {child:?}")));
                };
                out.push(id);
            }
            out
        };
        builder
            .add_entry(source_id, sym, children)
            .map_err(|e| err(line, col, e.to_string()))?;
    }
    builder.finish().map_err(|e| err(1, 1, e.to_string()))
}

pub fn render_dta(dta: &Dta) -> String {
    let mut out = String::from("alphabet:");
    for (_, name, arity) in dta.alphabet().symbols() {
        out.push_str(&format!(" {name}/{arity}"));
    }
    out.push_str("\nstates:");
    for q in dta.states() {
        out.push_str(&format!(" {}", dta.state_name(q)));
    }
    out.push_str(&format!("\ninitial: {}\ntrans:\n", dta.state_name(dta.initial())));
    for (q, sym, children) in dta.entries() {
        let symbol = dta.alphabet().name(sym);
        let rhs = if children.is_empty() {
            ".".to_string()
        } else {
            children
                .iter()
                .map(|&c| dta.state_name(c))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!("{} --{}--> {}\n", dta.state_name(q), symbol, rhs));
    }
    out
}
