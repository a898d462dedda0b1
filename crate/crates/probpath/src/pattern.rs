//! Path-constraint patterns: a small textual language describing finite sets
//! of edge-label strings, compiled to deterministic finite acceptors.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! pattern := alt
//! alt     := seq ("|" seq)*
//! seq     := term ("." term)*
//! term    := LABEL repeat?
//! repeat  := "{" INT "," INT "}"
//! LABEL   := [A-Za-z][A-Za-z0-9]* | "r?"
//! ```
//!
//! Repetition bounds are finite with `0 <= m <= n`, so every pattern denotes
//! a finite language and every compiled acceptor is acyclic on its live part.
//! The placeholder label `r?` stands for "a rating label to be chosen later":
//! it may appear at most once per sequence and must be replaced by a concrete
//! rating class (via [`Pattern::expand_rating`]) before compilation. This is
//! how one family text like `simU.r?` yields five concrete patterns, one per
//! rating class.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{LabelId, ProbabilisticGraph};

/// Largest admissible repetition upper bound; keeps acceptor size sane.
pub const MAX_REPEAT: u32 = 200;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("pattern `{0}` contains the rating placeholder `r?`; expand it to a concrete class before compiling")]
    UnexpandedPlaceholder(String),
}

fn syntax(pos: usize, message: impl Into<String>) -> PatternError {
    PatternError::Syntax { pos, message: message.into() }
}

/// Abstract syntax of a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    /// A concrete edge label.
    Literal(String),
    /// The `r?` rating placeholder.
    Placeholder,
    /// `a.b.c`
    Concat(Vec<Ast>),
    /// `a | b`
    Union(Vec<Ast>),
    /// `a{m,n}` with `0 <= m <= n`.
    Repeat(Box<Ast>, u32, u32),
}

impl Ast {
    fn contains_placeholder(&self) -> bool {
        match self {
            Ast::Literal(_) => false,
            Ast::Placeholder => true,
            Ast::Concat(parts) | Ast::Union(parts) => parts.iter().any(Ast::contains_placeholder),
            Ast::Repeat(inner, _, _) => inner.contains_placeholder(),
        }
    }

    fn substitute_placeholder(&self, label: &str) -> Ast {
        match self {
            Ast::Literal(l) => Ast::Literal(l.clone()),
            Ast::Placeholder => Ast::Literal(label.to_string()),
            Ast::Concat(parts) => {
                Ast::Concat(parts.iter().map(|p| p.substitute_placeholder(label)).collect())
            }
            Ast::Union(parts) => {
                Ast::Union(parts.iter().map(|p| p.substitute_placeholder(label)).collect())
            }
            Ast::Repeat(inner, m, n) => {
                Ast::Repeat(Box::new(inner.substitute_placeholder(label)), *m, *n)
            }
        }
    }

    fn collect_alphabet<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Ast::Literal(l) => {
                if !out.contains(&l.as_str()) {
                    out.push(l);
                }
            }
            Ast::Placeholder => {}
            Ast::Concat(parts) | Ast::Union(parts) => {
                for p in parts {
                    p.collect_alphabet(out);
                }
            }
            Ast::Repeat(inner, _, _) => inner.collect_alphabet(out),
        }
    }
}

/// A parsed pattern: AST plus the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    text: String,
    ast: Ast,
}

impl Pattern {
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn ast(&self) -> &Ast {
        &self.ast
    }

    /// Whether this pattern still contains the `r?` placeholder.
    pub fn has_placeholder(&self) -> bool {
        self.ast.contains_placeholder()
    }

    /// Replaces every `r?` with the concrete label `r<class>`.
    pub fn expand_rating(&self, class: u8) -> Pattern {
        let label = format!("r{class}");
        let ast = self.ast.substitute_placeholder(&label);
        let text = self.text.replace("r?", &label);
        Pattern { text, ast }
    }

    /// The distinct labels mentioned by the pattern, in first-appearance order.
    pub fn alphabet(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.ast.collect_alphabet(&mut out);
        out
    }

    /// Compiles the pattern to a deterministic acceptor.
    pub fn compile(&self) -> Result<Acceptor, PatternError> {
        if self.has_placeholder() {
            return Err(PatternError::UnexpandedPlaceholder(self.text.clone()));
        }
        Ok(Acceptor::from_ast(&self.ast))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Parses a pattern text.
pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let ast = p.parse_alt()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(syntax(p.pos, format!("unexpected character `{}`", p.peek_char())));
    }
    Ok(Pattern { text: text.to_string(), ast })
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.bytes.get(self.pos).map(|&b| b as char).unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_alt(&mut self) -> Result<Ast, PatternError> {
        let mut seqs = vec![self.parse_seq()?];
        loop {
            self.skip_ws();
            if self.eat(b'|') {
                self.skip_ws();
                seqs.push(self.parse_seq()?);
            } else {
                break;
            }
        }
        Ok(if seqs.len() == 1 { seqs.pop().unwrap() } else { Ast::Union(seqs) })
    }

    fn parse_seq(&mut self) -> Result<Ast, PatternError> {
        let mut terms = Vec::new();
        let mut placeholder_at: Option<usize> = None;
        loop {
            self.skip_ws();
            let term_pos = self.pos;
            let term = self.parse_term()?;
            if term_contains_placeholder(&term) {
                if placeholder_at.is_some() {
                    return Err(syntax(term_pos, "`r?` may appear at most once per sequence"));
                }
                placeholder_at = Some(term_pos);
            }
            terms.push(term);
            self.skip_ws();
            if !self.eat(b'.') {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Ast::Concat(terms) })
    }

    fn parse_term(&mut self) -> Result<Ast, PatternError> {
        let base = self.parse_label()?;
        self.skip_ws();
        if self.peek() == Some(b'{') {
            let open_pos = self.pos;
            self.pos += 1;
            self.skip_ws();
            let m = self.parse_int()?;
            self.skip_ws();
            if !self.eat(b',') {
                return Err(syntax(self.pos, "expected `,` in repetition bounds"));
            }
            self.skip_ws();
            let n = self.parse_int()?;
            self.skip_ws();
            if !self.eat(b'}') {
                return Err(syntax(self.pos, "expected `}` closing repetition bounds"));
            }
            if m > n {
                return Err(syntax(open_pos, format!("repetition bounds out of order: {{{m},{n}}}")));
            }
            if n > MAX_REPEAT {
                return Err(syntax(open_pos, format!("repetition bound {n} exceeds the limit {MAX_REPEAT}")));
            }
            Ok(Ast::Repeat(Box::new(base), m, n))
        } else {
            Ok(base)
        }
    }

    fn parse_label(&mut self) -> Result<Ast, PatternError> {
        let start = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() => {}
            Some(_) => return Err(syntax(start, format!("expected a label, found `{}`", self.peek_char()))),
            None => return Err(syntax(start, "expected a label, found end of input")),
        }
        self.pos += 1;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let label = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        if label == "r" && self.peek() == Some(b'?') {
            self.pos += 1;
            return Ok(Ast::Placeholder);
        }
        Ok(Ast::Literal(label.to_string()))
    }

    fn parse_int(&mut self) -> Result<u32, PatternError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(syntax(start, format!("expected an integer, found `{}`", self.peek_char())));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii slice")
            .parse()
            .map_err(|_| syntax(start, "integer too large"))
    }
}

fn term_contains_placeholder(term: &Ast) -> bool {
    match term {
        Ast::Placeholder => true,
        Ast::Repeat(inner, _, _) => term_contains_placeholder(inner),
        _ => false,
    }
}

/// Traversal state of an acceptor (one deterministic state).
///
/// The default value is the sink state of any acceptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AcceptorState(u32);

/// Deterministic finite acceptor over edge-label strings.
///
/// Transitions are total: any label outside the pattern's alphabet, and any
/// string leaving the accepted set, lead to a designated sink state. States
/// from which no accepting state is reachable are flagged dead so traversals
/// can prune them.
#[derive(Debug, Clone)]
pub struct Acceptor {
    alphabet: Vec<String>,
    symbol_index: HashMap<String, usize>,
    start: u32,
    sink: u32,
    /// Row-major: `trans[state * alphabet.len() + symbol]`.
    trans: Vec<u32>,
    accepting: Vec<bool>,
    dead: Vec<bool>,
    max_len: u32,
}

/// Epsilon-NFA used transiently during compilation.
struct Nfa {
    /// Per state: epsilon successors and at most one labeled transition.
    eps: Vec<Vec<u32>>,
    step: Vec<Option<(usize, u32)>>,
}

impl Nfa {
    fn new_state(&mut self) -> u32 {
        self.eps.push(Vec::new());
        self.step.push(None);
        (self.eps.len() - 1) as u32
    }

    /// Builds a fragment for `ast`; returns (entry, exit) states.
    fn fragment(&mut self, ast: &Ast, symbols: &HashMap<String, usize>) -> (u32, u32) {
        match ast {
            Ast::Literal(l) => {
                let a = self.new_state();
                let b = self.new_state();
                self.step[a as usize] = Some((symbols[l.as_str()], b));
                (a, b)
            }
            Ast::Placeholder => unreachable!("placeholders are rejected before compilation"),
            Ast::Concat(parts) => {
                let mut entry = None;
                let mut prev_exit: Option<u32> = None;
                for part in parts {
                    let (a, b) = self.fragment(part, symbols);
                    if let Some(pe) = prev_exit {
                        self.eps[pe as usize].push(a);
                    } else {
                        entry = Some(a);
                    }
                    prev_exit = Some(b);
                }
                (entry.expect("concat has parts"), prev_exit.expect("concat has parts"))
            }
            Ast::Union(parts) => {
                let entry = self.new_state();
                let exit = self.new_state();
                for part in parts {
                    let (a, b) = self.fragment(part, symbols);
                    self.eps[entry as usize].push(a);
                    self.eps[b as usize].push(exit);
                }
                (entry, exit)
            }
            Ast::Repeat(inner, m, n) => {
                let entry = self.new_state();
                let exit = self.new_state();
                if *m == 0 {
                    self.eps[entry as usize].push(exit);
                }
                let mut tail = entry;
                for count in 1..=*n {
                    let (a, b) = self.fragment(inner, symbols);
                    self.eps[tail as usize].push(a);
                    if count >= *m {
                        self.eps[b as usize].push(exit);
                    }
                    tail = b;
                }
                (entry, exit)
            }
        }
    }
}

impl Acceptor {
    fn from_ast(ast: &Ast) -> Acceptor {
        let mut alphabet = Vec::new();
        ast.collect_alphabet(&mut alphabet);
        let alphabet: Vec<String> = alphabet.into_iter().map(str::to_string).collect();
        let symbol_index: HashMap<String, usize> =
            alphabet.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let nsym = alphabet.len();

        let mut nfa = Nfa { eps: Vec::new(), step: Vec::new() };
        let (nfa_start, nfa_accept) = nfa.fragment(ast, &symbol_index);

        // Subset construction over epsilon closures. The empty subset is the
        // sink, pre-allocated as state 0 with all transitions to itself.
        let closure = |seed: Vec<u32>| -> Vec<u32> {
            let mut seen: Vec<u32> = seed;
            let mut stack = seen.clone();
            while let Some(s) = stack.pop() {
                for &t in &nfa.eps[s as usize] {
                    if !seen.contains(&t) {
                        seen.push(t);
                        stack.push(t);
                    }
                }
            }
            seen.sort_unstable();
            seen
        };

        let mut subset_ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<u32>> = Vec::new();
        subset_ids.insert(Vec::new(), 0);
        subsets.push(Vec::new());
        let start_subset = closure(vec![nfa_start]);
        let start = match subset_ids.get(&start_subset) {
            Some(&id) => id,
            None => {
                subset_ids.insert(start_subset.clone(), 1);
                subsets.push(start_subset);
                1
            }
        };

        let mut trans: Vec<u32> = vec![0; subsets.len() * nsym];
        let mut work = vec![start];
        while let Some(state) = work.pop() {
            for sym in 0..nsym {
                let moved: Vec<u32> = subsets[state as usize]
                    .iter()
                    .filter_map(|&s| match nfa.step[s as usize] {
                        Some((sa, t)) if sa == sym => Some(t),
                        _ => None,
                    })
                    .collect();
                let next_subset = closure(moved);
                let next = *subset_ids.entry(next_subset.clone()).or_insert_with(|| {
                    subsets.push(next_subset);
                    trans.resize(subsets.len() * nsym, 0);
                    let id = (subsets.len() - 1) as u32;
                    work.push(id);
                    id
                });
                trans[state as usize * nsym + sym] = next;
            }
        }
        // An alphabet can be empty only for degenerate patterns like `a{0,0}`;
        // then no transition rows exist and only subset membership matters.
        let nstates = subsets.len();
        if nsym > 0 {
            debug_assert_eq!(trans.len(), nstates * nsym);
        } else {
            trans = Vec::new();
        }

        let accepting: Vec<bool> =
            subsets.iter().map(|s| s.binary_search(&nfa_accept).is_ok()).collect();

        // Dead = cannot reach an accepting state. Reverse reachability.
        let mut reaches: Vec<bool> = accepting.clone();
        loop {
            let mut changed = false;
            for s in 0..nstates {
                if reaches[s] {
                    continue;
                }
                for sym in 0..nsym {
                    if reaches[trans[s * nsym + sym] as usize] {
                        reaches[s] = true;
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let dead: Vec<bool> = reaches.iter().map(|r| !r).collect();

        // Longest accepted string: longest live path from the start state.
        // The live part of the automaton is acyclic because the language is
        // finite, so a memoized DFS terminates.
        let mut longest: Vec<Option<u32>> = vec![None; nstates];
        fn walk(
            s: usize,
            nsym: usize,
            trans: &[u32],
            accepting: &[bool],
            dead: &[bool],
            longest: &mut [Option<u32>],
        ) -> u32 {
            if let Some(v) = longest[s] {
                return v;
            }
            let mut best = 0;
            for sym in 0..nsym {
                let t = trans[s * nsym + sym] as usize;
                if !dead[t] {
                    best = best.max(1 + walk(t, nsym, trans, accepting, dead, longest));
                }
            }
            longest[s] = Some(best);
            best
        }
        let max_len = if dead[start as usize] {
            0
        } else {
            walk(start as usize, nsym, &trans, &accepting, &dead, &mut longest)
        };

        Acceptor {
            alphabet,
            symbol_index,
            start,
            sink: 0,
            trans,
            accepting,
            dead,
            max_len,
        }
    }

    pub fn start(&self) -> AcceptorState {
        AcceptorState(self.start)
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// Length of the longest accepted string; bounds any product traversal.
    pub fn max_accepted_len(&self) -> usize {
        self.max_len as usize
    }

    /// Follows one labeled transition; unknown labels go to the sink.
    pub fn step_label(&self, state: AcceptorState, label: &str) -> AcceptorState {
        match self.symbol_index.get(label) {
            Some(&sym) => AcceptorState(self.trans[state.0 as usize * self.alphabet.len() + sym]),
            None => AcceptorState(self.sink),
        }
    }

    pub fn is_accepting(&self, state: AcceptorState) -> bool {
        self.accepting[state.0 as usize]
    }

    /// True when no accepting state is reachable from `state`.
    pub fn is_dead(&self, state: AcceptorState) -> bool {
        self.dead[state.0 as usize]
    }

    /// Runs the acceptor over a whole label string.
    pub fn accepts<'a, I>(&self, labels: I) -> bool
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut state = self.start();
        for label in labels {
            state = self.step_label(state, label);
            if self.is_dead(state) {
                return false;
            }
        }
        self.is_accepting(state)
    }

    /// Re-keys the transition table by a graph's label ids for traversal.
    pub fn bind(&self, graph: &ProbabilisticGraph) -> BoundAcceptor {
        let nstates = self.state_count();
        let stride = graph.label_count();
        let mut trans = vec![self.sink; nstates * stride];
        for (sym, label) in self.alphabet.iter().enumerate() {
            if let Some(lid) = graph.label_id(label) {
                for s in 0..nstates {
                    trans[s * stride + lid.index()] =
                        self.trans[s * self.alphabet.len() + sym];
                }
            }
        }
        BoundAcceptor {
            start: self.start,
            stride,
            trans,
            accepting: self.accepting.clone(),
            dead: self.dead.clone(),
            max_len: self.max_len,
        }
    }
}

/// An [`Acceptor`] whose transitions are indexed by one graph's label ids.
#[derive(Debug, Clone)]
pub struct BoundAcceptor {
    start: u32,
    stride: usize,
    trans: Vec<u32>,
    accepting: Vec<bool>,
    dead: Vec<bool>,
    max_len: u32,
}

impl BoundAcceptor {
    pub fn start(&self) -> AcceptorState {
        AcceptorState(self.start)
    }

    #[inline]
    pub fn step(&self, state: AcceptorState, label: LabelId) -> AcceptorState {
        AcceptorState(self.trans[state.0 as usize * self.stride + label.index()])
    }

    #[inline]
    pub fn is_accepting(&self, state: AcceptorState) -> bool {
        self.accepting[state.0 as usize]
    }

    #[inline]
    pub fn is_dead(&self, state: AcceptorState) -> bool {
        self.dead[state.0 as usize]
    }

    pub fn max_accepted_len(&self) -> usize {
        self.max_len as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn accepts(pattern: &str, labels: &[&str]) -> bool {
        parse_pattern(pattern).unwrap().compile().unwrap().accepts(labels.iter().copied())
    }

    #[test]
    fn parses_concatenation() {
        let p = parse_pattern("simU.r3").unwrap();
        assert_eq!(
            p.ast(),
            &Ast::Concat(vec![Ast::Literal("simU".into()), Ast::Literal("r3".into())])
        );
    }

    #[test]
    fn parses_repetition() {
        let p = parse_pattern("r2.simI{1,2}").unwrap();
        assert_eq!(
            p.ast(),
            &Ast::Concat(vec![
                Ast::Literal("r2".into()),
                Ast::Repeat(Box::new(Ast::Literal("simI".into())), 1, 2),
            ])
        );
    }

    #[test]
    fn parses_union_and_ignores_whitespace() {
        let p = parse_pattern(" simU{1,2}.r4 | r4.simI{1,2} ").unwrap();
        match p.ast() {
            Ast::Union(parts) => assert_eq!(parts.len(), 2),
            other => panic!("expected union, got {other:?}"),
        }
        assert_eq!(p.ast(), parse_pattern("simU{1,2}.r4|r4.simI{1,2}").unwrap().ast());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        for (text, bad_pos) in [
            ("", 0),
            ("a..b", 2),
            ("a{1", 3),
            ("a{1,}", 4),
            ("|a", 0),
            ("a*", 1),
            ("a{2,1}", 1),
            ("3a", 0),
            ("a{1,9999}", 1),
        ] {
            match parse_pattern(text) {
                Err(PatternError::Syntax { pos, .. }) => {
                    assert_eq!(pos, bad_pos, "pattern {text:?}")
                }
                other => panic!("pattern {text:?}: expected syntax error, got {other:?}"),
            }
        }
    }

    #[test]
    fn placeholder_once_per_sequence() {
        assert!(parse_pattern("r?.simI | simU.r?").is_ok());
        assert!(matches!(
            parse_pattern("r?.simU.r?"),
            Err(PatternError::Syntax { .. })
        ));
    }

    #[test]
    fn placeholder_expansion() {
        let family = parse_pattern("simU.r?").unwrap();
        assert!(family.has_placeholder());
        assert!(family.compile().is_err());
        let concrete = family.expand_rating(3);
        assert_eq!(concrete.ast(), parse_pattern("simU.r3").unwrap().ast());
        assert_eq!(concrete.text(), "simU.r3");
        assert!(!concrete.has_placeholder());
    }

    #[test]
    fn placeholder_is_exactly_r_question() {
        // `ra?` is not a placeholder; the stray `?` is a syntax error.
        assert!(parse_pattern("ra?").is_err());
        // A label merely starting with r parses as a plain literal.
        assert_eq!(parse_pattern("rating").unwrap().ast(), &Ast::Literal("rating".into()));
    }

    #[test]
    fn single_literal_acceptance() {
        assert!(accepts("a", &["a"]));
        assert!(!accepts("a", &[]));
        assert!(!accepts("a", &["a", "a"]));
        assert!(!accepts("a", &["b"]));
    }

    #[test]
    fn bounded_repetition_acceptance() {
        assert!(accepts("a{1,2}", &["a"]));
        assert!(accepts("a{1,2}", &["a", "a"]));
        assert!(!accepts("a{1,2}", &["a", "a", "a"]));
        assert!(!accepts("a{1,2}", &[]));
        assert!(accepts("a{0,2}", &[]));
        assert!(accepts("a{2,2}", &["a", "a"]));
        assert!(!accepts("a{2,2}", &["a"]));
    }

    #[test]
    fn stepping_follows_transitions() {
        let acc = parse_pattern("simU.r3").unwrap().compile().unwrap();
        let s1 = acc.step_label(acc.start(), "simU");
        assert!(!acc.is_dead(s1) && !acc.is_accepting(s1));
        let s2 = acc.step_label(s1, "r3");
        assert!(acc.is_accepting(s2));
        // Wrong first label → dead immediately.
        let dead = acc.step_label(acc.start(), "r3");
        assert!(acc.is_dead(dead));
        // Unknown label → dead.
        assert!(acc.is_dead(acc.step_label(acc.start(), "zzz")));
    }

    #[test]
    fn max_accepted_len_matches_expansion() {
        for (pattern, len) in [
            ("simU.r3", 2),
            ("r2.simI{1,2}", 3),
            ("simU{1,2}.r4 | r4.simI{1,2}", 3),
            ("simU{1,4}.r1 | r1.simI{1,4}", 5),
            ("a{0,0}", 0),
            ("a{3,7}", 7),
        ] {
            let acc = parse_pattern(pattern).unwrap().compile().unwrap();
            assert_eq!(acc.max_accepted_len(), len, "pattern {pattern}");
        }
    }

    #[test]
    fn union_language_expansion() {
        // simU{1,2}.r4 | r4.simI{1,2} over alphabet {simU, r4, simI}:
        // exactly these four strings.
        let acc = parse_pattern("simU{1,2}.r4 | r4.simI{1,2}").unwrap().compile().unwrap();
        let expected: Vec<Vec<&str>> = vec![
            vec!["simU", "r4"],
            vec!["simU", "simU", "r4"],
            vec!["r4", "simI"],
            vec!["r4", "simI", "simI"],
        ];
        let alpha = ["simU", "r4", "simI"];
        let mut accepted = Vec::new();
        // Enumerate all strings of length <= 3.
        for len in 0..=3usize {
            let mut idx = vec![0usize; len];
            loop {
                let s: Vec<&str> = idx.iter().map(|&i| alpha[i]).collect();
                if acc.accepts(s.iter().copied()) {
                    accepted.push(s.clone());
                }
                // Odometer increment.
                let mut k = 0;
                loop {
                    if k == len {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < alpha.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == len {
                    break;
                }
            }
        }
        let mut expected = expected;
        expected.sort();
        accepted.sort();
        assert_eq!(accepted, expected);
    }

    #[test]
    fn bound_acceptor_agrees_with_string_stepping() {
        let mut g = ProbabilisticGraph::new();
        g.add_node("u1", "user").unwrap();
        g.add_node("u2", "user").unwrap();
        g.add_node("i1", "item").unwrap();
        g.add_edge("u1", "u2", "simU", 0.5).unwrap();
        g.add_edge("u2", "i1", "r3", 1.0).unwrap();
        let acc = parse_pattern("simU.r3").unwrap().compile().unwrap();
        let bound = acc.bind(&g);
        let simu = g.label_id("simU").unwrap();
        let r3 = g.label_id("r3").unwrap();
        let s1 = bound.step(bound.start(), simu);
        let s2 = bound.step(s1, r3);
        assert!(bound.is_accepting(s2));
        assert_eq!(bound.max_accepted_len(), 2);
        // The graph's `user`/`item` node labels are not in the pattern
        // alphabet: stepping on them drops to the dead sink.
        let user = g.label_id("user").unwrap();
        assert!(bound.is_dead(bound.step(bound.start(), user)));
    }

    #[test]
    fn dead_states_cannot_recover() {
        let acc = parse_pattern("a.b").unwrap().compile().unwrap();
        let mut s = acc.start();
        s = acc.step_label(s, "b"); // wrong order
        assert!(acc.is_dead(s));
        for l in ["a", "b"] {
            assert!(acc.is_dead(acc.step_label(s, l)));
        }
    }
}
