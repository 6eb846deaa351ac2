//! Single-tape deterministic Turing machines, their text format, and bounded
//! execution.

use std::collections::HashMap;
use std::fmt;

use crate::error::{ParseError, SemanticError, TmError};

/// Index of a tape symbol in the machine alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(pub u16);

/// Index of a control state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: StateId,
    pub write: Sym,
    pub dir: Move,
}

/// A validated machine. The transition table is indexed by
/// `state * |alphabet| + symbol`; `None` entries halt in place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    alphabet: Vec<String>,
    states: Vec<String>,
    blank: Sym,
    start: StateId,
    halt: StateId,
    delta: Vec<Option<Transition>>,
}

impl TuringMachine {
    /// Builds a machine from already-resolved parts, checking every invariant.
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        blank: Sym,
        start: StateId,
        halt: StateId,
        entries: impl IntoIterator<Item = (StateId, Sym, Transition)>,
    ) -> Result<Self, SemanticError> {
        if alphabet.is_empty() {
            return Err(SemanticError::Empty("alphabet"));
        }
        if states.is_empty() {
            return Err(SemanticError::Empty("states"));
        }
        if alphabet.len() > u16::MAX as usize || states.len() > u16::MAX as usize {
            return Err(SemanticError::TooLarge);
        }
        let n_sym = alphabet.len();
        let n_state = states.len();
        let sym_ok = |s: Sym| (s.0 as usize) < n_sym;
        let state_ok = |q: StateId| (q.0 as usize) < n_state;
        if !sym_ok(blank) {
            return Err(SemanticError::UnknownSymbol(format!("#{}", blank.0)));
        }
        for q in [start, halt] {
            if !state_ok(q) {
                return Err(SemanticError::UnknownState(format!("#{}", q.0)));
            }
        }
        let mut delta = vec![None; n_sym * n_state];
        for (q, s, t) in entries {
            if !state_ok(q) || !state_ok(t.next) {
                return Err(SemanticError::UnknownState(format!("#{}", q.0.max(t.next.0))));
            }
            if !sym_ok(s) || !sym_ok(t.write) {
                return Err(SemanticError::UnknownSymbol(format!("#{}", s.0.max(t.write.0))));
            }
            if q == halt {
                return Err(SemanticError::DeltaFromHalt(states[q.0 as usize].clone()));
            }
            let slot = &mut delta[q.0 as usize * n_sym + s.0 as usize];
            if slot.is_some() {
                return Err(SemanticError::DuplicateDelta(
                    states[q.0 as usize].clone(),
                    alphabet[s.0 as usize].clone(),
                ));
            }
            *slot = Some(t);
        }
        Ok(Self { alphabet, states, blank, start, halt, delta })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn blank(&self) -> Sym {
        self.blank
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn halt(&self) -> StateId {
        self.halt
    }

    pub fn symbol_name(&self, s: Sym) -> &str {
        &self.alphabet[s.0 as usize]
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0 as usize]
    }

    pub fn symbol(&self, name: &str) -> Option<Sym> {
        self.alphabet.iter().position(|a| a == name).map(|i| Sym(i as u16))
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|a| a == name).map(|i| StateId(i as u16))
    }

    pub fn delta(&self, q: StateId, s: Sym) -> Option<Transition> {
        self.delta[q.0 as usize * self.alphabet.len() + s.0 as usize]
    }

    /// Number of defined transitions.
    pub fn delta_len(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }

    /// True when a configuration in state `q` reading `s` cannot move: either
    /// `q` is the halting state or no transition is defined.
    pub fn is_halting(&self, q: StateId, s: Sym) -> bool {
        q == self.halt || self.delta(q, s).is_none()
    }

    /// Transitions reachable from the start state by a graph search over the
    /// table (any symbol may be read).
    pub fn reachable_delta_len(&self) -> usize {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.start];
        let mut count = 0;
        seen[self.start.0 as usize] = true;
        while let Some(q) = stack.pop() {
            if q == self.halt {
                continue;
            }
            for s in 0..self.alphabet.len() {
                if let Some(t) = self.delta(q, Sym(s as u16)) {
                    count += 1;
                    if !seen[t.next.0 as usize] {
                        seen[t.next.0 as usize] = true;
                        stack.push(t.next);
                    }
                }
            }
        }
        count
    }

    /// Blank tape with the head in the start state.
    pub fn initial_config(&self) -> TapeConfig {
        TapeConfig::blank(self.blank, self.start)
    }

    /// Tape holding `input` from cell 0 rightwards, head in the start state.
    pub fn config_with_input(&self, input: &[Sym]) -> TapeConfig {
        let mut right = input.to_vec();
        let head = if right.is_empty() { self.blank } else { right.remove(0) };
        TapeConfig::new(Vec::new(), head, right, self.start, self.blank)
    }

    /// Parses the line-oriented machine description format.
    pub fn parse(text: &str) -> Result<Self, TmError> {
        parse_tm(text)
    }

    /// Renders the machine back into the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("alphabet: {}\n", self.alphabet.join(" ")));
        out.push_str(&format!("blank: {}\n", self.symbol_name(self.blank)));
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        out.push_str(&format!("start: {}\n", self.state_name(self.start)));
        out.push_str(&format!("halt: {}\n", self.state_name(self.halt)));
        for q in 0..self.states.len() {
            for s in 0..self.alphabet.len() {
                let (q, s) = (StateId(q as u16), Sym(s as u16));
                if let Some(t) = self.delta(q, s) {
                    out.push_str(&format!(
                        "delta: {} {} -> {} {} {}\n",
                        self.state_name(q),
                        self.symbol_name(s),
                        self.state_name(t.next),
                        self.symbol_name(t.write),
                        match t.dir {
                            Move::Left => "L",
                            Move::Right => "R",
                        }
                    ));
                }
            }
        }
        out
    }
}

/// Tape contents plus control state. `left` runs from cell -1 outwards and
/// `right` from cell 1 outwards; the head always reads cell 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TapeConfig {
    pub left: Vec<Sym>,
    pub head: Sym,
    pub right: Vec<Sym>,
    pub state: StateId,
}

impl TapeConfig {
    pub fn new(left: Vec<Sym>, head: Sym, right: Vec<Sym>, state: StateId, blank: Sym) -> Self {
        let mut c = Self { left, head, right, state };
        c.normalize(blank);
        c
    }

    pub fn blank(blank: Sym, state: StateId) -> Self {
        Self { left: Vec::new(), head: blank, right: Vec::new(), state }
    }

    /// Strips trailing blanks from both words.
    pub fn normalize(&mut self, blank: Sym) {
        strip_trailing(&mut self.left, blank);
        strip_trailing(&mut self.right, blank);
    }

    pub fn is_canonical(&self, blank: Sym) -> bool {
        self.left.last() != Some(&blank) && self.right.last() != Some(&blank)
    }

    /// Symbol at a tape cell relative to the head.
    pub fn cell(&self, pos: i64, blank: Sym) -> Sym {
        match pos {
            0 => self.head,
            p if p > 0 => self.right.get(p as usize - 1).copied().unwrap_or(blank),
            p => self.left.get((-p) as usize - 1).copied().unwrap_or(blank),
        }
    }

    /// Cells `-k..=k` around the head.
    pub fn window(&self, k: usize, blank: Sym) -> Vec<Sym> {
        let k = k as i64;
        (-k..=k).map(|p| self.cell(p, blank)).collect()
    }

    /// Number of cells holding `s` (finitely many unless `s` is blank).
    pub fn count(&self, s: Sym) -> usize {
        self.left.iter().chain(std::iter::once(&self.head)).chain(&self.right).filter(|&&c| c == s).count()
    }
}

fn strip_trailing(word: &mut Vec<Sym>, blank: Sym) {
    while word.last() == Some(&blank) {
        word.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Next(TapeConfig),
    Halted(TapeConfig),
}

impl Step {
    pub fn config(&self) -> &TapeConfig {
        match self {
            Step::Next(c) | Step::Halted(c) => c,
        }
    }

    pub fn into_config(self) -> TapeConfig {
        match self {
            Step::Next(c) | Step::Halted(c) => c,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, Step::Halted(_))
    }
}

/// One transition. A configuration in the halting state, or one with no
/// matching transition, is returned unchanged as `Halted`.
pub fn tm_step(tm: &TuringMachine, c: &TapeConfig) -> Step {
    if c.state == tm.halt {
        return Step::Halted(c.clone());
    }
    let Some(t) = tm.delta(c.state, c.head) else {
        return Step::Halted(c.clone());
    };
    let blank = tm.blank;
    let mut next = c.clone();
    next.state = t.next;
    match t.dir {
        Move::Right => {
            next.left.insert(0, t.write);
            next.head = if next.right.is_empty() { blank } else { next.right.remove(0) };
        }
        Move::Left => {
            next.right.insert(0, t.write);
            next.head = if next.left.is_empty() { blank } else { next.left.remove(0) };
        }
    }
    next.normalize(blank);
    Step::Next(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunVerdict {
    /// The configuration after this many steps is halted.
    HaltedAt(usize),
    /// No halt within the budget.
    StillRunning(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// Configurations after 0, 1, ..., n steps.
    pub configs: Vec<TapeConfig>,
    pub verdict: RunVerdict,
}

impl Trace {
    pub fn last(&self) -> &TapeConfig {
        self.configs.last().expect("trace holds the initial configuration")
    }
}

/// Runs at most `n_max` transitions, recording every configuration visited.
pub fn run_bounded(tm: &TuringMachine, c: &TapeConfig, n_max: usize) -> Trace {
    let mut configs = vec![c.clone()];
    for n in 0..n_max {
        match tm_step(tm, &configs[n]) {
            Step::Halted(_) => return Trace { configs, verdict: RunVerdict::HaltedAt(n) },
            Step::Next(next) => configs.push(next),
        }
    }
    let last = &configs[n_max];
    let verdict = if tm.is_halting(last.state, last.head) {
        RunVerdict::HaltedAt(n_max)
    } else {
        RunVerdict::StillRunning(n_max)
    };
    Trace { configs, verdict }
}

/// Parses the machine description format. Lines are `key: value`; `#`
/// starts a comment.
pub fn parse_tm(text: &str) -> Result<TuringMachine, TmError> {
    let mut alphabet: Option<(Vec<String>, usize)> = None;
    let mut states: Option<(Vec<String>, usize)> = None;
    let mut blank: Option<(String, usize)> = None;
    let mut start: Option<(String, usize)> = None;
    let mut halt: Option<(String, usize)> = None;
    let mut deltas: Vec<([String; 5], usize)> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(colon) = line.find(':') else {
            let col = line.len() - line.trim_start().len() + 1;
            return Err(ParseError::new(line_no, col, "expected `key: value`").into());
        };
        let key = line[..colon].trim();
        let value = &line[colon + 1..];
        let tokens: Vec<String> = value.split_whitespace().map(str::to_owned).collect();
        let value_col = colon + 2 + (value.len() - value.trim_start().len());
        let dup = |what: &str| Err(ParseError::new(line_no, 1, format!("duplicate `{what}` declaration")));
        let single = |tokens: &[String]| -> Result<String, ParseError> {
            match tokens {
                [one] => Ok(one.clone()),
                _ => Err(ParseError::new(line_no, value_col, format!("`{key}` takes exactly one name"))),
            }
        };
        match key {
            "alphabet" | "states" => {
                if tokens.is_empty() {
                    return Err(ParseError::new(line_no, value_col, format!("`{key}` needs at least one name")).into());
                }
                let slot = if key == "alphabet" { &mut alphabet } else { &mut states };
                if slot.is_some() {
                    return dup(key).map_err(Into::into);
                }
                *slot = Some((tokens, line_no));
            }
            "blank" | "start" | "halt" => {
                let name = single(&tokens)?;
                let slot = match key {
                    "blank" => &mut blank,
                    "start" => &mut start,
                    _ => &mut halt,
                };
                if slot.is_some() {
                    return dup(key).map_err(Into::into);
                }
                *slot = Some((name, line_no));
            }
            "delta" => {
                let parts: Vec<&str> = value.split("->").collect();
                if parts.len() != 2 {
                    return Err(
                        ParseError::new(line_no, value_col, "expected `<state> <sym> -> <state> <sym> <L|R>`").into()
                    );
                }
                let lhs: Vec<&str> = parts[0].split_whitespace().collect();
                let rhs: Vec<&str> = parts[1].split_whitespace().collect();
                if lhs.len() != 2 {
                    return Err(ParseError::new(line_no, value_col, "left side must be `<state> <sym>`").into());
                }
                if rhs.len() != 3 {
                    let col = colon + 1 + parts[0].len() + 3;
                    return Err(ParseError::new(line_no, col, "right side must be `<state> <sym> <L|R>`").into());
                }
                if rhs[2] != "L" && rhs[2] != "R" {
                    let col = line.rfind(rhs[2]).map_or(1, |c| c + 1);
                    return Err(
                        ParseError::new(line_no, col, format!("direction must be L or R, found `{}`", rhs[2])).into()
                    );
                }
                deltas.push(([lhs[0], lhs[1], rhs[0], rhs[1], rhs[2]].map(str::to_owned), line_no));
            }
            other => {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(ParseError::new(line_no, col, format!("unknown declaration `{other}`")).into());
            }
        }
    }

    let missing = |what: &'static str| TmError::Semantic(SemanticError::Missing(what));
    let (alphabet, _) = alphabet.ok_or_else(|| missing("alphabet"))?;
    let (states, _) = states.ok_or_else(|| missing("states"))?;
    let (blank, _) = blank.ok_or_else(|| missing("blank"))?;
    let (start, _) = start.ok_or_else(|| missing("start"))?;
    let (halt, _) = halt.ok_or_else(|| missing("halt"))?;

    let sym_index: HashMap<&str, Sym> =
        index_names(&alphabet, "symbol")?.into_iter().map(|(k, v)| (k, Sym(v))).collect();
    let state_index: HashMap<&str, StateId> =
        index_names(&states, "state")?.into_iter().map(|(k, v)| (k, StateId(v))).collect();
    let sym = |name: &str| sym_index.get(name).copied().ok_or_else(|| SemanticError::UnknownSymbol(name.to_owned()));
    let state = |name: &str| state_index.get(name).copied().ok_or_else(|| SemanticError::UnknownState(name.to_owned()));

    let mut entries = Vec::with_capacity(deltas.len());
    for ([q, s, q2, s2, d], line) in &deltas {
        let at = |e: SemanticError| TmError::SemanticAt { line: *line, source: e };
        let dir = if d == "L" { Move::Left } else { Move::Right };
        let entry = (
            state(q).map_err(at)?,
            sym(s).map_err(at)?,
            Transition { next: state(q2).map_err(at)?, write: sym(s2).map_err(at)?, dir },
        );
        if entry.0 == state(&halt).map_err(TmError::Semantic)? {
            return Err(at(SemanticError::DeltaFromHalt(q.clone())));
        }
        if entries.iter().any(|(q0, s0, _)| (*q0, *s0) == (entry.0, entry.1)) {
            return Err(at(SemanticError::DuplicateDelta(q.clone(), s.clone())));
        }
        entries.push(entry);
    }
    let blank = sym(&blank)?;
    let start = state(&start)?;
    let halt = state(&halt)?;
    Ok(TuringMachine::new(alphabet, states, blank, start, halt, entries)?)
}

fn index_names<'a>(names: &'a [String], what: &'static str) -> Result<HashMap<&'a str, u16>, SemanticError> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.as_str(), i as u16).is_some() {
            return Err(SemanticError::DuplicateName(what, n.clone()));
        }
    }
    Ok(map)
}

impl fmt::Display for TapeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.left.iter().rev() {
            write!(f, "{} ", s.0)?;
        }
        write!(f, "[q{}:{}]", self.state.0, self.head.0)?;
        for s in &self.right {
            write!(f, " {}", s.0)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn bb2() -> TuringMachine {
        corpus::bb2()
    }

    #[test]
    fn bb2_parses_with_two_working_states() {
        let tm = bb2();
        assert_eq!(tm.states().len(), 3);
        let working = tm.states().iter().filter(|s| s.as_str() != "H").count();
        assert_eq!(working, 2);
        assert_eq!(tm.delta_len(), 4);
        assert_eq!(tm.alphabet(), ["0", "1"]);
    }

    #[test]
    fn halt_start_machine_is_legal() {
        let tm = parse_tm("alphabet: 0 1\nblank: 0\nstates: H\nstart: H\nhalt: H\n").unwrap();
        assert_eq!(tm.start(), tm.halt());
        assert_eq!(tm.reachable_delta_len(), 0);
    }

    #[test]
    fn delta_from_halt_is_rejected() {
        let text = "alphabet: 0 1\nblank: 0\nstates: A H\nstart: A\nhalt: H\ndelta: H 0 -> A 1 R\n";
        match parse_tm(text) {
            Err(TmError::SemanticAt { line: 6, source: SemanticError::DeltaFromHalt(_) }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let base = "alphabet: 0 1\nblank: 0\nstates: A H\nstart: A\nhalt: H\n";
        let unknown_state = format!("{base}delta: A 0 -> Z 1 R\n");
        assert!(matches!(
            parse_tm(&unknown_state),
            Err(TmError::SemanticAt { source: SemanticError::UnknownState(_), .. })
        ));
        let unknown_sym = format!("{base}delta: A 2 -> A 1 R\n");
        assert!(matches!(
            parse_tm(&unknown_sym),
            Err(TmError::SemanticAt { source: SemanticError::UnknownSymbol(_), .. })
        ));
        let dup = format!("{base}delta: A 0 -> A 1 R\ndelta: A 0 -> H 1 L\n");
        assert!(matches!(
            parse_tm(&dup),
            Err(TmError::SemanticAt { line: 7, source: SemanticError::DuplicateDelta(..) })
        ));
        let bad_blank = "alphabet: 0 1\nblank: 2\nstates: A H\nstart: A\nhalt: H\n";
        assert!(matches!(parse_tm(bad_blank), Err(TmError::Semantic(SemanticError::UnknownSymbol(_)))));
        assert!(matches!(
            parse_tm("alphabet: 0\nblank: 0\nstates: A\nstart: A\n"),
            Err(TmError::Semantic(SemanticError::Missing("halt")))
        ));
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_tm("alphabet: 0 1\n  bogus line\n").unwrap_err();
        match err {
            TmError::Parse(p) => {
                assert_eq!((p.line, p.column), (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_tm("alphabet: 0 1\ndelta: A 0 -> B 1 X\n").unwrap_err();
        match err {
            TmError::Parse(p) => assert_eq!((p.line, p.column), (2, 19)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_tm("blank: 0 1\n"), Err(TmError::Parse(_))));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# machine\nalphabet: 0 1 # symbols\n\nblank: 0\nstates: A H\nstart: A\nhalt: H\n";
        assert!(parse_tm(text).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let tm = bb2();
        assert_eq!(parse_tm(&tm.to_text()).unwrap(), tm);
    }

    #[test]
    fn bb2_first_step() {
        let tm = bb2();
        let one = tm.symbol("1").unwrap();
        let Step::Next(c1) = tm_step(&tm, &tm.initial_config()) else { panic!("halted") };
        assert_eq!(c1.state, tm.state("B").unwrap());
        // old cell 0 now sits at cell -1 since the head moved right
        assert_eq!(c1.cell(-1, tm.blank()), one);
        assert_eq!(c1.head, tm.blank());
        assert!(c1.right.is_empty());
    }

    #[test]
    fn halt_is_absorbing_and_missing_delta_halts() {
        let tm = bb2();
        let c = TapeConfig::blank(tm.blank(), tm.halt());
        assert_eq!(tm_step(&tm, &c), Step::Halted(c.clone()));
        let partial =
            parse_tm("alphabet: 0 1\nblank: 0\nstates: A H\nstart: A\nhalt: H\ndelta: A 0 -> A 1 R\n").unwrap();
        let c = TapeConfig::new(vec![], Sym(1), vec![], partial.start(), partial.blank());
        assert_eq!(tm_step(&partial, &c), Step::Halted(c.clone()));
    }

    #[test]
    fn bb2_halts_after_six_steps_with_four_ones() {
        let tm = bb2();
        let trace = run_bounded(&tm, &tm.initial_config(), 100);
        assert_eq!(trace.verdict, RunVerdict::HaltedAt(6));
        assert_eq!(trace.configs.len(), 7);
        assert_eq!(trace.last().count(tm.symbol("1").unwrap()), 4);
        assert_eq!(trace.last().state, tm.halt());
    }

    #[test]
    fn budget_edge_cases() {
        let hs = corpus::halt_start();
        assert_eq!(run_bounded(&hs, &hs.initial_config(), 0).verdict, RunVerdict::HaltedAt(0));
        let lp = corpus::loop_right();
        let trace = run_bounded(&lp, &lp.initial_config(), 1000);
        assert_eq!(trace.verdict, RunVerdict::StillRunning(1000));
        assert_eq!(trace.configs.len(), 1001);
        let bb = bb2();
        assert_eq!(run_bounded(&bb, &bb.initial_config(), 6).verdict, RunVerdict::HaltedAt(6));
        assert_eq!(run_bounded(&bb, &bb.initial_config(), 5).verdict, RunVerdict::StillRunning(5));
    }

    #[test]
    fn window_reads_blank_beyond_words() {
        let c = TapeConfig::new(vec![Sym(1)], Sym(1), vec![Sym(0), Sym(1)], StateId(0), Sym(0));
        assert_eq!(c.window(3, Sym(0)), [0, 0, 1, 1, 0, 1, 0].map(Sym));
    }
}
