//! Generalized shifts on bi-infinite sequences and the compiler from Turing
//! machines to generalized shifts.
//!
//! A generalized shift reads the letters in a fixed window around the dot,
//! rewrites them, and then moves the dot by at most one cell. Compiling a
//! machine uses the composite alphabet `Γ ∪ (Q × Γ)`: the head cell carries
//! the pair (state, symbol) and every other cell carries a plain tape symbol.

use std::fmt::Write as _;

use crate::tm::{Move, StateId, Sym, TapeConfig, TuringMachine};

/// Index into a shift alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u16);

/// Bi-infinite sequence with finitely many non-fill letters. `right` holds
/// indices 0, 1, ... and `left` holds -1, -2, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiInfiniteSeq {
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
    pub fill: Letter,
}

impl BiInfiniteSeq {
    pub fn new(left: Vec<Letter>, right: Vec<Letter>, fill: Letter) -> Self {
        let mut s = Self { left, right, fill };
        s.normalize();
        s
    }

    pub fn filled(fill: Letter) -> Self {
        Self { left: Vec::new(), right: Vec::new(), fill }
    }

    pub fn normalize(&mut self) {
        while self.left.last() == Some(&self.fill) {
            self.left.pop();
        }
        while self.right.last() == Some(&self.fill) {
            self.right.pop();
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.left.last() != Some(&self.fill) && self.right.last() != Some(&self.fill)
    }

    pub fn get(&self, i: i64) -> Letter {
        let slot = if i >= 0 { self.right.get(i as usize) } else { self.left.get((-i - 1) as usize) };
        slot.copied().unwrap_or(self.fill)
    }

    fn set(&mut self, i: i64, letter: Letter) {
        let (word, idx) = if i >= 0 { (&mut self.right, i as usize) } else { (&mut self.left, (-i - 1) as usize) };
        if word.len() <= idx {
            word.resize(idx + 1, self.fill);
        }
        word[idx] = letter;
    }

    /// Moves the dot `amount` cells to the right (negative: to the left).
    fn shift(&mut self, amount: i8) {
        for _ in 0..amount.unsigned_abs() {
            if amount > 0 {
                let first = if self.right.is_empty() { self.fill } else { self.right.remove(0) };
                self.left.insert(0, first);
            } else {
                let first = if self.left.is_empty() { self.fill } else { self.left.remove(0) };
                self.right.insert(0, first);
            }
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.left.iter().chain(&self.right).copied()
    }
}

/// Window-local rewrite `F` and dot shift `G` on sequences over
/// `alphabet_size` letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedShift {
    alphabet_size: usize,
    lo: i64,
    hi: i64,
    rewrite: Vec<Letter>,
    shifts: Vec<i8>,
}

impl GeneralizedShift {
    /// Tabulates `rewrite` and `shift` on every window word. Words are passed
    /// as letter slices for positions `lo..=hi`.
    ///
    /// Panics if the window does not contain 0, if a rewrite changes length or
    /// produces an out-of-range letter, or if a shift leaves {-1, 0, 1}.
    pub fn tabulate(
        alphabet_size: usize,
        lo: i64,
        hi: i64,
        mut rewrite: impl FnMut(&[Letter]) -> Vec<Letter>,
        mut shift: impl FnMut(&[Letter]) -> i8,
    ) -> Self {
        assert!(lo <= 0 && 0 <= hi, "window must contain the origin");
        assert!(alphabet_size > 0);
        let width = (hi - lo + 1) as usize;
        let count = alphabet_size.pow(width as u32);
        let mut table = Vec::with_capacity(count * width);
        let mut shifts = Vec::with_capacity(count);
        let mut word = vec![Letter(0); width];
        for idx in 0..count {
            unrank(idx, alphabet_size, &mut word);
            let out = rewrite(&word);
            assert_eq!(out.len(), width, "rewrite must preserve word length");
            assert!(out.iter().all(|l| (l.0 as usize) < alphabet_size), "rewrite left the alphabet");
            let g = shift(&word);
            assert!((-1..=1).contains(&g), "shift amounts are limited to -1, 0, 1");
            table.extend(out);
            shifts.push(g);
        }
        Self { alphabet_size, lo, hi, rewrite: table, shifts }
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Window as the inclusive index range `(lo, hi)`.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn word_count(&self) -> usize {
        self.shifts.len()
    }

    pub fn rank(&self, word: &[Letter]) -> usize {
        word.iter().fold(0, |acc, l| acc * self.alphabet_size + l.0 as usize)
    }

    pub fn word(&self, rank: usize) -> Vec<Letter> {
        let mut w = vec![Letter(0); self.width()];
        unrank(rank, self.alphabet_size, &mut w);
        w
    }

    pub fn rewrite_of(&self, rank: usize) -> &[Letter] {
        let w = self.width();
        &self.rewrite[rank * w..(rank + 1) * w]
    }

    pub fn shift_of(&self, rank: usize) -> i8 {
        self.shifts[rank]
    }

    pub fn read_window(&self, s: &BiInfiniteSeq) -> Vec<Letter> {
        (self.lo..=self.hi).map(|i| s.get(i)).collect()
    }

    /// True when the rank's rewrite is the identity and its shift is 0.
    pub fn is_fixed(&self, rank: usize) -> bool {
        self.shifts[rank] == 0 && self.rewrite_of(rank) == self.word(rank).as_slice()
    }
}

fn unrank(mut idx: usize, base: usize, word: &mut [Letter]) {
    for slot in word.iter_mut().rev() {
        *slot = Letter((idx % base) as u16);
        idx /= base;
    }
}

/// One application: rewrite the window, then move the dot.
pub fn gs_step(gs: &GeneralizedShift, s: &BiInfiniteSeq) -> BiInfiniteSeq {
    let rank = gs.rank(&gs.read_window(s));
    let mut next = s.clone();
    for (i, &l) in (gs.lo..=gs.hi).zip(gs.rewrite_of(rank)) {
        next.set(i, l);
    }
    next.shift(gs.shift_of(rank));
    next.normalize();
    next
}

/// Composite alphabet of a compiled machine. Letter 0 is the blank, then the
/// remaining tape symbols in declaration order, then the pairs (q, s) in
/// state-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeAlphabet {
    n_sym: usize,
    n_state: usize,
    blank: Sym,
}

impl CompositeAlphabet {
    pub fn of(tm: &TuringMachine) -> Self {
        Self { n_sym: tm.alphabet().len(), n_state: tm.states().len(), blank: tm.blank() }
    }

    pub fn len(&self) -> usize {
        self.n_sym * (1 + self.n_state)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn plain(&self, s: Sym) -> Letter {
        let b = self.blank.0;
        Letter(match s.0 {
            x if x == b => 0,
            x if x < b => x + 1,
            x => x,
        })
    }

    pub fn composite(&self, q: StateId, s: Sym) -> Letter {
        Letter((self.n_sym + q.0 as usize * self.n_sym + s.0 as usize) as u16)
    }

    pub fn decode(&self, l: Letter) -> Decoded {
        let i = l.0 as usize;
        if i < self.n_sym {
            let b = self.blank.0 as usize;
            let s = match i {
                0 => b,
                x if x <= b => x - 1,
                x => x,
            };
            Decoded::Plain(Sym(s as u16))
        } else {
            let j = i - self.n_sym;
            Decoded::Head(StateId((j / self.n_sym) as u16), Sym((j % self.n_sym) as u16))
        }
    }

    pub fn name(&self, tm: &TuringMachine, l: Letter) -> String {
        match self.decode(l) {
            Decoded::Plain(s) => tm.symbol_name(s).to_owned(),
            Decoded::Head(q, s) => format!("{}:{}", tm.state_name(q), tm.symbol_name(s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    Plain(Sym),
    Head(StateId, Sym),
}

/// A machine compiled to a generalized shift on the window [-1, 1].
#[derive(Debug, Clone)]
pub struct CompiledShift {
    pub tm: TuringMachine,
    pub alphabet: CompositeAlphabet,
    pub gs: GeneralizedShift,
}

/// Compiles a machine. On a window whose centre is a head letter (q, s) with a
/// transition (q', s', d), the centre becomes s' and the neighbour in
/// direction d becomes (q', neighbour); the dot then follows the head. Every
/// other window (no head at the centre, a head next to it, or a halting head)
/// is left unchanged with shift 0.
pub fn tm_to_gs(tm: &TuringMachine) -> CompiledShift {
    let alphabet = CompositeAlphabet::of(tm);
    let plan = |w: &[Letter]| -> Option<(Vec<Letter>, i8)> {
        let (a, c, b) = (w[0], w[1], w[2]);
        let Decoded::Head(q, s) = alphabet.decode(c) else { return None };
        let (Decoded::Plain(sa), Decoded::Plain(sb)) = (alphabet.decode(a), alphabet.decode(b)) else {
            return None;
        };
        if tm.is_halting(q, s) {
            return None;
        }
        let t = tm.delta(q, s)?;
        let written = alphabet.plain(t.write);
        Some(match t.dir {
            Move::Right => (vec![a, written, alphabet.composite(t.next, sb)], 1),
            Move::Left => (vec![alphabet.composite(t.next, sa), written, b], -1),
        })
    };
    let gs = GeneralizedShift::tabulate(
        alphabet.len(),
        -1,
        1,
        |w| plan(w).map_or_else(|| w.to_vec(), |(f, _)| f),
        |w| plan(w).map_or(0, |(_, g)| g),
    );
    CompiledShift { tm: tm.clone(), alphabet, gs }
}

impl CompiledShift {
    /// The tape with cell 0 replaced by (state, head symbol).
    pub fn encode(&self, c: &TapeConfig) -> BiInfiniteSeq {
        let a = &self.alphabet;
        let left = c.left.iter().map(|&s| a.plain(s)).collect();
        let right = std::iter::once(a.composite(c.state, c.head)).chain(c.right.iter().map(|&s| a.plain(s))).collect();
        BiInfiniteSeq::new(left, right, Letter(0))
    }

    /// Inverse of `encode` on sequences with exactly one head letter, at index 0.
    pub fn decode(&self, s: &BiInfiniteSeq) -> Option<TapeConfig> {
        let a = &self.alphabet;
        let Decoded::Head(state, head) = a.decode(s.get(0)) else { return None };
        let plain = |l: &Letter| match a.decode(*l) {
            Decoded::Plain(x) => Some(x),
            Decoded::Head(..) => None,
        };
        let left = s.left.iter().map(plain).collect::<Option<Vec<_>>>()?;
        let right = s.right.iter().skip(1).map(plain).collect::<Option<Vec<_>>>()?;
        Some(TapeConfig::new(left, head, right, state, self.tm.blank()))
    }

    /// True for letters (q, s) from which the machine cannot move.
    pub fn is_halting_letter(&self, l: Letter) -> bool {
        matches!(self.alphabet.decode(l), Decoded::Head(q, s) if self.tm.is_halting(q, s))
    }

    pub fn step(&self, s: &BiInfiniteSeq) -> BiInfiniteSeq {
        gs_step(&self.gs, s)
    }

    /// One line per window word: `w -> F(w) G(w)`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let (lo, hi) = self.gs.window();
        let _ = writeln!(out, "# window [{lo}, {hi}], |A| = {}, {} words", self.alphabet.len(), self.gs.word_count());
        let names = |w: &[Letter]| w.iter().map(|&l| self.alphabet.name(&self.tm, l)).collect::<Vec<_>>().join(" ");
        for rank in 0..self.gs.word_count() {
            let w = self.gs.word(rank);
            let _ = writeln!(out, "{} -> {} {:+}", names(&w), names(self.gs.rewrite_of(rank)), self.gs.shift_of(rank));
        }
        out
    }
}

/// First step at which the two sides of the TM/shift square disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub step: usize,
    pub expected: BiInfiniteSeq,
    pub actual: BiInfiniteSeq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub steps_checked: usize,
    pub divergence: Option<Divergence>,
}

impl ConjugacyReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Checks `encode ∘ tm_step^k = gs_step^k ∘ encode` for every `k ≤ n`. Once
/// the machine halts its configuration is held fixed, matching the shift's
/// fixed points.
pub fn check_conjugacy_tm_gs(tm: &TuringMachine, c: &TapeConfig, n: usize) -> ConjugacyReport {
    let compiled = tm_to_gs(tm);
    let mut config = c.clone();
    let mut seq = compiled.encode(c);
    for k in 1..=n {
        config = crate::tm::tm_step(tm, &config).into_config();
        seq = compiled.step(&seq);
        let expected = compiled.encode(&config);
        if expected != seq {
            return ConjugacyReport {
                steps_checked: k,
                divergence: Some(Divergence { step: k, expected, actual: seq }),
            };
        }
    }
    ConjugacyReport { steps_checked: n, divergence: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::tm::{run_bounded, tm_step};

    fn l(xs: &[u16]) -> Vec<Letter> {
        xs.iter().map(|&x| Letter(x)).collect()
    }

    #[test]
    fn pure_shift_moves_the_dot_right() {
        let gs = GeneralizedShift::tabulate(2, -1, 1, |w| w.to_vec(), |_| 1);
        // ...00.100... -> ...001.00...
        let s = BiInfiniteSeq::new(vec![], l(&[1]), Letter(0));
        let t = gs_step(&gs, &s);
        assert_eq!(t, BiInfiniteSeq::new(l(&[1]), vec![], Letter(0)));
    }

    #[test]
    fn identity_shift_fixes_everything() {
        let gs = GeneralizedShift::tabulate(3, -1, 1, |w| w.to_vec(), |_| 0);
        let s = BiInfiniteSeq::new(l(&[2, 1]), l(&[1, 0, 2]), Letter(0));
        assert_eq!(gs_step(&gs, &s), s);
        assert!((0..gs.word_count()).all(|r| gs.is_fixed(r)));
    }

    #[test]
    fn bb2_alphabet_has_eight_letters() {
        let c = tm_to_gs(&corpus::bb2());
        assert_eq!(c.alphabet.len(), 8);
        assert_eq!(c.gs.word_count(), 512);
    }

    #[test]
    fn halt_start_windows_with_halt_head_are_fixed() {
        let c = tm_to_gs(&corpus::halt_start());
        let h = c.tm.halt();
        for rank in 0..c.gs.word_count() {
            let w = c.gs.word(rank);
            if w.iter().any(|&x| matches!(c.alphabet.decode(x), Decoded::Head(q, _) if q == h)) {
                assert_eq!(c.gs.shift_of(rank), 0);
                assert!(c.gs.is_fixed(rank));
            }
        }
    }

    #[test]
    fn compiled_bb2_first_step_matches_machine() {
        let tm = corpus::bb2();
        let c = tm_to_gs(&tm);
        let c0 = tm.initial_config();
        let c1 = tm_step(&tm, &c0).into_config();
        assert_eq!(c.step(&c.encode(&c0)), c.encode(&c1));
    }

    #[test]
    fn bb2_square_commutes_along_the_run() {
        let tm = corpus::bb2();
        let trace = run_bounded(&tm, &tm.initial_config(), 6);
        let c = tm_to_gs(&tm);
        for pair in trace.configs.windows(2) {
            assert_eq!(c.step(&c.encode(&pair[0])), c.encode(&pair[1]));
        }
        let report = check_conjugacy_tm_gs(&tm, &tm.initial_config(), 6);
        assert!(report.passed());
    }

    #[test]
    fn conjugacy_edge_budgets() {
        for (_, tm) in corpus::machines() {
            assert!(check_conjugacy_tm_gs(&tm, &tm.initial_config(), 0).passed());
        }
        let lp = corpus::loop_right();
        assert!(check_conjugacy_tm_gs(&lp, &lp.initial_config(), 1000).passed());
    }

    #[test]
    fn broken_compiler_is_detected() {
        let tm = corpus::bb2();
        let good = tm_to_gs(&tm);
        // Same tables with every shift reversed.
        let gs = GeneralizedShift::tabulate(
            8,
            -1,
            1,
            |w| good.gs.rewrite_of(good.gs.rank(w)).to_vec(),
            |w| -good.gs.shift_of(good.gs.rank(w)),
        );
        let bad = CompiledShift { gs, ..good.clone() };
        let c0 = tm.initial_config();
        let c1 = tm_step(&tm, &c0).into_config();
        assert_ne!(bad.step(&bad.encode(&c0)), bad.encode(&c1));
    }

    #[test]
    fn decode_inverts_encode() {
        let tm = corpus::bouncer();
        let c = tm_to_gs(&tm);
        for cfg in run_bounded(&tm, &tm.initial_config(), 60).configs {
            assert_eq!(c.decode(&c.encode(&cfg)), Some(cfg));
        }
    }

    #[test]
    fn non_blank_first_alphabet_keeps_blank_at_zero() {
        let tm = TuringMachine::parse("alphabet: a b c\nblank: b\nstates: A H\nstart: A\nhalt: H\n").unwrap();
        let a = CompositeAlphabet::of(&tm);
        for s in 0..3 {
            let letter = a.plain(Sym(s));
            assert_eq!(a.decode(letter), Decoded::Plain(Sym(s)));
        }
        assert_eq!(a.plain(tm.blank()), Letter(0));
    }

    #[test]
    fn dump_has_one_line_per_word() {
        let c = tm_to_gs(&corpus::bb2());
        let dump = c.dump();
        assert_eq!(dump.lines().filter(|l| !l.starts_with('#')).count(), 512);
        assert!(dump.contains("0 A:0 0 -> 0 1 B:0 +1"));
    }
}
