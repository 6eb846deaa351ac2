//! Reference machines used by the test suites, benches, and the CLI.

use crate::tm::TuringMachine;

pub const BB2: &str = include_str!("../corpus/bb2.tm");
pub const BB3: &str = include_str!("../corpus/bb3.tm");
pub const HALT_START: &str = include_str!("../corpus/halt_start.tm");
pub const LOOP_RIGHT: &str = include_str!("../corpus/loop_right.tm");
pub const WRITER: &str = include_str!("../corpus/writer.tm");
pub const BOUNCER: &str = include_str!("../corpus/bouncer.tm");
pub const STUCK: &str = include_str!("../corpus/stuck.tm");

/// (name, source) for every corpus machine.
pub const ALL: [(&str, &str); 7] = [
    ("bb2", BB2),
    ("bb3", BB3),
    ("halt_start", HALT_START),
    ("loop_right", LOOP_RIGHT),
    ("writer", WRITER),
    ("bouncer", BOUNCER),
    ("stuck", STUCK),
];

fn load(src: &str) -> TuringMachine {
    TuringMachine::parse(src).expect("corpus machine parses")
}

pub fn bb2() -> TuringMachine {
    load(BB2)
}

pub fn bb3() -> TuringMachine {
    load(BB3)
}

pub fn halt_start() -> TuringMachine {
    load(HALT_START)
}

pub fn loop_right() -> TuringMachine {
    load(LOOP_RIGHT)
}

pub fn writer() -> TuringMachine {
    load(WRITER)
}

pub fn bouncer() -> TuringMachine {
    load(BOUNCER)
}

pub fn stuck() -> TuringMachine {
    load(STUCK)
}

pub fn machines() -> Vec<(&'static str, TuringMachine)> {
    ALL.iter().map(|(name, src)| (*name, load(src))).collect()
}

pub fn by_name(name: &str) -> Option<TuringMachine> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, src)| load(src))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{run_bounded, RunVerdict, Sym};

    fn verdict(tm: &TuringMachine, n: usize) -> RunVerdict {
        run_bounded(tm, &tm.initial_config(), n).verdict
    }

    #[test]
    fn every_document_parses() {
        assert_eq!(machines().len(), ALL.len());
        assert!(by_name("bb2").is_some() && by_name("nope").is_none());
    }

    #[test]
    fn known_halting_times() {
        assert_eq!(verdict(&bb2(), 100), RunVerdict::HaltedAt(6));
        assert_eq!(verdict(&halt_start(), 100), RunVerdict::HaltedAt(0));
        assert_eq!(verdict(&stuck(), 100), RunVerdict::HaltedAt(5));
        let tm = bb3();
        let trace = run_bounded(&tm, &tm.initial_config(), 100);
        assert_eq!(trace.verdict, RunVerdict::HaltedAt(14));
        assert_eq!(trace.last().count(Sym(1)), 6);
    }

    #[test]
    fn non_halting_machines_keep_running() {
        for tm in [loop_right(), writer(), bouncer()] {
            assert_eq!(verdict(&tm, 1000), RunVerdict::StillRunning(1000));
        }
    }
}
