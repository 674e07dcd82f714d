//! Deterministic single-tape Turing machines with a left-bounded tape.
//!
//! A move left from cell 0 leaves the head on cell 0. Entering the accept
//! or reject state halts the machine; transitions listed for those states
//! are accepted by the parser and never used.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Action {
    pub next: StateId,
    pub write: SymbolId,
    pub movement: Move,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Halt {
    Accept,
    Reject,
}

impl fmt::Display for Halt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Halt::Accept => "accept",
            Halt::Reject => "reject",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StepOutcome {
    Next(Configuration),
    Halted(Halt),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TmError {
    #[error("input symbol {0:?} is not in the input alphabet")]
    InvalidInput(String),
    #[error("configuration state {0:?} is not a state of the machine")]
    UnknownState(StateId),
    #[error("tape cell {cell} holds symbol {symbol:?}, outside the tape alphabet")]
    UnknownTapeSymbol { cell: u64, symbol: SymbolId },
    #[error("head moved past the last addressable tape cell")]
    TapeOverflow,
}

/// A validated machine `(Q, Σ, Γ, δ, q0, q_accept, q_reject)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmDesc {
    states: Vec<String>,
    symbols: Vec<String>,
    input: HashSet<SymbolId>,
    blank: SymbolId,
    start: StateId,
    accept: StateId,
    reject: StateId,
    // indexed by state * |Γ| + symbol; None exactly on halting rows
    delta: Vec<Option<Action>>,
}

/// Machine state, tape contents and head position. The tape map never
/// stores a blank, so equal configurations compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    tape: BTreeMap<u64, SymbolId>,
    pub head: u64,
}

impl Configuration {
    /// Builds a configuration, dropping any explicit blanks from `tape`.
    pub fn new(
        state: StateId,
        tape: impl IntoIterator<Item = (u64, SymbolId)>,
        head: u64,
        blank: SymbolId,
    ) -> Self {
        Configuration {
            state,
            tape: tape.into_iter().filter(|&(_, s)| s != blank).collect(),
            head,
        }
    }

    pub fn tape(&self) -> &BTreeMap<u64, SymbolId> {
        &self.tape
    }

    pub fn read(&self, cell: u64, blank: SymbolId) -> SymbolId {
        self.tape.get(&cell).copied().unwrap_or(blank)
    }
}

impl TmDesc {
    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0 as usize]
    }

    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.symbols[s.0 as usize]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u32))
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s == name).map(|i| SymbolId(i as u32))
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn tape_alphabet(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u32).map(SymbolId)
    }

    pub fn is_input_symbol(&self, s: SymbolId) -> bool {
        self.input.contains(&s)
    }

    pub fn blank(&self) -> SymbolId {
        self.blank
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accept(&self) -> StateId {
        self.accept
    }

    pub fn reject(&self) -> StateId {
        self.reject
    }

    pub fn is_halting(&self, q: StateId) -> bool {
        q == self.accept || q == self.reject
    }

    pub fn transition(&self, q: StateId, s: SymbolId) -> Option<Action> {
        let row = q.0 as usize * self.symbols.len() + s.0 as usize;
        self.delta.get(row).copied().flatten()
    }

    /// Start configuration on a word given as symbol names.
    pub fn initial_config<S: AsRef<str>>(&self, word: &[S]) -> Result<Configuration, TmError> {
        let mut tape = BTreeMap::new();
        for (i, name) in word.iter().enumerate() {
            let name = name.as_ref();
            let sym = self
                .symbol(name)
                .filter(|s| self.input.contains(s))
                .ok_or_else(|| TmError::InvalidInput(name.to_string()))?;
            tape.insert(i as u64, sym);
        }
        Ok(Configuration {
            state: self.start,
            tape,
            head: 0,
        })
    }

    /// Splits a word into symbol names: whitespace-separated when it
    /// contains whitespace, otherwise one symbol per character.
    pub fn split_word(word: &str) -> Vec<String> {
        if word.chars().any(char::is_whitespace) {
            word.split_whitespace().map(str::to_string).collect()
        } else {
            word.chars().map(String::from).collect()
        }
    }

    pub fn step(&self, c: &Configuration) -> Result<StepOutcome, TmError> {
        if c.state.0 as usize >= self.states.len() {
            return Err(TmError::UnknownState(c.state));
        }
        if c.state == self.accept {
            return Ok(StepOutcome::Halted(Halt::Accept));
        }
        if c.state == self.reject {
            return Ok(StepOutcome::Halted(Halt::Reject));
        }
        let read = c.read(c.head, self.blank);
        if read.0 as usize >= self.symbols.len() {
            return Err(TmError::UnknownTapeSymbol {
                cell: c.head,
                symbol: read,
            });
        }
        let action = self
            .transition(c.state, read)
            .expect("validated machines define every non-halting row");
        let mut tape = c.tape.clone();
        if action.write == self.blank {
            tape.remove(&c.head);
        } else {
            tape.insert(c.head, action.write);
        }
        let head = match action.movement {
            Move::Left => c.head.saturating_sub(1),
            Move::Right => c.head.checked_add(1).ok_or(TmError::TapeOverflow)?,
        };
        Ok(StepOutcome::Next(Configuration {
            state: action.next,
            tape,
            head,
        }))
    }

    /// Lazily yields `c0, c1, ...`, ending with the halting configuration
    /// if one is reached.
    pub fn trajectory(&self, start: Configuration) -> Trajectory<'_> {
        Trajectory {
            machine: self,
            next: Some(start),
        }
    }

    pub fn render(&self, c: &Configuration) -> String {
        let last = c.tape.keys().next_back().copied().unwrap_or(0).max(c.head);
        let cells: Vec<String> = (0..=last)
            .map(|i| {
                let sym = self.symbol_name(c.read(i, self.blank));
                if i == c.head {
                    format!("[{sym}]")
                } else {
                    sym.to_string()
                }
            })
            .collect();
        format!(
            "state={} head={} tape={}",
            self.state_name(c.state),
            c.head,
            cells.join(" ")
        )
    }
}

pub struct Trajectory<'a> {
    machine: &'a TmDesc,
    next: Option<Configuration>,
}

impl Iterator for Trajectory<'_> {
    type Item = Result<Configuration, TmError>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        match self.machine.step(&current) {
            Ok(StepOutcome::Next(c)) => self.next = Some(c),
            Ok(StepOutcome::Halted(_)) => {}
            Err(e) => return Some(Err(e)),
        }
        Some(Ok(current))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseTmError {
    pub line: usize,
    pub kind: ParseTmErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseTmErrorKind {
    #[error("unrecognised line {0:?}")]
    Syntax(String),
    #[error("header `{0}` given twice")]
    DuplicateHeader(&'static str),
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("alphabet error: {0}")]
    Alphabet(String),
    #[error("accept and reject are the same state {0:?}")]
    SameHaltingStates(String),
    #[error("duplicate rule for ({0}, {1})")]
    DuplicateRule(String, String),
    #[error("no rule for ({0}, {1})")]
    MissingRule(String, String),
    #[error("duplicate name {0:?} in a list")]
    DuplicateName(String),
}

#[derive(Default)]
struct Headers {
    states: Option<(usize, Vec<String>)>,
    input: Option<(usize, Vec<String>)>,
    tape: Option<(usize, Vec<String>)>,
    blank: Option<(usize, String)>,
    start: Option<(usize, String)>,
    accept: Option<(usize, String)>,
    reject: Option<(usize, String)>,
}

fn split_list(text: &str) -> Vec<String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn single(text: &str) -> Option<String> {
    match split_list(text).as_slice() {
        [one] => Some(one.clone()),
        _ => None,
    }
}

fn check_unique(line: usize, names: &[String]) -> Result<(), ParseTmError> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(ParseTmError {
                line,
                kind: ParseTmErrorKind::DuplicateName(n.clone()),
            });
        }
    }
    Ok(())
}

impl FromStr for TmDesc {
    type Err = ParseTmError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |line, kind| ParseTmError { line, kind };
        let mut h = Headers::default();
        let mut rules: Vec<(usize, [String; 4], Move)> = Vec::new();

        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some((lhs, rhs)) = content.split_once("->") {
                let l = split_list(lhs);
                let r = split_list(rhs);
                let (Ok([q, s]), Ok([q2, s2, m])) = (<[String; 2]>::try_from(l), <[String; 3]>::try_from(r))
                else {
                    return Err(err(line, ParseTmErrorKind::Syntax(content.to_string())));
                };
                let movement = match m.as_str() {
                    "L" => Move::Left,
                    "R" => Move::Right,
                    _ => return Err(err(line, ParseTmErrorKind::Syntax(content.to_string()))),
                };
                rules.push((line, [q, s, q2, s2], movement));
                continue;
            }
            let Some((key, value)) = content.split_once(':') else {
                return Err(err(line, ParseTmErrorKind::Syntax(content.to_string())));
            };
            let syntax = || err(line, ParseTmErrorKind::Syntax(content.to_string()));
            macro_rules! set {
                ($field:ident, $name:literal, $val:expr) => {{
                    if h.$field.is_some() {
                        return Err(err(line, ParseTmErrorKind::DuplicateHeader($name)));
                    }
                    h.$field = Some((line, $val));
                }};
            }
            match key.trim() {
                "states" => set!(states, "states", split_list(value)),
                "input" => set!(input, "input", split_list(value)),
                "tape" => set!(tape, "tape", split_list(value)),
                "blank" => set!(blank, "blank", single(value).ok_or_else(syntax)?),
                "start" => set!(start, "start", single(value).ok_or_else(syntax)?),
                "accept" => set!(accept, "accept", single(value).ok_or_else(syntax)?),
                "reject" => set!(reject, "reject", single(value).ok_or_else(syntax)?),
                _ => return Err(syntax()),
            }
        }

        let last_line = text.lines().count().max(1);
        let missing = |name| err(last_line, ParseTmErrorKind::MissingHeader(name));
        let (sline, mut states) = h.states.ok_or_else(|| missing("states"))?;
        let (iline, input) = h.input.ok_or_else(|| missing("input"))?;
        let (tline, symbols) = h.tape.ok_or_else(|| missing("tape"))?;
        let (bline, blank) = h.blank.ok_or_else(|| missing("blank"))?;
        let (qline, start) = h.start.ok_or_else(|| missing("start"))?;
        let (aline, accept) = h.accept.ok_or_else(|| missing("accept"))?;
        let (rline, reject) = h.reject.ok_or_else(|| missing("reject"))?;
        check_unique(sline, &states)?;
        check_unique(iline, &input)?;
        check_unique(tline, &symbols)?;

        if accept == reject {
            return Err(err(rline, ParseTmErrorKind::SameHaltingStates(accept)));
        }
        for q in [&accept, &reject] {
            if !states.contains(q) {
                states.push(q.clone());
            }
        }
        let state_of = |name: &str, line| {
            states
                .iter()
                .position(|s| s == name)
                .map(|i| StateId(i as u32))
                .ok_or_else(|| err(line, ParseTmErrorKind::UnknownState(name.to_string())))
        };
        let symbol_of = |name: &str, line| {
            symbols
                .iter()
                .position(|s| s == name)
                .map(|i| SymbolId(i as u32))
                .ok_or_else(|| err(line, ParseTmErrorKind::UnknownSymbol(name.to_string())))
        };

        let blank_id = symbols
            .iter()
            .position(|s| *s == blank)
            .map(|i| SymbolId(i as u32))
            .ok_or_else(|| {
                err(
                    bline,
                    ParseTmErrorKind::Alphabet(format!("blank {blank:?} is not in the tape alphabet")),
                )
            })?;
        if input.contains(&blank) {
            return Err(err(
                iline,
                ParseTmErrorKind::Alphabet(format!("blank {blank:?} is in the input alphabet")),
            ));
        }
        let mut input_ids = HashSet::new();
        for s in &input {
            let id = symbols.iter().position(|t| t == s).ok_or_else(|| {
                err(
                    iline,
                    ParseTmErrorKind::Alphabet(format!("input symbol {s:?} is not in the tape alphabet")),
                )
            })?;
            input_ids.insert(SymbolId(id as u32));
        }

        let start_id = state_of(&start, qline)?;
        let accept_id = state_of(&accept, aline)?;
        let reject_id = state_of(&reject, rline)?;

        let width = symbols.len();
        let mut delta: Vec<Option<Action>> = vec![None; states.len() * width];
        let mut defined: HashMap<(StateId, SymbolId), usize> = HashMap::new();
        for (line, [q, s, q2, s2], movement) in rules {
            let from = state_of(&q, line)?;
            let read = symbol_of(&s, line)?;
            let action = Action {
                next: state_of(&q2, line)?,
                write: symbol_of(&s2, line)?,
                movement,
            };
            if defined.insert((from, read), line).is_some() {
                return Err(err(line, ParseTmErrorKind::DuplicateRule(q, s)));
            }
            if from != accept_id && from != reject_id {
                delta[from.0 as usize * width + read.0 as usize] = Some(action);
            }
        }
        for (qi, qname) in states.iter().enumerate() {
            if StateId(qi as u32) == accept_id || StateId(qi as u32) == reject_id {
                continue;
            }
            for (si, sname) in symbols.iter().enumerate() {
                if delta[qi * width + si].is_none() {
                    return Err(err(
                        last_line,
                        ParseTmErrorKind::MissingRule(qname.clone(), sname.clone()),
                    ));
                }
            }
        }

        Ok(TmDesc {
            states,
            symbols,
            input: input_ids,
            blank: blank_id,
            start: start_id,
            accept: accept_id,
            reject: reject_id,
            delta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOOPER: &str = "\
# walks right over blanks forever
states: q
input: a
tape: a _
blank: _
start: q
accept: qa
reject: qr
q, _ -> q, _, R
q, a -> q, a, R
";

    const LEFT_LOOPER: &str = "\
states: q
input: a
tape: a _
blank: _
start: q
accept: qa
reject: qr
q, _ -> q, _, L
q, a -> q, _, L
";

    const TWO_STATE: &str = "\
states: p, q
input: a b
tape: a b _
blank: _
start: p
accept: yes
reject: no
p, a -> q, b, R
p, b -> p, a, L
p, _ -> yes, _, R
q, a -> p, a, L
q, b -> no, b, R
q, _ -> p, a, L
";

    fn machine(text: &str) -> TmDesc {
        text.parse().unwrap()
    }

    fn parse_err(text: &str) -> ParseTmErrorKind {
        text.parse::<TmDesc>().unwrap_err().kind
    }

    #[test]
    fn parses_two_state_machine() {
        let m = machine(TWO_STATE);
        assert_eq!(m.state_count(), 4);
        assert_eq!(m.state_name(m.start()), "p");
        assert!(m.is_halting(m.state("yes").unwrap()));
        assert!(!m.is_halting(m.state("q").unwrap()));
        let a = m.symbol("a").unwrap();
        assert_eq!(
            m.transition(m.state("p").unwrap(), a),
            Some(Action {
                next: m.state("q").unwrap(),
                write: m.symbol("b").unwrap(),
                movement: Move::Right
            })
        );
    }

    #[test]
    fn initial_configs() {
        let m = machine(TWO_STATE);
        let empty = m.initial_config::<&str>(&[]).unwrap();
        assert_eq!(empty.state, m.start());
        assert!(empty.tape().is_empty());
        assert_eq!(empty.head, 0);

        let c = m.initial_config(&["a", "b"]).unwrap();
        let (a, b) = (m.symbol("a").unwrap(), m.symbol("b").unwrap());
        assert_eq!(c.tape(), &BTreeMap::from([(0, a), (1, b)]));
        assert_eq!(m.initial_config(&["a", "_"]), Err(TmError::InvalidInput("_".into())));
        assert_eq!(m.initial_config(&["c"]), Err(TmError::InvalidInput("c".into())));
        assert_eq!(TmDesc::split_word("ab"), vec!["a", "b"]);
        assert_eq!(TmDesc::split_word("one two"), vec!["one", "two"]);
    }

    #[test]
    fn halting_states_absorb() {
        let m = machine(TWO_STATE);
        let blank = m.blank();
        for head in [0, 5] {
            let c = Configuration::new(m.accept(), [(2, m.symbol("a").unwrap())], head, blank);
            assert_eq!(m.step(&c).unwrap(), StepOutcome::Halted(Halt::Accept));
            let c = Configuration::new(m.reject(), [], head, blank);
            assert_eq!(m.step(&c).unwrap(), StepOutcome::Halted(Halt::Reject));
        }
    }

    #[test]
    fn left_move_at_cell_zero_clamps() {
        let m = machine(TWO_STATE);
        // p reads b at 0: writes a, moves L, stays in p
        let c = m.initial_config(&["b"]).unwrap();
        let StepOutcome::Next(next) = m.step(&c).unwrap() else {
            panic!("halted")
        };
        assert_eq!(next.head, 0);
        assert_eq!(next.state, m.state("p").unwrap());
        assert_eq!(next.read(0, m.blank()), m.symbol("a").unwrap());
    }

    #[test]
    fn right_looper_step() {
        let m = machine(LOOPER);
        let c = m.initial_config::<&str>(&[]).unwrap();
        assert_eq!(
            m.step(&c).unwrap(),
            StepOutcome::Next(Configuration::new(m.start(), [], 1, m.blank()))
        );
    }

    #[test]
    fn corrupt_state_is_an_error() {
        let m = machine(LOOPER);
        let c = Configuration::new(StateId(40), [], 0, m.blank());
        assert_eq!(m.step(&c), Err(TmError::UnknownState(StateId(40))));
    }

    #[test]
    fn trajectories() {
        let accept_now = machine(
            "states: q\ninput: a\ntape: a _\nblank: _\nstart: yes\naccept: yes\nreject: no\nq, a -> q, a, R\nq, _ -> q, _, R\n",
        );
        let start = accept_now.initial_config(&["a"]).unwrap();
        assert_eq!(accept_now.trajectory(start).count(), 1);

        let m = machine(LOOPER);
        let heads: Vec<u64> = m
            .trajectory(m.initial_config::<&str>(&[]).unwrap())
            .take(50)
            .map(|c| c.unwrap().head)
            .collect();
        assert_eq!(heads, (0..50).collect::<Vec<_>>());

        let m = machine(LEFT_LOOPER);
        let traj: Vec<Configuration> = m
            .trajectory(m.initial_config(&["a", "a"]).unwrap())
            .take(6)
            .map(Result::unwrap)
            .collect();
        assert!(traj[1..].windows(2).all(|w| w[0] == w[1]));
        assert_ne!(traj[0], traj[1]);
    }

    #[test]
    fn blanks_never_stored() {
        let m = machine(LEFT_LOOPER);
        let c = m.initial_config(&["a"]).unwrap();
        let StepOutcome::Next(next) = m.step(&c).unwrap() else {
            panic!("halted")
        };
        assert!(next.tape().is_empty());
        assert_eq!(next, Configuration::new(m.start(), [(0, m.blank()), (3, m.blank())], 0, m.blank()));
    }

    #[test]
    fn parse_errors_are_specific() {
        let missing = LOOPER.replace("q, a -> q, a, R\n", "");
        assert_eq!(parse_err(&missing), ParseTmErrorKind::MissingRule("q".into(), "a".into()));

        let dup = format!("{LOOPER}q, a -> qa, a, R\n");
        assert_eq!(parse_err(&dup), ParseTmErrorKind::DuplicateRule("q".into(), "a".into()));

        let blank_in_input = LOOPER.replace("input: a", "input: a _");
        assert!(matches!(parse_err(&blank_in_input), ParseTmErrorKind::Alphabet(_)));

        let not_subset = LOOPER.replace("input: a", "input: a z");
        assert!(matches!(parse_err(&not_subset), ParseTmErrorKind::Alphabet(_)));

        let same = LOOPER.replace("reject: qr", "reject: qa");
        assert_eq!(parse_err(&same), ParseTmErrorKind::SameHaltingStates("qa".into()));

        let unknown = format!("{LOOPER}zz, a -> q, a, R\n");
        assert_eq!(parse_err(&unknown), ParseTmErrorKind::UnknownState("zz".into()));

        let unknown_sym = LOOPER.replace("q, a -> q, a, R", "q, a -> q, c, R");
        assert_eq!(parse_err(&unknown_sym), ParseTmErrorKind::UnknownSymbol("c".into()));

        let bad_move = LOOPER.replace("q, a -> q, a, R", "q, a -> q, a, S");
        assert!(matches!(parse_err(&bad_move), ParseTmErrorKind::Syntax(_)));

        let no_start = LOOPER.replace("start: q\n", "");
        assert_eq!(parse_err(&no_start), ParseTmErrorKind::MissingHeader("start"));

        let bad_start = LOOPER.replace("start: q", "start: nowhere");
        assert_eq!(parse_err(&bad_start), ParseTmErrorKind::UnknownState("nowhere".into()));
    }

    #[test]
    fn rules_for_halting_states_are_ignored() {
        let text = format!("{LOOPER}qa, a -> q, a, R\n");
        let m = machine(&text);
        assert_eq!(m.transition(m.accept(), m.symbol("a").unwrap()), None);
    }
}
