//! Conway's Game of Life on the full plane `Z²`, stored as a sparse set of
//! live cells, plus RLE pattern I/O.

use std::collections::{BTreeSet, HashMap};
use std::convert::Infallible;
use std::fmt;

use thiserror::Error;

use crate::cycles::{CycleSearch, CycleVerdict, Transition};

/// A lattice cell. `y` grows downward, matching RLE row order; cells
/// order row-major (by `y`, then `x`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Cell {
    pub const fn new(x: i64, y: i64) -> Self {
        Cell { x, y }
    }

    pub fn neighbors(self) -> impl Iterator<Item = Cell> {
        (-1..=1)
            .flat_map(move |dy| (-1..=1).map(move |dx| (dx, dy)))
            .filter(|&d| d != (0, 0))
            .map(move |(dx, dy)| Cell::new(self.x + dx, self.y + dy))
    }
}

/// Finite set of live cells; everything else is dead.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LifeConfig {
    live: BTreeSet<Cell>,
}

/// Inclusive bounding box of a nonempty configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub min: Cell,
    pub max: Cell,
}

impl BoundingBox {
    pub fn width(&self) -> u64 {
        self.max.x.abs_diff(self.min.x) + 1
    }

    pub fn height(&self) -> u64 {
        self.max.y.abs_diff(self.min.y) + 1
    }
}

impl LifeConfig {
    pub fn empty() -> Self {
        LifeConfig::default()
    }

    pub fn from_cells(cells: impl IntoIterator<Item = (i64, i64)>) -> Self {
        LifeConfig {
            live: cells.into_iter().map(|(x, y)| Cell::new(x, y)).collect(),
        }
    }

    pub fn is_alive(&self, cell: Cell) -> bool {
        self.live.contains(&cell)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.live.iter().copied()
    }

    pub fn population(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn insert(&mut self, cell: Cell) {
        self.live.insert(cell);
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        let first = *self.live.first()?;
        let mut bb = BoundingBox {
            min: first,
            max: first,
        };
        for c in &self.live {
            bb.min.x = bb.min.x.min(c.x);
            bb.min.y = bb.min.y.min(c.y);
            bb.max.x = bb.max.x.max(c.x);
            bb.max.y = bb.max.y.max(c.y);
        }
        Some(bb)
    }

    pub fn translate(&self, dx: i64, dy: i64) -> LifeConfig {
        LifeConfig {
            live: self.live.iter().map(|c| Cell::new(c.x + dx, c.y + dy)).collect(),
        }
    }

    /// Translates so the bounding box starts at the origin.
    pub fn normalized(&self) -> LifeConfig {
        match self.bounding_box() {
            Some(bb) => self.translate(-bb.min.x, -bb.min.y),
            None => LifeConfig::empty(),
        }
    }

    /// Live cells among the eight neighbours of `cell`.
    pub fn neighbor_count(&self, cell: Cell) -> u8 {
        cell.neighbors().filter(|n| self.live.contains(n)).count() as u8
    }

    /// One generation: birth on exactly 3 live neighbours, survival on 2
    /// or 3, death otherwise.
    pub fn step(&self) -> LifeConfig {
        let mut counts: HashMap<Cell, u8> = HashMap::with_capacity(self.live.len() * 8);
        for c in &self.live {
            for n in c.neighbors() {
                *counts.entry(n).or_default() += 1;
            }
        }
        let live = counts
            .into_iter()
            .filter(|&(cell, n)| n == 3 || (n == 2 && self.live.contains(&cell)))
            .map(|(cell, _)| cell)
            .collect();
        LifeConfig { live }
    }

    pub fn run(&self, n: u64) -> LifeConfig {
        let mut cur = self.clone();
        for _ in 0..n {
            cur = cur.step();
        }
        cur
    }

    /// Searches for a revisited configuration among the first `budget`
    /// generations. Exact equality: a glider never recurs.
    pub fn recurrence(&self, budget: u64) -> CycleVerdict {
        let verdict = CycleSearch::new(budget).run(self.clone(), |c: &LifeConfig| {
            Ok::<_, Infallible>(Transition::Next(c.step()))
        });
        match verdict {
            Ok(v) => v,
            Err(never) => match never {},
        }
    }

    /// `#`/`.` grid clipped to the bounding box, preceded by a line giving
    /// the coordinates of the top-left character.
    pub fn render_grid(&self) -> String {
        let Some(bb) = self.bounding_box() else {
            return "origin=(0,0) empty\n".to_string();
        };
        let mut out = format!("origin=({},{})\n", bb.min.x, bb.min.y);
        for y in bb.min.y..=bb.max.y {
            for x in bb.min.x..=bb.max.x {
                out.push(if self.is_alive(Cell::new(x, y)) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

impl FromIterator<Cell> for LifeConfig {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Self {
        LifeConfig {
            live: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("RLE parse error at line {line}, column {column}: {kind}")]
pub struct RleError {
    pub line: usize,
    pub column: usize,
    pub kind: RleErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RleErrorKind {
    #[error("missing `x = .., y = ..` header")]
    MissingHeader,
    #[error("malformed header")]
    MalformedHeader,
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),
    #[error("run count out of range")]
    BadCount,
    #[error("missing `!` terminator")]
    MissingTerminator,
}

fn parse_header(text: &str) -> Option<(u64, u64)> {
    let mut width = None;
    let mut height = None;
    for field in text.split(',') {
        let (key, value) = field.split_once('=')?;
        match key.trim() {
            "x" => width = Some(value.trim().parse().ok()?),
            "y" => height = Some(value.trim().parse().ok()?),
            "rule" => {}
            _ => return None,
        }
    }
    Some((width?, height?))
}

/// Parses a pattern in the common RLE dialect: `#` comment lines, an
/// `x = W, y = H[, rule = ..]` header, then runs of `b`, `o` and `$`
/// ended by `!`. The top-left of the pattern area is the origin. Header
/// dimensions are checked for syntax only.
pub fn parse_rle(text: &str) -> Result<LifeConfig, RleError> {
    let mut lines = text.lines().enumerate();
    let mut header = None;
    for (n, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        header = Some((n, line));
        break;
    }
    let Some((hline, htext)) = header else {
        return Err(RleError {
            line: text.lines().count().max(1),
            column: 1,
            kind: RleErrorKind::MissingHeader,
        });
    };
    let trimmed = htext.trim_start();
    if !trimmed.starts_with('x') {
        return Err(RleError {
            line: hline + 1,
            column: htext.len() - trimmed.len() + 1,
            kind: RleErrorKind::MissingHeader,
        });
    }
    if parse_header(htext).is_none() {
        return Err(RleError {
            line: hline + 1,
            column: 1,
            kind: RleErrorKind::MalformedHeader,
        });
    }

    let mut config = LifeConfig::empty();
    let (mut x, mut y) = (0i64, 0i64);
    let mut count: Option<i64> = None;
    for (n, line) in lines {
        let line_no = n + 1;
        for (col, ch) in line.char_indices() {
            let err = |kind| RleError {
                line: line_no,
                column: col + 1,
                kind,
            };
            match ch {
                '0'..='9' => {
                    let d = i64::from(ch as u8 - b'0');
                    let next = count
                        .unwrap_or(0)
                        .checked_mul(10)
                        .and_then(|c| c.checked_add(d))
                        .filter(|&c| c <= 1 << 40)
                        .ok_or_else(|| err(RleErrorKind::BadCount))?;
                    count = Some(next);
                }
                'b' | '.' => {
                    x += count.take().unwrap_or(1);
                }
                'o' | 'A' => {
                    for _ in 0..count.take().unwrap_or(1) {
                        config.insert(Cell::new(x, y));
                        x += 1;
                    }
                }
                '$' => {
                    y += count.take().unwrap_or(1);
                    x = 0;
                }
                '!' => return Ok(config),
                c if c.is_whitespace() => {
                    if count.is_some() {
                        return Err(err(RleErrorKind::BadCount));
                    }
                }
                '#' if col == 0 => break,
                other => return Err(err(RleErrorKind::UnknownSymbol(other))),
            }
        }
    }
    Err(RleError {
        line: text.lines().count().max(1),
        column: text.lines().last().map_or(0, str::len) + 1,
        kind: RleErrorKind::MissingTerminator,
    })
}

const RLE_LINE_WIDTH: usize = 70;

/// Writes the pattern translated to its bounding-box origin. The empty
/// pattern is `x = 0, y = 0\n!`.
pub fn emit_rle(config: &LifeConfig) -> String {
    let Some(bb) = config.bounding_box() else {
        return "x = 0, y = 0\n!".to_string();
    };
    let mut tokens: Vec<String> = Vec::new();
    let push_run = |tokens: &mut Vec<String>, n: u64, sym: char| match n {
        0 => {}
        1 => tokens.push(sym.to_string()),
        _ => tokens.push(format!("{n}{sym}")),
    };
    let mut pending_rows = 0u64;
    for y in bb.min.y..=bb.max.y {
        let row: Vec<i64> = config
            .live
            .range(Cell::new(i64::MIN, y)..=Cell::new(i64::MAX, y))
            .map(|c| c.x)
            .collect();
        if row.is_empty() {
            pending_rows += 1;
            continue;
        }
        push_run(&mut tokens, pending_rows, '$');
        pending_rows = 1;
        let mut cursor = bb.min.x;
        let mut i = 0;
        while i < row.len() {
            let start = row[i];
            let mut end = start;
            while i + 1 < row.len() && row[i + 1] == end + 1 {
                end += 1;
                i += 1;
            }
            push_run(&mut tokens, start.abs_diff(cursor), 'b');
            push_run(&mut tokens, end.abs_diff(start) + 1, 'o');
            cursor = end + 1;
            i += 1;
        }
    }
    tokens.push("!".to_string());

    let mut out = format!("x = {}, y = {}\n", bb.width(), bb.height());
    let mut line_len = 0;
    for t in tokens {
        if line_len + t.len() > RLE_LINE_WIDTH {
            out.push('\n');
            line_len = 0;
        }
        line_len += t.len();
        out.push_str(&t);
    }
    out
}

impl fmt::Display for LifeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_grid())
    }
}

/// Standard small patterns, each placed with its bounding box at the origin.
pub mod patterns {
    use super::LifeConfig;

    pub fn block() -> LifeConfig {
        LifeConfig::from_cells([(0, 0), (1, 0), (0, 1), (1, 1)])
    }

    /// Horizontal phase.
    pub fn blinker() -> LifeConfig {
        LifeConfig::from_cells([(0, 0), (1, 0), (2, 0)])
    }

    pub fn toad() -> LifeConfig {
        LifeConfig::from_cells([(1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1)])
    }

    /// `bob$2bo$3o!`, travelling towards +x, +y.
    pub fn glider() -> LifeConfig {
        LifeConfig::from_cells([(1, 0), (2, 1), (0, 2), (1, 2), (2, 2)])
    }
}

#[cfg(test)]
mod tests {
    use super::patterns::*;
    use super::*;

    #[test]
    fn neighbor_counts() {
        let b = LifeConfig::from_cells([(0, 0), (1, 0), (2, 0)]);
        assert_eq!(LifeConfig::empty().neighbor_count(Cell::new(4, -2)), 0);
        assert_eq!(b.neighbor_count(Cell::new(1, 0)), 2);
        assert_eq!(b.neighbor_count(Cell::new(1, 1)), 3);
        assert_eq!(b.neighbor_count(Cell::new(0, 0)), 1);
    }

    #[test]
    fn empty_stays_empty() {
        assert_eq!(LifeConfig::empty().step(), LifeConfig::empty());
        assert_eq!(LifeConfig::empty().run(100), LifeConfig::empty());
    }

    #[test]
    fn blinker_rotates() {
        let next = blinker().step();
        assert_eq!(next, LifeConfig::from_cells([(1, -1), (1, 0), (1, 1)]));
        assert_eq!(blinker().run(2), blinker());
        assert_eq!(blinker().run(0), blinker());
    }

    #[test]
    fn block_is_still() {
        assert_eq!(block().step(), block());
    }

    #[test]
    fn toad_has_period_two() {
        assert_ne!(toad().step(), toad());
        assert_eq!(toad().run(2), toad());
    }

    #[test]
    fn glider_translates_diagonally() {
        assert_eq!(glider().run(4), glider().translate(1, 1));
    }

    #[test]
    fn recurrence_of_small_patterns() {
        let periodic = |preperiod, period| CycleVerdict::Periodic { preperiod, period };
        assert_eq!(block().recurrence(10), periodic(0, 1));
        assert_eq!(blinker().recurrence(10), periodic(0, 2));
        assert_eq!(toad().recurrence(10), periodic(0, 2));
        assert_eq!(glider().recurrence(200), CycleVerdict::Exhausted { budget: 200 });
        // a lone cell dies, then the empty board repeats
        assert_eq!(LifeConfig::from_cells([(0, 0)]).recurrence(10), periodic(1, 1));
    }

    #[test]
    fn lone_cells_die() {
        let c = LifeConfig::from_cells([(0, 0), (5, 5)]);
        assert!(c.step().is_empty());
    }

    #[test]
    fn overcrowded_cell_dies() {
        // centre has 4 live neighbours
        let c = LifeConfig::from_cells([(1, 1), (0, 0), (2, 0), (0, 2), (2, 2)]);
        assert!(!c.step().is_alive(Cell::new(1, 1)));
    }

    #[test]
    fn rle_examples() {
        assert_eq!(parse_rle("x = 3, y = 1\n3o!").unwrap(), blinker());
        assert_eq!(parse_rle("x = 3, y = 3\nbob$2bo$3o!").unwrap(), glider());
        assert_eq!(emit_rle(&LifeConfig::empty()), "x = 0, y = 0\n!");
        assert_eq!(parse_rle("x = 0, y = 0\n!").unwrap(), LifeConfig::empty());
    }

    #[test]
    fn rle_comments_rule_and_whitespace() {
        let text = "#N Glider\n#C a comment\nx = 3, y = 3, rule = B3/S23\nbo\nb$2bo$\n3o!\n";
        assert_eq!(parse_rle(text).unwrap(), glider());
    }

    #[test]
    fn rle_blank_row_runs() {
        let c = parse_rle("x = 1, y = 4\no3$o!").unwrap();
        assert_eq!(c, LifeConfig::from_cells([(0, 0), (0, 3)]));
        assert_eq!(emit_rle(&c), "x = 1, y = 4\no3$o!");
    }

    #[test]
    fn rle_emit_translates_to_origin() {
        let g = glider().translate(-7, 12);
        assert_eq!(emit_rle(&g), "x = 3, y = 3\nbo$2bo$3o!");
        assert_eq!(parse_rle(&emit_rle(&g)).unwrap(), glider());
    }

    #[test]
    fn rle_wraps_long_lines() {
        let c: LifeConfig = (0..200).map(|i| Cell::new(2 * i, 0)).collect();
        let text = emit_rle(&c);
        assert!(text.lines().all(|l| l.len() <= RLE_LINE_WIDTH));
        assert_eq!(parse_rle(&text).unwrap(), c);
    }

    #[test]
    fn rle_errors_carry_positions() {
        let e = parse_rle("x = 3, y = 1\n3o").unwrap_err();
        assert_eq!(e.kind, RleErrorKind::MissingTerminator);
        let e = parse_rle("x = 3, y = 1\n2oz!").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (2, 3, RleErrorKind::UnknownSymbol('z')));
        let e = parse_rle("# only comments\n").unwrap_err();
        assert_eq!(e.kind, RleErrorKind::MissingHeader);
        let e = parse_rle("x = three, y = 1\no!").unwrap_err();
        assert_eq!((e.line, e.kind), (1, RleErrorKind::MalformedHeader));
        let e = parse_rle("3o!").unwrap_err();
        assert_eq!(e.kind, RleErrorKind::MissingHeader);
    }

    #[test]
    fn grid_rendering() {
        let g = glider().translate(-1, 2);
        assert_eq!(g.render_grid(), "origin=(-1,2)\n.#.\n..#\n###\n");
        assert_eq!(LifeConfig::empty().render_grid(), "origin=(0,0) empty\n");
    }
}
