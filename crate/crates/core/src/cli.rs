//! Game files, command dispatch and reports for the `bimatrix` binary.
//!
//! Game file grammar: the first non-comment line holds `m n`, followed by
//! `m` rows of `n` entries of `A` and then `m` rows of `n` entries of `B`.
//! Entries are decimal integers or `p/q`; `#` starts a comment that runs to
//! the end of the line. Rows may not be split across lines.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::enumeration::{
    check_nondegeneracy, enumerate_equilibria, label_ids, support_enumeration, DegeneracyReport,
    EquilibriumSet,
};
use crate::error::{Error, Result};
use crate::exact::{approx, format_rational, Rational, RationalMatrix};
use crate::game::{
    is_equilibrium, polytope_form, rescale_to_strategy, BimatrixGame, Equilibrium, Label,
    LabeledPoint, MixedStrategy, Normalized, Player,
};
use crate::lh::{index, lh_all_labels, lh_from, lh_solve, Endpoint, LhPath};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameFile {
    pub m: usize,
    pub n: usize,
    pub a: RationalMatrix,
    pub b: RationalMatrix,
}

impl GameFile {
    pub fn into_game(self) -> Result<BimatrixGame> {
        BimatrixGame::new(self.a, self.b)
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

/// Non-empty lines with comments removed, each as its list of tokens.
fn token_lines(text: &str) -> Vec<Vec<Token<'_>>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut rest = content;
            let mut offset = 0;
            while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
                let after = &rest[start..];
                let len = after.find(char::is_whitespace).unwrap_or(after.len());
                tokens.push(Token {
                    text: &after[..len],
                    line: i + 1,
                    column: offset + start + 1,
                });
                offset += start + len;
                rest = &after[len..];
            }
            (!tokens.is_empty()).then_some(tokens)
        })
        .collect()
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn is_decimal_integer(s: &str) -> bool {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn parse_rational(tok: &Token<'_>) -> Result<Rational> {
    let bad = |msg: &str| parse_error(tok.line, tok.column, format!("{msg}: `{}`", tok.text));
    match tok.text.split_once('/') {
        None => {
            if !is_decimal_integer(tok.text) {
                return Err(bad("not an integer or p/q rational"));
            }
            Ok(Rational::from_integer(BigInt::from_str(tok.text).map_err(|_| bad("bad integer"))?))
        }
        Some((p, q)) => {
            if !is_decimal_integer(p) || !q.bytes().all(|b| b.is_ascii_digit()) || q.is_empty() {
                return Err(bad("not an integer or p/q rational"));
            }
            let p = BigInt::from_str(p).map_err(|_| bad("bad numerator"))?;
            let q = BigInt::from_str(q).map_err(|_| bad("bad denominator"))?;
            if !q.is_positive() {
                return Err(bad("denominator must be positive"));
            }
            Ok(Rational::new(p, q))
        }
    }
}

fn parse_count(tok: &Token<'_>, what: &str) -> Result<usize> {
    tok.text
        .parse::<usize>()
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| parse_error(tok.line, tok.column, format!("{what} must be a positive integer")))
}

pub fn parse_game(text: &str) -> Result<GameFile> {
    let lines = token_lines(text);
    let Some(header) = lines.first() else {
        return Err(parse_error(1, 1, "empty game file"));
    };
    if header.len() != 2 {
        let t = &header[0];
        return Err(parse_error(t.line, t.column, "header must be `m n`"));
    }
    let m = parse_count(&header[0], "row count")?;
    let n = parse_count(&header[1], "column count")?;

    let body = &lines[1..];
    let mut matrices = Vec::with_capacity(2);
    for (which, chunk_start) in [("A", 0), ("B", m)] {
        let mut entries = Vec::with_capacity(m * n);
        for r in 0..m {
            let Some(row) = body.get(chunk_start + r) else {
                let line = body.last().map_or(header[0].line, |l| l[0].line) + 1;
                return Err(parse_error(line, 1, format!("missing row {} of {which}", r + 1)));
            };
            if row.len() != n {
                return Err(parse_error(
                    row[0].line,
                    row[0].column,
                    format!("row {} of {which} has {} entries, expected {n}", r + 1, row.len()),
                ));
            }
            for tok in row {
                entries.push(parse_rational(tok)?);
            }
        }
        matrices.push(RationalMatrix::new(m, n, entries)?);
    }
    if let Some(extra) = body.get(2 * m) {
        return Err(parse_error(extra[0].line, extra[0].column, "unexpected extra row"));
    }
    let b = matrices.pop().expect("two matrices");
    let a = matrices.pop().expect("two matrices");
    Ok(GameFile { m, n, a, b })
}

/// An equilibrium file: one line with `x`, one line with `y`.
pub fn parse_strategy_pair(text: &str, m: usize, n: usize) -> Result<(MixedStrategy, MixedStrategy)> {
    let lines = token_lines(text);
    if lines.len() != 2 {
        let line = lines.get(2).map_or(1, |l| l[0].line);
        return Err(parse_error(line, 1, "expected exactly two lines: x then y"));
    }
    let mut out = Vec::new();
    for (row, (len, owner)) in lines.iter().zip([(m, Player::One), (n, Player::Two)]) {
        if row.len() != len {
            return Err(parse_error(
                row[0].line,
                row[0].column,
                format!("expected {len} probabilities, found {}", row.len()),
            ));
        }
        let probs = row.iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
        out.push(
            MixedStrategy::new(owner, probs)
                .map_err(|e| parse_error(row[0].line, row[0].column, e.to_string()))?,
        );
    }
    let y = out.pop().expect("two strategies");
    let x = out.pop().expect("two strategies");
    Ok((x, y))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Solve {
        label: Option<usize>,
        from: Option<(MixedStrategy, MixedStrategy)>,
        trace: bool,
        all_labels: bool,
    },
    Enumerate,
    SupportEnum,
    Index,
    Check,
}

impl Command {
    pub fn echo(&self) -> String {
        match self {
            Command::Solve {
                label,
                from,
                trace,
                all_labels,
            } => {
                let mut s = String::from("solve");
                if *all_labels {
                    s.push_str(" --all-labels");
                } else {
                    let _ = write!(s, " --label {}", label.unwrap_or(1));
                }
                if from.is_some() {
                    s.push_str(" --from-equilibrium");
                }
                if *trace {
                    s.push_str(" --trace");
                }
                s
            }
            Command::Enumerate => "enumerate".into(),
            Command::SupportEnum => "support-enum".into(),
            Command::Index => "index".into(),
            Command::Check => "check".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameReport {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    pub offset_a: String,
    pub offset_b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquilibriumReport {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub payoff1: String,
    pub payoff2: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetReport {
    pub p_vertices: Vec<usize>,
    pub q_vertices: Vec<usize>,
    /// Rescaled mixed strategies of the P-vertices.
    pub x_vertices: Vec<Vec<String>>,
    pub y_vertices: Vec<Vec<String>>,
    /// Label sets of the same vertices.
    pub x_labels: Vec<Vec<usize>>,
    pub y_labels: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub polytope: String,
    pub coordinates: Vec<String>,
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathReport {
    pub missing_label: usize,
    pub start: String,
    pub end: String,
    pub steps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub game: GameReport,
    pub equilibria: Vec<EquilibriumReport>,
    pub subsets: Vec<SubsetReport>,
    pub components: Vec<Vec<usize>>,
    pub degenerate: Option<bool>,
    pub witnesses: Vec<PointReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<PathReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn matrix_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| strings(m.row(r))).collect()
}

fn equilibrium_report(e: &Equilibrium) -> EquilibriumReport {
    EquilibriumReport {
        x: strings(e.x.probabilities()),
        y: strings(e.y.probabilities()),
        payoff1: format_rational(&e.u),
        payoff2: format_rational(&e.v),
        index: e.index.map(|s| s.value()),
    }
}

fn point_report(p: &LabeledPoint) -> PointReport {
    PointReport {
        polytope: p.polytope.symbol().to_string(),
        coordinates: strings(&p.coordinates),
        labels: label_ids(&p.labels),
    }
}

fn endpoint_text(end: &Endpoint) -> String {
    match end.equilibrium() {
        None => "artificial".into(),
        Some(e) => format!(
            "({}), ({})",
            strings(e.x.probabilities()).join(", "),
            strings(e.y.probabilities()).join(", ")
        ),
    }
}

fn path_report(p: &LhPath) -> PathReport {
    PathReport {
        missing_label: p.missing_label.0,
        start: endpoint_text(&p.start),
        end: endpoint_text(&p.end),
        steps: p.steps.iter().map(ToString::to_string).collect(),
    }
}

/// Same strategies, payoffs and index measured in the original game.
fn in_original(original: &BimatrixGame, e: &Equilibrium) -> Equilibrium {
    let mut out = Equilibrium::new(original, e.x.clone(), e.y.clone());
    out.index = e.index;
    out
}

pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

struct Run<'a> {
    original: &'a BimatrixGame,
    normalized: Normalized,
    report: Report,
}

impl<'a> Run<'a> {
    fn new(game: &'a BimatrixGame, command: &Command) -> Self {
        let normalized = polytope_form(game);
        let report = Report {
            command: command.echo(),
            game: GameReport {
                m: game.m(),
                n: game.n(),
                a: matrix_strings(game.a()),
                b: matrix_strings(game.b()),
                offset_a: format_rational(&normalized.offset_a),
                offset_b: format_rational(&normalized.offset_b),
            },
            equilibria: Vec::new(),
            subsets: Vec::new(),
            components: Vec::new(),
            degenerate: None,
            witnesses: Vec::new(),
            paths: Vec::new(),
            notes: Vec::new(),
            error: None,
        };
        Run {
            original: game,
            normalized,
            report,
        }
    }

    fn set_degeneracy(&mut self, d: &DegeneracyReport) {
        self.report.degenerate = Some(d.degenerate);
        self.report.witnesses = d.witnesses.iter().map(point_report).collect();
    }

    fn push_equilibria<'e>(&mut self, eqs: impl IntoIterator<Item = &'e Equilibrium>) {
        let mut eqs: Vec<Equilibrium> = eqs.into_iter().map(|e| in_original(self.original, e)).collect();
        eqs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.report.equilibria.extend(eqs.iter().map(equilibrium_report));
    }

    fn solve(&mut self, label: Option<usize>, from: &Option<(MixedStrategy, MixedStrategy)>, trace: bool, all: bool) -> Result<()> {
        let g = self.normalized.game.clone();
        if all {
            let sweep = lh_all_labels(&g)?;
            self.report.degenerate = Some(sweep.degenerate);
            self.push_equilibria(&sweep.equilibria);
            if trace {
                self.report.paths = sweep.paths.iter().map(path_report).collect();
            }
            return Ok(());
        }
        let k = Label(label.unwrap_or(1));
        let path = match from {
            None => {
                let (e, path) = lh_solve(&g, k)?;
                self.push_equilibria([&e]);
                path
            }
            Some((x, y)) => {
                if !is_equilibrium(self.original, x, y) {
                    return Err(Error::NotAnEquilibrium);
                }
                let start = Equilibrium::new(&g, x.clone(), y.clone());
                let (end, path) = lh_from(&g, &start, k)?;
                match end.equilibrium() {
                    Some(e) => self.push_equilibria([e]),
                    None => self.report.notes.push("path ends at the artificial equilibrium".into()),
                }
                path
            }
        };
        if trace {
            self.report.paths.push(path_report(&path));
        }
        Ok(())
    }

    fn enumerate(&mut self, set: &EquilibriumSet) {
        self.push_equilibria(&set.equilibria);
        let rescaled = |p: &LabeledPoint| {
            rescale_to_strategy(p)
                .map(|(s, _)| strings(s.probabilities()))
                .unwrap_or_default()
        };
        self.report.subsets = set
            .subsets
            .iter()
            .map(|s| SubsetReport {
                p_vertices: s.p_vertices.iter().copied().collect(),
                q_vertices: s.q_vertices.iter().copied().collect(),
                x_vertices: s.p_vertices.iter().map(|&i| rescaled(&set.table.p_vertices[i])).collect(),
                y_vertices: s.q_vertices.iter().map(|&i| rescaled(&set.table.q_vertices[i])).collect(),
                x_labels: s.p_vertices.iter().map(|&i| label_ids(&set.table.p_vertices[i].labels)).collect(),
                y_labels: s.q_vertices.iter().map(|&i| label_ids(&set.table.q_vertices[i].labels)).collect(),
            })
            .collect();
        self.report.components = set
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .filter_map(|s| set.subsets.iter().position(|t| t == s))
                    .collect()
            })
            .collect();
        self.set_degeneracy(&set.degeneracy);
        if set.table.oversized {
            self.report.notes.push(format!(
                "vertex enumeration examined {} binding-set candidates",
                set.table.candidates_examined
            ));
        }
    }

    fn dispatch(&mut self, command: &Command) -> Result<()> {
        match command {
            Command::Solve {
                label,
                from,
                trace,
                all_labels,
            } => self.solve(*label, from, *trace, *all_labels),
            Command::Enumerate => {
                let set = enumerate_equilibria(self.original)?;
                self.enumerate(&set);
                Ok(())
            }
            Command::SupportEnum => {
                let eqs = support_enumeration(self.original)?;
                self.report.degenerate = Some(false);
                self.push_equilibria(&eqs);
                Ok(())
            }
            Command::Index => {
                let set = enumerate_equilibria(self.original)?;
                self.set_degeneracy(&set.degeneracy);
                if set.degeneracy.degenerate {
                    return Err(Error::Degenerate(Box::new(set.degeneracy.clone())));
                }
                let g = &self.normalized.game;
                let indexed = set
                    .equilibria
                    .iter()
                    .map(|e| {
                        let mut e = e.clone();
                        e.index = Some(index(g, &e)?);
                        Ok(e)
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.push_equilibria(&indexed);
                Ok(())
            }
            Command::Check => {
                let d = check_nondegeneracy(&self.normalized.game)?;
                self.set_degeneracy(&d);
                Ok(())
            }
        }
    }
}

/// Runs `command` on `game`. Failures are reported inside the returned
/// report together with the exit code.
pub fn run(game: &BimatrixGame, command: &Command) -> Outcome {
    let mut run = Run::new(game, command);
    let exit_code = match run.dispatch(command) {
        Ok(()) => EXIT_OK,
        Err(Error::Degenerate(report)) => {
            run.set_degeneracy(&report);
            run.report.error = Some("game is degenerate; this command needs a nondegenerate game".into());
            EXIT_DEGENERATE
        }
        Err(e) => {
            run.report.error = Some(e.to_string());
            EXIT_USAGE
        }
    };
    Outcome {
        report: run.report,
        exit_code,
    }
}

fn approx_list(values: &[String]) -> String {
    values
        .iter()
        .map(|s| {
            let r = parse_rational(&Token { text: s, line: 0, column: 0 }).unwrap_or_else(|_| Rational::zero());
            format!("{:.6}", approx(&r))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(
            s,
            "game: {}x{} (internal payoff offsets: A +{}, B +{})",
            self.game.m, self.game.n, self.game.offset_a, self.game.offset_b
        );
        if let Some(err) = &self.error {
            let _ = writeln!(s, "error: {err}");
        }
        if !self.equilibria.is_empty() || self.error.is_none() {
            let _ = writeln!(s, "equilibria: {}", self.equilibria.len());
        }
        for (i, e) in self.equilibria.iter().enumerate() {
            let _ = write!(
                s,
                "  #{} x = ({})  y = ({})  payoffs = ({}, {})",
                i + 1,
                e.x.join(", "),
                e.y.join(", "),
                e.payoff1,
                e.payoff2
            );
            if let Some(ix) = e.index {
                let _ = write!(s, "  index = {}", if ix > 0 { "+1" } else { "-1" });
            }
            let _ = writeln!(
                s,
                "\n      approx: payoffs ~ ({})",
                approx_list(&[e.payoff1.clone(), e.payoff2.clone()])
            );
        }
        if !self.subsets.is_empty() {
            let _ = writeln!(s, "maximal Nash subsets: {}", self.subsets.len());
            for (i, sub) in self.subsets.iter().enumerate() {
                let show = |vs: &[Vec<String>], ls: &[Vec<usize>]| {
                    vs.iter()
                        .zip(ls)
                        .map(|(v, l)| format!("({}) {l:?}", v.join(", ")))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let _ = writeln!(
                    s,
                    "  #{} conv{{{}}} x conv{{{}}}",
                    i + 1,
                    show(&sub.x_vertices, &sub.x_labels),
                    show(&sub.y_vertices, &sub.y_labels)
                );
            }
        }
        if !self.components.is_empty() {
            let _ = writeln!(s, "components: {}", self.components.len());
            for (i, c) in self.components.iter().enumerate() {
                let ids: Vec<String> = c.iter().map(|k| format!("#{}", k + 1)).collect();
                let _ = writeln!(s, "  #{} subsets {}", i + 1, ids.join(" "));
            }
        }
        if let Some(deg) = self.degenerate {
            let _ = writeln!(s, "degenerate: {}", if deg { "yes" } else { "no" });
            for w in &self.witnesses {
                let _ = writeln!(
                    s,
                    "  witness in {}: ({}) labels {:?}",
                    w.polytope,
                    w.coordinates.join(", "),
                    w.labels
                );
            }
        }
        for p in &self.paths {
            let _ = writeln!(s, "path for missing label {}: {} -> {}", p.missing_label, p.start, p.end);
            for step in &p.steps {
                let _ = writeln!(s, "{step}");
            }
        }
        for note in &self.notes {
            let _ = writeln!(s, "note: {note}");
        }
        s
    }
}
