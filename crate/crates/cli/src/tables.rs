//! Reproduction harness for the published result tables.
//!
//! Expected values live in `data/tables.json` so that a tolerance change is
//! a data edit. Each row describes one solve; each cell is one comparison
//! against that solve.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use largen::analysis::{detect_divergence, fd_eigensolve, oscillation_bracket, DIVERGENCE_RUN};
use largen::potential::construct_potential;
use largen::{
    parse_potential, solve, BigReal, MassConvention, PrecisionContext, ProblemSpec, State,
};

pub const TABLE_DATA: &str = include_str!("../data/tables.json");

#[derive(Debug, Clone, Deserialize)]
pub struct TableData {
    pub version: u32,
    pub tables: Vec<TableSpec>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TableSpec {
    pub id: u32,
    pub title: String,
    pub mass: String,
    /// Added to computed orders before comparing with published orders.
    #[serde(default)]
    pub order_offset: i64,
    pub rows: Vec<RowSpec>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RowSpec {
    pub label: String,
    #[serde(default)]
    pub potential: Option<String>,
    #[serde(default)]
    pub construct: Option<ConstructSpec>,
    #[serde(default = "default_n", rename = "N")]
    pub n: u32,
    #[serde(default)]
    pub l: u32,
    #[serde(default)]
    pub state: u8,
    /// Overrides the table's mass convention.
    #[serde(default)]
    pub mass: Option<String>,
    /// Minimum working precision for this row.
    #[serde(default)]
    pub digits: Option<u32>,
    pub order: usize,
    /// Bracket centre: `"fd"` for the finite-difference eigenvalue or a
    /// decimal. Absent means the running mean of the sums.
    #[serde(default)]
    pub center: Option<String>,
    pub cells: Vec<CellSpec>,
}

fn default_n() -> u32 {
    3
}

#[derive(Debug, Clone, Deserialize)]
pub struct ConstructSpec {
    pub a: String,
    pub energy: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Published,
    Derived,
    ConventionAdjusted,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Published => "published",
            Source::Derived => "derived",
            Source::ConventionAdjusted => "convention-adjusted",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct CellSpec {
    #[serde(flatten)]
    pub check: Check,
    pub source: Source,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// P_order within `tol` of `expected`.
    PartialSum {
        order: usize,
        expected: String,
        tol: String,
    },
    /// Oscillation bracket endpoints within `tol` of the published pair and,
    /// when `order_tol` is given, the lower order within it.
    Bracket {
        expected: [String; 2],
        orders: [usize; 2],
        tol: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order_tol: Option<usize>,
    },
    /// Bracket straddles `target` and both endpoints lie inside the
    /// published pair widened by `tol`.
    Spread {
        expected: [String; 2],
        orders: [usize; 2],
        target: String,
        tol: String,
    },
    /// A divergence onset is detected.
    Diverges,
    /// The detected onset lies in `range` (inclusive).
    Onset { range: [usize; 2] },
    /// The finite-difference eigenvalue within `tol` of `expected`.
    Oracle { expected: String, tol: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub check: String,
    pub computed: String,
    pub expected: String,
    pub tolerance: String,
    pub source: Source,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowResult {
    pub label: String,
    pub potential: String,
    pub l: u32,
    pub state: u8,
    pub mass: String,
    pub order: usize,
    pub digits: u32,
    pub cells: Vec<CellResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableResult {
    pub id: u32,
    pub title: String,
    pub mass: String,
    pub rows: Vec<RowResult>,
}

impl TableResult {
    pub fn passed(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.cells)
            .filter(|c| c.pass)
            .count()
    }

    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).sum()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("table data is malformed: {0}")]
    Data(#[from] serde_json::Error),
    #[error("no table with id {0}")]
    Unknown(u32),
    #[error("row '{row}': {message}")]
    Row { row: String, message: String },
}

pub fn load() -> Result<TableData, TableError> {
    Ok(serde_json::from_str(TABLE_DATA)?)
}

pub fn table(id: u32) -> Result<TableSpec, TableError> {
    load()?
        .tables
        .into_iter()
        .find(|t| t.id == id)
        .ok_or(TableError::Unknown(id))
}

fn fmt(v: &BigReal) -> String {
    v.to_short_string(12)
}

/// Potential text for a row, constructing it when the row asks for that.
pub fn row_potential(
    row: &RowSpec,
    mass: MassConvention,
    ctx: &PrecisionContext,
) -> Result<String, TableError> {
    let bad = |message: String| TableError::Row {
        row: row.label.clone(),
        message,
    };
    match (&row.potential, &row.construct) {
        (Some(p), None) => Ok(p.clone()),
        (None, Some(c)) => {
            let a = ctx.parse(&c.a).map_err(|e| bad(e.to_string()))?;
            let e = ctx.parse(&c.energy).map_err(|e| bad(e.to_string()))?;
            Ok(construct_potential(&a, &e, mass, ctx).to_string())
        }
        _ => Err(bad(
            "exactly one of potential and construct is required".into()
        )),
    }
}

/// Runs one row and evaluates its cells.
pub fn run_row(table: &TableSpec, row: &RowSpec, digits: u32) -> Result<RowResult, TableError> {
    let bad = |message: String| TableError::Row {
        row: row.label.clone(),
        message,
    };
    let digits = row.digits.map_or(digits, |d| d.max(digits));
    let ctx = PrecisionContext::new(digits).map_err(|e| bad(e.to_string()))?;
    let mass: MassConvention = row
        .mass
        .as_deref()
        .unwrap_or(&table.mass)
        .parse()
        .map_err(|e: String| bad(e))?;
    let text = row_potential(row, mass, &ctx)?;
    let expr = parse_potential(&text).map_err(|e| bad(e.to_string()))?;
    let state =
        State::from_index(row.state).ok_or_else(|| bad("state must be 0, 1 or 2".into()))?;
    let spec = ProblemSpec::new(expr.clone(), row.n, row.l, state, mass, row.order, ctx)
        .map_err(|e| bad(e.to_string()))?;
    let num = |s: &str| ctx.parse(s).map_err(|e| bad(format!("{s}: {e}")));

    let mut result = RowResult {
        label: row.label.clone(),
        potential: text,
        l: row.l,
        state: row.state,
        mass: mass.label().to_string(),
        order: row.order,
        digits,
        cells: Vec::new(),
        error: None,
    };

    let fd = || fd_eigensolve(&expr, row.n, row.l, u32::from(row.state), mass);
    let solution = match solve(&spec) {
        Ok(s) => s,
        Err(e) => {
            result.error = Some(e.name().to_string());
            for cell in &row.cells {
                result.cells.push(CellResult {
                    check: check_name(&cell.check),
                    computed: format!("error {}", e.name()),
                    expected: String::new(),
                    tolerance: String::new(),
                    source: cell.source,
                    pass: false,
                    note: cell.note.clone(),
                });
            }
            return Ok(result);
        }
    };
    let sums = &solution.sums.sums;
    let onset = detect_divergence(sums, DIVERGENCE_RUN, &ctx);
    let center = match row.center.as_deref() {
        None => None,
        Some("fd") => match fd() {
            Ok(v) => Some(ctx.from_f64(v)),
            Err(e) => return Err(bad(format!("oracle failed: {e}"))),
        },
        Some(v) => Some(num(v)?),
    };
    let bracket = oscillation_bracket(sums, onset, center.as_ref()).ok();
    let offset = table.order_offset;
    let shifted = |o: usize| o as i64 + offset;

    for cell in &row.cells {
        let (computed, expected, tolerance, pass) = match &cell.check {
            Check::PartialSum {
                order,
                expected,
                tol,
            } => {
                let e = num(expected)?;
                let t = num(tol)?;
                match sums.get(order.wrapping_sub(1)) {
                    Some(p) => (
                        format!("P{order} = {}", fmt(p)),
                        expected.clone(),
                        tol.clone(),
                        (p - &e).abs() <= t,
                    ),
                    None => (
                        format!("P{order} missing"),
                        expected.clone(),
                        tol.clone(),
                        false,
                    ),
                }
            }
            Check::Bracket {
                expected,
                orders,
                tol,
                order_tol,
            } => {
                let t = num(tol)?;
                let (e0, e1) = (num(&expected[0])?, num(&expected[1])?);
                let want = format!(
                    "{} - {} @ {}-{}",
                    expected[0], expected[1], orders[0], orders[1]
                );
                let tolerance = match order_tol {
                    Some(o) => format!("{tol}, orders ±{o}"),
                    None => tol.clone(),
                };
                match &bracket {
                    Some(b) => {
                        let (lo, hi) = sorted(&b.low, &b.high);
                        let (elo, ehi) = sorted(&e0, &e1);
                        let order_ok = order_tol.is_none_or(|o| {
                            (shifted(b.order_low) - *orders.iter().min().unwrap() as i64)
                                .unsigned_abs()
                                <= o as u64
                        });
                        (
                            bracket_text(b, offset),
                            want,
                            tolerance,
                            (lo - elo).abs() <= t && (hi - ehi).abs() <= t && order_ok,
                        )
                    }
                    None => ("no bracket".into(), want, tolerance, false),
                }
            }
            Check::Spread {
                expected,
                orders,
                target,
                tol,
            } => {
                let t = num(tol)?;
                let (e0, e1) = (num(&expected[0])?, num(&expected[1])?);
                let target_v = num(target)?;
                let want = format!(
                    "{} - {} @ {}-{}, straddling {target}",
                    expected[0], expected[1], orders[0], orders[1]
                );
                match &bracket {
                    Some(b) => {
                        let (elo, ehi) = sorted(&e0, &e1);
                        let lo_edge = elo - &t;
                        let hi_edge = ehi + &t;
                        let inside = |v: &BigReal| *v >= lo_edge && *v <= hi_edge;
                        (
                            bracket_text(b, offset),
                            want,
                            tol.clone(),
                            b.straddles(&target_v) && inside(&b.low) && inside(&b.high),
                        )
                    }
                    None => ("no bracket".into(), want, tol.clone(), false),
                }
            }
            Check::Diverges => (
                onset.map_or("converges".into(), |n| format!("diverges from order {n}")),
                "diverges".into(),
                String::new(),
                onset.is_some(),
            ),
            Check::Onset { range } => (
                onset.map_or("no onset".into(), |n| format!("onset {n}")),
                format!("onset in {}..={}", range[0], range[1]),
                String::new(),
                onset.is_some_and(|n| n >= range[0] && n <= range[1]),
            ),
            Check::Oracle { expected, tol } => {
                let e = num(expected)?;
                let t = num(tol)?;
                match fd() {
                    Ok(v) => {
                        let v = ctx.from_f64(v);
                        (
                            format!("fd = {}", v.to_short_string(9)),
                            expected.clone(),
                            tol.clone(),
                            (v - e).abs() <= t,
                        )
                    }
                    Err(err) => (
                        format!("fd failed: {err}"),
                        expected.clone(),
                        tol.clone(),
                        false,
                    ),
                }
            }
        };
        result.cells.push(CellResult {
            check: check_name(&cell.check),
            computed,
            expected,
            tolerance,
            source: cell.source,
            pass,
            note: cell.note.clone(),
        });
    }
    Ok(result)
}

fn sorted<'a>(a: &'a BigReal, b: &'a BigReal) -> (&'a BigReal, &'a BigReal) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn bracket_text(b: &largen::analysis::Bracket, offset: i64) -> String {
    format!(
        "{} - {} @ {}-{}",
        b.low.to_short_string(9),
        b.high.to_short_string(9),
        b.order_low as i64 + offset,
        b.order_high as i64 + offset
    )
}

fn check_name(c: &Check) -> String {
    match c {
        Check::PartialSum { order, .. } => format!("P{order}"),
        Check::Bracket { .. } => "bracket".into(),
        Check::Spread { .. } => "spread".into(),
        Check::Diverges => "diverges".into(),
        Check::Onset { .. } => "onset".into(),
        Check::Oracle { .. } => "oracle".into(),
    }
}

/// Runs every row of `table` on up to `jobs` threads. Rows are reported in
/// data-file order whatever order they finish in.
pub fn run_table(table: &TableSpec, digits: u32, jobs: usize) -> Result<TableResult, TableError> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RowResult, TableError>>>> =
        table.rows.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, table.rows.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(row) = table.rows.get(i) else { break };
                let r = run_row(table, row, digits);
                *slots[i].lock().expect("slot lock") = Some(r);
            });
        }
    });
    let rows = slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("every row ran"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TableResult {
        id: table.id,
        title: table.title.clone(),
        mass: table.mass.clone(),
        rows,
    })
}

pub fn render_text(t: &TableResult) -> String {
    let mut out = format!("Table {}: {} [{}]\n", t.id, t.title, t.mass);
    for row in &t.rows {
        out.push_str(&format!(
            "\n{}  ({}; l={} state={} mass={} order={} digits={})\n",
            row.label, row.potential, row.l, row.state, row.mass, row.order, row.digits
        ));
        for c in &row.cells {
            let tol = if c.tolerance.is_empty() {
                String::new()
            } else {
                format!(" ± {}", c.tolerance)
            };
            out.push_str(&format!(
                "  {:<4} {:<9} {:<44} expected {}{} [{}]",
                if c.pass { "pass" } else { "FAIL" },
                c.check,
                c.computed,
                c.expected,
                tol,
                c.source.label()
            ));
            if let Some(n) = &c.note {
                out.push_str(&format!(" ({n})"));
            }
            out.push('\n');
        }
    }
    out.push_str(&format!("\n{} of {} cells pass\n", t.passed(), t.total()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only_row(t: &TableSpec, label: &str) -> RowSpec {
        t.rows.iter().find(|r| r.label == label).unwrap().clone()
    }

    #[test]
    fn every_row_names_one_potential_that_parses() {
        let ctx = PrecisionContext::new(30).unwrap();
        for t in load().unwrap().tables {
            let default: MassConvention = t.mass.parse().unwrap();
            for row in &t.rows {
                let mass = row.mass.as_deref().map_or(default, |m| m.parse().unwrap());
                let text = row_potential(row, mass, &ctx).unwrap();
                parse_potential(&text)
                    .unwrap_or_else(|e| panic!("table {} {}: {e}", t.id, row.label));
                assert!(!row.cells.is_empty(), "table {} {}", t.id, row.label);
            }
        }
    }

    #[test]
    fn row_digits_only_raise_the_precision() {
        let t = table(1).unwrap();
        let mut row = only_row(&t, "-1/r");
        row.order = 6;
        row.cells.clear();
        row.digits = Some(40);
        assert_eq!(run_row(&t, &row, 60).unwrap().digits, 60);
        assert_eq!(run_row(&t, &row, 30).unwrap().digits, 40);
    }

    #[test]
    fn bracket_orders_are_shifted_by_the_table_offset() {
        let mut t = table(8).unwrap();
        let row = t.rows[0].clone();
        let plain = run_row(&t, &row, 100).unwrap();
        t.order_offset = 3;
        let shifted = run_row(&t, &row, 100).unwrap();
        let orders = |s: &str| s.rsplit(' ').next().unwrap().to_string();
        let (a, b) = (
            orders(&plain.cells[0].computed),
            orders(&shifted.cells[0].computed),
        );
        let parse = |s: &str| -> Vec<i64> { s.split('-').map(|x| x.parse().unwrap()).collect() };
        let (pa, pb) = (parse(&a), parse(&b));
        assert_eq!(pb, vec![pa[0] + 3, pa[1] + 3]);
    }

    #[test]
    fn spread_needs_a_straddle() {
        let t = table(7).unwrap();
        let mut row = only_row(&t, "exp(-r^0.85)");
        let wide = Check::Spread {
            expected: ["0.9".into(), "1.1".into()],
            orders: [29, 30],
            target: "1".into(),
            tol: "0".into(),
        };
        let off_target = Check::Spread {
            expected: ["0.9".into(), "1.1".into()],
            orders: [29, 30],
            target: "1.05".into(),
            tol: "0".into(),
        };
        row.cells = [wide, off_target]
            .into_iter()
            .map(|check| CellSpec {
                check,
                source: Source::Derived,
                note: None,
            })
            .collect();
        let r = run_row(&t, &row, 100).unwrap();
        assert!(r.cells[0].pass);
        assert!(!r.cells[1].pass);
    }

    #[test]
    fn failed_solve_marks_every_cell() {
        let t = table(6).unwrap();
        let mut row = only_row(&t, "r^0.5");
        row.potential = Some("1/r".into());
        row.center = None;
        let r = run_row(&t, &row, 50).unwrap();
        assert_eq!(r.error.as_deref(), Some("NoMinimum"));
        assert!(r
            .cells
            .iter()
            .all(|c| !c.pass && c.computed.starts_with("error")));
    }
}
