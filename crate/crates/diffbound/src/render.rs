//! Constraint rendering and report serialization.
//!
//! Rendering contract (ASCII): one constraint per line, in the forms
//! `x = c`, `x in [a, b]`, `x <= c`, `x >= c`, `x - y = c`,
//! `x - y in [a, b]`, `x - y <= c`, and `bottom` for the empty state.
//! Everything is read off the closed form; difference lines that are
//! already implied by the printed interval bounds are suppressed, so a pair
//! like `y1 = 0, y2 >= 1` does not also print `y1 - y2 <= -1`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bound::{Bound, Coefficient};
use crate::boxdom::BoxEnv;

use crate::domain::NormalizedElement;
use crate::engine::{AnalysisResult, AssertVerdict, Verdict};
use crate::interval::{Interval, LowerBound};

fn render_interval_line<C: Coefficient>(name: &str, itv: &Interval<C>) -> Option<String> {
    match itv {
        Interval::Empty => None,
        Interval::Range { lo, hi } => match (lo, hi) {
            (LowerBound::MinusInfinity, Bound::PlusInfinity) => None,
            (LowerBound::Finite(a), Bound::Finite(b)) if a == b => {
                Some(format!("{name} = {}", a.render()))
            }
            (LowerBound::Finite(a), Bound::Finite(b)) => {
                Some(format!("{name} in [{}, {}]", a.render(), b.render()))
            }
            (LowerBound::Finite(a), Bound::PlusInfinity) => {
                Some(format!("{name} >= {}", a.render()))
            }
            (LowerBound::MinusInfinity, Bound::Finite(b)) => {
                Some(format!("{name} <= {}", b.render()))
            }
        },
    }
}

/// Renders a normalized DBM element as constraint lines in a deterministic
/// order: per-variable bounds first (by index), then pairwise difference
/// bounds (by index pair) that are tighter than what the printed intervals
/// already imply.
pub fn dbm_constraint_lines<C: Coefficient>(
    elem: &NormalizedElement<C>,
    names: &[String],
) -> Vec<String> {
    let NormalizedElement::Closed(c) = elem else {
        return vec!["bottom".to_string()];
    };
    let dim = c.dim();
    assert_eq!(names.len(), dim - 1, "one name per program variable");
    let mut lines = Vec::new();
    let projections: Vec<Interval<C>> = (1..dim).map(|k| c.project(k)).collect();
    for (k, itv) in projections.iter().enumerate() {
        if let Some(line) = render_interval_line(&names[k], itv) {
            lines.push(line);
        }
    }
    // Difference v_i - v_j for i < j: upper bound is entry (j, i), lower
    // bound the negated entry (i, j). A side is printed only when strictly
    // tighter than the bound implied by the intervals.
    for i in 1..dim {
        for j in (i + 1)..dim {
            let hi = c.get(j, i).clone();
            let lo = c.get(i, j).as_finite().map(|v| {
                v.checked_neg()
                    .expect("closed-form entries negate without overflow")
            });
            let (ivi, ivj) = (&projections[i - 1], &projections[j - 1]);
            let implied_hi: Bound<C> = match (ivi, ivj) {
                (
                    Interval::Range { hi: Bound::Finite(a), .. },
                    Interval::Range { lo: LowerBound::Finite(b), .. },
                ) => a
                    .checked_sub(b)
                    .map(Bound::Finite)
                    .unwrap_or(Bound::PlusInfinity),
                _ => Bound::PlusInfinity,
            };
            let implied_lo: Option<C> = match (ivi, ivj) {
                (
                    Interval::Range { lo: LowerBound::Finite(a), .. },
                    Interval::Range { hi: Bound::Finite(b), .. },
                ) => a.checked_sub(b),
                _ => None,
            };
            let keep_hi = hi.is_finite() && hi < implied_hi;
            let keep_lo = match (&lo, &implied_lo) {
                (Some(l), Some(il)) => l > il,
                (Some(_), None) => true,
                (None, _) => false,
            };
            let pair = format!("{} - {}", names[i - 1], names[j - 1]);
            match (keep_lo, keep_hi) {
                (true, true) => {
                    let l = lo.unwrap();
                    let Bound::Finite(h) = hi else { unreachable!() };
                    if l == h {
                        lines.push(format!("{pair} = {}", l.render()));
                    } else {
                        lines.push(format!(
                            "{pair} in [{}, {}]",
                            l.render(),
                            h.render()
                        ));
                    }
                }
                (false, true) => {
                    let Bound::Finite(h) = hi else { unreachable!() };
                    lines.push(format!("{pair} <= {}", h.render()));
                }
                (true, false) => {
                    // Only the lower side: print it in the other orientation.
                    lines.push(format!(
                        "{} - {} <= {}",
                        names[j - 1],
                        names[i - 1],
                        c.get(i, j)
                            .as_finite()
                            .expect("finite by keep_lo")
                            .render()
                    ));
                }
                (false, false) => {}
            }
        }
    }
    lines
}

/// Renders a box environment with the same per-variable contract.
pub fn box_constraint_lines<C: Coefficient>(env: &BoxEnv<C>, names: &[String]) -> Vec<String> {
    if env.is_bottom() {
        return vec!["bottom".to_string()];
    }
    let mut lines = Vec::new();
    for k in 1..env.dim() {
        if let Some(line) = render_interval_line(&names[k - 1], &env.interval(k)) {
            lines.push(line);
        }
    }
    lines
}

#[derive(Debug, Clone, Serialize)]
pub struct AssertJson {
    pub line: u32,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptionsJson {
    pub widening_delay: usize,
    pub descending_steps: usize,
    pub coefficients: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRowJson {
    pub point: String,
    pub var: String,
    pub dbm: String,
    pub interval: String,
    pub contained: bool,
}

/// Machine-readable report. Key order is fixed by field order and the
/// points map is sorted, so serialization is byte-stable across runs.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub points: BTreeMap<String, Vec<String>>,
    pub asserts: Vec<AssertJson>,
    pub domain: String,
    pub options: OptionsJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfg: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare: Option<Vec<CompareRowJson>>,
}

fn verdict_string(v: Verdict) -> String {
    match v {
        Verdict::Proved => "proved".to_string(),
        Verdict::Unknown => "unknown".to_string(),
    }
}

pub fn asserts_json(asserts: &[AssertVerdict]) -> Vec<AssertJson> {
    asserts
        .iter()
        .map(|a| AssertJson {
            line: a.line,
            verdict: verdict_string(a.verdict),
        })
        .collect()
}

/// Collects point label -> constraint lines from a DBM analysis.
pub fn dbm_points<C: Coefficient>(
    result: &AnalysisResult<NormalizedElement<C>>,
    labels: &[String],
    names: &[String],
) -> BTreeMap<String, Vec<String>> {
    labels
        .iter()
        .zip(result.values.iter())
        .map(|(label, v)| (label.clone(), dbm_constraint_lines(v, names)))
        .collect()
}

/// Collects point label -> constraint lines from a box analysis.
pub fn box_points<C: Coefficient>(
    result: &AnalysisResult<BoxEnv<C>>,
    labels: &[String],
    names: &[String],
) -> BTreeMap<String, Vec<String>> {
    labels
        .iter()
        .zip(result.values.iter())
        .map(|(label, v)| (label.clone(), box_constraint_lines(v, names)))
        .collect()
}

/// Text rendering of a report: each point followed by its indented
/// constraint lines, then the assert verdicts.
pub fn report_text(report: &Report) -> String {
    let mut out = String::new();
    if let Some(cfg) = &report.cfg {
        out.push_str("product cfg:\n");
        for line in cfg {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out.push('\n');
    }
    for (point, lines) in &report.points {
        out.push_str(point);
        out.push('\n');
        if lines.is_empty() {
            out.push_str("  top\n");
        }
        for line in lines {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
    }
    if !report.asserts.is_empty() {
        out.push_str("asserts:\n");
        for a in &report.asserts {
            out.push_str(&format!("  line {}: {}\n", a.line, a.verdict));
        }
    }
    if let Some(rows) = &report.compare {
        out.push_str("domain comparison (dbm vs interval):\n");
        for r in rows {
            out.push_str(&format!(
                "  {} {}: dbm {} interval {}{}\n",
                r.point,
                r.var,
                r.dbm,
                r.interval,
                if r.contained { "" } else { "  CONTAINMENT VIOLATION" }
            ));
        }
    }
    out
}
