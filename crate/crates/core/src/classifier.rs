//! The dichotomy as a decision procedure.
//!
//! A template is classified on its core. A one-element core is trivially
//! tractable. Otherwise the H-matrix of the core (with `bot` and `top`
//! columns) is tested for closure under majority, minority, meet and join,
//! in that order. Majority or minority closure gives tractability. Meet or
//! join closure gives tractability only when row 0 lies pointwise below
//! row 1; everything else is NP-complete.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    build_h_matrix, closed_under, compute_core, row_string, tuple_leq, BooleanOperation,
    ClosureReport, Core, HMatrix, Row,
};
use crate::model::{Element, Template};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TractabilityReason {
    MajorityClosed,
    MinorityClosed,
    MeetClosedOrdered,
    JoinClosedOrdered,
    DegenerateCore,
}

impl TractabilityReason {
    pub fn name(self) -> &'static str {
        match self {
            TractabilityReason::MajorityClosed => "MajorityClosed",
            TractabilityReason::MinorityClosed => "MinorityClosed",
            TractabilityReason::MeetClosedOrdered => "MeetClosedOrdered",
            TractabilityReason::JoinClosedOrdered => "JoinClosedOrdered",
            TractabilityReason::DegenerateCore => "DegenerateCore",
        }
    }

    /// The Boolean polymorphism licensing this reason, if any.
    pub fn operation(self) -> Option<BooleanOperation> {
        match self {
            TractabilityReason::MajorityClosed => Some(BooleanOperation::Major),
            TractabilityReason::MinorityClosed => Some(BooleanOperation::Minor),
            TractabilityReason::MeetClosedOrdered => Some(BooleanOperation::Meet),
            TractabilityReason::JoinClosedOrdered => Some(BooleanOperation::Join),
            TractabilityReason::DegenerateCore => None,
        }
    }
}

impl std::fmt::Display for TractabilityReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A column where row 0 has a 1 and row 1 has a 0, i.e. a function with
/// `f(0) = 1` and `f(1) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderViolation {
    pub coordinate: usize,
    pub function: String,
}

/// Why one of the four operations does not yield tractability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    NotClosed { labels: Vec<Element>, image: Row },
    /// Closed, but the first two rows are not ordered.
    OrderViolated(OrderViolation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hardness {
    pub major: Evidence,
    pub minor: Evidence,
    pub meet: Evidence,
    pub join: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Tractable(TractabilityReason),
    NpComplete(Hardness),
}

impl Verdict {
    pub fn reason(&self) -> Option<TractabilityReason> {
        match self {
            Verdict::Tractable(r) => Some(*r),
            Verdict::NpComplete(_) => None,
        }
    }

    pub fn is_tractable(&self) -> bool {
        matches!(self, Verdict::Tractable(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub core: Core,
    /// H-matrix of the (renamed) core.
    pub matrix: HMatrix,
    /// Closure verdicts in the order major, minor, meet, join.
    pub closures: [(BooleanOperation, ClosureReport); 4],
    /// `None` when the core has a single element.
    pub order: Option<Result<(), OrderViolation>>,
}

fn order_check(m: &HMatrix) -> Result<(), OrderViolation> {
    let (a, b) = (m.row(0), m.row(1));
    if tuple_leq(a, b).expect("rows of one matrix") {
        return Ok(());
    }
    let coordinate = (0..m.width())
        .find(|&i| a[i] && !b[i])
        .expect("unordered rows differ somewhere");
    Err(OrderViolation {
        coordinate,
        function: m.columns()[coordinate].clone(),
    })
}

pub fn classify(tmpl: &Template) -> Classification {
    let core = compute_core(tmpl);
    let matrix = build_h_matrix(&core.template);
    let closures = BooleanOperation::ALL.map(|op| (op, closed_under(&matrix, op)));

    if core.retraction.is_degenerate() {
        return Classification {
            verdict: Verdict::Tractable(TractabilityReason::DegenerateCore),
            core,
            matrix,
            closures,
            order: None,
        };
    }

    let order = order_check(&matrix);
    let closed = |i: usize| closures[i].1.is_closed();
    let verdict = if closed(0) {
        Verdict::Tractable(TractabilityReason::MajorityClosed)
    } else if closed(1) {
        Verdict::Tractable(TractabilityReason::MinorityClosed)
    } else if closed(2) && order.is_ok() {
        Verdict::Tractable(TractabilityReason::MeetClosedOrdered)
    } else if closed(3) && order.is_ok() {
        Verdict::Tractable(TractabilityReason::JoinClosedOrdered)
    } else {
        let evidence = |i: usize| match &closures[i].1 {
            ClosureReport::Witness { labels, image } => Evidence::NotClosed {
                labels: labels.clone(),
                image: image.clone(),
            },
            ClosureReport::Closed => Evidence::OrderViolated(
                order.clone().expect_err("closed semilattice without order violation is tractable"),
            ),
        };
        Verdict::NpComplete(Hardness {
            major: evidence(0),
            minor: evidence(1),
            meet: evidence(2),
            join: evidence(3),
        })
    };
    Classification {
        verdict,
        core,
        matrix,
        closures,
        order: Some(order),
    }
}

impl Classification {
    /// `P <reason>` or `NP-complete`.
    pub fn verdict_line(&self) -> String {
        match &self.verdict {
            Verdict::Tractable(r) => format!("P {r}"),
            Verdict::NpComplete(_) => "NP-complete".to_string(),
        }
    }
}

/// A rendered classification trace.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

fn closure_json(report: &ClosureReport) -> Value {
    match report {
        ClosureReport::Closed => json!({ "closed": true }),
        ClosureReport::Witness { labels, image } => json!({
            "closed": false,
            "labels": labels,
            "image": row_string(image),
        }),
    }
}

fn branch_text(c: &Classification) -> String {
    match &c.verdict {
        Verdict::Tractable(TractabilityReason::DegenerateCore) => {
            "P: the core has a single element, every pin-consistent instance is satisfied by a constant assignment".into()
        }
        Verdict::Tractable(TractabilityReason::MajorityClosed) => "P: rows closed under majority".into(),
        Verdict::Tractable(TractabilityReason::MinorityClosed) => "P: rows closed under minority".into(),
        Verdict::Tractable(TractabilityReason::MeetClosedOrdered) => {
            "P: rows closed under meet and row(0) <= row(1)".into()
        }
        Verdict::Tractable(TractabilityReason::JoinClosedOrdered) => {
            "P: rows closed under join and row(0) <= row(1)".into()
        }
        Verdict::NpComplete(h) => {
            let semi = [(&h.meet, "meet"), (&h.join, "join")]
                .iter()
                .find(|(e, _)| matches!(e, Evidence::OrderViolated(_)))
                .map(|(_, name)| *name);
            match semi {
                Some(op) => format!(
                    "NP-complete: closed under {op} but neither majority nor minority, and row(0) is not below row(1)"
                ),
                None => "NP-complete: closed under none of majority, minority, meet, join".into(),
            }
        }
    }
}

/// Renders the pipeline trace of a classification.
pub fn explain(c: &Classification) -> Report {
    let r = &c.core.retraction;
    let mut text = String::new();
    let _ = writeln!(text, "verdict: {}", c.verdict_line());
    if r.is_identity() {
        let _ = writeln!(text, "core: the template is its own core (identity retraction)");
    } else {
        let pairs: Vec<String> = r.map().iter().enumerate().map(|(d, p)| format!("{d}->{p}")).collect();
        let _ = writeln!(text, "retraction: {}", pairs.join(" "));
        if r.is_degenerate() {
            let _ = writeln!(
                text,
                "core: one element, original element {} (0 and 1 are identified)",
                r.image()[0]
            );
        } else {
            let names: Vec<String> = r
                .image()
                .iter()
                .enumerate()
                .map(|(i, d)| format!("{d} as {i}"))
                .collect();
            let _ = writeln!(text, "core: {} elements, original {}", r.image().len(), names.join(", "));
        }
    }
    let _ = writeln!(text, "core functions:");
    for f in c.core.template.functions() {
        let table: Vec<String> = f.table().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(text, "  {} = {}", f.name(), table.join(" "));
    }
    let _ = writeln!(text, "H-matrix:");
    for line in c.matrix.render().lines() {
        let _ = writeln!(text, "  {line}");
    }
    let _ = writeln!(text, "closure:");
    for (op, report) in &c.closures {
        match report {
            ClosureReport::Closed => {
                let _ = writeln!(text, "  {op}: closed");
            }
            ClosureReport::Witness { labels, image } => {
                let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
                let _ = writeln!(
                    text,
                    "  {op}: not closed, rows ({}) give {} which is not a row",
                    labels.join(", "),
                    row_string(image)
                );
            }
        }
    }
    match &c.order {
        None => {
            let _ = writeln!(text, "order: not applicable (one-element core)");
        }
        Some(order) => {
            let (a, b) = (row_string(c.matrix.row(0)), row_string(c.matrix.row(1)));
            match order {
                Ok(()) => {
                    let _ = writeln!(text, "order: row(0) = {a} <= row(1) = {b}: holds");
                }
                Err(v) => {
                    let f = &v.function;
                    let _ = writeln!(
                        text,
                        "order: row(0) = {a} <= row(1) = {b}: fails at column {f}, {f}(0) = 1 and {f}(1) = 0"
                    );
                    let _ = writeln!(
                        text,
                        "  graph {f} contains {{01,10}}, which is closed neither under conjunction nor under disjunction"
                    );
                }
            }
        }
    }
    let _ = writeln!(text, "branch: {}", branch_text(c));

    let witnesses: serde_json::Map<String, Value> = c
        .closures
        .iter()
        .map(|(op, rep)| (op.name().to_string(), closure_json(rep)))
        .chain(std::iter::once((
            "order".to_string(),
            match &c.order {
                None => Value::Null,
                Some(Ok(())) => json!({ "holds": true }),
                Some(Err(v)) => json!({
                    "holds": false,
                    "coordinate": v.coordinate,
                    "function": v.function,
                }),
            },
        )))
        .collect();
    let functions: serde_json::Map<String, Value> = c
        .core
        .template
        .functions()
        .iter()
        .map(|f| (f.name().to_string(), json!(f.table())))
        .collect();
    let json = json!({
        "verdict": match c.verdict { Verdict::Tractable(_) => "P", Verdict::NpComplete(_) => "NP-complete" },
        "reason": c.verdict.reason().map(|r| r.name()),
        "witnesses": witnesses,
        "core": {
            "size": c.core.template.size(),
            "degenerate": r.is_degenerate(),
            "retraction": r.map(),
            "image": r.image(),
            "functions": functions,
        },
        "matrix": {
            "columns": c.matrix.columns(),
            "rows": c.matrix.rows().iter().map(|row| row_string(row)).collect::<Vec<_>>(),
        },
    });
    Report { text, json }
}
