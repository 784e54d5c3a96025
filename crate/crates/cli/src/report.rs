//! JSON and TSV renderings of analytic reports.

use std::fmt::Write;

use num_rational::Rational64;
use serde_json::{json, Value};
use unorm_analytic::{ConditionKind, ContradictionReport, MembershipReport, PhiOrder, Status};
use unorm_padic::scalar::EXACT;
use unorm_series::LogOrder;

use crate::json::rational_value;

/// Precision of a condition, `"exact"` when no digits were lost.
fn precision_value(x: Rational64) -> Value {
    if x >= Rational64::from(EXACT / 2) {
        json!("exact")
    } else {
        rational_value(x)
    }
}

fn precision_str(x: Rational64) -> String {
    if x >= Rational64::from(EXACT / 2) {
        "exact".into()
    } else {
        x.to_string()
    }
}

pub fn status_str(s: &Status) -> String {
    match s {
        Status::Holds => "holds".into(),
        Status::Fails => "fails".into(),
        Status::Undecided(why) => format!("undecided: {why}"),
    }
}

pub fn order_value(o: &Option<PhiOrder>) -> Value {
    match o {
        None => Value::Null,
        Some(PhiOrder::Exact(r)) => json!({"exact": rational_value(*r)}),
        Some(PhiOrder::Zero) => json!("zero function"),
        Some(PhiOrder::Estimate { interval, reason }) => {
            json!({"estimate": [rational_value(interval.lo), rational_value(interval.hi)], "reason": reason})
        }
    }
}

pub fn log_order_value(o: LogOrder) -> Value {
    match o {
        LogOrder::Finite(r) => json!(r),
        LogOrder::AtLeast(r) => json!({"at_least": r}),
        LogOrder::Infinite => json!("infinite"),
    }
}

pub fn log_order_str(o: LogOrder) -> String {
    match o {
        LogOrder::Finite(r) => r.to_string(),
        LogOrder::AtLeast(r) => format!(">= {r}"),
        LogOrder::Infinite => "infinite".into(),
    }
}

fn opt_rational(r: Option<Rational64>) -> Value {
    r.map(rational_value).unwrap_or(Value::Null)
}

pub fn membership_value(r: &MembershipReport) -> Value {
    let conditions: Vec<Value> = r
        .conditions
        .iter()
        .map(|c| {
            json!({
                "j": c.j,
                "n": c.n,
                "kind": match c.kind { ConditionKind::Filtration => "filtration", ConditionKind::Vanishing => "vanishing" },
                "margin": opt_rational(c.margin),
                "precision": precision_value(c.precision),
                "status": status_str(&c.status),
            })
        })
        .collect();
    json!({
        "v": r.params.v,
        "J": r.params.j_set,
        "r": rational_value(r.params.r),
        "n_max": r.params.n_max,
        "scope": format!("member up to layer n = {}", r.params.n_max),
        "order": {
            "value": order_value(&r.order.order),
            "bound": rational_value(r.order.bound),
            "status": status_str(&r.order.status),
        },
        "psi": r.psi.as_ref().map(status_str),
        "conditions": conditions,
        "layer_verdict": r.layer_verdict().to_string(),
        "verdict": r.verdict.to_string(),
    })
}

pub fn membership_tsv(r: &MembershipReport) -> String {
    let mut s = String::from("j\tn\tkind\tmargin\tprecision\tstatus\n");
    for c in &r.conditions {
        let kind = match c.kind {
            ConditionKind::Filtration => "filtration",
            ConditionKind::Vanishing => "vanishing",
        };
        let margin = c.margin.map(|m| m.to_string()).unwrap_or_else(|| "zero".into());
        writeln!(s, "{}\t{}\t{kind}\t{margin}\t{}\t{}", c.j, c.n, precision_str(c.precision), status_str(&c.status)).unwrap();
    }
    let order = match &r.order.order {
        Some(o) => o.to_string(),
        None => "unknown".into(),
    };
    writeln!(s, "order\t{order}\t<= {}\t{}", r.order.bound, status_str(&r.order.status)).unwrap();
    if let Some(p) = &r.psi {
        writeln!(s, "psi\t{}", status_str(p)).unwrap();
    }
    writeln!(s, "verdict\t{} (up to layer {})", r.verdict, r.params.n_max).unwrap();
    s
}

pub fn contradiction_value(r: &ContradictionReport) -> Value {
    json!({
        "mode": r.mode.name(),
        "order_upper": rational_value(r.order_upper),
        "log_lower": r.log_lower,
        "log_observed": log_order_value(r.log_observed),
        "log_exact": match r.log_exact {
            None => Value::Null,
            Some(None) => json!("infinite"),
            Some(Some(e)) => json!(e),
        },
        "hypotheses": membership_value(&r.membership),
        "verdict": r.verdict.to_string(),
        "trail": r.trail,
    })
}

pub fn contradiction_text(r: &ContradictionReport) -> String {
    let mut s = String::new();
    writeln!(s, "mode\t{}", r.mode.name()).unwrap();
    writeln!(s, "order_upper\t{}", r.order_upper).unwrap();
    writeln!(s, "log_lower\t{}", r.log_lower).unwrap();
    writeln!(s, "log_observed\t{}", log_order_str(r.log_observed)).unwrap();
    if let Some(e) = r.log_exact {
        writeln!(s, "log_exact\t{}", e.map(|e| e.to_string()).unwrap_or_else(|| "infinite".into())).unwrap();
    }
    writeln!(s, "verdict\t{}", r.verdict).unwrap();
    for (i, t) in r.trail.iter().enumerate() {
        writeln!(s, "  {}. {t}", i + 1).unwrap();
    }
    s
}
