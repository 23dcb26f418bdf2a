//! Machine-readable result emission. Big floats are rendered as decimal
//! strings so reports survive any JSON parser untouched; two runs with the
//! same parameters, precision and version produce byte-identical output
//! apart from the timestamp field.

use crate::asymptotics::AsymBreakdown;
use crate::error::Result;
use crate::inequalities::{BoundLedger, Constants, K3Bounds, McPair, Threshold};
use rug::{Complex, Float};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

/// Decimal rendering with enough digits to reconstruct the float exactly
/// at its own precision.
pub fn float_str(v: &Float) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    v.to_string_radix(10, None)
}

pub fn complex_str(v: &Complex) -> Value {
    json!({ "re": float_str(v.real()), "im": float_str(v.imag()) })
}

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
    pub prec: u32,
    pub created_at: String,
}

impl ToolInfo {
    pub fn new(prec: u32) -> Self {
        ToolInfo {
            name: "kcrank",
            version: env!("CARGO_PKG_VERSION"),
            prec,
            created_at: chrono::Utc::now().to_rfc3339(),
        }
    }
}

/// Envelope for every machine report the CLI emits.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub op: String,
    pub params: BTreeMap<String, String>,
    pub values: Value,
}

impl Report {
    pub fn new(op: &str, prec: u32, params: &[(&str, String)], values: Value) -> Self {
        Report {
            tool: ToolInfo::new(prec),
            op: op.to_string(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            values,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_json()?.as_bytes())?;
        f.write_all(b"\n")?;
        Ok(())
    }
}

/// One row of a sweep table; `margin` stays empty where no inequality
/// margin applies.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: i64,
    pub exact: String,
    pub asym: String,
    pub abs_err: String,
    pub rel_err: String,
    pub margin: Option<String>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,exact,asym,abs_err,rel_err,margin\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.exact,
            r.asym,
            r.abs_err,
            r.rel_err,
            r.margin.as_deref().unwrap_or("")
        ));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

pub fn breakdown_value(b: &AsymBreakdown) -> Value {
    json!({
        "k": b.k, "a": b.a, "c": b.c, "n": b.n, "pmax": b.pmax,
        "main_term": float_str(&b.main_term),
        "b_terms": b.b_terms.iter().map(|t| json!({
            "beta": t.beta, "p": t.p, "value": complex_str(&t.value),
        })).collect::<Vec<_>>(),
        "d_terms": b.d_terms.iter().map(|t| json!({
            "beta": t.beta, "p": t.p, "r": t.r,
            "sign": t.sign.label(),
            "delta": t.delta.to_string(),
            "m": t.m.to_string(),
            "m_is_integer": t.m_is_integer,
            "value": complex_str(&t.value),
        })).collect::<Vec<_>>(),
        "total": complex_str(&b.total),
        "last_terms": {
            "a_line": float_str(&b.last_terms.a_line),
            "b_line": float_str(&b.last_terms.b_line),
            "d_line": float_str(&b.last_terms.d_line),
        },
    })
}

pub fn ledger_value(l: &BoundLedger) -> Value {
    json!({
        "a": l.a, "b": l.b, "c": l.c, "k": l.k, "n": l.n,
        "delta0": l.delta0.to_string(),
        "t1": float_str(&l.t1),
        "ttilde": l.ttilde.iter().map(float_str).collect::<Vec<_>>(),
        "weights": l.weights.to_vec(),
        "weighted_sum": float_str(&l.weighted_sum),
        "margin": float_str(&l.margin),
    })
}

pub fn threshold_value(t: &Threshold) -> Value {
    match t {
        Threshold::Found {
            n,
            margin,
            prev_margin,
        } => json!({
            "status": "found",
            "n": n,
            "margin": float_str(margin),
            "prev_margin": prev_margin.as_ref().map(float_str),
        }),
        Threshold::CapExceeded { nmax, last_margin } => json!({
            "status": "cap-exceeded",
            "nmax": nmax,
            "last_margin": float_str(last_margin),
        }),
    }
}

pub fn constants_value(c: &Constants) -> Value {
    json!({
        "k": c.k,
        "c1": float_str(&c.c1), "c1_tail": float_str(&c.c1_tail),
        "c2": float_str(&c.c2), "c2_tail": float_str(&c.c2_tail),
        "c3": float_str(&c.c3), "c3_tail": float_str(&c.c3_tail),
    })
}

pub fn k3_bounds_value(b: &K3Bounds) -> Value {
    json!({
        "c": b.c, "n": b.n,
        "mu": float_str(&b.mu),
        "delta0": b.delta0.to_string(),
        "g1_bound": float_str(&b.g1_bound),
        "g2_bound": float_str(&b.g2_bound),
        "err_bound": float_str(&b.err_bound),
        "p3_lo": float_str(&b.p3_lo),
        "p3_hi": float_str(&b.p3_hi),
        "p3_lo_displayed": float_str(&b.p3_lo_displayed),
        "p3_hi_displayed": float_str(&b.p3_hi_displayed),
        "m3_lo_factor": float_str(&b.m3_lo_factor),
        "m3_hi_factor": float_str(&b.m3_hi_factor),
        "m3_gate": float_str(&b.m3_gate),
        "rc": float_str(&b.rc),
    })
}

pub fn mc_value(m: &McPair) -> Value {
    json!({
        "c": m.c,
        "theorem_variant": float_str(&m.theorem),
        "proof_variant": float_str(&m.proof),
        "denominator_identity": m.denominator_identity,
        "note": "the theorem display and its proof disagree on the leading constant (4.0102e6 vs 4.0201e6); both are reported",
    })
}
