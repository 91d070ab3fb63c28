//! Machine-readable (JSON) and text renderings of model values.
//!
//! Rationals are always strings `"p/q"` (or `"p"`), never floats.
//! Sequences use:
//!
//! * `FinSeq`: `{"1": "1/2", "4": "-3"}`, an index to rational map;
//! * `EvConstSeq`: `{"head": ["0"], "tail": "-1"}`;
//! * `LimFunctional`: `{"abs": {…}, "lim": "1"}`.

use serde_json::{json, Map, Value as Json};

use crate::certificates::{CertReport, GapReport, Membership, QuadOutcome};
use crate::error::{Error, Result};
use crate::exact::{parse_rat, EvConstSeq, FinSeq, LimFunctional, Rat};
use crate::expr::Value;
use crate::operators::NlPoint;

pub fn rat_json(r: &Rat) -> Json {
    Json::String(r.to_string())
}

pub fn finseq_json(x: &FinSeq) -> Json {
    let map: Map<String, Json> = x.iter().map(|(k, v)| (k.to_string(), rat_json(v))).collect();
    Json::Object(map)
}

pub fn evconst_json(y: &EvConstSeq) -> Json {
    json!({
        "head": y.head().iter().map(rat_json).collect::<Vec<_>>(),
        "tail": rat_json(y.tail()),
    })
}

pub fn limfunc_json(phi: &LimFunctional) -> Json {
    json!({ "abs": finseq_json(&phi.abs_part), "lim": rat_json(&phi.lim_coeff) })
}

pub fn quad_json(q: &QuadOutcome) -> Json {
    match q {
        QuadOutcome::Finite { value, witness } => json!({
            "kind": "finite",
            "value": rat_json(value),
            "witness": finseq_json(witness),
        }),
        QuadOutcome::Unbounded { ray } => json!({ "kind": "unbounded", "ray": finseq_json(ray) }),
    }
}

pub fn gap_json(g: &GapReport) -> Json {
    json!({
        "sup": quad_json(&g.outcome),
        "pairing": rat_json(&g.pairing),
        "criterion_holds": g.criterion_holds,
    })
}

pub fn membership_json(m: &Membership) -> Json {
    match m {
        Membership::Member => json!({ "kind": "member" }),
        Membership::Violation { witness_ystar, value } => json!({
            "kind": "violation",
            "witness_ystar": finseq_json(witness_ystar),
            "value": rat_json(value),
        }),
    }
}

pub fn cert_json(r: &CertReport) -> Json {
    json!({
        "beta": quad_json(&r.beta),
        "pairing": rat_json(&r.pairing),
        "verdict": r.verdict.to_string(),
        "transcript": r.transcript.iter()
            .map(|t| json!({ "name": t.name, "value": t.value }))
            .collect::<Vec<_>>(),
    })
}

pub fn nl_json(p: &NlPoint) -> Json {
    json!({
        "y": finseq_json(&p.y),
        "t": rat_json(&p.t),
        "xstar": finseq_json(&p.xstar),
        "s": rat_json(&p.s),
    })
}

pub fn value_json(v: &Value) -> Json {
    let body = match v {
        Value::Rat(r) => rat_json(r),
        Value::Fin(x) => finseq_json(x),
        Value::Evc(y) => evconst_json(y),
        Value::Lim(phi) => limfunc_json(phi),
        Value::Quad(q) => quad_json(q),
        Value::Gap(g) => gap_json(g),
        Value::Member(m) => membership_json(m),
        Value::Cert(r) => cert_json(r),
        Value::Nl(p) => nl_json(p),
    };
    json!({ "space": v.space().to_string(), "value": body })
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn rat_from(j: &Json) -> Result<Rat> {
    match j {
        Json::String(s) => parse_rat(s),
        Json::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().unwrap().into())),
        other => Err(bad(format!("expected a rational string, got {other}"))),
    }
}

pub fn finseq_from_json(j: &Json) -> Result<FinSeq> {
    let map = j.as_object().ok_or_else(|| bad("FinSeq must be an object"))?;
    let pairs = map
        .iter()
        .map(|(k, v)| {
            let k: usize = k.parse().map_err(|_| bad(format!("bad index `{k}`")))?;
            Ok((k, rat_from(v)?))
        })
        .collect::<Result<Vec<_>>>()?;
    FinSeq::from_pairs(pairs)
}

pub fn evconst_from_json(j: &Json) -> Result<EvConstSeq> {
    let head = j
        .get("head")
        .and_then(Json::as_array)
        .ok_or_else(|| bad("EvConstSeq needs a `head` array"))?
        .iter()
        .map(rat_from)
        .collect::<Result<Vec<_>>>()?;
    let tail = rat_from(j.get("tail").ok_or_else(|| bad("EvConstSeq needs a `tail`"))?)?;
    Ok(EvConstSeq::new(head, tail))
}

pub fn limfunc_from_json(j: &Json) -> Result<LimFunctional> {
    let abs = match j.get("abs") {
        Some(a) => finseq_from_json(a)?,
        None => FinSeq::new(),
    };
    let lim = rat_from(j.get("lim").ok_or_else(|| bad("LimFunctional needs `lim`"))?)?;
    Ok(LimFunctional::new(abs, lim))
}

/// Two-column text table of a certificate.
pub fn cert_text(r: &CertReport) -> String {
    let mut rows: Vec<(String, String)> = vec![
        ("beta".into(), match &r.beta {
            QuadOutcome::Finite { value, witness } => format!("{value} (witness {witness})"),
            QuadOutcome::Unbounded { ray } => format!("unbounded (ray {ray})"),
        }),
        ("pairing".into(), r.pairing.to_string()),
        ("verdict".into(), r.verdict.to_string()),
    ];
    rows.extend(r.transcript.iter().map(|t| (format!("  {}", t.name), t.value.clone())));
    table(&rows)
}

pub(crate) fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let pad = width - k.chars().count();
        out.push_str(k);
        out.push_str(&" ".repeat(pad + 2));
        out.push_str(v);
        out.push('\n');
    }
    out
}
