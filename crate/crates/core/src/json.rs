//! Machine-readable output. Every top-level object carries `"schema"`.

use serde_json::{json, Map, Value};

use crate::dsl;
use crate::grothendieck::{RingElement, Tail};
use crate::lifts::{LiftCase, LiftResult};
use crate::model::{GLFactor, StandardModule};
use crate::occurrence::OccurrenceReport;
use crate::rearrange::{AlgTrace, Ladder, Rearranged, ReduceStep};
use crate::segment::Segment;
use crate::tempered::TemperedToken;

pub const SCHEMA: &str = "thetalift/1";

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    v
}

pub fn segment(s: &Segment) -> Value {
    json!({ "a": s.a().to_string(), "b": s.b().to_string() })
}

pub fn factor(f: &GLFactor) -> Value {
    match f {
        GLFactor::Delta(s) => json!({ "form": "D", "a": s.a().to_string(), "b": s.b().to_string() }),
        GLFactor::Zeta(s) => json!({ "form": "Z", "a": s.a().to_string(), "b": s.b().to_string() }),
        GLFactor::LQ { zeta, delta } => json!({ "form": "L", "zeta": segment(zeta), "delta": segment(delta) }),
    }
}

fn factors(fs: &[GLFactor]) -> Value {
    Value::Array(fs.iter().map(factor).collect())
}

fn ladder(l: &Ladder) -> Value {
    Value::Array(l.rungs.iter().map(segment).collect())
}

pub fn token(t: &TemperedToken) -> Value {
    let mut v = match t {
        TemperedToken::Atom { label, l_down, mult } => {
            let m: Map<String, Value> = mult.iter().map(|(d, c)| (d.to_string(), json!(c))).collect();
            json!({ "kind": "atom", "label": label, "l": l_down, "mult": m })
        }
        TemperedToken::Lift { inner, level } => json!({ "kind": "lift", "level": level, "inner": token(inner) }),
        TemperedToken::StWrap { st_dim, inner } => {
            json!({ "kind": "stwrap", "st_dim": st_dim, "inner": token(inner) })
        }
        TemperedToken::SigmaOf(inner) => json!({ "kind": "sigma", "inner": token(inner) }),
    };
    let b = t.bounds();
    if let Value::Object(m) = &mut v {
        m.insert("l_exact".into(), json!(b.exact));
        m.insert("l_lower".into(), json!(b.lo));
    }
    v
}

fn module_body(m: &StandardModule) -> Value {
    json!({
        "pair": m.pair.to_string(),
        "kappa": m.kappa(),
        "side": m.side.to_string(),
        "xi": m.xi,
        "alpha": m.block.alpha.to_string(),
        "block": factors(&m.block.factors),
        "tempered": token(&m.tempered),
        "n": m.n,
        "epsilon": m.epsilon,
        "text": dsl::render(m),
    })
}

pub fn module(m: &StandardModule) -> Value {
    with_schema(module_body(m))
}

pub fn occurrence(m: &StandardModule, r: &OccurrenceReport) -> Value {
    with_schema(json!({
        "module": dsl::render(m),
        "l_tau": r.l_tau,
        "f": r.f,
        "l_down": r.l_down,
        "l_up": r.l_up,
        "m_down": r.m_down,
        "m_up": r.m_up,
        "witness": ladder(&r.witness),
        "conservation": {
            "l_down": r.l_down,
            "l_up": r.l_up,
            "sum": r.l_down + r.l_up,
            "dimension_sum": r.m_down.zip(r.m_up).map(|(a, b)| a + b),
        },
    }))
}

fn case_name(c: &LiftCase) -> Value {
    match c {
        LiftCase::LowRank { t } => json!({ "case": "low-rank", "t": t }),
        LiftCase::LowRankSteinberg { t } => json!({ "case": "low-rank-steinberg", "t": t }),
        LiftCase::LevelZero => json!({ "case": "level-zero" }),
        LiftCase::HighRank => json!({ "case": "high-rank" }),
        LiftCase::GoingUp { t, steinberg } => json!({ "case": "going-up", "t": t, "steinberg": steinberg }),
    }
}

pub fn lift(r: &LiftResult, level: i64, tower: crate::occurrence::Tower) -> Value {
    match r {
        LiftResult::Zero => with_schema(json!({ "tower": tower.to_string(), "level": level, "zero": true })),
        LiftResult::Module { module, case, .. } => with_schema(json!({
            "tower": tower.to_string(),
            "level": level,
            "zero": false,
            "case": case_name(case),
            "module": module_body(module),
            "dimension": module.n,
        })),
    }
}

pub fn rearranged(r: &Rearranged) -> Value {
    json!({
        "k": r.k.to_string(),
        "iterations": r.iterations,
        "prefix": Value::Array(r.prefix.iter().map(segment).collect()),
        "zeta": if r.zeta.is_empty() { Value::Null } else { segment(&r.zeta) },
        "suffix": Value::Array(r.suffix.iter().map(segment).collect()),
        "factors": factors(&r.factors()),
    })
}

pub fn algorithm(r: &Rearranged, trace: Option<&AlgTrace>) -> Value {
    let mut v = with_schema(json!({ "result": rearranged(r) }));
    if let (Some(t), Value::Object(m)) = (trace, &mut v) {
        let its: Vec<Value> = t
            .iterations
            .iter()
            .map(|it| {
                let line = |x: &Option<Vec<GLFactor>>| x.as_ref().map(|f| factors(f)).unwrap_or(Value::Null);
                json!({
                    "l": factor(&it.l_factor),
                    "line6": line(&it.line6),
                    "line7": line(&it.line7),
                    "line8": line(&it.line8),
                    "line9": line(&it.line9),
                    "next": it.next.map(|(a, e, b)| json!({ "a": a.to_string(), "e": e.to_string(), "b": b.to_string() })),
                })
            })
            .collect();
        m.insert("trace".into(), json!({ "b0": t.b0.map(|b| b.to_string()), "iterations": its }));
    }
    v
}

pub fn reduction(steps: &[ReduceStep]) -> Value {
    let s: Vec<Value> = steps
        .iter()
        .map(|st| {
            json!({
                "case": st.case.to_string(),
                "delta": Value::Array(st.delta.iter().map(segment).collect()),
                "residual": rearranged(&st.residual),
            })
        })
        .collect();
    with_schema(json!({ "steps": s }))
}

pub fn ring(r: &RingElement) -> Value {
    let terms: Vec<Value> = r
        .terms()
        .map(|(l, rt, c)| {
            let tail = match rt.tail {
                Tail::None => Value::Null,
                Tail::TauHat => json!("tau"),
                Tail::Bottom => json!("?"),
            };
            json!({ "coef": c.to_string(), "left": l.to_string(), "right": rt.word.to_string(), "tail": tail })
        })
        .collect();
    with_schema(json!({ "terms": terms, "text": r.render() }))
}
