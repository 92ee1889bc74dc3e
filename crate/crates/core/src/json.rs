//! JSON documents: series, formal modules, connections, formal types, and the reports
//! of the transforms. Rationals are always written as `"p/q"` strings.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::poly::{BiPoly, UniPoly};
use crate::exact::rational::{fmt_rat, int, parse_rat, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;
use crate::formal::{DifferentialOperator, ElementaryModule, FormalModule};
use crate::global::{FormalType, PointData, SingularPoint, TransformedType};
use crate::transforms::TransformBookkeeping;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn rat_to_json(q: &Rat) -> Value {
    Value::String(fmt_rat(q))
}

fn big_int(v: &Value) -> Result<BigInt> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(bad(format!("expected an integer, found {v}"))),
    };
    s.parse::<BigInt>().map_err(|_| bad(format!("expected an integer, found {s}")))
}

/// Accepts `"p/q"`, `"p"` or a JSON integer.
pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(_) => Ok(Rat::from_integer(big_int(v)?)),
        _ => Err(bad(format!("expected a rational, found {v}"))),
    }
}

fn u64_field(obj: &Map<String, Value>, key: &str, default: Option<u64>) -> Result<u64> {
    match obj.get(key) {
        Some(v) => v
            .as_u64()
            .ok_or_else(|| bad(format!("field {key:?} must be a nonnegative integer"))),
        None => default.ok_or_else(|| bad(format!("missing field {key:?}"))),
    }
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| bad("expected a JSON object"))
}

fn quad_to_json(e: &Rat, c: &Rat) -> Value {
    json!([
        e.numer().to_string().parse::<Value>().unwrap_or(Value::Null),
        e.denom().to_string().parse::<Value>().unwrap_or(Value::Null),
        c.numer().to_string().parse::<Value>().unwrap_or(Value::Null),
        c.denom().to_string().parse::<Value>().unwrap_or(Value::Null),
    ])
}

fn quads_from_json(v: &Value) -> Result<Vec<(Rat, Rat)>> {
    let list = v.as_array().ok_or_else(|| bad("expected a list of quadruples"))?;
    list.iter()
        .map(|q| {
            let q = q.as_array().filter(|a| a.len() == 4).ok_or_else(|| {
                bad("each term is [exponent_num, exponent_den, coeff_num, coeff_den]")
            })?;
            let n: Vec<BigInt> = q.iter().map(big_int).collect::<Result<_>>()?;
            if n[1] == BigInt::from(0) || n[3] == BigInt::from(0) {
                return Err(bad("zero denominator"));
            }
            Ok((
                Rat::new(n[0].clone(), n[1].clone()),
                Rat::new(n[2].clone(), n[3].clone()),
            ))
        })
        .collect()
}

fn terms_json(s: &TruncatedPuiseuxSeries) -> Value {
    Value::Array(s.terms().map(|(e, c)| quad_to_json(&e, c)).collect())
}

pub fn series_to_json(s: &TruncatedPuiseuxSeries) -> Value {
    json!({
        "ram": s.ram(),
        "terms": terms_json(s),
        "trunc": s.trunc().map(|t| rat_to_json(&t)).unwrap_or(Value::Null),
    })
}

pub fn series_from_json(v: &Value) -> Result<TruncatedPuiseuxSeries> {
    let obj = object(v)?;
    let terms = quads_from_json(obj.get("terms").ok_or_else(|| bad("missing field \"terms\""))?)?;
    let trunc = match obj.get("trunc") {
        None | Some(Value::Null) => None,
        Some(t) => Some(rat_from_json(t)?),
    };
    let s = TruncatedPuiseuxSeries::from_terms(terms, trunc);
    if let Some(r) = obj.get("ram") {
        let r = r.as_u64().filter(|r| *r > 0).ok_or_else(|| bad("\"ram\" must be positive"))?;
        if r % s.ram() != 0 {
            return Err(Error::InvalidRamifiedData(format!(
                "terms need z^(1/{}) but ram is {r}",
                s.ram()
            )));
        }
    }
    Ok(s)
}

pub fn elementary_to_json(c: &ElementaryModule) -> Value {
    json!({
        "ram": c.ram(),
        "exp": terms_json(c.exp()),
        "residue": rat_to_json(c.residue()),
        "unip": c.unip(),
    })
}

pub fn elementary_from_json(v: &Value) -> Result<ElementaryModule> {
    let obj = object(v)?;
    let ram = u64_field(obj, "ram", Some(1))?;
    let exp = match obj.get("exp") {
        Some(e) => TruncatedPuiseuxSeries::from_terms(quads_from_json(e)?, None),
        None => TruncatedPuiseuxSeries::zero(),
    };
    let residue = match obj.get("residue") {
        Some(r) => rat_from_json(r)?,
        None => int(0),
    };
    let unip = u64_field(obj, "unip", Some(1))?;
    let unip = u32::try_from(unip).map_err(|_| bad("unipotent size too large"))?;
    ElementaryModule::new(ram, exp, residue, unip)
}

pub fn module_to_json(m: &FormalModule) -> Value {
    json!({ "components": m.components().iter().map(elementary_to_json).collect::<Vec<_>>() })
}

pub fn module_from_json(v: &Value) -> Result<FormalModule> {
    let obj = object(v)?;
    let list = obj
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("a module is {\"components\": [...]}"))?;
    Ok(FormalModule::new(
        list.iter().map(elementary_from_json).collect::<Result<_>>()?,
    ))
}

/// A rank-one connection: either a single component object or a module document with
/// exactly one component. The component is returned as given, before canonicalization
/// gauges terms away, together with its canonical form.
pub fn connection_from_json(v: &Value) -> Result<(TruncatedPuiseuxSeries, Rat, ElementaryModule)> {
    let obj = object(v)?;
    let comp = match obj.get("components") {
        Some(Value::Array(list)) if list.len() == 1 => &list[0],
        Some(_) => return Err(bad("a connection document has exactly one component")),
        None => v,
    };
    let c = object(comp)?;
    let exp = match c.get("exp") {
        Some(e) => TruncatedPuiseuxSeries::from_terms(quads_from_json(e)?, None),
        None => TruncatedPuiseuxSeries::zero(),
    };
    let residue = match c.get("residue") {
        Some(r) => rat_from_json(r)?,
        None => int(0),
    };
    let e = elementary_from_json(comp)?;
    Ok((exp, residue, e))
}

pub fn formal_type_to_json(ft: &FormalType) -> Value {
    json!({
        "genus": ft.genus(),
        "rank": ft.rank(),
        "points": ft.points().iter().map(|p| json!({
            "label": p.label,
            "weight": p.weight,
            "psi": module_to_json(&p.psi),
        })).collect::<Vec<_>>(),
    })
}

pub fn formal_type_from_json(v: &Value) -> Result<FormalType> {
    let obj = object(v)?;
    let genus = u64_field(obj, "genus", Some(0))?;
    let rank = u64_field(obj, "rank", None)?;
    let list = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("a formal type needs a \"points\" list"))?;
    let mut points = Vec::with_capacity(list.len());
    for p in list {
        let po = object(p)?;
        let label = match po.get("label") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err(bad("each point needs a \"label\"")),
        };
        let weight = u64_field(po, "weight", Some(1))?;
        let psi = module_from_json(po.get("psi").ok_or_else(|| bad("each point needs \"psi\""))?)?;
        points.push(SingularPoint { label, weight, psi });
    }
    FormalType::new(genus, rank, points)
}

/// `[["p", "q", multiplicity], ...]`.
pub fn slopes_to_json(slopes: &[(Rat, u64)]) -> Value {
    Value::Array(
        slopes
            .iter()
            .map(|(s, k)| json!([s.numer().to_string(), s.denom().to_string(), k]))
            .collect(),
    )
}

pub fn operator_to_json(op: &DifferentialOperator) -> Value {
    json!({
        "order": op.order(),
        "coefficients": op.coeffs().iter().map(series_to_json).collect::<Vec<_>>(),
        "display": op.to_string(),
    })
}

pub fn unipoly_to_json(p: &UniPoly) -> Value {
    Value::Array(p.coeffs().iter().map(rat_to_json).collect())
}

/// `{"i,j": "p/q"}` for the monomials `a^i b^j`.
pub fn bipoly_to_json(p: &BiPoly) -> Value {
    let mut m = Map::new();
    for (e, c) in p.terms() {
        m.insert(format!("{},{}", e[0], e[1]), rat_to_json(c));
    }
    Value::Object(m)
}

pub fn bookkeeping_to_json(b: &TransformBookkeeping) -> Value {
    json!({
        "rank": b.rank_out,
        "irregularity": rat_to_json(&b.irr_out),
        "slopes": slopes_to_json(&b.slopes_out),
        "class": b.class_label.to_string(),
    })
}

pub fn transformed_to_json(t: &TransformedType) -> Value {
    let points: Vec<Value> = t
        .points_out
        .iter()
        .map(|p| match &p.data {
            PointData::Exact { phi, psi } => json!({
                "label": p.label,
                "weight": p.weight,
                "mode": "exact",
                "phi": module_to_json(phi),
                "psi": module_to_json(psi),
            }),
            PointData::Bookkeeping(v) => json!({
                "label": p.label,
                "weight": p.weight,
                "mode": "bookkeeping",
                "contributions": v.iter().map(bookkeeping_to_json).collect::<Vec<_>>(),
            }),
        })
        .collect();
    let mut out = json!({
        "mode": match t.mode {
            crate::global::Mode::Exact => "exact",
            crate::global::Mode::Bookkeeping => "bookkeeping",
        },
        "rank": t.rank_out,
        "points": points,
        "notes": t.notes,
    });
    if let Some(ft) = t.formal_type() {
        out["formal_type"] = formal_type_to_json(&ft);
    }
    out
}
