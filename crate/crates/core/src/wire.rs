//! JSON encodings shared by the command-line front end.
//!
//! Groups are `{"invariant_factors":[4,6]}`, elements are coordinate arrays,
//! subgroups are `{"generators":[[2]]}`, complex numbers are `{"re":..,"im":..}`
//! (plain numbers are accepted on input).

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::density::{ApproxOutcome, DensityVerdict, Extraction, Witness};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Limits, QuotientMap, Subgroup};
use crate::measure::{DiscreteMeasure, WeightKind};
use crate::sampling::{SampleTable, Signal};
use crate::transversal::PointSet;

/// Malformed or mistyped JSON input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{context}: {message}")]
pub struct WireError {
    pub context: String,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Domain(#[from] Error),
}

pub type DecodeResult<T> = std::result::Result<T, DecodeError>;

fn wire(context: &str, message: impl ToString) -> DecodeError {
    DecodeError::Wire(WireError {
        context: context.to_string(),
        message: message.to_string(),
    })
}

fn decode<'a, T: Deserialize<'a>>(context: &str, v: &'a Value) -> DecodeResult<T> {
    T::deserialize(v).map_err(|e| wire(context, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    invariant_factors: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexJson {
    Real(f64),
    Pair { re: f64, im: f64 },
}

impl From<ComplexJson> for Complex64 {
    fn from(c: ComplexJson) -> Self {
        match c {
            ComplexJson::Real(re) => Complex64::new(re, 0.0),
            ComplexJson::Pair { re, im } => Complex64::new(re, im),
        }
    }
}

pub fn parse_group(v: &Value, limits: &Limits) -> DecodeResult<GroupSpec> {
    let g: GroupJson = decode("group", v)?;
    Ok(GroupSpec::with_limits(&g.invariant_factors, limits)?)
}

pub fn parse_element(spec: &GroupSpec, v: &Value) -> DecodeResult<GroupElement> {
    let coords: Vec<i64> = decode("element", v)?;
    Ok(spec.element(&coords)?)
}

fn parse_elements(spec: &GroupSpec, v: &Value, context: &str) -> DecodeResult<Vec<GroupElement>> {
    let raw: Vec<Vec<i64>> = decode(context, v)?;
    raw.iter()
        .map(|c| spec.element(c).map_err(DecodeError::from))
        .collect()
}

/// Accepts `{"generators":[...]}` or a bare array of generators.
pub fn parse_subgroup(spec: &GroupSpec, v: &Value) -> DecodeResult<Subgroup> {
    let gens = match v {
        Value::Object(map) => map
            .get("generators")
            .ok_or_else(|| wire("subgroup", "missing field `generators`"))?,
        other => other,
    };
    let gens = parse_elements(spec, gens, "subgroup generators")?;
    Ok(Subgroup::from_generators(spec, &gens)?)
}

/// Accepts `{"points":[...]}` or a bare array of points.
pub fn parse_point_set(spec: &GroupSpec, v: &Value) -> DecodeResult<PointSet> {
    let pts = match v {
        Value::Object(map) => map
            .get("points")
            .ok_or_else(|| wire("point set", "missing field `points`"))?,
        other => other,
    };
    let pts = parse_elements(spec, pts, "point set")?;
    Ok(PointSet::new(spec, pts)?)
}

pub fn parse_complex(v: &Value) -> DecodeResult<Complex64> {
    Ok(decode::<ComplexJson>("complex number", v)?.into())
}

pub fn parse_complex_values(v: &Value) -> DecodeResult<Vec<Complex64>> {
    let raw: Vec<ComplexJson> = decode("values", v)?;
    Ok(raw.into_iter().map(Complex64::from).collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomJson {
    point: Vec<i64>,
    weight: ComplexJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureJson {
    atoms: Vec<AtomJson>,
    #[serde(default)]
    kind: Option<String>,
}

pub fn parse_measure(spec: &GroupSpec, v: &Value) -> DecodeResult<DiscreteMeasure> {
    let m: MeasureJson = decode("measure", v)?;
    let kind = match m.kind.as_deref() {
        None | Some("nonnegative") => WeightKind::NonNegative,
        Some("complex") => WeightKind::Complex,
        Some(other) => return Err(wire("measure", format!("unknown kind `{other}`"))),
    };
    let mut atoms = Vec::with_capacity(m.atoms.len());
    for a in m.atoms {
        atoms.push((spec.element(&a.point)?, Complex64::from(a.weight)));
    }
    Ok(match kind {
        WeightKind::NonNegative => {
            let mut real = Vec::with_capacity(atoms.len());
            for (p, w) in atoms {
                if w.im != 0.0 {
                    return Err(Error::InvalidWeight {
                        point: p,
                        weight: w.to_string(),
                    }
                    .into());
                }
                real.push((p, w.re));
            }
            DiscreteMeasure::nonnegative(spec, real)?
        }
        WeightKind::Complex => DiscreteMeasure::complex(spec, atoms)?,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SignalJson {
    group: Value,
    values: Value,
}

pub fn parse_signal(v: &Value, limits: &Limits) -> DecodeResult<Signal> {
    let s: SignalJson = decode("signal", v)?;
    let spec = parse_group(&s.group, limits)?;
    let values = parse_complex_values(&s.values)?;
    Ok(Signal::new(&spec, values)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleJson {
    point: Value,
    value: Value,
}

/// Accepts a table `[{"point":..,"value":..}]` or a bare array of values
/// listed in the lexicographic order of the subgroup's elements.
pub fn parse_samples(h: &Subgroup, v: &Value, limits: &Limits) -> DecodeResult<SampleTable> {
    let spec = h.parent();
    let items = v
        .as_array()
        .ok_or_else(|| wire("samples", "expected an array"))?;
    let keyed = items.first().is_some_and(|x| x.get("point").is_some());
    if keyed {
        let mut points = Vec::with_capacity(items.len());
        let mut values = Vec::with_capacity(items.len());
        for item in items {
            let s: SampleJson = decode("sample", item)?;
            points.push(parse_element(spec, &s.point)?);
            values.push(parse_complex(&s.value)?);
        }
        Ok(SampleTable { points, values })
    } else {
        let values = parse_complex_values(v)?;
        let points = h.elements(limits)?;
        if points.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                found: values.len(),
            }
            .into());
        }
        Ok(SampleTable { points, values })
    }
}

pub fn complex_json(c: Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

pub fn group_json(spec: &GroupSpec) -> Value {
    json!({ "invariant_factors": spec.factors(), "order": spec.order() })
}

pub fn subgroup_json(h: &Subgroup) -> Value {
    json!({
        "generators": h.generators(),
        "basis": h.basis(),
        "order": h.order(),
    })
}

pub fn point_set_json(s: &PointSet) -> Value {
    json!({ "points": s.points() })
}

pub fn quotient_json(q: &QuotientMap, limits: &Limits) -> Result<Value> {
    Ok(json!({
        "group": group_json(q.parent()),
        "lambda": subgroup_json(q.lambda()),
        "quotient": { "invariant_factors": q.quotient_spec().factors() },
        "cosets": q.coset_count(),
        "representatives": q.representatives(limits)?,
    }))
}

pub fn measure_json(m: &DiscreteMeasure) -> Value {
    let kind = m.kind();
    let atoms: Vec<Value> = m
        .atoms()
        .iter()
        .map(|a| {
            let weight = match kind {
                WeightKind::NonNegative => json!(a.weight.re),
                WeightKind::Complex => complex_json(a.weight),
            };
            json!({ "point": a.point, "weight": weight })
        })
        .collect();
    let kind = match kind {
        WeightKind::NonNegative => "nonnegative",
        WeightKind::Complex => "complex",
    };
    json!({ "atoms": atoms, "kind": kind })
}

pub fn witness_json(w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::Support(s)) => point_set_json(s),
        Some(Witness::ViolatingCoset(rep)) => json!({ "violating_coset_rep": rep }),
    }
}

pub fn verdict_json(v: &DensityVerdict) -> Value {
    json!({
        "dense": v.dense,
        "method": v.method,
        "rank": v.rank,
        "support_size": v.support_size,
        "witness": witness_json(&v.witness),
    })
}

pub fn extraction_json(e: &Extraction) -> Value {
    match e {
        Extraction::Success { set, translates } => json!({
            "success": true,
            "set": point_set_json(set),
            "translates": translates
                .iter()
                .map(|(lambda, t)| json!({ "lambda": lambda, "points": t.points() }))
                .collect::<Vec<_>>(),
        }),
        Extraction::Failure {
            overlaps,
            partial_set,
        } => json!({
            "success": false,
            "overlaps": overlaps
                .iter()
                .map(|o| json!({ "lambda": o.lambda, "kappa": o.kappa, "points": o.points.points() }))
                .collect::<Vec<_>>(),
            "partial_set": point_set_json(partial_set),
        }),
    }
}

pub fn approx_json(a: &ApproxOutcome) -> Value {
    serde_json::to_value(a).expect("plain struct serializes")
}

pub fn signal_json(x: &Signal) -> Value {
    json!({
        "group": { "invariant_factors": x.parent().factors() },
        "values": x.values().iter().map(|&c| complex_json(c)).collect::<Vec<_>>(),
    })
}

pub fn samples_json(s: &SampleTable) -> Value {
    Value::Array(
        s.points
            .iter()
            .zip(&s.values)
            .map(|(p, &v)| json!({ "point": p, "value": complex_json(v) }))
            .collect(),
    )
}
