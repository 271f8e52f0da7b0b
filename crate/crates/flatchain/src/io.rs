//! JSON file formats for groups, elements, chains, 0-chains, measures, planes,
//! grids, weights and sampled paths.
//!
//! Coordinates and other rationals are written as `"p/q"` strings (`"p"` for
//! integers); reading also accepts JSON integers and decimals. Elements are
//! written as integers or `{"num": p, "den": q}`.

use std::path::Path;

use flatchain_core::coeffgroup::{Alpha, GroupKind};
use flatchain_core::numeric::{format_rational, parse_rational};
use flatchain_core::sizefunc::WeightFunction;
use flatchain_core::{Chain, Group, GroupElement, GridSpec, GMeasure, OrientedAffinePlane, PathSamples, Point, Rational, Simplex, ZeroChain};
use serde_json::{json, Map, Value};

use crate::CliError;

/// Anything `parse_chain_file` can return.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainFile {
    Chain(Chain),
    ZeroChain(ZeroChain),
    Measure(GMeasure),
}

/// A parsed object and the canonicalization notes produced on the way.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

fn schema(field: impl Into<String>, constraint: impl Into<String>) -> CliError {
    CliError::Schema { field: field.into(), constraint: constraint.into() }
}

fn get<'a>(obj: &'a Map<String, Value>, field: &str, path: &str) -> Result<&'a Value, CliError> {
    obj.get(field).ok_or_else(|| schema(join(path, field), "is required"))
}

fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| schema(path_or_root(path), "must be an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(path_or_root(path), "must be an array"))
}

fn path_or_root(path: &str) -> String {
    if path.is_empty() {
        "(root)".to_string()
    } else {
        path.to_string()
    }
}

fn usize_field(obj: &Map<String, Value>, field: &str, path: &str) -> Result<usize, CliError> {
    get(obj, field, path)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(join(path, field), "must be a nonnegative integer"))
}

pub fn rational_from_json(v: &Value, path: &str) -> Result<Rational, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(schema(path_or_root(path), "must be a rational (\"p/q\", integer or decimal)")),
    };
    parse_rational(&text).map_err(|_| schema(path_or_root(path), format!("{text:?} is not a rational")))
}

pub fn rational_to_json(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn point_from_json(v: &Value, path: &str) -> Result<Point, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| rational_from_json(c, &format!("{path}[{i}]")))
        .collect()
}

pub fn point_to_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(rational_to_json).collect())
}

pub fn group_from_json(v: &Value, path: &str) -> Result<Group, CliError> {
    let obj = object(v, path)?;
    let kind = get(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| schema(join(path, "kind"), "must be a string"))?;
    let kind = GroupKind::from_name(kind).map_err(|e| schema(join(path, "kind"), e.to_string()))?;
    let p = match obj.get("p") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| schema(join(path, "p"), "must be a positive integer"))?),
    };
    let alpha = match obj.get("alpha") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(Alpha::parse(s).map_err(|e| schema(join(path, "alpha"), e.to_string()))?),
        Some(Value::Number(n)) => {
            Some(Alpha::parse(&n.to_string()).map_err(|e| schema(join(path, "alpha"), e.to_string()))?)
        }
        Some(_) => return Err(schema(join(path, "alpha"), "must be a decimal string")),
    };
    Group::new(kind, p, alpha).map_err(|e| schema(path_or_root(path), e.to_string()))
}

pub fn group_to_json(g: Group) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::String(g.kind().name().to_string()));
    if let Some(p) = g.prime() {
        obj.insert("p".into(), json!(p));
    }
    if let Some(a) = g.alpha() {
        obj.insert("alpha".into(), Value::String(a.to_string()));
    }
    Value::Object(obj)
}

pub fn element_from_json(group: Group, v: &Value, path: &str) -> Result<GroupElement, CliError> {
    let value = match v {
        Value::Object(obj) => {
            let num = rational_from_json(get(obj, "num", path)?, &join(path, "num"))?;
            let den = rational_from_json(get(obj, "den", path)?, &join(path, "den"))?;
            if !num.is_integer() || !den.is_integer() || den == Rational::from_integer(0.into()) {
                return Err(schema(path_or_root(path), "num and den must be integers with den != 0"));
            }
            num / den
        }
        Value::Number(_) | Value::String(_) => rational_from_json(v, path)?,
        _ => return Err(schema(path_or_root(path), "must be an integer or {\"num\", \"den\"}")),
    };
    group.element(value).map_err(|e| schema(path_or_root(path), e.to_string()))
}

pub fn element_to_json(g: &GroupElement) -> Value {
    let v = g.value();
    if v.is_integer() {
        Value::Number(v.numer().to_string().parse().expect("integer literal"))
    } else {
        let number = |x: &num_bigint::BigInt| Value::Number(x.to_string().parse().expect("integer literal"));
        json!({ "num": number(v.numer()), "den": number(v.denom()) })
    }
}

fn header(obj: &Map<String, Value>) -> Result<(Group, usize), CliError> {
    let group = group_from_json(get(obj, "group", "")?, "group")?;
    let ambient = usize_field(obj, "ambient", "")?;
    Ok((group, ambient))
}

/// Reads a chain object; zero coefficients and merged supports are reported
/// as warnings.
pub fn chain_from_json(v: &Value) -> Result<Parsed<Chain>, CliError> {
    let obj = object(v, "")?;
    let (group, ambient) = header(obj)?;
    let dim = usize_field(obj, "dim", "")?;
    let mut terms = Vec::new();
    let mut warnings = Vec::new();
    for (i, t) in array(get(obj, "terms", "")?, "terms")?.iter().enumerate() {
        let path = format!("terms[{i}]");
        let t = object(t, &path)?;
        let coeff = element_from_json(group, get(t, "coeff", &path)?, &join(&path, "coeff"))?;
        let vertices = array(get(t, "simplex", &path)?, &join(&path, "simplex"))?
            .iter()
            .enumerate()
            .map(|(j, p)| point_from_json(p, &format!("{path}.simplex[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if vertices.len() != dim + 1 {
            return Err(schema(join(&path, "simplex"), format!("a {dim}-simplex needs {} vertices", dim + 1)));
        }
        if vertices.iter().any(|p| p.len() != ambient) {
            return Err(schema(join(&path, "simplex"), format!("vertices must have {ambient} coordinates")));
        }
        if coeff.is_zero() {
            warnings.push(format!("{path}: zero coefficient dropped"));
        }
        terms.push((coeff, Simplex::new(vertices)?));
    }
    let count = terms.len();
    let zeros = warnings.len();
    let chain = Chain::new(group, ambient, dim, terms)?;
    if chain.len() + zeros != count {
        warnings.push(format!("{} terms canonicalized to {}", count - zeros, chain.len()));
    }
    Ok(Parsed { value: chain, warnings })
}

pub fn chain_to_json(a: &Chain) -> Value {
    let terms: Vec<Value> = a
        .terms()
        .iter()
        .map(|(g, s)| {
            json!({
                "coeff": element_to_json(g),
                "simplex": s.vertices().iter().map(|p| point_to_json(p)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "group": group_to_json(a.group()),
        "ambient": a.ambient(),
        "dim": a.dim(),
        "terms": terms,
    })
}

fn atoms_from_json(group: Group, ambient: usize, v: &Value, path: &str) -> Result<Vec<(GroupElement, Point)>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let path = format!("{path}[{i}]");
            let a = object(a, &path)?;
            let g = element_from_json(group, get(a, "coeff", &path)?, &join(&path, "coeff"))?;
            let p = point_from_json(get(a, "point", &path)?, &join(&path, "point"))?;
            if p.len() != ambient {
                return Err(schema(join(&path, "point"), format!("must have {ambient} coordinates")));
            }
            Ok((g, p))
        })
        .collect()
}

fn atoms_to_json(atoms: &[(GroupElement, Point)]) -> Value {
    Value::Array(atoms.iter().map(|(g, p)| json!({ "coeff": element_to_json(g), "point": point_to_json(p) })).collect())
}

pub fn measure_from_json(v: &Value) -> Result<Parsed<GMeasure>, CliError> {
    let obj = object(v, "")?;
    let group = group_from_json(get(obj, "group", "")?, "group")?;
    let level = get(obj, "level", "")?
        .as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| schema("level", "must be a nonnegative integer"))?;
    let cubes_json = array(get(obj, "cubes", "")?, "cubes")?;
    let ambient = match obj.get("ambient") {
        Some(_) => usize_field(obj, "ambient", "")?,
        None => match cubes_json.first().and_then(|c| c.get("index")).and_then(Value::as_array) {
            Some(index) => index.len(),
            None => return Err(schema("ambient", "is required when there are no cubes")),
        },
    };
    let mut cubes = Vec::new();
    let mut warnings = Vec::new();
    for (i, c) in cubes_json.iter().enumerate() {
        let path = format!("cubes[{i}]");
        let c = object(c, &path)?;
        let index = array(get(c, "index", &path)?, &join(&path, "index"))?
            .iter()
            .map(Value::as_i64)
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| schema(join(&path, "index"), "must be an array of integers"))?;
        if index.len() != ambient {
            return Err(schema(join(&path, "index"), format!("must have {ambient} entries")));
        }
        let value = element_from_json(group, get(c, "value", &path)?, &join(&path, "value"))?;
        if value.is_zero() {
            warnings.push(format!("{path}: zero value dropped"));
        }
        cubes.push((index, value));
    }
    let atoms = match obj.get("atoms") {
        Some(a) => atoms_from_json(group, ambient, a, "atoms")?,
        None => Vec::new(),
    };
    let count = cubes.iter().filter(|(_, g)| !g.is_zero()).count();
    let nu = GMeasure::new(group, ambient, level, cubes, atoms)?;
    if nu.cubes().len() != count {
        warnings.push(format!("{count} cube values merged to {}", nu.cubes().len()));
    }
    Ok(Parsed { value: nu, warnings })
}

pub fn measure_to_json(nu: &GMeasure) -> Value {
    let cubes: Vec<Value> =
        nu.cubes().iter().map(|(j, g)| json!({ "index": j, "value": element_to_json(g) })).collect();
    json!({
        "group": group_to_json(nu.group()),
        "ambient": nu.ambient(),
        "level": nu.level(),
        "cubes": cubes,
        "atoms": atoms_to_json(nu.atoms()),
    })
}

pub fn zero_chain_to_json(a: &ZeroChain) -> Value {
    chain_to_json(&a.to_chain())
}

/// A chain, a 0-chain (a chain file with `"dim": 0`, or one with an
/// `"atoms"` list) or a measure (a file with `"cubes"`).
pub fn parse_chain_value(v: &Value) -> Result<Parsed<ChainFile>, CliError> {
    let obj = object(v, "")?;
    if obj.contains_key("cubes") {
        let p = measure_from_json(v)?;
        return Ok(Parsed { value: ChainFile::Measure(p.value), warnings: p.warnings });
    }
    if obj.contains_key("atoms") {
        let (group, ambient) = header(obj)?;
        let atoms = atoms_from_json(group, ambient, get(obj, "atoms", "")?, "atoms")?;
        let count = atoms.len();
        let z = ZeroChain::new(group, ambient, atoms)?;
        let mut warnings = Vec::new();
        if z.len() != count {
            warnings.push(format!("{count} atoms canonicalized to {}", z.len()));
        }
        return Ok(Parsed { value: ChainFile::ZeroChain(z), warnings });
    }
    let p = chain_from_json(v)?;
    let value = if p.value.dim() == 0 {
        ChainFile::ZeroChain(ZeroChain::from_chain(&p.value)?)
    } else {
        ChainFile::Chain(p.value)
    };
    Ok(Parsed { value, warnings: p.warnings })
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json { path: path.display().to_string(), source: e })
}

pub fn parse_chain_file(path: &Path) -> Result<Parsed<ChainFile>, CliError> {
    parse_chain_value(&read_json(path)?)
}

/// Serializes a parsed file back to its canonical JSON.
pub fn chain_file_to_json(f: &ChainFile) -> Value {
    match f {
        ChainFile::Chain(a) => chain_to_json(a),
        ChainFile::ZeroChain(z) => zero_chain_to_json(z),
        ChainFile::Measure(nu) => measure_to_json(nu),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn plane_from_json(v: &Value) -> Result<OrientedAffinePlane, CliError> {
    let obj = object(v, "")?;
    let base = point_from_json(get(obj, "base", "")?, "base")?;
    let dirs = array(get(obj, "dirs", "")?, "dirs")?
        .iter()
        .enumerate()
        .map(|(i, d)| point_from_json(d, &format!("dirs[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrientedAffinePlane::new(base, dirs)?)
}

pub fn plane_to_json(p: &OrientedAffinePlane) -> Value {
    json!({ "base": point_to_json(p.base()), "dirs": p.dirs().iter().map(|d| point_to_json(d)).collect::<Vec<_>>() })
}

pub fn grid_from_json(v: &Value) -> Result<GridSpec, CliError> {
    let obj = object(v, "")?;
    let eps = rational_from_json(get(obj, "eps", "")?, "eps")?;
    let offset = point_from_json(get(obj, "offset", "")?, "offset")?;
    Ok(GridSpec::new(eps, offset)?)
}

pub fn weight_from_json(group: Group, v: &Value) -> Result<WeightFunction, CliError> {
    let obj = object(v, "")?;
    let kind = get(obj, "kind", "")?.as_str().ok_or_else(|| schema("kind", "must be a string"))?;
    match kind {
        "flat-size" => Ok(WeightFunction::FlatSize),
        "group-norm" => Ok(WeightFunction::GroupNorm),
        "table" => {
            let entries = array(get(obj, "table", "")?, "table")?
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let path = format!("table[{i}]");
                    let e = object(e, &path)?;
                    let g = element_from_json(group, get(e, "element", &path)?, &join(&path, "element"))?;
                    let value = match get(e, "value", &path)? {
                        Value::Number(n) => n.as_f64(),
                        Value::String(s) if s == "inf" => Some(f64::INFINITY),
                        _ => None,
                    }
                    .ok_or_else(|| schema(join(&path, "value"), "must be a number or \"inf\""))?;
                    Ok((g, value))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(WeightFunction::table(entries)?)
        }
        other => Err(schema("kind", format!("unknown weight {other:?}"))),
    }
}

/// `{"group": descriptor, "samples": [{"t": rational, "value": element}]}`.
pub fn path_from_json(v: &Value) -> Result<PathSamples, CliError> {
    let obj = object(v, "")?;
    let group = group_from_json(get(obj, "group", "")?, "group")?;
    let samples = array(get(obj, "samples", "")?, "samples")?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let path = format!("samples[{i}]");
            let s = object(s, &path)?;
            let t = rational_from_json(get(s, "t", &path)?, &join(&path, "t"))?;
            let g = element_from_json(group, get(s, "value", &path)?, &join(&path, "value"))?;
            Ok((t, g))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(PathSamples::new(group, samples)?)
}

pub fn path_to_json(p: &PathSamples) -> Value {
    json!({
        "group": group_to_json(p.group()),
        "samples": p.samples().iter().map(|(t, g)| json!({ "t": rational_to_json(t), "value": element_to_json(g) })).collect::<Vec<_>>(),
    })
}
