//! JSON forms of field elements, modules and series.
//!
//! A `ℚ_p`-coordinate is an integer, a string `"a/b"` (both exact), or a
//! string `"a/b + O(p^k)"` / `"O(p^k)"` known to absolute precision `k`.
//! An element of a degree-`f` field is a single coordinate when `f = 1`,
//! otherwise an array of `f` coordinates in the basis `1, t, …, t^{f-1}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};
use unorm_analytic::{LogTerms, VectorSeries};
use unorm_padic::linalg::Mat;
use unorm_padic::scalar::{max_rel, EXACT};
use unorm_padic::{FieldElement, Padic, UnramifiedField};
use unorm_phimod::{FilteredPhiModule, PhiModError};
use unorm_series::{LogPolynomial, Tail, TruncatedSeries};

use crate::CliError;

fn err(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Schema { path: path.to_string(), msg: msg.into() }
}

fn field_of(v: &Value, path: &str, key: &str) -> Result<Option<Value>, CliError> {
    match v {
        Value::Object(m) => Ok(m.get(key).cloned()),
        _ => Err(err(path, "expected an object")),
    }
}

fn req<'a>(m: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, CliError> {
    m.get(key).ok_or_else(|| err(path, format!("missing key {key:?}")))
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_int(v: &Value, path: &str) -> Result<i64, CliError> {
    v.as_i64().ok_or_else(|| err(path, "expected an integer"))
}

fn big(s: &str, path: &str) -> Result<BigInt, CliError> {
    s.trim().parse::<BigInt>().map_err(|_| err(path, format!("bad integer {s:?}")))
}

/// Parses one `ℚ_p` coordinate.
pub fn parse_padic(p: u32, v: &Value, path: &str) -> Result<Padic, CliError> {
    match v {
        Value::Number(n) => {
            let n = n.as_i64().ok_or_else(|| err(path, "expected an integer or a string"))?;
            Ok(Padic::exact(p, n as i128))
        }
        Value::String(s) => parse_padic_str(p, s, path),
        _ => Err(err(path, "expected an integer or a string")),
    }
}

fn parse_padic_str(p: u32, s: &str, path: &str) -> Result<Padic, CliError> {
    let (value, prec) = match s.split_once("O(") {
        Some((head, tail)) => {
            let head = head.trim().trim_end_matches('+').trim();
            let inner = tail.trim().strip_suffix(')').ok_or_else(|| err(path, "unclosed O(…)"))?;
            let (base, e) = inner.split_once('^').ok_or_else(|| err(path, "expected O(p^k)"))?;
            if base.trim() != p.to_string() {
                return Err(err(path, format!("O({base}^…) does not match p = {p}")));
            }
            let e: i64 = e.trim().parse().map_err(|_| err(path, format!("bad exponent {e:?}")))?;
            (head, e)
        }
        None => (s.trim(), EXACT),
    };
    if value.is_empty() {
        return Ok(Padic::zero(p, prec));
    }
    let (num, den) = match value.split_once('/') {
        Some((a, b)) => (big(a, path)?, big(b, path)?),
        None => (big(value, path)?, BigInt::one()),
    };
    Padic::from_ratio(p, &num, &den, prec).map_err(|e| err(path, e.to_string()))
}

pub fn parse_element(k: &Arc<UnramifiedField>, v: &Value, path: &str) -> Result<FieldElement, CliError> {
    let f = k.degree();
    match v {
        Value::Array(a) => {
            if a.len() != f {
                return Err(err(path, format!("expected {f} coordinates, got {}", a.len())));
            }
            let c = a
                .iter()
                .enumerate()
                .map(|(i, x)| parse_padic(k.p(), x, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            k.from_coords(c).map_err(|e| err(path, e.to_string()))
        }
        _ if f == 1 => Ok(k.from_padic(parse_padic(k.p(), v, path)?)),
        _ => Err(err(path, format!("expected an array of {f} coordinates"))),
    }
}

fn is_exact(x: &Padic) -> bool {
    // Shifting an exact zero moves its precision off EXACT by a little.
    x.prec() >= EXACT / 2 || x.rel() >= max_rel(x.p())
}

pub fn padic_value(x: &Padic) -> Value {
    if !is_exact(x) {
        return Value::String(x.to_string());
    }
    if x.is_zero() {
        return json!(0);
    }
    match x.rational_reconstruction() {
        Some((a, b)) if b.is_one() && a.to_i64().is_some() => json!(a.to_i64().unwrap()),
        Some((a, b)) => Value::String(format!("{a}/{b}")),
        None => Value::String(x.to_string()),
    }
}

pub fn element_value(x: &FieldElement) -> Value {
    if x.coords().len() == 1 {
        padic_value(&x.coords()[0])
    } else {
        Value::Array(x.coords().iter().map(padic_value).collect())
    }
}

fn vector_value(v: &[FieldElement]) -> Value {
    Value::Array(v.iter().map(element_value).collect())
}

/// Columns of `m` as a list of vectors.
pub fn basis_value(m: &Mat) -> Value {
    Value::Array(m.columns().iter().map(|c| vector_value(c)).collect())
}

/// Rational from an integer or a string `"a/b"`.
pub fn parse_rational(v: &Value, path: &str) -> Result<Rational64, CliError> {
    match v {
        Value::Number(n) => n.as_i64().map(Rational64::from).ok_or_else(|| err(path, "expected an integer")),
        Value::String(s) => parse_rational_str(s).ok_or_else(|| err(path, format!("bad rational {s:?}"))),
        _ => Err(err(path, "expected a rational")),
    }
}

pub fn parse_rational_str(s: &str) -> Option<Rational64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (b != 0).then(|| Rational64::new(a, b))
        }
        None => s.parse::<i64>().ok().map(Rational64::from),
    }
}

pub fn rational_value(r: Rational64) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        Value::String(r.to_string())
    }
}

/// The field named by a file's `p`, `f` and `defpoly` keys.
pub fn parse_field(v: &Value, path: &str, prec: i64, default_p: u32, default_f: usize) -> Result<Arc<UnramifiedField>, CliError> {
    let p = match field_of(v, path, "p")? {
        Some(x) => as_int(&x, &format!("{path}.p"))?,
        None => default_p as i64,
    };
    let p = u32::try_from(p).map_err(|_| err(&format!("{path}.p"), "p must be positive"))?;
    let defpoly = match field_of(v, path, "defpoly")? {
        Some(d) => Some(
            as_arr(&d, &format!("{path}.defpoly"))?
                .iter()
                .enumerate()
                .map(|(i, c)| as_int(c, &format!("{path}.defpoly[{i}]")))
                .collect::<Result<Vec<i64>, _>>()?,
        ),
        None => None,
    };
    let f = match field_of(v, path, "f")? {
        Some(x) => Some(as_int(&x, &format!("{path}.f"))?),
        None => None,
    };
    let k = match (defpoly, f) {
        (Some(dp), f) => {
            if f.is_some_and(|f| f as usize != dp.len()) {
                return Err(err(&format!("{path}.defpoly"), format!("has {} coefficients but f = {}", dp.len(), f.unwrap())));
            }
            UnramifiedField::new(p, &dp, prec)
        }
        (None, Some(f)) if f >= 1 => UnramifiedField::with_degree(p, f as usize, prec),
        (None, Some(f)) => return Err(err(&format!("{path}.f"), format!("degree {f} must be positive"))),
        (None, None) => UnramifiedField::with_degree(p, default_f, prec),
    };
    k.map_err(|e| err(path, e.to_string()))
}

fn parse_vectors(k: &Arc<UnramifiedField>, v: &Value, d: usize, path: &str) -> Result<Mat, CliError> {
    let cols = as_arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = format!("{path}[{i}]");
            let c = as_arr(c, &p)?;
            if c.len() != d {
                return Err(err(&p, format!("vector has {} entries, expected {d}", c.len())));
            }
            c.iter().enumerate().map(|(r, x)| parse_element(k, x, &format!("{p}[{r}]"))).collect()
        })
        .collect::<Result<Vec<Vec<FieldElement>>, _>>()?;
    Ok(Mat::from_cols(k, d, cols))
}

/// Parses and validates a module file.
pub fn parse_module(v: &Value, prec: i64, guard: i64) -> Result<FilteredPhiModule, CliError> {
    let root = as_obj(v, "$")?;
    let k = parse_field(v, "$", prec, 5, 1)?;
    let phi_rows = as_arr(req(root, "$", "phi")?, "$.phi")?;
    let d = phi_rows.len();
    if let Some(dim) = root.get("dim") {
        let dim = as_int(dim, "$.dim")?;
        if dim as usize != d {
            return Err(err("$.dim", format!("dim = {dim} but phi has {d} rows")));
        }
    }
    let rows = phi_rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("$.phi[{i}]");
            let row = as_arr(row, &p)?;
            if row.len() != d {
                return Err(err(&p, format!("row has {} entries, expected {d}", row.len())));
            }
            row.iter().enumerate().map(|(j, x)| parse_element(&k, x, &format!("{p}[{j}]"))).collect()
        })
        .collect::<Result<Vec<Vec<FieldElement>>, _>>()?;
    let phi = Mat::from_rows(&k, rows).map_err(|e| err("$.phi", e.to_string()))?;
    let fil = as_arr(req(root, "$", "filtration")?, "$.filtration")?;
    let mut steps = Vec::with_capacity(fil.len());
    for (i, s) in fil.iter().enumerate() {
        let p = format!("$.filtration[{i}]");
        let s = as_obj(s, &p)?;
        let jump = as_int(req(s, &p, "jump")?, &format!("{p}.jump"))?;
        let basis = parse_vectors(&k, req(s, &p, "basis")?, d, &format!("{p}.basis"))?;
        steps.push((jump, basis));
    }
    FilteredPhiModule::with_guard(&k, phi, steps, guard).map_err(|e| match e {
        PhiModError::NotInvertible => err("$.phi", "phi not invertible"),
        PhiModError::Invalid(msg) if msg.starts_with("filtration") => {
            let (loc, rest) = msg.split_once(": ").unwrap_or(("filtration", &msg));
            err(&format!("$.{loc}"), rest)
        }
        other => CliError::PhiMod(other),
    })
}

pub fn module_value(m: &FilteredPhiModule) -> Value {
    let k = m.field();
    let phi: Vec<Value> = (0..m.dim()).map(|r| vector_value(&m.phi().row(r))).collect();
    let fil: Vec<Value> =
        m.steps().iter().map(|s| json!({"jump": s.jump, "basis": basis_value(s.space.basis())})).collect();
    json!({
        "p": k.p(),
        "f": k.degree(),
        "defpoly": k.defpoly(),
        "dim": m.dim(),
        "phi": phi,
        "filtration": fil,
    })
}

/// Series file: `{"trunc": N, "bound": b | null, "coeffs": [...]}` with
/// optional `"log_rate"` (the `r` of the tail model) and `"exact": true`
/// for polynomials. Missing coefficients up to `trunc` are zero.
pub fn parse_series(k: &Arc<UnramifiedField>, v: &Value, path: &str) -> Result<TruncatedSeries, CliError> {
    let o = as_obj(v, path)?;
    let coeffs = as_arr(req(o, path, "coeffs")?, &format!("{path}.coeffs"))?;
    let mut c = coeffs
        .iter()
        .enumerate()
        .map(|(i, x)| parse_element(k, x, &format!("{path}.coeffs[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let trunc = match o.get("trunc") {
        Some(t) => as_int(t, &format!("{path}.trunc"))?,
        None => c.len() as i64 - 1,
    };
    if trunc < 0 || (trunc as usize) + 1 < c.len() {
        return Err(err(&format!("{path}.trunc"), format!("{trunc} is below the {} coefficients given", c.len())));
    }
    c.resize(trunc as usize + 1, k.exact_zero());
    let exact = o.get("exact").and_then(Value::as_bool).unwrap_or(false);
    let rate = match o.get("log_rate") {
        Some(r) => u32::try_from(as_int(r, &format!("{path}.log_rate"))?)
            .map_err(|_| err(&format!("{path}.log_rate"), "must be non-negative"))?,
        None => 0,
    };
    let tail = match o.get("bound") {
        _ if exact => Tail::Zero,
        None | Some(Value::Null) => Tail::Unknown,
        Some(b) => {
            // v(a_i) >= -b with integral valuations is v(a_i) >= -floor(b).
            let b = parse_rational(b, &format!("{path}.bound"))?;
            Tail::Bounded { b: b.floor().to_integer(), r: rate }
        }
    };
    if let Tail::Bounded { b, r } = tail {
        return TruncatedSeries::bounded(k, c, b, r).map_err(|e| err(path, e.to_string()));
    }
    Ok(TruncatedSeries::from_parts(k, c, tail))
}

pub fn series_value(s: &TruncatedSeries) -> Value {
    let coeffs: Vec<Value> = s.coeffs().iter().map(element_value).collect();
    let k = s.field();
    let mut o = json!({"p": k.p(), "f": k.degree(), "trunc": s.trunc(), "coeffs": coeffs});
    match s.tail() {
        Tail::Zero => {
            o["bound"] = Value::Null;
            o["exact"] = json!(true);
        }
        Tail::Bounded { b, r } => {
            o["bound"] = json!(b);
            if r > 0 {
                o["log_rate"] = json!(r);
            }
        }
        Tail::Unknown => o["bound"] = Value::Null,
    }
    o
}

/// `{"terms": {"i": series, …}}`.
pub fn parse_log_terms(k: &Arc<UnramifiedField>, v: &Value, path: &str) -> Result<BTreeMap<u32, TruncatedSeries>, CliError> {
    let o = as_obj(v, path)?;
    let terms = as_obj(req(o, path, "terms")?, &format!("{path}.terms"))?;
    let mut out = BTreeMap::new();
    for (key, s) in terms {
        let p = format!("{path}.terms.{key}");
        let i: u32 = key.parse().map_err(|_| err(&p, "log power must be a non-negative integer"))?;
        out.insert(i, parse_series(k, s, &p)?);
    }
    Ok(out)
}

pub fn parse_log_polynomial(k: &Arc<UnramifiedField>, v: &Value, path: &str) -> Result<LogPolynomial, CliError> {
    let terms = parse_log_terms(k, v, path)?;
    LogPolynomial::new(terms).map_err(|e| err(path, e.to_string()))
}

fn log_terms(k: &Arc<UnramifiedField>, t: BTreeMap<u32, TruncatedSeries>) -> LogTerms {
    t.into_iter().fold(LogTerms::zero(k), |acc, (i, c)| acc.add(&LogTerms::monomial(i, c)))
}

/// Vector series file: `{"components": [series, …]}` or, for exact
/// log-polynomial coordinates, `{"structured": [{"terms": …}, …], "trunc": N}`.
pub fn parse_vector_series(m: &Arc<FilteredPhiModule>, v: &Value, default_trunc: usize) -> Result<VectorSeries, CliError> {
    let k = m.field();
    let o = as_obj(v, "$")?;
    if let Some(s) = o.get("structured") {
        let terms = as_arr(s, "$.structured")?
            .iter()
            .enumerate()
            .map(|(i, t)| parse_log_terms(k, t, &format!("$.structured[{i}]")).map(|t| log_terms(k, t)))
            .collect::<Result<Vec<_>, _>>()?;
        let n = match o.get("trunc") {
            Some(t) => as_int(t, "$.trunc")? as usize,
            None => default_trunc,
        };
        return Ok(VectorSeries::from_log_terms(m, terms, n)?);
    }
    let comps = as_arr(req(o, "$", "components")?, "$.components")?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_series(k, c, &format!("$.components[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorSeries::new(m, comps)?)
}

pub fn vector_series_value(g: &VectorSeries) -> Value {
    match g.structure() {
        Some(s) => {
            let terms: Vec<Value> = s
                .iter()
                .map(|t| {
                    let m: Map<String, Value> = t.terms().iter().map(|(i, c)| (i.to_string(), series_value(c))).collect();
                    json!({"terms": m})
                })
                .collect();
            json!({"structured": terms, "trunc": g.trunc()})
        }
        None => json!({"components": g.comps().iter().map(series_value).collect::<Vec<_>>()}),
    }
}
