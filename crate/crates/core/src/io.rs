//! JSON encodings of lattices, vectors, matrices, polynomials and reports.
//!
//! Integers are written as JSON numbers of arbitrary size, rationals as
//! `"p/q"` strings. Objects are key-sorted, so equal values serialize to equal
//! bytes.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Number, Value};

use crate::dynamics::{SearchReport, TransferReport};
use crate::error::{Error, Result};
use crate::fibrations::{EvenPicardReport, ExceptionalReport, FibrationAtlas, FibrationClass};
use crate::isometry::Isometry;
use crate::lattice::{Lattice, LatticeVector, Sublattice};
use crate::linalg::IntMatrix;
use crate::roots::{RootSet, WalkResult};
use crate::salem::{to_decimal, IntPolynomial, SalemDecomposition};

type Q = BigRational;

fn parse_err(source: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_string(),
        message: message.into(),
    }
}

pub fn int(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

pub fn int_list(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.rows().map(int_list).collect())
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational(x: &Q) -> Value {
    Value::String(x.to_string())
}

pub fn parse_int(v: &Value, source: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            BigInt::from_str(&n.to_string()).map_err(|_| parse_err(source, format!("{n} is not an integer")))
        }
        other => Err(parse_err(source, format!("expected an integer, found {other}"))),
    }
}

pub fn parse_int_list(v: &Value, source: &str) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| parse_err(source, "expected an array of integers"))?
        .iter()
        .map(|x| parse_int(x, source))
        .collect()
}

/// Rows of equal length; an empty array gives a 0x0 matrix.
pub fn parse_matrix(v: &Value, source: &str) -> Result<IntMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| parse_err(source, "expected an array of rows"))?
        .iter()
        .map(|r| parse_int_list(r, source))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(&rows).ok_or_else(|| parse_err(source, "rows have different lengths"))
}

/// Accepts `p/q`, integers and finite decimals such as `0.001` or `1e-6`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        return (!q.is_zero()).then(|| Q::new(p, q));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n = BigInt::from_str(&format!("{whole}{frac}")).ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut x = if shift >= 0 {
        Q::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        Q::new(n, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        x = -x;
    }
    Some(x)
}

fn field<'a>(v: &'a Value, key: &str, source: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| parse_err(source, format!("missing field `{key}`")))
}

/// `{"dim": n, "gram": [[...]]}`; `dim` is optional but checked when present.
pub fn parse_lattice(v: &Value, source: &str) -> Result<Lattice> {
    let gram = parse_matrix(field(v, "gram", source)?, source)?;
    if let Some(d) = v.get("dim") {
        let d = d
            .as_u64()
            .ok_or_else(|| parse_err(source, "`dim` must be a non-negative integer"))?;
        if d as usize != gram.nrows() {
            return Err(parse_err(
                source,
                format!("`dim` is {d} but the gram matrix has {} rows", gram.nrows()),
            ));
        }
    }
    Lattice::new(gram)
}

pub fn lattice_json(l: &Lattice) -> Value {
    json!({"dim": l.dim(), "gram": matrix(l.gram())})
}

/// `{"coords": [...]}` or a bare array.
pub fn parse_vector(v: &Value, source: &str) -> Result<LatticeVector> {
    let coords = match v {
        Value::Array(_) => v,
        _ => field(v, "coords", source)?,
    };
    Ok(LatticeVector(parse_int_list(coords, source)?))
}

pub fn vector_json(x: &LatticeVector) -> Value {
    json!({"coords": int_list(x.coords())})
}

/// A list of vectors, each `{"coords": ...}` or a bare array.
pub fn parse_vector_list(v: &Value, source: &str) -> Result<Vec<LatticeVector>> {
    let items = match v {
        Value::Array(items) => items,
        _ => field(v, "vectors", source)?
            .as_array()
            .ok_or_else(|| parse_err(source, "`vectors` must be an array"))?,
    };
    items.iter().map(|x| parse_vector(x, source)).collect()
}

pub fn parse_sublattice(v: &Value, dim: usize, source: &str) -> Result<Sublattice> {
    let rows = field(v, "basis", source)?
        .as_array()
        .ok_or_else(|| parse_err(source, "`basis` must be an array of rows"))?
        .iter()
        .map(|r| parse_int_list(r, source))
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    Ok(Sublattice::span(dim, &rows))
}

pub fn sublattice_json(s: &Sublattice) -> Value {
    json!({"basis": matrix(s.basis()), "rank": s.rank(), "primitive": s.is_primitive()})
}

/// `{"matrix": [[...]]}`, columns being images of basis vectors.
pub fn parse_matrix_file(v: &Value, source: &str) -> Result<IntMatrix> {
    parse_matrix(field(v, "matrix", source)?, source)
}

pub fn isometry_json(g: &Isometry) -> Value {
    json!({"matrix": matrix(g.matrix()), "det": g.det()})
}

/// `{"coeffs": [...]}` (ascending degree) or a bare array.
pub fn parse_poly(v: &Value, source: &str) -> Result<IntPolynomial> {
    let coeffs = match v {
        Value::Array(_) => v,
        _ => field(v, "coeffs", source)?,
    };
    Ok(IntPolynomial::new(parse_int_list(coeffs, source)?))
}

pub fn poly_json(p: &IntPolynomial) -> Value {
    json!({"coeffs": int_list(p.coeffs())})
}

/// `count` includes both signs; `roots` lists one vector per pair.
pub fn root_set_json(r: &RootSet) -> Value {
    json!({
        "count": 2 * r.len(),
        "roots": Value::Array(r.roots.iter().map(|x| int_list(x.coords())).collect()),
    })
}

pub fn walk_json(w: &WalkResult) -> Value {
    json!({
        "final": vector_json(&w.final_vector),
        "steps": w.steps,
        "word": Value::Array(w.word.iter().map(|d| int_list(d.coords())).collect()),
    })
}

pub fn fibration_class_json(c: &FibrationClass) -> Value {
    json!({
        "e": int_list(c.e.coords()),
        "infinite": c.infinite,
        "rank_perp": c.rank_perp,
        "rank_perp_two": c.rank_perp_two,
    })
}

pub fn atlas_json(a: &FibrationAtlas) -> Value {
    json!({
        "certified_full": a.certified_full,
        "classes": Value::Array(a.classes.iter().map(fibration_class_json).collect()),
        "infinite_count": a.infinite_classes().count(),
        "span_rank": a.span_rank,
    })
}

pub fn exceptional_json(r: &ExceptionalReport) -> Value {
    json!({
        "certified": r.certified,
        "exceptional": sublattice_json(&r.sublattice),
        "perp_two_intersection": sublattice_json(&r.intersection),
    })
}

pub fn even_picard_json(r: &EvenPicardReport) -> Value {
    json!({
        "certified_full": r.certified_full,
        "exceptional_trivial": r.exceptional_trivial.as_str(),
        "infinite_classes": r.infinite_classes,
        "perp_two_intersection_trivial": r.perp_two_intersection_trivial.as_str(),
        "spans_rationally": r.spans_rationally.as_str(),
    })
}

pub fn interval_json(iv: &(Q, Q)) -> Value {
    json!([rational(&iv.0), rational(&iv.1)])
}

pub fn decomposition_json(d: &SalemDecomposition) -> Value {
    let cyclo: Vec<Value> = d
        .cyclotomic_factors
        .iter()
        .map(|&(n, m)| json!({"index": n, "multiplicity": m}))
        .collect();
    let mid = (&d.spectral_radius.0 + &d.spectral_radius.1) / Q::from_integer(BigInt::from(2));
    json!({
        "cyclotomic_factors": cyclo,
        "entropy_is_zero": d.entropy_is_zero,
        "salem_degree": d.salem_degree,
        "salem_factor": d.salem_factor.as_ref().map(poly_json),
        "spectral_radius": interval_json(&d.spectral_radius),
        "spectral_radius_approx": to_decimal(&mid, 12),
    })
}

pub fn search_report_json(r: &SearchReport) -> Value {
    json!({
        "achieved_degree": r.achieved_degree,
        "budget": r.budget,
        "char_poly": poly_json(&r.decomposition.product()),
        "decomposition": decomposition_json(&r.decomposition),
        "matrix": matrix(r.best_isometry.matrix()),
        "max_degree_seen": r.max_degree_seen,
        "max_word_len": r.max_word_len,
        "seed": r.seed,
        "strategy": r.strategy,
        "target_degree": r.target_degree,
        "word": r.best_word,
        "words_examined": r.words_examined,
    })
}

pub fn transfer_report_json(r: &TransferReport) -> Value {
    let classes: Vec<Value> = r
        .classes
        .iter()
        .zip(&r.nef)
        .zip(&r.pullbacks)
        .map(|((c, nef), x)| {
            let mut obj = fibration_class_json(c);
            obj["nef"] = Value::Bool(*nef);
            obj["pullback"] = int_list(x.coords());
            obj
        })
        .collect();
    json!({
        "classes": classes,
        "h_pullback": int_list(r.h_pullback.coords()),
        "n": int(&r.n),
        "reference": int_list(r.reference.coords()),
        "source_span_rank": r.source_span_rank,
        "span_rank": r.span_rank,
        "walk_length": r.walk.steps,
        "walk_word": Value::Array(r.walk.word.iter().map(|d| int_list(d.coords())).collect()),
    })
}

/// `{"error": name, "message": ...}`, with the partial report for an
/// exhausted search.
pub fn error_json(e: &Error) -> Value {
    let mut obj = Map::new();
    obj.insert("error".into(), Value::String(e.name().into()));
    obj.insert("message".into(), Value::String(e.to_string()));
    if let Error::BudgetExhausted(report) = e {
        obj.insert("report".into(), search_report_json(report));
    }
    Value::Object(obj)
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse_json_str(text: &str, source: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(source, e.to_string()))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_json_str(&text, &path.display().to_string())
}

pub fn load_lattice(path: &Path) -> Result<Lattice> {
    let source = path.display().to_string();
    let v = read_json(path)?;
    parse_lattice(&v, &source).map_err(|e| match e {
        e @ (Error::Parse { .. } | Error::Io { .. }) => e,
        other => parse_err(&source, format!("{}: {other}", other.name())),
    })
}

/// Every `*.json` file in `dir`, keyed by file stem and sorted by name.
/// Failures are collected into one `Parse` error naming each bad file.
pub fn load_corpus(dir: &Path) -> Result<Vec<(String, Lattice)>> {
    let io_err = |e: std::io::Error| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if path.extension().is_some_and(|x| x == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    let mut out = Vec::new();
    let mut failures = Vec::new();
    for path in paths {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match load_lattice(&path) {
            Ok(l) => out.push((name, l)),
            Err(e) => failures.push(format!("{}: {e}", path.display())),
        }
    }
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(parse_err(&dir.display().to_string(), failures.join("; ")))
    }
}

/// Parses a `"p/q"` string back into a rational.
pub fn parse_rational_value(v: &Value, source: &str) -> Result<Q> {
    v.as_str()
        .and_then(parse_rational)
        .ok_or_else(|| parse_err(source, format!("{v} is not a rational string")))
}

/// Positive rational, as required for tolerances and widths.
pub fn parse_positive_rational(s: &str) -> Result<Q> {
    match parse_rational(s) {
        Some(q) if q.is_positive() => Ok(q),
        _ => Err(parse_err("--tol", format!("`{s}` is not a positive rational"))),
    }
}

/// `10^-digits`, handy for decimal tolerances.
pub fn decimal_tolerance(digits: u32) -> Q {
    Q::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
}
