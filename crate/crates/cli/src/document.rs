//! JSON input documents: a weighted quiver with named representations,
//! representation maps, complexes and chain maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use weightforge::derived::{ChainMap, Complex};
use weightforge::linalg::{Rat, RatMatrix};
use weightforge::quiver::{Rep, RepMap, WeightedQuiver};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawVertex {
    pub id: String,
    pub weight: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawArrow {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawQuiver {
    pub vertices: Vec<RawVertex>,
    #[serde(default)]
    pub arrows: Vec<RawArrow>,
}

type RawMatrix = Vec<Vec<Value>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRep {
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub arrows: BTreeMap<String, RawMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawMap {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub components: BTreeMap<String, RawMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawComplex {
    pub terms: BTreeMap<String, String>,
    #[serde(default)]
    pub differentials: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawChainMap {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub components: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawDocument {
    pub quiver: RawQuiver,
    #[serde(default)]
    pub reps: BTreeMap<String, RawRep>,
    #[serde(default)]
    pub maps: BTreeMap<String, RawMap>,
    #[serde(default)]
    pub complexes: BTreeMap<String, RawComplex>,
    #[serde(default)]
    pub chain_maps: BTreeMap<String, RawChainMap>,
}

/// A schema error with the JSON path it was found at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct Document {
    pub quiver: Arc<WeightedQuiver>,
    pub reps: BTreeMap<String, Rep>,
    pub maps: BTreeMap<String, RepMap>,
    pub complexes: BTreeMap<String, Complex>,
    pub chain_maps: BTreeMap<String, ChainMap>,
}

struct Errors(Vec<SchemaError>);

impl Errors {
    fn push(&mut self, path: impl Into<String>, message: impl fmt::Display) {
        self.0.push(SchemaError {
            path: path.into(),
            message: message.to_string(),
        });
    }
}

fn parse_rat(v: &Value) -> Result<Rat, String> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rat::from_int(i)),
            None => Err(format!("`{n}` is not an integer; write fractions as strings")),
        },
        Value::String(s) => s.parse().map_err(|e| format!("{e}")),
        other => Err(format!("expected a rational, found `{other}`")),
    }
}

fn parse_matrix(
    raw: Option<&RawMatrix>,
    rows: usize,
    cols: usize,
    path: &str,
    errs: &mut Errors,
) -> Option<RatMatrix> {
    let Some(raw) = raw else {
        return Some(RatMatrix::zeros(rows, cols));
    };
    // An empty list stands for any matrix with no entries.
    if raw.is_empty() && rows * cols == 0 {
        return Some(RatMatrix::zeros(rows, cols));
    }
    if raw.len() != rows {
        errs.push(path, format!("expected {rows} rows, found {}", raw.len()));
        return None;
    }
    let mut data = Vec::with_capacity(rows * cols);
    let mut ok = true;
    for (i, row) in raw.iter().enumerate() {
        if row.len() != cols {
            errs.push(format!("{path}[{i}]"), format!("expected {cols} entries, found {}", row.len()));
            ok = false;
            continue;
        }
        for (j, v) in row.iter().enumerate() {
            match parse_rat(v) {
                Ok(r) => data.push(r),
                Err(e) => {
                    errs.push(format!("{path}[{i}][{j}]"), e);
                    ok = false;
                }
            }
        }
    }
    ok.then(|| RatMatrix::from_vec(rows, cols, data))
}

fn parse_degree(s: &str, path: &str, errs: &mut Errors) -> Option<i32> {
    match s.parse() {
        Ok(n) => Some(n),
        Err(_) => {
            errs.push(path, format!("degree `{s}` is not an integer"));
            None
        }
    }
}

/// Parses and validates a document, collecting every error found.
pub fn parse(text: &str) -> Result<Document, Vec<SchemaError>> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
        vec![SchemaError {
            path: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        }]
    })?;
    from_raw(&raw)
}

pub fn from_raw(raw: &RawDocument) -> Result<Document, Vec<SchemaError>> {
    let mut errs = Errors(Vec::new());
    let q = WeightedQuiver::new(
        raw.quiver
            .vertices
            .iter()
            .map(|v| (v.id.clone(), v.weight))
            .collect(),
        raw.quiver
            .arrows
            .iter()
            .map(|a| (a.id.clone(), a.from.clone(), a.to.clone()))
            .collect(),
    )
    .map_err(|e| {
        vec![SchemaError {
            path: "quiver".into(),
            message: e.to_string(),
        }]
    })?
    .into_arc();

    let mut reps = BTreeMap::new();
    for (name, r) in &raw.reps {
        let path = format!("reps.{name}");
        for id in r.dims.keys().chain(r.arrows.keys()) {
            if q.vertex(id).is_err() && q.arrow(id).is_err() {
                errs.push(&path, format!("unknown vertex or arrow `{id}`"));
            }
        }
        let dims: Vec<usize> = q
            .vertices()
            .iter()
            .map(|v| r.dims.get(&v.id).copied().unwrap_or(0))
            .collect();
        let mats: Vec<Option<RatMatrix>> = q
            .arrows()
            .iter()
            .map(|a| {
                let p = format!("{path}.arrows.{}", a.id);
                parse_matrix(r.arrows.get(&a.id), dims[a.target], dims[a.source], &p, &mut errs)
            })
            .collect();
        if let Some(mats) = mats.into_iter().collect::<Option<Vec<_>>>() {
            match Rep::new(q.clone(), dims, mats) {
                Ok(rep) => {
                    reps.insert(name.clone(), rep);
                }
                Err(e) => errs.push(path, e),
            }
        }
    }

    let mut maps = BTreeMap::new();
    for (name, m) in &raw.maps {
        let path = format!("maps.{name}");
        let (Some(src), Some(tgt)) = (reps.get(&m.from), reps.get(&m.to)) else {
            errs.push(&path, format!("unknown representation `{}` or `{}`", m.from, m.to));
            continue;
        };
        for id in m.components.keys() {
            if q.vertex(id).is_err() {
                errs.push(&path, format!("unknown vertex `{id}`"));
            }
        }
        let comps: Option<Vec<RatMatrix>> = q
            .vertices()
            .iter()
            .enumerate()
            .map(|(x, v)| {
                let p = format!("{path}.components.{}", v.id);
                parse_matrix(m.components.get(&v.id), tgt.dim(x), src.dim(x), &p, &mut errs)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        if let Some(comps) = comps {
            match RepMap::new(src.clone(), tgt.clone(), comps) {
                Ok(f) => {
                    maps.insert(name.clone(), f);
                }
                Err(e) => errs.push(path, e),
            }
        }
    }

    let mut complexes = BTreeMap::new();
    for (name, c) in &raw.complexes {
        let path = format!("complexes.{name}");
        let mut terms = BTreeMap::new();
        for (deg, r) in &c.terms {
            let Some(n) = parse_degree(deg, &format!("{path}.terms"), &mut errs) else {
                continue;
            };
            match reps.get(r) {
                Some(rep) => {
                    terms.insert(n, rep.clone());
                }
                None => errs.push(format!("{path}.terms.{deg}"), format!("unknown representation `{r}`")),
            }
        }
        let mut diffs = BTreeMap::new();
        for (deg, f) in &c.differentials {
            let Some(n) = parse_degree(deg, &format!("{path}.differentials"), &mut errs) else {
                continue;
            };
            match maps.get(f) {
                Some(map) => {
                    diffs.insert(n, map.clone());
                }
                None => errs.push(format!("{path}.differentials.{deg}"), format!("unknown map `{f}`")),
            }
        }
        if let Some(c) = assemble(&q, &terms, &diffs, &path, &mut errs) {
            complexes.insert(name.clone(), c);
        }
    }

    let mut chain_maps = BTreeMap::new();
    for (name, g) in &raw.chain_maps {
        let path = format!("chain_maps.{name}");
        let (Some(src), Some(tgt)) = (complexes.get(&g.from), complexes.get(&g.to)) else {
            errs.push(&path, format!("unknown complex `{}` or `{}`", g.from, g.to));
            continue;
        };
        let mut comps = BTreeMap::new();
        for (deg, f) in &g.components {
            let Some(n) = parse_degree(deg, &format!("{path}.components"), &mut errs) else {
                continue;
            };
            match maps.get(f) {
                Some(map) => {
                    comps.insert(n, map.clone());
                }
                None => errs.push(format!("{path}.components.{deg}"), format!("unknown map `{f}`")),
            }
        }
        let mut list = Vec::new();
        let mut ok = true;
        for n in src.degrees() {
            let (s, t) = (src.term(n), tgt.term(n));
            match comps.get(&n) {
                Some(f) if f.source().dims() == s.dims() && f.target().dims() == t.dims() => {
                    list.push(f.clone())
                }
                Some(_) => {
                    errs.push(format!("{path}.components.{n}"), "map does not match the terms");
                    ok = false;
                }
                None => list.push(RepMap::zero(&s, &t)),
            }
        }
        if let Some(n) = comps.keys().find(|n| !src.degrees().contains(n)) {
            errs.push(format!("{path}.components.{n}"), "source complex vanishes in this degree");
            ok = false;
        }
        if ok {
            match ChainMap::new(src.clone(), tgt.clone(), list) {
                Ok(f) => {
                    chain_maps.insert(name.clone(), f);
                }
                Err(e) => errs.push(path, e),
            }
        }
    }

    if errs.0.is_empty() {
        Ok(Document {
            quiver: q,
            reps,
            maps,
            complexes,
            chain_maps,
        })
    } else {
        Err(errs.0)
    }
}

fn assemble(
    q: &Arc<WeightedQuiver>,
    terms: &BTreeMap<i32, Rep>,
    diffs: &BTreeMap<i32, RepMap>,
    path: &str,
    errs: &mut Errors,
) -> Option<Complex> {
    let (Some(&lo), Some(&hi)) = (terms.keys().next(), terms.keys().next_back()) else {
        if !diffs.is_empty() {
            errs.push(path, "differentials given for a complex without terms");
            return None;
        }
        return Some(Complex::zero(q.clone()));
    };
    let zero = Rep::zero(q.clone());
    let term = |n: i32| terms.get(&n).cloned().unwrap_or_else(|| zero.clone());
    let mut ds = Vec::new();
    let mut ok = true;
    for n in lo..hi {
        let (s, t) = (term(n), term(n + 1));
        match diffs.get(&n) {
            Some(d) if d.source().dims() == s.dims() && d.target().dims() == t.dims() => {
                ds.push(d.clone())
            }
            Some(_) => {
                errs.push(format!("{path}.differentials.{n}"), "map does not match the terms");
                ok = false;
            }
            None => ds.push(RepMap::zero(&s, &t)),
        }
    }
    if let Some(n) = diffs.keys().find(|&&n| n < lo || n >= hi) {
        errs.push(format!("{path}.differentials.{n}"), "no terms on both sides");
        ok = false;
    }
    if !ok {
        return None;
    }
    match Complex::new(q.clone(), lo, (lo..=hi).map(term).collect(), ds) {
        Ok(c) => Some(c),
        Err(e) => {
            errs.push(path, e);
            None
        }
    }
}

fn rat_value(r: &Rat) -> Value {
    match r.to_i64() {
        Some(i) if r.is_integer() => Value::from(i),
        _ => Value::String(r.to_string()),
    }
}

fn matrix_value(m: &RatMatrix) -> RawMatrix {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(rat_value).collect())
        .collect()
}

fn rep_raw(q: &WeightedQuiver, m: &Rep) -> RawRep {
    RawRep {
        dims: q
            .vertices()
            .iter()
            .enumerate()
            .filter(|(x, _)| m.dim(*x) > 0)
            .map(|(x, v)| (v.id.clone(), m.dim(x)))
            .collect(),
        arrows: q
            .arrows()
            .iter()
            .enumerate()
            .filter(|(a, _)| !m.matrix(*a).is_zero())
            .map(|(a, arr)| (arr.id.clone(), matrix_value(m.matrix(a))))
            .collect(),
    }
}

fn map_raw(q: &WeightedQuiver, from: &str, to: &str, f: &RepMap) -> RawMap {
    RawMap {
        from: from.into(),
        to: to.into(),
        components: q
            .vertices()
            .iter()
            .enumerate()
            .filter(|(x, _)| !f.component(*x).is_zero())
            .map(|(x, v)| (v.id.clone(), matrix_value(f.component(x))))
            .collect(),
    }
}

/// Writes a document back out. Terms and components of complexes get
/// generated names of the form `name@degree`.
pub fn serialize(doc: &Document) -> RawDocument {
    let q = &doc.quiver;
    let mut out = RawDocument {
        quiver: RawQuiver {
            vertices: q
                .vertices()
                .iter()
                .map(|v| RawVertex {
                    id: v.id.clone(),
                    weight: v.weight,
                })
                .collect(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| RawArrow {
                    id: a.id.clone(),
                    from: q.vertex_id(a.source).into(),
                    to: q.vertex_id(a.target).into(),
                })
                .collect(),
        },
        reps: doc.reps.iter().map(|(n, m)| (n.clone(), rep_raw(q, m))).collect(),
        maps: BTreeMap::new(),
        complexes: BTreeMap::new(),
        chain_maps: BTreeMap::new(),
    };
    let name_of = |m: &Rep, out: &RawDocument| {
        out.reps
            .iter()
            .find(|(n, _)| doc.reps.get(*n).is_some_and(|r| r == m))
            .map(|(n, _)| n.clone())
    };
    for (n, f) in &doc.maps {
        let from = name_of(f.source(), &out).expect("map endpoints are named");
        let to = name_of(f.target(), &out).expect("map endpoints are named");
        out.maps.insert(n.clone(), map_raw(q, &from, &to, f));
    }
    for (name, c) in &doc.complexes {
        let mut raw = RawComplex {
            terms: BTreeMap::new(),
            differentials: BTreeMap::new(),
        };
        if !c.is_zero() {
            for n in c.degrees() {
                let t = format!("{name}@{n}");
                out.reps.insert(t.clone(), rep_raw(q, &c.term(n)));
                raw.terms.insert(n.to_string(), t);
            }
            for n in c.lo()..c.hi() {
                let d = format!("{name}@d{n}");
                let m = map_raw(q, &format!("{name}@{n}"), &format!("{name}@{}", n + 1), &c.diff(n));
                out.maps.insert(d.clone(), m);
                raw.differentials.insert(n.to_string(), d);
            }
        }
        out.complexes.insert(name.clone(), raw);
    }
    for (name, g) in &doc.chain_maps {
        let from = doc.complexes.iter().find(|(_, c)| *c == g.source()).map(|(n, _)| n.clone());
        let to = doc.complexes.iter().find(|(_, c)| *c == g.target()).map(|(n, _)| n.clone());
        let (Some(from), Some(to)) = (from, to) else { continue };
        let mut raw = RawChainMap {
            from: from.clone(),
            to: to.clone(),
            components: BTreeMap::new(),
        };
        for n in g.source().degrees() {
            let m = format!("{name}@{n}");
            let f = map_raw(q, &format!("{from}@{n}"), &format!("{to}@{n}"), &g.component(n));
            out.maps.insert(m.clone(), f);
            raw.components.insert(n.to_string(), m);
        }
        out.chain_maps.insert(name.clone(), raw);
    }
    out
}

impl Document {
    /// A named complex, or a named representation placed in degree 0.
    pub fn object(&self, name: &str) -> Option<Complex> {
        self.complexes
            .get(name)
            .cloned()
            .or_else(|| self.reps.get(name).map(|m| Complex::concentrated(m, 0)))
    }
}
