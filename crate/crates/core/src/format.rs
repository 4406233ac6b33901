//! JSON-syntax file formats and a workspace of named, cross-referenced objects.
//!
//! Quantale: `{"builtin": name, "n": int}` or explicit tables.
//! Category: `{"quantale": ref, "monad": kind, "carrier": [ids], "structure": [[tx, x, v], ...], "default": "bot"}`.
//! Functor: `{"source": ref, "target": ref, "map": {x: y}}`.
//! Problem: `{"f": ref, "g": ref, "u": ref, "v": ref}`.
//!
//! Every file may carry a `"name"`; otherwise the file stem names it. A
//! reference is a declared name, a path relative to the referring file, or
//! (for quantales) builtin shorthand such as `truncated_chain(2)`. `TX`
//! elements are written as the point they are principal at.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lofs::LiftingProblem;
use crate::monad::{Monad, MonadKind};
use crate::quantale::{Elem, Quantale, QuantaleSpec};
use crate::report::LawReport;
use crate::tvcat::{Category, Functor};
use crate::vrel::VRel;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub quantale: Value,
    pub monad: String,
    pub carrier: Vec<String>,
    pub structure: Vec<[String; 3]>,
    pub default: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: String,
    pub target: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub f: String,
    pub g: String,
    pub u: String,
    pub v: String,
}

#[derive(Debug, Clone)]
pub enum Object {
    Quantale(Arc<Quantale>),
    Category(Arc<Category>),
    Functor(Functor),
    /// The four sides of a square; commutation is checked on validation.
    Problem([Functor; 4]),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Quantale(_) => "quantale",
            Object::Category(_) => "category",
            Object::Functor(_) => "functor",
            Object::Problem(_) => "problem",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub path: Option<PathBuf>,
    pub object: Object,
}

/// Objects loaded from files, resolved by declared name or path.
#[derive(Debug, Default)]
pub struct Workspace {
    entries: Vec<Entry>,
    by_name: HashMap<String, usize>,
    by_path: HashMap<PathBuf, usize>,
    monads: Vec<Arc<Monad>>,
}

fn malformed(origin: &str, msg: impl std::fmt::Display) -> Error {
    Error::Malformed(format!("{origin}: {msg}"))
}

fn default_elem(q: &Quantale, s: &str) -> Option<Elem> {
    match s {
        "bot" => Some(q.bottom()),
        "top" => Some(q.top()),
        "unit" => Some(q.unit()),
        other => q.elem(other),
    }
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Loads a file, or every `*.json` file of a directory in name order.
    pub fn load(&mut self, path: &Path) -> Result<Vec<usize>> {
        if path.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| malformed(&path.display().to_string(), e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            let mut out = Vec::new();
            for f in files {
                out.push(self.load_file(&f)?);
            }
            return Ok(out);
        }
        Ok(vec![self.load_file(path)?])
    }

    pub fn load_file(&mut self, path: &Path) -> Result<usize> {
        let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        if let Some(&i) = self.by_path.get(&key) {
            return Ok(i);
        }
        let origin = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| malformed(&origin, e))?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let i = self.load_str(&text, &stem, &dir, &origin)?;
        self.entries[i].path = Some(key.clone());
        self.by_path.insert(key, i);
        Ok(i)
    }

    /// Parses one object; `stem` names it when it declares no name.
    pub fn load_str(&mut self, text: &str, stem: &str, dir: &Path, origin: &str) -> Result<usize> {
        let v: Value = serde_json::from_str(text).map_err(|e| malformed(origin, e))?;
        let obj = v.as_object().ok_or_else(|| malformed(origin, "expected a JSON object"))?;
        let declared = obj.get("name").and_then(Value::as_str).map(str::to_string);
        let (object, name) = if obj.contains_key("carrier") {
            let file: CategoryFile = serde_json::from_value(v.clone()).map_err(|e| malformed(origin, e))?;
            let name = declared.unwrap_or_else(|| stem.to_string());
            (Object::Category(Arc::new(self.category_from_file(&file, &name, dir, origin)?)), name)
        } else if obj.contains_key("map") {
            let file: FunctorFile = serde_json::from_value(v.clone()).map_err(|e| malformed(origin, e))?;
            (Object::Functor(self.functor_from_file(&file, dir, origin)?), declared.unwrap_or_else(|| stem.to_string()))
        } else if ["f", "g", "u", "v"].iter().all(|k| obj.contains_key(*k)) {
            let file: ProblemFile = serde_json::from_value(v.clone()).map_err(|e| malformed(origin, e))?;
            let mut sides = Vec::new();
            for r in [&file.f, &file.g, &file.u, &file.v] {
                sides.push(self.resolve_functor(r, dir, origin)?);
            }
            let sides: [Functor; 4] = sides.try_into().expect("four sides");
            (Object::Problem(sides), declared.unwrap_or_else(|| stem.to_string()))
        } else if obj.contains_key("builtin") || obj.contains_key("elements") {
            let q = quantale_from_value(&v, origin)?;
            let name = declared.unwrap_or_else(|| stem.to_string());
            (Object::Quantale(q), name)
        } else {
            return Err(malformed(origin, "not a quantale, category, functor or problem object"));
        };
        if self.by_name.contains_key(&name) {
            return Err(malformed(origin, format!("duplicate name `{name}`")));
        }
        let i = self.entries.len();
        self.entries.push(Entry { name: name.clone(), path: None, object });
        self.by_name.insert(name, i);
        Ok(i)
    }

    fn resolve(&mut self, r: &str, dir: &Path, origin: &str) -> Result<usize> {
        if let Some(&i) = self.by_name.get(r) {
            return Ok(i);
        }
        for p in [dir.join(r), dir.join(format!("{r}.json")), PathBuf::from(r)] {
            if p.is_file() {
                return self.load_file(&p);
            }
        }
        Err(malformed(origin, format!("unresolved reference `{r}`")))
    }

    fn resolve_quantale(&mut self, v: &Value, dir: &Path, origin: &str) -> Result<Arc<Quantale>> {
        match v {
            Value::String(r) => {
                if let Some(&i) = self.by_name.get(r.as_str()) {
                    if let Object::Quantale(q) = &self.entries[i].object {
                        return Ok(q.clone());
                    }
                }
                if dir.join(r).is_file() || dir.join(format!("{r}.json")).is_file() || Path::new(r).is_file() {
                    let i = self.resolve(r, dir, origin)?;
                    return match &self.entries[i].object {
                        Object::Quantale(q) => Ok(q.clone()),
                        o => Err(malformed(origin, format!("`{r}` is a {}, expected a quantale", o.kind()))),
                    };
                }
                let spec = QuantaleSpec::parse_shorthand(r).ok_or_else(|| malformed(origin, format!("unresolved quantale `{r}`")))?;
                Ok(Arc::new(spec.build().map_err(|e| malformed(origin, e))?))
            }
            other => quantale_from_value(other, origin),
        }
    }

    fn resolve_category(&mut self, r: &str, dir: &Path, origin: &str) -> Result<Arc<Category>> {
        let i = self.resolve(r, dir, origin)?;
        match &self.entries[i].object {
            Object::Category(c) => Ok(c.clone()),
            o => Err(malformed(origin, format!("`{r}` is a {}, expected a category", o.kind()))),
        }
    }

    fn resolve_functor(&mut self, r: &str, dir: &Path, origin: &str) -> Result<Functor> {
        let i = self.resolve(r, dir, origin)?;
        match &self.entries[i].object {
            Object::Functor(f) => Ok(f.clone()),
            o => Err(malformed(origin, format!("`{r}` is a {}, expected a functor", o.kind()))),
        }
    }

    fn monad(&mut self, kind: MonadKind, q: Arc<Quantale>) -> Arc<Monad> {
        if let Some(m) = self.monads.iter().find(|m| m.kind() == kind && **m.quantale() == *q) {
            return m.clone();
        }
        let m = Arc::new(Monad::instantiate(kind, q));
        self.monads.push(m.clone());
        m
    }

    fn category_from_file(&mut self, file: &CategoryFile, name: &str, dir: &Path, origin: &str) -> Result<Category> {
        let q = self.resolve_quantale(&file.quantale, dir, origin)?;
        let kind = MonadKind::parse(&file.monad).map_err(|e| malformed(origin, e))?;
        let monad = self.monad(kind, q.clone());
        let n = file.carrier.len();
        let mut point: HashMap<&str, usize> = HashMap::new();
        for (i, p) in file.carrier.iter().enumerate() {
            if point.insert(p.as_str(), i).is_some() {
                return Err(malformed(origin, format!("carrier element `{p}` listed twice")));
            }
        }
        let inv = monad.principal_inverse(n).ok_or_else(|| malformed(origin, format!("{} has no principal encoding", monad.label())))?;
        let mut t_of = vec![0usize; n];
        for (t, &x) in inv.iter().enumerate() {
            t_of[x] = t;
        }
        let default = default_elem(&q, &file.default).ok_or_else(|| malformed(origin, format!("unknown default `{}`", file.default)))?;
        let mut a = VRel::from_fn(q.clone(), monad.t_size(n), n, |_, _| default);
        for (k, [tx, x, v]) in file.structure.iter().enumerate() {
            let entry = || format!("structure entry {k} [{tx}, {x}, {v}]");
            let t = point.get(tx.as_str()).ok_or_else(|| malformed(origin, format!("{}: unknown carrier element `{tx}`", entry())))?;
            let y = point.get(x.as_str()).ok_or_else(|| malformed(origin, format!("{}: unknown carrier element `{x}`", entry())))?;
            let e = q.elem(v).ok_or_else(|| malformed(origin, format!("{}: unknown quantale element `{v}`", entry())))?;
            a.set(t_of[*t], *y, e);
        }
        Category::new(name, monad, file.carrier.clone(), a)
    }

    fn functor_from_file(&mut self, file: &FunctorFile, dir: &Path, origin: &str) -> Result<Functor> {
        let src = self.resolve_category(&file.source, dir, origin)?;
        let tgt = self.resolve_category(&file.target, dir, origin)?;
        let mut map = Vec::with_capacity(src.len());
        for x in src.points() {
            let y = file.map.get(x).ok_or_else(|| malformed(origin, format!("map has no entry for `{x}`")))?;
            map.push(tgt.point(y).ok_or_else(|| malformed(origin, format!("map entry `{x}`: unknown target point `{y}`")))?);
        }
        if let Some(k) = file.map.keys().find(|k| src.point(k).is_none()) {
            return Err(malformed(origin, format!("map entry `{k}`: unknown source point")));
        }
        Functor::new(src, tgt, map).map_err(|e| malformed(origin, e))
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.by_name.get(name).map(|&i| &self.entries[i])
    }

    /// Looks up `r` by name, loading it as a path when unknown.
    pub fn fetch(&mut self, r: &str) -> Result<&Entry> {
        let i = self.resolve(r, Path::new("."), r)?;
        Ok(&self.entries[i])
    }

    pub fn category(&mut self, r: &str) -> Result<Arc<Category>> {
        self.resolve_category(r, Path::new("."), r)
    }

    pub fn functor(&mut self, r: &str) -> Result<Functor> {
        self.resolve_functor(r, Path::new("."), r)
    }

    pub fn problem(&mut self, r: &str) -> Result<[Functor; 4]> {
        let i = self.resolve(r, Path::new("."), r)?;
        match &self.entries[i].object {
            Object::Problem(p) => Ok(p.clone()),
            o => Err(malformed(r, format!("`{r}` is a {}, expected a problem", o.kind()))),
        }
    }

    /// Validates every loaded object, in load order.
    pub fn validate(&self) -> Vec<LawReport> {
        self.entries.iter().map(validate_entry).collect()
    }
}

fn validate_entry(e: &Entry) -> LawReport {
    let file = e.path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<inline>".into());
    let subject = format!("{} `{}` ({file})", e.object.kind(), e.name);
    match &e.object {
        Object::Quantale(q) => {
            let mut r = q.law_report();
            r.subject = subject;
            r
        }
        Object::Category(c) => {
            let mut r = c.check();
            r.subject = subject;
            r
        }
        Object::Functor(f) => {
            let mut r = f.check();
            r.subject = subject;
            r
        }
        Object::Problem([f, g, u, v]) => {
            let mut r = LawReport::new(subject);
            let w = LiftingProblem::new(f.clone(), g.clone(), u.clone(), v.clone()).err().map(|e| e.to_string());
            r.record("square commutes", w, 1, "squares");
            r
        }
    }
}

fn quantale_from_value(v: &Value, origin: &str) -> Result<Arc<Quantale>> {
    let spec: QuantaleSpec = serde_json::from_value(v.clone()).map_err(|e| malformed(origin, e))?;
    Ok(Arc::new(spec.build().map_err(|e| malformed(origin, e))?))
}

/// The category file of `c`; entries equal to bottom are left to the default.
pub fn category_to_json(c: &Category, name: &str) -> Value {
    let q = c.quantale();
    let mut structure = Vec::new();
    for t in 0..c.t_len() {
        for x in 0..c.len() {
            let v = c.a(t, x);
            if v != q.bottom() {
                structure.push(json!([c.t_name(t), c.points()[x], q.element_name(v)]));
            }
        }
    }
    json!({
        "name": name,
        "quantale": serde_json::to_value(q.spec()).expect("spec serialises"),
        "monad": c.monad().kind().name(),
        "carrier": c.points(),
        "structure": structure,
        "default": "bot",
    })
}

/// The functor file of `f`, referring to its ends by the given names.
pub fn functor_to_json(name: &str, f: &Functor, source: &str, target: &str) -> Value {
    let map: BTreeMap<&str, &str> = (0..f.src().len()).map(|x| (f.src().points()[x].as_str(), f.tgt().points()[f.at(x)].as_str())).collect();
    json!({ "name": name, "source": source, "target": target, "map": map })
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = r#"{"name": "two", "quantale": "boolean", "monad": "identity", "carrier": ["0", "1"],
        "structure": [["0", "0", "1"], ["0", "1", "1"], ["1", "1", "1"]], "default": "bot"}"#;

    fn ws_with_chain() -> Workspace {
        let mut ws = Workspace::new();
        ws.load_str(CHAIN, "x", Path::new("."), "two.json").unwrap();
        ws
    }

    #[test]
    fn two_chain_loads() {
        let mut ws = ws_with_chain();
        let c = ws.category("two").unwrap();
        assert_eq!(c.len(), 2);
        assert!(ws.validate().iter().all(LawReport::passed));
    }

    #[test]
    fn unknown_carrier_element_names_the_entry() {
        let bad = CHAIN.replace(r#"["0", "1", "1"]"#, r#"["0", "7", "1"]"#);
        let err = Workspace::new().load_str(&bad, "x", Path::new("."), "bad.json").unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
        assert!(err.to_string().contains("structure entry 1 [0, 7, 1]"), "{err}");
    }

    #[test]
    fn non_transitive_structure_fails_validation() {
        let text = r#"{"quantale": "boolean", "monad": "identity", "carrier": ["0", "1", "2"],
            "structure": [["0","0","1"],["1","1","1"],["2","2","1"],["0","1","1"],["1","2","1"]], "default": "bot"}"#;
        let mut ws = Workspace::new();
        ws.load_str(text, "nt", Path::new("."), "nt.json").unwrap();
        let rep = &ws.validate()[0];
        assert!(!rep.passed());
        assert_eq!(rep.first_failure().unwrap().witness.as_deref(), Some("(0, 1, 2)"));
    }

    #[test]
    fn category_round_trip() {
        let ws = ws_with_chain();
        let Object::Category(c) = &ws.entries()[0].object else { panic!() };
        let text = to_text(&category_to_json(c, "two"));
        let mut ws2 = Workspace::new();
        ws2.load_str(&text, "y", Path::new("."), "rt.json").unwrap();
        let c2 = ws2.category("two").unwrap();
        assert_eq!(c2.structure(), c.structure());
        assert_eq!(c2.points(), c.points());
    }

    #[test]
    fn functor_map_must_be_total() {
        let mut ws = ws_with_chain();
        let f = r#"{"source": "two", "target": "two", "map": {"0": "1"}}"#;
        let err = ws.load_str(f, "f", Path::new("."), "f.json").unwrap_err();
        assert!(err.to_string().contains("no entry for `1`"), "{err}");
    }
}
