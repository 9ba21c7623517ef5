//! JSON input documents: a variety, named actions and named classes.
//!
//! ```json
//! {
//!   "variety": {"k": 2, "centers": [{"dim": 0, "label": "p"}]},
//!   "actions": [{"name": "swap", "matrix": [[1, 0], [0, 1]]}],
//!   "classes": [{"name": "a", "coeffs": ["2", "-1/3"]}],
//!   "options": {"tol": "1e-9"}
//! }
//! ```
//!
//! Matrices act on the basis [h, e_1, ..., e_m]; column j is the image of
//! basis vector j. Coefficients are integers or "p/q" strings.

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::action::PullbackAction;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::numeric::{parse_exact_coefficient, parse_rational, rational_string};
use crate::positivity::Curve;
use crate::ring::{BlowupConfig, GradedClass, RingModel};
use crate::spectral::default_tol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterSpec {
    pub dim: usize,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variety {
    pub k: usize,
    pub centers: Vec<CenterSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub name: String,
    pub matrix: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSpec {
    pub name: String,
    pub coeffs: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Options {
    pub tol: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub variety: Variety,
    pub actions: Vec<ActionSpec>,
    pub classes: Vec<ClassSpec>,
    pub options: Options,
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(&join(path, key), "unknown field"));
    }
    Ok(map)
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn usize_field(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().and_then(|n| usize::try_from(n).ok()).ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

fn string_field(v: &Value, path: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| schema(path, "expected a string"))
}

fn integer_entry(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer literal")),
        Value::String(s) => s.trim().parse().map_err(|_| schema(path, "expected an integer")),
        _ => Err(schema(path, "expected an integer")),
    }
}

fn coefficient(v: &Value, path: &str) -> Result<BigRational> {
    let bad = || schema(path, "expected an integer or a \"p/q\" string");
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(BigRational::from_integer(n.to_string().parse().expect("integer literal")))
        }
        Value::String(s) => parse_exact_coefficient(s).ok_or_else(bad),
        _ => Err(bad()),
    }
}

fn required<'a>(map: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    map.get(key).ok_or_else(|| schema(&join(path, key), "missing field"))
}

/// Parses and checks a document. Syntax problems are `Parse` errors with a
/// position, shape problems `Schema` errors with a field path, and size or
/// name clashes `Consistency` errors.
pub fn parse_document(text: &str) -> Result<InputDocument> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let top = object(&root, "", &["variety", "actions", "classes", "options"])?;

    let var = object(required(top, "", "variety")?, "variety", &["k", "centers"])?;
    let k = usize_field(required(var, "variety", "k")?, "variety.k")?;
    let mut centers = vec![];
    if let Some(cs) = var.get("centers") {
        for (i, c) in array(cs, "variety.centers")?.iter().enumerate() {
            let path = format!("variety.centers[{i}]");
            let m = object(c, &path, &["dim", "label"])?;
            let dim = usize_field(required(m, &path, "dim")?, &join(&path, "dim"))?;
            let label = m.get("label").map(|l| string_field(l, &join(&path, "label"))).transpose()?;
            centers.push(CenterSpec { dim, label });
        }
    }

    let mut actions = vec![];
    if let Some(acts) = top.get("actions") {
        for (i, a) in array(acts, "actions")?.iter().enumerate() {
            let path = format!("actions[{i}]");
            let m = object(a, &path, &["name", "matrix"])?;
            let name = string_field(required(m, &path, "name")?, &join(&path, "name"))?;
            let mpath = join(&path, "matrix");
            let rows = array(required(m, &path, "matrix")?, &mpath)?;
            let mut matrix = vec![];
            for (r, row) in rows.iter().enumerate() {
                let rpath = format!("{mpath}[{r}]");
                let entries = array(row, &rpath)?;
                matrix.push(
                    entries
                        .iter()
                        .enumerate()
                        .map(|(c, v)| integer_entry(v, &format!("{rpath}[{c}]")))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            actions.push(ActionSpec { name, matrix });
        }
    }

    let mut classes = vec![];
    if let Some(cls) = top.get("classes") {
        for (i, c) in array(cls, "classes")?.iter().enumerate() {
            let path = format!("classes[{i}]");
            let m = object(c, &path, &["name", "coeffs"])?;
            let name = string_field(required(m, &path, "name")?, &join(&path, "name"))?;
            let cpath = join(&path, "coeffs");
            let coeffs = array(required(m, &path, "coeffs")?, &cpath)?
                .iter()
                .enumerate()
                .map(|(j, v)| coefficient(v, &format!("{cpath}[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            classes.push(ClassSpec { name, coeffs });
        }
    }

    let mut options = Options::default();
    if let Some(opts) = top.get("options") {
        let m = object(opts, "options", &["tol"])?;
        if let Some(t) = m.get("tol") {
            let text = match t {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(schema("options.tol", "expected a number or a string")),
            };
            let tol = parse_rational(&text)
                .filter(|t| t > &BigRational::from_integer(0.into()))
                .ok_or_else(|| schema("options.tol", "expected a positive rational"))?;
            options.tol = Some(tol);
        }
    }

    let doc = InputDocument { variety: Variety { k, centers }, actions, classes, options };
    doc.check_consistency()?;
    Ok(doc)
}

pub fn load(path: &Path) -> Result<InputDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

/// Extra test curves for nef checks:
/// `{"curves": [{"label": "conic", "coeffs": [...]}]}` with coefficients in
/// the degree-(k-1) basis.
pub fn parse_curves(text: &str, ring: &RingModel) -> Result<Vec<Curve>> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let top = object(&root, "", &["curves"])?;
    let k = ring.k();
    let n = ring.rank(k - 1);
    let mut out = vec![];
    for (i, c) in array(required(top, "", "curves")?, "curves")?.iter().enumerate() {
        let path = format!("curves[{i}]");
        let m = object(c, &path, &["label", "coeffs"])?;
        let label = string_field(required(m, &path, "label")?, &join(&path, "label"))?;
        let cpath = join(&path, "coeffs");
        let coeffs = array(required(m, &path, "coeffs")?, &cpath)?
            .iter()
            .enumerate()
            .map(|(j, v)| coefficient(v, &format!("{cpath}[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != n {
            return Err(Error::Consistency(format!(
                "{cpath}: expected {n} coefficients in degree {}, got {}",
                k - 1,
                coeffs.len()
            )));
        }
        out.push(Curve { label, class: ring.class_in_degree(k - 1, coeffs)? });
    }
    Ok(out)
}

#[derive(Serialize)]
struct CenterOut<'a> {
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
}

#[derive(Serialize)]
struct VarietyOut<'a> {
    k: usize,
    centers: Vec<CenterOut<'a>>,
}

#[derive(Serialize)]
struct ActionOut<'a> {
    name: &'a str,
    matrix: Vec<Vec<Value>>,
}

#[derive(Serialize)]
struct ClassOut<'a> {
    name: &'a str,
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct OptionsOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<String>,
}

#[derive(Serialize)]
struct DocumentOut<'a> {
    variety: VarietyOut<'a>,
    actions: Vec<ActionOut<'a>>,
    classes: Vec<ClassOut<'a>>,
    options: OptionsOut,
}

fn integer_value(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(n.to_string()),
    }
}

/// Pretty JSON text that parses back to the same document.
pub fn save(doc: &InputDocument) -> String {
    let out = DocumentOut {
        variety: VarietyOut {
            k: doc.variety.k,
            centers: doc.variety.centers.iter().map(|c| CenterOut { dim: c.dim, label: c.label.as_deref() }).collect(),
        },
        actions: doc
            .actions
            .iter()
            .map(|a| ActionOut {
                name: &a.name,
                matrix: a.matrix.iter().map(|row| row.iter().map(integer_value).collect()).collect(),
            })
            .collect(),
        classes: doc
            .classes
            .iter()
            .map(|c| ClassOut { name: &c.name, coeffs: c.coeffs.iter().map(rational_string).collect() })
            .collect(),
        options: OptionsOut { tol: doc.options.tol.as_ref().map(rational_string) },
    };
    let mut s = serde_json::to_string_pretty(&out).expect("serializable");
    s.push('\n');
    s
}

impl InputDocument {
    pub fn config(&self) -> Result<BlowupConfig> {
        BlowupConfig::new(self.variety.k, self.variety.centers.iter().map(|c| c.dim).collect())
            .map_err(|e| Error::Consistency(format!("variety: {e}")))
    }

    fn check_consistency(&self) -> Result<()> {
        self.config()?;
        let n = 1 + self.variety.centers.len();
        let mut seen = std::collections::HashSet::new();
        for (i, a) in self.actions.iter().enumerate() {
            if !seen.insert(("action", a.name.as_str())) {
                return Err(Error::Consistency(format!("actions[{i}]: duplicate name `{}`", a.name)));
            }
            let square = a.matrix.len() == n && a.matrix.iter().all(|r| r.len() == n);
            if !square {
                let cols = a.matrix.first().map_or(0, Vec::len);
                return Err(Error::Consistency(format!(
                    "actions[{i}].matrix: expected {n}x{n} for 1 + {} generators, got {}x{cols}",
                    n - 1,
                    a.matrix.len()
                )));
            }
        }
        for (i, c) in self.classes.iter().enumerate() {
            if !seen.insert(("class", c.name.as_str())) {
                return Err(Error::Consistency(format!("classes[{i}]: duplicate name `{}`", c.name)));
            }
            if c.coeffs.len() != n {
                return Err(Error::Consistency(format!(
                    "classes[{i}].coeffs: expected {n} coefficients, got {}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn tol(&self) -> BigRational {
        self.options.tol.clone().unwrap_or_else(default_tol)
    }
}

/// A document together with its ring and actions.
#[derive(Debug)]
pub struct Workspace {
    pub document: InputDocument,
    pub ring: Arc<RingModel>,
    actions: Vec<PullbackAction>,
    identity: PullbackAction,
}

impl Workspace {
    pub fn new(document: InputDocument) -> Result<Self> {
        let ring = Arc::new(RingModel::new(document.config()?)?);
        let actions = document
            .actions
            .iter()
            .map(|a| PullbackAction::new(ring.clone(), a.name.clone(), IntMatrix::from_rows(&a.matrix)))
            .collect::<Result<Vec<_>>>()?;
        let identity = PullbackAction::identity(ring.clone());
        Ok(Self { document, ring, actions, identity })
    }

    pub fn actions(&self) -> &[PullbackAction] {
        &self.actions
    }

    /// A named action; `id` is the identity unless the document defines it.
    pub fn action(&self, name: &str) -> Result<&PullbackAction> {
        if let Some(a) = self.actions.iter().find(|a| a.name() == name) {
            return Ok(a);
        }
        if name == "id" {
            return Ok(&self.identity);
        }
        Err(Error::UnknownAction(name.to_string()))
    }

    /// A named class. Besides the document's classes, `h`, `e1`..`em`, `K`
    /// and `-K` are always available.
    pub fn class(&self, name: &str) -> Result<GradedClass> {
        if let Some(c) = self.document.classes.iter().find(|c| c.name == name) {
            return self.ring.parse_class(&c.coeffs);
        }
        let m = self.ring.num_centers();
        match name {
            "h" => Ok(self.ring.h()),
            "K" => Ok(self.ring.canonical_class()),
            "-K" => Ok(-&self.ring.canonical_class()),
            _ => name
                .strip_prefix('e')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| (1..=m).contains(&i))
                .map(|i| self.ring.e(i - 1))
                .ok_or_else(|| Error::UnknownClass(name.to_string())),
        }
    }

    pub fn tol(&self) -> BigRational {
        self.document.tol()
    }
}
