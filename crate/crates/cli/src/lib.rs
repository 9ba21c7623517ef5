//! The `blowent` command line: loads a variety document and reports on its
//! ring, actions and classes as text or line-delimited JSON.

pub mod render;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use blowent_core::action::PullbackAction;
use blowent_core::document::{self, ActionSpec, CenterSpec, InputDocument, Options, Variety};
use blowent_core::gate::{decide, proof_chain_report};
use blowent_core::lattice::coxeter_action;
use blowent_core::numeric::{decimal_string, parse_rational, rational_string, Rounding};
use blowent_core::positivity::{
    kawamata_nu, lemma32_check, nef_necessary_check, nef_necessary_check_with, numerical_dimension, thm12_verify,
    weak_fano_report, NefAssertion, Thm12Verdict,
};
use blowent_core::spectral::{dynamical_degrees, is_cyclotomic_product, lemma21_report};
use blowent_core::{BigRational, BlowupConfig, Error, GateVerdict, Result, RingModel, Workspace};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use render::*;

#[derive(Debug, Parser)]
#[command(name = "blowent", version, about = "Intersection rings, dynamical degrees and entropy on blow-ups of P^k")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Enclosure width target, e.g. 1e-9 or 1/1000000000.
    #[arg(long, global = true, value_parser = parse_tol)]
    pub tol: Option<BigRational>,
    /// Fractional digits in printed enclosures.
    #[arg(long, global = true, default_value_t = 12)]
    pub digits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bases, ranks and pairing tables.
    Ring { doc: PathBuf },
    /// Product of named classes.
    Mul {
        doc: PathBuf,
        #[arg(long = "class", required = true)]
        classes: Vec<String>,
    },
    /// Dynamical degrees of an action.
    Degrees {
        doc: PathBuf,
        #[arg(long)]
        action: String,
    },
    /// Topological entropy of an action.
    Entropy {
        doc: PathBuf,
        #[arg(long)]
        action: String,
    },
    /// Dimension gate, from a document or from --k and --dims.
    Gate {
        #[arg(conflicts_with_all = ["k", "dims"], required_unless_present = "k")]
        doc: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
    },
    /// Validation and degree inequalities of an action, and the fixed
    /// class test when --class is given.
    Verify {
        doc: PathBuf,
        #[arg(long)]
        action: String,
        #[arg(long)]
        class: Option<String>,
    },
    /// Necessary nef conditions for a class.
    NefCheck {
        doc: PathBuf,
        #[arg(long)]
        class: String,
        /// JSON file {"curves": [{"label", "coeffs"}]} with extra curves.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// Numerical dimension of a class.
    Nu {
        doc: PathBuf,
        #[arg(long)]
        class: String,
        #[arg(long)]
        ample: Option<String>,
    },
    /// Gate plus the chain of degree equalities for an action.
    Chain {
        doc: PathBuf,
        #[arg(long)]
        action: String,
    },
    /// Anticanonical volume and nef checks.
    Fano { doc: PathBuf },
    /// Writes a document for P^2 blown up in M points with its Coxeter action.
    GenerateCoxeter {
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_tol(s: &str) -> std::result::Result<BigRational, String> {
    match parse_rational(s) {
        Some(t) if t.is_positive() => Ok(t),
        Some(_) => Err("tolerance must be positive".into()),
        None => Err(format!("not a rational or decimal: {s}")),
    }
}

/// One command's result in both renderings.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = self.json.to_string();
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 3,
        Error::Schema { .. } => 4,
        Error::Consistency(_) | Error::InvalidConfig(_) => 5,
        Error::UnknownAction(_) | Error::UnknownClass(_) => 6,
        Error::Io(_) => 8,
        _ => 7,
    }
}

fn workspace(path: &Path) -> Result<Workspace> {
    Workspace::new(document::load(path)?)
}

struct Ctx {
    tol: Option<BigRational>,
    digits: usize,
}

impl Ctx {
    fn tol(&self, ws: &Workspace) -> BigRational {
        self.tol.clone().unwrap_or_else(|| ws.tol())
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    let ctx = Ctx { tol: cli.tol.clone(), digits: cli.digits };
    match &cli.command {
        Command::Ring { doc } => ring_report(&workspace(doc)?),
        Command::Mul { doc, classes } => mul_report(&workspace(doc)?, classes),
        Command::Degrees { doc, action } => degrees_report(&ctx, &workspace(doc)?, action),
        Command::Entropy { doc, action } => entropy_report(&ctx, &workspace(doc)?, action),
        Command::Gate { doc, k, dims } => match (doc, k) {
            (Some(doc), _) => {
                let d = document::load(doc)?;
                let dims: Vec<usize> = d.variety.centers.iter().map(|c| c.dim).collect();
                gate_report(d.variety.k, &dims)
            }
            (None, Some(k)) => gate_report(*k, dims),
            (None, None) => Err(Error::InvalidConfig("gate needs a document or --k".into())),
        },
        Command::Verify { doc, action, class } => verify_report(&ctx, &workspace(doc)?, action, class.as_deref()),
        Command::NefCheck { doc, class, curves } => nef_report(&workspace(doc)?, class, curves.as_deref()),
        Command::Nu { doc, class, ample } => nu_report(&workspace(doc)?, class, ample.as_deref()),
        Command::Chain { doc, action } => chain_report(&ctx, &workspace(doc)?, action),
        Command::Fano { doc } => fano_report(&workspace(doc)?),
        Command::GenerateCoxeter { points, out } => {
            let text = document::save(&coxeter_document(*points)?);
            if let Some(path) = out {
                std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            let json = serde_json::from_str(&text).expect("saved document is JSON");
            Ok(Report { json, text })
        }
    }
}

/// P^2 blown up in `points` points with the Coxeter action `coxeter`.
pub fn coxeter_document(points: usize) -> Result<InputDocument> {
    let ring = Arc::new(RingModel::new(BlowupConfig::points(2, points)?)?);
    let action = coxeter_action(ring)?;
    Ok(InputDocument {
        variety: Variety { k: 2, centers: vec![CenterSpec { dim: 0, label: None }; points] },
        actions: vec![ActionSpec { name: action.name().to_string(), matrix: action.matrix().to_rows() }],
        classes: vec![],
        options: Options::default(),
    })
}

fn ring_report(ws: &Workspace) -> Result<Report> {
    let ring = &ws.ring;
    let k = ring.k();
    let dims = ring.config().centers();
    let bases: Vec<Vec<String>> = (0..=k).map(|p| ring.basis(p).iter().map(|m| m.to_string()).collect()).collect();
    let pairings: Vec<Value> =
        (0..=k).map(|p| json!({ "degree": p, "matrix": matrix(&ring.pairing_matrix(p)) })).collect();
    let canonical = ring.canonical_class();
    let json = json!({
        "command": "ring",
        "k": k,
        "centers": dims,
        "ranks": ring.ranks(),
        "bases": bases,
        "pairings": pairings,
        "canonical_class": rationals(&ring.coefficients(&canonical, 1)),
    });
    let mut text = format!("P^{k} blown up along centers of dimension {dims:?}\n");
    for (p, b) in bases.iter().enumerate() {
        text += &format!("degree {p}: rank {}: {}\n", b.len(), b.join(", "));
    }
    for p in 0..=k {
        text += &format!("pairing degree {p} x degree {}:\n", k - p);
        for row in ring.pairing_matrix(p).to_rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            text += &format!("  [{}]\n", cells.join(" "));
        }
    }
    text += &format!("K = {}\n", class_text(ring, &canonical));
    Ok(Report { json, text })
}

fn mul_report(ws: &Workspace, names: &[String]) -> Result<Report> {
    let ring = &ws.ring;
    let factors = names.iter().map(|n| ws.class(n)).collect::<Result<Vec<_>>>()?;
    let product = ring.product(&factors)?;
    let integral = ring.integrate(&product)?;
    let json = json!({
        "command": "mul",
        "factors": names,
        "product": class(ring, &product),
        "integral": rational(&integral),
    });
    let text =
        format!("{} = {}\nintegral = {}\n", names.join(" * "), class_text(ring, &product), rational_string(&integral));
    Ok(Report { json, text })
}

fn degrees_report(ctx: &Ctx, ws: &Workspace, name: &str) -> Result<Report> {
    let action = ws.action(name)?;
    let tol = ctx.tol(ws);
    let seq = dynamical_degrees(action, &tol)?;
    let degrees: Vec<Value> = seq
        .degrees
        .iter()
        .zip(&seq.char_polys)
        .enumerate()
        .map(|(p, (e, cp))| {
            json!({
                "degree": p,
                "lambda": enclosure(e, ctx.digits),
                "char_poly": polynomial(cp),
                "cyclotomic": is_cyclotomic_product(cp),
            })
        })
        .collect();
    let json = json!({
        "command": "degrees",
        "action": name,
        "tol": rational(&tol),
        "degrees": degrees,
        "entropy": entropy(&seq.entropy, ctx.digits),
    });
    let mut text = format!("action {name}\n");
    for (p, (e, cp)) in seq.degrees.iter().zip(&seq.char_polys).enumerate() {
        text += &format!("λ_{p} = {}\n    char poly {cp}\n", enclosure_text(e, ctx.digits));
    }
    text += &format!("entropy = {}\n", entropy_text(&seq.entropy, ctx.digits));
    Ok(Report { json, text })
}

fn entropy_report(ctx: &Ctx, ws: &Workspace, name: &str) -> Result<Report> {
    let action = ws.action(name)?;
    let seq = dynamical_degrees(action, &ctx.tol(ws))?;
    let json = json!({
        "command": "entropy",
        "action": name,
        "entropy": entropy(&seq.entropy, ctx.digits),
    });
    Ok(Report { json, text: entropy_text(&seq.entropy, ctx.digits) })
}

fn gate_json(v: &GateVerdict) -> Value {
    let reason = match v {
        GateVerdict::Inconclusive { reason, .. } => Value::String(reason.clone()),
        _ => Value::Null,
    };
    json!({ "verdict": v.name(), "k": v.k(), "r": v.r(), "reason": reason })
}

fn gate_report(k: usize, dims: &[usize]) -> Result<Report> {
    let v = decide(k, dims)?;
    let mut json = json!({ "command": "gate" });
    if let (Value::Object(out), Value::Object(fields)) = (&mut json, gate_json(&v)) {
        out.extend(fields);
    }
    let text = match &v {
        GateVerdict::Inconclusive { reason, .. } => format!("Inconclusive: {reason}"),
        _ => v.name().to_string(),
    };
    Ok(Report { json, text })
}

fn verify_report(ctx: &Ctx, ws: &Workspace, name: &str, class_name: Option<&str>) -> Result<Report> {
    let action = ws.action(name)?;
    let tol = ctx.tol(ws);
    let report = action.validate();
    let checks: Vec<Value> = report
        .all()
        .map(|c| {
            json!({
                "check": c.name,
                "passed": c.passed,
                "mandatory": c.name != report.canonical_class.name,
                "witness": c.witness,
            })
        })
        .collect();
    let mut text = format!("action {name}\nvalidation: {}\n", if report.passed() { "passed" } else { "FAILED" });
    for c in report.all() {
        text += &format!("  {:<20} {}", c.name, if c.passed { "ok" } else { "FAILED" });
        if let Some(w) = &c.witness {
            text += &format!("  ({w})");
        }
        text.push('\n');
    }
    let properties = if report.passed() {
        let r = lemma21_report(action, &tol)?;
        text += &format!("degree inequalities: {}\n", r.overall());
        for c in &r.checks {
            text += &format!("  {:<6} {:<36} {}\n", format!("({})", c.property), c.statement, c.truth);
        }
        let rows: Vec<Value> = r
            .checks
            .iter()
            .map(|c| json!({ "property": c.property, "statement": c.statement, "result": c.truth.as_str() }))
            .collect();
        json!({ "overall": r.overall().as_str(), "checks": rows })
    } else {
        text += "degree inequalities: skipped (action not validated)\n";
        Value::Null
    };
    let fixed_class = match class_name {
        None => Value::Null,
        Some(cn) => {
            let x = ws.class(cn)?;
            let nef = NefAssertion::assert_nef(&ws.ring, &x)?;
            let (v, t) = fixed_class_section(ctx, action, cn, &nef, &tol)?;
            text += &format!("fixed class {cn}: {t}");
            v
        }
    };
    let json = json!({
        "command": "verify",
        "action": name,
        "validation": { "passed": report.passed(), "checks": checks },
        "properties": properties,
        "fixed_class": fixed_class,
    });
    Ok(Report { json, text })
}

fn fixed_class_section(
    ctx: &Ctx,
    action: &PullbackAction,
    class: &str,
    nef: &NefAssertion,
    tol: &BigRational,
) -> Result<(Value, String)> {
    match thm12_verify(action, nef, tol) {
        Err(Error::HypothesesNotMet(reasons)) => {
            let text = format!("HypothesesNotMet\n{}", reasons.iter().map(|r| format!("  {r}\n")).collect::<String>());
            let json = json!({
                "class": class,
                "verdict": "HypothesesNotMet",
                "reasons": reasons,
                "nu": Value::Null,
                "entropy": Value::Null,
                "descent": Value::Null,
            });
            Ok((json, text))
        }
        Err(e) => Err(e),
        Ok(r) => {
            let verdict = match r.verdict {
                Thm12Verdict::Consistent => "Consistent",
                Thm12Verdict::NotRealizable => "NotRealizable",
            };
            let descent = r.descent.as_ref().map(|d| {
                json!({
                    "value": scientific(&d.value),
                    "slack": scientific(&d.slack),
                    "passed": d.passed,
                })
            });
            let json = json!({
                "class": class,
                "verdict": verdict,
                "reasons": Vec::<String>::new(),
                "nu": r.nu,
                "entropy": entropy(&r.entropy, ctx.digits),
                "descent": descent,
            });
            let text = format!("{verdict}\n  ν = {}\n  entropy = {}\n", r.nu, entropy_text(&r.entropy, ctx.digits));
            Ok((json, text))
        }
    }
}

fn scientific(x: &BigRational) -> String {
    format!("{:.3e}", x.to_f64().unwrap_or(f64::NAN))
}

fn nef_report(ws: &Workspace, name: &str, curves: Option<&Path>) -> Result<Report> {
    let ring = &ws.ring;
    let x = ws.class(name)?;
    let extra = match curves {
        None => vec![],
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            document::parse_curves(&text, ring)?
        }
    };
    let r = nef_necessary_check_with(ring, &x, &extra, &BigRational::zero())?;
    let json = json!({
        "command": "nef-check",
        "class": name,
        "checks": curve_checks(r.checks()),
        "passed": r.checks_pass(),
    });
    let text = format!(
        "{name} = {}\n{}necessary conditions: {}\n",
        class_text(ring, &x),
        curve_checks_text(r.checks()),
        if r.checks_pass() { "satisfied" } else { "violated" }
    );
    Ok(Report { json, text })
}

fn nu_report(ws: &Workspace, name: &str, ample: Option<&str>) -> Result<Report> {
    let ring = &ws.ring;
    let x = ws.class(name)?;
    let nu = numerical_dimension(ring, &x)?;
    let mut text = format!("{name} = {}\nν = {nu}\n", class_text(ring, &x));
    let kawamata = match ample {
        None => Value::Null,
        Some(a) => {
            let kn = kawamata_nu(ring, &x, &ws.class(a)?)?;
            text += &format!("ν against {a} = {} ({})\n", kn.value, if kn.agrees() { "agrees" } else { "differs" });
            json!({ "ample": a, "value": kn.value, "agrees": kn.agrees() })
        }
    };
    let nef = nef_necessary_check(ring, &x)?.asserted();
    let lemma = match lemma32_check(ring, &nef) {
        Ok(r) => {
            text += &format!(
                "x^{} h^{} = {} (expected a^{} = {}): {}\n",
                r.exponent,
                ring.k() - r.exponent,
                rational_string(&r.mixed_integral),
                r.exponent,
                rational_string(&num_traits::pow::Pow::pow(&r.a, r.exponent)),
                if r.mixed_integral_ok { "ok" } else { "FAILED" }
            );
            json!({
                "a": rational(&r.a),
                "exponent": r.exponent,
                "h_pairing": rational(&r.h_pairing),
                "mixed_integral": rational(&r.mixed_integral),
                "nu": r.nu,
                "asserted_nef": r.asserted_nef,
                "passed": r.passed(),
            })
        }
        Err(Error::HypothesisViolation(msg)) => {
            text += &format!("leading-term identity: not applicable ({msg})\n");
            json!({ "error": msg })
        }
        Err(e) => return Err(e),
    };
    let json = json!({
        "command": "nu",
        "class": name,
        "numerical_dimension": nu,
        "kawamata": kawamata,
        "leading_term": lemma,
    });
    Ok(Report { json, text })
}

fn chain_report(ctx: &Ctx, ws: &Workspace, name: &str) -> Result<Report> {
    let action = ws.action(name)?;
    let r = proof_chain_report(action, &ctx.tol(ws))?;
    let d = ctx.digits;
    let group = |label: &str, cs: &[blowent_core::gate::ChainCheck]| -> Vec<Value> {
        cs.iter().map(|c| json!({ "group": label, "statement": c.statement, "result": c.truth.as_str() })).collect()
    };
    let mut checks = group("forward_powers", &r.forward_powers);
    checks.extend(group("backward_powers", &r.backward_powers));
    checks.extend(group("chain", &r.chain));
    checks.extend(group("conclusion", std::slice::from_ref(&r.conclusion)));
    let certificate = r.certificate.as_ref().map(|c| {
        json!({
            "k": c.k,
            "r": c.r,
            "entropy_lower_bound": decimal_string(&c.entropy_lower_bound, d, Rounding::Down),
            "message": c.message,
        })
    });
    let json = json!({
        "command": "chain",
        "action": name,
        "gate": gate_json(&r.gate),
        "forward": r.forward.degrees.iter().map(|e| enclosure(e, d)).collect::<Vec<_>>(),
        "backward": r.backward.degrees.iter().map(|e| enclosure(e, d)).collect::<Vec<_>>(),
        "entropy": entropy(r.entropy(), d),
        "checks": checks,
        "certificate": certificate,
    });
    let mut text = format!("action {name}\ngate: {}\n", r.gate);
    for (p, (f, b)) in r.forward.degrees.iter().zip(&r.backward.degrees).enumerate() {
        text += &format!("λ_{p}(f) = {}   λ_{p}(f^-1) = {}\n", enclosure_text(f, d), enclosure_text(b, d));
    }
    text += &format!("entropy = {}\n", entropy_text(r.entropy(), d));
    for c in r.all_checks() {
        text += &format!("  {:<40} {}\n", c.statement, c.truth);
    }
    match &r.certificate {
        Some(c) => text += &format!("not realizable: {}\n", c.message),
        None => text += "no certificate\n",
    }
    Ok(Report { json, text })
}

fn fano_report(ws: &Workspace) -> Result<Report> {
    let ring = &ws.ring;
    let r = weak_fano_report(ring)?;
    let json = json!({
        "command": "fano",
        "anticanonical": rationals(&ring.coefficients(&r.anticanonical, 1)),
        "volume": rational(&r.volume),
        "big": r.big(),
        "nef_checks": curve_checks(r.nef.checks()),
        "consistent": r.consistent(),
    });
    let text = format!(
        "-K = {}\nvolume = {}\n{}consistent with weak Fano: {}\n",
        class_text(ring, &r.anticanonical),
        rational_string(&r.volume),
        curve_checks_text(r.nef.checks()),
        if r.consistent() { "yes" } else { "no" }
    );
    Ok(Report { json, text })
}
