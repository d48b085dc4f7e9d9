//! Command line front end.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::diagram::{Diagram, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::exactalg::RationalFunc;
use crate::rtw::{self, RootContext, Tolerances};
use crate::shadow::{self, Shadow};
use crate::tangle::{self, TangleDiagram};
use crate::torus_skein;

#[derive(Parser, Debug)]
#[command(name = "skeinlab", version, about = "Skein invariants of links in connected sums of S1xS2")]
struct Cli {
    /// Emit the report as JSON only.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; 0 uses every logical core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Largest crossing count expanded by the state sum.
    #[arg(long, global = true, env = "SKEINLAB_STATE_CAP")]
    state_cap: Option<usize>,
    /// Largest region color enumerated by shadow-eval.
    #[arg(long, global = true, env = "SKEINLAB_COLOR_CAP")]
    color_cap: Option<u32>,
    /// Tolerance for numerical identities.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Kauffman bracket of a diagram.
    Bracket { file: PathBuf },
    /// Breadth bound for alternating diagrams.
    Tait { file: PathBuf },
    /// Order of the bracket at A^2 = i.
    OrdI { file: PathBuf },
    /// Homology class of a diagram mod 2.
    Z2 { file: PathBuf },
    /// Shadow state sum as a rational function.
    ShadowEval { file: PathBuf },
    /// Signature of the intersection form of a shadow.
    ShadowSig { file: PathBuf },
    /// Reshetikhin-Turaev-Witten invariant of a shadow.
    Rtw {
        #[arg(long)]
        r: usize,
        file: PathBuf,
    },
    /// Turaev-Viro invariant of a closed polyhedron.
    Tv {
        #[arg(long)]
        r: usize,
        file: PathBuf,
    },
    /// Invariant of the lens space L(n,1).
    Lens {
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Product of two curves in the skein algebra of the torus.
    #[command(name = "t2-mul")]
    T2Mul {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        #[arg(allow_hyphen_values = true)]
        r: i64,
        #[arg(allow_hyphen_values = true)]
        s: i64,
    },
    /// Generator of the skein module of the 3-torus equal to a curve.
    #[command(name = "t3-reduce")]
    T3Reduce {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        #[arg(allow_hyphen_values = true)]
        r: i64,
    },
    /// Coefficients and Conway number of a 2-tangle.
    Tangle { file: PathBuf },
    /// Sliceness obstruction for a Montesinos link.
    Montesinos {
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        fractions: Vec<String>,
    },
    /// Recomputes every table fixture and diffs it against its expected value.
    ReproduceTable {
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
    },
}

struct Out {
    text: Vec<String>,
    report: Map<String, Value>,
    failed: bool,
}

impl Out {
    fn new(command: &str) -> Self {
        let mut report = Map::new();
        report.insert("command".into(), json!(command));
        Out { text: Vec::new(), report, failed: false }
    }

    fn set(&mut self, k: &str, v: Value) {
        self.report.insert(k.into(), v);
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }
}

fn read(path: &Path) -> Result<(String, Value)> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok((s, v))
}

fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn load_diagram(path: &Path) -> Result<(String, Value, Diagram)> {
    let (s, v) = read(path)?;
    let d = Diagram::from_json_str(&s)?;
    Ok((s, v, d))
}

fn load_shadow(path: &Path) -> Result<(String, Shadow)> {
    let (s, _) = read(path)?;
    Ok((s.clone(), Shadow::from_json_str(&s)?))
}

fn expectation(v: &Value, key: &str) -> Result<Option<RationalFunc>> {
    match v.get(key).and_then(Value::as_str) {
        Some(s) => Ok(Some(s.parse()?)),
        None => Ok(None),
    }
}

fn complex_report(out: &mut Out, key: &str, z: Complex64) {
    let s = rtw::format_complex(z);
    out.line(s.clone());
    out.line(format!("|z|^2 = {}", rtw::format_real(z.norm_sqr())));
    out.set(key, json!(s));
    out.set("re", json!(z.re));
    out.set("im", json!(z.im));
    out.set("norm_sqr", json!(z.norm_sqr()));
}

struct Config {
    state_cap: usize,
    color_cap: Option<u32>,
    tol: f64,
}

fn bracket_report(out: &mut Out, cfg: &Config, path: &Path) -> Result<()> {
    let (s, v, d) = load_diagram(path)?;
    out.set("inputs_digest", json!(digest(&[&s])));
    let b = d.bracket_with_cap(cfg.state_cap)?;
    let text = b.to_string();
    out.line(text.clone());
    out.set("bracket", json!(text));
    out.set("breadth", json!(b.breadth()));
    out.set("ord_i", json!(b.ord_at_i()));
    out.set("alternating", json!(d.alternating()));
    let adequate = if d.num_crossings() <= cfg.state_cap { d.adequacy().ok().map(|(p, m)| p && m) } else { None };
    out.set("adequate", json!(adequate));
    out.set("z2_class", json!(d.z2_class()));
    if let Some(want) = expectation(&v, "expected_bracket")? {
        let ok = want == b;
        out.set("expected_bracket", json!(want.to_string()));
        out.set("diff", if ok { json!(null) } else { json!(format!("got {b}, expected {want}")) });
        out.failed |= !ok;
    }
    Ok(())
}

fn table_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for sub in ["", "genus", "s3"] {
        let p = dir.join(sub);
        let rd = std::fs::read_dir(&p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
        for e in rd.flatten() {
            let f = e.path();
            if f.extension().is_some_and(|x| x == "json") {
                files.push(f);
            }
        }
    }
    files.sort();
    Ok(files)
}

type Row = (String, Result<(RationalFunc, Option<RationalFunc>)>);

fn reproduce(out: &mut Out, cfg: &Config, dir: &Path) -> Result<()> {
    let files = table_entries(dir)?;
    let rows: Vec<Row> = files
        .par_iter()
        .map(|f| {
            let name = f.strip_prefix(dir).unwrap_or(f).display().to_string();
            let r = load_diagram(f).and_then(|(_, v, d)| Ok((d.bracket_with_cap(cfg.state_cap)?, expectation(&v, "expected_bracket")?)));
            (name, r)
        })
        .collect();
    let mut entries = Vec::new();
    let mut ndiff = 0;
    for (name, r) in rows {
        let (b, want) = r?;
        let diff = match &want {
            Some(w) if *w != b => Some(format!("got {b}, expected {w}")),
            _ => None,
        };
        ndiff += diff.is_some() as usize;
        out.line(format!("{} {name}: {}", if diff.is_some() { "DIFF" } else { "ok  " }, diff.clone().unwrap_or_else(|| b.to_string())));
        entries.push(json!({"fixture": name, "bracket": b.to_string(), "expected": want.map(|w| w.to_string()), "diff": diff}));
    }
    out.line(format!("{} entries, {ndiff} diffs", entries.len()));
    out.set("entries", Value::Array(entries));
    out.set("diffs", json!(ndiff));
    out.failed |= ndiff > 0;
    Ok(())
}

fn ctx(r: usize, tol: f64) -> Result<RootContext> {
    RootContext::with_tolerances(r, Tolerances { identity: tol, ..Tolerances::default() })
}

fn dispatch(cmd: Cmd, cfg: &Config, out: &mut Out) -> Result<()> {
    match cmd {
        Cmd::Bracket { file } => bracket_report(out, cfg, &file)?,
        Cmd::Tait { file } => {
            let (s, _, d) = load_diagram(&file)?;
            out.set("inputs_digest", json!(digest(&[&s])));
            let r = d.tait_breadth_check()?;
            out.line(format!("breadth {} expected {:?} holds {:?}", r.breadth, r.expected, r.holds));
            for (k, v) in serde_json::to_value(&r).map_err(|e| Error::Computation(e.to_string()))?.as_object().unwrap() {
                out.set(k, v.clone());
            }
        }
        Cmd::OrdI { file } => {
            let (s, v, d) = load_diagram(&file)?;
            out.set("inputs_digest", json!(digest(&[&s])));
            let o = d.bracket_with_cap(cfg.state_cap)?.ord_at_i();
            out.line(o.map_or("inf".to_string(), |x| x.to_string()));
            out.set("ord_i", json!(o));
            if let Some(w) = v.get("expected_ord_i").and_then(Value::as_i64) {
                out.set("expected_ord_i", json!(w));
                out.failed |= o != Some(w);
            }
        }
        Cmd::Z2 { file } => {
            let (s, _, d) = load_diagram(&file)?;
            out.set("inputs_digest", json!(digest(&[&s])));
            let c = d.z2_class();
            out.line(format!("{c:?} {}", if d.is_z2_trivial() { "trivial" } else { "non-trivial" }));
            out.set("z2_class", json!(c));
            out.set("z2_trivial", json!(d.is_z2_trivial()));
            out.set("components", json!(d.z2_class_components()));
        }
        Cmd::ShadowEval { file } => {
            let (s, x) = load_shadow(&file)?;
            out.set("inputs_digest", json!(digest(&[&s])));
            let cap = cfg.color_cap.unwrap_or_else(|| shadow::default_color_cap(&x));
            let v = shadow::shadow_eval_q_with_cap(&x, cap)?;
            out.line(v.to_string());
            out.set("value", json!(v.to_string()));
            out.set("color_cap", json!(cap));
        }
        Cmd::ShadowSig { file } => {
            let (s, x) = load_shadow(&file)?;
            out.set("inputs_digest", json!(digest(&[&s])));
            let sig = shadow::signature(&x)?;
            out.line(sig.to_string());
            out.set("signature", json!(sig));
        }
        Cmd::Rtw { r, file } => {
            let (s, x) = load_shadow(&file)?;
            out.set("inputs_digest", json!(digest(&[&s, &r.to_string()])));
            let z = rtw::rtw_from_shadow(&ctx(r, cfg.tol)?, &x)?;
            complex_report(out, "rtw", z);
        }
        Cmd::Tv { r, file } => {
            let (s, x) = load_shadow(&file)?;
            out.set("inputs_digest", json!(digest(&[&s, &r.to_string()])));
            let v = rtw::tv_from_polyhedron(&ctx(r, cfg.tol)?, &x)?;
            complex_report(out, "tv", Complex64::new(v, 0.0));
        }
        Cmd::Lens { r, n } => {
            out.set("inputs_digest", json!(digest(&[&r.to_string(), &n.to_string()])));
            let z = rtw::lens_rtw_closed(&ctx(r, cfg.tol)?, n);
            complex_report(out, "lens", z);
        }
        Cmd::T2Mul { p, q, r, s } => {
            let t = torus_skein::fg_product((p, q), (r, s));
            out.line(t.to_string());
            let terms: Vec<Value> = t.terms().map(|(&(a, b), c)| json!({"curve": [a, b], "coeff": c.to_string()})).collect();
            out.set("product", json!(t.to_string()));
            out.set("terms", Value::Array(terms));
        }
        Cmd::T3Reduce { p, q, r } => {
            let g = torus_skein::reduce_t3_curve(p, q, r)?;
            out.line(g.to_string());
            out.set("generator", json!(g.to_string()));
        }
        Cmd::Tangle { file } => {
            let (s, _) = read(&file)?;
            out.set("inputs_digest", json!(digest(&[&s])));
            let t = TangleDiagram::from_json_str(&s)?;
            let (a, b) = tangle::tangle_reduce(&t)?;
            let c = tangle::conway_from_coefficients(&a, &b);
            out.line(format!("a = {a}"));
            out.line(format!("b = {b}"));
            out.set("a", json!(a.to_string()));
            out.set("b", json!(b.to_string()));
            match c {
                Ok(c) => {
                    out.line(format!("C(T) = {c}"));
                    out.set("conway", json!(c.to_string()));
                }
                Err(e) => {
                    out.line(format!("C(T) undefined: {e}"));
                    out.set("conway", json!(null));
                }
            }
        }
        Cmd::Montesinos { e, fractions } => {
            let fr = fractions.iter().filter(|s| !s.trim().is_empty()).map(|s| tangle::parse_fraction(s)).collect::<Result<Vec<_>>>()?;
            let ob = tangle::montesinos_obstruction(e, &fr);
            out.line(if ob { "obstructed" } else { "no obstruction" });
            out.set("obstruction", json!(ob));
        }
        Cmd::ReproduceTable { fixtures } => reproduce(out, cfg, &fixtures)?,
    }
    Ok(())
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Bracket { .. } => "bracket",
        Cmd::Tait { .. } => "tait",
        Cmd::OrdI { .. } => "ord-i",
        Cmd::Z2 { .. } => "z2",
        Cmd::ShadowEval { .. } => "shadow-eval",
        Cmd::ShadowSig { .. } => "shadow-sig",
        Cmd::Rtw { .. } => "rtw",
        Cmd::Tv { .. } => "tv",
        Cmd::Lens { .. } => "lens",
        Cmd::T2Mul { .. } => "t2-mul",
        Cmd::T3Reduce { .. } => "t3-reduce",
        Cmd::Tangle { .. } => "tangle",
        Cmd::Montesinos { .. } => "montesinos",
        Cmd::ReproduceTable { .. } => "reproduce-table",
    }
}

/// Runs the command line and returns the exit code with the text written to
/// standard output.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    let cfg = Config {
        state_cap: cli.state_cap.unwrap_or(DEFAULT_STATE_CAP),
        color_cap: cli.color_cap,
        tol: cli.tolerance,
    };
    let mut out = Out::new(command_name(&cli.cmd));
    let res = if cli.jobs > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
            Ok(pool) => pool.install(|| dispatch(cli.cmd, &cfg, &mut out)),
            Err(e) => Err(Error::Computation(e.to_string())),
        }
    } else {
        dispatch(cli.cmd, &cfg, &mut out)
    };
    let code = match &res {
        Ok(()) if out.failed => 1,
        Ok(()) => 0,
        Err(e) => e.exit_code(),
    };
    if let Err(e) = &res {
        out.set("error", json!(e.to_string()));
        out.line(format!("error: {e}"));
    }
    out.set("exit_code", json!(code));
    let report = Value::Object(out.report);
    let text = if cli.json {
        serde_json::to_string_pretty(&report).unwrap_or_default()
    } else {
        let mut lines = out.text;
        lines.push(report.to_string());
        lines.join("\n")
    };
    (code, text + "\n")
}
