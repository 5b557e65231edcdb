//! Command-line front end. `run` returns the exit code and both output streams
//! so that the binary and the tests share one code path.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::centers::{functor_centre_oracle, sweep, LevelEntry, SetShape, Sweep};
use crate::comodule::{check_restriction, CoactionFile, RestrictionReport};
use crate::error::{Error, Result};
use crate::f2::{group_closure, Caps, F2Matrix, Subgroup};
use crate::oracle::{lift_count, rho_check, sub_falsifier, DegreeCheck, RhoReport, Witness};
use crate::poly::{default_var_names, invariants_upto, Polynomial};
use crate::presentation::{validate, LayeredAlgebra, PieceKind, SKPoint, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "centre",
    version,
    about = "Central elements of layered unstable algebras over F₂"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Highest internal degree examined.
    #[arg(long, global = true, default_value_t = 12)]
    pub max_degree: usize,
    /// Largest dim W swept.
    #[arg(long = "max-dim", global = true, default_value_t = 3)]
    pub max_dim_w: usize,
    /// Largest probe dimension for the functor oracle.
    #[arg(long = "probe-dim", global = true, default_value_t = 2)]
    pub probe_dim_max: usize,
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub cap_hom_bits: Option<u32>,
    #[arg(long, global = true)]
    pub cap_group_order: Option<usize>,
}

impl Common {
    fn caps(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(b) = self.cap_hom_bits {
            caps.hom_bits = b;
        }
        if let Some(g) = self.cap_group_order {
            caps.group_order = g;
        }
        caps
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute C_k(K) for every level and the centre C(K).
    Centre { input: PathBuf },
    /// Lift counts, degreewise ρ comparison and Sub-piece falsifier at one point.
    Oracle {
        input: PathBuf,
        /// The point, e.g. "dim=1;psi=[[1],[0]]".
        #[arg(long)]
        pair: String,
    },
    /// Check a coaction's axioms and whether it restricts to K.
    Comodule { input: PathBuf, coaction: PathBuf },
    /// Validate a presentation.
    Validate { input: PathBuf },
    /// Degreewise invariants of a subgroup of GL(n, F₂).
    Invariants {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, conflicts_with = "generator")]
        group: Option<GroupName>,
        /// A generator as JSON rows; repeatable.
        #[arg(long)]
        generator: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupName {
    Trivial,
    #[value(name = "B2")]
    B2,
    #[value(name = "GL")]
    Gl,
}

#[derive(Debug, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code,
                    stderr: text,
                    ..Output::default()
                }
            } else {
                Output {
                    code,
                    stdout: text,
                    ..Output::default()
                }
            };
        }
    };
    let mut out = Output::default();
    let result = match &cli.command {
        Command::Centre { input } => cmd_centre(input, &cli.common, &mut out),
        Command::Oracle { input, pair } => cmd_oracle(input, pair, &cli.common, &mut out),
        Command::Comodule { input, coaction } => {
            cmd_comodule(input, coaction, &cli.common, &mut out)
        }
        Command::Validate { input } => cmd_validate(input, &cli.common, &mut out),
        Command::Invariants {
            dim,
            group,
            generator,
        } => cmd_invariants(*dim, *group, generator, &cli.common, &mut out),
    };
    if let Err(e) = result {
        out.code = exit_code(&e);
        let _ = writeln!(out.stderr, "error: {e}");
    }
    out
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::ClosureCapExceeded { .. } => EXIT_CAP,
        Error::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_INVALID,
    }
}

fn load(path: &PathBuf, common: &Common, out: &mut Output) -> Result<Option<LayeredAlgebra>> {
    let text = std::fs::read_to_string(path)?;
    let k = LayeredAlgebra::from_json_str(&text)?;
    let report = validate(&k, common.max_degree, &common.caps());
    if !report.diagnostics.is_empty() {
        let _ = write!(out.stderr, "{report}");
    }
    if !report.is_valid() {
        out.code = EXIT_INVALID;
        return Ok(None);
    }
    Ok(Some(k))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn subscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| SUBSCRIPTS[c.to_digit(10).unwrap() as usize])
        .collect()
}

#[derive(Serialize)]
struct CentreJson<'a> {
    #[serde(flatten)]
    centre: &'a SetShape,
    depth: usize,
    max_dim_w: usize,
    per_level: &'a [LevelEntry],
    oracle_disagreements: Vec<SKPoint>,
}

fn cmd_centre(input: &PathBuf, common: &Common, out: &mut Output) -> Result<()> {
    let Some(k) = load(input, common, out)? else {
        return Ok(());
    };
    let caps = common.caps();
    let s = sweep(&k, common.max_dim_w, &caps)?;
    let disagreements = base_oracle_disagreements(&k, &s, common.probe_dim_max, &caps)?;
    let shape = s.final_shape();
    if common.json {
        out.stdout = json(&CentreJson {
            centre: shape,
            depth: s.depth,
            max_dim_w: s.max_dim_w,
            per_level: &s.per_level,
            oracle_disagreements: disagreements.clone(),
        })?;
    } else {
        for entry in &s.per_level {
            let _ = writeln!(
                out.stdout,
                "C{}: {}",
                subscript(entry.level),
                entry.shape.describe(s.u_dim)
            );
            if let Some(h) = &entry.header_reading {
                if *h != entry.shape {
                    let _ = writeln!(out.stdout, "   over H*(U) instead: {}", h.describe(s.u_dim));
                }
            }
        }
        match shape {
            SetShape::TrivialOnly => {
                let _ = writeln!(out.stdout, "C(K) = {{(0,ε)}}");
            }
            other => {
                let _ = writeln!(out.stdout, "C(K): {}", other.describe(s.u_dim));
            }
        }
    }
    if !disagreements.is_empty() {
        for p in &disagreements {
            let _ = writeln!(
                out.stderr,
                "functor oracle disagrees with C₁ at {}",
                p.label()
            );
        }
        out.code = EXIT_INCONCLUSIVE;
    } else if matches!(shape, SetShape::Unstructured { .. }) {
        let _ = writeln!(out.stderr, "computed centre has no closed form");
        out.code = EXIT_INCONCLUSIVE;
    }
    Ok(())
}

/// Points where `C_1` and the functor oracle disagree, within the hom-bit cap.
fn base_oracle_disagreements(
    k: &LayeredAlgebra,
    s: &Sweep,
    probe: usize,
    caps: &Caps,
) -> Result<Vec<SKPoint>> {
    let g = k.group(caps)?;
    let mut out = Vec::new();
    for p in &s.points {
        if (p.point.dim_w + probe) * k.base_dim > caps.hom_bits as usize {
            continue;
        }
        if functor_centre_oracle(&g, &p.point, probe, caps)? != p.levels[0] {
            out.push(p.point.clone());
        }
    }
    Ok(out)
}

/// Parses `dim=1;psi=[[1],[0]]`.
pub fn parse_pair(s: &str, u_dim: usize) -> Result<F2Matrix> {
    let mut dim = None;
    let mut psi = None;
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
        match key.trim() {
            "dim" => {
                dim = Some(
                    value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("dim: {e}")))?,
                )
            }
            "psi" => psi = Some(serde_json::from_str::<Vec<Vec<u8>>>(value.trim())?),
            other => return Err(Error::Parse(format!("unknown key {other:?}"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse("missing dim".into()))?;
    let rows = psi.unwrap_or_default();
    if dim == 0 && rows.iter().all(Vec::is_empty) {
        return Ok(F2Matrix::zeros(u_dim, 0));
    }
    if rows.len() != u_dim {
        return Err(Error::DimMismatch {
            context: "psi rows",
            expected: u_dim,
            found: rows.len(),
        });
    }
    F2Matrix::from_rows_with_cols(&rows, dim)
}

#[derive(Serialize)]
struct OracleJson<'a> {
    point: &'a SKPoint,
    lifts: usize,
    per_degree: Option<&'a [DegreeCheck]>,
    pieces: Vec<PieceJson>,
    witness: Option<&'a Witness>,
    central: bool,
}

#[derive(Serialize)]
struct PieceJson {
    level: usize,
    side: crate::presentation::Side,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lifts: Option<usize>,
}

fn cmd_oracle(input: &PathBuf, pair: &str, common: &Common, out: &mut Output) -> Result<()> {
    let Some(k) = load(input, common, out)? else {
        return Ok(());
    };
    let caps = common.caps();
    let g = k.group(&caps)?;
    let pt = SKPoint::from_map(&g, &parse_pair(pair, k.base_dim)?);
    let mut pieces = Vec::new();
    let mut witness = None;
    for (level, side, piece) in k.pieces() {
        match piece.kind {
            PieceKind::Full => pieces.push(PieceJson {
                level,
                side,
                kind: "full",
                lifts: Some(lift_count(&g, piece, &pt, &caps)?.count),
            }),
            PieceKind::Sub { .. } => {
                pieces.push(PieceJson {
                    level,
                    side,
                    kind: "sub",
                    lifts: None,
                });
                if witness.is_none() && pt.dim_w >= 1 && g.is_trivial() {
                    witness = sub_falsifier(piece, &pt, common.max_degree, &caps)?;
                }
            }
        }
    }
    let rho: Option<RhoReport> = if k.pieces().all(|(_, _, p)| p.is_full()) {
        Some(rho_check(&k, &pt, common.max_degree, &caps)?)
    } else {
        None
    };
    let central = crate::centers::ck(&k, k.depth(), &pt, &caps)?;
    let lifts = pieces.iter().filter_map(|p| p.lifts).sum();
    if common.json {
        out.stdout = json(&OracleJson {
            point: &pt,
            lifts,
            per_degree: rho.as_ref().map(|r| r.per_degree.as_slice()),
            pieces,
            witness: witness.as_ref(),
            central,
        })?;
        return Ok(());
    }
    let _ = writeln!(out.stdout, "point: {}", pt.label());
    let _ = writeln!(out.stdout, "lifts={lifts}");
    for p in &pieces {
        if let Some(n) = p.lifts {
            let _ = writeln!(out.stdout, "  level {} {:?}: {n} lift(s)", p.level, p.side);
        }
    }
    match &rho {
        Some(r) => match r.first_mismatch() {
            None => {
                let _ = writeln!(
                    out.stdout,
                    "ρ: dims agree in degrees 0..={}",
                    common.max_degree
                );
            }
            Some(d) => {
                let _ = writeln!(out.stdout, "ρ: dims differ from degree {d}");
                for c in r.per_degree.iter().filter(|c| !c.ok) {
                    let _ = writeln!(
                        out.stdout,
                        "  d={}: T-component {} vs K {}",
                        c.d, c.lhs, c.rhs
                    );
                }
            }
        },
        None => {
            let _ = writeln!(out.stdout, "ρ: skipped (sub pieces present)");
        }
    }
    if let Some(w) = &witness {
        let _ = writeln!(out.stdout, "witness: {}", w.describe());
    }
    let _ = writeln!(
        out.stdout,
        "{}",
        if central { "central" } else { "not central" }
    );
    Ok(())
}

#[derive(Serialize)]
struct ComoduleJson<'a> {
    axioms: &'a crate::comodule::AxiomReport,
    restriction: &'a RestrictionReport,
}

fn cmd_comodule(
    input: &PathBuf,
    coaction: &PathBuf,
    common: &Common,
    out: &mut Output,
) -> Result<()> {
    let Some(k) = load(input, common, out)? else {
        return Ok(());
    };
    let caps = common.caps();
    let file: CoactionFile = serde_json::from_str(&std::fs::read_to_string(coaction)?)?;
    let kappa = file.parse(&k.base_var_names())?;
    let piece_names = k
        .pieces()
        .next()
        .map(|(_, _, p)| p.var_names.clone())
        .unwrap_or_default();
    let piece = file.parse_piece(&piece_names)?;
    let axioms = kappa.check_axioms(common.max_degree);
    let report = check_restriction(&k, &kappa, piece.as_ref(), common.max_degree, &caps)?;
    if common.json {
        out.stdout = json(&ComoduleJson {
            axioms: &axioms,
            restriction: &report,
        })?;
        return Ok(());
    }
    if axioms.passed() {
        let _ = writeln!(out.stdout, "axioms: pass (degrees ≤ {})", common.max_degree);
    } else {
        for f in &axioms.failures {
            let _ = writeln!(out.stdout, "axiom {:?} fails at {}", f.axiom, f.monomial);
        }
    }
    let mode = serde_json::to_value(report.mode)?;
    let mode = mode.as_str().unwrap_or_default();
    if report.passed() {
        let _ = writeln!(out.stdout, "restriction ({mode}): pass");
    } else {
        let _ = writeln!(
            out.stdout,
            "restriction ({mode}): {} witness(es)",
            report.witnesses.len()
        );
        for w in &report.witnesses {
            let (element, image) = report.render(w);
            let _ = writeln!(out.stdout, "witness {element} ↦ {image}");
        }
    }
    Ok(())
}

fn cmd_validate(input: &PathBuf, common: &Common, out: &mut Output) -> Result<()> {
    let text = std::fs::read_to_string(input)?;
    let k = LayeredAlgebra::from_json_str(&text)?;
    let report: ValidationReport = validate(&k, common.max_degree, &common.caps());
    if common.json {
        out.stdout = json(&report)?;
    } else if report.diagnostics.is_empty() {
        out.stdout = "valid\n".into();
    } else {
        out.stdout = format!("{report}\n");
    }
    if !report.is_valid() {
        out.code = EXIT_INVALID;
    }
    Ok(())
}

#[derive(Serialize)]
struct InvariantsJson {
    dim: usize,
    order: usize,
    dims: Vec<usize>,
    bases: Vec<Vec<String>>,
}

fn cmd_invariants(
    dim: usize,
    group: Option<GroupName>,
    generators: &[String],
    common: &Common,
    out: &mut Output,
) -> Result<()> {
    let caps = common.caps();
    let g = match group {
        Some(GroupName::Trivial) => Subgroup::trivial(dim),
        Some(GroupName::Gl) => Subgroup::general_linear(dim, &caps)?,
        Some(GroupName::B2) => {
            if dim < 2 {
                return Err(Error::Parse("B2 needs dim ≥ 2".into()));
            }
            let mut b = F2Matrix::identity(dim);
            b.set(0, 1, true);
            group_closure(dim, &[b], &caps)?
        }
        None => {
            let gens = generators
                .iter()
                .map(|s| F2Matrix::from_rows(&serde_json::from_str::<Vec<Vec<u8>>>(s)?))
                .collect::<Result<Vec<_>>>()?;
            group_closure(dim, &gens, &caps)?
        }
    };
    let names = default_var_names(dim);
    let bases = invariants_upto(&g, common.max_degree, &caps)?;
    let rendered: Vec<Vec<String>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .map(|p: &Polynomial| p.display_with(&names))
                .collect()
        })
        .collect();
    if common.json {
        out.stdout = json(&InvariantsJson {
            dim,
            order: g.order(),
            dims: bases.iter().map(Vec::len).collect(),
            bases: rendered,
        })?;
        return Ok(());
    }
    let _ = writeln!(out.stdout, "|G| = {}", g.order());
    for (d, b) in rendered.iter().enumerate() {
        let _ = writeln!(out.stdout, "d={d}: dim {}  [{}]", b.len(), b.join(", "));
    }
    Ok(())
}
