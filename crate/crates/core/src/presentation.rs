//! Layered presentations of unstable algebras: an invariant-ring base
//! `H*(U)^G` followed by nilpotent layers of induced modules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::SpanBuilder;
use crate::f2::{group_closure, orbits, Caps, F2Matrix, Orbit, Subgroup};
use crate::poly::{
    default_var_names, generated_module_dims, graded_dims, invariants_upto, pullback,
    pullback_forms, sq, GradedDims, MonomialBasis, Polynomial,
};

#[derive(Clone, Debug, PartialEq)]
pub enum PieceKind {
    Full,
    /// The submodule generated by the given polynomials over `H*(V')`.
    Sub {
        generators: Vec<Polynomial>,
    },
}

/// `Σˢ H*(V', [γ])` or one of its submodules.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedModule {
    pub suspension: usize,
    pub source_dim: usize,
    /// `dim U × source_dim`.
    pub gamma: F2Matrix,
    pub kind: PieceKind,
    /// Names of the coordinate forms on `V'`.
    pub var_names: Vec<String>,
}

impl InducedModule {
    pub fn full(suspension: usize, gamma: F2Matrix, base_names: &[String]) -> Self {
        let var_names = derive_var_names(&gamma, base_names);
        InducedModule {
            suspension,
            source_dim: gamma.cols(),
            gamma,
            kind: PieceKind::Full,
            var_names,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self.kind, PieceKind::Full)
    }

    /// Generators of `γ*(H*(U))`: the pulled-back coordinate forms.
    pub fn ring_generators(&self) -> Vec<Polynomial> {
        pullback_forms(&self.gamma)
    }

    /// Degreewise dimensions of the unsuspended module in degrees `0..=max_degree`.
    pub fn module_dims(&self, max_degree: usize) -> Vec<usize> {
        match &self.kind {
            PieceKind::Full => graded_dims(self.source_dim, max_degree).dims,
            PieceKind::Sub { generators } => generated_module_dims(
                generators,
                &self.ring_generators(),
                self.source_dim,
                max_degree,
            ),
        }
    }
}

/// Names the forms on `V'`: a column equal to a unique basis vector `eᵢ` of `U`
/// inherits the name of the `i`-th form on `U`, otherwise defaults apply.
pub fn derive_var_names(gamma: &F2Matrix, base_names: &[String]) -> Vec<String> {
    let defaults = default_var_names(gamma.cols());
    let cols = gamma.column_vectors();
    let unit_index = |c: &Vec<u8>| -> Option<usize> {
        (c.iter().filter(|&&b| b == 1).count() == 1)
            .then(|| c.iter().position(|&b| b == 1).unwrap())
    };
    let names: Vec<String> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| match unit_index(c) {
            Some(i) if cols.iter().filter(|d| *d == c).count() == 1 && i < base_names.len() => {
                base_names[i].clone()
            }
            _ => defaults[j].clone(),
        })
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() == names.len() {
        names
    } else {
        defaults
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Kernel,
    Cokernel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub level: usize,
    pub kernel_pieces: Vec<InducedModule>,
    pub cokernel_pieces: Vec<InducedModule>,
}

impl Layer {
    pub fn pieces(&self) -> impl Iterator<Item = (Side, &InducedModule)> {
        self.kernel_pieces
            .iter()
            .map(|p| (Side::Kernel, p))
            .chain(self.cokernel_pieces.iter().map(|p| (Side::Cokernel, p)))
    }
}

/// `K` as a subalgebra of `H*(U)` given by algebra generators.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientEmbedding {
    pub dim: usize,
    pub generators: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayeredAlgebra {
    pub base_dim: usize,
    pub group_generators: Vec<F2Matrix>,
    pub layers: Vec<Layer>,
    pub ambient_embedding: Option<AmbientEmbedding>,
}

impl LayeredAlgebra {
    /// The bare base `H*(U)^G`.
    pub fn base(base_dim: usize, group_generators: Vec<F2Matrix>) -> Self {
        LayeredAlgebra {
            base_dim,
            group_generators,
            layers: Vec::new(),
            ambient_embedding: None,
        }
    }

    pub fn group(&self, caps: &Caps) -> Result<Subgroup> {
        group_closure(self.base_dim, &self.group_generators, caps)
    }

    /// `1 + max level`: the presentation is nil_depth-closed.
    pub fn depth(&self) -> usize {
        1 + self.layers.iter().map(|l| l.level).max().unwrap_or(0)
    }

    pub fn layer(&self, level: usize) -> Option<&Layer> {
        self.layers.iter().find(|l| l.level == level)
    }

    pub fn base_var_names(&self) -> Vec<String> {
        default_var_names(self.base_dim)
    }

    pub fn pieces(&self) -> impl Iterator<Item = (usize, Side, &InducedModule)> {
        self.layers
            .iter()
            .flat_map(|l| l.pieces().map(move |(s, p)| (l.level, s, p)))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: PresentationFile = serde_json::from_str(s)?;
        raw.into_algebra()
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(
            &PresentationFile::from_algebra(self),
        )?)
    }
}

// On-disk schema.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationFile {
    pub base: BaseFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_embedding: Option<EmbeddingFile>,
    #[serde(default)]
    pub layers: Vec<LayerFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseFile {
    pub dim: usize,
    #[serde(default)]
    pub group_generators: Vec<Vec<Vec<u8>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub dim: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LayerFile {
    pub level: usize,
    #[serde(default)]
    pub kernel: Vec<PieceFile>,
    #[serde(default)]
    pub cokernel: Vec<PieceFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceFile {
    pub suspension: usize,
    pub source_dim: usize,
    pub gamma: Vec<Vec<u8>>,
    pub kind: KindFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_names: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KindFile {
    Named(String),
    Sub { sub: SubFile },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubFile {
    pub generators: Vec<String>,
}

impl PresentationFile {
    pub fn into_algebra(self) -> Result<LayeredAlgebra> {
        let base_dim = self.base.dim;
        let base_names = default_var_names(base_dim);
        let group_generators = self
            .base
            .group_generators
            .iter()
            .map(|g| F2Matrix::from_rows_with_cols(g, base_dim))
            .collect::<Result<Vec<_>>>()?;
        let ambient_embedding = self
            .ambient_embedding
            .map(|e| -> Result<AmbientEmbedding> {
                let names = default_var_names(e.dim);
                Ok(AmbientEmbedding {
                    dim: e.dim,
                    generators: e
                        .generators
                        .iter()
                        .map(|g| Polynomial::parse(g, &names))
                        .collect::<Result<_>>()?,
                })
            })
            .transpose()?;
        let piece = |p: &PieceFile| -> Result<InducedModule> {
            let gamma = F2Matrix::from_rows_with_cols(&p.gamma, p.source_dim)?;
            let var_names = match &p.var_names {
                Some(v) if v.len() == p.source_dim => v.clone(),
                Some(v) => {
                    return Err(Error::Parse(format!(
                        "{} variable names for a source of dimension {}",
                        v.len(),
                        p.source_dim
                    )))
                }
                None => derive_var_names(&gamma, &base_names),
            };
            let kind = match &p.kind {
                KindFile::Named(s) if s == "full" => PieceKind::Full,
                KindFile::Named(s) => {
                    return Err(Error::Parse(format!("unknown piece kind {s:?}")))
                }
                KindFile::Sub { sub } => PieceKind::Sub {
                    generators: sub
                        .generators
                        .iter()
                        .map(|g| Polynomial::parse(g, &var_names))
                        .collect::<Result<_>>()?,
                },
            };
            Ok(InducedModule {
                suspension: p.suspension,
                source_dim: p.source_dim,
                gamma,
                kind,
                var_names,
            })
        };
        let layers = self
            .layers
            .iter()
            .map(|l| -> Result<Layer> {
                Ok(Layer {
                    level: l.level,
                    kernel_pieces: l.kernel.iter().map(&piece).collect::<Result<_>>()?,
                    cokernel_pieces: l.cokernel.iter().map(&piece).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(LayeredAlgebra {
            base_dim,
            group_generators,
            layers,
            ambient_embedding,
        })
    }

    pub fn from_algebra(k: &LayeredAlgebra) -> Self {
        let piece = |p: &InducedModule| PieceFile {
            suspension: p.suspension,
            source_dim: p.source_dim,
            gamma: p.gamma.to_rows(),
            kind: match &p.kind {
                PieceKind::Full => KindFile::Named("full".into()),
                PieceKind::Sub { generators } => KindFile::Sub {
                    sub: SubFile {
                        generators: generators
                            .iter()
                            .map(|g| g.display_with(&p.var_names))
                            .collect(),
                    },
                },
            },
            var_names: Some(p.var_names.clone()),
        };
        PresentationFile {
            base: BaseFile {
                dim: k.base_dim,
                group_generators: k.group_generators.iter().map(F2Matrix::to_rows).collect(),
            },
            ambient_embedding: k.ambient_embedding.as_ref().map(|e| EmbeddingFile {
                dim: e.dim,
                generators: e
                    .generators
                    .iter()
                    .map(|g| g.display_with(&default_var_names(e.dim)))
                    .collect(),
            }),
            layers: k
                .layers
                .iter()
                .map(|l| LayerFile {
                    level: l.level,
                    kernel: l.kernel_pieces.iter().map(piece).collect(),
                    cokernel: l.cokernel_pieces.iter().map(piece).collect(),
                })
                .collect(),
        }
    }
}

// Validation.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagnosticCode {
    NotInvertible,
    GroupShape,
    GroupCapExceeded,
    NonConsecutiveLevels,
    SuspensionMismatch,
    GammaShape,
    SubRequiresTrivialGroup,
    InhomogeneousGenerator,
    NotSqClosed,
    EmbeddingDim,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub location: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.diagnostics
            .iter()
            .all(|d| d.severity != Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
    }

    pub fn has(&self, code: DiagnosticCode) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }

    fn push(
        &mut self,
        severity: Severity,
        code: DiagnosticCode,
        location: String,
        message: String,
    ) {
        self.diagnostics.push(Diagnostic {
            severity,
            code,
            location,
            message,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.diagnostics.is_empty() {
            return writeln!(f, "valid");
        }
        for d in &self.diagnostics {
            let sev = match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            writeln!(f, "{sev}[{:?}] {}: {}", d.code, d.location, d.message)?;
        }
        Ok(())
    }
}

/// Checks a presentation; every failure becomes a diagnostic.
pub fn validate(k: &LayeredAlgebra, max_degree: usize, caps: &Caps) -> ValidationReport {
    use DiagnosticCode::*;
    let mut report = ValidationReport::default();
    let group = match k.group(caps) {
        Ok(g) => Some(g),
        Err(e) => {
            let code = match e {
                Error::NotInvertible(_) => NotInvertible,
                Error::ClosureCapExceeded { .. } => GroupCapExceeded,
                _ => GroupShape,
            };
            report.push(Severity::Error, code, "base".into(), e.to_string());
            None
        }
    };
    let trivial_group = group
        .as_ref()
        .map_or(k.group_generators.is_empty(), Subgroup::is_trivial);

    for (i, layer) in k.layers.iter().enumerate() {
        if layer.level != i + 1 {
            report.push(
                Severity::Error,
                NonConsecutiveLevels,
                format!("layers[{i}]"),
                format!(
                    "level {} found where level {} was expected",
                    layer.level,
                    i + 1
                ),
            );
        }
        for (side, (j, piece)) in layer
            .kernel_pieces
            .iter()
            .enumerate()
            .map(|x| (Side::Kernel, x))
            .chain(
                layer
                    .cokernel_pieces
                    .iter()
                    .enumerate()
                    .map(|x| (Side::Cokernel, x)),
            )
        {
            let loc = format!("layers[{i}].{side:?}[{j}]").to_lowercase();
            if piece.suspension != layer.level {
                report.push(
                    Severity::Error,
                    SuspensionMismatch,
                    loc.clone(),
                    format!(
                        "suspension {} differs from level {}",
                        piece.suspension, layer.level
                    ),
                );
            }
            if piece.gamma.rows() != k.base_dim || piece.gamma.cols() != piece.source_dim {
                report.push(
                    Severity::Error,
                    GammaShape,
                    loc.clone(),
                    format!(
                        "gamma is {}×{}, expected {}×{}",
                        piece.gamma.rows(),
                        piece.gamma.cols(),
                        k.base_dim,
                        piece.source_dim
                    ),
                );
                continue;
            }
            if let PieceKind::Sub { generators } = &piece.kind {
                if !trivial_group {
                    report.push(
                        Severity::Error,
                        SubRequiresTrivialGroup,
                        loc.clone(),
                        "sub-module pieces need a trivial base group".into(),
                    );
                }
                for g in generators {
                    if g.is_zero() || !g.is_homogeneous() {
                        report.push(
                            Severity::Error,
                            InhomogeneousGenerator,
                            loc.clone(),
                            format!(
                                "generator {} is not a nonzero homogeneous polynomial",
                                g.display_with(&piece.var_names)
                            ),
                        );
                    }
                }
                for missing in sq_closure_defects(piece, generators, max_degree) {
                    report.push(
                        Severity::Warning,
                        NotSqClosed,
                        loc.clone(),
                        format!(
                            "{} lies outside the span of the generators; the module is enlarged to contain it",
                            missing
                        ),
                    );
                }
            }
        }
    }

    if let Some(e) = &k.ambient_embedding {
        if e.dim != k.base_dim {
            report.push(
                Severity::Error,
                EmbeddingDim,
                "ambient_embedding".into(),
                format!(
                    "ambient dimension {} differs from base dimension {}",
                    e.dim, k.base_dim
                ),
            );
        }
        for g in &e.generators {
            if !g.is_homogeneous() {
                report.push(
                    Severity::Error,
                    InhomogeneousGenerator,
                    "ambient_embedding".into(),
                    format!("generator {g} is not homogeneous"),
                );
            }
        }
    }
    report
}

/// Squares of Sub generators not in the span of `γ*(H*(U))·generators`.
fn sq_closure_defects(
    piece: &InducedModule,
    generators: &[Polynomial],
    max_degree: usize,
) -> Vec<String> {
    let base_dim = piece.gamma.rows();
    let mut out = Vec::new();
    for g in generators {
        let Some(dg) = g.homogeneous_degree() else {
            continue;
        };
        for i in 1..=dg {
            let d = dg + i;
            if d > max_degree {
                break;
            }
            let Ok(image) = sq(i, g) else { continue };
            if image.is_zero() {
                continue;
            }
            let basis = MonomialBasis::new(piece.source_dim, d);
            let mut span = SpanBuilder::new(basis.len());
            for h in generators {
                let Some(dh) = h.homogeneous_degree() else {
                    continue;
                };
                if dh > d {
                    continue;
                }
                for m in MonomialBasis::new(base_dim, d - dh).monomials() {
                    let pulled = pullback(&piece.gamma, &Polynomial::monomial(m.clone()))
                        .expect("gamma shape checked");
                    span.insert(&basis.to_vector(&(&pulled * h)));
                }
            }
            if !span.contains(&basis.to_vector(&image)) {
                out.push(format!(
                    "Sq^{i}({}) = {}",
                    g.display_with(&piece.var_names),
                    image.display_with(&piece.var_names)
                ));
            }
        }
    }
    out
}

/// A point `(W, [ψ])` of `𝒮(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SKPoint {
    pub dim_w: usize,
    pub orbit: Orbit,
}

impl SKPoint {
    pub fn new(orbit: Orbit) -> Self {
        SKPoint {
            dim_w: orbit.dim_source,
            orbit,
        }
    }

    pub fn from_map(g: &Subgroup, psi: &F2Matrix) -> Self {
        SKPoint::new(Orbit::of(g, psi))
    }

    pub fn psi(&self) -> &F2Matrix {
        &self.orbit.representative
    }

    /// `ψ` written as a list of image vectors in the basis `x, y, z, …` of `U`.
    pub fn label(&self) -> String {
        let cols: Vec<String> = self
            .psi()
            .column_vectors()
            .iter()
            .map(|c| vector_label(c))
            .collect();
        format!("(W=F₂^{}, ψ=[{}])", self.dim_w, cols.join(", "))
    }
}

impl Serialize for SKPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SKPoint", 2)?;
        st.serialize_field("dim", &self.dim_w)?;
        st.serialize_field("psi", &self.orbit.representative)?;
        st.end()
    }
}

/// Names of the standard basis of `U`: `x, y, z`, then `e4, e5, …`.
pub fn basis_vector_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "x".into(),
            1 => "y".into(),
            2 => "z".into(),
            _ => format!("e{}", i + 1),
        })
        .collect()
}

pub fn vector_label(v: &[u8]) -> String {
    let names = basis_vector_names(v.len());
    let parts: Vec<&str> = v
        .iter()
        .zip(&names)
        .filter(|(b, _)| **b == 1)
        .map(|(_, n)| n.as_str())
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// One point per `G`-orbit of `Hom(F₂^dim_w, U)`.
pub fn sk_points(k: &LayeredAlgebra, dim_w: usize, caps: &Caps) -> Result<Vec<SKPoint>> {
    let g = k.group(caps)?;
    Ok(orbits(&g, dim_w, caps)?
        .into_iter()
        .map(SKPoint::new)
        .collect())
}

/// Degreewise dimensions of `K` in degrees `0..=max_degree`.
pub fn realize_slice(k: &LayeredAlgebra, max_degree: usize, caps: &Caps) -> Result<GradedDims> {
    let g = k.group(caps)?;
    let mut dims: Vec<i64> = invariants_upto(&g, max_degree, caps)?
        .iter()
        .map(|b| b.len() as i64)
        .collect();
    for (_, side, piece) in k.pieces() {
        let sign = match side {
            Side::Kernel => 1,
            Side::Cokernel => -1,
        };
        let s = piece.suspension;
        if s > max_degree {
            continue;
        }
        for (d, m) in piece.module_dims(max_degree - s).into_iter().enumerate() {
            dims[d + s] += sign * m as i64;
        }
    }
    if let Some((degree, &value)) = dims.iter().enumerate().find(|(_, &v)| v < 0) {
        return Err(Error::NegativeDimension { degree, value });
    }
    Ok(GradedDims {
        dims: dims.into_iter().map(|v| v as usize).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = r#"{
      "base": {"dim": 2, "group_generators": [[[1,1],[0,1]]]},
      "layers": [{"level": 1,
        "kernel": [{"suspension":1,"source_dim":3,"gamma":[[1,0,0],[0,1,0]],"kind":"full"}],
        "cokernel": []}]
    }"#;

    const EX4: &str = r#"{
      "base": {"dim": 3, "group_generators": []},
      "ambient_embedding": {"dim": 3, "generators": ["v","w","u^2","u^3"]},
      "layers": [{"level": 1, "kernel": [],
        "cokernel": [{"suspension":1,"source_dim":2,"gamma":[[0,0],[1,0],[0,1]],"kind":"full"}]}]
    }"#;

    #[test]
    fn parse_example_one() {
        let k = LayeredAlgebra::from_json_str(EX1).unwrap();
        assert_eq!(k.depth(), 2);
        let c = Caps::default();
        assert!(validate(&k, 6, &c).is_valid());
        assert_eq!(k.layers[0].kernel_pieces[0].var_names, vec!["u", "v", "w"]);
        let again = LayeredAlgebra::from_json_str(&k.to_json_string().unwrap()).unwrap();
        assert_eq!(again, k);
    }

    #[test]
    fn var_names_follow_gamma() {
        let k = LayeredAlgebra::from_json_str(EX4).unwrap();
        assert_eq!(k.layers[0].cokernel_pieces[0].var_names, vec!["v", "w"]);
        let iy = F2Matrix::from_rows(&[vec![0], vec![1]]).unwrap();
        assert_eq!(derive_var_names(&iy, &default_var_names(2)), vec!["v"]);
        let dup = F2Matrix::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(
            derive_var_names(&dup, &default_var_names(2)),
            vec!["u", "v"]
        );
    }

    #[test]
    fn sub_needs_trivial_group() {
        let s = r#"{
          "base": {"dim": 2, "group_generators": [[[1,1],[0,1]]]},
          "layers": [{"level": 1,
            "kernel": [{"suspension":1,"source_dim":2,"gamma":[[1,0],[0,1]],"kind":{"sub":{"generators":["u^2"]}}}]}]
        }"#;
        let k = LayeredAlgebra::from_json_str(s).unwrap();
        let r = validate(&k, 4, &Caps::default());
        assert!(!r.is_valid());
        assert!(r.has(DiagnosticCode::SubRequiresTrivialGroup));
    }

    #[test]
    fn non_consecutive_levels() {
        let s = r#"{
          "base": {"dim": 1},
          "layers": [
            {"level": 1, "kernel": [{"suspension":1,"source_dim":1,"gamma":[[1]],"kind":"full"}]},
            {"level": 3, "kernel": [{"suspension":3,"source_dim":1,"gamma":[[1]],"kind":"full"}]}]
        }"#;
        let k = LayeredAlgebra::from_json_str(s).unwrap();
        let r = validate(&k, 4, &Caps::default());
        assert!(r.has(DiagnosticCode::NonConsecutiveLevels));
        assert!(!r.is_valid());
    }

    #[test]
    fn other_diagnostics() {
        let s = r#"{
          "base": {"dim": 2, "group_generators": [[[1,1],[1,1]]]},
          "ambient_embedding": {"dim": 3, "generators": ["u"]},
          "layers": [{"level": 1, "kernel": [
             {"suspension":2,"source_dim":1,"gamma":[[1],[0]],"kind":"full"},
             {"suspension":1,"source_dim":2,"gamma":[[1],[0]],"kind":"full"}]}]
        }"#;
        // second piece: gamma has 1 column but source_dim 2 -> parse error
        assert!(LayeredAlgebra::from_json_str(s).is_err());
        let s = s.replace(
            r#""source_dim":2,"gamma":[[1],[0]]"#,
            r#""source_dim":1,"gamma":[[1]]"#,
        );
        let k = LayeredAlgebra::from_json_str(&s).unwrap();
        let r = validate(&k, 4, &Caps::default());
        for code in [
            DiagnosticCode::NotInvertible,
            DiagnosticCode::SuspensionMismatch,
            DiagnosticCode::GammaShape,
            DiagnosticCode::EmbeddingDim,
        ] {
            assert!(r.has(code), "{code:?} missing in\n{r}");
        }
    }

    #[test]
    fn sq_closure_warning() {
        let s = r#"{
          "base": {"dim": 2},
          "layers": [{"level": 1, "kernel": [
             {"suspension":1,"source_dim":3,"gamma":[[1,0,0],[0,1,0]],"kind":{"sub":{"generators":["w"]}}}]}]
        }"#;
        let k = LayeredAlgebra::from_json_str(s).unwrap();
        let r = validate(&k, 4, &Caps::default());
        assert!(r.is_valid());
        assert!(r.has(DiagnosticCode::NotSqClosed));
        let closed = s.replace(r#"["w"]"#, r#"["u"]"#);
        let k = LayeredAlgebra::from_json_str(&closed).unwrap();
        assert!(validate(&k, 4, &Caps::default()).diagnostics.is_empty());
    }

    #[test]
    fn sk_point_counts() {
        let c = Caps::default();
        let k1 = LayeredAlgebra::from_json_str(EX1).unwrap();
        assert_eq!(sk_points(&k1, 1, &c).unwrap().len(), 3);
        let k4 = LayeredAlgebra::from_json_str(EX4).unwrap();
        assert_eq!(sk_points(&k4, 1, &c).unwrap().len(), 8);
        for k in [&k1, &k4] {
            let pts = sk_points(k, 0, &c).unwrap();
            assert_eq!(pts.len(), 1);
            assert_eq!(pts[0].dim_w, 0);
        }
    }

    #[test]
    fn slice_dims() {
        let c = Caps::default();
        let k1 = LayeredAlgebra::from_json_str(EX1).unwrap();
        assert_eq!(realize_slice(&k1, 3, &c).unwrap().dims, vec![1, 2, 5, 8]);
        // F₂[v,w] ⊕ u²F₂[u,v,w]: (1,2,3,4) + (0,0,1,3)
        let k4 = LayeredAlgebra::from_json_str(EX4).unwrap();
        assert_eq!(realize_slice(&k4, 3, &c).unwrap().dims, vec![1, 2, 4, 7]);
        let bare = LayeredAlgebra::base(3, vec![]);
        assert_eq!(realize_slice(&bare, 5, &c).unwrap(), graded_dims(3, 5));
    }

    #[test]
    fn negative_dimension_rejected() {
        let s = r#"{
          "base": {"dim": 1},
          "layers": [{"level": 1, "cokernel": [
             {"suspension":1,"source_dim":2,"gamma":[[1,0]],"kind":"full"}]}]
        }"#;
        let k = LayeredAlgebra::from_json_str(s).unwrap();
        assert!(matches!(
            realize_slice(&k, 3, &Caps::default()),
            Err(Error::NegativeDimension { degree: 2, .. })
        ));
    }
}
