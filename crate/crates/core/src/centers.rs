//! Centrality criteria and the layer-by-layer computation of `C_k(K)` and `C(K)`.
//!
//! `C_1(K)` is decided on the invariant-ring base: `(W, [ψ])` is central iff
//! every vector of `Im ψ` is fixed by `G`. Passing from `C_k` to `C_{k+1}`
//! intersects with the points that are central for every piece of layer `k`,
//! each piece judged after desuspension as an `H*(U)^G`-module.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{enumerate_maps, fixed_space, orbits, Caps, F2Matrix, Orbit, Subgroup};
use crate::poly::subalgebra_membership;
use crate::presentation::{vector_label, InducedModule, LayeredAlgebra, PieceKind, SKPoint};

/// `Im ψ ⊆ U^G`.
pub fn base_centre(g: &Subgroup, pt: &SKPoint) -> bool {
    fixed_space(g).image_contains(pt.psi())
}

/// Fiber sizes of `{[θ] ∈ Hom(W⊕V, U)/G : θ|_W ∈ [ψ]} → Hom(V, U)/G`,
/// indexed like `orbits(g, probe_dim)`.
pub fn functor_fibers(
    g: &Subgroup,
    pt: &SKPoint,
    probe_dim: usize,
    caps: &Caps,
) -> Result<Vec<usize>> {
    let n = g.ambient_dim();
    let needed = (pt.dim_w + probe_dim) * n;
    if needed > caps.hom_bits as usize {
        return Err(Error::CapExceeded {
            what: "functor oracle Hom-set",
            requested: needed as u64,
            cap: caps.hom_bits as u64,
        });
    }
    let chi_orbits = orbits(g, probe_dim, caps)?;
    let chi_index: HashMap<&F2Matrix, usize> = chi_orbits
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.members.iter().map(move |m| (m, i)))
        .collect();
    let mut classes: BTreeSet<(usize, F2Matrix)> = BTreeSet::new();
    for head in &pt.orbit.members {
        for chi in enumerate_maps(probe_dim, n, caps)? {
            let theta = head.hstack(&chi)?;
            let canonical = Orbit::of(g, &theta).representative;
            classes.insert((chi_index[&chi], canonical));
        }
    }
    let mut fibers = vec![0; chi_orbits.len()];
    for (i, _) in classes {
        fibers[i] += 1;
    }
    Ok(fibers)
}

/// Brute-force centrality: the restriction map above is a bijection for
/// every probe dimension up to `probe_dim_max`.
pub fn functor_centre_oracle(
    g: &Subgroup,
    pt: &SKPoint,
    probe_dim_max: usize,
    caps: &Caps,
) -> Result<bool> {
    for v in 0..=probe_dim_max {
        if functor_fibers(g, pt, v, caps)?.iter().any(|&f| f != 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Centrality for a full induced piece `H*(V', [γ])` over `H*(U)^G`:
/// `γ` injective, some `g∘ψ` has image in `Im γ`, and every such `g'∘ψ` equals it.
pub fn module_central_full(g: &Subgroup, m: &InducedModule, pt: &SKPoint) -> Result<bool> {
    if !m.is_full() {
        return Err(Error::UnsupportedSubPiece);
    }
    if pt.dim_w == 0 {
        return Ok(true);
    }
    if !m.gamma.is_injective() {
        return Ok(false);
    }
    let psi = pt.psi();
    let mut landing: Option<F2Matrix> = None;
    for h in g.elements() {
        let moved = h * psi;
        if m.gamma.image_contains(&moved) {
            match &landing {
                None => landing = Some(moved),
                Some(first) if *first != moved => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok(landing.is_some())
}

/// Whether every Sub generator lies in the subalgebra `γ*(H*(U))`.
pub fn sub_contained(m: &InducedModule, caps: &Caps) -> Result<bool> {
    let PieceKind::Sub { generators } = &m.kind else {
        return Ok(true);
    };
    let ring = m.ring_generators();
    for p in generators {
        let Some(d) = p.homogeneous_degree() else {
            if p.is_zero() {
                continue;
            }
            return Err(Error::Inhomogeneous);
        };
        if !subalgebra_membership(p, &ring, d, caps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Centrality for a submodule `M ⊆ H*(V', γ*)` over `H*(U)` (trivial group only).
/// If `M ⊆ γ*(H*(U))`, central iff `Im ψ ⊆ Im γ`; otherwise only `W = 0` is central.
pub fn module_central_sub(
    g: &Subgroup,
    m: &InducedModule,
    pt: &SKPoint,
    caps: &Caps,
) -> Result<bool> {
    if !g.is_trivial() {
        return Err(Error::UnsupportedSubPiece);
    }
    if pt.dim_w == 0 {
        return Ok(true);
    }
    if sub_contained(m, caps)? {
        Ok(m.gamma.image_contains(pt.psi()))
    } else {
        Ok(false)
    }
}

pub fn piece_central(g: &Subgroup, m: &InducedModule, pt: &SKPoint, caps: &Caps) -> Result<bool> {
    match m.kind {
        PieceKind::Full => module_central_full(g, m, pt),
        PieceKind::Sub { .. } => module_central_sub(g, m, pt, caps),
    }
}

/// The alternative reading of the full-piece criterion over `H*(U)` (trivial group).
fn piece_central_over_polynomials(m: &InducedModule, pt: &SKPoint, caps: &Caps) -> Result<bool> {
    let trivial = Subgroup::trivial(m.gamma.rows());
    let point = SKPoint {
        dim_w: pt.dim_w,
        orbit: Orbit::of(&trivial, pt.psi()),
    };
    piece_central(&trivial, m, &point, caps)
}

fn check_level(k: &LayeredAlgebra, level: usize) -> Result<()> {
    if level == 0 || level >= k.depth() {
        return Err(Error::LevelOutOfRange {
            level,
            depth: k.depth(),
        });
    }
    Ok(())
}

/// Whether `pt` is central for every kernel and cokernel piece of the given layer.
pub fn layer_central(k: &LayeredAlgebra, level: usize, pt: &SKPoint, caps: &Caps) -> Result<bool> {
    check_level(k, level)?;
    let g = k.group(caps)?;
    layer_central_in(&g, k, level, pt, caps)
}

fn layer_central_in(
    g: &Subgroup,
    k: &LayeredAlgebra,
    level: usize,
    pt: &SKPoint,
    caps: &Caps,
) -> Result<bool> {
    let Some(layer) = k.layer(level) else {
        return Ok(true);
    };
    for (_, piece) in layer.pieces() {
        if !piece_central(g, piece, pt, caps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of `pt` in `C_target(K)`.
pub fn ck(k: &LayeredAlgebra, target_k: usize, pt: &SKPoint, caps: &Caps) -> Result<bool> {
    if target_k == 0 || target_k > k.depth() {
        return Err(Error::LevelOutOfRange {
            level: target_k,
            depth: k.depth(),
        });
    }
    let g = k.group(caps)?;
    Ok(membership_levels(&g, k, pt, caps, false)?[target_k - 1])
}

/// `[pt ∈ C_1, pt ∈ C_2, …, pt ∈ C_depth]`.
fn membership_levels(
    g: &Subgroup,
    k: &LayeredAlgebra,
    pt: &SKPoint,
    caps: &Caps,
    header_reading: bool,
) -> Result<Vec<bool>> {
    let mut out = Vec::with_capacity(k.depth());
    let mut inside = base_centre(g, pt);
    out.push(inside);
    for level in 1..k.depth() {
        if inside {
            inside = if header_reading && !g.is_trivial() {
                let mut ok = true;
                if let Some(layer) = k.layer(level) {
                    for (_, piece) in layer.pieces() {
                        if !piece_central_over_polynomials(piece, pt, caps)? {
                            ok = false;
                            break;
                        }
                    }
                }
                ok
            } else {
                layer_central_in(g, k, level, pt, caps)?
            };
        }
        out.push(inside);
    }
    Ok(out)
}

/// Shape of a computed set of points of `𝒮(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SetShape {
    /// Only `(0, ε_K)`.
    TrivialOnly,
    /// All `(W, [ψ])` with `Im ψ ⊆ span(basis)`.
    Subspace { basis: Vec<Vec<u8>> },
    /// No closed form; the raw accepted representatives.
    Unstructured { accepted: Vec<SKPoint> },
}

impl SetShape {
    pub fn describe(&self, u_dim: usize) -> String {
        match self {
            SetShape::TrivialOnly => "trivial only".to_string(),
            SetShape::Subspace { basis } if basis.len() == u_dim && u_dim > 0 => {
                "Im ψ ⊆ U (all of 𝒮(K))".to_string()
            }
            SetShape::Subspace { basis } if basis.is_empty() => {
                "Im ψ = 0, {(W,ε_W) : all W}".to_string()
            }
            SetShape::Subspace { basis } => {
                let names: Vec<String> = basis.iter().map(|v| vector_label(v)).collect();
                format!("Im ψ ⊆ span{{{}}}", names.join(","))
            }
            SetShape::Unstructured { accepted } => {
                let pts: Vec<String> = accepted.iter().map(SKPoint::label).collect();
                format!("no closed form: {}", pts.join(" "))
            }
        }
    }
}

/// Classifies `accepted ⊆ all` as one of the closed forms when possible.
pub fn classify(u_dim: usize, all: &[SKPoint], accepted: &[SKPoint], max_dim_w: usize) -> SetShape {
    if max_dim_w >= 1 && accepted.iter().all(|p| p.dim_w == 0) {
        return SetShape::TrivialOnly;
    }
    let mut span = F2Matrix::zeros(u_dim, 0);
    for p in accepted {
        span = span.hstack(p.psi()).expect("same target");
    }
    let basis_cols = span.image_basis();
    // canonical basis: reduced echelon rows of the transposed spanning set
    let (rref, pivots) = basis_cols.transpose().rref();
    let basis: Vec<Vec<u8>> = rref.to_rows().into_iter().take(pivots.len()).collect();
    let predicted: BTreeSet<&SKPoint> = all
        .iter()
        .filter(|p| basis_cols.image_contains(p.psi()))
        .collect();
    let got: BTreeSet<&SKPoint> = accepted.iter().collect();
    if predicted == got {
        SetShape::Subspace { basis }
    } else {
        SetShape::Unstructured {
            accepted: accepted.to_vec(),
        }
    }
}

impl PartialOrd for SKPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SKPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim_w, self.psi()).cmp(&(other.dim_w, other.psi()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelEntry {
    pub level: usize,
    #[serde(flatten)]
    pub shape: SetShape,
    /// The same level with full pieces judged over `H*(U)` instead of `H*(U)^G`;
    /// present only for a nontrivial group.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub header_reading: Option<SetShape>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointVerdict {
    pub point: SKPoint,
    /// Membership in `C_1, …, C_depth`.
    pub levels: Vec<bool>,
}

/// Membership of every point with `dim W ≤ max_dim_w` in every `C_k`.
#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub u_dim: usize,
    pub depth: usize,
    pub max_dim_w: usize,
    pub points: Vec<PointVerdict>,
    pub per_level: Vec<LevelEntry>,
}

impl Sweep {
    pub fn accepted(&self, level: usize) -> Vec<SKPoint> {
        self.points
            .iter()
            .filter(|p| p.levels[level - 1])
            .map(|p| p.point.clone())
            .collect()
    }

    pub fn final_shape(&self) -> &SetShape {
        &self.per_level.last().expect("depth ≥ 1").shape
    }

    /// Pairs `(pt, k)` with `pt ∈ C_{k+1}` but `pt ∉ C_k`.
    pub fn monotonicity_violations(&self) -> Vec<(SKPoint, usize)> {
        let mut out = Vec::new();
        for p in &self.points {
            for k in 1..p.levels.len() {
                if p.levels[k] && !p.levels[k - 1] {
                    out.push((p.point.clone(), k));
                }
            }
        }
        out
    }
}

pub fn sweep(k: &LayeredAlgebra, max_dim_w: usize, caps: &Caps) -> Result<Sweep> {
    let g = k.group(caps)?;
    let mut all = Vec::new();
    for w in 0..=max_dim_w {
        all.extend(orbits(&g, w, caps)?.into_iter().map(SKPoint::new));
    }
    let mut points = Vec::with_capacity(all.len());
    let mut header = Vec::with_capacity(all.len());
    for pt in &all {
        points.push(PointVerdict {
            point: pt.clone(),
            levels: membership_levels(&g, k, pt, caps, false)?,
        });
        if !g.is_trivial() {
            header.push(membership_levels(&g, k, pt, caps, true)?);
        }
    }
    let per_level = (1..=k.depth())
        .map(|level| {
            let accepted: Vec<SKPoint> = points
                .iter()
                .filter(|p| p.levels[level - 1])
                .map(|p| p.point.clone())
                .collect();
            let header_reading = (!g.is_trivial()).then(|| {
                let acc: Vec<SKPoint> = all
                    .iter()
                    .zip(&header)
                    .filter(|(_, l)| l[level - 1])
                    .map(|(p, _)| p.clone())
                    .collect();
                classify(k.base_dim, &all, &acc, max_dim_w)
            });
            LevelEntry {
                level,
                shape: classify(k.base_dim, &all, &accepted, max_dim_w),
                header_reading,
            }
        })
        .collect();
    Ok(Sweep {
        u_dim: k.base_dim,
        depth: k.depth(),
        max_dim_w,
        points,
        per_level,
    })
}

/// The computed centre `C(K) = C_depth(K)`.
#[derive(Clone, Debug, Serialize)]
pub struct CentreDescription {
    #[serde(flatten)]
    pub mode: SetShape,
    pub per_level: Vec<LevelEntry>,
}

pub fn centre(k: &LayeredAlgebra, max_dim_w: usize, caps: &Caps) -> Result<CentreDescription> {
    let s = sweep(k, max_dim_w, caps)?;
    match s.final_shape().clone() {
        SetShape::Unstructured { accepted } => Err(Error::Inconclusive {
            accepted: accepted.iter().map(|p| p.psi().clone()).collect(),
        }),
        mode => Ok(CentreDescription {
            mode,
            per_level: s.per_level,
        }),
    }
}

/// Points `(V, [ψ∘α])` missing from `C_level(K)` although `(W, [ψ])` is in it,
/// over all `α : V → W` with `dim V ≤ sweep.max_dim_w`.
pub fn precomposition_violations(
    k: &LayeredAlgebra,
    s: &Sweep,
    level: usize,
    caps: &Caps,
) -> Result<Vec<(SKPoint, F2Matrix)>> {
    let g = k.group(caps)?;
    let accepted: BTreeSet<SKPoint> = s.accepted(level).into_iter().collect();
    let mut out = Vec::new();
    for pt in &accepted {
        for v in 0..=s.max_dim_w {
            for alpha in enumerate_maps(v, pt.dim_w, caps)? {
                let image = SKPoint::from_map(&g, &(pt.psi() * &alpha));
                if !accepted.contains(&image) {
                    out.push((pt.clone(), alpha));
                }
            }
        }
    }
    Ok(out)
}
