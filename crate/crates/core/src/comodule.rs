//! `H*(W)`-coactions on polynomial algebras and their restriction to `K`.
//!
//! A tensor `Σ p_e ⊗ t^e` is stored as one polynomial over the ambient
//! variables followed by the coefficient variables `t`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{Caps, F2Matrix, Subgroup};
use crate::poly::{
    coefficient_var_names, invariants_upto, pullback, pullback_forms, sq_additive,
    subalgebra_membership, Monomial, MonomialBasis, Polynomial,
};
use crate::presentation::{LayeredAlgebra, PieceKind, Side};

/// Images of the ambient coordinate forms.
#[derive(Clone, Debug, PartialEq)]
pub struct Coaction {
    pub ambient_names: Vec<String>,
    pub coefficient_names: Vec<String>,
    /// One image per ambient variable, over `ambient + coefficient` variables.
    pub images: Vec<Polynomial>,
}

impl Coaction {
    pub fn ambient_vars(&self) -> usize {
        self.ambient_names.len()
    }

    pub fn coefficient_vars(&self) -> usize {
        self.coefficient_names.len()
    }

    fn total_vars(&self) -> usize {
        self.ambient_vars() + self.coefficient_vars()
    }

    /// `a ↦ a⊗1 + 1⊗(a∘f)` for `f : W → V`, given as `dim V × dim W`.
    pub fn from_point(ambient_names: &[String], f: &F2Matrix) -> Result<Coaction> {
        let n = ambient_names.len();
        if f.rows() != n {
            return Err(Error::DimMismatch {
                context: "coaction_from_point",
                expected: n,
                found: f.rows(),
            });
        }
        let c = f.cols();
        let total = n + c;
        let images = pullback_forms(f)
            .into_iter()
            .enumerate()
            .map(|(i, form)| &Polynomial::var(total, i) + &form.embed(total, n))
            .collect();
        Ok(Coaction {
            ambient_names: ambient_names.to_vec(),
            coefficient_names: coefficient_var_names(c),
            images,
        })
    }

    pub fn trivial(ambient_names: &[String], coefficient_vars: usize) -> Coaction {
        let total = ambient_names.len() + coefficient_vars;
        Coaction {
            ambient_names: ambient_names.to_vec(),
            coefficient_names: coefficient_var_names(coefficient_vars),
            images: (0..ambient_names.len())
                .map(|i| Polynomial::var(total, i))
                .collect(),
        }
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.num_vars() != self.ambient_vars() {
            return Err(Error::VarMismatch {
                left: self.ambient_vars(),
                right: p.num_vars(),
            });
        }
        Ok(p.substitute(&self.images, self.total_vars()))
    }

    /// Renders a tensor over this coaction's variables.
    pub fn render(&self, p: &Polynomial) -> String {
        render_tensor(p, &self.ambient_names, &self.coefficient_names, false)
    }

    pub fn check_axioms(&self, max_degree: usize) -> AxiomReport {
        let n = self.ambient_vars();
        let c = self.coefficient_vars();
        let total = self.total_vars();
        let mut failures = Vec::new();

        let counit: Vec<Polynomial> = (0..n)
            .map(|i| Polynomial::var(n, i))
            .chain((0..c).map(|_| Polynomial::zero(n)))
            .collect();
        // (κ⊗id)κ lives over ambient, t₁, t₂
        let wide = n + 2 * c;
        let first_pass: Vec<Polynomial> = self
            .images
            .iter()
            .map(|img| img.embed(wide, 0))
            .chain((0..c).map(|j| Polynomial::var(wide, n + c + j)))
            .collect();
        let diagonal: Vec<Polynomial> = (0..n)
            .map(|i| Polynomial::var(wide, i))
            .chain(
                (0..c).map(|j| &Polynomial::var(wide, n + j) + &Polynomial::var(wide, n + c + j)),
            )
            .collect();

        for d in 0..=max_degree {
            for m in MonomialBasis::new(n, d).monomials() {
                let p = Polynomial::monomial(m.clone());
                let image = p.substitute(&self.images, total);
                let mut fail = |axiom: Axiom| {
                    failures.push(AxiomFailure {
                        axiom,
                        monomial: p.display_with(&self.ambient_names),
                    })
                };
                if image.substitute(&counit, n) != p {
                    fail(Axiom::Counit);
                }
                if image.substitute(&first_pass, wide) != image.substitute(&diagonal, wide) {
                    fail(Axiom::Coassociativity);
                }
                if (0..n).any(|i| {
                    let q = &p * &Polynomial::var(n, i);
                    q.substitute(&self.images, total) != &image * &self.images[i]
                }) {
                    fail(Axiom::Multiplicativity);
                }
                if (0..=d).any(|i| {
                    sq_additive(i, &p).substitute(&self.images, total) != sq_additive(i, &image)
                }) {
                    fail(Axiom::SteenrodLinearity);
                }
            }
        }
        AxiomReport { failures }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Counit,
    Coassociativity,
    Multiplicativity,
    SteenrodLinearity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub monomial: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first(&self, axiom: Axiom) -> Option<&AxiomFailure> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }
}

/// `Σ p_e ⊗ t^e` as text, grouped by coefficient monomial in increasing degree.
/// With `suspended`, every left factor carries a `σ`.
pub fn render_tensor(p: &Polynomial, left: &[String], right: &[String], suspended: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let n = left.len();
    let mut parts: Vec<(Monomial, Polynomial)> = p.split_tensor(n).into_iter().collect();
    parts.sort_by_key(|(e, _)| {
        (
            e.iter().sum::<u32>(),
            e.iter().map(|x| u32::MAX - x).collect::<Vec<_>>(),
        )
    });
    let sigma = if suspended { "σ" } else { "" };
    parts
        .iter()
        .map(|(e, a)| {
            let l = a.display_with(left);
            let l = if a.num_terms() > 1 {
                format!("({l})")
            } else {
                l
            };
            let r = Polynomial::monomial(e.clone()).display_with(right);
            format!("{sigma}{l}⊗{r}")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `u^3⊗1 + u^2⊗u` → `u³⊗1+u²⊗u`.
pub fn compact_unicode(s: &str) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            ' ' => {}
            '^' => {
                while let Some(dg) = chars.peek().and_then(|c| c.to_digit(10)) {
                    out.push(SUP[dg as usize]);
                    chars.next();
                }
            }
            _ => out.push(ch),
        }
    }
    out
}

/// Serialized coaction: images keyed by ambient variable name, written over
/// ambient and coefficient names (`"u*1 + 1*t"`). `piece_images` optionally
/// fixes the coaction on the suspended piece.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoactionFile {
    pub coefficient_vars: Vec<String>,
    pub images: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece_images: Option<BTreeMap<String, String>>,
}

impl CoactionFile {
    pub fn parse(&self, ambient_names: &[String]) -> Result<Coaction> {
        parse_images(&self.images, ambient_names, &self.coefficient_vars)
    }

    pub fn parse_piece(&self, piece_names: &[String]) -> Result<Option<Coaction>> {
        self.piece_images
            .as_ref()
            .map(|imgs| parse_images(imgs, piece_names, &self.coefficient_vars))
            .transpose()
    }

    pub fn from_coaction(k: &Coaction) -> CoactionFile {
        let names = combined_names(&k.ambient_names, &k.coefficient_names);
        CoactionFile {
            coefficient_vars: k.coefficient_names.clone(),
            images: k
                .ambient_names
                .iter()
                .zip(&k.images)
                .map(|(a, img)| (a.clone(), img.display_with(&names)))
                .collect(),
            piece_images: None,
        }
    }
}

fn combined_names(ambient: &[String], coefficient: &[String]) -> Vec<String> {
    ambient.iter().chain(coefficient).cloned().collect()
}

fn parse_images(
    images: &BTreeMap<String, String>,
    ambient: &[String],
    coefficient: &[String],
) -> Result<Coaction> {
    if let Some(dup) = coefficient.iter().find(|c| ambient.contains(c)) {
        return Err(Error::Parse(format!(
            "coefficient variable {dup} clashes with an ambient name"
        )));
    }
    if let Some(extra) = images.keys().find(|k| !ambient.contains(k)) {
        return Err(Error::Parse(format!(
            "image given for unknown variable {extra}"
        )));
    }
    let names = combined_names(ambient, coefficient);
    let images = ambient
        .iter()
        .map(|a| {
            images
                .get(a)
                .ok_or_else(|| Error::Parse(format!("no image for {a}")))
                .and_then(|s| Polynomial::parse(s, &names))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Coaction {
        ambient_names: ambient.to_vec(),
        coefficient_names: coefficient.to_vec(),
        images,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RestrictionMode {
    /// `K` given as a subalgebra of the ambient polynomial ring.
    Subalgebra,
    /// `K` is the invariant ring itself.
    Invariants,
    /// Invariant ring plus one suspended full piece with zero products.
    SquareZero,
}

/// An element of `K` whose coaction image leaves `K ⊗ H*(W)`.
#[derive(Clone, Debug, PartialEq)]
pub enum RestrictionWitness {
    /// A generator `p` of the subalgebra, with the coefficient monomials whose
    /// parts are not in `K`.
    NotInSubalgebra {
        generator: Polynomial,
        image: Polynomial,
        failing: Vec<Monomial>,
    },
    /// A base element whose image has a non-invariant part.
    NotInvariant {
        element: Polynomial,
        image: Polynomial,
    },
    /// `κ(x·σm) ≠ κ(x)·κ(σm)`; `difference` is the sum of both sides.
    NotMultiplicative {
        x: Polynomial,
        m: Polynomial,
        lhs: Polynomial,
        rhs: Polynomial,
        difference: Polynomial,
    },
}

#[derive(Clone, Debug)]
pub struct RestrictionReport {
    pub mode: RestrictionMode,
    pub base_names: Vec<String>,
    pub piece_names: Vec<String>,
    pub coefficient_names: Vec<String>,
    pub witnesses: Vec<RestrictionWitness>,
}

#[derive(Serialize)]
struct WitnessView {
    kind: &'static str,
    element: String,
    image: String,
}

#[derive(Serialize)]
struct ReportView<'a> {
    mode: RestrictionMode,
    passed: bool,
    witnesses: Vec<WitnessView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficient_vars: Option<&'a [String]>,
}

impl RestrictionReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// `(element, image)` rendered with the given coefficient names.
    pub fn render_with(&self, w: &RestrictionWitness, coefficient: &[String]) -> (String, String) {
        let b = &self.base_names;
        match w {
            RestrictionWitness::NotInSubalgebra {
                generator, image, ..
            } => (
                generator.display_with(b),
                render_tensor(image, b, coefficient, false),
            ),
            RestrictionWitness::NotInvariant { element, image } => (
                element.display_with(b),
                render_tensor(image, b, coefficient, false),
            ),
            RestrictionWitness::NotMultiplicative {
                x, m, difference, ..
            } => {
                let xs = x.display_with(b);
                let xs = if x.num_terms() > 1 {
                    format!("({xs})")
                } else {
                    xs
                };
                let ms = m.display_with(&self.piece_names);
                let ms = if m.num_terms() > 1 {
                    format!("({ms})")
                } else {
                    ms
                };
                (
                    format!("{xs}·σ{ms}"),
                    render_tensor(difference, &self.piece_names, coefficient, true),
                )
            }
        }
    }

    pub fn render(&self, w: &RestrictionWitness) -> (String, String) {
        self.render_with(w, &self.coefficient_names)
    }
}

impl Serialize for RestrictionReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let witnesses = self
            .witnesses
            .iter()
            .map(|w| {
                let (element, image) = self.render(w);
                let kind = match w {
                    RestrictionWitness::NotInSubalgebra { .. } => "not_in_subalgebra",
                    RestrictionWitness::NotInvariant { .. } => "not_invariant",
                    RestrictionWitness::NotMultiplicative { .. } => "not_multiplicative",
                };
                WitnessView {
                    kind,
                    element,
                    image,
                }
            })
            .collect();
        ReportView {
            mode: self.mode,
            passed: self.passed(),
            witnesses,
            coefficient_vars: Some(&self.coefficient_names),
        }
        .serialize(s)
    }
}

/// Whether `κ` restricts to `K` in degrees `≤ max_degree`, with every violation found.
///
/// For a suspended piece `ΣH*(V', [γ])` the piece coaction is `piece` if given,
/// otherwise the one induced by a lift `f'` of the point through `γ`
/// (the least lift in matrix order), or the trivial coaction if none exists.
pub fn check_restriction(
    k: &LayeredAlgebra,
    kappa: &Coaction,
    piece: Option<&Coaction>,
    max_degree: usize,
    caps: &Caps,
) -> Result<RestrictionReport> {
    if kappa.ambient_vars() != k.base_dim {
        return Err(Error::DimMismatch {
            context: "coaction ambient variables",
            expected: k.base_dim,
            found: kappa.ambient_vars(),
        });
    }
    let mut report = RestrictionReport {
        mode: RestrictionMode::Invariants,
        base_names: kappa.ambient_names.clone(),
        piece_names: Vec::new(),
        coefficient_names: kappa.coefficient_names.clone(),
        witnesses: Vec::new(),
    };
    if let Some(emb) = &k.ambient_embedding {
        report.mode = RestrictionMode::Subalgebra;
        check_subalgebra(&emb.generators, kappa, max_degree, caps, &mut report)?;
        return Ok(report);
    }
    let g = k.group(caps)?;
    check_invariance(&g, kappa, max_degree, caps, &mut report)?;
    let pieces: Vec<_> = k.pieces().collect();
    match pieces.as_slice() {
        [] => Ok(report),
        [(1, Side::Kernel, m)] if matches!(m.kind, PieceKind::Full) && m.suspension == 1 => {
            report.mode = RestrictionMode::SquareZero;
            report.piece_names = m.var_names.clone();
            let owned;
            let kappa_m = match piece {
                Some(p) => p,
                None => {
                    owned = induced_piece_coaction(kappa, &m.gamma, &m.var_names)?;
                    &owned
                }
            };
            check_square_zero(&g, &m.gamma, kappa, kappa_m, max_degree, caps, &mut report)?;
            Ok(report)
        }
        _ => Err(Error::UnsupportedPresentation(
            "comodule checks need an ambient embedding, or a single level-1 kernel piece of kind full with suspension 1"
                .into(),
        )),
    }
}

/// The linear part `f` of a coaction of the form `a ↦ a⊗1 + 1⊗(a∘f)`.
pub fn linear_part(kappa: &Coaction) -> Option<F2Matrix> {
    let n = kappa.ambient_vars();
    let c = kappa.coefficient_vars();
    let total = n + c;
    let mut f = F2Matrix::zeros(n, c);
    for (i, img) in kappa.images.iter().enumerate() {
        let rest = img.try_add(&Polynomial::var(total, i)).ok()?;
        for m in rest.terms() {
            let j = m.iter().position(|&e| e == 1)?;
            if j < n || m.iter().sum::<u32>() != 1 {
                return None;
            }
            f.set(i, j - n, true);
        }
    }
    Some(f)
}

/// Coaction on `H*(V')` from the least `f'` with `γ∘f' = f`, or trivial.
pub fn induced_piece_coaction(
    kappa: &Coaction,
    gamma: &F2Matrix,
    names: &[String],
) -> Result<Coaction> {
    let f = linear_part(kappa).ok_or_else(|| {
        Error::UnsupportedPresentation(
            "base coaction is not affine on linear forms; give piece_images".into(),
        )
    })?;
    let lift = crate::f2::enumerate_maps(f.cols(), gamma.cols(), &Caps::default())?
        .into_iter()
        .find(|l| gamma * l == f);
    let mut out = match lift {
        Some(l) => Coaction::from_point(names, &l)?,
        None => Coaction::trivial(names, f.cols()),
    };
    out.coefficient_names = kappa.coefficient_names.clone();
    Ok(out)
}

fn check_subalgebra(
    gens: &[Polynomial],
    kappa: &Coaction,
    max_degree: usize,
    caps: &Caps,
    report: &mut RestrictionReport,
) -> Result<()> {
    let n = kappa.ambient_vars();
    for p in gens {
        let Some(d) = p.homogeneous_degree() else {
            continue;
        };
        if d > max_degree {
            continue;
        }
        let image = kappa.apply(p)?;
        let mut failing = Vec::new();
        for (e, part) in image.split_tensor(n) {
            let Some(pd) = part.homogeneous_degree() else {
                return Err(Error::Inhomogeneous);
            };
            if !subalgebra_membership(&part, gens, pd, caps)? {
                failing.push(e);
            }
        }
        if !failing.is_empty() {
            report.witnesses.push(RestrictionWitness::NotInSubalgebra {
                generator: p.clone(),
                image,
                failing,
            });
        }
    }
    Ok(())
}

fn check_invariance(
    g: &Subgroup,
    kappa: &Coaction,
    max_degree: usize,
    caps: &Caps,
    report: &mut RestrictionReport,
) -> Result<()> {
    let n = kappa.ambient_vars();
    for basis in invariants_upto(g, max_degree, caps)? {
        for p in basis {
            let image = kappa.apply(&p)?;
            let invariant = image.split_tensor(n).values().all(|part| {
                g.elements()
                    .iter()
                    .all(|h| pullback(h, part).is_ok_and(|q| q == *part))
            });
            if !invariant {
                report
                    .witnesses
                    .push(RestrictionWitness::NotInvariant { element: p, image });
            }
        }
    }
    Ok(())
}

fn check_square_zero(
    g: &Subgroup,
    gamma: &F2Matrix,
    kappa: &Coaction,
    kappa_m: &Coaction,
    max_degree: usize,
    caps: &Caps,
    report: &mut RestrictionReport,
) -> Result<()> {
    let c = kappa.coefficient_vars();
    if kappa_m.coefficient_vars() != c || kappa_m.ambient_vars() != gamma.cols() {
        return Err(Error::DimMismatch {
            context: "piece coaction",
            expected: gamma.cols(),
            found: kappa_m.ambient_vars(),
        });
    }
    let n2 = gamma.cols();
    let forms = pullback_forms(gamma);
    // γ*⊗id on tensors
    let gamma_tensor: Vec<Polynomial> = forms
        .iter()
        .map(|f| f.embed(n2 + c, 0))
        .chain((0..c).map(|j| Polynomial::var(n2 + c, n2 + j)))
        .collect();
    let invariants = invariants_upto(g, max_degree, caps)?;
    for (i, basis) in invariants.iter().enumerate() {
        for x in basis {
            let kx = kappa.apply(x)?.substitute(&gamma_tensor, n2 + c);
            let gx = x.substitute(&forms, n2);
            for j in 0..=(max_degree - i) {
                for mono in MonomialBasis::new(n2, j).monomials() {
                    let m = Polynomial::monomial(mono.clone());
                    let lhs = kappa_m.apply(&(&gx * &m))?;
                    let rhs = &kx * &kappa_m.apply(&m)?;
                    if lhs != rhs {
                        report
                            .witnesses
                            .push(RestrictionWitness::NotMultiplicative {
                                x: x.clone(),
                                m,
                                difference: &lhs + &rhs,
                                lhs,
                                rhs,
                            });
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::default_var_names;

    fn names(n: usize) -> Vec<String> {
        default_var_names(n)
    }

    fn col(bits: &[u8]) -> F2Matrix {
        F2Matrix::column_vector(bits).unwrap()
    }

    #[test]
    fn from_point_examples() {
        let k = Coaction::from_point(&names(3), &col(&[1, 0, 0])).unwrap();
        let file = CoactionFile::from_coaction(&k);
        assert_eq!(file.images["u"], "u + t");
        assert_eq!(file.images["v"], "v");
        assert_eq!(file.images["w"], "w");
        let y = Coaction::from_point(&names(2), &col(&[0, 1])).unwrap();
        let file = CoactionFile::from_coaction(&y);
        assert_eq!(file.images["u"], "u");
        assert_eq!(file.images["v"], "v + t");
        let zero = Coaction::from_point(&names(2), &F2Matrix::zeros(2, 1)).unwrap();
        assert_eq!(zero, Coaction::trivial(&names(2), 1));
        assert!(matches!(
            Coaction::from_point(&names(2), &col(&[1, 0, 0])),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let k = Coaction::from_point(&names(3), &col(&[1, 0, 0])).unwrap();
        let u3 = Polynomial::parse("u^3", &names(3)).unwrap();
        let img = k.apply(&u3).unwrap();
        assert_eq!(k.render(&img), "u^3⊗1 + u^2⊗t + u⊗t^2 + 1⊗t^3");
        assert_eq!(
            compact_unicode(&render_tensor(&img, &names(3), &["u".to_string()], false)),
            "u³⊗1+u²⊗u+u⊗u²+1⊗u³"
        );
        assert_eq!(k.render(&k.apply(&Polynomial::one(3)).unwrap()), "1⊗1");
        let k2 = Coaction::from_point(&names(2), &col(&[1, 0])).unwrap();
        let q = Polynomial::parse("u*(u+v)", &names(2)).unwrap();
        assert_eq!(
            k2.render(&k2.apply(&q).unwrap()),
            "(u^2 + u*v)⊗1 + v⊗t + 1⊗t^2"
        );
        assert!(matches!(k2.apply(&u3), Err(Error::VarMismatch { .. })));
    }

    #[test]
    fn axioms() {
        let k = Coaction::from_point(&names(3), &col(&[1, 1, 0])).unwrap();
        assert!(k.check_axioms(5).passed());
        assert!(Coaction::trivial(&names(2), 1).check_axioms(5).passed());
        let file = CoactionFile {
            coefficient_vars: vec!["t".into()],
            images: [("u", "u + t^2"), ("v", "v")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            piece_images: None,
        };
        let bad = file.parse(&names(2)).unwrap();
        let report = bad.check_axioms(3);
        assert_eq!(
            report.first(Axiom::SteenrodLinearity).unwrap().monomial,
            "u"
        );
    }

    #[test]
    fn linear_part_roundtrip() {
        let f = F2Matrix::from_rows(&[vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        let k = Coaction::from_point(&names(3), &f).unwrap();
        assert_eq!(linear_part(&k), Some(f));
    }

    #[test]
    fn file_rejects_clashing_names() {
        let file = CoactionFile {
            coefficient_vars: vec!["u".into()],
            images: BTreeMap::new(),
            piece_images: None,
        };
        assert!(matches!(file.parse(&names(2)), Err(Error::Parse(_))));
    }
}
