//! Brute-force checks at desk scale: lift enumeration, degreewise comparison
//! of `K` with its component `T_{(W,ψ)}(K)`, and a falsifier for Sub pieces.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::f2::{enumerate_maps, Caps, F2Matrix, Subgroup};
use crate::poly::{
    coefficient_var_names, default_var_names, invariants_upto, pullback, Polynomial,
};
use crate::presentation::{realize_slice, InducedModule, LayeredAlgebra, PieceKind, SKPoint, Side};

/// Maps `f : W → V'` with `γ∘f` in the orbit of `ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub lifts: Vec<F2Matrix>,
    pub count: usize,
}

pub fn lift_count(
    g: &Subgroup,
    piece: &InducedModule,
    pt: &SKPoint,
    caps: &Caps,
) -> Result<LiftReport> {
    if piece.gamma.rows() != g.ambient_dim() {
        return Err(Error::DimMismatch {
            context: "lift_count",
            expected: g.ambient_dim(),
            found: piece.gamma.rows(),
        });
    }
    let mut lifts = Vec::new();
    for f in enumerate_maps(pt.dim_w, piece.source_dim, caps)? {
        if pt.orbit.contains(&(&piece.gamma * &f)) {
            lifts.push(f);
        }
    }
    let count = lifts.len();
    Ok(LiftReport { lifts, count })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub d: usize,
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceLifts {
    pub level: usize,
    pub side: Side,
    pub lifts: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoReport {
    /// Total number of lifts over all pieces.
    pub lifts: usize,
    pub pieces: Vec<PieceLifts>,
    pub per_degree: Vec<DegreeCheck>,
}

impl RhoReport {
    pub fn all_equal(&self) -> bool {
        self.per_degree.iter().all(|c| c.ok)
    }

    pub fn first_mismatch(&self) -> Option<usize> {
        self.per_degree.iter().find(|c| !c.ok).map(|c| c.d)
    }
}

/// Degreewise dims of the `(W,[ψ])`-component of `T_W(K)` against those of `K`,
/// in degrees `0..=max_degree`.
pub fn rho_check(
    k: &LayeredAlgebra,
    pt: &SKPoint,
    max_degree: usize,
    caps: &Caps,
) -> Result<RhoReport> {
    if k.pieces().any(|(_, _, p)| !p.is_full()) {
        return Err(Error::UnsupportedSubPiece);
    }
    let g = k.group(caps)?;
    let stab = g.stabilizer(pt.psi());
    let mut lhs: Vec<i64> = invariants_upto(&stab, max_degree, caps)?
        .iter()
        .map(|b| b.len() as i64)
        .collect();
    let mut pieces = Vec::new();
    for (level, side, piece) in k.pieces() {
        let report = lift_count(&g, piece, pt, caps)?;
        pieces.push(PieceLifts {
            level,
            side,
            lifts: report.count,
        });
        let sign = match side {
            Side::Kernel => 1,
            Side::Cokernel => -1,
        };
        let s = piece.suspension;
        if s > max_degree {
            continue;
        }
        for (d, m) in piece.module_dims(max_degree - s).into_iter().enumerate() {
            lhs[d + s] += sign * (report.count * m) as i64;
        }
    }
    let rhs = realize_slice(k, max_degree, caps)?;
    let per_degree = lhs
        .into_iter()
        .zip(rhs.dims)
        .enumerate()
        .map(|(d, (l, r))| DegreeCheck {
            d,
            lhs: l,
            rhs: r as i64,
            ok: l == r as i64,
        })
        .collect();
    Ok(RhoReport {
        lifts: pieces.iter().map(|p| p.lifts).sum(),
        pieces,
        per_degree,
    })
}

/// Evidence that a Sub piece is not central at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// A linear form on `U` vanishing on `Im γ` but not on `Im ψ`.
    NoLift { form: Polynomial },
    /// `φ_α*(generator) − φ_0*(generator) = difference ≠ 0`.
    NonUnique {
        alpha: F2Matrix,
        generator: Polynomial,
        difference: Polynomial,
        names: Vec<String>,
    },
}

impl Witness {
    pub fn describe(&self) -> String {
        match self {
            Witness::NoLift { form } => {
                let names = default_var_names(form.num_vars());
                format!(
                    "no lift: {} vanishes on Im γ but not on Im ψ",
                    form.display_with(&names)
                )
            }
            Witness::NonUnique {
                alpha,
                generator,
                difference,
                names,
            } => format!(
                "α={:?}: φ_α*({}) − φ_0*({}) = {}",
                alpha.to_rows(),
                generator.display_with(names),
                generator.display_with(names),
                difference.display_with(names)
            ),
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Witness::NoLift { form } => {
                let mut st = s.serialize_struct("Witness", 2)?;
                st.serialize_field("kind", "no_lift")?;
                st.serialize_field(
                    "form",
                    &form.display_with(&default_var_names(form.num_vars())),
                )?;
                st.end()
            }
            Witness::NonUnique {
                alpha,
                generator,
                difference,
                names,
            } => {
                let mut st = s.serialize_struct("Witness", 4)?;
                st.serialize_field("kind", "non_unique")?;
                st.serialize_field("alpha", alpha)?;
                st.serialize_field("generator", &generator.display_with(names))?;
                st.serialize_field("difference", &difference.display_with(names))?;
                st.end()
            }
        }
    }
}

/// Pulls the Sub generators back along `φ_α = [id | φ+α] : V'⊕W → V'` for
/// `α : W → ker γ` and reports the first generator whose image depends on `α`.
pub fn sub_falsifier(
    piece: &InducedModule,
    pt: &SKPoint,
    max_degree: usize,
    caps: &Caps,
) -> Result<Option<Witness>> {
    let PieceKind::Sub { generators } = &piece.kind else {
        return Err(Error::UnsupportedPresentation(
            "sub_falsifier needs a Sub piece".into(),
        ));
    };
    if pt.orbit.size() != 1 {
        return Err(Error::UnsupportedPresentation(
            "sub_falsifier needs a trivial group".into(),
        ));
    }
    let gamma = &piece.gamma;
    let psi = pt.psi();
    let Some(phi) = gamma.solve(psi) else {
        let forms = gamma.transpose().kernel_basis();
        let a = forms
            .column_vectors()
            .into_iter()
            .find(|a| {
                let row = F2Matrix::from_rows(std::slice::from_ref(a)).expect("row");
                !(&row * psi).is_zero()
            })
            .expect("Im ψ ⊄ Im γ");
        let coeffs: Vec<bool> = a.iter().map(|&b| b == 1).collect();
        return Ok(Some(Witness::NoLift {
            form: Polynomial::linear_form(&coeffs),
        }));
    };
    let n = piece.source_dim;
    let ker = gamma.kernel_basis();
    let mut names = piece.var_names.clone();
    names.extend(coefficient_var_names(pt.dim_w));
    let phi_map = |shift: &F2Matrix| F2Matrix::identity(n).hstack(shift).expect("same rows");
    let base_map = phi_map(&phi);
    for beta in enumerate_maps(pt.dim_w, ker.cols(), caps)? {
        let alpha = &ker * &beta;
        if alpha.is_zero() {
            continue;
        }
        let moved = phi_map(&phi.add(&alpha)?);
        for p in generators {
            if p.max_degree().is_some_and(|d| d > max_degree) {
                continue;
            }
            let before = pullback(&base_map, p)?;
            let after = pullback(&moved, p)?;
            let difference = after.try_add(&before)?;
            if !difference.is_zero() {
                return Ok(Some(Witness::NonUnique {
                    alpha,
                    generator: p.clone(),
                    difference,
                    names,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::group_closure;
    use crate::presentation::derive_var_names;

    fn m(rows: &[&[u8]]) -> F2Matrix {
        F2Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn b2() -> Subgroup {
        group_closure(2, &[m(&[&[1, 1], &[0, 1]])], &Caps::default()).unwrap()
    }

    fn full(gamma: F2Matrix) -> InducedModule {
        InducedModule::full(1, gamma, &default_var_names(2))
    }

    fn sub(gamma: F2Matrix, gens: &[&str]) -> InducedModule {
        let names = derive_var_names(&gamma, &default_var_names(gamma.rows()));
        InducedModule {
            suspension: 1,
            source_dim: gamma.cols(),
            kind: PieceKind::Sub {
                generators: gens
                    .iter()
                    .map(|s| Polynomial::parse(s, &names).unwrap())
                    .collect(),
            },
            gamma,
            var_names: names,
        }
    }

    #[test]
    fn lift_count_examples() {
        let c = Caps::default();
        let g = b2();
        let x = SKPoint::from_map(&g, &m(&[&[1], &[0]]));
        let pi = full(m(&[&[1, 0, 0], &[0, 1, 0]]));
        let r = lift_count(&g, &pi, &x, &c).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(
            r.lifts,
            vec![m(&[&[1], &[0], &[0]]), m(&[&[1], &[0], &[1]])]
        );
        assert_eq!(
            lift_count(&g, &full(F2Matrix::identity(2)), &x, &c)
                .unwrap()
                .count,
            1
        );
        assert_eq!(
            lift_count(&g, &full(m(&[&[0], &[1]])), &x, &c)
                .unwrap()
                .count,
            0
        );
    }

    #[test]
    fn falsifier_examples() {
        let c = Caps::default();
        let t = Subgroup::trivial(2);
        let x = SKPoint::from_map(&t, &m(&[&[1], &[0]]));
        let pi = m(&[&[1, 0, 0], &[0, 1, 0]]);
        let w = sub_falsifier(&sub(pi.clone(), &["u", "v", "w"]), &x, 4, &c)
            .unwrap()
            .unwrap();
        match &w {
            Witness::NonUnique {
                alpha,
                generator,
                difference,
                names,
            } => {
                assert_eq!(*alpha, m(&[&[0], &[0], &[1]]));
                assert_eq!(generator.display_with(names), "w");
                assert_eq!(difference.display_with(names), "t");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(sub_falsifier(&sub(pi, &["u"]), &x, 4, &c).unwrap(), None);
        let iota = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            sub_falsifier(&sub(iota, &["u*v", "v^3"]), &x, 4, &c).unwrap(),
            None
        );
        let iota_y = m(&[&[0], &[1]]);
        let nolift = sub_falsifier(&sub(iota_y, &["1"]), &x, 4, &c)
            .unwrap()
            .unwrap();
        assert_eq!(
            nolift,
            Witness::NoLift {
                form: Polynomial::var(2, 0)
            }
        );
    }

    #[test]
    fn witness_json() {
        let w = Witness::NonUnique {
            alpha: m(&[&[0], &[0], &[1]]),
            generator: Polynomial::var(4, 2),
            difference: Polynomial::var(4, 3),
            names: vec!["u".into(), "v".into(), "w".into(), "t".into()],
        };
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"kind":"non_unique","alpha":[[0],[0],[1]],"generator":"w","difference":"t"}"#
        );
    }
}
