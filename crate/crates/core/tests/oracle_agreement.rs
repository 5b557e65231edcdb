use centre_core::centers::{ck, module_central_sub, sub_contained};
use centre_core::f2::{enumerate_maps, orbits, Caps, F2Matrix, Subgroup};
use centre_core::oracle::{rho_check, sub_falsifier, Witness};
use centre_core::poly::{default_var_names, MonomialBasis, Polynomial};
use centre_core::presentation::{
    derive_var_names, realize_slice, InducedModule, LayeredAlgebra, PieceKind, SKPoint,
};

fn load(name: &str) -> LayeredAlgebra {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    LayeredAlgebra::from_json_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn rho_agrees_with_centre_on_examples() {
    let caps = Caps::default();
    for name in ["ex1.json", "ex2.json", "ex3.json", "ex4.json"] {
        let k = load(name);
        let g = k.group(&caps).unwrap();
        for w in 0..=2 {
            for o in orbits(&g, w, &caps).unwrap() {
                let pt = SKPoint::new(o);
                let report = rho_check(&k, &pt, 6, &caps).unwrap();
                let central = ck(&k, k.depth(), &pt, &caps).unwrap();
                assert_eq!(
                    report.all_equal(),
                    central,
                    "{name} {}: {:?}",
                    pt.label(),
                    report.per_degree
                );
            }
        }
    }
}

#[test]
fn rho_examples() {
    let caps = Caps::default();
    let x = F2Matrix::column_vector(&[1, 0]).unwrap();
    let k2 = load("ex2.json");
    let pt = SKPoint::from_map(&k2.group(&caps).unwrap(), &x);
    assert!(rho_check(&k2, &pt, 4, &caps).unwrap().all_equal());

    let k1 = load("ex1.json");
    let pt = SKPoint::from_map(&k1.group(&caps).unwrap(), &x);
    let r = rho_check(&k1, &pt, 4, &caps).unwrap();
    assert_eq!(r.lifts, 2);
    assert_eq!(r.first_mismatch(), Some(1));
    assert!(r.per_degree.iter().skip(1).all(|c| !c.ok));

    for name in ["ex1.json", "ex2.json", "ex3.json", "ex4.json"] {
        let k = load(name);
        let zero = SKPoint::from_map(&k.group(&caps).unwrap(), &F2Matrix::zeros(k.base_dim, 0));
        assert!(
            rho_check(&k, &zero, 8, &caps).unwrap().all_equal(),
            "{name}"
        );
    }
}

#[test]
fn realize_slice_of_example_four() {
    // F₂[v,w] ⊕ u²F₂[u,v,w]: (1,2,3,4) + (0,0,1,3)
    let k = load("ex4.json");
    assert_eq!(
        realize_slice(&k, 3, &Caps::default()).unwrap().dims,
        vec![1, 2, 4, 7]
    );
}

#[test]
fn point_count_matches_hom_set_for_trivial_group() {
    let caps = Caps::default();
    for n in 1..=3 {
        let t = Subgroup::trivial(n);
        for w in 0..=2 {
            assert_eq!(orbits(&t, w, &caps).unwrap().len(), 1 << (n * w));
        }
    }
}

fn sub_piece(gamma: F2Matrix, generators: Vec<Polynomial>) -> InducedModule {
    let names = derive_var_names(&gamma, &default_var_names(gamma.rows()));
    InducedModule {
        suspension: 1,
        source_dim: gamma.cols(),
        kind: PieceKind::Sub { generators },
        gamma,
        var_names: names,
    }
}

/// Small generator families: single monomials, pulled-back forms and their products.
fn generator_families(gamma: &F2Matrix) -> Vec<Vec<Polynomial>> {
    let n = gamma.cols();
    let mut out = Vec::new();
    for d in 1..=2 {
        for m in MonomialBasis::new(n, d).monomials() {
            out.push(vec![Polynomial::monomial(m.clone())]);
        }
    }
    let forms = centre_core::poly::pullback_forms(gamma);
    for f in &forms {
        if !f.is_zero() {
            out.push(vec![f.clone()]);
            out.push(vec![f.square()]);
        }
    }
    if forms.len() >= 2 {
        out.push(vec![&forms[0] * &forms[1]]);
    }
    out
}

#[test]
fn falsifier_agrees_with_sub_criterion() {
    let caps = Caps::default();
    let mut witnesses = 0;
    let mut silent = 0;
    for u in 1..=3 {
        let t = Subgroup::trivial(u);
        for src in 1..=3 {
            for gamma in enumerate_maps(src, u, &caps).unwrap() {
                for gens in generator_families(&gamma) {
                    let piece = sub_piece(gamma.clone(), gens);
                    let contained = sub_contained(&piece, &caps).unwrap();
                    for w in 1..=2 {
                        for o in orbits(&t, w, &caps).unwrap() {
                            let pt = SKPoint::new(o);
                            let accepted = module_central_sub(&t, &piece, &pt, &caps).unwrap();
                            let witness = sub_falsifier(&piece, &pt, 6, &caps).unwrap();
                            assert_eq!(
                                witness.is_some(),
                                !accepted,
                                "γ={:?} contained={contained} {}: {witness:?}",
                                gamma.to_rows(),
                                pt.label()
                            );
                            match &witness {
                                Some(Witness::NoLift { .. }) => {
                                    assert!(!gamma.image_contains(pt.psi()))
                                }
                                Some(Witness::NonUnique { difference, .. }) => {
                                    assert!(!difference.is_zero())
                                }
                                None => {}
                            }
                            if witness.is_some() {
                                witnesses += 1;
                            } else {
                                silent += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(witnesses > 0 && silent > 0);
}
