use std::collections::BTreeSet;

use proptest::prelude::*;

use centre_core::comodule::Coaction;
use centre_core::f2::{
    enumerate_maps, fixed_space, group_closure, orbits, Caps, F2Matrix, Subgroup,
};
use centre_core::poly::{
    default_var_names, invariants_upto, pullback, sq, sq_additive, MonomialBasis, Polynomial,
};
use centre_core::presentation::{validate, LayeredAlgebra};

fn matrix(rows: usize, cols: usize, bits: u64) -> F2Matrix {
    let mut m = F2Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if bits >> (r * cols + c) & 1 == 1 {
                m.set(r, c, true);
            }
        }
    }
    m
}

fn poly(n: usize, d: usize, mask: u64) -> Polynomial {
    let b = MonomialBasis::new(n, d);
    Polynomial::from_monomials(
        n,
        b.monomials()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, m)| m.clone()),
    )
}

fn homogeneous() -> impl Strategy<Value = Polynomial> {
    (1usize..=3, 0usize..=8, any::<u64>()).prop_map(|(n, d, mask)| poly(n, d, mask))
}

fn pair_in(n: usize) -> impl Strategy<Value = (Polynomial, Polynomial)> {
    (0usize..=4, 0usize..=4, any::<u64>(), any::<u64>())
        .prop_map(move |(a, b, x, y)| (poly(n, a, x), poly(n, b, y)))
}

fn invertible(n: usize) -> impl Strategy<Value = F2Matrix> {
    any::<u64>()
        .prop_map(move |bits| matrix(n, n, bits))
        .prop_filter("invertible", move |m| m.rank() == n)
}

fn subgroup3() -> impl Strategy<Value = Subgroup> {
    prop::collection::vec(invertible(3), 0..=2)
        .prop_map(|gens| group_closure(3, &gens, &Caps::default()).unwrap())
}

/// `Sq^i p` read off the total square `x ↦ x + x²`.
fn total_square_part(p: &Polynomial, i: usize) -> Polynomial {
    let n = p.num_vars();
    let images: Vec<Polynomial> = (0..n)
        .map(|j| {
            let x = Polynomial::var(n, j);
            &x + &x.square()
        })
        .collect();
    let d = p.homogeneous_degree().unwrap_or(0) + i;
    p.substitute(&images, n)
        .homogeneous_parts()
        .remove(&d)
        .unwrap_or_else(|| Polynomial::zero(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_is_a_group(g in subgroup3()) {
        let elems: BTreeSet<&F2Matrix> = g.elements().iter().collect();
        prop_assert!(elems.contains(&F2Matrix::identity(3)));
        for a in g.elements() {
            for b in g.elements() {
                prop_assert!(g.contains(&(a * b)));
            }
        }
        prop_assert_eq!(168 % g.order(), 0);
    }

    #[test]
    fn orbits_partition_hom_sets(g in subgroup3(), w in 0usize..=2) {
        let caps = Caps::default();
        let os = orbits(&g, w, &caps).unwrap();
        let total: usize = os.iter().map(|o| o.size()).sum();
        prop_assert_eq!(total, 1 << (3 * w));
        let mut seen = BTreeSet::new();
        for o in &os {
            prop_assert_eq!(g.order() % o.size(), 0);
            for m in &o.members {
                prop_assert!(seen.insert(m.clone()));
            }
        }
    }

    #[test]
    fn fixed_space_is_exactly_the_fixed_vectors(g in subgroup3()) {
        let caps = Caps::default();
        let fixed = fixed_space(&g);
        let brute = enumerate_maps(1, 3, &caps)
            .unwrap()
            .into_iter()
            .filter(|v| g.elements().iter().all(|h| &(h * v) == v))
            .count();
        prop_assert_eq!(brute, 1 << fixed.cols());
        for h in g.elements() {
            prop_assert_eq!(&(h * &fixed), &fixed);
        }
    }

    #[test]
    fn steenrod_axioms(p in homogeneous(), extra in 0usize..=8, mask in any::<u64>()) {
        let n = p.num_vars();
        let dp = p.homogeneous_degree().unwrap_or(0);
        let q = poly(n, extra.min(8 - dp.min(8)), mask);
        let dq = q.homogeneous_degree().unwrap_or(0);
        prop_assert_eq!(sq(0, &p).unwrap(), p.clone());
        prop_assert_eq!(sq(dp, &p).unwrap(), p.square());
        prop_assert!(sq(dp + 1, &p).unwrap().is_zero());
        for i in 0..=dp {
            prop_assert_eq!(sq(i, &p).unwrap(), total_square_part(&p, i));
        }
        let pq = &p * &q;
        for k in 0..=dp + dq {
            let mut rhs = Polynomial::zero(n);
            for i in 0..=k {
                rhs.add_assign(&(&sq(i, &p).unwrap() * &sq(k - i, &q).unwrap()));
            }
            prop_assert_eq!(sq(k, &pq).unwrap(), rhs);
        }
    }

    #[test]
    fn pullback_is_functorial_and_natural(
        p in homogeneous(),
        a_bits in any::<u64>(),
        b_bits in any::<u64>(),
        mid in 1usize..=3,
        last in 1usize..=3,
    ) {
        let a = matrix(p.num_vars(), mid, a_bits);
        let b = matrix(mid, last, b_bits);
        let once = pullback(&(&a * &b), &p).unwrap();
        let twice = pullback(&b, &pullback(&a, &p).unwrap()).unwrap();
        prop_assert_eq!(once, twice);
        let d = p.homogeneous_degree().unwrap_or(0);
        for i in 0..=d {
            prop_assert_eq!(
                pullback(&a, &sq(i, &p).unwrap()).unwrap(),
                sq_additive(i, &pullback(&a, &p).unwrap())
            );
        }
    }

    #[test]
    fn coaction_is_a_ring_map((p, q) in pair_in(3), f_bits in any::<u64>(), c in 1usize..=2) {
        let k = Coaction::from_point(&default_var_names(3), &matrix(3, c, f_bits)).unwrap();
        let kp = k.apply(&p).unwrap();
        let kq = k.apply(&q).unwrap();
        prop_assert_eq!(k.apply(&(&p * &q)).unwrap(), &kp * &kq);
        prop_assert_eq!(k.apply(&(&p + &q)).unwrap(), &kp + &kq);
    }

    #[test]
    fn point_coactions_satisfy_axioms(f_bits in any::<u64>(), c in 0usize..=2) {
        let k = Coaction::from_point(&default_var_names(3), &matrix(3, c, f_bits)).unwrap();
        let report = k.check_axioms(4);
        prop_assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn invariants_are_sq_closed(g in subgroup3()) {
        let caps = Caps::default();
        let inv = invariants_upto(&g, 5, &caps).unwrap();
        for (d, basis) in inv.iter().enumerate() {
            for p in basis {
                for h in g.elements() {
                    prop_assert_eq!(&pullback(h, p).unwrap(), p);
                }
                for i in 0..=d.min(5 - d) {
                    let s = sq(i, p).unwrap();
                    for h in g.elements() {
                        prop_assert_eq!(&pullback(h, &s).unwrap(), &s);
                    }
                }
            }
        }
    }

    #[test]
    fn display_parse_roundtrip(p in homogeneous()) {
        let names = default_var_names(p.num_vars());
        let text = p.display_with(&names);
        prop_assert_eq!(Polynomial::parse(&text, &names).unwrap(), p);
    }
}

#[test]
fn b2_and_gl2_invariant_dims() {
    let caps = Caps::default();
    let b2 = group_closure(2, &[matrix(2, 2, 0b1011)], &caps).unwrap();
    assert_eq!(b2.order(), 2);
    let dims: Vec<usize> = invariants_upto(&b2, 12, &caps)
        .unwrap()
        .iter()
        .map(Vec::len)
        .collect();
    assert_eq!(dims, (0..=12).map(|d| d / 2 + 1).collect::<Vec<_>>());
    // Dickson invariants: polynomial on generators of degrees 2 and 3
    let gl = Subgroup::general_linear(2, &caps).unwrap();
    let dims: Vec<usize> = invariants_upto(&gl, 12, &caps)
        .unwrap()
        .iter()
        .map(Vec::len)
        .collect();
    let dickson: Vec<usize> = (0..=12usize)
        .map(|d| (0..=d / 2).filter(|a| (d - 2 * a) % 3 == 0).count())
        .collect();
    assert_eq!(dims, dickson);
}

#[test]
fn validation_is_idempotent_and_survives_roundtrip() {
    let caps = Caps::default();
    for name in ["ex1.json", "ex2.json", "ex3.json", "ex4.json"] {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../data")
            .join(name);
        let k = LayeredAlgebra::from_json_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        let first = validate(&k, 6, &caps);
        assert_eq!(first, validate(&k, 6, &caps));
        let again = LayeredAlgebra::from_json_str(&k.to_json_string().unwrap()).unwrap();
        assert_eq!(first, validate(&again, 6, &caps));
        assert!(first.is_valid(), "{name}: {first}");
    }
}
