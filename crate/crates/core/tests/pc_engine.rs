mod common;

use common::*;
use pgx_core::pc::{parse_pc_presentation, PcBuilder, PcElement, PcPresentation, RelOrder};
use pgx_core::{Error, Group};
use rand::Rng;

fn random_element(g: &PcPresentation, rng: &mut rand_chacha::ChaCha8Rng) -> PcElement {
    let exps = g
        .gens()
        .iter()
        .map(|x| rng.gen_range(0..x.order.finite().unwrap()))
        .collect();
    PcElement { exps }
}

#[test]
fn heisenberg_matches_unitriangular_matrices() {
    let h = heisenberg_pc();
    let m = UniTri { p: 3 };
    let images = [(1, 0, 0), (0, 1, 0), (0, 0, 2)];
    // b^a = b c  <=>  the matrix images satisfy the same relation
    let lhs = m.conj(&images[1], &images[0]);
    assert_eq!(lhs, m.mul(&images[1], &images[2]));
    let mut r = rng(7);
    for _ in 0..300 {
        let w = random_word(&mut r, 3, 12);
        let x = h.collect(&w);
        let y = eval_word(&m, &images, &w);
        let back = eval_word(&m, &images, &x.syllables());
        assert_eq!(y, back, "word {w:?}");
    }
    let ab = h.collect(&[(0, 1), (1, 1)]);
    assert!(h.power_elem(&ab, 3).is_identity());
    assert_eq!(h.element_order(&ab).unwrap(), 3);
    assert_eq!(h.element_order(&h.generator(2)).unwrap(), 3);
    assert_eq!(h.commutator(&h.generator(1), &h.generator(0)), h.generator(2));
}

#[test]
fn heisenberg_brute_force_associativity() {
    let h = heisenberg_pc();
    assert!(h.is_consistent().is_consistent());
    let all = h.elements().unwrap();
    assert_eq!(all.len(), 27);
    for x in &all {
        for y in &all {
            let xy = h.multiply(x, y);
            for z in &all {
                assert_eq!(h.multiply(&xy, z), h.multiply(x, &h.multiply(y, z)));
            }
        }
    }
}

#[test]
fn perturbed_presentation_reports_witness() {
    let mut b = PcBuilder::new(3);
    let a = b.gen("a", RelOrder::Finite(3), 1);
    let bb = b.gen("b", RelOrder::Finite(3), 1);
    let c = b.gen("c", RelOrder::Finite(3), 2);
    b.conj(bb, a, vec![(bb, 1), (c, 1)]);
    // a^3 = b cannot hold: a commutes with a^3 but not with b
    b.power(a, vec![(bb, 1)]);
    let g = b.build().unwrap();
    let rep = g.is_consistent();
    assert!(!rep.is_consistent());
    let w = rep.witness().unwrap();
    assert_ne!(w.left, w.right);
    // the brute-force oracle finds a non-associative triple as well
    let all = g.elements().unwrap();
    let bad = all.iter().any(|x| {
        all.iter().any(|y| {
            all.iter()
                .any(|z| g.multiply(&g.multiply(x, y), z) != g.multiply(x, &g.multiply(y, z)))
        })
    });
    assert!(bad);
}

#[test]
fn tail_with_lower_index_is_structural_error() {
    let mut b = PcBuilder::new(3);
    let a = b.gen("a", RelOrder::Finite(3), 1);
    let bb = b.gen("b", RelOrder::Finite(3), 1);
    b.power(bb, vec![(a, 1)]);
    assert!(matches!(b.build(), Err(Error::Structural(_))));
}

#[test]
fn cyclic_27_chained_powers() {
    let g = parse_pc_presentation(
        "pcgroup C27\nprime 3\ngen g1 order 3 weight 1\ngen g2 order 3 weight 1\ngen g3 order 3 weight 1\nrelation g1^3 = g2\nrelation g2^3 = g3\n",
    )
    .unwrap();
    assert_eq!(g.power_elem(&g.generator(0), 9), g.generator(2));
    assert_eq!(g.order().finite(), Some(27));
    assert_eq!(g.element_order(&g.generator(0)).unwrap(), 27);
}

#[test]
fn wreath_product_against_permutations() {
    let g = wreath33_pc();
    assert!(g.is_consistent().is_consistent());
    assert_eq!(g.order().finite(), Some(81));
    let (pg, t, a) = wreath33_perms();
    let b = pg.comm(&a, &t);
    let c = pg.comm(&b, &t);
    let images = vec![t.clone(), a.clone(), b, c];
    // relations hold in the permutation group, and both groups have order 81
    assert_eq!(enumerate(&pg, &[t.clone(), a.clone()]).len(), 81);
    let mut r = rng(11);
    for _ in 0..300 {
        let w = random_word(&mut r, 4, 10);
        let x = g.collect(&w);
        assert_eq!(eval_word(&pg, &images, &w), eval_word(&pg, &images, &x.syllables()));
        let ox = g.element_order(&x).unwrap() as u64;
        assert_eq!(ox, naive_order(&pg, &eval_word(&pg, &images, &w)));
    }
    let ta = g.collect(&[(0, 1), (1, 1)]);
    assert_eq!(g.element_order(&ta).unwrap(), 9);
}

#[test]
fn random_associativity_and_inverses() {
    let g = wreath33_pc();
    let mut r = rng(3);
    for _ in 0..1000 {
        let x = random_element(&g, &mut r);
        let y = random_element(&g, &mut r);
        let z = random_element(&g, &mut r);
        assert_eq!(g.multiply(&g.multiply(&x, &y), &z), g.multiply(&x, &g.multiply(&y, &z)));
        assert!(g.multiply(&x, &g.invert(&x)).is_identity());
        assert_eq!(g.collect(&x.syllables()), x);
    }
}

#[test]
fn subgroups_and_closures() {
    let h = heisenberg_pc();
    let (a, b, c) = (h.generator(0), h.generator(1), h.generator(2));
    assert_eq!(h.subgroup_order(&h.subgroup_span(std::slice::from_ref(&c)).unwrap()).finite(), Some(3));
    let bc = h.subgroup_span(&[b.clone(), c.clone()]).unwrap();
    assert_eq!(h.subgroup_order(&bc).finite(), Some(9));
    assert!(h.contains(&bc, &c));
    assert!(!h.contains(&bc, &a));
    let nb = h.normal_closure(std::slice::from_ref(&b)).unwrap();
    assert_eq!(h.subgroup_order(&nb).finite(), Some(9));
    let nc = h.normal_closure(std::slice::from_ref(&c)).unwrap();
    assert_eq!(h.subgroup_order(&nc).finite(), Some(3));

    let w = wreath33_pc();
    let derived = w.commutator_subgroup(&w.whole(), &w.whole()).unwrap();
    assert_eq!(w.subgroup_order(&derived).finite(), Some(9));
    let base = w.normal_closure(&[w.generator(1)]).unwrap();
    assert_eq!(w.subgroup_order(&base).finite(), Some(27));
    let q = w.quotient(&base).unwrap();
    assert_eq!(q.group.order().finite(), Some(3));
    let hq = h.quotient(&nc).unwrap();
    assert_eq!(hq.group.order().finite(), Some(9));
    assert!(hq.group.commutator(&hq.group.generator(0), &hq.group.generator(1)).is_identity());
    assert_eq!(h.quotient(&h.whole()).unwrap().group.order().finite(), Some(1));
    // not normal: <a> in the Heisenberg group
    let sa = h.subgroup_span(&[a]).unwrap();
    assert!(matches!(h.quotient(&sa), Err(Error::NotNormal(_))));
}

#[test]
fn spans_are_closed_and_presentable() {
    let w = wreath33_pc();
    let mut r = rng(5);
    for _ in 0..30 {
        let s: Vec<PcElement> = (0..2).map(|_| random_element(&w, &mut r)).collect();
        let h = w.subgroup_span(&s).unwrap();
        for u in h.gens() {
            for v in h.gens() {
                assert!(w.contains(&h, &w.multiply(u, v)));
                assert!(w.contains(&h, &w.conjugate(u, v)));
            }
            assert!(w.contains(&h, &w.power_elem(u, 3)));
        }
        let elems = w.subgroup_elements(&h).unwrap();
        assert_eq!(elems.len() as u128, w.subgroup_order(&h).torsion_part);
        let sub = w.subgroup_presentation(&h).unwrap();
        assert!(sub.is_consistent().is_consistent());
        assert_eq!(sub.order(), w.subgroup_order(&h));
    }
}

#[test]
fn refinement_to_prime_steps() {
    let mut b = PcBuilder::new(3);
    let a = b.gen("a", RelOrder::Finite(9), 1);
    let t = b.gen("t", RelOrder::Finite(3), 1);
    let _ = (a, t);
    let g = b.build().unwrap();
    let r = g.refine_to_prime_steps().unwrap();
    assert_eq!(r.group.len(), 3);
    assert!(r.group.has_prime_steps());
    assert!(r.group.is_consistent().is_consistent());
    let x = g.collect(&[(0, 5), (1, 2)]);
    assert_eq!(r.to_original(&r.to_refined(&x)), x);
}

#[test]
fn text_round_trip() {
    let w = wreath33_pc();
    let text = w.to_string();
    let back = parse_pc_presentation(&text).unwrap();
    assert_eq!(back, w);
    let err = parse_pc_presentation("prime 3\ngen a order 3 weight 1\nrelation b^a = b\n").unwrap_err();
    assert!(matches!(err, Error::UndeclaredGenerator { .. }));
}

#[test]
fn enumerate_and_count() {
    for g in [heisenberg_pc(), wreath33_pc()] {
        let all = g.elements().unwrap();
        let set: std::collections::HashSet<_> = all.iter().map(|x| g.collect(&x.syllables())).collect();
        assert_eq!(set.len() as u128, g.order().torsion_part);
    }
}
