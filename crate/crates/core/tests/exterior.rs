mod common;

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use pgx_core::exterior::{
    bar_h2, bar_h2_oracle, divisibility_from_cover, exponent_divisibility_verdict, miller_cover,
    relator_commutator_presentation, schur_multiplier, wedge_exponent, Claim,
};
use pgx_core::lattice::AbelianInvariants;
use pgx_core::structure::presented_group;
use pgx_core::{parse_presentation, Conclusion, Error, FinitePresentation, Limits};

use common::{heisenberg_pc, read_corpus};

fn corpus(file: &str) -> FinitePresentation {
    parse_presentation(&read_corpus(file)).unwrap()
}

fn inv(torsion: &[u32]) -> AbelianInvariants {
    AbelianInvariants {
        torsion: torsion.iter().map(|&t| BigInt::from(t)).collect(),
        free_rank: 0,
    }
}

/// `C_{n_1} x ... x C_{n_k}` as a finite presentation.
fn abelian_presentation(orders: &[u32]) -> FinitePresentation {
    let names: Vec<String> = (0..orders.len()).map(|i| format!("x{i}")).collect();
    let mut text = format!("group \"ab\"\nprime 3\ngenerators {}\n", names.join(" "));
    let mut rels: Vec<String> = orders.iter().zip(&names).map(|(n, x)| format!("{x}^{n}")).collect();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            rels.push(format!("[{}, {}]", names[i], names[j]));
        }
    }
    text.push_str(&format!("relators {}\n", rels.join(", ")));
    parse_presentation(&text).unwrap()
}

/// Invariant factors of `(+)_{i<j} C_{gcd(n_i, n_j)}`, the exterior square
/// of an abelian group with cyclic factors `n_i`, for 3-power orders.
fn alternating_square(orders: &[u32]) -> AbelianInvariants {
    let mut cyclic: Vec<u32> = Vec::new();
    for i in 0..orders.len() {
        for j in i + 1..orders.len() {
            cyclic.push(orders[i].gcd(&orders[j]));
        }
    }
    cyclic.retain(|&c| c > 1);
    // cyclic 3-groups are already their own primary parts, sorted they are
    // the invariant factors
    cyclic.sort_unstable();
    inv(&cyclic)
}

#[test]
fn commutator_presentation_shape() {
    let heis = corpus("heisenberg27.fp");
    let n = relator_commutator_presentation(&heis);
    assert_eq!(n.relators.len(), 8);
    assert_eq!(n.rank(), 2);

    let c9 = parse_presentation("group \"c9\"\nprime 3\ngenerators a\nrelators a^9\n").unwrap();
    let n = relator_commutator_presentation(&c9);
    assert_eq!(n.relators.len(), 1);
    assert_eq!(n.relators[0], pgx_core::FreeWord::generator(0).commutator(&c9.relators[0]));
}

#[test]
fn cyclic_cover_is_infinite_cyclic() {
    let c9 = parse_presentation("group \"c9\"\nprime 3\ngenerators a\nrelators a^9\n").unwrap();
    let cover = miller_cover(&c9, None, &Limits::default()).unwrap();
    assert_eq!(cover.cover.order().hirsch_length, 1);
    assert_eq!(cover.cover.order().torsion_part, 1);
    assert!(cover.multiplier.is_trivial());
    assert_eq!(cover.wedge_order, 1);
    assert_eq!(cover.relator_module.free_rank, 1);
}

#[test]
fn multiplier_agrees_with_bar_homology() {
    let limits = Limits::default();
    let expected: [(&str, &[u32]); 5] = [
        ("c27.fp", &[]),
        ("c9xc3.fp", &[3]),
        ("c3cubed.fp", &[3, 3, 3]),
        ("heisenberg27.fp", &[3, 3]),
        ("m27.fp", &[]),
    ];
    for (file, m) in expected {
        let fp = corpus(file);
        let start = Instant::now();
        let cover = miller_cover(&fp, None, &limits).unwrap();
        let (h2, stats) = bar_h2(&cover.group.group, limits.bar_cap).unwrap();
        assert_eq!(cover.multiplier, inv(m), "{file}: cover");
        assert_eq!(h2, inv(m), "{file}: bar complex {stats:?}");
        assert_eq!(cover.relator_module.free_rank, fp.rank(), "{file}: R/[F,R] free rank");
        assert_eq!(cover.wedge_order, cover.multiplier_order() * cover.gprime_order, "{file}");
        assert!(start.elapsed().as_secs() < 300, "{file}: {:?}", start.elapsed());
    }

    let c3xc3 = abelian_presentation(&[3, 3]);
    let cover = miller_cover(&c3xc3, None, &limits).unwrap();
    assert_eq!(cover.multiplier, inv(&[3]));
    assert_eq!(cover.wedge_order, 3);
    assert_eq!(bar_h2_oracle(&cover.group.group, limits.bar_cap).unwrap(), inv(&[3]));
}

#[test]
fn heisenberg_cover_sizes() {
    let cover = miller_cover(&corpus("heisenberg27.fp"), None, &Limits::default()).unwrap();
    assert_eq!(cover.multiplier, inv(&[3, 3]));
    assert_eq!(cover.gprime_order, 3);
    assert_eq!(cover.wedge_order, 27);
    assert_eq!(cover.cover_class, 3);
    assert_eq!(cover.escalations, 0);
}

#[test]
fn order_81_groups_agree_with_bar_homology() {
    let limits = Limits::default();
    for fp in [corpus("wreath-c3-c3.fp"), abelian_presentation(&[3, 3, 3, 3])] {
        let cover = miller_cover(&fp, None, &limits).unwrap();
        let h2 = bar_h2_oracle(&cover.group.group, limits.bar_cap).unwrap();
        assert_eq!(cover.multiplier, h2, "{}", fp.name);
    }
}

#[test]
fn bar_oracle_refuses_large_groups() {
    let limits = Limits::default();
    let g = presented_group(&corpus("extra/maxclass-243.fp"), &limits).unwrap().group;
    assert_eq!(
        bar_h2_oracle(&g, limits.bar_cap),
        Err(Error::OrderAboveCap { order: 243, cap: 81 })
    );
}

#[test]
fn abelian_exterior_square_is_the_alternating_square() {
    let limits = Limits::default();
    let cases: [&[u32]; 7] = [&[9], &[3, 3], &[9, 3], &[9, 9], &[27, 3, 3], &[3, 3, 3, 3], &[27, 9, 3]];
    for orders in cases {
        let fp = abelian_presentation(orders);
        let cover = miller_cover(&fp, None, &limits).unwrap();
        let want = alternating_square(orders);
        assert_eq!(cover.multiplier, want, "{orders:?}");
        assert_eq!(cover.gprime_order, 1);
        let want_order: u128 = orders
            .iter()
            .enumerate()
            .flat_map(|(i, a)| orders[i + 1..].iter().map(move |b| a.gcd(b) as u128))
            .product();
        assert_eq!(cover.wedge_order, want_order, "{orders:?}");
        let n = &cover.cover;
        for u in cover.derived.gens() {
            for v in cover.derived.gens() {
                assert!(n.commutator(u, v).is_identity(), "{orders:?}: G^G is not abelian");
            }
        }
    }
    for r in 1..=4usize {
        let m = schur_multiplier(&abelian_presentation(&vec![3; r]), &limits).unwrap();
        assert_eq!(m.torsion.len(), r * (r - 1) / 2);
        assert!(m.torsion.iter().all(|t| *t == BigInt::from(3)));
    }
}

#[test]
fn multiplier_is_independent_of_the_presentation() {
    let limits = Limits::default();
    let two_gen = schur_multiplier(&corpus("heisenberg27.fp"), &limits).unwrap();
    let three_gen = parse_presentation(
        "group \"heis3\"\nprime 3\ngenerators a b c\nrelators a^3, b^3, c^3, [b,a] = c, [c,a], [c,b]\n",
    )
    .unwrap();
    let from_pc = heisenberg_pc().to_finite_presentation().unwrap();
    assert_eq!(schur_multiplier(&three_gen, &limits).unwrap(), two_gen);
    assert_eq!(schur_multiplier(&from_pc, &limits).unwrap(), two_gen);
    assert_eq!(two_gen, inv(&[3, 3]));
}

#[test]
fn exponent_divisibility_on_the_corpus() {
    let limits = Limits::default();
    let files = [
        "heisenberg27.fp",
        "m27.fp",
        "c3cubed.fp",
        "c9xc3.fp",
        "burnside-class2.fp",
        "wreath-c3-c3.fp",
        "wreath-c9-c3.fp",
    ];
    for file in files {
        let start = Instant::now();
        let cover = miller_cover(&corpus(file), None, &limits).unwrap();
        let exp_wedge = wedge_exponent(&cover, &limits).unwrap();
        for claim in Claim::ALL {
            let v = divisibility_from_cover(&cover, claim, &limits).unwrap();
            assert!(v.divides, "{file}: {claim}");
            assert_eq!(v.exp_wedge, exp_wedge);
            assert_eq!(v.exp_wedge % v.exp_m, 0, "{file}");
            assert_ne!(v.report.conclusion, Conclusion::Fail, "{file}: {claim}: {:?}", v.report);
            if matches!(claim, Claim::Thm25 | Claim::Cor26) {
                assert_eq!(v.report.conclusion, Conclusion::Pass, "{file}: {claim}");
            }
        }
        eprintln!("{file}: {:?} (cover class {})", start.elapsed(), cover.cover_class);
        assert!(start.elapsed().as_secs() < 600, "{file}: {:?}", start.elapsed());
    }
}

#[test]
fn documented_verdicts() {
    let limits = Limits::default();
    let heis = exponent_divisibility_verdict(&corpus("heisenberg27.fp"), Claim::Thm25, &limits).unwrap();
    assert_eq!((heis.exp_wedge, heis.exp_g, heis.report.conclusion), (3, 3, Conclusion::Pass));

    let wr = exponent_divisibility_verdict(&corpus("wreath-c3-c3.fp"), Claim::MaximalClass, &limits).unwrap();
    assert_eq!(wr.report.conclusion, Conclusion::Pass);
    assert_eq!(wr.exp_g, 9);
    assert_eq!(9 % wr.exp_wedge, 0);

    for file in ["wreath-c3-c3.fp", "wreath-c9-c3.fp"] {
        let v = exponent_divisibility_verdict(&corpus(file), Claim::Lemma11, &limits).unwrap();
        assert!(v.report.hypotheses_hold(), "{file}: {:?}", v.report);
        assert_eq!(v.report.conclusion, Conclusion::Pass, "{file}");
    }

    let m27 = exponent_divisibility_verdict(&corpus("m27.fp"), Claim::MaximalClass, &limits).unwrap();
    assert_eq!(m27.report.conclusion, Conclusion::Pass);
    let c3cubed = exponent_divisibility_verdict(&corpus("c3cubed.fp"), Claim::MaximalClass, &limits).unwrap();
    assert_eq!(c3cubed.report.conclusion, Conclusion::NotApplicable);
    assert!(c3cubed.divides);
}

#[test]
fn claim_ids_round_trip() {
    for c in Claim::ALL {
        assert_eq!(c.id().parse::<Claim>().unwrap(), c);
        assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.id()));
    }
    assert!("thm9".parse::<Claim>().is_err());
}
