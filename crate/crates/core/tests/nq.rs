mod common;

use std::time::Instant;

use num_bigint::BigInt;
use pgx_core::magnus::witt_rank;
use pgx_core::nq::{nilpotent_quotient, quotient_lcs_check, NilpotentQuotient};
use pgx_core::presentation::evaluate_word;
use pgx_core::{parse_presentation, Group};

use common::{corpus_files, corpus_perms, enumerate, Pair, heisenberg_pc, lower_central_orders, read_corpus, wreath33_pc};

fn free(rank: usize) -> pgx_core::FinitePresentation {
    let names = ["a", "b", "c", "d"];
    let text = format!("group \"F{rank}\"\nprime 3\ngenerators {}\n", names[..rank].join(" "));
    parse_presentation(&text).unwrap()
}

#[test]
fn free_groups_match_witt_numbers() {
    for rank in [2usize, 3] {
        let start = Instant::now();
        let r = nilpotent_quotient(&free(rank), 5).unwrap();
        let elapsed = start.elapsed();
        assert_eq!(r.achieved_class, 5);
        for (k, layer) in r.layer_invariants.iter().enumerate() {
            assert!(layer.torsion.is_empty(), "rank {rank} layer {}", k + 1);
            assert_eq!(BigInt::from(layer.free_rank), witt_rank(rank as u64, k as u64 + 1));
        }
        for (j, g) in r.quotient.gens().iter().enumerate() {
            assert!(j == 0 || r.quotient.gens()[j - 1].weight <= g.weight);
        }
        println!("free rank {rank}, class 5: {elapsed:?}");
    }
}

#[test]
fn corpus_quotients_match_permutation_models() {
    for file in corpus_files() {
        let fp = parse_presentation(&read_corpus(file)).unwrap();
        let r = nilpotent_quotient(&fp, 10).unwrap();
        let q = &r.quotient;
        let (perm, pgens) = corpus_perms(file);
        let lcs = lower_central_orders(&perm, &pgens);

        assert!(q.is_consistent().is_consistent(), "{file}");
        assert_eq!(r.achieved_class, lcs.len() - 1, "{file}: class");
        assert_eq!(q.order().finite(), Some(lcs[0] as u128), "{file}: order");
        for (k, layer) in r.layer_invariants.iter().enumerate() {
            let expected = BigInt::from(lcs[k] / lcs[k + 1]);
            assert_eq!(layer.order(), Some(expected), "{file}: layer {}", k + 1);
        }
        for (j, g) in q.gens().iter().enumerate() {
            assert!(g.weight >= 1 && g.weight as usize <= r.achieved_class, "{file}: weight of g{j}");
        }

        for rel in &fp.relators {
            let v = evaluate_word(rel, &r.images, q).unwrap();
            assert!(q.is_identity(&v), "{file}: relator {} survives", rel.display(&fp.names()));
        }
        let span = q.subgroup_span(&r.images).unwrap();
        assert!(q.subgroups_equal(&span, &q.whole()), "{file}: images do not generate");

        // the subgroup of Q x P generated by paired images is the graph of
        // an isomorphism exactly when it has the same order as both factors
        let pair = Pair(q, &perm);
        let pairs: Vec<_> = r.images.iter().cloned().zip(pgens.iter().cloned()).collect();
        let graph = enumerate(&pair, &pairs);
        assert_eq!(graph.len(), lcs[0], "{file}: generator map is not an isomorphism");
    }
}

#[test]
fn truncated_runs_are_quotients_of_the_full_run() {
    let fp = parse_presentation(&read_corpus("wreath-c9-c3.fp")).unwrap();
    let full = nilpotent_quotient(&fp, 10).unwrap();
    for c in 1..full.achieved_class {
        let part = nilpotent_quotient(&fp, c).unwrap();
        assert_eq!(part.achieved_class, c);
        assert_eq!(part.layer_invariants, full.layer_invariants[..c]);
        // G -> G/gamma_{c+1} sends the full images onto the truncated ones
        let pair = Pair(&full.quotient, &part.quotient);
        let pairs: Vec<_> = full.images.iter().cloned().zip(part.images.iter().cloned()).collect();
        let graph = enumerate(&pair, &pairs);
        assert_eq!(graph.len() as u128, full.quotient.order().finite().unwrap(), "class {c}");
    }
}

#[test]
fn incremental_and_one_shot_runs_agree() {
    let fp = parse_presentation(&read_corpus("wreath-c3-c3.fp")).unwrap();
    let mut nq = NilpotentQuotient::new(&fp).unwrap();
    while nq.step().unwrap() {}
    assert!(nq.is_stable());
    let one_shot = nilpotent_quotient(&fp, 10).unwrap();
    assert_eq!(nq.result().layer_invariants, one_shot.layer_invariants);
    assert_eq!(nq.group(), &one_shot.quotient);
}

#[test]
fn pc_input_is_a_fixed_point() {
    for pc in [heisenberg_pc(), wreath33_pc()] {
        let fp = pc.to_finite_presentation().unwrap();
        let r = nilpotent_quotient(&fp, 10).unwrap();
        assert_eq!(r.quotient.order(), pc.order());
        let pair = Pair(&r.quotient, &pc);
        let gens: Vec<_> = (0..pc.len()).map(|i| pc.generator(i)).collect();
        let pairs: Vec<_> = r.images.iter().cloned().zip(gens).collect();
        assert_eq!(enumerate(&pair, &pairs).len() as u128, pc.order().finite().unwrap());
    }
}

#[test]
fn class_bound_truncates() {
    let fp = parse_presentation(&read_corpus("heisenberg27.fp")).unwrap();
    let r = nilpotent_quotient(&fp, 1).unwrap();
    assert_eq!(r.quotient.order().finite(), Some(9));
    let r = nilpotent_quotient(&fp, 2).unwrap();
    assert_eq!(r.quotient.order().finite(), Some(27));

    let cyclic = parse_presentation("group \"C3\"\nprime 3\ngenerators a\nrelators a^3\n").unwrap();
    let r = nilpotent_quotient(&cyclic, 4).unwrap();
    assert_eq!(r.achieved_class, 1);
    assert_eq!(r.images, vec![r.quotient.generator(0)]);
}

#[test]
fn infinite_quotients_are_reported() {
    let fp = parse_presentation("group \"Z2\"\nprime 3\ngenerators a b\nrelators [a,b]\n").unwrap();
    let r = nilpotent_quotient(&fp, 3).unwrap();
    assert_eq!(r.achieved_class, 1);
    assert_eq!(r.quotient.order().hirsch_length, 2);
}

#[test]
fn recorded_layers_match_a_direct_recomputation() {
    let r = nilpotent_quotient(&free(2), 3).unwrap();
    let layers = quotient_lcs_check(&r).unwrap();
    let ranks: Vec<usize> = layers.iter().map(|l| l.free_rank).collect();
    assert_eq!(ranks, vec![2, 1, 2]);
    assert!(layers.iter().all(|l| l.torsion.is_empty()));

    let c3 = parse_presentation("group \"C3\"\nprime 3\ngenerators a\nrelators a^3\n").unwrap();
    let layers = quotient_lcs_check(&nilpotent_quotient(&c3, 3).unwrap()).unwrap();
    assert_eq!(layers.len(), 1);
    assert_eq!(layers[0].torsion, vec![BigInt::from(3)]);

    let heis = parse_presentation(&read_corpus("heisenberg27.fp")).unwrap();
    let layers = quotient_lcs_check(&nilpotent_quotient(&heis, 5).unwrap()).unwrap();
    let torsion: Vec<Vec<BigInt>> = layers.iter().map(|l| l.torsion.clone()).collect();
    assert_eq!(torsion, vec![vec![BigInt::from(3), BigInt::from(3)], vec![BigInt::from(3)]]);

    for file in corpus_files() {
        let fp = parse_presentation(&read_corpus(file)).unwrap();
        quotient_lcs_check(&nilpotent_quotient(&fp, 10).unwrap()).unwrap();
    }
}
