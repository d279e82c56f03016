mod common;

use common::*;
use kkhecke::group::SubgroupModel;
use kkhecke::hecke::{double_coset_reps, DoubleCosetDecomposition, HeckeElement, HeckeOperator, SearchOptions};
use kkhecke::ProjMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The three transfer-cocycle relations on random samples.
fn check_relations(sub: &SubgroupModel, dec: &DoubleCosetDecomposition, samples: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = dec.g();
    let g_inv = g.inverse();
    for _ in 0..samples {
        let a = random_subgroup_element(sub, &mut rng, 3);
        let b = random_subgroup_element(sub, &mut rng, 3);
        let i = rng.random_range(0..dec.degree());
        // t_i(a) = g delta_{a(i)}^-1 a delta_i g^-1
        let (ai, ta) = dec.cocycle(sub, i, &a).unwrap();
        let direct = g.mul(&dec.deltas[ai].inverse()).mul(&a).mul(&dec.deltas[i]).mul(&g_inv);
        assert_eq!(ta, direct);
        assert_eq!(ta, dec.reps[ai].inverse().mul(&a).mul(&dec.reps[i]));
        // t_i(ab) = t_{b(i)}(a) t_i(b)
        let (bi, tb) = dec.cocycle(sub, i, &b).unwrap();
        let (abi, tab) = dec.cocycle(sub, i, &a.mul(&b)).unwrap();
        let (a_bi, ta_bi) = dec.cocycle(sub, bi, &a).unwrap();
        assert_eq!(abi, a_bi);
        assert_eq!(tab, ta_bi.mul(&tb));
        // t_i(a^-1) = t_{a^-1(i)}(a)^-1
        let (ainv_i, tainv) = dec.cocycle(sub, i, &a.inverse()).unwrap();
        let (back, t) = dec.cocycle(sub, ainv_i, &a).unwrap();
        assert_eq!(back, i);
        assert_eq!(tainv, t.inverse());
    }
}

#[test]
fn relations_gamma0_11() {
    let sub = gamma0(11);
    let dec = double_coset_reps(&sub, &tp(2), &SearchOptions::default()).unwrap();
    check_relations(&sub, &dec, 120, 1);
}

#[test]
fn relations_gamma2() {
    let sub = gamma_full(2);
    let dec = double_coset_reps(&sub, &tp(3), &SearchOptions::default()).unwrap();
    check_relations(&sub, &dec, 120, 2);
}

#[test]
fn relations_bianchi() {
    let sub = bianchi_gamma2().model;
    let dec = double_coset_reps(&sub, &bianchi_hecke(), &SearchOptions::default()).unwrap();
    check_relations(&sub, &dec, 100, 3);
}

#[test]
fn degree_is_p_plus_one() {
    for (p, n) in [(2, 11), (3, 11), (5, 11), (3, 14), (5, 14), (2, 15)] {
        let sub = gamma0(n);
        let dec = double_coset_reps(&sub, &tp(p), &SearchOptions::default()).unwrap();
        assert_eq!(dec.degree(), p as usize + 1, "p = {p}, N = {n}");
    }
}

fn matrix(sub: &SubgroupModel, h: &HeckeElement, opts: &SearchOptions) -> kkhecke::IntMatrix {
    let dec = double_coset_reps(sub, h, opts).unwrap();
    HeckeOperator::new(sub, dec).unwrap().matrix_h1(sub).unwrap().matrix
}

#[test]
fn t2_t3_commute() {
    let sub = gamma0(11);
    let t2 = matrix(&sub, &tp(2), &SearchOptions::default());
    let t3 = matrix(&sub, &tp(3), &SearchOptions::default());
    assert_eq!(t2.mul(&t3).unwrap(), t3.mul(&t2).unwrap());
}

#[test]
fn independent_of_search_order() {
    let sub = gamma0(11);
    let n = sub.schreier_generators().len();
    let reversed: Vec<usize> = (0..n).rev().collect();
    let mut shuffled: Vec<usize> = (0..n).collect();
    shuffled.rotate_left(n / 2);
    let base = matrix(&sub, &tp(2), &SearchOptions::default());
    let base_deltas = double_coset_reps(&sub, &tp(2), &SearchOptions::default()).unwrap().deltas;
    let mut differs = false;
    for order in [reversed, shuffled] {
        let opts = SearchOptions { generator_order: Some(order), ..SearchOptions::default() };
        let dec = double_coset_reps(&sub, &tp(2), &opts).unwrap();
        differs |= dec.deltas != base_deltas;
        assert_eq!(HeckeOperator::new(&sub, dec).unwrap().matrix_h1(&sub).unwrap().matrix, base);
    }
    assert!(differs, "permuted orders should pick other representatives");
}

#[test]
fn covariant_factor_is_multiplicative() {
    let sub = gamma0(11);
    let dec = double_coset_reps(&sub, &tp(2), &SearchOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let a = random_subgroup_element(&sub, &mut rng, 3);
        let b = random_subgroup_element(&sub, &mut rng, 3);
        let (pa, da) = dec.covariant_rep_factor(&sub, &a).unwrap();
        let (pb, db) = dec.covariant_rep_factor(&sub, &b).unwrap();
        let (pab, dab) = dec.covariant_rep_factor(&sub, &a.mul(&b)).unwrap();
        for k in 0..dec.degree() {
            assert_eq!(pab[k], pa[pb[k]]);
            assert_eq!(dab[k], da[pb[k]].mul(&db[k]));
        }
        let mut seen = pa.clone();
        seen.sort();
        assert_eq!(seen, (0..dec.degree()).collect::<Vec<_>>());
    }
    let (p, d) = dec.covariant_rep_factor(&sub, &ProjMatrix::identity(sub.ambient().disc())).unwrap();
    assert_eq!(p, (0..dec.degree()).collect::<Vec<_>>());
    assert!(d.iter().all(|t| *t == ProjMatrix::identity(sub.ambient().disc())));
}

#[test]
fn small_cap_is_reported() {
    let sub = gamma0(11);
    let opts = SearchOptions { cap: 2, ..SearchOptions::default() };
    let err = double_coset_reps(&sub, &tp(5), &opts).unwrap_err();
    assert!(matches!(err, kkhecke::Error::CapExceeded { .. }));
}
