mod common;

use common::*;
use kkhecke::group::SubgroupModel;
use kkhecke::hecke::{double_coset_reps, HeckeOperator, SearchOptions};
use kkhecke::io::format::{load_hecke, load_presentation};
use kkhecke::Int;

#[test]
fn gaussian_presentation_and_subgroup() {
    let p = load_presentation(&data("bianchi_d1.json")).unwrap();
    let whole = SubgroupModel::whole(&p).unwrap();
    assert_eq!(whole.abelianization().invariants.divisors, vec![Int::from(2), Int::from(2)]);
    let loaded = bianchi_gamma2();
    let sub = loaded.model;
    assert_eq!(sub.index(), 48);
    assert!(sub.torsion_check(&loaded.torsion_words).torsion_free);
    assert_eq!(sub.rank_h1(), 6);
    let mut ms = Vec::new();
    for f in ["t_2pi.json", "t_2mi.json"] {
        let h = load_hecke(&data(f)).unwrap();
        let dec = double_coset_reps(&sub, &h, &SearchOptions::default()).unwrap();
        // norm of the prime 2 +- i is 5
        assert_eq!(dec.degree(), 6);
        let op = HeckeOperator::new(&sub, dec).unwrap();
        let m = op.matrix_h1(&sub).unwrap();
        let n = op.matrix_h1_homology(&sub, &sub.homology_basis()).unwrap();
        assert_eq!(n.matrix.transpose(), m.matrix);
        ms.push(m.matrix);
    }
    assert_eq!(ms[0].mul(&ms[1]).unwrap(), ms[1].mul(&ms[0]).unwrap());
}
