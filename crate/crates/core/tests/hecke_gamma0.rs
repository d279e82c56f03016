use kkhecke::exact::ring::Disc;
use kkhecke::group::{CongruenceKind, Presentation, SubgroupModel};
use kkhecke::hecke::{double_coset_reps, HeckeElement, HeckeOperator, SearchOptions};
use kkhecke::{Int, ProjMatrix, QuadInt};

fn gamma0(n: i64) -> SubgroupModel {
    SubgroupModel::congruence(
        &Presentation::modular_group(),
        CongruenceKind::Gamma0,
        QuadInt::small(n, 0, Disc::RATIONAL),
    )
    .unwrap()
}

fn tp(p: i64) -> HeckeElement {
    HeckeElement::new(format!("T_{p}"), ProjMatrix::from_ints([[1, 0], [0, p]], Disc::RATIONAL).unwrap())
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

#[test]
fn t2_and_t3_on_gamma0_11() {
    let sub = gamma0(11);
    for (p, expect) in [(2, [-2, -2, 3]), (3, [-1, -1, 4])] {
        let dec = double_coset_reps(&sub, &tp(p), &SearchOptions::default()).unwrap();
        assert_eq!(dec.degree(), p as usize + 1);
        let op = HeckeOperator::new(&sub, dec).unwrap();
        let m = op.matrix_h1(&sub).unwrap();
        let (roots, rest) = m.integer_eigenvalues().unwrap();
        assert_eq!(rest.len(), 1, "char poly splits over Z");
        assert_eq!(roots, ints(&expect));
        let n = op.matrix_h1_homology(&sub, &sub.homology_basis()).unwrap();
        assert_eq!(n.matrix.transpose(), m.matrix);
    }
}
