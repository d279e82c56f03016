#![allow(dead_code)]

use std::path::PathBuf;

use kkhecke::exact::ring::Disc;
use kkhecke::group::{CongruenceKind, Presentation, SubgroupModel};
use kkhecke::hecke::HeckeElement;
use kkhecke::io::format::{load_hecke, load_subgroup, LoadedSubgroup};
use kkhecke::{Int, ProjMatrix, QuadInt};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn gamma0(n: i64) -> SubgroupModel {
    SubgroupModel::congruence(
        &Presentation::modular_group(),
        CongruenceKind::Gamma0,
        QuadInt::small(n, 0, Disc::RATIONAL),
    )
    .unwrap()
}

pub fn gamma_full(n: i64) -> SubgroupModel {
    SubgroupModel::congruence(
        &Presentation::modular_group(),
        CongruenceKind::GammaFull,
        QuadInt::small(n, 0, Disc::RATIONAL),
    )
    .unwrap()
}

pub fn bianchi_gamma2() -> LoadedSubgroup {
    load_subgroup(&data("bianchi_d1_gamma2.json")).unwrap()
}

pub fn bianchi_hecke() -> HeckeElement {
    load_hecke(&data("t_2pi.json")).unwrap()
}

pub fn tp(p: i64) -> HeckeElement {
    HeckeElement::new(format!("T_{p}"), ProjMatrix::from_ints([[1, 0], [0, p]], Disc::RATIONAL).unwrap())
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Product of `len` random Schreier generators and their inverses.
pub fn random_subgroup_element(sub: &SubgroupModel, rng: &mut ChaCha8Rng, len: usize) -> ProjMatrix {
    let gens = sub.schreier_generators();
    let mut m = ProjMatrix::identity(sub.ambient().disc());
    for _ in 0..len {
        let s = &gens[rng.random_range(0..gens.len())].matrix;
        let f = if rng.random_bool(0.5) { s.clone() } else { s.inverse() };
        m = m.mul(&f);
    }
    m
}

/// Product of `len` random ambient generators and their inverses.
pub fn random_ambient_element(p: &Presentation, rng: &mut ChaCha8Rng, len: usize) -> ProjMatrix {
    let mut m = ProjMatrix::identity(p.disc());
    for _ in 0..len {
        let g = &p.generators()[rng.random_range(0..p.ngens())].matrix;
        let f = if rng.random_bool(0.5) { g.clone() } else { g.inverse() };
        m = m.mul(&f);
    }
    m
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Legendre coefficients by the three-term recurrence over the rationals.
pub fn legendre_bonnet(m: usize) -> Vec<BigRational> {
    let mut p0 = vec![BigRational::one()];
    let mut p1 = vec![BigRational::zero(), BigRational::one()];
    if m == 0 {
        return p0;
    }
    for k in 1..m {
        let mut next = vec![BigRational::zero(); k + 2];
        for (i, c) in p1.iter().enumerate() {
            next[i + 1] += c * rat(2 * k as i64 + 1, k as i64 + 1);
        }
        for (i, c) in p0.iter().enumerate() {
            next[i] -= c * rat(k as i64, k as i64 + 1);
        }
        p0 = p1;
        p1 = next;
    }
    p1
}

/// `int_{-1}^{1} (1+t)^{-1/2} (1 - P_m(t)) / (1 - t) dt` as `r * sqrt(2)`.
pub fn lambda_oracle_n2(m: usize) -> f64 {
    let p = legendre_bonnet(m);
    // numerator 1 - P_m, then long division by (1 - t)
    let mut num: Vec<BigRational> = p.iter().map(|c| -c.clone()).collect();
    num[0] += BigRational::one();
    let deg = num.len() - 1;
    let mut q = vec![BigRational::zero(); deg];
    let mut rem = num.clone();
    for i in (1..=deg).rev() {
        // leading term c t^i divided by -t gives -c t^{i-1}
        let c = rem[i].clone();
        q[i - 1] = -c.clone();
        rem[i] = BigRational::zero();
        rem[i - 1] += c;
    }
    assert!(rem[0].is_zero());
    // rewrite in u = 1 + t
    let mut in_u = vec![BigRational::zero(); q.len()];
    for (j, c) in q.iter().enumerate() {
        // t^j = (u - 1)^j
        let mut binom = BigInt::one();
        for k in 0..=j {
            let sign = if (j - k) % 2 == 0 { 1 } else { -1 };
            in_u[k] += c * BigRational::from_integer(&binom * sign);
            binom = binom * BigInt::from(j - k) / BigInt::from(k + 1);
        }
    }
    // int_0^2 u^{k - 1/2} du = 2^{k + 1/2} / (k + 1/2) = sqrt(2) 2^{k+1} / (2k + 1)
    let mut total = BigRational::zero();
    for (k, c) in in_u.iter().enumerate() {
        total += c * BigRational::new(BigInt::one() << (k + 1), BigInt::from(2 * k + 1));
    }
    total.to_f64().unwrap() * 2f64.sqrt()
}
