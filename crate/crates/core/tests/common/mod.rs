#![allow(dead_code)]

use cantor_signs::rational::Rational;
use cantor_signs::{QSystem, QTerm, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_term(rng: &mut impl Rng, max_q: u64) -> QTerm {
    let q = rng.random_range(2..=max_q);
    let sign = if rng.random_bool(0.5) {
        Sign::Minus
    } else {
        Sign::Plus
    };
    QTerm::new(q, sign).unwrap()
}

pub fn random_system(rng: &mut impl Rng, max_pre: usize, max_period: usize, max_q: u64) -> QSystem {
    let pre_len = rng.random_range(0..=max_pre);
    let per_len = rng.random_range(1..=max_period);
    let pre = (0..pre_len).map(|_| random_term(rng, max_q)).collect();
    let per = (0..per_len).map(|_| random_term(rng, max_q)).collect();
    QSystem::new(pre, per).unwrap()
}

/// Uniform numerator among `p` with `lower <= p/r <= upper`, for random `r`.
pub fn random_in_range(rng: &mut impl Rng, qsys: &QSystem, max_r: u64) -> Rational {
    let bounds = qsys.bounds();
    let r = rng.random_range(1..=max_r);
    let r_big = BigInt::from(r);
    let lo = (bounds.lower.numer() * &r_big).div_ceil(bounds.lower.denom());
    let hi = (bounds.upper.numer() * &r_big).div_floor(bounds.upper.denom());
    let span: i64 = (&hi - &lo).try_into().unwrap();
    let p = lo + rng.random_range(0..=span);
    Rational::new(p, r_big)
}

pub struct Case {
    pub qsys: QSystem,
    pub x: Rational,
}

/// Randomized corpus: period length <= 6, bases <= 20, random signs,
/// preperiod <= 4, denominators <= 500, values inside [a', a''].
pub fn corpus(seed: u64, count: usize) -> Vec<Case> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let qsys = random_system(&mut rng, 4, 6, 20);
            let x = random_in_range(&mut rng, &qsys, 500);
            Case { qsys, x }
        })
        .collect()
}
