//! Brute-force reference paths.
//!
//! Nothing here calls the encoder or the closed-form tail sums of
//! [`QSystem`](crate::qsystem::QSystem); cylinder endpoints are re-derived by
//! summing terms as rationals and solving the one-period geometric relation.
//! These paths are slow and meant for verification only.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::encode::encode;
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::qsystem::{QSystem, QTerm};
use crate::rational::Rational;
use crate::shift::shift_identity_holds_through;

/// `(sum of negative-sign terms, sum of positive-sign terms)` of
/// `(q_k - 1) / (q_1 ... q_k)` over `k > m`.
fn tails(qsys: &QSystem, m: usize) -> (Rational, Rational) {
    let period = qsys.period_len();
    let split = m.max(qsys.preperiod().len());
    let mut neg = Rational::zero();
    let mut pos = Rational::zero();
    let mut product = BigInt::one();
    for k in 1..=split {
        let term = qsys.term(k);
        product *= term.q();
        if k > m {
            add_term(&mut neg, &mut pos, term, &product);
        }
    }
    // T = block + T / Pi, with block the next full period.
    let mut block_neg = Rational::zero();
    let mut block_pos = Rational::zero();
    let mut pi = BigInt::one();
    for k in split + 1..=split + period {
        let term = qsys.term(k);
        product *= term.q();
        pi *= term.q();
        add_term(&mut block_neg, &mut block_pos, term, &product);
    }
    let scale = Rational::new(pi.clone(), pi - 1);
    (neg + block_neg * &scale, pos + block_pos * scale)
}

fn add_term(neg: &mut Rational, pos: &mut Rational, term: QTerm, product: &BigInt) {
    let value = Rational::new(BigInt::from(term.q() - 1), product.clone());
    if term.is_negative() {
        *neg += value;
    } else {
        *pos += value;
    }
}

/// Rank-`len` cylinder of `digits` from independently summed tails.
fn cylinder(qsys: &QSystem, digits: &[u64]) -> (Rational, Rational) {
    let mut value = Rational::zero();
    let mut product = BigInt::one();
    for (i, &digit) in digits.iter().enumerate() {
        let term = qsys.term(i + 1);
        product *= term.q();
        value += Rational::new(term.signed(digit), product.clone());
    }
    let (neg, pos) = tails(qsys, digits.len());
    (&value - neg, value + pos)
}

/// First `depth` digits of `x` by searching, at every rank, the admissible
/// digit whose half-open cylinder `[lower, upper)` contains `x`; the global
/// supremum is treated as closed.
pub fn encode_bruteforce(x: &Rational, qsys: &QSystem, depth: usize) -> Result<Vec<u64>> {
    let (neg, pos) = tails(qsys, 0);
    let lower = -neg;
    if x < &lower {
        return Err(Error::BelowLowerBound {
            x: Box::new(x.clone()),
            lower: Box::new(lower),
        });
    }
    if x > &pos {
        return Err(Error::AboveUpperBound {
            x: Box::new(x.clone()),
            upper: Box::new(pos),
        });
    }
    let sup = pos;

    let mut digits = Vec::with_capacity(depth);
    let mut value = Rational::zero();
    let mut product = BigInt::one();
    for k in 1..=depth {
        let term = qsys.term(k);
        product *= term.q();
        let (neg, pos) = tails(qsys, k);
        let found = (0..term.q()).find_map(|digit| {
            let v = &value + Rational::new(term.signed(digit), product.clone());
            let lo = &v - &neg;
            let hi = &v + &pos;
            let inside = &lo <= x && (x < &hi || (x == &hi && hi == sup));
            inside.then_some((digit, v))
        });
        let Some((digit, v)) = found else {
            return Err(Error::inconsistent(format!(
                "no rank-{k} cylinder contains {x} over {qsys}"
            )));
        };
        digits.push(digit);
        value = v;
    }
    Ok(digits)
}

/// Rank-`n` cylinder of `exp`'s prefix; it contains `exp`'s value and has
/// width `1 / (q_1 ... q_n)`.
pub fn partial_sum_bracket(exp: &Expansion, n: usize) -> (Rational, Rational) {
    cylinder(exp.qsys(), &exp.prefix(n))
}

/// Finite explicit schedules, for bases that are not eventually periodic.
///
/// Only the listed terms are known. A tail beyond them contributes between
/// zero and `1 / (q_1 ... q_L)`, so cylinders are known up to that slack.
pub mod explicit {
    use super::*;

    struct Known {
        neg: Rational,
        pos: Rational,
        slack: Rational,
    }

    /// Known part of the tails after `m`, plus the unknown remainder bound.
    fn known_tails(terms: &[QTerm], m: usize) -> Known {
        let mut neg = Rational::zero();
        let mut pos = Rational::zero();
        let mut product = BigInt::one();
        for (i, &term) in terms.iter().enumerate() {
            product *= term.q();
            if i + 1 > m {
                add_term(&mut neg, &mut pos, term, &product);
            }
        }
        Known {
            neg,
            pos,
            slack: Rational::new(BigInt::one(), product),
        }
    }

    /// Like [`encode_bruteforce`] but over an explicit term list. A digit is
    /// emitted only when `x` lies in its half-open cylinder for every possible
    /// continuation of the schedule; otherwise the rank is reported as
    /// undecidable from the supplied terms.
    pub fn encode_bruteforce(x: &Rational, terms: &[QTerm], depth: usize) -> Result<Vec<u64>> {
        if depth > terms.len() {
            return Err(Error::inconsistent(format!(
                "depth {depth} exceeds the {} supplied terms",
                terms.len()
            )));
        }
        let mut digits = Vec::with_capacity(depth);
        let mut value = Rational::zero();
        let mut product = BigInt::one();
        for (k, &term) in terms.iter().enumerate().take(depth) {
            product *= term.q();
            let known = known_tails(terms, k + 1);
            let found = (0..term.q()).find_map(|digit| {
                let v = &value + Rational::new(term.signed(digit), product.clone());
                // The unknown tail can only widen [lo, hi).
                let lo = &v - &known.neg;
                let hi = &v + &known.pos;
                let inside = &lo <= x && x < &hi;
                inside.then_some((digit, v))
            });
            let Some((digit, v)) = found else {
                return Err(Error::inconsistent(format!(
                    "rank {} of {x} is not determined by {} terms (slack {})",
                    k + 1,
                    terms.len(),
                    known.slack
                )));
            };
            digits.push(digit);
            value = v;
        }
        Ok(digits)
    }

    /// Interval certainly containing the rank-`n` cylinder of `digits`.
    pub fn partial_sum_bracket(terms: &[QTerm], digits: &[u64], n: usize) -> (Rational, Rational) {
        let mut value = Rational::zero();
        let mut product = BigInt::one();
        for (term, &digit) in terms.iter().zip(digits).take(n) {
            product *= term.q();
            value += Rational::new(term.signed(digit), product.clone());
        }
        let known = known_tails(terms, n);
        (
            &value - known.neg - &known.slack,
            value + known.pos + known.slack,
        )
    }
}

/// Outcome of [`roundtrip_report`]; every flag must hold for a pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    pub encoded: Option<Expansion>,
    pub bruteforce: Option<Vec<u64>>,
    pub digits_agree: bool,
    pub value_matches: bool,
    pub identity_holds: bool,
}

impl RoundTrip {
    pub fn passed(&self) -> bool {
        self.digits_agree && self.value_matches && self.identity_holds
    }
}

pub fn roundtrip_report(x: &Rational, qsys: &QSystem, depth: usize) -> RoundTrip {
    let encoded = encode(x, qsys).ok();
    let bruteforce = encode_bruteforce(x, qsys, depth).ok();
    let digits_agree = match (&encoded, &bruteforce) {
        (Some(exp), Some(bf)) => &exp.prefix(depth) == bf,
        _ => false,
    };
    let value_matches = encoded.as_ref().is_some_and(|exp| &exp.value() == x);
    let identity_holds = encoded
        .as_ref()
        .is_some_and(|exp| shift_identity_holds_through(x, exp, depth));
    RoundTrip {
        encoded,
        bruteforce,
        digits_agree,
        value_matches,
        identity_holds,
    }
}

/// Encoder digits match the brute-force search to `depth`, the encoding
/// evaluates back to `x`, and the shift identity holds at every rank.
pub fn check_roundtrip(x: &Rational, qsys: &QSystem, depth: usize) -> bool {
    roundtrip_report(x, qsys, depth).passed()
}
