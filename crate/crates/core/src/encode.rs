//! Digit extraction for sign-variable series.
//!
//! With `x = p/r`, the digit at rank `k` is fixed by the half-open cylinder
//! condition `inf <= x < sup`, which reduces to
//!
//! ```text
//! a_k eps_k <= Delta_k / r + s_k < a_k eps_k + 1
//! Delta_1 = p q_1,   Delta_k = q_k (Delta_{k-1} - a_{k-1} r eps_{k-1})
//! s_k     = sum_{n > k, n in N_B} (q_n - 1) / (q_{k+1} ... q_n)
//! ```
//!
//! so `eps_k = a_k * floor(Delta_k / r + s_k)`, which is `|floor(...)|` on
//! every consistent state. The only point where the half-open condition
//! cannot hold is the right end `a''` of the whole interval; that point is
//! encoded by its maximal tail.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expansion::{canonicalize, Expansion};
use crate::qsystem::{QSystem, QTerm, Selector};
use crate::rational::{self, Rational};
use crate::shift;

/// Whether per-step invariants are asserted while encoding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Fast,
    /// Also checks the Delta/shift relation at every step and that the
    /// result evaluates back to the input.
    Checked,
}

/// `Delta_k` and `s_k`, ready to produce digit `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderState {
    pub delta: BigInt,
    pub s: Rational,
    pub k: usize,
    pub phase: usize,
}

impl EncoderState {
    pub fn start(x: &Rational, qsys: &QSystem) -> Self {
        EncoderState {
            delta: x.numer() * qsys.term(1).q(),
            s: s_init(qsys),
            k: 1,
            phase: qsys.phase(1),
        }
    }

    /// State for rank `k + 1` once `digit` has been emitted at rank `k`.
    pub fn advance(&self, qsys: &QSystem, digit: u64, r: &BigInt) -> Result<EncoderState> {
        let term = qsys.term(self.k);
        let next_term = qsys.term(self.k + 1);
        let shifted = &self.delta - term.signed(digit) * r;
        Ok(EncoderState {
            delta: shifted * next_term.q(),
            s: s_step(&self.s, next_term)?,
            k: self.k + 1,
            phase: qsys.phase(self.k + 1),
        })
    }
}

/// `s_1 = q_1 * sum_{k > 1, k in N_B} (q_k - 1) / (q_1 ... q_k)`.
pub fn s_init(qsys: &QSystem) -> Rational {
    qsys.tail_sum(1, Selector::Negative) * rational::int(qsys.term(1).q())
}

/// `s_k = q_k s_{k-1}`, minus `q_k - 1` when `k` is in N_B.
pub fn s_step(s_prev: &Rational, qterm: QTerm) -> Result<Rational> {
    let mut s = s_prev * rational::int(qterm.q());
    if qterm.is_negative() {
        s -= rational::int(qterm.q() - 1);
    }
    if s.is_negative() || s > Rational::one() {
        return Err(Error::inconsistent(format!(
            "s = {s} left [0, 1] after s_prev = {s_prev} and term {qterm}"
        )));
    }
    Ok(s)
}

/// Emits digit `state.k` and returns the state for the next rank.
pub fn extract_digit(
    state: &EncoderState,
    qsys: &QSystem,
    r: &BigInt,
) -> Result<(u64, EncoderState)> {
    let term = qsys.term(state.k);
    let y = Rational::new(state.delta.clone(), r.clone()) + &state.s;
    let floor = y.floor().to_integer();
    let signed = if term.is_negative() { -floor } else { floor };
    let digit = signed
        .to_u64()
        .filter(|&d| d <= term.max_digit())
        .ok_or_else(|| {
            Error::inconsistent(format!(
                "digit {signed} at index {} is outside [0, {}]: input out of range or corrupted state",
                state.k,
                term.max_digit()
            ))
        })?;
    let next = state.advance(qsys, digit, r)?;
    Ok((digit, next))
}

/// Canonical expansion of `x`: finite or eventually periodic, and
/// `eval_ep(encode(x)) == x`.
pub fn encode(x: &Rational, qsys: &QSystem) -> Result<Expansion> {
    encode_with(x, qsys, Mode::Fast)
}

pub fn encode_with(x: &Rational, qsys: &QSystem, mode: Mode) -> Result<Expansion> {
    let report = shift::detect_cycle_with(x, qsys, mode)?;
    let exp = canonicalize(&report.expansion);
    if mode == Mode::Checked && &exp.value() != x {
        return Err(Error::inconsistent(format!(
            "encoding {exp} of {x} evaluates to {}",
            exp.value()
        )));
    }
    Ok(exp)
}

/// Least `n0` with `r | q_1 ... q_n0`, where `r` is the reduced denominator
/// of `x`; `None` if no such `n0` exists.
///
/// Runs `r_n = r_{n-1} / gcd(r_{n-1}, q_n)`. Once the schedule is periodic,
/// a full period that leaves `r_n` unchanged means every later gcd is one.
/// `x = 0` gives `Some(0)`. For `|x| = 1`, which no finite sum reaches,
/// the answer is `None`.
pub fn finite_criterion(x: &Rational, qsys: &QSystem) -> Option<usize> {
    if x.is_zero() {
        return Some(0);
    }
    if rational::is_unit_magnitude(x) {
        return None;
    }
    let mut rest: BigUint = rational::denominator(x);
    let pre = qsys.preperiod().len();
    let period = qsys.period_len();
    let mut block_start = rest.clone();
    let mut n = 0;
    loop {
        n += 1;
        let q = BigUint::from(qsys.term(n).q());
        let g = rest.gcd(&q);
        rest /= g;
        if rest.is_one() {
            return Some(n);
        }
        if n >= pre && (n - pre).is_multiple_of(period) {
            if n > pre && rest == block_start {
                return None;
            }
            block_start = rest.clone();
        }
    }
}

/// Digit stream of the positive-series recurrence
/// `eps_n = floor(Delta_n / r)`, `Delta_1 = p q_1`,
/// `Delta_n = q_n (Delta_{n-1} - r eps_{n-1})`. Never ends.
#[derive(Debug, Clone)]
pub struct PositiveDigits {
    qsys: QSystem,
    r: BigInt,
    delta: BigInt,
    k: usize,
}

impl Iterator for PositiveDigits {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let (digit, rest) = self.delta.div_rem(&self.r);
        self.k += 1;
        self.delta = rest * self.qsys.term(self.k).q();
        digit.to_u64()
    }
}

/// Positive-series encoder for `0 < x < 1` over an all-positive system.
pub fn encode_positive(x: &Rational, qsys: &QSystem) -> Result<PositiveDigits> {
    if !qsys.is_all_positive() {
        return Err(Error::NotPositive("every sign to be positive"));
    }
    if !x.is_positive() || x >= &Rational::one() {
        return Err(Error::NotPositive("0 < x < 1"));
    }
    Ok(PositiveDigits {
        qsys: qsys.clone(),
        r: x.denom().clone(),
        delta: x.numer() * qsys.term(1).q(),
        k: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn sys(text: &str) -> QSystem {
        text.parse().unwrap()
    }

    #[test]
    fn s_init_examples() {
        assert_eq!(s_init(&sys("pre:;per:2+")), int(0));
        assert_eq!(s_init(&sys("pre:;per:2+,3-")), ratio(4, 5));
        assert_eq!(s_init(&sys("pre:;per:2-,2+")), ratio(1, 3));
    }

    #[test]
    fn s_step_examples() {
        let three_minus = QTerm::minus(3).unwrap();
        let two_plus = QTerm::plus(2).unwrap();
        assert_eq!(s_step(&ratio(4, 5), three_minus).unwrap(), ratio(2, 5));
        assert_eq!(s_step(&ratio(2, 5), two_plus).unwrap(), ratio(4, 5));
        assert_eq!(s_step(&int(0), QTerm::plus(7).unwrap()).unwrap(), int(0));
        assert!(s_step(&ratio(4, 5), two_plus).is_err());
        assert!(s_step(&ratio(1, 5), three_minus).is_err());
    }

    #[test]
    fn extract_digit_worked_chain() {
        let q = sys("pre:;per:2+,3-");
        let x = ratio(1, 6);
        let r = BigInt::from(6);
        let state = EncoderState::start(&x, &q);
        assert_eq!(
            (state.delta.clone(), state.s.clone()),
            (BigInt::from(2), ratio(4, 5))
        );

        let (d1, state) = extract_digit(&state, &q, &r).unwrap();
        assert_eq!(d1, 1);
        assert_eq!(
            (state.delta.clone(), state.s.clone()),
            (BigInt::from(-12), ratio(2, 5))
        );

        let (d2, state) = extract_digit(&state, &q, &r).unwrap();
        assert_eq!(d2, 2);
        assert_eq!(
            (state.delta.clone(), state.s.clone()),
            (BigInt::from(0), ratio(4, 5))
        );

        let (d3, state) = extract_digit(&state, &q, &r).unwrap();
        assert_eq!(d3, 0);
        assert_eq!(state.s, ratio(2, 5));
    }

    #[test]
    fn extract_digit_rejects_out_of_range_state() {
        // x = 1 is a'' for base 2; the unclamped formula wants digit 2.
        let q = sys("pre:;per:2+");
        let state = EncoderState::start(&int(1), &q);
        assert!(matches!(
            extract_digit(&state, &q, &BigInt::from(1)),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn encode_examples() {
        let e = encode(&ratio(1, 6), &sys("pre:;per:2+,3-")).unwrap();
        assert_eq!((e.preperiod(), e.period()), (&[1, 2][..], &[][..]));
        let e = encode(&ratio(1, 3), &sys("pre:;per:10+")).unwrap();
        assert_eq!((e.preperiod(), e.period()), (&[][..], &[3][..]));
        let e = encode(&ratio(-2, 3), &sys("pre:;per:2-,2+")).unwrap();
        assert_eq!((e.preperiod(), e.period()), (&[][..], &[1, 0][..]));
    }

    #[test]
    fn encode_upper_bound_uses_max_tail() {
        let e = encode(&int(1), &sys("pre:;per:2+")).unwrap();
        assert_eq!(e.period(), &[1]);
        let q = sys("pre:;per:2+,3-");
        let upper = q.bounds().upper;
        let e = encode_with(&upper, &q, Mode::Checked).unwrap();
        assert_eq!(e.value(), upper);
        assert_eq!(e.period(), &[1, 0]);
    }

    #[test]
    fn encode_lower_bound_uses_min_tail() {
        let q = sys("pre:;per:2+,3-");
        let lower = q.bounds().lower;
        let e = encode_with(&lower, &q, Mode::Checked).unwrap();
        assert_eq!(e.period(), &[0, 2]);
    }

    #[test]
    fn encode_rejects_out_of_range() {
        let err = encode(&ratio(7, 3), &sys("pre:;per:2+")).unwrap_err();
        assert!(matches!(err, Error::AboveUpperBound { .. }));
        let err = encode(&ratio(-1, 2), &sys("pre:;per:2+,3-")).unwrap_err();
        assert!(matches!(err, Error::BelowLowerBound { .. }));
    }

    #[test]
    fn finite_criterion_examples() {
        let q = sys("pre:;per:2+,3-");
        assert_eq!(finite_criterion(&ratio(1, 6), &q), Some(2));
        assert_eq!(finite_criterion(&ratio(1, 5), &q), None);
        assert_eq!(finite_criterion(&ratio(1, 8), &q), Some(5));
        assert_eq!(finite_criterion(&int(0), &q), Some(0));
        assert_eq!(finite_criterion(&int(1), &sys("pre:;per:2+")), None);
        // Preperiod factors count once only.
        let q = sys("pre:5+;per:2+");
        assert_eq!(finite_criterion(&ratio(1, 5), &q), Some(1));
        assert_eq!(finite_criterion(&ratio(1, 25), &q), None);
        assert_eq!(finite_criterion(&ratio(1, 40), &q), Some(4));
    }

    #[test]
    fn positive_encoder_examples() {
        let digits: Vec<u64> = encode_positive(&ratio(1, 3), &sys("pre:;per:10+"))
            .unwrap()
            .take(5)
            .collect();
        assert_eq!(digits, vec![3, 3, 3, 3, 3]);
        let digits: Vec<u64> = encode_positive(&ratio(1, 2), &sys("pre:;per:2+"))
            .unwrap()
            .take(3)
            .collect();
        assert_eq!(digits, vec![1, 0, 0]);
        let digits: Vec<u64> = encode_positive(&ratio(5, 7), &sys("pre:;per:2+,3+"))
            .unwrap()
            .take(3)
            .collect();
        assert_eq!(digits, vec![1, 1, 0]);
    }

    #[test]
    fn positive_encoder_domain() {
        assert!(encode_positive(&ratio(1, 3), &sys("pre:;per:2+,3-")).is_err());
        assert!(encode_positive(&int(0), &sys("pre:;per:2+")).is_err());
        assert!(encode_positive(&int(1), &sys("pre:;per:2+")).is_err());
        assert!(encode_positive(&ratio(-1, 3), &sys("pre:;per:2+")).is_err());
    }
}
