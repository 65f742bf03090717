//! The shift operator and cycle detection.
//!
//! For `x = p/r`, every shifted value `sigma^n(x)` has the same denominator
//! `r`, and `|sigma^n(x)| <= 1`. Its numerator obeys
//! `u_0 = p`, `u_n = q_n u_{n-1} - a_n eps_n r`, so the pair `(u_n, phase)`
//! ranges over at most `(2r + 1) P + |preperiod|` values and must repeat.
//! The first repeat gives `sigma^n(x) = sigma^{n+m}(x)` and the period of
//! the expansion.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::encode::{extract_digit, EncoderState, Mode};
use crate::error::{Error, Result};
use crate::expansion::{eval_finite, Expansion, Tail};
use crate::qsystem::QSystem;
use crate::rational::{self, Rational};

/// Numerator of `sigma^k(x)` over the fixed denominator `r`.
///
/// `phase` is the schedule slot of the next term, `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftState {
    pub u: BigInt,
    pub k: usize,
    pub phase: usize,
}

impl ShiftState {
    pub fn start(x: &Rational) -> Self {
        ShiftState {
            u: x.numer().clone(),
            k: 0,
            phase: 0,
        }
    }

    pub fn value(&self, r: &BigInt) -> Rational {
        Rational::new(self.u.clone(), r.clone())
    }
}

/// `u' = q u - a digit r` for term `state.k + 1`.
///
/// Fails when the digit is inadmissible or when `|u'| > r`, which means the
/// digit is not the one the expansion of `u / r` has at this rank.
pub fn sigma_step(
    state: &ShiftState,
    qsys: &QSystem,
    digit: u64,
    r: &BigInt,
) -> Result<ShiftState> {
    let k = state.k + 1;
    let term = qsys.term(k);
    if digit > term.max_digit() {
        return Err(Error::Inadmissible {
            index: k,
            digit,
            q: term.q(),
        });
    }
    let u = &state.u * term.q() - term.signed(digit) * r;
    if &u.abs() > r {
        return Err(Error::inconsistent(format!(
            "shift numerator {u} exceeds {r} after digit {digit} at index {k}"
        )));
    }
    Ok(ShiftState {
        u,
        k,
        phase: qsys.phase(k + 1),
    })
}

/// `sigma^n(x)` along the digits of `exp`, which must represent `x`.
pub fn sigma_n(x: &Rational, exp: &Expansion, n: usize) -> Result<Rational> {
    let r = x.denom();
    let mut state = ShiftState::start(x);
    for k in 1..=n {
        state = sigma_step(&state, exp.qsys(), exp.digit(k), r)?;
    }
    Ok(state.value(r))
}

/// `x == sum_{i<=n} a_i eps_i / (q_1...q_i) + sigma^n(x) / (q_1...q_n)`.
pub fn shift_identity_check(x: &Rational, exp: &Expansion, n: usize) -> bool {
    let Ok(shifted) = sigma_n(x, exp, n) else {
        return false;
    };
    let Ok(head) = eval_finite(exp.qsys(), &exp.prefix(n)) else {
        return false;
    };
    let product = rational::int(exp.qsys().partial_product(n));
    x == &(head + shifted / product)
}

/// [`shift_identity_check`] for every `n` in `0..=depth`, in one pass.
///
/// Checked in integers, scaled by `r Q_n`: `p Q_n = r H_n + u_n` with
/// `H_n = q_n H_{n-1} + a_n eps_n` the numerator of the partial sum.
pub fn shift_identity_holds_through(x: &Rational, exp: &Expansion, depth: usize) -> bool {
    let qsys = exp.qsys();
    let r = x.denom();
    let mut state = ShiftState::start(x);
    let mut head = BigInt::zero();
    let mut scaled_x = x.numer().clone();
    for k in 0..=depth {
        if k > 0 {
            let term = qsys.term(k);
            let digit = exp.digit(k);
            state = match sigma_step(&state, qsys, digit, r) {
                Ok(next) => next,
                Err(_) => return false,
            };
            head = head * term.q() + term.signed(digit);
            scaled_x *= term.q();
        }
        if scaled_x != r * &head + &state.u {
            return false;
        }
    }
    true
}

/// Outcome of [`detect_cycle`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    /// `n`: first step whose `(u, phase)` recurs.
    pub preperiod: usize,
    /// `m`: gap to the recurrence. A finite expansion reports `m = 1`,
    /// since `sigma^n(x) = sigma^{n+1}(x) = 0`.
    pub period: usize,
    /// Digits extracted before stopping.
    pub steps: usize,
    pub finite: bool,
    /// Raw digits as found: preperiod `n`, period `m` (empty when finite).
    pub expansion: Expansion,
}

/// Pigeonhole bound on the number of steps: `(2r + 1) P + |preperiod|`.
pub fn step_bound(x: &Rational, qsys: &QSystem) -> BigInt {
    let r = x.denom();
    (r * 2 + 1) * qsys.period_len() + qsys.preperiod().len()
}

pub fn detect_cycle(x: &Rational, qsys: &QSystem) -> Result<CycleReport> {
    detect_cycle_with(x, qsys, Mode::Fast)
}

pub fn detect_cycle_with(x: &Rational, qsys: &QSystem, mode: Mode) -> Result<CycleReport> {
    let bounds = qsys.bounds();
    bounds.check(x)?;
    let r = x.denom().clone();
    let at_upper = x == &bounds.upper;
    // A zero shift only forces zero digits from here on if some later sign
    // is positive; with an all-negative period, 0 is the top of every
    // remaining cylinder and the half-open rule moves past it.
    let zero_terminates = at_upper || !qsys.has_negative_tail();
    let limit = step_bound(x, qsys).to_usize().unwrap_or(usize::MAX);

    let mut encoder = EncoderState::start(x, qsys);
    let mut shift = ShiftState::start(x);
    let mut seen: HashMap<(BigInt, usize), usize> = HashMap::new();
    seen.insert((shift.u.clone(), shift.phase), 0);
    let mut digits = Vec::new();

    loop {
        if zero_terminates && shift.u.is_zero() {
            let n = digits.len();
            return Ok(CycleReport {
                preperiod: n,
                period: 1,
                steps: n,
                finite: true,
                expansion: Expansion::finite(qsys.clone(), digits)?,
            });
        }
        if digits.len() >= limit {
            return Err(Error::inconsistent(format!(
                "no repeat within {limit} steps for {x} over {qsys}"
            )));
        }

        let (digit, next) = if at_upper {
            let digit = Tail::Max.digit(qsys.term(encoder.k));
            (digit, encoder.advance(qsys, digit, &r)?)
        } else {
            extract_digit(&encoder, qsys, &r)?
        };
        shift = sigma_step(&shift, qsys, digit, &r)?;

        if mode == Mode::Checked {
            // sigma^k(x) + a_k eps_k = Delta_k / r
            let term = qsys.term(encoder.k);
            if &shift.u + term.signed(digit) * &r != encoder.delta {
                return Err(Error::inconsistent(format!(
                    "Delta relation fails at index {}",
                    encoder.k
                )));
            }
        }
        encoder = next;
        digits.push(digit);

        if let Some(&first) = seen.get(&(shift.u.clone(), shift.phase)) {
            let steps = digits.len();
            let per = digits.split_off(first);
            let expansion = Expansion::new(qsys.clone(), digits, per)?;
            return Ok(CycleReport {
                preperiod: first,
                period: steps - first,
                steps,
                finite: false,
                expansion,
            });
        }
        seen.insert((shift.u.clone(), shift.phase), digits.len());
    }
}

/// Checks that the tail value at offset `n` equals `q_{n+1}...q_{n+m}` times
/// the tail value at offset `n + m`, where the tail value at offset `t` is
/// the series with the first `t` digits set to zero.
pub fn rationality_equation_holds(exp: &Expansion, n: usize, m: usize) -> bool {
    if m == 0 {
        return false;
    }
    let qsys = exp.qsys();
    let value = exp.value();
    let tail = |offset: usize| -> Rational {
        let head = eval_finite(qsys, &exp.prefix(offset)).expect("expansion digits are admissible");
        &value - head
    };
    let block: BigInt = (n + 1..=n + m)
        .map(|k| BigInt::from(qsys.term(k).q()))
        .product();
    tail(n) == tail(n + m) * Rational::from_integer(block)
}

/// [`rationality_equation_holds`] at the expansion's own preperiod and period
/// (`m = 1` for a finite expansion, whose tail is zero).
pub fn rationality_equation_check(exp: &Expansion) -> bool {
    rationality_equation_holds(exp, exp.preperiod().len(), exp.period().len().max(1))
}
