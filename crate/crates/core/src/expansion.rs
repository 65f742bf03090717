//! Digit expansions over a [`QSystem`]: exact evaluation, cylinders, and the
//! pairs of representations that describe the same number.
//!
//! An [`Expansion`] is a preperiod of `n` digits followed by a period of `m`
//! digits repeated forever (`m = 0` means a zero tail). The period has to be
//! aligned with the base schedule, i.e. `term(n + j) == term(n + j + m)` for
//! every `j >= 1`, so that the repeated block always meets the same bases.
//!
//! Digit-stream text format: `d1,d2,...,dn(p1,...,pm)`; finite expansions
//! omit the parentheses.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsystem::{QSystem, QTerm, Selector, Sign};
use crate::rational::Rational;

/// True iff every digit is in `[0, q_k - 1]` for its position.
pub fn is_admissible(qsys: &QSystem, digits: &[u64]) -> bool {
    check_admissible(qsys, digits, 0).is_ok()
}

/// Checks `digits` as positions `offset + 1, offset + 2, ...`.
fn check_admissible(qsys: &QSystem, digits: &[u64], offset: usize) -> Result<()> {
    for (i, &digit) in digits.iter().enumerate() {
        let index = offset + i + 1;
        let term = qsys.term(index);
        if digit > term.max_digit() {
            return Err(Error::Inadmissible {
                index,
                digit,
                q: term.q(),
            });
        }
    }
    Ok(())
}

/// Numerator `N` with `sum_{k<=len} a_k d_k / (q_1...q_len) = N / product`,
/// for digits starting at position `offset + 1`.
fn horner(qsys: &QSystem, digits: &[u64], offset: usize) -> (BigInt, BigInt) {
    let mut num = BigInt::zero();
    let mut product = BigInt::one();
    for (i, &digit) in digits.iter().enumerate() {
        let term = qsys.term(offset + i + 1);
        num = num * term.q() + term.signed(digit);
        product *= term.q();
    }
    (num, product)
}

/// `sum_{k=1}^{len} a_k d_k / (q_1 ... q_k)`.
pub fn eval_finite(qsys: &QSystem, digits: &[u64]) -> Result<Rational> {
    check_admissible(qsys, digits, 0)?;
    let (num, product) = horner(qsys, digits, 0);
    Ok(Rational::new(num, product))
}

fn aligned(qsys: &QSystem, n: usize, m: usize) -> bool {
    if m == 0 {
        return true;
    }
    let span = qsys.preperiod().len().saturating_sub(n) + qsys.period_len();
    (1..=span).all(|j| qsys.term(n + j) == qsys.term(n + j + m))
}

/// Which extremal tail an expansion ends in.
///
/// `Min` puts 0 on positive positions and `q - 1` on negative ones, so the
/// tail realises the infimum of its cylinder; `Max` is the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Min,
    Max,
}

impl Tail {
    pub fn digit(self, term: QTerm) -> u64 {
        match (self, term.sign()) {
            (Tail::Min, Sign::Plus) | (Tail::Max, Sign::Minus) => 0,
            (Tail::Min, Sign::Minus) | (Tail::Max, Sign::Plus) => term.max_digit(),
        }
    }

    pub fn opposite(self) -> Tail {
        match self {
            Tail::Min => Tail::Max,
            Tail::Max => Tail::Min,
        }
    }
}

/// Preperiod and period digits without a system attached. This is the JSON
/// shape `{"pre":[...],"per":[...]}` and the text shape `d1,d2(p1,p2)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitStream {
    pub pre: Vec<u64>,
    pub per: Vec<u64>,
}

impl fmt::Display for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |d: &[u64]| d.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}", join(&self.pre))?;
        if !self.per.is_empty() {
            write!(f, "({})", join(&self.per))?;
        }
        Ok(())
    }
}

impl FromStr for DigitStream {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Parse(format!("bad digit stream {text:?}: expected d1,d2(p1,p2)"));
        let list = |s: &str| -> Result<Vec<u64>> {
            let s = s.trim();
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|d| d.trim().parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        match text.split_once('(') {
            None => Ok(DigitStream {
                pre: list(text)?,
                per: Vec::new(),
            }),
            Some((pre, rest)) => {
                let per = rest.strip_suffix(')').ok_or_else(bad)?;
                let pre = pre.trim().trim_end_matches(',');
                let stream = DigitStream {
                    pre: list(pre)?,
                    per: list(per)?,
                };
                if stream.per.is_empty() {
                    return Err(bad());
                }
                Ok(stream)
            }
        }
    }
}

/// Eventually periodic digit sequence aligned to a [`QSystem`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expansion {
    qsys: QSystem,
    pre: Vec<u64>,
    per: Vec<u64>,
}

impl Expansion {
    pub fn new(qsys: QSystem, pre: Vec<u64>, per: Vec<u64>) -> Result<Self> {
        check_admissible(&qsys, &pre, 0)?;
        check_admissible(&qsys, &per, pre.len())?;
        if !aligned(&qsys, pre.len(), per.len()) {
            return Err(Error::Misaligned {
                preperiod: pre.len(),
                period: per.len(),
            });
        }
        Ok(Expansion { qsys, pre, per })
    }

    pub fn finite(qsys: QSystem, digits: Vec<u64>) -> Result<Self> {
        Self::new(qsys, digits, Vec::new())
    }

    pub fn from_stream(qsys: QSystem, stream: DigitStream) -> Result<Self> {
        Self::new(qsys, stream.pre, stream.per)
    }

    /// `prefix` followed by the extremal tail of the given kind, with the
    /// period placed past the schedule preperiod so that it is aligned.
    pub fn with_tail(qsys: QSystem, prefix: Vec<u64>, tail: Tail) -> Result<Self> {
        let split = prefix.len().max(qsys.preperiod().len());
        let mut pre = prefix;
        let from = pre.len() + 1;
        pre.extend((from..=split).map(|k| tail.digit(qsys.term(k))));
        let per = (1..=qsys.period_len())
            .map(|j| tail.digit(qsys.term(split + j)))
            .collect();
        Ok(Self::new(qsys, pre, per)?.reduced())
    }

    pub fn qsys(&self) -> &QSystem {
        &self.qsys
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.pre
    }

    pub fn period(&self) -> &[u64] {
        &self.per
    }

    pub fn is_finite(&self) -> bool {
        self.per.is_empty()
    }

    pub fn stream(&self) -> DigitStream {
        DigitStream {
            pre: self.pre.clone(),
            per: self.per.clone(),
        }
    }

    /// Digit at position `k` (1-based).
    pub fn digit(&self, k: usize) -> u64 {
        assert!(k >= 1, "digits are indexed from 1");
        if k <= self.pre.len() {
            self.pre[k - 1]
        } else if self.per.is_empty() {
            0
        } else {
            self.per[(k - self.pre.len() - 1) % self.per.len()]
        }
    }

    /// First `len` digits.
    pub fn prefix(&self, len: usize) -> Vec<u64> {
        (1..=len).map(|k| self.digit(k)).collect()
    }

    /// Exact value of the infinite series.
    pub fn value(&self) -> Rational {
        let n = self.pre.len();
        let (head, head_product) = horner(&self.qsys, &self.pre, 0);
        let head = Rational::new(head, head_product.clone());
        if self.per.is_empty() {
            return head;
        }
        let (block, block_product) = horner(&self.qsys, &self.per, n);
        head + Rational::new(block, (block_product - 1) * head_product)
    }

    /// If the expansion ends in the `tail` pattern, the 1-based position
    /// where that pattern starts (earliest such position).
    pub fn tail_start(&self, tail: Tail) -> Option<usize> {
        let n = self.pre.len();
        let mut start = n + 1;
        if self.per.is_empty() {
            // Trailing zeros may cover positions off the tail before it begins.
            let end = n.max(self.qsys.preperiod().len()) + self.qsys.period_len();
            let off_tail = |k: &usize| tail.digit(self.qsys.term(*k)) != 0;
            if (end - self.qsys.period_len() + 1..=end).any(|k| off_tail(&k)) {
                return None;
            }
            if let Some(last) = (n + 1..=end).rev().find(off_tail) {
                start = last + 1;
            }
        } else if !(1..=self.per.len())
            .all(|j| self.digit(n + j) == tail.digit(self.qsys.term(n + j)))
        {
            return None;
        }
        while start > 1 && self.digit(start - 1) == tail.digit(self.qsys.term(start - 1)) {
            start -= 1;
        }
        Some(start)
    }

    /// Minimal preperiod and period for the same digit sequence, with an
    /// all-zero period collapsed to a finite expansion.
    pub fn reduced(&self) -> Expansion {
        let qsys = &self.qsys;
        let mut pre = self.pre.clone();
        let mut per = self.per.clone();

        if per.iter().all(|&d| d == 0) {
            per.clear();
        }
        if per.is_empty() {
            while pre.last() == Some(&0) {
                pre.pop();
            }
            return Expansion {
                qsys: qsys.clone(),
                pre,
                per,
            };
        }

        let m = per.len();
        let n = pre.len();
        let period = (1..=m)
            .filter(|d| m.is_multiple_of(*d))
            .find(|&d| (0..m).all(|i| per[i] == per[i % d]) && aligned(qsys, n, d))
            .unwrap_or(m);
        per.truncate(period);

        let m = per.len();
        while let Some(&last) = pre.last() {
            let n = pre.len();
            if last != per[m - 1] || qsys.term(n) != qsys.term(n + m) {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Expansion {
            qsys: qsys.clone(),
            pre,
            per,
        }
    }

    fn twin(&self, tail: Tail, start: usize) -> Option<Expansion> {
        if start < 2 {
            return None;
        }
        let k = start - 1;
        let term = self.qsys.term(k);
        let digit = self.digit(k);
        // Moving off the tail digit in the direction that swaps inf and sup.
        let moved = match (tail, term.sign()) {
            (Tail::Min, Sign::Plus) | (Tail::Max, Sign::Minus) => digit - 1,
            (Tail::Min, Sign::Minus) | (Tail::Max, Sign::Plus) => digit + 1,
        };
        let mut prefix = self.prefix(k - 1);
        prefix.push(moved);
        Expansion::with_tail(self.qsys.clone(), prefix, tail.opposite()).ok()
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.stream().fmt(f)
    }
}

/// Exact value of an eventually periodic expansion.
pub fn eval_ep(exp: &Expansion) -> Rational {
    exp.value()
}

/// The two representations of a number that has more than one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPair {
    /// Ends in the minimal tail; the number is the infimum of the cylinder
    /// just before that tail. This is the encoder's representative.
    pub min_tail: Expansion,
    /// Ends in the maximal tail.
    pub max_tail: Expansion,
}

pub fn dual_representations(exp: &Expansion) -> Option<DualPair> {
    let exp = exp.reduced();
    for tail in [Tail::Min, Tail::Max] {
        if let Some(start) = exp.tail_start(tail) {
            let twin = exp.twin(tail, start)?;
            return Some(match tail {
                Tail::Min => DualPair {
                    min_tail: exp,
                    max_tail: twin,
                },
                Tail::Max => DualPair {
                    min_tail: twin,
                    max_tail: exp,
                },
            });
        }
    }
    None
}

/// Reduced form, choosing the minimal-tail twin when two representations
/// exist. This is the representation produced by the encoder.
pub fn canonicalize(exp: &Expansion) -> Expansion {
    let exp = exp.reduced();
    match exp
        .tail_start(Tail::Max)
        .and_then(|start| exp.twin(Tail::Max, start))
    {
        Some(twin) => twin,
        None => exp,
    }
}

/// `Lambda_{c_1 ... c_m}`: all numbers whose expansion starts with `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    qsys: QSystem,
    base: Vec<u64>,
}

impl Cylinder {
    pub fn new(qsys: QSystem, base: Vec<u64>) -> Result<Self> {
        check_admissible(&qsys, &base, 0)?;
        Ok(Cylinder { qsys, base })
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[u64] {
        &self.base
    }

    /// Closed interval `[lower, upper]`; rank 0 gives the whole `[a', a'']`.
    pub fn interval(&self) -> (Rational, Rational) {
        let m = self.base.len();
        let (num, product) = horner(&self.qsys, &self.base, 0);
        let value = Rational::new(num, product);
        let lower = &value - self.qsys.tail_sum(m, Selector::Negative);
        let upper = value + self.qsys.tail_sum(m, Selector::Positive);
        (lower, upper)
    }
}

pub fn cylinder_interval(cyl: &Cylinder) -> (Rational, Rational) {
    cyl.interval()
}
