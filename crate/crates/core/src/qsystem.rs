//! Base schedules: the sequence of bases `q_k` and the signs `a_k`.
//!
//! A [`QSystem`] is an eventually periodic list of [`QTerm`]s. Indices in
//! N_B (the negatively signed positions) are encoded by the sign carried on
//! each term, so infinite and cofinite N_B are both expressible.
//!
//! Text format: `pre:<q><s>,...;per:<q><s>,...` with `<s>` one of `+`/`-`,
//! e.g. `pre:;per:2+,3-`. JSON format:
//! `{"preperiod":[[5,-1]],"period":[[2,1],[3,-1]]}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(value: i64) -> Result<Self> {
        match value {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("sign must be 1 or -1, got {other}"))),
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One position of the schedule: base `q >= 2` and its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QTerm {
    q: u64,
    sign: Sign,
}

impl QTerm {
    pub fn new(q: u64, sign: Sign) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidBase { q });
        }
        Ok(QTerm { q, sign })
    }

    pub fn plus(q: u64) -> Result<Self> {
        Self::new(q, Sign::Plus)
    }

    pub fn minus(q: u64) -> Result<Self> {
        Self::new(q, Sign::Minus)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_negative(&self) -> bool {
        self.sign.is_negative()
    }

    pub fn max_digit(&self) -> u64 {
        self.q - 1
    }

    /// `a * digit` as a signed integer.
    pub fn signed(&self, digit: u64) -> BigInt {
        match self.sign {
            Sign::Plus => BigInt::from(digit),
            Sign::Minus => -BigInt::from(digit),
        }
    }
}

impl fmt::Display for QTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.q, self.sign.symbol())
    }
}

impl FromStr for QTerm {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Parse(format!("bad term {text:?}: expected <q>+ or <q>-"));
        let sign = match text.chars().last() {
            Some('+') => Sign::Plus,
            Some('-') => Sign::Minus,
            _ => return Err(bad()),
        };
        let q: u64 = text[..text.len() - 1].trim().parse().map_err(|_| bad())?;
        QTerm::new(q, sign)
    }
}

/// Which tail terms a [`QSystem::tail_sum`] includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Negative,
    Positive,
    All,
}

impl Selector {
    pub fn matches(self, sign: Sign) -> bool {
        match self {
            Selector::Negative => sign == Sign::Minus,
            Selector::Positive => sign == Sign::Plus,
            Selector::All => true,
        }
    }
}

/// The closed interval `[a', a'']` of representable numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Rational,
    pub upper: Rational,
}

impl Bounds {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn check(&self, x: &Rational) -> Result<()> {
        if x < &self.lower {
            Err(Error::BelowLowerBound {
                x: Box::new(x.clone()),
                lower: Box::new(self.lower.clone()),
            })
        } else if x > &self.upper {
            Err(Error::AboveUpperBound {
                x: Box::new(x.clone()),
                upper: Box::new(self.upper.clone()),
            })
        } else {
            Ok(())
        }
    }
}

/// Eventually periodic schedule of signed bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QSystemJson", into = "QSystemJson")]
pub struct QSystem {
    preperiod: Vec<QTerm>,
    period: Vec<QTerm>,
}

impl QSystem {
    pub fn new(preperiod: Vec<QTerm>, period: Vec<QTerm>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(QSystem { preperiod, period })
    }

    /// Purely periodic system.
    pub fn periodic(period: Vec<QTerm>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    /// Constant base with every sign positive: the ordinary base-`q` system.
    pub fn constant(q: u64) -> Result<Self> {
        Self::periodic(vec![QTerm::plus(q)?])
    }

    pub fn preperiod(&self) -> &[QTerm] {
        &self.preperiod
    }

    pub fn period(&self) -> &[QTerm] {
        &self.period
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Number of distinct schedule slots: preperiod plus one period.
    pub fn schedule_len(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    /// Slot of term `k` (1-based) in the concatenation `preperiod ++ period`.
    pub fn phase(&self, k: usize) -> usize {
        assert!(k >= 1, "terms are indexed from 1");
        let pre = self.preperiod.len();
        if k <= pre {
            k - 1
        } else {
            pre + (k - pre - 1) % self.period.len()
        }
    }

    /// The `k`-th term, 1-based.
    pub fn term(&self, k: usize) -> QTerm {
        let slot = self.phase(k);
        let pre = self.preperiod.len();
        if slot < pre {
            self.preperiod[slot]
        } else {
            self.period[slot - pre]
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = QTerm> + '_ {
        self.preperiod
            .iter()
            .copied()
            .chain(self.period.iter().copied().cycle())
    }

    pub fn is_all_positive(&self) -> bool {
        self.preperiod
            .iter()
            .chain(&self.period)
            .all(|t| !t.is_negative())
    }

    /// True when every sign in the period is negative, i.e. N_B is cofinite.
    pub fn has_negative_tail(&self) -> bool {
        self.period.iter().all(QTerm::is_negative)
    }

    /// `q_1 q_2 ... q_n`; one for `n = 0`.
    pub fn partial_product(&self, n: usize) -> BigUint {
        self.terms()
            .take(n)
            .fold(BigUint::one(), |acc, t| acc * t.q)
    }

    /// Exact value of `sum_{k > m, selected} (q_k - 1) / (q_1 ... q_k)`.
    ///
    /// Terms up to the end of the preperiod are summed directly; the purely
    /// periodic remainder satisfies `T = c/Pi + T/Pi` for one period block
    /// with integer contribution `c` and product `Pi`, so `T = c/(Pi - 1)`.
    pub fn tail_sum(&self, m: usize, selector: Selector) -> Rational {
        let split = m.max(self.preperiod.len());

        // head = head_num / head_den, relative to q_1 ... q_m
        let mut head_num = BigInt::zero();
        let mut head_den = BigInt::one();
        for k in m + 1..=split {
            let t = self.term(k);
            head_num *= t.q;
            head_den *= t.q;
            if selector.matches(t.sign) {
                head_num += t.q - 1;
            }
        }

        let mut block = BigInt::zero();
        let mut block_product = BigInt::one();
        for j in 1..=self.period.len() {
            let t = self.term(split + j);
            block *= t.q;
            block_product *= t.q;
            if selector.matches(t.sign) {
                block += t.q - 1;
            }
        }

        let outer = BigInt::from(self.partial_product(m));
        let pi_minus_one = block_product - 1;
        Rational::new(
            head_num * &pi_minus_one + block,
            pi_minus_one * head_den * outer,
        )
    }

    pub fn bounds(&self) -> Bounds {
        let lower = -self.tail_sum(0, Selector::Negative);
        let upper = &lower + Rational::one();
        Bounds { lower, upper }
    }
}

impl fmt::Display for QSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |terms: &[QTerm]| {
            terms
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "pre:{};per:{}",
            join(&self.preperiod),
            join(&self.period)
        )
    }
}

impl FromStr for QSystem {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || {
            Error::Parse(format!(
                "bad system {text:?}: expected pre:<terms>;per:<terms>"
            ))
        };
        let (pre, per) = text.split_once(';').ok_or_else(bad)?;
        let pre = pre.trim().strip_prefix("pre:").ok_or_else(bad)?;
        let per = per.trim().strip_prefix("per:").ok_or_else(bad)?;
        let parse_list = |list: &str| -> Result<Vec<QTerm>> {
            if list.trim().is_empty() {
                return Ok(Vec::new());
            }
            list.split(',').map(str::parse).collect()
        };
        QSystem::new(parse_list(pre)?, parse_list(per)?)
    }
}

#[derive(Serialize, Deserialize)]
struct QSystemJson {
    preperiod: Vec<(u64, i64)>,
    period: Vec<(u64, i64)>,
}

impl TryFrom<QSystemJson> for QSystem {
    type Error = Error;

    fn try_from(json: QSystemJson) -> Result<Self> {
        let convert = |terms: Vec<(u64, i64)>| -> Result<Vec<QTerm>> {
            terms
                .into_iter()
                .map(|(q, s)| QTerm::new(q, Sign::from_i64(s)?))
                .collect()
        };
        QSystem::new(convert(json.preperiod)?, convert(json.period)?)
    }
}

impl From<QSystem> for QSystemJson {
    fn from(qsys: QSystem) -> Self {
        let convert = |terms: &[QTerm]| {
            terms
                .iter()
                .map(|t| (t.q, i64::from(t.sign.as_i32())))
                .collect()
        };
        QSystemJson {
            preperiod: convert(&qsys.preperiod),
            period: convert(&qsys.period),
        }
    }
}
