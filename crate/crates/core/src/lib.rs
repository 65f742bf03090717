//! Exact arithmetic for sign-variable Cantor series.
//!
//! A number is written as
//!
//! ```text
//! x = sum_{k >= 1} a_k eps_k / (q_1 q_2 ... q_k),   eps_k in {0, ..., q_k - 1}
//! ```
//!
//! where the bases `q_k >= 2` and signs `a_k = +-1` come from an eventually
//! periodic [`QSystem`]. With every sign positive this is the ordinary
//! Cantor series; with a constant base it is the base-`q` expansion.
//!
//! - [`qsystem`]: schedules, partial products, exact tail sums, the interval
//!   `[a', a'']` of representable numbers.
//! - [`expansion`]: digit sequences, exact evaluation, cylinders, numbers
//!   with two representations, canonical form.
//! - [`shift`]: the shift operator and cycle detection on the shift numerators.
//! - [`encode`]: digit extraction for rationals, the finite-expansion test,
//!   and the positive-series encoder.
//! - [`oracle`]: brute-force reference paths used to check everything above.
//!
//! ```
//! use cantor_signs::{encode, rational::parse_rational, QSystem};
//!
//! let qsys: QSystem = "pre:;per:2+,3-".parse().unwrap();
//! let x = parse_rational("1/6").unwrap();
//! let exp = encode(&x, &qsys).unwrap();
//! assert_eq!(exp.to_string(), "1,2");
//! assert_eq!(exp.value(), x);
//! ```

pub mod encode;
pub mod error;
pub mod expansion;
pub mod oracle;
pub mod qsystem;
pub mod rational;
pub mod shift;

pub use encode::{encode, encode_with, finite_criterion, Mode};
pub use error::{Error, Result};
pub use expansion::{
    canonicalize, dual_representations, Cylinder, DigitStream, DualPair, Expansion, Tail,
};
pub use qsystem::{Bounds, QSystem, QTerm, Selector, Sign};
pub use rational::Rational;
pub use shift::{detect_cycle, CycleReport};
