//! `cantor-signs`: encode and evaluate sign-variable Cantor series from the
//! command line. Every command prints one line of compact JSON.

use std::process::ExitCode;

use cantor_signs::encode::{encode_with, Mode};
use cantor_signs::expansion::{dual_representations, Cylinder, DigitStream, Expansion};
use cantor_signs::oracle::roundtrip_report;
use cantor_signs::rational::{parse_rational, Rational};
use cantor_signs::{finite_criterion, Error, QSystem};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const CHECKED_ENV: &str = "CANTOR_SIGNS_CHECKED";
const VERIFY_DEPTH: usize = 30;

#[derive(Parser)]
#[command(
    name = "cantor-signs",
    version,
    about = "Sign-variable Cantor series expansions of rationals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArg {
    /// Base system: `pre:2+;per:3-`, inline JSON, or `@path` to a file holding either.
    #[arg(long)]
    system: String,
}

#[derive(Subcommand)]
enum Command {
    /// Expansion of a rational.
    Encode {
        #[command(flatten)]
        system: SystemArg,
        /// Rational `p/r` or integer.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Verify every digit and the final value against independent checks.
        #[arg(long)]
        checked: bool,
    },
    /// Exact value of a digit stream such as `1,2(3,4)`.
    Eval {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        digits: String,
    },
    /// Finite or eventually periodic, with the finite-expansion criterion.
    Classify {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Closed interval of all representable numbers.
    Bounds {
        #[command(flatten)]
        system: SystemArg,
    },
    /// Interval of numbers whose expansion starts with the given digits.
    Cylinder {
        #[command(flatten)]
        system: SystemArg,
        /// Comma-separated leading digits; empty for the whole range.
        #[arg(long, default_value = "")]
        base: String,
    },
    /// Both representations of a number that has two.
    Dual {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        digits: String,
    },
    /// Randomized round trips against the brute-force oracle.
    Verify {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest denominator drawn.
        #[arg(long, default_value_t = 500)]
        max_r: u64,
    },
    /// Built-in regression and randomized consistency checks.
    SelfTest {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failed command: exit code and message.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Parse(_) | Error::InvalidBase { .. } | Error::EmptyPeriod => 2,
            Error::BelowLowerBound { .. }
            | Error::AboveUpperBound { .. }
            | Error::NotPositive(_) => 3,
            Error::Inadmissible { .. } | Error::Misaligned { .. } => 4,
            Error::Inconsistent(_) => 5,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<String, Failure>;

/// Lowest terms as `p/r`; integers print without a denominator.
fn render(x: &Rational) -> String {
    x.to_string()
}

fn load_system(arg: &SystemArg) -> Result<QSystem, Failure> {
    let text = match arg.system.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure {
            code: 2,
            message: format!("cannot read system file {path}: {e}"),
        })?,
        None => arg.system.clone(),
    };
    let text = text.trim();
    if text.starts_with('{') {
        serde_json::from_str(text).map_err(|e| Failure {
            code: 2,
            message: format!("invalid system JSON: {e}"),
        })
    } else {
        Ok(text.parse()?)
    }
}

fn parse_digits(text: &str) -> Result<DigitStream, Failure> {
    Ok(text.parse()?)
}

fn json(value: &impl Serialize) -> CmdResult {
    serde_json::to_string(value).map_err(|e| Failure {
        code: 5,
        message: e.to_string(),
    })
}

#[derive(Serialize)]
struct EncodeOut {
    pre: Vec<u64>,
    per: Vec<u64>,
    n: usize,
    m: usize,
    finite: bool,
    value: String,
}

impl From<&Expansion> for EncodeOut {
    fn from(exp: &Expansion) -> Self {
        EncodeOut {
            pre: exp.preperiod().to_vec(),
            per: exp.period().to_vec(),
            n: exp.preperiod().len(),
            m: exp.period().len(),
            finite: exp.is_finite(),
            value: render(&exp.value()),
        }
    }
}

#[derive(Serialize)]
struct ValueOut {
    value: String,
}

#[derive(Serialize)]
struct ClassifyOut {
    finite: bool,
    n0: Option<usize>,
    preperiod: usize,
    period: usize,
}

#[derive(Serialize)]
struct IntervalOut {
    lower: String,
    upper: String,
}

#[derive(Serialize)]
struct DualOut {
    value: String,
    dual: bool,
    min_tail: Option<EncodeOut>,
    max_tail: Option<EncodeOut>,
}

#[derive(Serialize)]
struct FailureCase {
    system: String,
    x: String,
    encoded: Option<String>,
    oracle: Option<Vec<u64>>,
    reason: String,
}

#[derive(Serialize)]
struct VerifyOut {
    pass: usize,
    fail: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<FailureCase>,
}

fn checked_mode(flag: bool) -> Mode {
    let forced = std::env::var(CHECKED_ENV).is_ok_and(|v| v == "1");
    if flag || forced {
        Mode::Checked
    } else {
        Mode::Fast
    }
}

fn verify_one(qsys: &QSystem, x: &Rational) -> Option<FailureCase> {
    let report = roundtrip_report(x, qsys, VERIFY_DEPTH);
    if report.passed() {
        return None;
    }
    let reason = if report.encoded.is_none() {
        "encoder error"
    } else if report.bruteforce.is_none() {
        "oracle error"
    } else if !report.value_matches {
        "value mismatch"
    } else if !report.digits_agree {
        "oracle digits differ"
    } else {
        "shift identity fails"
    };
    Some(FailureCase {
        system: qsys.to_string(),
        x: render(x),
        encoded: report.encoded.map(|e| e.to_string()),
        oracle: report.bruteforce,
        reason: reason.to_string(),
    })
}

/// Uniform `p/r` inside the bounds, `r` uniform in `1..=max_r`.
fn random_value(rng: &mut impl Rng, qsys: &QSystem, max_r: u64) -> Rational {
    let bounds = qsys.bounds();
    let r = BigInt::from(rng.random_range(1..=max_r.max(1)));
    let lo = (bounds.lower.numer() * &r).div_ceil(bounds.lower.denom());
    let hi = (bounds.upper.numer() * &r).div_floor(bounds.upper.denom());
    let span = u64::try_from(&hi - &lo).expect("span is at most r");
    Rational::new(lo + rng.random_range(0..=span), r)
}

fn run_verify(cases: impl Iterator<Item = (QSystem, Rational)>) -> VerifyOut {
    let mut out = VerifyOut {
        pass: 0,
        fail: 0,
        failures: Vec::new(),
    };
    for (qsys, x) in cases {
        match verify_one(&qsys, &x) {
            None => out.pass += 1,
            Some(case) => {
                out.fail += 1;
                out.failures.push(case);
            }
        }
    }
    out
}

fn verify_result(out: VerifyOut) -> CmdResult {
    let text = json(&out)?;
    if out.fail > 0 {
        Err(Failure {
            code: 5,
            message: text,
        })
    } else {
        Ok(text)
    }
}

fn random_terms(rng: &mut impl Rng, len: usize) -> String {
    let terms: Vec<String> = (0..len)
        .map(|_| {
            let q = rng.random_range(2..=20);
            let sign = if rng.random_bool(0.5) { '-' } else { '+' };
            format!("{q}{sign}")
        })
        .collect();
    terms.join(",")
}

fn random_system(rng: &mut impl Rng) -> QSystem {
    let pre_len = rng.random_range(0..=4);
    let pre = random_terms(rng, pre_len);
    let per_len = rng.random_range(1..=6);
    let per = random_terms(rng, per_len);
    format!("pre:{pre};per:{per}")
        .parse()
        .expect("generated system is well formed")
}

/// Pinned worked examples: (system, x, expected stream).
const REGRESSIONS: &[(&str, &str, &str)] = &[
    ("pre:;per:2+,3-", "1/6", "1,2"),
    ("pre:;per:2-,2+", "-2/3", "(1,0)"),
    ("pre:;per:10+", "1/3", "(3)"),
    ("pre:;per:10+", "333/1000", "3,3,3"),
];

fn self_test(count: usize, seed: u64) -> CmdResult {
    let mut out = VerifyOut {
        pass: 0,
        fail: 0,
        failures: Vec::new(),
    };
    for (system, x, stream) in REGRESSIONS {
        let qsys: QSystem = system.parse()?;
        let x = parse_rational(x)?;
        let encoded = encode_with(&x, &qsys, Mode::Checked)
            .ok()
            .map(|e| e.to_string());
        if encoded.as_deref() == Some(*stream) {
            out.pass += 1;
        } else {
            out.fail += 1;
            out.failures.push(FailureCase {
                system: system.to_string(),
                x: render(&x),
                encoded,
                oracle: None,
                reason: format!("expected {stream}"),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(QSystem, Rational)> = (0..count)
        .map(|_| {
            let qsys = random_system(&mut rng);
            let x = random_value(&mut rng, &qsys, 500);
            (qsys, x)
        })
        .collect();
    let random = run_verify(cases.into_iter());
    out.pass += random.pass;
    out.fail += random.fail;
    out.failures.extend(random.failures);
    verify_result(out)
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Encode { system, x, checked } => {
            let qsys = load_system(&system)?;
            let x = parse_rational(&x)?;
            let exp = encode_with(&x, &qsys, checked_mode(checked))?;
            json(&EncodeOut::from(&exp))
        }
        Command::Eval { system, digits } => {
            let qsys = load_system(&system)?;
            let exp = Expansion::from_stream(qsys, parse_digits(&digits)?)?;
            json(&ValueOut {
                value: render(&exp.value()),
            })
        }
        Command::Classify { system, x } => {
            let qsys = load_system(&system)?;
            let x = parse_rational(&x)?;
            let exp = encode_with(&x, &qsys, checked_mode(false))?;
            json(&ClassifyOut {
                finite: exp.is_finite(),
                n0: finite_criterion(&x, &qsys),
                preperiod: exp.preperiod().len(),
                period: exp.period().len(),
            })
        }
        Command::Bounds { system } => {
            let bounds = load_system(&system)?.bounds();
            json(&IntervalOut {
                lower: render(&bounds.lower),
                upper: render(&bounds.upper),
            })
        }
        Command::Cylinder { system, base } => {
            let qsys = load_system(&system)?;
            let base = parse_digits(&base)?;
            if !base.per.is_empty() {
                return Err(Failure {
                    code: 2,
                    message: "cylinder base must be finite".into(),
                });
            }
            let (lower, upper) = Cylinder::new(qsys, base.pre)?.interval();
            json(&IntervalOut {
                lower: render(&lower),
                upper: render(&upper),
            })
        }
        Command::Dual { system, digits } => {
            let qsys = load_system(&system)?;
            let exp = Expansion::from_stream(qsys, parse_digits(&digits)?)?;
            let pair = dual_representations(&exp);
            json(&DualOut {
                value: render(&exp.value()),
                dual: pair.is_some(),
                min_tail: pair.as_ref().map(|p| EncodeOut::from(&p.min_tail)),
                max_tail: pair.as_ref().map(|p| EncodeOut::from(&p.max_tail)),
            })
        }
        Command::Verify {
            system,
            count,
            seed,
            max_r,
        } => {
            let qsys = load_system(&system)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values: Vec<Rational> = (0..count)
                .map(|_| random_value(&mut rng, &qsys, max_r))
                .collect();
            verify_result(run_verify(values.into_iter().map(|x| (qsys.clone(), x))))
        }
        Command::SelfTest { count, seed } => self_test(count, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        // Verification reports still go to stdout so failures can be replayed.
        Err(Failure { code: 5, message }) if message.starts_with('{') => {
            println!("{message}");
            ExitCode::from(5)
        }
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
