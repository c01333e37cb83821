//! Ready-made chains used across examples and tests.

use crate::chain::{validate, LegRates, Prob, Rates, SpiderParams, ValidatedChain};

/// Three-leg random walk with `a = 1/5`, `b = 11/20`, `c = 1/4` on every leg
/// and `alpha = (1/2, 1/8, 1/6, 5/24)` at the body. Positive recurrent, and
/// its reflecting-absorbing factorization thresholds are
/// `((19 - sqrt 41)/64, (19 - sqrt 41)/48, (95 - 5 sqrt 41)/192)`.
pub fn three_leg_walk_params() -> SpiderParams {
    SpiderParams {
        n_legs: 3,
        alpha: vec![
            Prob::ratio(1, 2),
            Prob::ratio(1, 8),
            Prob::ratio(1, 6),
            Prob::ratio(5, 24),
        ],
        legs: vec![
            LegRates::constant(Rates {
                a: Prob::ratio(1, 5),
                b: Prob::ratio(11, 20),
                c: Prob::ratio(1, 4),
            });
            3
        ],
    }
}

pub fn three_leg_walk() -> ValidatedChain {
    validate(three_leg_walk_params()).expect("preset is valid")
}

/// Constant-rate walk built from exact rationals `(numerator, denominator)`.
pub fn rational_walk(alpha: &[(i64, i64)], a: (i64, i64), c: (i64, i64)) -> SpiderParams {
    let a = Prob::ratio(a.0, a.1);
    let c = Prob::ratio(c.0, c.1);
    let b_exact = num_rational::Rational64::from_integer(1) - a.exact.unwrap() - c.exact.unwrap();
    let b = Prob::ratio(*b_exact.numer(), *b_exact.denom());
    SpiderParams {
        n_legs: alpha.len() - 1,
        alpha: alpha.iter().map(|&(p, q)| Prob::ratio(p, q)).collect(),
        legs: vec![LegRates::constant(Rates { a, b, c }); alpha.len() - 1],
    }
}
