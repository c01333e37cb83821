use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A probability as read from a chain description.
///
/// Values written as `"p/q"` strings keep their exact rational form next to
/// the binary float; the float is what every computation uses. The exact form
/// only matters where a decision is discontinuous (e.g. `a == c`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prob {
    pub value: f64,
    pub exact: Option<Rational64>,
}

impl Prob {
    pub fn float(value: f64) -> Self {
        Prob { value, exact: None }
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        let r = Rational64::new(numer, denom);
        Prob {
            value: *r.numer() as f64 / *r.denom() as f64,
            exact: Some(r),
        }
    }
}

impl From<f64> for Prob {
    fn from(value: f64) -> Self {
        Prob::float(value)
    }
}

impl FromStr for Prob {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpec(format!("cannot parse probability {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Prob::ratio(p, q));
        }
        if let Ok(p) = s.parse::<i64>() {
            return Ok(Prob::ratio(p, 1));
        }
        s.parse::<f64>().map(Prob::float).map_err(|_| bad())
    }
}

impl Serialize for Prob {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.exact {
            Some(r) if *r.denom() == 1 => serializer.serialize_str(&r.numer().to_string()),
            Some(r) => serializer.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
            None => serializer.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Prob {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ProbVisitor;

        impl Visitor<'_> for ProbVisitor {
            type Value = Prob;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a \"p/q\" string")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Prob, E> {
                Ok(Prob::float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Prob, E> {
                Ok(Prob::ratio(v, 1))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Prob, E> {
                Ok(Prob::ratio(v as i64, 1))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Prob, E> {
                v.parse().map_err(|e: Error| E::custom(e.to_string()))
            }
        }

        deserializer.deserialize_any(ProbVisitor)
    }
}

/// Up (`a`), stay (`b`) and down (`c`) probabilities at one leg site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Prob; 3]", into = "[Prob; 3]")]
pub struct Rates {
    pub a: Prob,
    pub b: Prob,
    pub c: Prob,
}

impl From<[Prob; 3]> for Rates {
    fn from([a, b, c]: [Prob; 3]) -> Self {
        Rates { a, b, c }
    }
}

impl From<Rates> for [Prob; 3] {
    fn from(r: Rates) -> Self {
        [r.a, r.b, r.c]
    }
}

impl Rates {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Rates {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn values(&self) -> RateTriple {
        RateTriple {
            a: self.a.value,
            b: self.b.value,
            c: self.c.value,
        }
    }
}

/// Plain float view of [`Rates`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Rates along one leg: an explicit prefix for depths `1..=prefix.len()`,
/// then `tail` forever after.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegRates {
    #[serde(default)]
    pub prefix: Vec<Rates>,
    pub tail: Rates,
}

impl LegRates {
    pub fn constant(tail: Rates) -> Self {
        LegRates {
            prefix: Vec::new(),
            tail,
        }
    }

    /// Rates at `depth >= 1`.
    pub fn at(&self, depth: usize) -> &Rates {
        debug_assert!(depth >= 1);
        self.prefix.get(depth - 1).unwrap_or(&self.tail)
    }

    /// First depth from which the rates are the tail.
    pub fn tail_start(&self) -> usize {
        self.prefix.len() + 1
    }
}

/// Defining probabilities of a birth-death chain on a spider with `n_legs` legs.
///
/// `alpha[0]` is the probability of staying at the body and `alpha[m]` that
/// of stepping onto leg `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpiderParams {
    #[serde(rename = "N")]
    pub n_legs: usize,
    pub alpha: Vec<Prob>,
    pub legs: Vec<LegRates>,
}

impl SpiderParams {
    /// Random walk with the same `(a, b, c)` at every leg site.
    pub fn constant(alpha: &[f64], a: f64, b: f64, c: f64) -> Self {
        let n_legs = alpha.len().saturating_sub(1);
        SpiderParams {
            n_legs,
            alpha: alpha.iter().map(|&x| Prob::float(x)).collect(),
            legs: vec![LegRates::constant(Rates::new(a, b, c)); n_legs],
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain parameters always serialize")
    }

    pub fn alpha(&self, m: usize) -> f64 {
        self.alpha[m].value
    }

    /// Rates on leg `leg` (1-based) at `depth >= 1`.
    pub fn rates(&self, leg: usize, depth: usize) -> RateTriple {
        self.legs[leg - 1].at(depth).values()
    }

    /// `a_{depth,leg}` with the convention `a_{0,leg} = alpha_leg`.
    pub fn up(&self, leg: usize, depth: usize) -> f64 {
        if depth == 0 {
            self.alpha(leg)
        } else {
            self.rates(leg, depth).a
        }
    }

    /// Common `(a, b, c)` if every leg site shares it.
    pub fn constant_rates(&self) -> Option<Rates> {
        let first = self.legs.first()?.tail;
        let same = |r: &Rates| r.values() == first.values();
        self.legs
            .iter()
            .all(|leg| same(&leg.tail) && leg.prefix.iter().all(same))
            .then_some(first)
    }
}
