//! Reflecting-absorbing factorization `P = P_R P_A` and the thresholds that
//! decide when it is stochastic.

mod darboux;

pub use darboux::{
    darboux, darboux_component_polys, darboux_polys, darboux_potential, geronimus_weight, x_matrix, DarbouxChain,
};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::chain::{leg_depth, SpiderParams, ValidatedChain};
use crate::error::{Error, FactorEntry, Result};
use crate::stieltjes::cf_limit;

/// Slack allowed on each factor entry outside `[0, 1]`.
pub const ENTRY_TOL: f64 = 1e-12;

/// Denominators smaller than this are treated as zero.
pub const DIVISION_TOL: f64 = 1e-13;

/// Consecutive factor entries closer than this on a constant tail are taken
/// to have reached the fixed point.
pub const LOCK_TOL: f64 = 1e-14;

/// Slack on `beta_m >= H_m` in [`beta_feasible`].
pub const THRESHOLD_SLACK: f64 = 1e-12;

pub const DEFAULT_DEPTH: usize = 100;

/// `beta_0, ..., beta_N` with `beta_0 = 1 - Σ_{m>=1} beta_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaVector(Vec<f64>);

impl BetaVector {
    /// From the free parameters `beta_1, ..., beta_N`.
    pub fn new(free: &[f64]) -> Result<Self> {
        if free.is_empty() {
            return Err(Error::InvalidBeta("at least one free parameter is needed".into()));
        }
        for (i, &b) in free.iter().enumerate() {
            if !(b > 0.0 && b <= 1.0) {
                return Err(Error::InvalidBeta(format!("beta_{} = {b} is not in (0, 1]", i + 1)));
            }
        }
        let beta0 = 1.0 - free.iter().sum::<f64>();
        if beta0 < -ENTRY_TOL {
            return Err(Error::InvalidBeta(format!("beta_0 = {beta0} is negative")));
        }
        let mut v = Vec::with_capacity(free.len() + 1);
        v.push(beta0.max(0.0));
        v.extend_from_slice(free);
        Ok(BetaVector(v))
    }

    /// `beta_m` for `m = 0..=N`.
    pub fn get(&self, m: usize) -> f64 {
        self.0[m]
    }

    pub fn n_legs(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Continued-fraction thresholds `H_1, ..., H_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub h: Vec<f64>,
    pub sum: f64,
    /// `Σ H_m < 1`, so some `beta` gives a stochastic factorization.
    pub feasible: bool,
}

pub fn thresholds(params: &SpiderParams, tol: f64) -> Result<Thresholds> {
    let h = (1..=params.n_legs)
        .map(|m| cf_limit(params, m, tol).map(|l| l.value))
        .collect::<Result<Vec<_>>>()?;
    let sum = h.iter().sum();
    Ok(Thresholds { h, sum, feasible: sum < 1.0 })
}

/// `beta_m >= H_m - 1e-12` for every leg.
pub fn beta_feasible(th: &Thresholds, beta: &BetaVector) -> bool {
    th.h.iter().enumerate().all(|(i, &h)| beta.get(i + 1) >= h - THRESHOLD_SLACK)
}

/// Factor entries of one leg for depths `1..=len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegFactors {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    /// Depth from which the entries repeat forever.
    pub locked_from: Option<usize>,
}

impl LegFactors {
    fn get(&self, depth: usize, e: FactorEntry) -> Option<f64> {
        let seq = match e {
            FactorEntry::X => &self.x,
            FactorEntry::Y => &self.y,
            FactorEntry::R => &self.r,
            FactorEntry::S => &self.s,
        };
        if depth == 0 {
            return None;
        }
        match self.locked_from {
            Some(d) if depth >= d => seq.get(d - 1).copied(),
            _ => seq.get(depth - 1).copied(),
        }
    }
}

/// Sequences `x, y, r, s` per leg and the blocks of `P_R` and `P_A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorPair {
    pub n_legs: usize,
    pub beta: BetaVector,
    pub legs: Vec<LegFactors>,
    /// Block levels `0..=levels` of `X`, `Y` and `1..=levels + 1` of `S`, `R`
    /// are available.
    pub levels: usize,
}

impl FactorPair {
    /// `x_{depth,leg}` etc.
    pub fn entry(&self, leg: usize, depth: usize, e: FactorEntry) -> Result<f64> {
        self.legs[leg - 1].get(depth, e).ok_or(Error::FactorDepth(depth))
    }

    fn level_diag(&self, level: usize, e: FactorEntry) -> Result<DMatrix<f64>> {
        let n = self.n_legs;
        let mut m = DMatrix::zeros(n, n);
        for p in 0..n {
            let (leg, depth) = leg_depth(n, level, p);
            m[(p, p)] = self.entry(leg, depth, e)?;
        }
        Ok(m)
    }

    /// `Y_0` is upper arrow: first row `beta_0..beta_{N-1}`, diagonal `y_{1,k}`.
    pub fn y_block(&self, level: usize) -> Result<DMatrix<f64>> {
        if level > 0 {
            return self.level_diag(level, FactorEntry::Y);
        }
        let n = self.n_legs;
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            m[(0, j)] = self.beta.get(j);
        }
        for k in 1..n {
            m[(k, k)] = self.entry(k, 1, FactorEntry::Y)?;
        }
        Ok(m)
    }

    /// `X_0 = diag(beta_N, x_{1,1}, ..., x_{1,N-1})`.
    pub fn x_block(&self, level: usize) -> Result<DMatrix<f64>> {
        if level > 0 {
            return self.level_diag(level, FactorEntry::X);
        }
        let mut m = DMatrix::zeros(self.n_legs, self.n_legs);
        for k in 1..self.n_legs {
            m[(k, k)] = self.entry(k, 1, FactorEntry::X)?;
        }
        m[(0, 0)] = self.beta.get(self.n_legs);
        Ok(m)
    }

    /// `S_0` is lower arrow: `1` in the corner, `r_{1,k}` down the first
    /// column, `s_{1,k}` on the diagonal.
    pub fn s_block(&self, level: usize) -> Result<DMatrix<f64>> {
        if level > 0 {
            return self.level_diag(level, FactorEntry::S);
        }
        let n = self.n_legs;
        let mut m = DMatrix::identity(n, n);
        for k in 1..n {
            m[(k, 0)] = self.entry(k, 1, FactorEntry::R)?;
            m[(k, k)] = self.entry(k, 1, FactorEntry::S)?;
        }
        Ok(m)
    }

    /// `R_n` for `n >= 1`.
    pub fn r_block(&self, level: usize) -> Result<DMatrix<f64>> {
        assert!(level >= 1, "R blocks start at level 1");
        self.level_diag(level, FactorEntry::R)
    }

    /// `S_0^{-1}`.
    pub fn s0_inverse(&self) -> Result<DMatrix<f64>> {
        let n = self.n_legs;
        let mut m = DMatrix::identity(n, n);
        for k in 1..n {
            let s = self.entry(k, 1, FactorEntry::S)?;
            let r = self.entry(k, 1, FactorEntry::R)?;
            m[(k, 0)] = -r / s;
            m[(k, k)] = 1.0 / s;
        }
        Ok(m)
    }
}

fn check_entry(v: f64, depth: usize, leg: usize, entry: FactorEntry) -> Result<f64> {
    if v.is_finite() && (-ENTRY_TOL..=1.0 + ENTRY_TOL).contains(&v) {
        Ok(v)
    } else {
        Err(Error::NotStochastic { depth, leg, entry, value: v })
    }
}

fn divide(num: f64, den: f64, depth: usize, leg: usize) -> Result<f64> {
    if den.abs() < DIVISION_TOL {
        Err(Error::DegenerateDivision { depth, leg })
    } else {
        Ok(num / den)
    }
}

fn factor_leg(chain: &ValidatedChain, beta: &BetaVector, leg: usize, max_depth: usize) -> Result<LegFactors> {
    let tail_start = chain.legs[leg - 1].tail_start();
    let mut f = LegFactors {
        x: Vec::with_capacity(max_depth),
        y: Vec::with_capacity(max_depth),
        r: Vec::with_capacity(max_depth),
        s: Vec::with_capacity(max_depth),
        locked_from: None,
    };
    let mut s = check_entry(divide(chain.alpha(leg), beta.get(leg), 1, leg)?, 1, leg, FactorEntry::S)?;
    for k in 1..=max_depth {
        let rates = chain.rates(leg, k);
        let r = check_entry(1.0 - s, k, leg, FactorEntry::R)?;
        let y = check_entry(divide(rates.c, r, k, leg)?, k, leg, FactorEntry::Y)?;
        let x = check_entry(1.0 - y, k, leg, FactorEntry::X)?;
        f.s.push(s);
        f.r.push(r);
        f.y.push(y);
        f.x.push(x);
        if k >= 2 && k > tail_start {
            let i = k - 1;
            let moved = (f.x[i] - f.x[i - 1])
                .abs()
                .max((f.y[i] - f.y[i - 1]).abs())
                .max((f.r[i] - f.r[i - 1]).abs())
                .max((f.s[i] - f.s[i - 1]).abs());
            if moved < LOCK_TOL {
                f.locked_from = Some(k);
                return Ok(f);
            }
        }
        if k < max_depth {
            s = check_entry(divide(rates.a, x, k, leg)?, k + 1, leg, FactorEntry::S)?;
        }
    }
    Ok(f)
}

/// Solve `P = P_R P_A` leg by leg: `s_1 = alpha/beta`, `r = 1 - s`,
/// `y = c/r`, `x = 1 - y`, `s_{k+1} = a_k/x_k`. Blocks are available up to
/// level `levels` (and one more for `R`, `S`).
pub fn ul_factorize(chain: &ValidatedChain, beta: &BetaVector, levels: usize) -> Result<FactorPair> {
    let n = chain.n_legs;
    if beta.n_legs() != n {
        return Err(Error::InvalidBeta(format!("{} free parameters for {n} legs", beta.n_legs())));
    }
    let legs = (1..=n)
        .map(|m| factor_leg(chain, beta, m, levels + 2))
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorPair {
        n_legs: n,
        beta: beta.clone(),
        legs,
        levels,
    })
}

/// Largest entrywise `|P - P_R P_A|` over block levels `0..=levels`.
pub fn verify_product(chain: &ValidatedChain, pair: &FactorPair, levels: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..=levels {
        let t = chain.blocks(n);
        let (x, y, s) = (pair.x_block(n)?, pair.y_block(n)?, pair.s_block(n)?);
        let s_next = pair.s_block(n + 1)?;
        let r_next = pair.r_block(n + 1)?;
        worst = worst.max((&t.a - &x * &s_next).amax());
        worst = worst.max((&t.b - (&x * &r_next + &y * &s)).amax());
        if let Some(c) = &t.c {
            worst = worst.max((c - &y * pair.r_block(n)?).amax());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Prob;
    use crate::presets::{three_leg_walk, three_leg_walk_params};

    fn beta() -> BetaVector {
        BetaVector::new(&[0.25, 0.3, 0.35]).unwrap()
    }

    #[test]
    fn beta_zero_is_derived() {
        let b = beta();
        assert!((b.get(0) - 0.1).abs() < 1e-15);
        assert!(BetaVector::new(&[0.6, 0.6]).is_err());
        assert!(BetaVector::new(&[0.0, 0.5]).is_err());
    }

    #[test]
    fn hand_executed_first_entries() {
        let p = ul_factorize(&three_leg_walk(), &beta(), 10).unwrap();
        let e = |d, k| p.entry(1, d, k).unwrap();
        for (v, want) in [
            (e(1, FactorEntry::S), 0.5),
            (e(1, FactorEntry::R), 0.5),
            (e(1, FactorEntry::Y), 0.5),
            (e(1, FactorEntry::X), 0.5),
            (e(2, FactorEntry::S), 0.4),
            (e(2, FactorEntry::Y), 5.0 / 12.0),
        ] {
            assert!((v - want).abs() < 1e-15, "{v} vs {want}");
        }
    }

    #[test]
    fn beta_equal_alpha_divides_by_zero() {
        let b = BetaVector::new(&[0.125, 0.3, 0.35]).unwrap();
        assert_eq!(
            ul_factorize(&three_leg_walk(), &b, 10).unwrap_err(),
            Error::DegenerateDivision { depth: 1, leg: 1 }
        );
    }

    #[test]
    fn below_threshold_is_not_stochastic() {
        let b = BetaVector::new(&[0.19, 0.3, 0.35]).unwrap();
        match ul_factorize(&three_leg_walk(), &b, 100) {
            Err(Error::NotStochastic { leg, .. }) => assert_eq!(leg, 1),
            other => panic!("expected NotStochastic, got {other:?}"),
        }
    }

    #[test]
    fn product_residual_and_detector() {
        let chain = three_leg_walk();
        let mut pair = ul_factorize(&chain, &beta(), 50).unwrap();
        assert!(verify_product(&chain, &pair, 50).unwrap() < 1e-12);
        pair.legs[1].s[2] += 1e-3;
        assert!(verify_product(&chain, &pair, 50).unwrap() >= 1e-4);
    }

    #[test]
    fn reference_thresholds_by_convergents() {
        let th = thresholds(&three_leg_walk_params(), 1e-14).unwrap();
        assert!((th.h[1] - (19.0 - 41f64.sqrt()) / 48.0).abs() < 1e-12);
        assert!(th.feasible && (th.sum - 0.787).abs() < 1e-3);
    }

    #[test]
    fn legs_without_mass_have_zero_threshold() {
        let mut p = three_leg_walk_params();
        p.alpha = vec![Prob::ratio(1, 2), Prob::float(0.0), Prob::float(0.0), Prob::ratio(1, 2)];
        let th = thresholds(&p, 1e-14).unwrap();
        assert_eq!((th.h[0], th.h[1]), (0.0, 0.0));
    }

    #[test]
    fn blocks_have_arrow_shapes() {
        let p = ul_factorize(&three_leg_walk(), &beta(), 5).unwrap();
        let y0 = p.y_block(0).unwrap();
        assert_eq!(y0[(1, 0)], 0.0);
        assert!((y0[(0, 2)] - 0.3).abs() < 1e-15);
        let s0 = p.s_block(0).unwrap();
        assert_eq!(s0[(0, 1)], 0.0);
        assert_eq!(s0[(0, 0)], 1.0);
        assert!((&s0 * p.s0_inverse().unwrap() - DMatrix::identity(3, 3)).amax() < 1e-15);
        assert_eq!(p.x_block(0).unwrap()[(0, 0)], 0.35);
        for n in 0..4 {
            let (x, y) = (p.x_block(n).unwrap(), p.y_block(n).unwrap());
            let sums = x.column_sum() + y.column_sum();
            assert!(sums.iter().all(|s| (s - 1.0).abs() < 1e-12));
        }
    }
}
