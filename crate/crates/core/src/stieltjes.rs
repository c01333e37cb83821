//! Stieltjes transforms `B(z; w) = ∫ dw(x) / (x - z)`, their assembly from
//! per-leg transforms, and the continued fractions bounding factorizations.

use nalgebra::{Complex, DMatrix};

use crate::chain::{RateTriple, SpiderParams};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::weight::WeightMatrixSpec;

pub type C64 = Complex<f64>;

/// Minimum distance between an evaluation point and the measure.
pub const POLE_DISTANCE: f64 = 1e-9;

/// Threshold below which an assembly denominator counts as zero.
pub const SINGULAR_TOL: f64 = 1e-13;

/// Default stopping tolerance for [`cf_limit`].
pub const CF_TOL: f64 = 1e-14;

/// Depth cap for [`cf_limit`].
pub const CF_MAX_DEPTH: usize = 1_000_000;

/// `sqrt(z - hi) * sqrt(z - lo)` with principal roots: analytic off
/// `[lo, hi]` and asymptotic to `z` at infinity.
pub fn branch_sqrt(z: C64, lo: f64, hi: f64) -> C64 {
    (z - hi).sqrt() * (z - lo).sqrt()
}

/// Support `[b - 2 sqrt(ac), b + 2 sqrt(ac)]` of a constant-rate leg.
pub fn constant_leg_support(r: RateTriple) -> (f64, f64) {
    let w = 2.0 * (r.a * r.c).sqrt();
    (r.b - w, r.b + w)
}

/// Transform of a leg whose rates are `(a, b, c)` from its first site on:
/// the root of `ac F^2 + (z - b) F + 1 = 0` that vanishes at infinity.
pub fn constant_leg_transform(r: RateTriple, z: C64) -> C64 {
    let (lo, hi) = constant_leg_support(r);
    // (b - z + s) / (2ac), rationalized with (b - z)^2 - s^2 = 4ac.
    2.0 / (r.b - z - branch_sqrt(z, lo, hi))
}

/// `∫ dW(x) / (x - z)` by quadrature plus exact atom terms.
pub fn stieltjes_weight(weight: &WeightMatrixSpec, z: C64, rule: &QuadratureRule) -> Result<DMatrix<C64>> {
    let dist = {
        let re = weight.distance_to(z.re);
        (re * re + z.im * z.im).sqrt()
    };
    if dist < POLE_DISTANCE {
        return Err(Error::PoleTooClose { distance: dist });
    }
    let n = weight.dim;
    // Real and imaginary parts stacked so one refinement check covers both.
    let stacked = weight.integrate_with(rule, |x, dw| {
        let d = (x - z.re).powi(2) + z.im * z.im;
        let mut out = DMatrix::zeros(2 * n, n);
        out.view_mut((0, 0), (n, n)).copy_from(&(dw * ((x - z.re) / d)));
        out.view_mut((n, 0), (n, n)).copy_from(&(dw * (z.im / d)));
        out
    })?;
    Ok(DMatrix::from_fn(n, n, |i, j| C64::new(stacked[(i, j)], stacked[(n + i, j)])))
}

/// Block assembly of `B(z; W)` from the leg transforms `B(z; w_k)`.
///
/// With `bb = 1 / (1/B_N - Σ_k alpha_k c_{1,k} B_k)` the result is
/// `[[bb, -bb c^T B_D], [-B_D c bb, B_D c_D alpha_D^{-1} + bb B_D c c^T B_D]]`
/// where `D` runs over legs `1..N-1`.
pub fn assemble_stieltjes<F>(params: &SpiderParams, leg_transforms: F, z: C64) -> Result<DMatrix<C64>>
where
    F: Fn(usize, C64) -> C64,
{
    let n = params.n_legs;
    let b_n = leg_transforms(n, z);
    let bd: Vec<C64> = (1..n).map(|k| leg_transforms(k, z)).collect();
    let cd: Vec<f64> = (1..n).map(|k| params.rates(k, 1).c).collect();
    let mut sum = C64::new(0.0, 0.0);
    for k in 1..n {
        sum += params.alpha(k) * cd[k - 1] * bd[k - 1];
    }
    // bb = B_N / (1 - B_N Σ) keeps B_N = 0 well defined.
    let den = C64::new(1.0, 0.0) - b_n * sum;
    if den.norm() < SINGULAR_TOL || !den.is_finite() {
        return Err(Error::SingularAssembly);
    }
    let bb = b_n / den;
    let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    m[(0, 0)] = bb;
    for k in 1..n {
        let u = bd[k - 1] * cd[k - 1];
        m[(0, k)] = -bb * u;
        m[(k, 0)] = -bb * u;
        m[(k, k)] = u / params.alpha(k);
        for j in 1..n {
            m[(k, j)] += bb * u * bd[j - 1] * cd[j - 1];
        }
    }
    Ok(m)
}

/// `B(z; w_leg)` from the transform of the associated measure `w_leg^(0)`.
pub fn leg_transform_relations(params: &SpiderParams, leg: usize, assoc_transform: C64, z: C64) -> Result<C64> {
    let n = params.n_legs;
    let den = if leg == n {
        z - params.alpha(0) + params.alpha(n) * params.rates(n, 1).c * assoc_transform
    } else {
        let r1 = params.rates(leg, 1);
        z - r1.b + r1.a * params.rates(leg, 2).c * assoc_transform
    };
    if den.norm() < SINGULAR_TOL {
        return Err(Error::SingularAssembly);
    }
    Ok(-1.0 / den)
}

/// Transform of the leg chain restarted at `depth`: a backward continued
/// fraction through the prefix, closed by the constant tail.
fn leg_from_depth(params: &SpiderParams, leg: usize, depth: usize, z: C64) -> C64 {
    let rates = &params.legs[leg - 1];
    let start = rates.tail_start();
    let mut f = constant_leg_transform(rates.tail.values(), z);
    let mut j = start;
    while j > depth {
        j -= 1;
        let r = params.rates(leg, j);
        let c_next = params.rates(leg, j + 1).c;
        f = -1.0 / (z - r.b + r.a * c_next * f);
    }
    f
}

/// `B(z; w_leg^(0))` for an eventually constant leg.
pub fn assoc_leg_stieltjes(params: &SpiderParams, leg: usize, z: C64) -> C64 {
    if leg == params.n_legs {
        leg_from_depth(params, leg, 1, z)
    } else {
        leg_from_depth(params, leg, 2, z)
    }
}

/// `B(z; w_leg)` for an eventually constant leg.
pub fn leg_stieltjes(params: &SpiderParams, leg: usize, z: C64) -> Result<C64> {
    leg_transform_relations(params, leg, assoc_leg_stieltjes(params, leg, z), z)
}

/// `B(z; W)` of any eventually constant chain via the block assembly.
pub fn chain_stieltjes(params: &SpiderParams, z: C64) -> Result<DMatrix<C64>> {
    let legs = (1..=params.n_legs)
        .map(|k| leg_stieltjes(params, k, z))
        .collect::<Result<Vec<_>>>()?;
    assemble_stieltjes(params, |k, _| legs[k - 1], z)
}

/// Numerators `A_n`, denominators `B_n` and convergents `h_n = A_n / B_n`
/// for `n = 0..=depth`. `A_{-1} = -1` and `B_{-1} = 0` are implicit.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergentState {
    pub leg: usize,
    pub numerators: Vec<f64>,
    pub denominators: Vec<f64>,
    pub convergents: Vec<f64>,
    /// `0 < A_n < B_n` held for every `n >= 1` computed.
    pub hypothesis_holds: bool,
    /// `h_n < h_{n+1}` held for every computed pair.
    pub strictly_increasing: bool,
}

/// Coefficient multiplying `(A_{n-2}, B_{n-2})` at step `n >= 1`:
/// `a_k` for `n = 2k + 1` (with `a_0 = alpha_m`), `c_k` for `n = 2k`.
fn cf_coefficient(params: &SpiderParams, leg: usize, n: usize) -> f64 {
    let k = n / 2;
    if n % 2 == 1 {
        params.up(leg, k)
    } else {
        params.rates(leg, k).c
    }
}

/// Takes raw parameters so that degenerate legs (`alpha_m = 0`) can be
/// inspected.
pub fn convergents(params: &SpiderParams, leg: usize, depth: usize) -> ConvergentState {
    let mut num = vec![0.0];
    let mut den = vec![1.0];
    let (mut num_prev, mut den_prev) = (-1.0, 0.0);
    for n in 1..=depth {
        let k = cf_coefficient(params, leg, n);
        let (a_cur, b_cur) = (num[n - 1], den[n - 1]);
        num.push(a_cur - k * num_prev);
        den.push(b_cur - k * den_prev);
        num_prev = a_cur;
        den_prev = b_cur;
    }
    let convergents: Vec<f64> = num.iter().zip(&den).map(|(a, b)| a / b).collect();
    let hypothesis_holds = (1..=depth).all(|n| 0.0 < num[n] && num[n] < den[n]);
    let strictly_increasing = convergents.windows(2).all(|w| w[0] < w[1]);
    ConvergentState {
        leg,
        numerators: num,
        denominators: den,
        convergents,
        hypothesis_holds,
        strictly_increasing,
    }
}

/// Limit of the convergents and how it was reached.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CfLimit {
    pub value: f64,
    /// Index of the last convergent computed.
    pub depth: usize,
    /// The sequence was strictly increasing and below one throughout, so the
    /// limit exists.
    pub certified: bool,
}

/// Iterate convergents until two consecutive ones differ by less than `tol`.
///
/// Numerators and denominators are rescaled jointly when they become tiny;
/// the ratios are unaffected.
pub fn cf_limit(params: &SpiderParams, leg: usize, tol: f64) -> Result<CfLimit> {
    if params.alpha(leg) == 0.0 {
        return Ok(CfLimit {
            value: 0.0,
            depth: 0,
            certified: true,
        });
    }
    let (mut a_prev, mut b_prev) = (-1.0f64, 0.0f64);
    let (mut a_cur, mut b_cur) = (0.0f64, 1.0f64);
    let mut h_prev = 0.0;
    let mut certified = true;
    for n in 1..=CF_MAX_DEPTH {
        let k = cf_coefficient(params, leg, n);
        let a_next = a_cur - k * a_prev;
        let b_next = b_cur - k * b_prev;
        if !(0.0 < a_next && a_next < b_next) {
            return Err(Error::HypothesisViolated { leg, depth: n });
        }
        let h = a_next / b_next;
        if h <= h_prev || h >= 1.0 {
            certified = false;
        }
        if n >= 2 && (h - h_prev).abs() < tol {
            return Ok(CfLimit {
                value: h,
                depth: n,
                certified,
            });
        }
        (a_prev, b_prev, a_cur, b_cur) = (a_cur, b_cur, a_next, b_next);
        let scale = b_cur.abs().max(b_prev.abs());
        if scale < 1e-150 {
            let f = 1.0 / scale;
            a_prev *= f;
            b_prev *= f;
            a_cur *= f;
            b_cur *= f;
        }
        h_prev = h;
    }
    Err(Error::DepthExceeded {
        leg,
        depth: CF_MAX_DEPTH,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Prob;
    use crate::presets::three_leg_walk_params;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn single_atom_transform() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
        let w = WeightMatrixSpec::discrete(2, vec![crate::weight::Atom { location: 0.0, mass: m.clone() }]);
        let got = stieltjes_weight(&w, c(0.0, 2.0), &QuadratureRule::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((got[(i, j)] - c(0.0, 0.5) * m[(i, j)]).norm() < 1e-15);
            }
        }
        assert!(matches!(
            stieltjes_weight(&w, c(1e-12, 0.0), &QuadratureRule::default()),
            Err(Error::PoleTooClose { .. })
        ));
    }

    #[test]
    fn zero_associated_transform() {
        let p = three_leg_walk_params();
        let z = c(0.3, 0.2);
        let v = leg_transform_relations(&p, 1, c(0.0, 0.0), z).unwrap();
        assert!((v + 1.0 / (z - 0.55)).norm() < 1e-15);
    }

    #[test]
    fn leg_transforms_are_conjugate_symmetric() {
        let p = three_leg_walk_params();
        for leg in 1..=3 {
            let z = c(0.4, 0.3);
            let u = leg_stieltjes(&p, leg, z).unwrap();
            let v = leg_stieltjes(&p, leg, z.conj()).unwrap();
            assert!((u.conj() - v).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_leg_transform_is_its_own_associate() {
        // For constant legs B(z; w_k) = B(z; w_k^(0)).
        let p = three_leg_walk_params();
        let z = c(3.0, 0.0);
        let assoc = assoc_leg_stieltjes(&p, 1, z);
        let full = leg_stieltjes(&p, 1, z).unwrap();
        assert!((assoc - full).norm() < 1e-14);
    }

    #[test]
    fn single_leg_assembly_is_scalar() {
        let p = SpiderParams::constant(&[0.3, 0.7], 0.4, 0.1, 0.5);
        let z = c(0.2, 0.9);
        let m = assemble_stieltjes(&p, |k, z| leg_stieltjes(&p, k, z).unwrap(), z).unwrap();
        assert_eq!(m.shape(), (1, 1));
        assert!((m[(0, 0)] - leg_stieltjes(&p, 1, z).unwrap()).norm() < 1e-15);
        let far = chain_stieltjes(&p, c(1e6, 0.0)).unwrap();
        assert!((far[(0, 0)] * 1e6 + 1.0).norm() < 1e-6);
    }

    #[test]
    fn first_convergents() {
        let p = three_leg_walk_params();
        let s = convergents(&p, 1, 6);
        assert_eq!(s.convergents[0], 0.0);
        assert!((s.convergents[1] - 0.125).abs() < 1e-16);
        assert!((s.convergents[2] - 1.0 / 6.0).abs() < 1e-16);
        assert!(s.hypothesis_holds && s.strictly_increasing);
    }

    #[test]
    fn degenerate_leg_limit_is_zero() {
        let mut p = three_leg_walk_params();
        p.alpha[1] = Prob::float(0.0);
        p.alpha[0] = Prob::ratio(5, 8);
        assert_eq!(cf_limit(&p, 1, CF_TOL).unwrap().value, 0.0);
        assert!(convergents(&p, 1, 4).convergents.iter().all(|&h| h == 0.0));
    }

    #[test]
    fn limit_matches_period_two_closed_form() {
        let p = three_leg_walk_params();
        let lim = cf_limit(&p, 1, CF_TOL).unwrap();
        assert!(lim.certified);
        assert!((lim.value - (19.0 - 41f64.sqrt()) / 64.0).abs() < 1e-12, "{}", lim.value);
    }
}
