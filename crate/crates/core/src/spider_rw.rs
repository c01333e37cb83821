//! Closed forms for the random walk on a spider with the same `(a, b, c)` at
//! every leg site.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::{ComplexField, DMatrix, DVector};
use num_rational::Rational64;
use serde::Serialize;

use crate::chain::{validate, SpiderParams, ValidatedChain};
use crate::error::{Error, Result};
use crate::quadrature::RuleKind;
use crate::stieltjes::{
    assemble_stieltjes, branch_sqrt, cf_limit, constant_leg_transform, C64, CF_TOL, POLE_DISTANCE,
};
use crate::weight::WeightMatrixSpec;

/// Denominators closer to zero than this get the node guard.
const GUARD_TOL: f64 = 1e-13;

/// Parameters of the constant-rate walk.
#[derive(Debug, Clone, PartialEq)]
pub struct RWParams {
    pub n_legs: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: Vec<f64>,
    /// Exact `(a, c)` when both were given as rationals.
    pub exact_ac: Option<(Rational64, Rational64)>,
}

impl RWParams {
    pub fn from_chain(chain: &ValidatedChain) -> Result<Self> {
        let rates = chain.constant_rates().ok_or(Error::NotConstant)?;
        let v = rates.values();
        let exact_ac = match (rates.a.exact, rates.c.exact) {
            (Some(a), Some(c)) => Some((a, c)),
            _ => None,
        };
        Ok(RWParams {
            n_legs: chain.n_legs,
            a: v.a,
            b: v.b,
            c: v.c,
            alpha: chain.alpha.iter().map(|p| p.value).collect(),
            exact_ac,
        })
    }

    /// Float parameters, validated as a chain.
    pub fn new(alpha: &[f64], a: f64, c: f64) -> Result<Self> {
        let chain = validate(SpiderParams::constant(alpha, a, 1.0 - a - c, c))?;
        Self::from_chain(&chain)
    }

    pub fn to_params(&self) -> SpiderParams {
        SpiderParams::constant(&self.alpha, self.a, self.b, self.c)
    }

    fn a0(&self) -> f64 {
        self.alpha[0]
    }

    /// `(1 - a - alpha_0) x + c - alpha_0 (1 - a + c - alpha_0)`.
    fn lin(&self, x: f64) -> f64 {
        let a0 = self.a0();
        (1.0 - self.a - a0) * x + self.c - a0 * (1.0 - self.a + self.c - a0)
    }

    fn r_poly(&self, x: f64) -> f64 {
        let a0 = self.a0();
        x * x - (a0 + self.b) * x - self.c + a0 * (1.0 - self.a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SupportInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

/// `[1 - (sqrt a + sqrt c)^2, 1 - (sqrt a - sqrt c)^2]`.
pub fn support(p: &RWParams) -> SupportInterval {
    let (sa, sc) = (p.a.sqrt(), p.c.sqrt());
    SupportInterval {
        lo: 1.0 - (sa + sc).powi(2),
        hi: 1.0 - (sa - sc).powi(2),
    }
}

/// Rank-one atom `coefficient * u u^T` at `location`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomInfo {
    pub location: f64,
    pub coefficient: f64,
    pub direction: Vec<f64>,
}

impl AtomInfo {
    pub fn mass(&self) -> DMatrix<f64> {
        let u = DVector::from_column_slice(&self.direction);
        &u * u.transpose() * self.coefficient
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomReport {
    /// Present iff `c > a`.
    pub at_one: Option<AtomInfo>,
    /// Present iff `(1 - alpha_0 - a)^2 > ac`.
    pub at_z2: Option<AtomInfo>,
}

impl AtomReport {
    pub fn atoms(&self) -> impl Iterator<Item = &AtomInfo> {
        self.at_one.iter().chain(self.at_z2.iter())
    }
}

/// Location of the second candidate atom,
/// `(alpha_0 (1 - a + c - alpha_0) - c) / (1 - a - alpha_0)`.
pub fn z2_location(p: &RWParams) -> f64 {
    let a0 = p.a0();
    (a0 * (1.0 - p.a + p.c - a0) - p.c) / (1.0 - p.a - a0)
}

/// `a > c`, `a = c` and `a < c` with exact comparison for rational input.
fn compare_a_c(p: &RWParams) -> std::cmp::Ordering {
    match p.exact_ac {
        Some((a, c)) => a.cmp(&c),
        None if (p.a - p.c).abs() <= 1e-14 => std::cmp::Ordering::Equal,
        None => p.a.partial_cmp(&p.c).expect("finite rates"),
    }
}

pub fn rw_atoms(p: &RWParams) -> Result<AtomReport> {
    let a0 = p.a0();
    let g = 1.0 - a0 - p.a;
    if g.abs() < GUARD_TOL {
        return Err(Error::DegenerateDirection);
    }
    let n = p.n_legs;
    let at_one = (compare_a_c(p) == std::cmp::Ordering::Less).then(|| AtomInfo {
        location: 1.0,
        coefficient: (p.c - p.a) / (p.c - p.a + 1.0 - a0),
        direction: vec![1.0; n],
    });
    let at_z2 = (g * g > p.a * p.c).then(|| {
        let mut direction = vec![p.c / g; n];
        direction[0] = -1.0;
        AtomInfo {
            location: z2_location(p),
            coefficient: (g * g - p.a * p.c) / (g * (g + p.c)),
            direction,
        }
    });
    Ok(AtomReport { at_one, at_z2 })
}

/// Entries of the arrow-plus-rank-one layout shared by the transform, the
/// density and the `z = 0` moment: `m11`, `m12` on the first row and column,
/// `diag * alpha_D^{-1} + ones * e e^T` on the lower block.
fn arrow_layout<T>(n: usize, alpha: &[f64], m11: T, m12: T, diag: T, ones: T) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let mut m = DMatrix::from_element(n, n, T::from_real(0.0));
    m[(0, 0)] = m11;
    for k in 1..n {
        m[(0, k)] = m12;
        m[(k, 0)] = m12;
        for j in 1..n {
            m[(k, j)] = ones;
        }
        m[(k, k)] = ones + diag.unscale(alpha[k]);
    }
    m
}

/// Closed-form `B(z; W)`.
///
/// At the removable points where the rationalized denominator
/// `2 (1 - z) lin(z)` vanishes without an atom, the block assembly of the
/// leg transforms is used instead.
pub fn rw_stieltjes(p: &RWParams, z: C64) -> Result<DMatrix<C64>> {
    let sup = support(p);
    let mut dist = {
        let d = sup.distance(z.re);
        (d * d + z.im * z.im).sqrt()
    };
    for atom in rw_atoms(p)?.atoms() {
        dist = dist.min((z - atom.location).norm());
    }
    if dist < POLE_DISTANCE {
        return Err(Error::PoleTooClose { distance: dist });
    }
    let (a, b, c, a0) = (p.a, p.b, p.c, p.a0());
    let s = branch_sqrt(z, sup.lo, sup.hi);
    let lin = z * (1.0 - a - a0) + c - a0 * (1.0 - a + c - a0);
    let den = (1.0 - z) * lin * 2.0;
    if den.norm() < 1e-10 {
        let params = p.to_params();
        let leg = |_: usize, z: C64| constant_leg_transform(crate::chain::RateTriple { a, b, c }, z);
        let assoc = leg(1, z);
        let top = -1.0 / (z - a0 + p.alpha[p.n_legs] * c * assoc);
        return assemble_stieltjes(&params, |k, z| if k == p.n_legs { top } else { leg(k, z) }, z);
    }
    let b11 = (z * (1.0 - 2.0 * a - a0) - b + a0 * (1.0 + a - c) + s * (1.0 - a0)) / den;
    // (b - z + s) / (2a) rationalized with (b - z)^2 - s^2 = 4ac; the direct
    // form loses all digits for large |z|. The other entries are -b11 diag
    // and b11 diag^2, which avoids the cubic cancellation in the expanded
    // numerators.
    let diag = 2.0 * c / (b - z - s);
    Ok(arrow_layout(p.n_legs, &p.alpha, b11, -b11 * diag, diag, b11 * diag * diag))
}

/// Density of the absolutely continuous part on `[sigma_-, sigma_+]`.
///
/// Points where `(1 - x) lin(x)` is within `1e-13` of zero are moved
/// inwards by `1e-10` half-widths.
pub fn rw_density(p: &RWParams, x: f64) -> Result<DMatrix<f64>> {
    let sup = support(p);
    if !sup.contains(x) {
        return Err(Error::OutOfSupport { x });
    }
    let n = p.n_legs;
    let root = ((sup.hi - x) * (x - sup.lo)).max(0.0).sqrt();
    if root == 0.0 {
        return Ok(DMatrix::zeros(n, n));
    }
    let half = 0.5 * (sup.hi - sup.lo);
    let mut x = x;
    let mut den = (1.0 - x) * p.lin(x);
    if den.abs() < GUARD_TOL {
        x += if x < sup.lo + half { 1e-10 * half } else { -1e-10 * half };
        den = (1.0 - x) * p.lin(x);
    }
    let root = ((sup.hi - x) * (x - sup.lo)).max(0.0).sqrt();
    let a0 = p.a0();
    let w11 = (1.0 - a0) * root / (2.0 * PI * den);
    let w12 = (x - a0) * root / (2.0 * PI * den);
    let diag = root / (2.0 * PI * p.a);
    let ones = p.r_poly(x) * root / (2.0 * PI * p.a * den);
    Ok(arrow_layout(n, &p.alpha, w11, w12, diag, ones))
}

/// Full weight matrix: density plus the atoms of [`rw_atoms`].
///
/// For `a = c` the density behaves like `1 / sqrt(1 - x)` at the upper end,
/// so the first-kind Chebyshev rule is selected.
pub fn rw_weight(p: &RWParams) -> Result<WeightMatrixSpec> {
    let sup = support(p);
    let atoms = rw_atoms(p)?;
    let q = p.clone();
    let mut w = WeightMatrixSpec::new(p.n_legs, (sup.lo, sup.hi), move |x| {
        rw_density(&q, x).unwrap_or_else(|_| DMatrix::zeros(q.n_legs, q.n_legs))
    });
    if compare_a_c(p) == std::cmp::Ordering::Equal {
        w = w.with_rule_kind(RuleKind::InvSqrtWeight);
    }
    for atom in atoms.atoms() {
        w = w.with_atom(atom.location, atom.mass());
    }
    Ok(w)
}

/// The closed-form weight of a chain, when there is one.
pub fn weight_for(chain: &ValidatedChain) -> Result<WeightMatrixSpec> {
    match RWParams::from_chain(chain) {
        Ok(p) => rw_weight(&p),
        Err(Error::NotConstant) => Err(Error::UnsupportedWeight),
        Err(e) => Err(e),
    }
}

/// `M_{-1} = ∫ dW(x) / x = B(0; W)` in closed form.
pub fn rw_m_minus1(p: &RWParams) -> Result<DMatrix<f64>> {
    let sup = support(p);
    let (a, b, c, a0) = (p.a, p.b, p.c, p.a0());
    let d = 2.0 * p.lin(0.0);
    if sup.lo <= 0.0 || d.abs() < GUARD_TOL {
        return Err(Error::ZeroInSupport);
    }
    let sq = (sup.hi * sup.lo).sqrt();
    let mu11 = (a0 * (1.0 + a - c) - b - (1.0 - a0) * sq) / d;
    let mu12 = (2.0 * c - a0 * (1.0 - a + c) + a0 * sq) / d;
    let diag = (b - sq) / (2.0 * a);
    let ones = (a0 * (b - a * (1.0 - a + c)) - b * c - (a0 * (1.0 - a) - c) * sq) / (a * d);
    Ok(arrow_layout(p.n_legs, &p.alpha, mu11, mu12, diag, ones))
}

/// `T_0(y), ..., T_n(y)` by the three-term recurrence.
pub fn chebyshev_t(n: usize, y: f64) -> Vec<f64> {
    let mut t = vec![1.0, y];
    for k in 2..=n {
        t.push(2.0 * y * t[k - 1] - t[k - 2]);
    }
    t.truncate(n + 1);
    t
}

/// `U_0(y), ..., U_n(y)` by the three-term recurrence.
pub fn chebyshev_u(n: usize, y: f64) -> Vec<f64> {
    let mut u = vec![1.0, 2.0 * y];
    for k in 2..=n {
        u.push(2.0 * y * u[k - 1] - u[k - 2]);
    }
    u.truncate(n + 1);
    u
}

/// `Q_0(x), ..., Q_{n_max}(x)` from the Chebyshev representation.
pub fn rw_polys(p: &RWParams, n_max: usize, x: f64) -> Vec<DMatrix<f64>> {
    let (a, b, c) = (p.a, p.b, p.c);
    let n_legs = p.n_legs;
    let alpha_n = p.alpha[n_legs];
    let y = (x - b) / (2.0 * (a * c).sqrt());
    let t = chebyshev_t(n_max, y);
    let u = chebyshev_u(n_max, y);
    let um1 = |n: usize| if n == 0 { 0.0 } else { u[n - 1] };
    let ratio = c / a;
    (0..=n_max)
        .map(|n| {
            let nf = n as f64;
            let q_top = ratio.powf(nf / 2.0) / alpha_n
                * (2.0 * (alpha_n - a) * t[n] + (2.0 * a - alpha_n) * u[n] + (a / c).sqrt() * (b - p.a0()) * um1(n));
            let q_top0 = -ratio.powf((nf - 1.0) / 2.0) / alpha_n * um1(n);
            let q_leg = ratio.powf(nf / 2.0) * u[n];
            let q_leg0 = -ratio.powf((nf + 1.0) / 2.0) * um1(n);
            let mut m = DMatrix::zeros(n_legs, n_legs);
            m[(0, 0)] = q_top;
            for k in 1..n_legs {
                m[(0, k)] = p.alpha[k] * q_top0;
                m[(k, 0)] = q_leg0;
                m[(k, k)] = q_leg;
            }
            m
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Recurrence {
    Transient,
    NullRecurrent,
    PositiveRecurrent,
}

pub fn rw_classify(p: &RWParams) -> Recurrence {
    match compare_a_c(p) {
        std::cmp::Ordering::Greater => Recurrence::Transient,
        std::cmp::Ordering::Equal => Recurrence::NullRecurrent,
        std::cmp::Ordering::Less => Recurrence::PositiveRecurrent,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    ClosedForm,
    Convergents,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RwThresholds {
    /// `H_1, ..., H_N`.
    pub h: Vec<f64>,
    pub feasible: bool,
    pub method: ThresholdMethod,
}

/// Discriminant `(1 + c - a)^2 - 4c` of the period-two fraction.
fn discriminant(p: &RWParams) -> f64 {
    (1.0 + p.c - p.a).powi(2) - 4.0 * p.c
}

/// Factorization thresholds; closed form when `a <= (1 - sqrt c)^2`,
/// convergents otherwise.
pub fn rw_thresholds(p: &RWParams) -> Result<RwThresholds> {
    let n = p.n_legs;
    let d = discriminant(p);
    if d >= -1e-15 {
        let d = d.max(0.0);
        let unit = (1.0 + p.a - p.c - d.sqrt()) / (2.0 * p.a);
        let h = (1..=n).map(|m| p.alpha[m] * unit).collect();
        let feasible = p.a0() > 0.5 * (1.0 - p.a + p.c - d.sqrt());
        return Ok(RwThresholds {
            h,
            feasible,
            method: ThresholdMethod::ClosedForm,
        });
    }
    let params = p.to_params();
    let h: Vec<f64> = (1..=n)
        .map(|m| cf_limit(&params, m, CF_TOL).map(|l| l.value))
        .collect::<Result<_>>()?;
    let feasible = h.iter().sum::<f64>() < 1.0;
    Ok(RwThresholds {
        h,
        feasible,
        method: ThresholdMethod::Convergents,
    })
}

/// Values of `e_j^T (∫ dW(x) / (1 - x + eps)) T_0^{-1} e_j` for shrinking
/// `eps`. Recurrence corresponds to divergence as `eps -> 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceDiagnostic {
    pub phase: usize,
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    /// The last value exceeds the first one by a factor of more than ten.
    pub diverging: bool,
}

/// Numerical version of the boundary-integral recurrence test.
///
/// This is a heuristic: it watches growth over a finite range of `eps` and
/// cannot certify divergence. It is exact in spirit only for the constant
/// walk, whose weight is known in closed form.
pub fn recurrence_diagnostic(p: &RWParams, phase: usize) -> Result<RecurrenceDiagnostic> {
    let sup = support(p);
    let atoms = rw_atoms(p)?;
    let pi0 = {
        let mut v = vec![1.0];
        v.extend((1..p.n_legs).map(|k| p.alpha[k] / p.c));
        v
    };
    let mid = 0.5 * (sup.lo + sup.hi);
    let half = 0.5 * (sup.hi - sup.lo);
    let gl = GaussLegendre::new(NonZeroUsize::new(24).expect("nonzero"));
    let eps: Vec<f64> = (1..=5).map(|k| 10f64.powi(-2 * k)).collect();
    let values = eps
        .iter()
        .map(|&e| {
            // x = mid + half cos(theta); panels shrink geometrically towards theta = 0
            // where x meets the upper end of the support.
            let g = |th: f64| {
                let x = mid + half * th.cos();
                let w = rw_density(p, x.clamp(sup.lo, sup.hi)).map(|m| m[(phase, phase)]).unwrap_or(0.0);
                w * half * th.sin() / (1.0 - x + e)
            };
            let mut total = 0.0;
            let mut hi = PI;
            let floor = 1e-3 * e.sqrt();
            while hi > floor {
                let lo = 0.5 * hi;
                total += gl.integrate(lo, hi, g);
                hi = lo;
            }
            total += gl.integrate(0.0, hi, g);
            for atom in atoms.atoms() {
                total += atom.mass()[(phase, phase)] / (1.0 - atom.location + e);
            }
            total / pi0[phase].sqrt()
        })
        .collect::<Vec<_>>();
    let diverging = values[values.len() - 1] > 10.0 * values[0];
    Ok(RecurrenceDiagnostic {
        phase,
        eps,
        values,
        diverging,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{rational_walk, three_leg_walk};

    fn walk() -> RWParams {
        RWParams::from_chain(&three_leg_walk()).unwrap()
    }

    #[test]
    fn reference_support() {
        let s = support(&walk());
        assert!((s.lo - 0.102_786_404_500_042).abs() < 1e-12);
        assert!((s.hi - 0.997_213_595_499_958).abs() < 1e-12);
        let sym = RWParams::new(&[0.5, 0.5], 0.25, 0.25).unwrap();
        assert_eq!(support(&sym).hi, 1.0);
        assert!(support(&sym).lo.abs() < 1e-15);
    }

    #[test]
    fn reference_atoms() {
        let r = rw_atoms(&walk()).unwrap();
        let one = r.at_one.unwrap();
        assert!((one.coefficient - 1.0 / 11.0).abs() < 1e-15);
        let z2 = r.at_z2.unwrap();
        assert!((z2.location - 1.0 / 12.0).abs() < 1e-15);
        assert!((z2.coefficient - 8.0 / 33.0).abs() < 1e-15);
    }

    #[test]
    fn no_atoms_when_both_indicators_fail() {
        let p = RWParams::new(&[0.5, 0.25, 0.25], 0.4, 0.3).unwrap();
        let r = rw_atoms(&p).unwrap();
        assert!(r.at_one.is_none() && r.at_z2.is_none());
        let sym = RWParams::from_chain(&validate(rational_walk(&[(1, 2), (1, 4), (1, 4)], (1, 4), (1, 4))).unwrap()).unwrap();
        assert!(rw_atoms(&sym).unwrap().at_one.is_none());
    }

    #[test]
    fn density_is_symmetric_psd_and_vanishes_at_the_edge() {
        let p = walk();
        let m = rw_density(&p, 0.5).unwrap();
        assert!((&m - m.transpose()).amax() < 1e-15);
        let ev = nalgebra::SymmetricEigen::new(m).eigenvalues;
        assert!(ev.min() >= -1e-12);
        let s = support(&p);
        assert_eq!(rw_density(&p, s.hi).unwrap(), DMatrix::zeros(3, 3));
        assert!(matches!(rw_density(&p, 0.999), Err(Error::OutOfSupport { .. })));
    }

    #[test]
    fn m_minus1_equals_transform_at_zero() {
        let p = walk();
        let m = rw_m_minus1(&p).unwrap();
        let b = rw_stieltjes(&p, C64::new(0.0, 0.0)).unwrap();
        assert!((m - b.map(|v| v.re)).amax() < 1e-12);
        assert!(b.iter().all(|v| v.im.abs() < 1e-15));
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev_u(1, 0.0), vec![1.0, 0.0]);
        assert_eq!(chebyshev_t(0, 3.0), vec![1.0]);
        let t = chebyshev_t(5, 0.3);
        assert!((t[5] - (5.0 * 0.3f64.acos()).cos()).abs() < 1e-14);
        let u = chebyshev_u(4, 1.5);
        // U_4(y) = 16y^4 - 12y^2 + 1
        assert!((u[4] - (16.0 * 1.5f64.powi(4) - 12.0 * 2.25 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn leg_entry_vanishes_at_b() {
        let p = walk();
        let q = rw_polys(&p, 1, p.b);
        assert!(q[1][(1, 1)].abs() < 1e-15);
        assert_eq!(q[0], DMatrix::identity(3, 3));
    }

    #[test]
    fn classification_uses_exact_rationals() {
        assert_eq!(rw_classify(&walk()), Recurrence::PositiveRecurrent);
        let null = validate(rational_walk(&[(1, 2), (1, 4), (1, 4)], (1, 4), (1, 4))).unwrap();
        assert_eq!(rw_classify(&RWParams::from_chain(&null).unwrap()), Recurrence::NullRecurrent);
        let tr = RWParams::new(&[0.5, 0.25, 0.25], 0.3, 0.2).unwrap();
        assert_eq!(rw_classify(&tr), Recurrence::Transient);
    }

    #[test]
    fn reference_thresholds_closed_form() {
        let t = rw_thresholds(&walk()).unwrap();
        let s41 = 41f64.sqrt();
        let want = [(19.0 - s41) / 64.0, (19.0 - s41) / 48.0, (95.0 - 5.0 * s41) / 192.0];
        for (h, w) in t.h.iter().zip(want) {
            assert!((h - w).abs() < 1e-15);
        }
        assert!(t.feasible);
        assert_eq!(t.method, ThresholdMethod::ClosedForm);
    }

    #[test]
    fn threshold_at_discriminant_boundary() {
        // a = (1 - sqrt c)^2 with c = 1/4 gives a = 1/4: discriminant zero.
        let p = RWParams::new(&[0.5, 0.25, 0.25], 0.25, 0.25).unwrap();
        let t = rw_thresholds(&p).unwrap();
        assert_eq!(t.method, ThresholdMethod::ClosedForm);
        assert!((t.h[0] - 0.25 * (1.0 + 0.25 - 0.25) / 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagnostic_separates_recurrent_from_transient() {
        let pos = recurrence_diagnostic(&walk(), 0).unwrap();
        assert!(pos.diverging);
        let null = RWParams::new(&[0.5, 0.25, 0.25], 0.25, 0.25).unwrap();
        assert!(recurrence_diagnostic(&null, 0).unwrap().diverging);
        let tr = RWParams::new(&[0.5, 0.25, 0.25], 0.3, 0.2).unwrap();
        assert!(!recurrence_diagnostic(&tr, 0).unwrap().diverging);
    }
}
