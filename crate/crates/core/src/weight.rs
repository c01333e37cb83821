//! Matrix-valued measures: an absolutely continuous part on an interval plus
//! finitely many matrix atoms.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::quadrature::{QuadratureRule, RuleKind};

pub type Density = Arc<dyn Fn(f64) -> DMatrix<f64> + Send + Sync>;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: DMatrix<f64>,
}

/// A symmetric nonnegative-definite matrix measure `dW`.
#[derive(Clone)]
pub struct WeightMatrixSpec {
    pub dim: usize,
    /// `[lo, hi]` carrying the density. Ignored when there is no density.
    pub support: (f64, f64),
    density: Option<Density>,
    pub atoms: Vec<Atom>,
    /// Quadrature family matched to the density's endpoint behavior.
    pub rule_kind: RuleKind,
}

impl fmt::Debug for WeightMatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightMatrixSpec")
            .field("dim", &self.dim)
            .field("support", &self.support)
            .field("has_density", &self.density.is_some())
            .field("atoms", &self.atoms)
            .field("rule_kind", &self.rule_kind)
            .finish()
    }
}

/// Result of [`WeightMatrixSpec::check`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightCheck {
    pub max_asymmetry: f64,
    pub min_eigenvalue: f64,
}

impl WeightCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_asymmetry <= tol && self.min_eigenvalue >= -tol
    }
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min()
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

impl WeightMatrixSpec {
    pub fn new<F>(dim: usize, support: (f64, f64), density: F) -> Self
    where
        F: Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
    {
        WeightMatrixSpec {
            dim,
            support,
            density: Some(Arc::new(density)),
            atoms: Vec::new(),
            rule_kind: RuleKind::SqrtWeight,
        }
    }

    /// A purely discrete measure.
    pub fn discrete(dim: usize, atoms: Vec<Atom>) -> Self {
        WeightMatrixSpec {
            dim,
            support: (0.0, 0.0),
            density: None,
            atoms,
            rule_kind: RuleKind::SqrtWeight,
        }
    }

    pub fn with_atom(mut self, location: f64, mass: DMatrix<f64>) -> Self {
        self.atoms.push(Atom { location, mass });
        self
    }

    pub fn with_rule_kind(mut self, kind: RuleKind) -> Self {
        self.rule_kind = kind;
        self
    }

    pub fn has_density(&self) -> bool {
        self.density.is_some()
    }

    pub fn density(&self, x: f64) -> DMatrix<f64> {
        match &self.density {
            Some(d) => d(x),
            None => DMatrix::zeros(self.dim, self.dim),
        }
    }

    /// Shared handle to the density, if any.
    pub fn density_fn(&self) -> Option<Density> {
        self.density.clone()
    }

    /// Sample the density at `samples` interior points and inspect every atom.
    pub fn check(&self, samples: usize) -> WeightCheck {
        let mut out = WeightCheck {
            max_asymmetry: 0.0,
            min_eigenvalue: f64::INFINITY,
        };
        let mut look = |m: &DMatrix<f64>| {
            out.max_asymmetry = out.max_asymmetry.max(asymmetry(m));
            out.min_eigenvalue = out.min_eigenvalue.min(min_eigenvalue(m));
        };
        if self.density.is_some() {
            let (lo, hi) = self.support;
            for i in 1..=samples {
                let x = lo + (hi - lo) * i as f64 / (samples + 1) as f64;
                look(&self.density(x));
            }
        }
        for a in &self.atoms {
            look(&a.mass);
        }
        out
    }

    /// Distance from `x` to the support and the atoms.
    pub fn distance_to(&self, x: f64) -> f64 {
        let mut d = f64::INFINITY;
        if self.density.is_some() {
            let (lo, hi) = self.support;
            d = if x < lo {
                lo - x
            } else if x > hi {
                x - hi
            } else {
                0.0
            };
        }
        for a in &self.atoms {
            d = d.min((a.location - x).abs());
        }
        d
    }

    /// `Σ c_i F(x_i, c_i W(x_i)) + Σ F(x_k, M_k)` for one rule. The rule's
    /// node count is used with this weight's rule family.
    fn sum_with<F>(&self, rule: &QuadratureRule, f: &mut F) -> DMatrix<f64>
    where
        F: FnMut(f64, &DMatrix<f64>) -> DMatrix<f64>,
    {
        let mut acc: Option<DMatrix<f64>> = None;
        let mut add = |m: DMatrix<f64>| match &mut acc {
            Some(a) => *a += m,
            None => acc = Some(m),
        };
        if let Some(d) = &self.density {
            let rule = if rule.kind == self.rule_kind {
                rule.clone()
            } else {
                QuadratureRule::new(self.rule_kind, rule.len())
            };
            let (lo, hi) = self.support;
            for (x, c) in rule.mapped(lo, hi) {
                add(f(x, &(d(x) * c)));
            }
        }
        for a in &self.atoms {
            add(f(a.location, &a.mass));
        }
        acc.unwrap_or_else(|| DMatrix::zeros(self.dim, self.dim))
    }

    /// `∫ F(x, dW(x))` where `F` is linear in its second argument, checked by
    /// doubling the node count. Differences are measured entrywise against
    /// `rule.tol * max(1, |value|)`.
    pub fn integrate_with<F>(&self, rule: &QuadratureRule, mut f: F) -> Result<DMatrix<f64>>
    where
        F: FnMut(f64, &DMatrix<f64>) -> DMatrix<f64>,
    {
        let base = self.sum_with(rule, &mut f);
        if self.density.is_none() {
            return Ok(base);
        }
        let fine = self.sum_with(&rule.refined(), &mut f);
        let mut worst = 0.0f64;
        for (u, v) in base.iter().zip(fine.iter()) {
            worst = worst.max((u - v).abs() / v.abs().max(1.0));
        }
        if worst > rule.tol || worst.is_nan() {
            return Err(Error::QuadratureUnconverged {
                change: worst,
                tol: rule.tol,
            });
        }
        Ok(base)
    }
}

/// `∫ f(x) dW(x)`.
pub fn integrate<F>(weight: &WeightMatrixSpec, f: F, rule: &QuadratureRule) -> Result<DMatrix<f64>>
where
    F: Fn(f64) -> DMatrix<f64>,
{
    weight.integrate_with(rule, |x, dw| f(x) * dw)
}

/// `∫ L(x) dW(x) R(x)^T`.
pub fn sandwich<L, R>(weight: &WeightMatrixSpec, left: L, right: R, rule: &QuadratureRule) -> Result<DMatrix<f64>>
where
    L: Fn(f64) -> DMatrix<f64>,
    R: Fn(f64) -> DMatrix<f64>,
{
    weight.integrate_with(rule, |x, dw| left(x) * dw * right(x).transpose())
}

/// Total mass `∫ dW`.
pub fn total_mass(weight: &WeightMatrixSpec, rule: &QuadratureRule) -> Result<DMatrix<f64>> {
    weight.integrate_with(rule, |_, dw| dw.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_atom_integrates_to_its_mass() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let w = WeightMatrixSpec::discrete(2, vec![Atom { location: 0.5, mass: m.clone() }]);
        let got = integrate(&w, |_| DMatrix::identity(2, 2), &QuadratureRule::default()).unwrap();
        assert_eq!(got, m);
    }

    #[test]
    fn scalar_semicircle_moments() {
        // Wigner semicircle on [-1, 1] normalized to mass 1; second moment 1/4.
        let w = WeightMatrixSpec::new(1, (-1.0, 1.0), |x| {
            DMatrix::from_element(1, 1, 2.0 / PI * (1.0 - x * x).max(0.0).sqrt())
        });
        let rule = QuadratureRule::sqrt_weight(16);
        let m0 = total_mass(&w, &rule).unwrap()[(0, 0)];
        let m2 = integrate(&w, |x| DMatrix::from_element(1, 1, x * x), &rule).unwrap()[(0, 0)];
        assert!((m0 - 1.0).abs() < 1e-14);
        assert!((m2 - 0.25).abs() < 1e-14);
    }

    #[test]
    fn unresolved_integrand_is_reported() {
        let w = WeightMatrixSpec::new(1, (-1.0, 1.0), |x| DMatrix::from_element(1, 1, (50.0 * x).cos().abs()));
        let err = total_mass(&w, &QuadratureRule::sqrt_weight(8)).unwrap_err();
        assert!(matches!(err, Error::QuadratureUnconverged { .. }));
    }

    #[test]
    fn check_flags_indefinite_atoms() {
        let w = WeightMatrixSpec::discrete(
            2,
            vec![Atom {
                location: 0.0,
                mass: DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]),
            }],
        );
        let c = w.check(0);
        assert!((c.min_eigenvalue + 1.0).abs() < 1e-12);
        assert!(!c.passes(1e-10));
    }
}
