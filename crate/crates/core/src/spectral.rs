//! Matrix orthogonal polynomials of a spider chain and the Karlin–McGregor
//! representation of its transition blocks.

use nalgebra::DMatrix;

use crate::chain::{BlockOperator, ValidatedChain};
use crate::error::Result;
use crate::quadrature::QuadratureRule;
use crate::weight::WeightMatrixSpec;

/// `Q_0(x), ..., Q_n(x)` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolySequence {
    pub x: f64,
    pub values: Vec<DMatrix<f64>>,
}

impl MatrixPolySequence {
    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }
}

/// A family of matrix polynomials together with its norms, i.e. everything
/// the Karlin–McGregor formula needs besides the weight.
pub trait OrthogonalFamily {
    fn dim(&self) -> usize;

    /// `Q_0(x), ..., Q_{n_max}(x)`.
    fn polys(&self, n_max: usize, x: f64) -> Result<Vec<DMatrix<f64>>>;

    /// Potential coefficients `Pi_n`, the inverses of the norms.
    fn potential_matrix(&self, n: usize) -> Result<DMatrix<f64>>;
}

/// Three-term recurrence `A_n Q_{n+1} = (x - B_n) Q_n - C_n Q_{n-1}` for any
/// block operator with invertible diagonal `A_n`.
pub fn recurrence_polys<O: BlockOperator + ?Sized>(op: &O, n_max: usize, x: f64) -> Result<Vec<DMatrix<f64>>> {
    let n = op.n_phases();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(DMatrix::identity(n, n));
    for level in 0..n_max {
        let t = op.block_triple(level)?;
        let cur = &out[level];
        let mut rhs = cur * x - &t.b * cur;
        if let Some(c) = &t.c {
            rhs -= c * &out[level - 1];
        }
        for i in 0..n {
            let inv = 1.0 / t.a[(i, i)];
            rhs.row_mut(i).scale_mut(inv);
        }
        out.push(rhs);
    }
    Ok(out)
}

pub fn eval_matrix_polys(chain: &ValidatedChain, n_max: usize, x: f64) -> MatrixPolySequence {
    let values = recurrence_polys(chain, n_max, x).expect("chain blocks are total");
    MatrixPolySequence { x, values }
}

/// Scalar polynomials of one leg and their associated polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPolys {
    pub leg: usize,
    pub q: Vec<f64>,
    pub assoc: Vec<f64>,
}

/// Leg `N` runs `x q_n = a_n q_{n+1} + b_n q_n + c_n q_{n-1}` with
/// `a_0 = alpha_N`, `b_0 = alpha_0`; leg `k < N` uses the coefficients of
/// depth `n + 1`.
pub fn eval_scalar_polys(chain: &ValidatedChain, leg: usize, n_max: usize, x: f64) -> ScalarPolys {
    let n_legs = chain.n_legs;
    assert!((1..=n_legs).contains(&leg), "leg {leg} out of range");
    // (a, b, c) driving step n -> n+1
    let coeffs = |n: usize| -> (f64, f64, f64) {
        if leg == n_legs {
            if n == 0 {
                (chain.alpha(n_legs), chain.alpha(0), 0.0)
            } else {
                let r = chain.rates(leg, n);
                (r.a, r.b, r.c)
            }
        } else {
            let r = chain.rates(leg, n + 1);
            (r.a, r.b, r.c)
        }
    };
    let mut q = vec![1.0];
    let mut assoc = vec![0.0];
    if n_max >= 1 {
        let (a0, b0, _) = coeffs(0);
        q.push((x - b0) / a0);
        assoc.push(if leg == n_legs {
            -1.0 / a0
        } else {
            -chain.rates(leg, 1).c / a0
        });
    }
    for n in 1..n_max {
        let (a, b, c) = coeffs(n);
        q.push(((x - b) * q[n] - c * q[n - 1]) / a);
        assoc.push(((x - b) * assoc[n] - c * assoc[n - 1]) / a);
    }
    ScalarPolys { leg, q, assoc }
}

/// Arrow assembly of the scalar leg polynomials into `Q_n`.
pub fn assemble_from_scalar(chain: &ValidatedChain, n_max: usize, x: f64) -> MatrixPolySequence {
    let n_legs = chain.n_legs;
    let legs: Vec<ScalarPolys> = (1..=n_legs).map(|m| eval_scalar_polys(chain, m, n_max, x)).collect();
    let top = &legs[n_legs - 1];
    let values = (0..=n_max)
        .map(|n| {
            let mut m = DMatrix::zeros(n_legs, n_legs);
            m[(0, 0)] = top.q[n];
            for k in 1..n_legs {
                m[(0, k)] = chain.alpha(k) * top.assoc[n];
                m[(k, 0)] = legs[k - 1].assoc[n];
                m[(k, k)] = legs[k - 1].q[n];
            }
            m
        })
        .collect();
    MatrixPolySequence { x, values }
}

impl OrthogonalFamily for ValidatedChain {
    fn dim(&self) -> usize {
        self.n_legs
    }

    fn polys(&self, n_max: usize, x: f64) -> Result<Vec<DMatrix<f64>>> {
        recurrence_polys(self, n_max, x)
    }

    fn potential_matrix(&self, n: usize) -> Result<DMatrix<f64>> {
        Ok(self.potential(n).matrix())
    }
}

/// `∫ x^n Q_i(x) dW(x) Q_j(x)^T Pi_j`, the `(i, j)` block of `P^n`.
pub fn km_block<F: OrthogonalFamily + ?Sized>(
    family: &F,
    weight: &WeightMatrixSpec,
    i: usize,
    j: usize,
    n: usize,
    rule: &QuadratureRule,
) -> Result<DMatrix<f64>> {
    let deg = i.max(j);
    let mut failure = None;
    let moment = weight.integrate_with(rule, |x, dw| match family.polys(deg, x) {
        Ok(q) => &q[i] * dw * q[j].transpose() * x.powi(n as i32),
        Err(e) => {
            failure = Some(e);
            dw * 0.0
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(moment * family.potential_matrix(j)?)
}

/// `∫ Q_n dW Q_m^T`.
pub fn gram<F: OrthogonalFamily + ?Sized>(
    family: &F,
    weight: &WeightMatrixSpec,
    n: usize,
    m: usize,
    rule: &QuadratureRule,
) -> Result<DMatrix<f64>> {
    let deg = n.max(m);
    let mut failure = None;
    let g = weight.integrate_with(rule, |x, dw| match family.polys(deg, x) {
        Ok(q) => &q[n] * dw * q[m].transpose(),
        Err(e) => {
            failure = Some(e);
            dw * 0.0
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(g),
    }
}

/// All Gram matrices `∫ Q_n dW Q_m^T` for `n, m <= n_max` in one pass;
/// entry `[n][m]`.
pub fn gram_table<F: OrthogonalFamily + ?Sized>(
    family: &F,
    weight: &WeightMatrixSpec,
    n_max: usize,
    rule: &QuadratureRule,
) -> Result<Vec<Vec<DMatrix<f64>>>> {
    let d = family.dim();
    let k = n_max + 1;
    let mut failure = None;
    // Stack the blocks into one (k d) x (k d) matrix so a single doubling check covers all.
    let big = weight.integrate_with(rule, |x, dw| {
        let mut out = DMatrix::zeros(k * d, k * d);
        match family.polys(n_max, x) {
            Ok(q) => {
                let left: Vec<DMatrix<f64>> = q.iter().map(|qn| qn * dw).collect();
                for n in 0..k {
                    for m in 0..k {
                        out.view_mut((n * d, m * d), (d, d)).copy_from(&(&left[n] * q[m].transpose()));
                    }
                }
            }
            Err(e) => failure = Some(e),
        }
        out
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((0..k)
        .map(|n| (0..k).map(|m| big.view((n * d, m * d), (d, d)).into_owned()).collect())
        .collect())
}
