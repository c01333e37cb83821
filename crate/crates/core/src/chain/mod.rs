//! Spider chain parameters, validation and the block-tridiagonal transition
//! operator.

mod index;
mod params;

pub use index::{index_of, leg_depth, site_of, Site, StateIndex};
pub use params::{LegRates, Prob, RateTriple, Rates, SpiderParams};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result, Violation};

/// Tolerance for every stochasticity sum.
pub const SUM_TOL: f64 = 1e-12;

/// Default cap on the number of rows of a dense truncation.
pub const MAX_TRUNCATED_ROWS: usize = 20_000;

/// The level-`level` triple `(A, B, C)`; `C` is absent at level 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTriple {
    pub level: usize,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: Option<DMatrix<f64>>,
}

impl BlockTriple {
    /// Row sums of `[C | B | A]`.
    pub fn row_sums(&self) -> DVector<f64> {
        let mut s = self.a.column_sum() + self.b.column_sum();
        if let Some(c) = &self.c {
            s += c.column_sum();
        }
        s
    }
}

/// Anything that can hand out the blocks of a block-tridiagonal stochastic
/// operator level by level.
pub trait BlockOperator {
    fn n_phases(&self) -> usize;

    fn block_triple(&self, level: usize) -> Result<BlockTriple>;
}

/// Dense `(L+1)N x (L+1)N` truncation of a block-tridiagonal operator. The
/// last block row misses its `A_L` block, so those rows are sub-stochastic.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub levels: usize,
    pub n_phases: usize,
    pub matrix: DMatrix<f64>,
}

impl TruncatedOperator {
    /// The `(i, j)` block of the dense matrix.
    pub fn block(&self, i: usize, j: usize) -> DMatrix<f64> {
        let n = self.n_phases;
        self.matrix.view((i * n, j * n), (n, n)).into_owned()
    }
}

pub fn truncate<O: BlockOperator + ?Sized>(op: &O, levels: usize) -> Result<TruncatedOperator> {
    truncate_with_cap(op, levels, MAX_TRUNCATED_ROWS)
}

pub fn truncate_with_cap<O: BlockOperator + ?Sized>(
    op: &O,
    levels: usize,
    cap: usize,
) -> Result<TruncatedOperator> {
    let n = op.n_phases();
    let rows = (levels + 1)
        .checked_mul(n)
        .ok_or(Error::SizeOverflow { rows: usize::MAX, cap })?;
    if rows > cap {
        return Err(Error::SizeOverflow { rows, cap });
    }
    let mut m = DMatrix::zeros(rows, rows);
    for level in 0..=levels {
        let t = op.block_triple(level)?;
        let r = level * n;
        m.view_mut((r, r), (n, n)).copy_from(&t.b);
        if level < levels {
            m.view_mut((r, r + n), (n, n)).copy_from(&t.a);
        }
        if let Some(c) = &t.c {
            m.view_mut((r, r - n), (n, n)).copy_from(c);
        }
    }
    Ok(TruncatedOperator {
        levels,
        n_phases: n,
        matrix: m,
    })
}

/// Diagonal potential coefficients `Pi_n` at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCoeffs {
    pub level: usize,
    pub diagonal: DVector<f64>,
}

impl PotentialCoeffs {
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.diagonal)
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.diagonal.map(|p| 1.0 / p))
    }

    /// `T_n = Pi_n^{1/2}`.
    pub fn sqrt(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.diagonal.map(f64::sqrt))
    }
}

/// A chain whose parameters passed [`validate`]. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedChain {
    params: SpiderParams,
}

impl std::ops::Deref for ValidatedChain {
    type Target = SpiderParams;

    fn deref(&self) -> &SpiderParams {
        &self.params
    }
}

fn check_prob(location: &str, p: f64, out: &mut Vec<Violation>) {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        out.push(Violation::NegativeProbability {
            location: location.to_string(),
            value: p,
        });
    }
}

/// Check every constraint on `params` and collect all violations.
pub fn validate(params: SpiderParams) -> Result<ValidatedChain> {
    let mut v = Vec::new();
    let n = params.n_legs;
    if n == 0 {
        v.push(Violation::Shape {
            detail: "a spider needs at least one leg".into(),
        });
    }
    if params.alpha.len() != n + 1 {
        v.push(Violation::Shape {
            detail: format!("alpha has {} entries, expected {}", params.alpha.len(), n + 1),
        });
    }
    if params.legs.len() != n {
        v.push(Violation::Shape {
            detail: format!("{} legs given, expected {}", params.legs.len(), n),
        });
    }
    if !v.is_empty() {
        return Err(Error::Invalid(v));
    }

    for (m, p) in params.alpha.iter().enumerate() {
        check_prob(&format!("alpha[{m}]"), p.value, &mut v);
        if m >= 1 && p.value <= 0.0 {
            v.push(Violation::DegenerateAlpha { index: m });
        }
    }
    let sum: f64 = params.alpha.iter().map(|p| p.value).sum();
    if (sum - 1.0).abs() > SUM_TOL {
        v.push(Violation::SumViolation {
            location: "alpha".into(),
            sum,
        });
    }

    for (li, leg) in params.legs.iter().enumerate() {
        let leg_no = li + 1;
        let entries = leg
            .prefix
            .iter()
            .enumerate()
            .map(|(k, r)| (format!("leg {leg_no} depth {}", k + 1), k + 1, r))
            .chain(std::iter::once((
                format!("leg {leg_no} tail"),
                leg.tail_start(),
                &leg.tail,
            )));
        for (loc, depth, r) in entries {
            let t = r.values();
            for (name, p) in [('a', t.a), ('b', t.b), ('c', t.c)] {
                check_prob(&format!("{loc} {name}"), p, &mut v);
            }
            let s = t.a + t.b + t.c;
            if (s - 1.0).abs() > SUM_TOL {
                v.push(Violation::SumViolation { location: loc, sum: s });
            }
            for (name, p) in [('a', t.a), ('c', t.c)] {
                if p <= 0.0 {
                    v.push(Violation::ZeroRate {
                        leg: leg_no,
                        depth,
                        rate: name,
                    });
                }
            }
        }
    }

    if v.is_empty() {
        Ok(ValidatedChain { params })
    } else {
        Err(Error::Invalid(v))
    }
}

impl ValidatedChain {
    pub fn params(&self) -> &SpiderParams {
        &self.params
    }

    pub fn into_params(self) -> SpiderParams {
        self.params
    }

    /// `(a, b, c)` feeding diagonal entry `phase` of level `level >= 1`, or
    /// of the `A_0` diagonal for phases `>= 1`.
    fn level_rates(&self, level: usize, phase: usize) -> RateTriple {
        let (leg, depth) = leg_depth(self.n_legs, level, phase);
        self.rates(leg, depth)
    }

    /// The triple `(A_n, B_n, C_n)`.
    pub fn blocks(&self, level: usize) -> BlockTriple {
        let n = self.n_legs;
        if level == 0 {
            let mut b = DMatrix::zeros(n, n);
            let mut a = DMatrix::zeros(n, n);
            b[(0, 0)] = self.alpha(0);
            a[(0, 0)] = self.alpha(n);
            for k in 1..n {
                let r = self.level_rates(0, k);
                b[(0, k)] = self.alpha(k);
                b[(k, 0)] = r.c;
                b[(k, k)] = r.b;
                a[(k, k)] = r.a;
            }
            return BlockTriple { level, a, b, c: None };
        }
        let rates: Vec<RateTriple> = (0..n).map(|p| self.level_rates(level, p)).collect();
        let diag = |f: fn(&RateTriple) -> f64| {
            DMatrix::from_diagonal(&DVector::from_iterator(n, rates.iter().map(f)))
        };
        BlockTriple {
            level,
            a: diag(|r| r.a),
            b: diag(|r| r.b),
            c: Some(diag(|r| r.c)),
        }
    }

    pub fn truncate(&self, levels: usize) -> Result<TruncatedOperator> {
        truncate(self, levels)
    }

    /// `pi` at one site; the body has `pi = 1`.
    fn site_potential(&self, leg: usize, depth: usize) -> f64 {
        if depth == 0 {
            return 1.0;
        }
        let mut pi = self.alpha(leg) / self.rates(leg, 1).c;
        for j in 1..depth {
            pi *= self.rates(leg, j).a / self.rates(leg, j + 1).c;
        }
        pi
    }

    /// Potential coefficients `Pi_n`.
    pub fn potential(&self, level: usize) -> PotentialCoeffs {
        let n = self.n_legs;
        let diagonal = DVector::from_iterator(
            n,
            (0..n).map(|p| {
                let (leg, depth) = leg_depth(n, level, p);
                self.site_potential(leg, depth)
            }),
        );
        PotentialCoeffs { level, diagonal }
    }

    /// One step of the chain from `from`, driven by a uniform draw `u`.
    pub fn step(&self, from: StateIndex, u: f64) -> StateIndex {
        let n = self.n_legs;
        match site_of(n, from) {
            Site::Body => {
                let mut acc = 0.0;
                for m in 0..n {
                    acc += self.alpha(m);
                    if u < acc {
                        return if m == 0 {
                            StateIndex::BODY
                        } else {
                            index_of(n, Site::Leg { leg: m, depth: 1 })
                        };
                    }
                }
                index_of(n, Site::Leg { leg: n, depth: 1 })
            }
            Site::Leg { leg, depth } => {
                let r = self.rates(leg, depth);
                let site = if u < r.a {
                    Site::Leg {
                        leg,
                        depth: depth + 1,
                    }
                } else if u < r.a + r.b {
                    Site::Leg { leg, depth }
                } else if depth == 1 {
                    Site::Body
                } else {
                    Site::Leg {
                        leg,
                        depth: depth - 1,
                    }
                };
                index_of(n, site)
            }
        }
    }
}

impl BlockOperator for ValidatedChain {
    fn n_phases(&self) -> usize {
        self.n_legs
    }

    fn block_triple(&self, level: usize) -> Result<BlockTriple> {
        Ok(self.blocks(level))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    use crate::presets::three_leg_walk as walk;

    fn violations(p: SpiderParams) -> Vec<Violation> {
        match validate(p) {
            Err(Error::Invalid(v)) => v,
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn reference_walk_instance_is_valid() {
        walk();
    }

    #[test]
    fn plain_birth_death_chain_is_valid() {
        validate(SpiderParams::constant(&[0.5, 0.5], 0.5, 0.0, 0.5)).unwrap();
    }

    #[test]
    fn alpha_sum_violation() {
        let v = violations(SpiderParams::constant(&[0.5, 0.25, 0.25, 0.25], 0.2, 0.55, 0.25));
        assert!(v.iter().any(|x| matches!(x, Violation::SumViolation { location, .. } if location == "alpha")));
    }

    #[test]
    fn zero_rates_and_alpha_are_reported_together() {
        let mut p = SpiderParams::constant(&[0.5, 0.0, 0.5], 0.5, 0.5, 0.0);
        p.legs[1].prefix.push(Rates::new(0.0, 0.5, 0.5));
        let v = violations(p);
        assert!(v.contains(&Violation::DegenerateAlpha { index: 1 }));
        assert!(v.contains(&Violation::ZeroRate { leg: 1, depth: 1, rate: 'c' }));
        assert!(v.contains(&Violation::ZeroRate { leg: 2, depth: 1, rate: 'a' }));
        assert!(v.contains(&Violation::ZeroRate { leg: 2, depth: 2, rate: 'c' }));
    }

    #[test]
    fn negative_probability() {
        let v = violations(SpiderParams::constant(&[1.2, -0.2], 0.5, 0.0, 0.5));
        assert!(v.iter().any(|x| x.kind() == "NegativeProbability"));
    }

    #[test]
    fn reference_walk_level_zero_blocks() {
        let t = walk().blocks(0);
        let b0 = DMatrix::from_row_slice(3, 3, &[0.5, 0.125, 1.0 / 6.0, 0.25, 0.55, 0.0, 0.25, 0.0, 0.55]);
        assert_abs_diff_eq!(t.b, b0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.a, DMatrix::from_diagonal(&DVector::from_vec(vec![5.0 / 24.0, 0.2, 0.2])), epsilon = 1e-15);
        assert!(t.c.is_none());
    }

    #[test]
    fn reference_walk_level_three_blocks_are_scalar() {
        let t = walk().blocks(3);
        let id = DMatrix::<f64>::identity(3, 3);
        assert_abs_diff_eq!(t.a, &id * 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(t.b, &id * 0.55, epsilon = 1e-15);
        assert_abs_diff_eq!(t.c.unwrap(), &id * 0.25, epsilon = 1e-15);
    }

    #[test]
    fn single_leg_blocks_are_scalar_jacobi_entries() {
        let chain = validate(SpiderParams::constant(&[0.3, 0.7], 0.4, 0.1, 0.5)).unwrap();
        let t0 = chain.blocks(0);
        assert_eq!((t0.b[(0, 0)], t0.a[(0, 0)]), (0.3, 0.7));
        let t2 = chain.blocks(2);
        assert_eq!((t2.c.unwrap()[(0, 0)], t2.b[(0, 0)], t2.a[(0, 0)]), (0.5, 0.1, 0.4));
        let op = chain.truncate(5).unwrap();
        assert_eq!(op.matrix.shape(), (6, 6));
        for i in 0..6usize {
            for j in 0..6 {
                if i.abs_diff(j) > 1 {
                    assert_eq!(op.matrix[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn truncation_row_sums() {
        let op = walk().truncate(2).unwrap();
        assert_eq!(op.matrix.shape(), (9, 9));
        let sums = op.matrix.column_sum();
        assert_abs_diff_eq!(sums[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sums[8], 0.8, epsilon = 1e-15);
        let op0 = walk().truncate(0).unwrap();
        assert_eq!(op0.matrix, walk().blocks(0).b);
    }

    #[test]
    fn truncation_cap() {
        assert_eq!(
            truncate_with_cap(&walk(), 10, 30),
            Err(Error::SizeOverflow { rows: 33, cap: 30 })
        );
    }

    #[test]
    fn reference_walk_potentials() {
        let c = walk();
        assert_abs_diff_eq!(c.potential(0).diagonal, DVector::from_vec(vec![1.0, 0.5, 2.0 / 3.0]), epsilon = 1e-15);
        assert_abs_diff_eq!(c.potential(1).diagonal[0], 5.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn step_from_body_follows_alpha() {
        let c = walk();
        assert_eq!(c.step(StateIndex::BODY, 0.49), StateIndex::BODY);
        assert_eq!(c.step(StateIndex::BODY, 0.6), StateIndex::new(0, 1));
        assert_eq!(c.step(StateIndex::BODY, 0.7), StateIndex::new(0, 2));
        assert_eq!(c.step(StateIndex::BODY, 0.9), StateIndex::new(1, 0));
        // leg 1 depth 1 falls back to the body
        assert_eq!(c.step(StateIndex::new(0, 1), 0.99), StateIndex::BODY);
        assert_eq!(c.step(StateIndex::new(1, 0), 0.1), StateIndex::new(2, 0));
    }
}
