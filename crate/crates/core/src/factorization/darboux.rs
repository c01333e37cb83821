use nalgebra::{DMatrix, SymmetricEigen};

use crate::chain::{leg_depth, BlockOperator, BlockTriple, ValidatedChain};
use crate::error::{Error, FactorEntry, Result};
use crate::spectral::{recurrence_polys, OrthogonalFamily, ScalarPolys};
use crate::weight::{Atom, WeightMatrixSpec};

use super::{BetaVector, FactorPair, DIVISION_TOL};

/// Smallest eigenvalue tolerated in the new atom at zero.
const ATOM_EIG_TOL: f64 = 1e-9;

/// The chain `P_A P_R` obtained by swapping the factors.
#[derive(Debug, Clone)]
pub struct DarbouxChain {
    chain: ValidatedChain,
    pair: FactorPair,
    /// Spectral matrix of the transformed chain, once supplied.
    pub weight: Option<WeightMatrixSpec>,
}

pub fn darboux(chain: &ValidatedChain, pair: &FactorPair) -> DarbouxChain {
    DarbouxChain {
        chain: chain.clone(),
        pair: pair.clone(),
        weight: None,
    }
}

impl DarbouxChain {
    pub fn chain(&self) -> &ValidatedChain {
        &self.chain
    }

    pub fn pair(&self) -> &FactorPair {
        &self.pair
    }

    /// `A~_n = S_n X_n`, `B~_0 = S_0 Y_0`, `B~_n = R_n X_{n-1} + S_n Y_n`,
    /// `C~_n = R_n Y_{n-1}`.
    pub fn blocks(&self, level: usize) -> Result<BlockTriple> {
        let p = &self.pair;
        let s = p.s_block(level)?;
        let a = &s * p.x_block(level)?;
        if level == 0 {
            let b = &s * p.y_block(0)?;
            return Ok(BlockTriple { level, a, b, c: None });
        }
        let r = p.r_block(level)?;
        let b = &r * p.x_block(level - 1)? + &s * p.y_block(level)?;
        let c = &r * p.y_block(level - 1)?;
        Ok(BlockTriple { level, a, b, c: Some(c) })
    }

    /// Body probabilities of the new chain; these are the `beta_m`.
    pub fn alpha_tilde(&self) -> Vec<f64> {
        self.pair.beta.as_slice().to_vec()
    }

    /// `d_{i,j} = beta_j r_{1,i}` between the first sites of legs `i != j`,
    /// indexed from zero (`d[(i-1, j-1)]`).
    pub fn extra_transitions(&self) -> Result<DMatrix<f64>> {
        let n = self.chain.n_legs;
        let mut d = DMatrix::zeros(n, n);
        for i in 1..=n {
            let r = self.pair.entry(i, 1, FactorEntry::R)?;
            for j in 1..=n {
                if i != j {
                    d[(i - 1, j - 1)] = self.pair.beta.get(j) * r;
                }
            }
        }
        Ok(d)
    }

    /// Attach the Geronimus weight built from the original weight and
    /// `M_{-1} = B(0; W)`.
    pub fn with_geronimus(mut self, weight: &WeightMatrixSpec, m_minus1: &DMatrix<f64>) -> Result<Self> {
        self.weight = Some(geronimus_weight(&self.chain, &self.pair, weight, m_minus1)?);
        Ok(self)
    }
}

impl BlockOperator for DarbouxChain {
    fn n_phases(&self) -> usize {
        self.chain.n_legs
    }

    fn block_triple(&self, level: usize) -> Result<BlockTriple> {
        self.blocks(level)
    }
}

impl OrthogonalFamily for DarbouxChain {
    fn dim(&self) -> usize {
        self.chain.n_legs
    }

    fn polys(&self, n_max: usize, x: f64) -> Result<Vec<DMatrix<f64>>> {
        darboux_polys(&self.chain, &self.pair, n_max, x)
    }

    fn potential_matrix(&self, n: usize) -> Result<DMatrix<f64>> {
        darboux_potential(&self.chain, &self.pair, n)
    }
}

/// `X = (Pi_0 Y_0 S_0)^{-1}` from its entrywise closed form.
pub fn x_matrix(chain: &ValidatedChain, beta: &BetaVector) -> Result<DMatrix<f64>> {
    let b0 = beta.get(0);
    if b0 < DIVISION_TOL {
        return Err(Error::SingularGeronimus);
    }
    let n = chain.n_legs;
    let t = |p: usize| 1.0 - beta.get(p) / chain.alpha(p);
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let (p, q) = (i.min(j), i.max(j));
        let v = match (p, q) {
            (0, 0) => 1.0,
            (0, q) => t(q),
            (p, q) if p < q => t(p) * t(q),
            (p, _) => t(p) * (1.0 - b0 / chain.alpha(p) - beta.get(p) / chain.alpha(p)),
        };
        v / b0
    }))
}

/// `W~ = S_0 (W / x + [X - M_{-1}] delta_0) S_0^T`.
pub fn geronimus_weight(
    chain: &ValidatedChain,
    pair: &FactorPair,
    weight: &WeightMatrixSpec,
    m_minus1: &DMatrix<f64>,
) -> Result<WeightMatrixSpec> {
    if weight.distance_to(0.0) < DIVISION_TOL {
        return Err(Error::ZeroInSupport);
    }
    let s0 = pair.s_block(0)?;
    let x = x_matrix(chain, &pair.beta)?;
    let new_mass = &s0 * (x - m_minus1) * s0.transpose();
    let new_mass = (&new_mass + new_mass.transpose()) * 0.5;
    let min_eigenvalue = SymmetricEigen::new(new_mass.clone()).eigenvalues.min();
    if min_eigenvalue < -ATOM_EIG_TOL {
        return Err(Error::NegativeAtomMass { min_eigenvalue });
    }
    let mut atoms: Vec<Atom> = weight
        .atoms
        .iter()
        .map(|a| Atom {
            location: a.location,
            mass: &s0 * (&a.mass / a.location) * s0.transpose(),
        })
        .collect();
    atoms.push(Atom {
        location: 0.0,
        mass: new_mass,
    });
    let mut out = match weight.density_fn() {
        Some(d) => {
            let s = s0.clone();
            WeightMatrixSpec::new(weight.dim, weight.support, move |x| &s * (d(x) / x) * s.transpose())
        }
        None => WeightMatrixSpec::discrete(weight.dim, Vec::new()),
    }
    .with_rule_kind(weight.rule_kind);
    out.atoms = atoms;
    Ok(out)
}

/// `Q~_n = U_n S_0^{-1}` with `U_0 = S_0`, `U_n = R_n Q_{n-1} + S_n Q_n`.
pub fn darboux_polys(chain: &ValidatedChain, pair: &FactorPair, n_max: usize, x: f64) -> Result<Vec<DMatrix<f64>>> {
    let q = recurrence_polys(chain, n_max, x)?;
    let s0_inv = pair.s0_inverse()?;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(DMatrix::identity(chain.n_legs, chain.n_legs));
    for n in 1..=n_max {
        let u = pair.r_block(n)? * &q[n - 1] + pair.s_block(n)? * &q[n];
        out.push(u * &s0_inv);
    }
    Ok(out)
}

/// `Q~_n` assembled entrywise from scalar leg polynomials (`legs[m - 1]`
/// for leg `m`), following the component formulas. Valid for `n >= 1`;
/// `Q~_0 = I`.
pub fn darboux_component_polys(
    chain: &ValidatedChain,
    pair: &FactorPair,
    legs: &[ScalarPolys],
    n_max: usize,
) -> Result<Vec<DMatrix<f64>>> {
    let n_legs = chain.n_legs;
    let e = |leg, depth, which| pair.entry(leg, depth, which);
    let mut weight_sum = 0.0;
    for k in 1..n_legs {
        weight_sum += e(k, 1, FactorEntry::R)? * chain.alpha(k) / e(k, 1, FactorEntry::S)?;
    }
    let top = &legs[n_legs - 1];
    let mut out = vec![DMatrix::identity(n_legs, n_legs)];
    for n in 1..=n_max {
        let mut m = DMatrix::zeros(n_legs, n_legs);
        let (s, r) = (e(n_legs, n, FactorEntry::S)?, e(n_legs, n, FactorEntry::R)?);
        let r0_top = s * top.assoc[n] + r * top.assoc[n - 1];
        m[(0, 0)] = s * top.q[n] + r * top.q[n - 1] - r0_top * weight_sum;
        for k in 1..n_legs {
            let leg = &legs[k - 1];
            let (s1, r1) = (e(k, 1, FactorEntry::S)?, e(k, 1, FactorEntry::R)?);
            let (s, r) = (e(k, n + 1, FactorEntry::S)?, e(k, n + 1, FactorEntry::R)?);
            let main = s * leg.q[n] + r * leg.q[n - 1];
            m[(0, k)] = chain.alpha(k) / s1 * r0_top;
            m[(k, k)] = main / s1;
            m[(k, 0)] = s * leg.assoc[n] + r * leg.assoc[n - 1] - r1 / s1 * main;
        }
        out.push(m);
    }
    Ok(out)
}

/// `Pi~_n = Y_n^T Pi_n S_n^{-1}`, diagonal; `Pi~_0 = diag(beta_0, beta_k / r_{1,k})`.
pub fn darboux_potential(chain: &ValidatedChain, pair: &FactorPair, n: usize) -> Result<DMatrix<f64>> {
    let n_legs = chain.n_legs;
    let mut d = DMatrix::zeros(n_legs, n_legs);
    if n == 0 {
        d[(0, 0)] = pair.beta.get(0);
        for k in 1..n_legs {
            let r = pair.entry(k, 1, FactorEntry::R)?;
            if r.abs() < DIVISION_TOL {
                return Err(Error::DegenerateDivision { depth: 1, leg: k });
            }
            d[(k, k)] = pair.beta.get(k) / r;
        }
        return Ok(d);
    }
    let pi = chain.potential(n).diagonal;
    for p in 0..n_legs {
        let (leg, depth) = leg_depth(n_legs, n, p);
        let s = pair.entry(leg, depth, FactorEntry::S)?;
        if s.abs() < DIVISION_TOL {
            return Err(Error::DegenerateDivision { depth, leg });
        }
        d[(p, p)] = pair.entry(leg, depth, FactorEntry::Y)? * pi[p] / s;
    }
    Ok(d)
}
