//! Swap the factors to get a new stochastic chain, then build its spectral
//! matrix and check orthogonality and the transition blocks.
//!
//!     cargo run --release --example darboux_transform

use nalgebra::DMatrix;
use spiderchain::factorization::{darboux, ul_factorize, BetaVector};
use spiderchain::oracle::{exact_levels, power_block};
use spiderchain::presets::three_leg_walk;
use spiderchain::spectral::{gram, km_block, OrthogonalFamily};
use spiderchain::spider_rw::{rw_m_minus1, rw_weight, RWParams};
use spiderchain::QuadratureRule;

fn main() -> spiderchain::Result<()> {
    let walk = three_leg_walk();
    let p = RWParams::from_chain(&walk)?;
    let pair = ul_factorize(&walk, &BetaVector::new(&[0.25, 0.3, 0.35])?, 40)?;
    let d = darboux(&walk, &pair).with_geronimus(&rw_weight(&p)?, &rw_m_minus1(&p)?)?;

    let t = d.blocks(0)?;
    println!("new body row and first sites:{}", t.b);
    println!("jumps between legs d_ij:{}", d.extra_transitions()?);
    println!("Pi~_0 ={}", d.potential_matrix(0)?);

    let w = d.weight.clone().expect("attached above");
    let atom = w.atoms.iter().find(|a| a.location == 0.0).expect("new atom at 0");
    println!("new atom at 0:{}", atom.mass);

    let rule = QuadratureRule::new(w.rule_kind, 512);
    let g = gram(&d, &w, 3, 3, &rule)? * d.potential_matrix(3)?;
    println!("|<Q~_3, Q~_3> Pi~_3 - I| = {:.1e}", (g - DMatrix::identity(3, 3)).amax());
    println!("|<Q~_2, Q~_5>| = {:.1e}", gram(&d, &w, 2, 5, &rule)?.amax());

    let km = km_block(&d, &w, 1, 2, 7, &rule)?;
    let exact = power_block(&d, exact_levels(1, 2, 7), 7, 1, 2)?;
    println!("P~^7 block (1, 2): spectral vs matrix power {:.1e}", (km - exact).amax());
    Ok(())
}
