//! Factor P = P_R P_A for a feasible beta, check the product, and watch the
//! factorization break below the threshold.
//!
//!     cargo run --example ul_factorization

use spiderchain::error::FactorEntry;
use spiderchain::factorization::{ul_factorize, verify_product, BetaVector};
use spiderchain::presets::three_leg_walk;
use spiderchain::Error;

fn main() -> spiderchain::Result<()> {
    let walk = three_leg_walk();
    let beta = BetaVector::new(&[0.25, 0.3, 0.35])?;
    let pair = ul_factorize(&walk, &beta, 100)?;
    println!("beta = {:?}", beta.as_slice());
    for depth in 1..=4 {
        let e = |k| pair.entry(1, depth, k).unwrap();
        println!(
            "leg 1, depth {depth}: x = {:.6} y = {:.6} r = {:.6} s = {:.6}",
            e(FactorEntry::X),
            e(FactorEntry::Y),
            e(FactorEntry::R),
            e(FactorEntry::S)
        );
    }
    println!("entries fixed from depth {:?}", pair.legs[0].locked_from);
    println!("Y_0 ={}S_0 ={}", pair.y_block(0)?, pair.s_block(0)?);
    println!("max |P - P_R P_A| over 100 levels: {:.1e}", verify_product(&walk, &pair, 100)?);

    // H_1 is about 0.1968; 0.19 is below it.
    match ul_factorize(&walk, &BetaVector::new(&[0.19, 0.3, 0.35])?, 100) {
        Err(Error::NotStochastic { depth, leg, entry, value }) => {
            println!("beta_1 = 0.19: {entry:?} = {value:.4} on leg {leg} at depth {depth}")
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
