//! n-step transition blocks from the spectral representation, checked
//! against powers of the dense truncation.
//!
//!     cargo run --release --example karlin_mcgregor

use spiderchain::oracle::{exact_levels, power_block};
use spiderchain::presets::three_leg_walk;
use spiderchain::spectral::km_block;
use spiderchain::spider_rw::weight_for;
use spiderchain::QuadratureRule;

fn main() -> spiderchain::Result<()> {
    let walk = three_leg_walk();
    let weight = weight_for(&walk)?;
    let rule = QuadratureRule::new(weight.rule_kind, 512);

    let km = km_block(&walk, &weight, 0, 1, 6, &rule)?;
    let exact = power_block(&walk, exact_levels(0, 1, 6), 6, 0, 1)?;
    println!("P^6 block (0, 1) from the weight:{km}");
    println!("and from the truncation:{exact}");

    let mut worst = 0.0f64;
    for i in 0..=3 {
        for j in 0..=3 {
            for n in 0..=12 {
                let km = km_block(&walk, &weight, i, j, n, &rule)?;
                let exact = power_block(&walk, exact_levels(i, j, n), n, i, j)?;
                worst = worst.max((km - exact).amax());
            }
        }
    }
    println!("max error over i, j <= 3, n <= 12: {worst:.2e}");
    Ok(())
}
