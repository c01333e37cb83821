//! The Stieltjes transform of the spectral matrix from its closed form,
//! from the block assembly of leg transforms, and by quadrature.
//!
//!     cargo run --release --example stieltjes_transforms

use spiderchain::presets::three_leg_walk;
use spiderchain::spider_rw::{rw_stieltjes, rw_weight, RWParams};
use spiderchain::stieltjes::{chain_stieltjes, stieltjes_weight, C64};
use spiderchain::QuadratureRule;

fn main() -> spiderchain::Result<()> {
    let walk = three_leg_walk();
    let p = RWParams::from_chain(&walk)?;
    let weight = rw_weight(&p)?;
    let rule = QuadratureRule::new(weight.rule_kind, 512);

    for z in [C64::new(0.5, 0.1), C64::new(-1.0, 0.5), C64::new(1.2, -0.3), C64::new(0.05, 0.2)] {
        let closed = rw_stieltjes(&p, z)?;
        let assembled = chain_stieltjes(walk.params(), z)?;
        let quad = stieltjes_weight(&weight, z, &rule)?;
        println!(
            "z = {z:.2}: closed vs assembled {:.1e}, closed vs quadrature {:.1e}",
            (&closed - &assembled).map(|v| v.norm()).max(),
            (&closed - &quad).map(|v| v.norm()).max()
        );
    }

    // -z B(z) tends to the total mass, diag(1, c / alpha_k).
    let z = C64::new(1e6, 0.0);
    let far = rw_stieltjes(&p, z)? * (-z);
    println!("-z B(z) at z = 1e6:{}", far.map(|v| v.re));
    Ok(())
}
