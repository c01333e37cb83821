//! Simulated paths against the exact distribution.
//!
//!     cargo run --release --example monte_carlo

use spiderchain::chain::{site_of, StateIndex};
use spiderchain::oracle::{compare, exact_row, simulate};
use spiderchain::presets::three_leg_walk;

fn main() -> spiderchain::Result<()> {
    let walk = three_leg_walk();
    let emp = simulate(&walk, StateIndex::BODY, 5, 1_000_000, 2024)?;
    let exact = exact_row(&walk, StateIndex::BODY, 5)?;
    let cmp = compare(&emp, &exact)?;
    for (state, count) in emp.iter().take(8) {
        let f = state.flat(3);
        println!(
            "{:?}: {:.5} vs {:.5} (z = {:+.2})",
            site_of(3, state),
            count as f64 / emp.paths as f64,
            exact[f],
            cmp.z_scores[f]
        );
    }
    println!("total variation {:.2e}, max |z| {:.2}", cmp.total_variation, cmp.max_abs_z);
    Ok(())
}
