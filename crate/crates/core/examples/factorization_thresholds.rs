//! When does the chain split as reflecting times absorbing? Thresholds from
//! the continued-fraction convergents and from the closed form.
//!
//!     cargo run --example factorization_thresholds

use spiderchain::factorization::thresholds;
use spiderchain::presets::three_leg_walk;
use spiderchain::spider_rw::{rw_thresholds, RWParams};
use spiderchain::stieltjes::{cf_limit, convergents, CF_TOL};

fn main() -> spiderchain::Result<()> {
    let walk = three_leg_walk();
    let state = convergents(walk.params(), 1, 10);
    println!("leg 1 convergents: {:.6?}", state.convergents);
    println!("0 < A_n < B_n: {}, increasing: {}", state.hypothesis_holds, state.strictly_increasing);

    for leg in 1..=3 {
        let l = cf_limit(walk.params(), leg, CF_TOL)?;
        println!("H_{leg} = {:.15} after {} convergents (certified: {})", l.value, l.depth, l.certified);
    }

    let closed = rw_thresholds(&RWParams::from_chain(&walk)?)?;
    let s41 = 41f64.sqrt();
    let printed = [(19.0 - s41) / 64.0, (19.0 - s41) / 48.0, (95.0 - 5.0 * s41) / 192.0];
    println!("closed form {:?} via {:?}", closed.h, closed.method);
    println!("reference   {printed:?}");

    let th = thresholds(walk.params(), CF_TOL)?;
    println!("sum H = {:.6}, some beta works: {}", th.sum, th.feasible);
    Ok(())
}
