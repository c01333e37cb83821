//! A chain whose legs start with a few irregular sites. There is no closed
//! weight, but the Stieltjes transform still comes from the leg continued
//! fractions, and it must match the resolvent of the truncated chain.
//!
//!     cargo run --example general_chain

use nalgebra::DMatrix;
use spiderchain::stieltjes::{chain_stieltjes, cf_limit, C64, CF_TOL};
use spiderchain::{validate, SpiderParams};

const SPEC: &str = include_str!("../data/prefix_chain.json");

fn main() -> spiderchain::Result<()> {
    let chain = validate(SpiderParams::from_json_str(SPEC)?)?;
    let n = chain.n_legs;

    for leg in 1..=n {
        let l = cf_limit(chain.params(), leg, CF_TOL)?;
        println!("H_{leg} = {:.12}", l.value);
    }

    // -B(z) Pi_0 is the body block of (z - P)^{-1}; far from the spectrum the
    // truncation error decays like |z|^{-L}.
    let t = chain.truncate(60)?;
    let pi0 = chain.potential(0).matrix().map(|v| C64::new(v, 0.0));
    for z in [C64::new(2.0, 0.0), C64::new(0.0, 2.0), C64::new(-1.4, 1.4)] {
        let b = chain_stieltjes(chain.params(), z)?;
        let dim = t.matrix.nrows();
        let resolvent = (DMatrix::<C64>::identity(dim, dim) * z - t.matrix.map(|v| C64::new(v, 0.0)))
            .try_inverse()
            .expect("z is off the spectrum");
        let corner = resolvent.view((0, 0), (n, n)).into_owned();
        println!("z = {z}: |-B Pi_0 - resolvent corner| = {:.1e}", (-b * &pi0 - corner).map(|v| v.norm()).max());
    }
    Ok(())
}
