//! Closed forms of the constant walk: support, atoms, density, recurrence
//! class, for one instance on each side of a = c.
//!
//!     cargo run --example spider_walk

use spiderchain::presets::rational_walk;
use spiderchain::spider_rw::{recurrence_diagnostic, rw_atoms, rw_classify, rw_density, support, RWParams};
use spiderchain::validate;

fn main() -> spiderchain::Result<()> {
    let cases = [
        ("a < c", rational_walk(&[(1, 2), (1, 8), (1, 6), (5, 24)], (1, 5), (1, 4))),
        ("a = c", rational_walk(&[(3, 5), (1, 5), (1, 10), (1, 10)], (1, 4), (1, 4))),
        ("a > c", rational_walk(&[(1, 2), (1, 4), (1, 4)], (3, 10), (1, 5))),
    ];
    for (name, params) in cases {
        let p = RWParams::from_chain(&validate(params)?)?;
        let sup = support(&p);
        let atoms = rw_atoms(&p)?;
        println!("{name}: {:?}, support [{:.4}, {:.4}]", rw_classify(&p), sup.lo, sup.hi);
        for atom in atoms.atoms() {
            println!("  atom at {:.4}, mass{}", atom.location, atom.mass());
        }
        let mid = 0.5 * (sup.lo + sup.hi);
        println!("  density at {mid:.3}:{}", rw_density(&p, mid)?);
        let diag = recurrence_diagnostic(&p, 0)?;
        println!("  body return integral as eps shrinks: {:.3?}", diag.values);
    }
    Ok(())
}
