//! Matrix orthogonal polynomials three ways: the block recurrence, the
//! scalar leg polynomials assembled into arrow form, and the Chebyshev
//! closed form of the constant walk.
//!
//!     cargo run --example matrix_polynomials

use spiderchain::presets::three_leg_walk;
use spiderchain::spectral::{assemble_from_scalar, eval_matrix_polys};
use spiderchain::spider_rw::{rw_polys, RWParams};

fn main() -> spiderchain::Result<()> {
    let walk = three_leg_walk();
    let p = RWParams::from_chain(&walk)?;
    let x = 0.3;
    let rec = eval_matrix_polys(&walk, 6, x);
    let arrow = assemble_from_scalar(&walk, 6, x);
    let cheb = rw_polys(&p, 6, x);

    for n in 0..=6 {
        let d1 = (&rec.values[n] - &arrow.values[n]).amax();
        let d2 = (&rec.values[n] - &cheb[n]).amax();
        println!("n = {n}: |rec - arrow| = {d1:.1e}, |rec - chebyshev| = {d2:.1e}");
    }
    println!("Q_4({x}) ={}", rec.values[4]);

    // The recurrence itself: A_n Q_{n+1} = (x - B_n) Q_n - C_n Q_{n-1}.
    let t = walk.blocks(2);
    let lhs = &t.a * &rec.values[3];
    let rhs = &rec.values[2] * x - &t.b * &rec.values[2] - t.c.unwrap() * &rec.values[1];
    println!("recurrence residual at n = 2: {:.1e}", (lhs - rhs).amax());
    Ok(())
}
