//! Build a spider chain from JSON, validate it and look at its block form.
//!
//!     cargo run --example chain_blocks

use spiderchain::chain::{site_of, StateIndex};
use spiderchain::{validate, SpiderParams};

const SPEC: &str = r#"{
  "N": 3,
  "alpha": ["1/2", "1/8", "1/6", "5/24"],
  "legs": [
    { "tail": ["1/5", "11/20", "1/4"] },
    { "tail": ["1/5", "11/20", "1/4"] },
    { "prefix": [["1/3", "1/3", "1/3"]], "tail": ["1/5", "11/20", "1/4"] }
  ]
}"#;

fn main() -> spiderchain::Result<()> {
    let chain = validate(SpiderParams::from_json_str(SPEC)?)?;

    for level in 0..3 {
        let t = chain.blocks(level);
        println!("level {level}\n A ={}\n B ={}", t.a, t.b);
        if let Some(c) = &t.c {
            println!(" C ={c}");
        }
        println!(" row sums {:?}", t.row_sums().as_slice());
        println!(" Pi = {:?}", chain.potential(level).diagonal.as_slice());
    }

    // Phase 0 of level n >= 1 sits on leg N; the other phases are one site deeper.
    for level in 0..3 {
        let sites: Vec<_> = (0..3).map(|p| site_of(3, StateIndex::new(level, p))).collect();
        println!("level {level}: {sites:?}");
    }

    let t = chain.truncate(6)?;
    println!("dense truncation: {} x {}", t.matrix.nrows(), t.matrix.ncols());

    // Broken specs report every violation at once.
    let bad = r#"{"N": 2, "alpha": [0.5, 0.3, 0.3], "legs": [{"tail": [0.2, 0.6, 0.0]}, {"tail": [0.2, 0.55, 0.25]}]}"#;
    if let Err(e) = validate(SpiderParams::from_json_str(bad)?) {
        println!("rejected: {e}");
    }
    Ok(())
}
