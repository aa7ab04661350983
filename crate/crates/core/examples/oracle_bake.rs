//! Regenerate the frozen oracle constants.
//!
//! ```text
//! cargo run --example oracle_bake -- crates/core/data/oracle_constants.toml
//! ```

use annihilation::oracles::oracle_bake;

fn main() -> annihilation::Result<()> {
    let text = oracle_bake()?.render()?;
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
