//! Writes a parity-check matrix in alist format and reads it back.
//!
//! ```text
//! cargo run --release --example alist_roundtrip -- /tmp/h.alist
//! ```

use qkd_recon::ldpc::{build_regular, read_alist, write_alist};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qkd_recon::Result<()> {
    let h = build_regular(48, 3, 6, 6, &mut ChaCha8Rng::seed_from_u64(1))?;
    let text = write_alist(&h);
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, &text).map_err(|source| qkd_recon::Error::Io { path: path.clone().into(), source })?;
        println!("wrote {path}");
    } else {
        print!("{}", text.lines().take(6).map(|l| format!("{l}\n")).collect::<String>());
        println!("...");
    }
    let back = read_alist(&text)?;
    assert_eq!(back, h);
    println!("round trip ok: {} x {}, degrees {:?}", back.m(), back.n(), back.regular_degrees());
    Ok(())
}
