//! Stable amplitudes W_g(h pt) on the Lambert curve, in the ζ-basis.
//!
//! `cargo run --release --example lambert_amplitudes -- 3` goes up to 2g-2+h = 3.

use std::time::Instant;

use hurwitz_tr::recursion::Engine;
use hurwitz_tr::Rational;

fn main() -> hurwitz_tr::Result<()> {
    let budget: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let mut engine = Engine::<Rational>::lambert()?;
    for chi in 1..=budget {
        for g in 0..=(chi + 2) / 2 {
            let h = chi + 2 - 2 * g;
            if h < 1 {
                continue;
            }
            let t = Instant::now();
            let w = engine.w_amplitude(g as u32, h as u32)?;
            println!("W_{g}({h} pt) [{:.2?}]\n  {}", t.elapsed(), w.pretty());
        }
    }
    Ok(())
}
