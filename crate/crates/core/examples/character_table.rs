//! Character table of S_n by Murnaghan–Nakayama, with the quantities the
//! Hurwitz oracle uses.

use hurwitz_tr::oracle::{hook_dimension, kappa, mn_character};
use hurwitz_tr::partition::partitions_of;

fn main() -> hurwitz_tr::Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let classes = partitions_of(n);
    print!("{:>12} {:>6} {:>6} |", "R", "dim", "kappa");
    for mu in &classes {
        print!(" {:>8}", mu.to_string());
    }
    println!();
    for r in &classes {
        print!("{:>12} {:>6} {:>6} |", r.to_string(), hook_dimension(r), kappa(r));
        for mu in &classes {
            print!(" {:>8}", mn_character(r, mu)?);
        }
        println!();
    }
    Ok(())
}
