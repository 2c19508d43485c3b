//! The f → ∞ limit: triple brackets collapse to single brackets.

use hurwitz_tr::hodge::{framing_limit_check, weight_limit_check};
use hurwitz_tr::recursion::Engine;
use hurwitz_tr::{Rational, RationalFunction};

fn main() -> hurwitz_tr::Result<()> {
    let mut lambert = Engine::<Rational>::lambert()?;
    let mut framed = Engine::framed(RationalFunction::var())?;
    for (g, h) in [(0, 3), (1, 1), (1, 2)] {
        let report = framing_limit_check(&mut lambert, &mut framed, g, h)?;
        for r in &report.rows {
            println!(
                "g={g} {:?}: triple {} -> f^{} coefficient {} vs single {} [{}]",
                r.indices,
                r.triple,
                2 * g,
                r.leading,
                r.single,
                if r.ok { "ok" } else { "FAIL" }
            );
        }
    }
    let weights = weight_limit_check(3, 5);
    println!("{} of {} zeta weights have the right limit", weights.iter().filter(|w| w.ok).count(), weights.len());
    Ok(())
}
