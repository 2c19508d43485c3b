//! Framed-vertex amplitudes, symbolic in the framing f and specialized.

use hurwitz_tr::field::specialize;
use hurwitz_tr::recursion::Engine;
use hurwitz_tr::{Rational, RationalFunction};

fn main() -> hurwitz_tr::Result<()> {
    let mut symbolic = Engine::framed(RationalFunction::var())?;
    for (g, h) in [(0, 3), (1, 1), (1, 2)] {
        println!("W_{g}({h} pt) = {}", symbolic.w_amplitude(g, h)?.pretty());
    }

    // evaluating the symbolic answer agrees with running at a fixed framing
    let f = Rational::new(2, 3)?;
    let mut fixed = Engine::framed(f.clone())?;
    let direct = fixed.w_amplitude(1, 2)?;
    let mapped = symbolic.w_amplitude(1, 2)?.map(direct.curve(), |v| specialize(v, &f).unwrap());
    println!("at f = {f}: {}", direct.pretty());
    assert_eq!(mapped, *direct);
    Ok(())
}
