//! Hodge integrals read off the amplitudes: single-λ brackets from the
//! Lambert curve, triple-λ brackets from the framed curve.

use hurwitz_tr::hodge::{framed_bracket, hodge_bracket};
use hurwitz_tr::recursion::Engine;
use hurwitz_tr::{Rational, RationalFunction};

fn main() -> hurwitz_tr::Result<()> {
    let mut lambert = Engine::<Rational>::lambert()?;
    let mut framed = Engine::framed(RationalFunction::var())?;
    for (g, idx) in [(1, vec![1]), (1, vec![0]), (2, vec![4]), (2, vec![2]), (0, vec![0, 0, 0])] {
        let single = hodge_bracket(&mut lambert, g, &idx)?;
        let triple = framed_bracket(&mut framed, g, &idx)?;
        println!("g={g} tau{idx:?}: single {}  triple {}", single.value, triple.value);
    }
    Ok(())
}
