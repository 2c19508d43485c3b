//! Closed amplitudes F_g; the value does not depend on the integration
//! constant of the primitive.

use hurwitz_tr::recursion::Engine;
use hurwitz_tr::Rational;

fn main() -> hurwitz_tr::Result<()> {
    let mut lambert = Engine::<Rational>::lambert()?;
    let mut framed = Engine::framed(Rational::from(1))?;
    for c in [Rational::zero(), Rational::from(7)] {
        println!(
            "constant {c}: Lambert F_2 = {}, framed (f=1) F_2 = {}",
            lambert.closed_amplitude(2, &c)?,
            framed.closed_amplitude(2, &c)?
        );
    }
    Ok(())
}
