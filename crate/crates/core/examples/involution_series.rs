//! The local involution of both spectral curves near the branch point.
//!
//! Run with `cargo run --example involution_series`.

use hurwitz_tr::curve::CurveModel;
use hurwitz_tr::{Rational, RationalFunction};

fn main() -> hurwitz_tr::Result<()> {
    let lambert = CurveModel::<Rational>::lambert(8)?;
    println!("Lambert  S(z) = {:?}", lambert.involution());

    let framed = CurveModel::framed(RationalFunction::var(), 5)?;
    for e in 1..5 {
        println!("framed   [z^{e}] P(z) = {}", framed.involution().coeff(e)?);
    }
    Ok(())
}
