//! Connected simple Hurwitz numbers from the recursion, checked against
//! the character-theoretic count.

use hurwitz_tr::hodge::{hurwitz_csv, hurwitz_from_recursion};
use hurwitz_tr::oracle::{connected_hurwitz_in, HurwitzSeries};
use hurwitz_tr::partition::partitions_of;
use hurwitz_tr::recursion::Engine;
use hurwitz_tr::Rational;

fn main() -> hurwitz_tr::Result<()> {
    let mut engine = Engine::<Rational>::lambert()?;
    let free = HurwitzSeries::partition_function(10, 4).log()?;
    let mut values = Vec::new();
    for g in 0..=2 {
        for n in 1..=4 {
            for mu in partitions_of(n) {
                let v = hurwitz_from_recursion(&mut engine, g, &mu)?;
                assert_eq!(v.value, connected_hurwitz_in(&free, g, &mu)?);
                values.push(v);
            }
        }
    }
    print!("{}", hurwitz_csv(&values));
    Ok(())
}
