//! Persisting amplitudes: a second engine on the same directory reloads
//! instead of recomputing.

use hurwitz_tr::recursion::Engine;
use hurwitz_tr::store::Store;
use hurwitz_tr::Rational;

fn main() -> hurwitz_tr::Result<()> {
    let dir = std::env::temp_dir().join(format!("hurwitz-tr-example-{}", std::process::id()));
    let store = Store::open(&dir)?;

    let mut first = Engine::<Rational>::lambert()?.with_store(store.clone());
    let computed = first.w_amplitude(2, 1)?;
    for e in store.list()? {
        println!("{} (curve {}, g={}, h={}, trunc {})", e.file, e.curve, e.g, e.h, e.trunc);
    }

    let mut second = Engine::<Rational>::lambert()?.with_store(store.clone());
    assert_eq!(second.w_amplitude(2, 1)?, computed);
    println!("reloaded W_2(1 pt) = {}", computed.pretty());

    println!("removed {} files", store.clear()?);
    std::fs::remove_dir(&dir)?;
    Ok(())
}
