//! Acceptance suite: one PASS/FAIL line per criterion with its runtime
//! against a pinned limit. Exits non-zero when any criterion fails.

use std::time::{Duration, Instant};

use hurwitz_tr::curve::{tree_series, CurveModel};
use hurwitz_tr::field::specialize;
use hurwitz_tr::hodge::{framing_limit_check, hurwitz_from_recursion, weight_limit_check};
use hurwitz_tr::oracle::{
    connected_hurwitz, connected_hurwitz_in, hook_dimension, mn_character, schur_partition_function_check,
    HurwitzSeries,
};
use hurwitz_tr::partition::{partitions_of, Partition};
use hurwitz_tr::poly::Poly;
use hurwitz_tr::rational::factorial;
use hurwitz_tr::recursion::{w_unstable_annulus, w_unstable_disk, Engine, TruncPolicy};
use hurwitz_tr::{Rational, RationalFunction};
use num_bigint::BigInt;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
}

fn poly(c: &[i64], scale: (i64, i64)) -> RationalFunction {
    RationalFunction::from_poly(Poly::from_ints(c)).scale(&q(scale.0, scale.1))
}

fn expect<T: PartialEq + std::fmt::Display>(what: &str, got: &T, want: &T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn involution_series() -> Outcome {
    let s = CurveModel::<Rational>::lambert(8).map_err(err)?;
    let want = [q(-1, 1), q(2, 3), q(-4, 9), q(44, 135), q(-104, 405), q(40, 189), q(-7648, 42525)];
    for (k, w) in want.iter().enumerate() {
        let e = k as i64 + 1;
        expect(&format!("S z^{e}"), &s.involution().coeff(e).map_err(err)?, w)?;
    }
    let pz = CurveModel::framed(RationalFunction::var(), 5).map_err(err)?;
    // -2(f^2-1)/(3f), -4(f^2-1)^2/(9f^2), -2(1+f)^3(-22+57f-57f^2+22f^3)/(135f^3)
    let c4num = Poly::from_ints(&[1, 3, 3, 1]).mul(&Poly::from_ints(&[-22, 57, -57, 22])).scale(&q(-2, 1));
    let want = [
        rf(&[-1], &[1]),
        rf(&[2, 0, -2], &[0, 3]),
        rf(&[-4, 0, 8, 0, -4], &[0, 0, 9]),
        RationalFunction::new(c4num, Poly::from_ints(&[0, 0, 0, 135])).unwrap(),
    ];
    for (k, w) in want.iter().enumerate() {
        let e = k as i64 + 1;
        expect(&format!("P z^{e}"), &pz.involution().coeff(e).map_err(err)?, w)?;
    }
    Ok("S(z) through z^7 and P(z) through z^4 exact".into())
}

fn tree_function() -> Outcome {
    let t = tree_series::<Rational>(21);
    for m in 1..=20u32 {
        let want = Rational::new(BigInt::from(m).pow(m - 1), factorial(m)).unwrap();
        expect(&format!("x^{m}"), &t.coeff(m as i64).map_err(err)?, &want)?;
    }
    Ok("mu^(mu-1)/mu! for mu <= 20".into())
}

fn check_tensor<F: hurwitz_tr::Field>(
    e: &mut Engine<F>,
    g: u32,
    h: u32,
    entries: &[(&[u32], F)],
) -> Result<(), String> {
    let amp = e.w_amplitude(g, h).map_err(err)?;
    for (n, v) in entries {
        expect(&format!("W_{g}({h} pt) at {n:?}"), &amp.coeff(n), v)?;
    }
    if amp.len() != entries.len() {
        return Err(format!("W_{g}({h} pt) has {} entries, expected {}", amp.len(), entries.len()));
    }
    Ok(())
}

fn lambert_table() -> Outcome {
    let mut e = Engine::<Rational>::lambert().map_err(err)?;
    let d = 5760;
    check_tensor(&mut e, 1, 1, &[(&[0], q(-1, 24)), (&[1], q(1, 24))])?;
    check_tensor(&mut e, 0, 3, &[(&[0, 0, 0], q(1, 1))])?;
    check_tensor(&mut e, 0, 4, &[(&[0, 0, 0, 1], q(1, 1))])?;
    check_tensor(&mut e, 1, 2, &[(&[0, 1], q(-1, 24)), (&[0, 2], q(1, 24)), (&[1, 1], q(1, 24))])?;
    check_tensor(&mut e, 2, 1, &[(&[2], q(7, d)), (&[3], q(-12, d)), (&[4], q(5, d))])?;
    check_tensor(
        &mut e,
        2,
        2,
        &[
            (&[0, 3], q(7, d)),
            (&[0, 4], q(-12, d)),
            (&[0, 5], q(5, d)),
            (&[1, 2], q(21, d)),
            (&[1, 3], q(-36, d)),
            (&[1, 4], q(15, d)),
            (&[2, 2], q(-50, d)),
            (&[2, 3], q(29, d)),
        ],
    )?;
    let d3 = 2903040;
    check_tensor(&mut e, 3, 1, &[(&[4], q(-93, d3)), (&[5], q(205, d3)), (&[6], q(-147, d3)), (&[7], q(35, d3))])?;
    Ok("7 Lambert tensors exact".into())
}

fn framed_table() -> Outcome {
    let mut e = Engine::framed(RationalFunction::var()).map_err(err)?;
    // f(f+1) = [0,1,1], 1+f+f^2 = [1,1,1]
    check_tensor(&mut e, 0, 3, &[(&[0, 0, 0], poly(&[0, 0, -1, -2, -1], (1, 1)))])?;
    check_tensor(&mut e, 0, 4, &[(&[0, 0, 0, 1], poly(&[0, 0, 0, 1, 3, 3, 1], (1, 1)))])?;
    check_tensor(&mut e, 1, 1, &[(&[0], poly(&[1, 1, 1], (1, 24))), (&[1], poly(&[0, -1, -1], (1, 24)))])?;
    check_tensor(
        &mut e,
        1,
        2,
        &[
            (&[0, 1], poly(&[0, -1, -2, -2, -1], (1, 24))),
            (&[0, 2], poly(&[0, 0, 1, 2, 1], (1, 24))),
            (&[1, 1], poly(&[0, 0, 1, 2, 1], (1, 24))),
        ],
    )?;
    check_tensor(
        &mut e,
        2,
        1,
        &[
            (&[1], poly(&[0, 2, 2], (1, 5760))),
            (&[2], poly(&[1, 2, 3, 2, 1], (-7, 5760))),
            (&[3], poly(&[0, 1, 2, 2, 1], (12, 5760))),
            (&[4], poly(&[0, 0, 1, 2, 1], (-5, 5760))),
        ],
    )?;
    Ok("5 framed tensors exact over Q(f)".into())
}

fn oracle_sweep() -> Outcome {
    let mut e = Engine::<Rational>::lambert().map_err(err)?;
    let mut cases = Vec::new();
    for g in 0..=2 {
        for n in 1..=5 {
            for mu in partitions_of(n) {
                if mu.len() <= 3 {
                    cases.push((g, mu));
                }
            }
        }
    }
    cases.push((3, p(&[1])));
    cases.push((3, p(&[2])));
    let free = HurwitzSeries::partition_function(12, 5).log().map_err(err)?;
    for (g, mu) in &cases {
        let r = hurwitz_from_recursion(&mut e, *g, mu).map_err(err)?.value;
        let o = connected_hurwitz_in(&free, *g, mu).map_err(err)?;
        expect(&format!("H_{{{g},({mu})}}"), &r, &o)?;
    }
    Ok(format!("{} (g, mu) cases agree with the character oracle", cases.len()))
}

fn framing_limit() -> Outcome {
    let mut l = Engine::<Rational>::lambert().map_err(err)?;
    let mut f = Engine::framed(RationalFunction::var()).map_err(err)?;
    let mut tuples = 0;
    for (g, h) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)] {
        let r = framing_limit_check(&mut l, &mut f, g, h).map_err(err)?;
        if let Some(bad) = r.rows.iter().find(|x| !x.ok) {
            return Err(format!(
                "W_{g}({h} pt) {:?}: triple {} (degree {:?}), f^{} coefficient {} vs single {}",
                bad.indices,
                bad.triple,
                bad.degree,
                2 * g,
                bad.leading,
                bad.single
            ));
        }
        tuples += r.rows.len();
    }
    let w = weight_limit_check(4, 8);
    if let Some(bad) = w.iter().find(|x| !x.ok) {
        return Err(format!("zeta weight limit fails at n={}, mu={}", bad.n, bad.mu));
    }
    Ok(format!("{tuples} bracket tuples and {} zeta weights", w.len()))
}

fn properties() -> Outcome {
    let mut l = Engine::<Rational>::lambert().map_err(err)?;
    let pairs = [(0, 3), (0, 4), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)];
    for &(g, h) in &pairs {
        // symmetry and residuelessness are checked inside the recursion; the
        // pole tensor must also carry no simple poles
        let amp = l.w_amplitude(g, h).map_err(err)?;
        let dim = 3 * g + h - 3;
        if let Some((n, _)) = amp.entries().find(|(n, _)| n.iter().sum::<u32>() > dim) {
            return Err(format!("dimension bound broken by W_{g}({h} pt) at {n:?}"));
        }
        let poles = l.pole_tensor(g, h).map_err(err)?;
        if poles.entries().any(|(k, _)| k.contains(&1)) {
            return Err(format!("W_{g}({h} pt) has a simple pole"));
        }
    }
    let mut deeper = Engine::<Rational>::lambert().map_err(err)?.with_trunc_policy(TruncPolicy::Extra(4)).map_err(err)?;
    for &(g, h) in &pairs {
        if l.w_amplitude(g, h).map_err(err)? != deeper.w_amplitude(g, h).map_err(err)? {
            return Err(format!("W_{g}({h} pt) changes with truncation +4"));
        }
    }
    let mut sym = Engine::framed(RationalFunction::var()).map_err(err)?;
    for fv in [q(3, 1), q(-1, 2), q(5, 7)] {
        let mut num = Engine::framed(fv.clone()).map_err(err)?;
        for (g, h) in [(1, 1), (0, 3), (0, 4), (1, 2)] {
            let a = sym.w_amplitude(g, h).map_err(err)?;
            let b = num.w_amplitude(g, h).map_err(err)?;
            let mapped = a.map(b.curve(), |v| specialize(v, &fv).unwrap());
            if mapped != *b {
                return Err(format!("specialization at f = {fv} fails for W_{g}({h} pt)"));
            }
        }
    }
    for c in [q(0, 1), q(7, 1)] {
        expect("Lambert F_2", &l.closed_amplitude(2, &c).map_err(err)?, &q(0, 1))?;
    }
    let mut f1 = Engine::framed(q(1, 1)).map_err(err)?;
    for c in [q(0, 1), q(7, 1)] {
        expect("framed f=1 F_2", &f1.closed_amplitude(2, &c).map_err(err)?, &q(1, 2880))?;
    }
    for n in 1..=6 {
        let ps = partitions_of(n);
        for mu in &ps {
            for nu in &ps {
                let s: BigInt =
                    ps.iter().map(|r| mn_character(r, mu).unwrap() * mn_character(r, nu).unwrap()).sum();
                let want = if mu == nu { mu.z() } else { BigInt::from(0) };
                if s != want {
                    return Err(format!("orthogonality fails at {mu}, {nu}"));
                }
            }
        }
    }
    for n in 1..=8 {
        let ones = Partition::new(vec![1; n as usize]).unwrap();
        for r in partitions_of(n) {
            if hook_dimension(&r) != mn_character(&r, &ones).unwrap() {
                return Err(format!("hook length disagrees with chi at {r}"));
            }
        }
    }
    let z = HurwitzSeries::partition_function(6, 5);
    if z.log().map_err(err)?.exp().map_err(err)? != z {
        return Err("exp(log Z) != Z".into());
    }
    let mism = schur_partition_function_check(6, 4, false).map_err(err)?;
    if !mism.is_empty() {
        return Err(format!("Schur form differs at {} coefficients", mism.len()));
    }
    Ok("symmetry, dimension, residues, truncation, specialization, F_g, characters, exp/log, Schur".into())
}

fn unstable_cases() -> Outcome {
    let c = CurveModel::<Rational>::lambert(8).map_err(err)?;
    let ann = w_unstable_annulus(&c, 6).map_err(err)?;
    let h11 = connected_hurwitz(0, &p(&[1, 1])).map_err(err)?;
    expect("annulus constant", &ann.coeff(0, 0).map_err(err)?, &q(1, 2))?;
    expect("annulus constant vs oracle", &ann.coeff(0, 0).map_err(err)?, &h11)?;
    for (a, b) in [(2u32, 1u32), (2, 2), (3, 1)] {
        let mu = p(&[a, b]);
        let bb = mu.size() + 2 - 2;
        let want = connected_hurwitz(0, &mu).map_err(err)? * Rational::new(mu.z(), factorial(bb)).unwrap();
        expect(&format!("annulus x1^{} x2^{}", a - 1, b - 1), &ann.coeff(a as usize - 1, b as usize - 1).map_err(err)?, &want)?;
    }
    let disk = w_unstable_disk(&c, 9).map_err(err)?;
    for m in 1..=8u32 {
        let want = Rational::new(BigInt::from(m).pow(m - 1), factorial(m)).unwrap();
        expect(&format!("disk x^{}", m - 1), &disk.coeff(m as i64 - 1).map_err(err)?, &want)?;
    }
    Ok("annulus constant 1/2 and disk mu^(mu-1)/mu! for mu <= 8".into())
}

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("1 involution series", Duration::from_secs(1), involution_series),
        ("2 tree function", Duration::from_secs(1), tree_function),
        ("3 Lambert amplitude table", Duration::from_secs(30), lambert_table),
        ("4 framed amplitude table", Duration::from_secs(120), framed_table),
        ("5 oracle equality sweep", Duration::from_secs(300), oracle_sweep),
        ("6 framing-limit suite", Duration::from_secs(120), framing_limit),
        ("7 property suites", Duration::from_secs(300), properties),
        ("8 unstable cases", Duration::from_secs(10), unstable_cases),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let dt = t.elapsed();
        let timing = format!("{:.2}s, limit {}s", dt.as_secs_f64(), limit.as_secs());
        match outcome {
            Ok(msg) if dt <= limit => println!("PASS criterion {name}: {msg} ({timing})"),
            Ok(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}, but over the time limit ({timing})");
            }
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} ({timing})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
