//! Acceptance criteria. Each test prints one `PASS` or `FAIL` line and
//! fails when its criterion does not hold.

use num_bigint::BigInt;
use num_traits::Signed;
use pisot_wfa::normalizer::{
    build_base_normalizer, build_multidim_normalizer, expected_output, greedy_language_dfa,
    oracle_mismatch,
};
use pisot_wfa::pipeline::{
    greedy_to_value_linrep, value_oracle, value_to_greedy_linrep, Conversion, ConversionOptions,
};
use pisot_wfa::semiring::{Boolean, Integer, Natural, Rational, Semiring};
use pisot_wfa::wfa::LinearRepresentation;
use pisot_wfa::{Letter, SystemTuple, Word};
use pisot_wfa_tool::fixtures;

type Outcome = Result<String, String>;

fn criterion(id: u32, title: &str, check: impl FnOnce() -> Outcome) {
    match check() {
        Ok(detail) => println!("PASS criterion {id:02} {title}: {detail}"),
        Err(detail) => {
            println!("FAIL criterion {id:02} {title}: {detail}");
            panic!("criterion {id} failed: {detail}");
        }
    }
}

fn digits(xs: &[i64]) -> Vec<Letter> {
    xs.iter().map(|&x| Letter::scalar(x)).collect()
}

fn phi2() -> SystemTuple {
    SystemTuple::single(fixtures::phi2())
}

fn convert<S: Semiring>(g: &LinearRepresentation<S>) -> Conversion<S> {
    greedy_to_value_linrep(
        g,
        &phi2(),
        &digits(&[0, 1, 2]),
        &ConversionOptions::default(),
    )
    .expect("conversion succeeds")
}

fn compare<S: Semiring>(
    words: &[Word],
    left: impl Fn(&Word) -> S,
    right: impl Fn(&Word) -> S,
) -> Result<usize, String> {
    let mut bad = words.iter().filter(|w| left(w) != right(w));
    match bad.next() {
        None => Ok(words.len()),
        Some(w) => Err(format!(
            "{} of {} words differ, first {w}: {} vs {}",
            1 + bad.count(),
            words.len(),
            left(w),
            right(w)
        )),
    }
}

#[test]
fn c01_fixture_coefficients() {
    criterion(1, "fixture coefficients", || {
        let s = fixtures::series_phi2();
        let got: Vec<String> = ["1121", "2101", "2112"]
            .iter()
            .map(|w| {
                let ds: Vec<i64> = w.bytes().map(|b| i64::from(b - b'0')).collect();
                s.eval(&Word::from_digits(&ds)).unwrap().to_string()
            })
            .collect();
        if got == ["60", "18", "0"] {
            Ok("1121 -> 60, 2101 -> 18, 2112 -> 0".into())
        } else {
            Err(format!("{got:?}"))
        }
    });
}

#[test]
fn c02_greedy_round_trip() {
    criterion(2, "greedy round trip", || {
        for ns in [fixtures::phi2(), fixtures::zeckendorf()] {
            for n in 0..10_000u32 {
                let n = BigInt::from(n);
                let rep = ns.greedy_rep(&n).map_err(|e| e.to_string())?;
                let terms = ns.terms(rep.len() + 1);
                let prefix_ok = (0..rep.len()).all(|j| {
                    let low: BigInt = (0..=j)
                        .map(|i| BigInt::from(rep[rep.len() - 1 - i]) * &terms[i])
                        .sum();
                    low < terms[j + 1]
                });
                if ns.value(&rep) != n || !prefix_ok || rep.first() == Some(&0) {
                    return Err(format!("{}: n = {n}, rep {rep:?}", ns.name()));
                }
            }
        }
        Ok("n < 10000 in phi2 and zeckendorf".into())
    });
}

#[test]
fn c03_normalizer_reproduction() {
    criterion(3, "normalizer reproduction", || {
        let ts = phi2();
        let n = build_base_normalizer(&fixtures::phi2(), &[0, 1, 2])
            .unwrap()
            .minimize();
        if n.num_states() != 5 {
            return Err(format!("{} states", n.num_states()));
        }
        let abc = digits(&[0, 1, 2]);
        let mut pairs = 0usize;
        for l in 0..=6 {
            let inputs = Word::all_of_length(1, &abc, l);
            for u in &inputs {
                let expected = expected_output(&ts, u).unwrap();
                for v in &inputs {
                    pairs += 1;
                    let accepted = n.accepts(&u.pair(v).unwrap());
                    if accepted != (expected.as_ref() == Some(v)) {
                        return Err(format!("({u}, {v}) accepted = {accepted}"));
                    }
                }
            }
        }
        Ok(format!("5 states, {pairs} pair-words agree"))
    });
}

#[test]
fn c04_greedy_language() {
    criterion(4, "greedy-language reproduction", || {
        let ns = fixtures::phi2();
        let g = greedy_language_dfa(&ns).unwrap().minimize();
        if g.num_states() != 2 {
            return Err(format!("{} states", g.num_states()));
        }
        let words = Word::all_up_to(1, &digits(&[0, 1, 2]), 10);
        compare(
            &words,
            |w| Boolean(g.accepts(w)),
            |w| Boolean(ns.is_greedy(&w.track(0))),
        )
        .map(|k| format!("2 states, {k} words agree"))
    });
}

#[test]
fn c05_multidim_normalizer() {
    criterion(5, "multidimensional normalizer", || {
        let ts = SystemTuple::new(vec![fixtures::phi2(), fixtures::phi2()]).unwrap();
        let a: Vec<Letter> = (0..3)
            .flat_map(|x| (0..3).map(move |y| Letter(vec![x, y])))
            .collect();
        let n = build_multidim_normalizer(&ts, &a).unwrap();
        let z = |k: usize, w: &str| {
            let mut ds = vec![0i64; k];
            ds.extend(w.bytes().map(|b| i64::from(b - b'0')));
            ds
        };
        let mut listed = vec![[z(0, "022"), z(0, "010"), z(0, "100"), z(0, "010")]];
        for l in 0..=2 {
            listed.push([z(l + 1, "22"), z(l + 1, "10"), z(l, "100"), z(l + 1, "10")]);
            listed.push([z(l, "022"), z(l, "010"), z(l, "100"), z(l + 1, "10")]);
            listed.push([z(l, "0022"), z(l, "0010"), z(l + 1, "100"), z(l + 2, "10")]);
        }
        for tracks in &listed {
            let w = Word::from_tracks(tracks).map_err(|e| e.to_string())?;
            if !n.accepts(&w) {
                return Err(format!("rejects {w}"));
            }
        }
        match oracle_mismatch(&ts, &a, &n, 4).unwrap() {
            None => Ok(format!(
                "{} listed words accepted, oracle agrees up to length 4",
                listed.len()
            )),
            Some((u, v)) => Err(format!("input {u}, output {v}")),
        }
    });
}

#[test]
fn c06_main_theorem() {
    criterion(6, "main theorem at desk scale", || {
        let (ts, g) = (phi2(), fixtures::series_phi2());
        let c = convert(&g);
        let words = Word::all_up_to(1, &digits(&[0, 1, 2]), 8);
        compare(
            &words,
            |w| c.linrep.eval(w).unwrap(),
            |w| value_oracle(&g, &ts, w).unwrap(),
        )
        .map(|k| format!("{k} words equal f(||val(w)||)"))
    });
}

#[test]
fn c07_golden_matrices() {
    criterion(7, "printed value-indexed matrices", || {
        let c = convert(&fixtures::series_phi2());
        let untrimmed = c.report.dim_untrimmed;
        if untrimmed != 21 || c.linrep.dim() != 10 {
            return Err(format!("dimensions {untrimmed} and {}", c.linrep.dim()));
        }
        let words = Word::all_up_to(1, &digits(&[0, 1, 2]), 6);
        let printed = fixtures::value_phi2_printed();
        let corrected = fixtures::value_phi2();
        let against_corrected = compare(
            &words,
            |w| c.linrep.eval(w).unwrap(),
            |w| corrected.eval(w).unwrap(),
        );
        compare(&words, |w| c.linrep.eval(w).unwrap(), |w| printed.eval(w).unwrap())
            .map(|k| format!("dims 21 and 10, {k} words equal"))
            .map_err(|e| {
                format!(
                    "dims 21 and 10; printed matrices: {e}; with the weight-2 entry (1,Z)->(3,Y) added: {}",
                    match against_corrected {
                        Ok(k) => format!("all {k} words equal"),
                        Err(e) => e,
                    }
                )
            })
    });
}

#[test]
fn c08_lemma_suite() {
    criterion(8, "lemma suite", || {
        let (ts, g) = (phi2(), fixtures::series_phi2());
        let c = convert(&g);
        for d in [1, 2] {
            let tuple = SystemTuple::new(vec![fixtures::phi2(); d]).unwrap();
            let a = tuple.digit_alphabet();
            let n = build_multidim_normalizer(&tuple, &a).unwrap();
            n.check_at_most_one_output(d)
                .map_err(|e| format!("dimension {d}: {e}"))?;
        }
        if !c.value_automaton.unique_ell_holds() {
            return Err("two zero-prefix lengths reach one state".into());
        }
        let star = &c.value_automaton.star.automaton;
        let words = Word::all_up_to(1, &digits(&[0, 1, 2]), 7);
        compare(
            &words,
            |w| star.weight(w),
            |w| {
                if ts.delay(w).unwrap() == 0 {
                    g.eval(&ts.normalize(w).unwrap().abs()).unwrap()
                } else {
                    Natural::zero()
                }
            },
        )?;
        for w in &words {
            let parts = c.value_automaton.decompose(w).unwrap();
            let slot = match ts.delay(w).unwrap().signum() {
                0 => 0,
                -1 => 1,
                _ => 2,
            };
            let oracle = value_oracle(&g, &ts, w).unwrap();
            if parts[slot] != oracle || (0..3).any(|i| i != slot && !parts[i].is_zero()) {
                return Err(format!("decomposition of {w}: {parts:?}"));
            }
        }
        Ok(format!(
            "at most one output letter (d = 1, 2), unique zero-prefix lengths, {} words stratified by delay",
            words.len()
        ))
    });
}

#[test]
fn c09_round_trip() {
    criterion(9, "round trip to the greedy-indexed series", || {
        let g = fixtures::series_phi2();
        let back = value_to_greedy_linrep(&convert(&g).linrep, &phi2()).unwrap();
        let words = Word::all_up_to(1, &digits(&[0, 1, 2]), 6);
        compare(&words, |w| back.eval(w).unwrap(), |w| g.eval(w).unwrap())
            .map(|k| format!("{k} words equal"))
    });
}

#[test]
fn c10_semiring_genericity() {
    criterion(10, "semiring genericity", || {
        let ts = phi2();
        let g = fixtures::series_phi2();
        let base = convert(&g);
        let words = Word::all_up_to(1, &digits(&[0, 1, 2]), 8);
        let gi = g.map(|x| Integer(x.0.clone().into()));
        let ci = convert(&gi);
        compare(
            &words,
            |w| ci.linrep.eval(w).unwrap(),
            |w| Integer(base.linrep.eval(w).unwrap().0.into()),
        )
        .map_err(|e| format!("integer: {e}"))?;
        let gq = g.map(|x| Rational::from(i64::try_from(&x.0).unwrap()));
        let cq = convert(&gq);
        compare(
            &words,
            |w| cq.linrep.eval(w).unwrap(),
            |w| Rational::from(i64::try_from(&base.linrep.eval(w).unwrap().0).unwrap()),
        )
        .map_err(|e| format!("rational: {e}"))?;

        let parity = fixtures::parity_bool();
        let gb = value_to_greedy_linrep(&parity, &ts).unwrap();
        let cb = convert(&gb);
        let ns = fixtures::phi2();
        let short = Word::all_up_to(1, &digits(&[0, 1, 2]), 6);
        compare(
            &short,
            |w| cb.linrep.eval(w).unwrap(),
            |w| {
                let n = ts.val_vec(w).unwrap().remove(0).abs();
                let ones = ns
                    .greedy_rep(&n)
                    .unwrap()
                    .iter()
                    .filter(|&&x| x == 1)
                    .count();
                Boolean(ones % 2 == 0)
            },
        )
        .map_err(|e| format!("boolean parity: {e}"))?;
        Ok(format!(
            "integer and rational agree on {} words, boolean parity on {}",
            words.len(),
            short.len()
        ))
    });
}

#[test]
fn c11_zeckendorf() {
    criterion(11, "Zeckendorf sanity", || {
        let z = fixtures::zeckendorf();
        let three = BigInt::from(3);
        if z.value(&[1, 1]) != three || z.value(&[1, 0, 0]) != three {
            return Err("val(11) or val(100) is not 3".into());
        }
        if z.normalize(&[1, 1]) != [1, 0, 0] {
            return Err(format!("normalize(11) = {:?}", z.normalize(&[1, 1])));
        }
        let n = build_base_normalizer(&z, &[0, 1]).unwrap();
        match oracle_mismatch(&SystemTuple::single(z), &digits(&[0, 1]), &n, 8).unwrap() {
            None => Ok(
                "val 11 = val 100 = 3, normalize(11) = 100, normalizer agrees up to length 8"
                    .into(),
            ),
            Some((u, v)) => Err(format!("input {u}, output {v}")),
        }
    });
}
