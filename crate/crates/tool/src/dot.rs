//! Graphviz rendering. Final states are double circles. Letters of
//! normalizers print as `input/output`, weighted edges as `letter|weight`.

use std::collections::BTreeMap;
use std::fmt::Write;

use pisot_wfa::dfa::MultiTapeDfa;
use pisot_wfa::semiring::Semiring;
use pisot_wfa::wfa::WeightedAutomaton;
use pisot_wfa::Letter;

fn letter_label(l: &Letter) -> String {
    let coords = |xs: &[i64]| {
        xs.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    coords(&l.0)
}

/// DOT for an acceptor. With `split = Some(k)`, letters are shown as the
/// first `k` coordinates over the rest.
pub fn dfa_to_dot(dfa: &MultiTapeDfa, name: &str, split: Option<usize>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  start [shape=point];").unwrap();
    for q in 0..dfa.num_states() {
        let shape = if dfa.is_final(q) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  q{q} [shape={shape}, label=\"{q}\"];").unwrap();
    }
    writeln!(out, "  start -> q{};", dfa.initial()).unwrap();
    let mut grouped: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (p, a, q) in dfa.transitions() {
        let label = match split {
            Some(k) => {
                let (x, y) = a.split(k);
                format!("{}/{}", letter_label(&x), letter_label(&y))
            }
            None => letter_label(a),
        };
        grouped.entry((p, q)).or_default().push(label);
    }
    for ((p, q), labels) in grouped {
        writeln!(out, "  q{p} -> q{q} [label=\"{}\"];", labels.join("\\n")).unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT for a weighted automaton. Nonzero initial and final weights other
/// than one are written on the marker edges.
pub fn wfa_to_dot<S: Semiring>(a: &WeightedAutomaton<S>, name: &str) -> String {
    let one = S::one();
    let mut out = String::new();
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for q in 0..a.num_states() {
        let fin = a.final_weight(q);
        let shape = if fin.is_zero() {
            "circle"
        } else {
            "doublecircle"
        };
        writeln!(out, "  q{q} [shape={shape}, label=\"{q}\"];").unwrap();
        let init = a.initial_weight(q);
        if !init.is_zero() {
            let label = if *init == one {
                String::new()
            } else {
                init.to_string()
            };
            writeln!(out, "  in{q} [shape=point];").unwrap();
            writeln!(out, "  in{q} -> q{q} [label=\"{label}\"];").unwrap();
        }
        if !fin.is_zero() && *fin != one {
            writeln!(out, "  out{q} [shape=point];").unwrap();
            writeln!(out, "  q{q} -> out{q} [label=\"{fin}\"];").unwrap();
        }
    }
    let mut grouped: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (p, l, q, w) in a.edges() {
        grouped
            .entry((p, q))
            .or_default()
            .push(format!("{}|{w}", letter_label(l)));
    }
    for ((p, q), labels) in grouped {
        writeln!(out, "  q{p} -> q{q} [label=\"{}\"];", labels.join("\\n")).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pisot_wfa::pipeline::fixture_series_phi2;

    #[test]
    fn acceptor_dot() {
        let l = |x: &[i64]| Letter(x.to_vec());
        let dfa = MultiTapeDfa::new(
            2,
            [l(&[0, 0]), l(&[1, 0])],
            2,
            0,
            [1],
            [(0, l(&[1, 0]), 1), (1, l(&[0, 0]), 1)],
        )
        .unwrap();
        let dot = dfa_to_dot(&dfa, "n", Some(1));
        assert!(dot.contains("q1 [shape=doublecircle"));
        assert!(dot.contains("q0 -> q1 [label=\"1/0\"]"));
        assert!(dot.ends_with("}\n"));
        assert!(dfa_to_dot(&dfa, "n", None).contains("label=\"1,0\""));
    }

    #[test]
    fn weighted_dot() {
        let a = fixture_series_phi2().to_wfa().unwrap();
        let dot = wfa_to_dot(&a, "s");
        assert!(dot.contains("q0 -> q1 [label=\"1|3\"]"));
        assert!(dot.contains("in0 -> q0"));
        assert_eq!(dot, wfa_to_dot(&a, "s"));
    }
}
