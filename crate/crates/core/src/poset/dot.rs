use std::fmt::Write;

use super::Poset;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of the Hasse diagram, drawn bottom to top.
pub fn to_dot(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for x in 0..p.len() {
        writeln!(out, "  n{x} [label={}];", quote(&p.label(x))).unwrap();
    }
    for (a, b) in p.transitive_reduction().pairs {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_dot() {
        let p = Poset::chain(2).with_labels(Some(vec!["lo".into(), "h\"i".into()]));
        assert_eq!(
            to_dot(&p),
            "digraph poset {\n  rankdir=BT;\n  node [shape=plaintext];\n  n0 [label=\"lo\"];\n  n1 [label=\"h\\\"i\"];\n  n0 -> n1;\n}\n"
        );
    }
}
