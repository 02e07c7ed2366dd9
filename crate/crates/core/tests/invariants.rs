use num_bigint::BigInt;
use proptest::prelude::*;

use nucad_core::formula::{parse_formula, parse_poly};
use nucad_core::{build, Membership, MergeOutcome, OpenCell, Rational, SplitPolicy};

fn term(c: i64, i: u32, j: u32) -> String {
    let mut t = c.to_string();
    if i > 0 {
        t += &format!("x^{i}");
    }
    if j > 0 {
        t += &format!("y^{j}");
    }
    t
}

fn poly_text() -> impl Strategy<Value = String> {
    (
        prop::collection::vec((-4i64..=4, 0u32..=2, 0u32..=2), 1..=3),
        1i64..=4,
        1u32..=2,
    )
        .prop_map(|(terms, lead, dy)| {
            let mut parts = vec![term(lead, 0, dy)];
            parts.extend(terms.into_iter().filter(|t| t.0 != 0).map(|(c, i, j)| term(c, i, j.min(dy))));
            parts.join(" + ").replace("+ -", "- ")
        })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn merged_cell_keeps_sample_and_signs(text in poly_text(), x in rational(), y in rational()) {
        let p = parse_poly(&text, &["x", "y"]).unwrap();
        let cell = OpenCell::universe(vec![x, y]);
        if let MergeOutcome::Merged(c) = cell.merge_poly(&p).unwrap() {
            prop_assert_eq!(c.contains(c.sample()).unwrap(), Membership::Inside);
            prop_assert!(c.bpolys().is_subset(c.p()));
            for q in c.p() {
                prop_assert!(!q.sign_at(c.sample()).is_eq(), "{} vanishes at the sample", text);
            }
        }
    }

    #[test]
    fn tree_cells_contain_their_samples(a in poly_text(), b in poly_text(), rel in 0usize..3) {
        let rel = ["<", ">", "/="][rel];
        let f = parse_formula(&format!("vars x, y; {a} {rel} 0 /\\ {b} > 0")).unwrap();
        let t = build(&f, &SplitPolicy::default()).unwrap();
        for (label, node) in t.nodes() {
            prop_assert_eq!(node.cell.contains(node.cell.sample()).unwrap(), Membership::Inside);
            if let Some(parent) = label.parent() {
                let pc = &t.get(&parent).unwrap().cell;
                prop_assert_eq!(pc.contains(node.cell.sample()).unwrap(), Membership::Inside);
            }
            if let Some(truth) = node.truth {
                prop_assert!(label.is_root() || label.ends_in_x());
                prop_assert_eq!(truth, f.evaluate(node.cell.sample()));
            }
        }
    }
}
