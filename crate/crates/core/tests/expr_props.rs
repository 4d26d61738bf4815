mod common;

use common::{derivative_check, random_tree, rng, DerivCheck};
use liesys_core::expr::Node;
use liesys_core::{Error, Expression};
use proptest::prelude::*;

fn tree(seed: u64) -> Node {
    random_tree(&mut rng(seed), 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn printed_trees_reparse_identically(seed in any::<u64>()) {
        let node = tree(seed);
        let printed = Expression::from_node(node.clone(), "t").to_string();
        let back = Expression::parse(&printed).unwrap();
        prop_assert_eq!(back.root(), &node, "{}", printed);
    }

    #[test]
    fn parse_print_parse_is_stable(seed in any::<u64>(), neg in -5.0f64..5.0) {
        // negative literals print parenthesized and reparse as Neg(Num), so
        // stability is checked from the first reparse on
        let node = Node::bin(liesys_core::expr::BinOp::Add, tree(seed), Node::Num(neg));
        let first = Expression::parse(&Expression::from_node(node, "t").to_string()).unwrap();
        let printed = first.to_string();
        let second = Expression::parse(&printed).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(second.to_string(), printed);
    }

    #[test]
    fn evaluation_is_bit_identical(seed in any::<u64>(), t in -2.0f64..2.0) {
        let e = Expression::from_node(tree(seed), "t");
        match (e.eval(t), e.clone().eval(t)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn derivative_matches_central_difference(seed in any::<u64>(), t in -2.0f64..2.0) {
        let e = Expression::from_node(tree(seed), "t");
        let de = e.differentiate();
        if let DerivCheck::Checked { symbolic, numeric } = derivative_check(&e, &de, t, 1e-6) {
            prop_assert!((symbolic - numeric).abs() <= 1e-5 * (1.0 + symbolic.abs()),
                "d/dt {} at {}: {} vs {}", e, t, symbolic, numeric);
        }
    }

    #[test]
    fn derivative_of_constant_tree_is_zero(seed in any::<u64>(), t in -2.0f64..2.0) {
        let e = Expression::from_node(tree(seed), "t");
        if e.is_constant() {
            if let Ok(d) = e.differentiate().eval(t) {
                prop_assert_eq!(d, 0.0);
            }
        }
    }

    #[test]
    fn garbage_is_rejected_with_an_offset(s in "[0-9t+*/^() .-]{0,12}[+*/^(]") {
        // a trailing operator or open parenthesis can never complete an expression
        let err = Expression::parse(&s).unwrap_err();
        let located = match err {
            Error::Syntax { offset, .. } | Error::UnknownIdentifier { offset, .. } => offset <= s.len(),
            _ => false,
        };
        prop_assert!(located, "{s:?}: {err:?}");
    }
}
