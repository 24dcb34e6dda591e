//! Property tests: serialization round trips and structural invariances.

use std::sync::Arc;

use proptest::prelude::*;

use opotl::alphabet::{load_opm, LabelSet, OpAlphabet, PrecRel};
use opotl::parser::parse;
use opotl::potl::ast::{Dir, PotlFormula, PrSet};
use opotl::potl::syntax::parse_potl;
use opotl::words::{load_word, OpWord};

fn arb_alphabet() -> impl Strategy<Value = OpAlphabet> {
    // A handful of structural and normal labels plus a random entry map.
    (2usize..5, 0usize..3, proptest::collection::vec(0u8..4, 0..20), any::<u64>()).prop_map(
        |(ns, nn, rels, salt)| {
            let snames: Vec<String> = (0..ns).map(|i| format!("s{}", i)).collect();
            let nnames: Vec<String> = (0..nn).map(|i| format!("n{}", i)).collect();
            let mut a = OpAlphabet::new(
                &snames.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                &nnames.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            )
            .unwrap();
            a.fill_delimiter_conventions();
            for (k, r) in rels.iter().enumerate() {
                let i = (k + salt as usize) % ns;
                let j = (k * 7 + salt as usize / 3) % ns;
                let rel = match r % 3 {
                    0 => PrecRel::Yields,
                    1 => PrecRel::Equals,
                    _ => PrecRel::Takes,
                };
                // First write wins; conflicting rewrites are skipped.
                let _ = a.set_rel(&snames[i], &snames[j], rel);
            }
            a
        },
    )
}

proptest! {
    #[test]
    fn opm_serialize_load_roundtrip(alpha in arb_alphabet()) {
        let text = alpha.serialize();
        let back = load_opm(&text).unwrap();
        prop_assert_eq!(alpha, back);
    }

    #[test]
    fn precedence_depends_only_on_structural_labels(
        alpha in arb_alphabet(),
        sa in 1usize..4,
        sb in 1usize..4,
        na in any::<u64>(),
        nb in any::<u64>(),
    ) {
        let k = alpha.structurals().len();
        let (sa, sb) = (1 + sa % (k - 1), 1 + sb % (k - 1));
        let mask = (1u64 << alpha.normals().len()) - 1;
        let plain = alpha.precedence_of(
            LabelSet::structural_only(sa),
            LabelSet::structural_only(sb),
        );
        let decorated = alpha.precedence_of(
            LabelSet { structural: sa, normals: na & mask },
            LabelSet { structural: sb, normals: nb & mask },
        );
        prop_assert_eq!(plain, decorated);
    }
}

fn arb_potl(depth: u32) -> impl Strategy<Value = PotlFormula> {
    let leaf = prop_oneof![
        Just(PotlFormula::True),
        prop::sample::select(vec!["a", "b", "call", "ret", "pA"])
            .prop_map(|s| PotlFormula::atom(s)),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        let dir = prop_oneof![Just(Dir::Down), Just(Dir::Up)];
        let prs = prop_oneof![
            Just(PrSet::YIELDS),
            Just(PrSet::EQUALS),
            Just(PrSet::TAKES),
            Just(PrSet::YIELDS_EQUALS),
            Just(PrSet::TAKES_EQUALS),
        ];
        prop_oneof![
            inner.clone().prop_map(PotlFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PotlFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PotlFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PotlFormula::implies(a, b)),
            (dir.clone(), inner.clone()).prop_map(|(d, a)| PotlFormula::next(d, a)),
            (dir.clone(), inner.clone()).prop_map(|(d, a)| PotlFormula::back(d, a)),
            (dir.clone(), inner.clone()).prop_map(|(d, a)| PotlFormula::chain_next(d, a)),
            (dir.clone(), inner.clone()).prop_map(|(d, a)| PotlFormula::chain_back(d, a)),
            (dir.clone(), inner.clone(), inner.clone())
                .prop_map(|(d, a, b)| PotlFormula::until(d, a, b)),
            (dir.clone(), inner.clone(), inner.clone())
                .prop_map(|(d, a, b)| PotlFormula::since(d, a, b)),
            (dir.clone(), inner.clone()).prop_map(|(d, a)| PotlFormula::hnext(d, a)),
            (dir.clone(), inner.clone()).prop_map(|(d, a)| PotlFormula::hback(d, a)),
            (dir.clone(), inner.clone(), inner.clone())
                .prop_map(|(d, a, b)| PotlFormula::huntil(d, a, b)),
            (dir, inner.clone(), inner.clone())
                .prop_map(|(d, a, b)| PotlFormula::hsince(d, a, b)),
            (prs.clone(), inner.clone()).prop_map(|(s, a)| PotlFormula::chain_next_pr(s, a)),
            (prs.clone(), inner.clone()).prop_map(|(s, a)| PotlFormula::chain_back_pr(s, a)),
            (prs.clone(), inner.clone()).prop_map(|(s, a)| PotlFormula::next_pr(s, a)),
            (prs, inner).prop_map(|(s, a)| PotlFormula::back_pr(s, a)),
        ]
    })
}

proptest! {
    #[test]
    fn potl_display_parse_roundtrip(f in arb_potl(4)) {
        let printed = f.to_string();
        let back = parse_potl(&printed)
            .unwrap_or_else(|e| panic!("reparse of `{}` failed: {}", printed, e));
        prop_assert_eq!(f, back);
    }
}

fn mcall_word() -> impl Strategy<Value = OpWord> {
    // Random seeds into the chain-skeleton generator keep every sample
    // compatible by construction.
    (any::<u64>(), 0usize..13).prop_map(|(seed, len)| {
        let alpha = Arc::new(opotl::alphabet::builtin_mcall());
        opotl::words::random_compatible_word(&alpha, len, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn word_serialize_load_roundtrip(w in mcall_word()) {
        let text = w.serialize();
        let back = load_word(w.alphabet(), &text).unwrap();
        prop_assert_eq!(&back, &w);
    }

    #[test]
    fn generated_words_always_parse(w in mcall_word()) {
        prop_assert!(parse(&w).is_ok());
    }

    #[test]
    fn next_down_or_up_is_plain_successor(w in mcall_word(), name in "[a-z#]{1}") {
        // Nd f | Nu f holds at i iff f holds at i+1, whenever the adjacent
        // precedence is defined (always, on compatible words).
        use opotl::potl::eval::eval;
        let atom = match name.as_str() {
            "#" => PotlFormula::atom("#"),
            _ => PotlFormula::atom("call"),
        };
        let cs = parse(&w).unwrap().chains;
        let f = PotlFormula::or(
            PotlFormula::next(Dir::Down, atom.clone()),
            PotlFormula::next(Dir::Up, atom.clone()),
        );
        let r = eval(&f, &w, &cs);
        let ra = eval(&atom, &w, &cs);
        for i in 0..w.universe_len() - 1 {
            prop_assert_eq!(r.holds(&f, i), ra.holds(&atom, i + 1));
        }
        prop_assert!(!r.holds(&f, w.end()));
    }

    #[test]
    fn negation_is_exact_complement(w in mcall_word()) {
        use opotl::potl::eval::eval;
        let cs = parse(&w).unwrap().chains;
        let f: PotlFormula = "call Ud (ret | exc)".parse().unwrap();
        let g = PotlFormula::not(f.clone());
        let r = eval(&g, &w, &cs);
        let universe: Vec<usize> = (0..w.universe_len()).collect();
        let mut union: Vec<usize> = r.positions(&f);
        union.extend(r.positions(&g));
        union.sort_unstable();
        prop_assert_eq!(union, universe);
    }
}
