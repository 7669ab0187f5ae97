use std::sync::LazyLock;

use proptest::prelude::*;

use vaxsent::normalize::{normalize, tokenize, SubstitutionTable};

static TABLE: LazyLock<SubstitutionTable> = LazyLock::new(SubstitutionTable::default);

fn well_formed(s: &str) -> bool {
    let b = s.as_bytes();
    let word = |c: u8| c.is_ascii_lowercase() || c.is_ascii_digit();
    !s.starts_with(' ')
        && !s.ends_with(' ')
        && !s.contains("  ")
        && b.iter().enumerate().all(|(i, &c)| match c {
            b' ' => true,
            b'\'' => i > 0 && i + 1 < b.len() && word(b[i - 1]) && word(b[i + 1]),
            _ => word(c),
        })
}

const WORD_PATTERNS: [(&str, &str); 7] = [
    ("omg", "oh my god"),
    ("tbh", "to be honest"),
    ("rt", "retweet"),
    ("dm", "direct message"),
    ("socialdistance", "social distance"),
    ("fwiw", "for what it's worth"),
    ("covid19vax", "covid 19 vaccine"),
];

fn arb_token() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::sample::select(&WORD_PATTERNS[..]).prop_map(|(p, _)| p.to_string()),
        prop::sample::select(&WORD_PATTERNS[..]).prop_map(|(p, _)| p.to_uppercase()),
        "[a-z]{1,6}",
        prop::sample::select(&["☺", "😊", "☹", "😢"][..]).prop_map(str::to_string),
    ]
}

fn arb_separator() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&[" ", "  ", ", ", "! ", "\n", " - "][..])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn idempotent_on_arbitrary_strings(raw in any::<String>()) {
        let table = &*TABLE;
        let once = normalize(&raw, table);
        prop_assert_eq!(normalize(once.as_str(), table), once);
    }

    #[test]
    fn output_alphabet_is_restricted(raw in "\\PC{0,60}") {
        let out = normalize(&raw, &TABLE);
        prop_assert!(well_formed(out.as_str()), "{:?} -> {:?}", raw, out.as_str());
        prop_assert_eq!(out.token_count(), tokenize(&out).len());
    }

    #[test]
    fn substitution_is_complete(parts in prop::collection::vec((arb_token(), arb_separator()), 1..10)) {
        let table = &*TABLE;
        let raw: String = parts.iter().map(|(t, s)| format!("{t}{s}")).collect();
        let out = normalize(&raw, table);
        let tokens = tokenize(&out);
        for token in &tokens {
            prop_assert!(!table.is_word_pattern(token), "{:?} survived in {:?}", token, out.as_str());
        }
        // The expected output is the concatenation of each part's replacement.
        let mut want = Vec::new();
        for (token, _) in &parts {
            let lower = token.to_lowercase();
            match WORD_PATTERNS.iter().find(|(p, _)| *p == lower) {
                Some((_, r)) => want.extend(r.split(' ')),
                None => match token.as_str() {
                    "☺" | "😊" => want.push("smile"),
                    "☹" | "😢" => want.push("sad"),
                    _ => want.push(lower.leak()),
                },
            }
        }
        prop_assert_eq!(tokens, want);
    }
}

#[test]
fn table_extends_without_code_change() {
    let table = SubstitutionTable::from_csv_str(
        "extra",
        "pattern,replacement\nwfh,work from home\n🎉,party\n",
    )
    .unwrap();
    assert_eq!(
        normalize("WFH again 🎉", &table).as_str(),
        "work from home again party"
    );
    assert_eq!(normalize("omg", &table).as_str(), "omg");
}

#[test]
fn tables_that_break_idempotence_are_refused() {
    assert!(SubstitutionTable::from_csv_str("t", "pattern,replacement\nab,ab cd\n").is_err());
    assert!(SubstitutionTable::from_csv_str("t", "pattern,replacement\nab,x\nab,y\n").is_err());
}
