mod common;

use caseflow::dsl::{parse, serialize};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_case, Shape};

#[test]
fn thousand_generated_cases_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in 0..1000 {
        let shape = Shape::any(&mut rng, 24);
        let doc = random_case(&mut rng, &shape);
        let text = serialize(&doc).unwrap_or_else(|e| panic!("case {n}: {e}"));
        let back = parse(&text).unwrap_or_else(|e| panic!("case {n}: {e}\n{text}"));
        assert_eq!(back, doc, "case {n}\n{text}");
        assert_eq!(serialize(&back).unwrap(), text, "case {n} not canonical");
    }
}

#[test]
fn hand_written_files_canonicalise_to_a_fixpoint() {
    let messy = "# leading comment\n\n  claim   B \"second\"   status=green\r\n\
                 case \"Title\"\nevidence E1 \"ev\" status=yellow # trailing\n\
                 claim A \"first\"\nargument X block=evidence claim=A from=E1\n\
                 prob E1 given=A p_e_h=0.90 p_e_nh=.1\n";
    let canonical = serialize(&parse(messy).unwrap()).unwrap();
    assert!(canonical.starts_with("case \"Title\"\nclaim A"));
    assert!(canonical.contains("p_e_h=0.9 p_e_nh=0.1"));
    assert_eq!(serialize(&parse(&canonical).unwrap()).unwrap(), canonical);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trip_any_seed(seed in any::<u64>(), max in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape::any(&mut rng, max);
        let doc = random_case(&mut rng, &shape);
        let text = serialize(&doc).unwrap();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize(&back).unwrap(), text);
    }
}
