use std::fs;
use std::path::Path;

use ucover::catalog::{
    bundled, bundled_keys, check, get, repair, Cache, Fixture, FixtureKind, Provenance, REPAIR_SEED,
};
use ucover::construct::Factory;
use ucover::design::covering_number;
use ucover::{Error, GroupType, ViolationKind};

const SHORT: [&str; 5] = [
    "covering-10",
    "covering-11",
    "covering-12",
    "covering-14",
    "covering-20",
];

#[test]
fn transcribed_designs_and_sts_need_no_repair() {
    for key in bundled_keys() {
        let f = bundled(key, true).unwrap();
        if f.kind != FixtureKind::Covering {
            let r = check(&f);
            assert!(r.is_valid(), "{key}: {r}");
        }
    }
}

#[test]
fn only_short_coverings_fail_as_transcribed() {
    let failing: Vec<&str> = bundled_keys()
        .into_iter()
        .filter(|k| !check(&bundled(k, true).unwrap()).is_valid())
        .collect();
    assert_eq!(failing, SHORT);
    for key in SHORT {
        let f = bundled(key, true).unwrap();
        assert!(f.blocks.len() < covering_number(f.n).unwrap(), "{key}");
        let r = check(&f);
        assert!(r.has(ViolationKind::UncoveredPair));
        assert!(r.has(ViolationKind::WrongSize));
    }
}

#[test]
fn every_fixture_valid_after_at_most_one_repair() {
    for key in bundled_keys() {
        let f = bundled(key, false).unwrap();
        let r = check(&f);
        assert!(r.is_valid(), "{key}: {r}");
        let expected = if SHORT.contains(&key) {
            Provenance::Repaired
        } else {
            Provenance::Paper
        };
        assert_eq!(f.provenance, expected, "{key}");
        assert_eq!(get(key, None).unwrap(), f);
    }
}

#[test]
fn repaired_set_is_byte_stable() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/repaired");
    for key in SHORT {
        let raw = bundled(key, true).unwrap();
        let once = repair(&raw, REPAIR_SEED).unwrap();
        let twice = repair(&raw, REPAIR_SEED).unwrap();
        let stored = fs::read_to_string(dir.join(format!("{key}.fix"))).unwrap();
        assert_eq!(once.to_text(), stored, "{key}");
        assert_eq!(twice.to_text(), stored, "{key}");
        assert_eq!(once.seed, Some(REPAIR_SEED));
    }
}

#[test]
fn valid_covering_returned_unchanged() {
    let f = bundled("covering-16", true).unwrap();
    assert_eq!(repair(&f, REPAIR_SEED).unwrap(), f);
    let sts = bundled("sts-7", true).unwrap();
    assert!(matches!(
        repair(&sts, REPAIR_SEED),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn text_round_trip() {
    for key in bundled_keys() {
        for raw in [true, false] {
            let f = bundled(key, raw).unwrap();
            assert_eq!(Fixture::load(&f.to_text()).unwrap(), f, "{key}");
            assert_eq!(f.key(), key);
        }
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let text = "# comment\nfixture kind=sts n=3\nblock: 1 2 x\n";
    match Fixture::load(text) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(Fixture::load("fixture kind=nope n=3\n").is_err());
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    assert!(cache.keys().unwrap().is_empty());
    let f = bundled("gdd3-5^3", false).unwrap();
    cache.store(&f).unwrap();
    assert_eq!(cache.keys().unwrap(), vec!["gdd3-5^3".to_string()]);
    assert_eq!(cache.load("gdd3-5^3").unwrap(), Some(f));
    assert_eq!(cache.load("gdd3-6^3").unwrap(), None);
}

#[test]
fn unknown_key_not_available() {
    assert!(matches!(get("sts-19", None), Err(Error::NotAvailable(_))));
}

#[test]
fn corrupted_cache_entry_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let d = Factory::new(1).gdd3(&GroupType::uniform(6, 3)).unwrap();
    let mut f = d.to_fixture(FixtureKind::Gdd3, Provenance::Searched);
    cache.store(&f).unwrap();
    assert_eq!(get("gdd3-6^3", Some(&cache)).unwrap(), f);
    f.blocks.pop();
    f.marks.pop();
    f.joins.pop();
    cache.store(&f).unwrap();
    assert!(matches!(
        get("gdd3-6^3", Some(&cache)),
        Err(Error::Unverified { .. })
    ));
}
