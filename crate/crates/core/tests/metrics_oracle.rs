mod oracles;

use medcs::metrics::{bleu, cer, chrf, cs_f1, sentence_bleu, sentence_chrf, wer, DEFAULT_BETA, DEFAULT_CHAR_ORDER};
use medcs::textseg::SegmenterConfig;

fn pairs() -> Vec<(Vec<char>, Vec<char>)> {
    let all = oracles::all_strings(&['a', 'b', 'c'], 5);
    all.iter().flat_map(|h| all.iter().map(move |r| (h.clone(), r.clone()))).collect()
}

fn spaced(s: &[char]) -> String {
    s.iter().map(char::to_string).collect::<Vec<_>>().join(" ")
}

#[test]
fn exhaustive_against_brute_force() {
    let cfg = SegmenterConfig::default();
    for (h, r) in pairs() {
        let (hs, rs): (String, String) = (h.iter().collect(), r.iter().collect());
        let (hw, rw) = (spaced(&h), spaced(&r));
        assert_eq!(sentence_bleu(&hw, &rw, &cfg), oracles::bleu(&h, &r), "bleu {hw:?} {rw:?}");
        assert_eq!(sentence_chrf(&hs, &rs), oracles::chrf(&hs, &rs), "chrf {hs:?} {rs:?}");
        if r.is_empty() {
            assert_eq!(cer(&hs, &rs).is_err(), !h.is_empty());
            assert_eq!(wer(&hw, &rw, &cfg).is_err(), !h.is_empty());
            continue;
        }
        let d = oracles::edit_distance(&h, &r) as f64 / r.len() as f64;
        assert_eq!(cer(&hs, &rs).unwrap(), d, "cer {hs:?} {rs:?}");
        assert_eq!(wer(&hw, &rw, &cfg).unwrap(), d, "wer {hw:?} {rw:?}");
    }
}

#[test]
fn identity_corpus_is_perfect() {
    let cfg = SegmenterConfig::default();
    let corpus = [
        "ผู้ป่วยมี air trapping และ Hyperinflation",
        "ตรวจ CT scan พบ pneumonia",
        "ให้ insulin 10 units ก่อนอาหาร",
    ];
    assert_eq!(bleu(&corpus, &corpus, &cfg, 4).unwrap(), 1.0);
    assert_eq!(chrf(&corpus, &corpus, DEFAULT_CHAR_ORDER, DEFAULT_BETA).unwrap(), 1.0);
    for s in corpus {
        assert_eq!(cs_f1(s, s, &cfg).f1, 1.0);
        assert_eq!(cer(s, s).unwrap(), 0.0);
        assert_eq!(wer(s, s, &cfg).unwrap(), 0.0);
    }
}

#[test]
fn repeated_keyword_fixture() {
    let cfg = SegmenterConfig::default();
    assert_eq!(cs_f1("ct scan scan", "ct scan", &cfg).f1, 0.8);
}
