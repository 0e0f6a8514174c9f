//! Keep medical keywords in English while translating the rest.
//!
//! Uses the offline lexicon fakes; the CLI swaps in HTTP backends from a
//! config file.

use medcs::backends::fake::{IdentityTranslator, LexiconAnnotator, LexiconTranslator, ManglingTranslator};
use medcs::masking::{mask_text, pseudo_cs_translate, translate_masked, Corruption, OnLost, RecoveryPolicy};

fn main() {
    let text = "The patient has hyperinflation and air trapping on CT scan.";
    let annotator = LexiconAnnotator::default();

    let step = mask_text("demo", text, &annotator).expect("lexicon annotation is well formed");
    println!("masked:   {}", step.masked.masked);
    println!("keywords: {:?}", step.masked.placeholders);

    let record = translate_masked(&step, &LexiconTranslator::default(), RecoveryPolicy::default()).expect("translates");
    println!("output:   {}", record.target_cs);

    // A translator that garbles placeholders: fuzzy recovery repairs
    // "[[ k0 ]]", and a dropped one is appended so nothing is silently lost.
    let sloppy = ManglingTranslator::new(IdentityTranslator, vec![Corruption::LowercaseInnerSpaces, Corruption::Dropped]);
    let policy = RecoveryPolicy {
        on_lost: OnLost::AppendMissing,
        ..RecoveryPolicy::default()
    };
    let repaired = pseudo_cs_translate("sloppy", text, &annotator, &sloppy, policy).expect("recovers");
    println!("repaired: {}", repaired.target_cs);
    println!("recovery: {}", repaired.meta["recovery"]);
}
