//! Score a hypothesis against a reference with every automated metric.

use medcs::metrics::{cer, cs_f1, meteor_lite, sentence_bleu, sentence_chrf, wer, DiceProvider, ScoreProvider};
use medcs::textseg::SegmenterConfig;

fn main() {
    let cfg = SegmenterConfig::default();
    let source = "Hyperinflation and air trapping on CT scan.";
    let reference = "Hyperinflation และ air trapping บน CT scan";
    let hypotheses = [
        "Hyperinflation และ air trapping บน CT scan",
        "ภาวะปอดขยายตัวเกิน และ air trapping บน CT scan",
        "การสแกน CT แสดงอากาศค้าง",
    ];

    println!("{:<48} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}", "hypothesis", "csF1", "BLEU", "chrF", "CER", "WER", "METEOR", "Dice");
    for h in hypotheses {
        println!(
            "{:<48} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3}",
            h,
            cs_f1(h, reference, &cfg).f1,
            sentence_bleu(h, reference, &cfg),
            sentence_chrf(h, reference),
            cer(h, reference).expect("non-empty reference"),
            wer(h, reference, &cfg).expect("non-empty reference"),
            meteor_lite(h, reference, &cfg),
            DiceProvider::default().score(source, h, Some(reference)).expect("dice never fails"),
        );
    }
}
