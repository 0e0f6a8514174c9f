//! Tokenize mixed Thai/English text and pack it into chunks.
//!
//! cargo run --example segmentation -- "ผู้ป่วยมีไข้ และตรวจ CT scan พบ nodule"

use medcs::textseg::{chunk, english_tokens, tokenize, SegmenterConfig};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "ผู้ป่วยมีไข้ 3 วัน ตรวจ CT scan พบ nodule ที่ปอดซ้าย [[K0]]".into());
    let cfg = SegmenterConfig::default();

    for tok in tokenize(&text, &cfg).iter().filter(|t| !t.is_whitespace()) {
        println!("{:>3}..{:<3} {:<12?} {}", tok.span.start, tok.span.end, tok.class, tok.text);
    }
    println!("english: {:?}", english_tokens(&text, &cfg));

    for c in chunk(&text, &cfg, 8).expect("non-zero budget") {
        println!("chunk {} ({} tokens): \"{}\"", c.index, c.token_count, c.text);
    }
}
