//! Deterministic in-process backends for tests, examples and dry runs.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use regex::Regex;

use super::{Annotator, BackendError, BackendResult, Rephraser, Translator};
use crate::masking::{Category, Corruption};
use crate::textseg::{tokenize, SegmenterConfig, TokenClass};

/// Echoes its input. Usable as translator, back-translator or rephraser.
#[derive(Debug, Default, Clone, Copy)]
pub struct IdentityTranslator;

impl Translator for IdentityTranslator {
    fn name(&self) -> &str {
        "identity"
    }

    fn translate(&self, text: &str) -> Result<BackendResult, BackendError> {
        Ok(BackendResult::local(text))
    }
}

impl Rephraser for IdentityTranslator {
    fn name(&self) -> &str {
        "identity"
    }

    fn rephrase(&self, text: &str) -> Result<BackendResult, BackendError> {
        Ok(BackendResult::local(text))
    }
}

type TextFn = Box<dyn Fn(&str) -> Result<String, BackendError> + Send + Sync>;

/// A backend defined by a closure; counts its calls.
pub struct FnBackend {
    name: String,
    f: TextFn,
    calls: AtomicUsize,
}

impl std::fmt::Debug for FnBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnBackend").field("name", &self.name).finish_non_exhaustive()
    }
}

impl FnBackend {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&str) -> Result<String, BackendError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            f: Box::new(f),
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    fn run(&self, text: &str) -> Result<BackendResult, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        (self.f)(text).map(BackendResult::local)
    }
}

impl Translator for FnBackend {
    fn name(&self) -> &str {
        &self.name
    }

    fn translate(&self, text: &str) -> Result<BackendResult, BackendError> {
        self.run(text)
    }
}

impl Annotator for FnBackend {
    fn name(&self) -> &str {
        &self.name
    }

    fn annotate(&self, text: &str) -> Result<BackendResult, BackendError> {
        self.run(text)
    }
}

impl Rephraser for FnBackend {
    fn name(&self) -> &str {
        &self.name
    }

    fn rephrase(&self, text: &str) -> Result<BackendResult, BackendError> {
        self.run(text)
    }
}

const DEMO_KEYWORDS: &[(&str, Category)] = &[
    ("hyperinflation", Category::Patho),
    ("air trapping", Category::Patho),
    ("pneumonia", Category::Patho),
    ("asthma", Category::Patho),
    ("diabetes", Category::Patho),
    ("hypertension", Category::Patho),
    ("copd", Category::Patho),
    ("dyspnea", Category::Patho),
    ("tachycardia", Category::Patho),
    ("insulin", Category::Pharm),
    ("paracetamol", Category::Pharm),
    ("amoxicillin", Category::Pharm),
    ("metformin", Category::Pharm),
    ("aspirin", Category::Pharm),
    ("salbutamol", Category::Pharm),
    ("bronchodilator", Category::Pharm),
    ("e. coli", Category::Taxo),
    ("staphylococcus aureus", Category::Taxo),
    ("lung", Category::Anato),
    ("lungs", Category::Anato),
    ("alveoli", Category::Anato),
    ("bronchi", Category::Anato),
    ("glucose", Category::Chem),
    ("sodium", Category::Chem),
    ("potassium", Category::Chem),
    ("hemoglobin", Category::Chem),
    ("ct scan", Category::Med),
    ("mri", Category::Med),
    ("x-ray", Category::Med),
    ("ecg", Category::Med),
    ("spirometry", Category::Med),
];

/// Tags keywords from a fixed lexicon, case-insensitively, longest match
/// first, at word boundaries. Output uses the `<annotated>` envelope.
#[derive(Debug, Clone)]
pub struct LexiconAnnotator {
    entries: Vec<(Vec<char>, Category)>,
}

impl Default for LexiconAnnotator {
    fn default() -> Self {
        Self::new(DEMO_KEYWORDS.iter().map(|&(k, c)| (k.to_string(), c)))
    }
}

impl LexiconAnnotator {
    pub fn new(entries: impl IntoIterator<Item = (String, Category)>) -> Self {
        let mut entries: Vec<(Vec<char>, Category)> = entries
            .into_iter()
            .filter(|(k, _)| !k.is_empty())
            .map(|(k, c)| (k.to_lowercase().chars().collect(), c))
            .collect();
        entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Self { entries }
    }

    /// The tagged rendering of `text`.
    pub fn tag(&self, text: &str) -> String {
        let chars: Vec<char> = text.chars().collect();
        let lower: Vec<char> = chars.iter().map(|c| c.to_lowercase().next().unwrap_or(*c)).collect();
        let is_word = |c: char| c.is_alphanumeric();
        let mut out = String::from("<annotated>");
        let mut i = 0;
        while i < chars.len() {
            let at_boundary = i == 0 || !is_word(chars[i - 1]);
            let hit = at_boundary
                .then(|| {
                    self.entries.iter().find(|(k, _)| {
                        let end = i + k.len();
                        end <= lower.len()
                            && lower[i..end] == k[..]
                            && (end == chars.len() || !is_word(chars[end]) || !is_word(chars[end - 1]))
                    })
                })
                .flatten();
            match hit {
                Some((k, cat)) => {
                    let surface: String = chars[i..i + k.len()].iter().collect();
                    out.push_str(&format!("<{0}>{1}</{0}>", cat.tag(), surface));
                    i += k.len();
                }
                None => {
                    out.push(chars[i]);
                    i += 1;
                }
            }
        }
        out.push_str("</annotated>");
        out
    }
}

impl Annotator for LexiconAnnotator {
    fn name(&self) -> &str {
        "lexicon-annotator"
    }

    fn annotate(&self, text: &str) -> Result<BackendResult, BackendError> {
        Ok(BackendResult::local(self.tag(text)))
    }
}

const DEMO_LEXICON: &[(&str, &str)] = &[
    ("a", ""),
    ("an", ""),
    ("the", ""),
    ("was", ""),
    ("were", ""),
    ("are", ""),
    ("patient", "ผู้ป่วย"),
    ("patients", "ผู้ป่วย"),
    ("has", "มี"),
    ("have", "มี"),
    ("had", "มี"),
    ("with", "กับ"),
    ("and", "และ"),
    ("or", "หรือ"),
    ("of", "ของ"),
    ("in", "ใน"),
    ("on", "บน"),
    ("is", "เป็น"),
    ("shows", "แสดง"),
    ("showed", "แสดง"),
    ("no", "ไม่มี"),
    ("not", "ไม่"),
    ("after", "หลังจาก"),
    ("before", "ก่อน"),
    ("for", "สำหรับ"),
    ("day", "วัน"),
    ("days", "วัน"),
    ("week", "สัปดาห์"),
    ("weeks", "สัปดาห์"),
    ("year", "ปี"),
    ("years", "ปี"),
    ("old", "อายุ"),
    ("pain", "ปวด"),
    ("fever", "ไข้"),
    ("cough", "ไอ"),
    ("chest", "หน้าอก"),
    ("left", "ซ้าย"),
    ("right", "ขวา"),
    ("severe", "รุนแรง"),
    ("mild", "เล็กน้อย"),
    ("history", "ประวัติ"),
    ("family", "ครอบครัว"),
    ("doctor", "แพทย์"),
    ("hospital", "โรงพยาบาล"),
    ("treatment", "การรักษา"),
    ("received", "ได้รับ"),
    ("daily", "ทุกวัน"),
    ("twice", "สองครั้ง"),
    ("dose", "ขนาดยา"),
    ("blood", "เลือด"),
    ("test", "ตรวจ"),
    ("result", "ผล"),
    ("results", "ผล"),
    ("normal", "ปกติ"),
    ("abnormal", "ผิดปกติ"),
    ("increased", "เพิ่มขึ้น"),
    ("decreased", "ลดลง"),
    ("found", "พบ"),
    ("indicates", "บ่งชี้"),
    ("consistent", "สอดคล้อง"),
    ("symptoms", "อาการ"),
    ("admitted", "รับไว้"),
    ("discharged", "จำหน่าย"),
    ("should", "ควร"),
    ("take", "ทาน"),
    ("start", "เริ่ม"),
    ("stop", "หยุด"),
    ("because", "เพราะ"),
    ("evidence", "หลักฐาน"),
    ("risk", "ความเสี่ยง"),
    ("high", "สูง"),
    ("low", "ต่ำ"),
    ("level", "ระดับ"),
    ("hours", "ชั่วโมง"),
    ("morning", "เช้า"),
    ("night", "กลางคืน"),
    ("child", "เด็ก"),
    ("male", "ชาย"),
    ("female", "หญิง"),
    ("heart", "หัวใจ"),
    ("liver", "ตับ"),
    ("kidney", "ไต"),
    ("brain", "สมอง"),
    ("bone", "กระดูก"),
    ("skin", "ผิวหนัง"),
    ("head", "ศีรษะ"),
    ("abdomen", "ท้อง"),
    ("arm", "แขน"),
    ("leg", "ขา"),
    ("hand", "มือ"),
    ("foot", "เท้า"),
    ("breathing", "หายใจ"),
    ("tired", "เหนื่อย"),
    ("disease", "โรค"),
    ("chronic", "เรื้อรัง"),
    ("acute", "เฉียบพลัน"),
    ("infection", "ติดเชื้อ"),
    ("inflammation", "อักเสบ"),
    ("swelling", "บวม"),
    ("pressure", "ความดัน"),
    ("pulse", "ชีพจร"),
    ("temperature", "อุณหภูมิ"),
    ("weight", "น้ำหนัก"),
    ("clinic", "คลินิก"),
    ("emergency", "ฉุกเฉิน"),
    ("surgery", "การผ่าตัด"),
    ("nausea", "คลื่นไส้"),
    ("vomiting", "อาเจียน"),
    ("diarrhea", "ท้องเสีย"),
    ("dizziness", "เวียนศีรษะ"),
    ("fatigue", "อ่อนเพลีย"),
    ("diagnosis", "การวินิจฉัย"),
    ("recommended", "แนะนำ"),
    ("new", "ใหม่"),
    ("by", "โดย"),
    ("from", "จาก"),
    ("this", "นี้"),
    ("that", "ที่"),
];

/// Word-by-word English→Thai translation from a small lexicon.
///
/// Known words become Thai, unknown words pass through unchanged, and
/// placeholders are kept verbatim. Adjacent Thai words are joined without
/// spaces, as Thai is written.
#[derive(Debug, Clone)]
pub struct LexiconTranslator {
    lexicon: HashMap<String, String>,
    seg: SegmenterConfig,
}

impl Default for LexiconTranslator {
    fn default() -> Self {
        Self::new(
            DEMO_LEXICON.iter().map(|&(e, t)| (e.to_string(), t.to_string())),
            SegmenterConfig::default(),
        )
    }
}

impl LexiconTranslator {
    pub fn new(entries: impl IntoIterator<Item = (String, String)>, seg: SegmenterConfig) -> Self {
        Self {
            lexicon: entries.into_iter().map(|(e, t)| (e.to_lowercase(), t)).collect(),
            seg,
        }
    }

    pub fn translate_text(&self, text: &str) -> String {
        enum Piece {
            Thai(String),
            Other(String),
            Space,
        }
        let mut pieces = Vec::new();
        for tok in tokenize(text, &self.seg) {
            match tok.class {
                TokenClass::Whitespace => pieces.push(Piece::Space),
                TokenClass::Latin => match self.lexicon.get(&tok.text.to_lowercase()) {
                    Some(t) if t.is_empty() => {}
                    Some(t) => pieces.push(Piece::Thai(t.clone())),
                    None => pieces.push(Piece::Other(tok.text)),
                },
                TokenClass::Thai => pieces.push(Piece::Thai(tok.text)),
                _ => pieces.push(Piece::Other(tok.text)),
            }
        }
        let mut out = String::new();
        let mut prev_thai = None;
        let mut pending_space = false;
        for p in pieces {
            match p {
                Piece::Space => pending_space = prev_thai.is_some(),
                Piece::Thai(t) | Piece::Other(t) if t.is_empty() => {}
                Piece::Thai(t) => {
                    if pending_space && prev_thai == Some(false) {
                        out.push(' ');
                    }
                    out.push_str(&t);
                    prev_thai = Some(true);
                    pending_space = false;
                }
                Piece::Other(t) => {
                    let glue = t.chars().all(|c| c.is_ascii_punctuation()) && !t.starts_with('(') && !t.starts_with("[[");
                    if pending_space && !glue {
                        out.push(' ');
                    }
                    out.push_str(&t);
                    prev_thai = Some(false);
                    pending_space = false;
                }
            }
        }
        out
    }
}

impl Translator for LexiconTranslator {
    fn name(&self) -> &str {
        "lexicon-translator"
    }

    fn translate(&self, text: &str) -> Result<BackendResult, BackendError> {
        Ok(BackendResult::local(self.translate_text(text)))
    }
}

/// Wraps a translator and corrupts the canonical placeholders in its output.
///
/// Placeholder `n` receives `plan[n % plan.len()]`.
pub struct ManglingTranslator<T> {
    inner: T,
    plan: Vec<Corruption>,
    pattern: Regex,
}

impl<T> ManglingTranslator<T> {
    pub fn new(inner: T, plan: Vec<Corruption>) -> Self {
        assert!(!plan.is_empty(), "corruption plan must be non-empty");
        Self {
            inner,
            plan,
            pattern: Regex::new(r"(\s*)\[\[K(\d+)\]\](\s*)").expect("static regex"),
        }
    }

    pub fn mangle(&self, text: &str) -> String {
        self.pattern
            .replace_all(text, |caps: &regex::Captures<'_>| {
                let id: usize = caps[2].parse().expect("digits");
                let c = self.plan[id % self.plan.len()];
                if c == Corruption::Glued {
                    c.apply(id)
                } else {
                    format!("{}{}{}", &caps[1], c.apply(id), &caps[3])
                }
            })
            .into_owned()
    }
}

impl<T: Translator> Translator for ManglingTranslator<T> {
    fn name(&self) -> &str {
        "mangling"
    }

    fn translate(&self, text: &str) -> Result<BackendResult, BackendError> {
        let mut r = self.inner.translate(text)?;
        r.text = self.mangle(&r.text);
        Ok(r)
    }
}
