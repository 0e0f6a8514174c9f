use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use unicode_normalization::UnicodeNormalization;

use super::TextSegError;

const BUNDLED_WORDS: &str = include_str!("../../data/thai_words.txt");

/// Thai word list used for maximal-matching segmentation.
///
/// Entries are NFC-normalized on insertion. The longest entry (in chars)
/// bounds how far the segmenter looks ahead at each position.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    words: HashSet<String>,
    longest: usize,
}

impl Dictionary {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut dict = Dictionary::default();
        for w in words {
            dict.insert(w.as_ref());
        }
        dict
    }

    /// Parses the dictionary file format: UTF-8, one entry per line,
    /// `#` comment lines and blank lines ignored.
    pub fn parse(contents: &str) -> Self {
        Self::from_words(
            contents
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TextSegError> {
        let path = path.as_ref();
        let contents = std::fs::read_to_string(path).map_err(|source| TextSegError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&contents))
    }

    /// The small general + clinical Thai word list shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_WORDS)
    }

    pub fn insert(&mut self, word: &str) {
        let word: String = word.nfc().collect();
        if word.is_empty() {
            return;
        }
        self.longest = self.longest.max(word.chars().count());
        self.words.insert(word);
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Length in chars of the longest entry.
    pub fn longest_entry(&self) -> usize {
        self.longest
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// What a "token" means when counting against a chunk budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TokenUnit {
    /// Every non-whitespace segmenter token counts as one.
    #[default]
    Word,
    /// Every non-whitespace character counts as one.
    Char,
}

#[derive(Debug, Clone)]
pub struct SegmenterConfig {
    dictionary: Arc<Dictionary>,
    max_word_len: usize,
    pub token_unit: TokenUnit,
}

impl SegmenterConfig {
    pub fn new(dictionary: Dictionary) -> Result<Self, TextSegError> {
        if dictionary.is_empty() {
            return Err(TextSegError::EmptyDictionary);
        }
        let max_word_len = dictionary.longest_entry();
        Ok(Self {
            dictionary: Arc::new(dictionary),
            max_word_len,
            token_unit: TokenUnit::Word,
        })
    }

    /// Raises the look-ahead window. Must cover the longest dictionary entry.
    pub fn with_max_word_len(mut self, max_word_len: usize) -> Result<Self, TextSegError> {
        if max_word_len == 0 || max_word_len < self.dictionary.longest_entry() {
            return Err(TextSegError::MaxWordLenTooSmall {
                requested: max_word_len,
                longest: self.dictionary.longest_entry(),
            });
        }
        self.max_word_len = max_word_len;
        Ok(self)
    }

    pub fn with_token_unit(mut self, unit: TokenUnit) -> Self {
        self.token_unit = unit;
        self
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        Self::new(Dictionary::bundled()).expect("bundled dictionary is non-empty")
    }
}
