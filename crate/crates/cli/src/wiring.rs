use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::ValueEnum;
use medcs::backends::fake::{IdentityTranslator, LexiconAnnotator, LexiconTranslator};
use medcs::backends::{
    Annotator, BackendConfig, BackendsFile, HttpBackend, Rephraser, ResponseCache, Role, Translator,
};
use medcs::metrics::{DiceProvider, ScoreProvider};

/// Offline stand-in used for a role the backend config leaves out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fake {
    /// Demo keyword lexicon annotator and English-to-Thai word lexicon.
    Lexicon,
    /// Returns text unchanged.
    Identity,
}

pub struct Backends {
    file: BackendsFile,
    cache: Arc<ResponseCache>,
    seed: u64,
    fake: Fake,
}

impl Backends {
    pub fn load(path: Option<&Path>, seed: u64, fake: Fake) -> Result<Self> {
        let file = match path {
            Some(p) => BackendsFile::load(p).with_context(|| format!("loading backend config {}", p.display()))?,
            None => BackendsFile::default(),
        };
        let cache = match &file.cache_dir {
            Some(dir) => ResponseCache::on_disk(dir).with_context(|| format!("opening cache {}", dir.display()))?,
            None => ResponseCache::in_memory(),
        };
        Ok(Self {
            file,
            cache: Arc::new(cache),
            seed,
            fake,
        })
    }

    fn http(&self, role: Role, cfg: &BackendConfig) -> Result<HttpBackend> {
        Ok(HttpBackend::new(role, cfg.clone())?
            .with_cache(self.cache.clone())
            .with_seed(self.seed))
    }

    pub fn workers(&self, cfg: Option<&BackendConfig>) -> usize {
        cfg.map_or(4, |c| c.max_in_flight.max(1))
    }

    pub fn translator(&self) -> Result<(Box<dyn Translator>, usize)> {
        let cfg = self.file.translator.as_ref();
        let backend: Box<dyn Translator> = match cfg {
            Some(c) => Box::new(self.http(Role::Translate, c)?),
            None if self.fake == Fake::Identity => Box::new(IdentityTranslator),
            None => Box::new(LexiconTranslator::default()),
        };
        Ok((backend, self.workers(cfg)))
    }

    pub fn annotator(&self) -> Result<Box<dyn Annotator>> {
        Ok(match &self.file.annotator {
            Some(c) => Box::new(self.http(Role::Annotate, c)?),
            None => Box::new(LexiconAnnotator::default()),
        })
    }

    pub fn rephraser(&self) -> Result<(Box<dyn Rephraser>, usize)> {
        let cfg = self.file.rephraser.as_ref();
        let backend: Box<dyn Rephraser> = match cfg {
            Some(c) => Box::new(self.http(Role::Rephrase, c)?),
            None => Box::new(IdentityTranslator),
        };
        Ok((backend, self.workers(cfg)))
    }

    pub fn back_translator(&self) -> Result<Box<dyn Translator>> {
        Ok(match &self.file.back_translator {
            Some(c) => Box::new(self.http(Role::BackTranslate, c)?),
            None => Box::new(IdentityTranslator),
        })
    }

    /// The configured scorer, or the Dice stand-in when `dice_fallback`.
    pub fn scorer(&self, dice_fallback: bool) -> Result<Option<Box<dyn ScoreProvider>>> {
        Ok(match &self.file.scorer {
            Some(c) => Some(Box::new(self.http(Role::Score, c)?)),
            None if dice_fallback => Some(Box::new(DiceProvider::default())),
            None => None,
        })
    }
}
