//! FNV-1a 64 fingerprints and seed derivation.

use std::hash::Hasher;

use fnv::FnvHasher;

/// Incremental FNV-1a 64 over length-prefixed fields, so that `("ab", "c")` and
/// `("a", "bc")` hash differently.
#[derive(Default)]
pub struct Fingerprint(FnvHasher);

impl Fingerprint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bytes(&mut self, bytes: &[u8]) -> &mut Self {
        self.0.write(&(bytes.len() as u64).to_le_bytes());
        self.0.write(bytes);
        self
    }

    pub fn str(&mut self, s: &str) -> &mut Self {
        self.bytes(s.as_bytes())
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.0.write(&v.to_le_bytes());
        self
    }

    pub fn finish(&self) -> u64 {
        self.0.finish()
    }
}

/// Plain FNV-1a 64 over a byte string.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

/// Seed for an independent job, derived from the master seed and the job's
/// coordinates (protocol, fold, grid cell, class...).
pub fn derive_seed(master: u64, scope: &str, indices: &[u64]) -> u64 {
    let mut fp = Fingerprint::new();
    fp.u64(master).str(scope);
    for &i in indices {
        fp.u64(i);
    }
    fp.finish()
}

pub fn hex64(v: u64) -> String {
    format!("{v:016x}")
}
