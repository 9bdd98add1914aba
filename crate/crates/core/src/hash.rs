//! Stable 64-bit FNV-1a hashing for fingerprints written to disk.

pub(crate) struct Fnv1a(u64);

impl Fnv1a {
    pub(crate) fn new() -> Self {
        Self(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    pub(crate) fn finish(&self) -> u64 {
        self.0
    }
}

/// Hex fingerprint of a string.
pub fn fingerprint(text: &str) -> String {
    let mut h = Fnv1a::new();
    h.write(text.as_bytes());
    format!("{:016x}", h.finish())
}
