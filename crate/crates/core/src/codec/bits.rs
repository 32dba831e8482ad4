//! Fixed-width bit fields over a byte stream, most significant bit first.

/// Reads consecutive `width`-bit fields from a byte slice; bits past the
/// end read as zero.
pub(crate) struct FieldReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> FieldReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn next_field(&mut self, width: u32) -> u64 {
        let mut field = 0u64;
        for _ in 0..width {
            let bit = self
                .bytes
                .get(self.pos / 8)
                .map_or(0, |b| (b >> (7 - self.pos % 8)) & 1);
            field = (field << 1) | u64::from(bit);
            self.pos += 1;
        }
        field
    }
}

/// Accumulates `width`-bit fields back into bytes.
#[derive(Default)]
pub(crate) struct FieldWriter {
    bytes: Vec<u8>,
    bits: usize,
}

impl FieldWriter {
    pub fn push_field(&mut self, field: u64, width: u32) {
        for shift in (0..width).rev() {
            if self.bits % 8 == 0 {
                self.bytes.push(0);
            }
            let bit = ((field >> shift) & 1) as u8;
            *self.bytes.last_mut().unwrap() |= bit << (7 - self.bits % 8);
            self.bits += 1;
        }
    }

    /// Whole bytes completed so far.
    pub fn complete_bytes(&self) -> &[u8] {
        &self.bytes[..self.bits / 8]
    }
}
