//! Fixed-width byte-string symbols forming the XOR group the codec runs on.

use crate::error::CodecError;

/// A symbol: `width` bytes combined with other symbols by bytewise XOR.
///
/// The all-zero buffer is the group identity and every symbol is its own
/// inverse, so "adding" and "cancelling" a symbol are the same operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolBuf {
    bytes: Vec<u8>,
}

impl SymbolBuf {
    /// The identity symbol of the given width.
    pub fn zero(width: usize) -> Self {
        SymbolBuf { bytes: vec![0; width] }
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        SymbolBuf { bytes }
    }

    pub fn width(&self) -> usize {
        self.bytes.len()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn is_zero(&self) -> bool {
        self.bytes.iter().all(|&b| b == 0)
    }

    /// XOR `other` into `self`. Errors if the widths differ.
    pub fn xor_assign(&mut self, other: &SymbolBuf) -> Result<(), CodecError> {
        if self.width() != other.width() {
            return Err(CodecError::WidthMismatch {
                left: self.width(),
                right: other.width(),
            });
        }
        self.xor_assign_unchecked(other);
        Ok(())
    }

    /// Returns `self XOR other` as a new symbol. Errors if the widths differ.
    pub fn xor(&self, other: &SymbolBuf) -> Result<SymbolBuf, CodecError> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    /// Width-unchecked XOR for hot paths where both sides come from the
    /// same validated grid or projection.
    pub(crate) fn xor_assign_unchecked(&mut self, other: &SymbolBuf) {
        debug_assert_eq!(self.width(), other.width());
        for (dst, src) in self.bytes.iter_mut().zip(&other.bytes) {
            *dst ^= src;
        }
    }
}

impl std::fmt::Debug for SymbolBuf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymbolBuf(")?;
        for b in &self.bytes {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}
