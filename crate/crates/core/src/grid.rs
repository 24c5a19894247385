//! The b-by-k source grid of symbols that projections are taken over.

use crate::error::CodecError;
use crate::symbol::SymbolBuf;

/// A dense `rows x cols` grid of equal-width symbols, stored row-major.
///
/// Row index `z` runs over `0..rows` (the paper-facing `b` dimension),
/// column index `l` over `0..cols` (the `k` dimension).
#[derive(Clone, PartialEq, Eq)]
pub struct DataGrid {
    rows: usize,
    cols: usize,
    width: usize,
    cells: Vec<SymbolBuf>,
}

impl DataGrid {
    /// Builds a grid from a raw payload, padding the tail with zero bytes.
    ///
    /// The payload fills cells row-major; `payload.len()` must not exceed
    /// `rows * cols * width`.
    pub fn from_bytes(
        payload: &[u8],
        rows: usize,
        cols: usize,
        width: usize,
    ) -> Result<Self, CodecError> {
        if rows == 0 || cols == 0 {
            return Err(CodecError::Parameter(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if width == 0 {
            return Err(CodecError::Parameter("symbol width must be positive".into()));
        }
        let capacity = rows * cols * width;
        if payload.len() > capacity {
            return Err(CodecError::PayloadTooLarge {
                payload: payload.len(),
                capacity,
            });
        }
        let mut cells = Vec::with_capacity(rows * cols);
        for idx in 0..rows * cols {
            let start = (idx * width).min(payload.len());
            let end = ((idx + 1) * width).min(payload.len());
            let mut bytes = vec![0u8; width];
            bytes[..end - start].copy_from_slice(&payload[start..end]);
            cells.push(SymbolBuf::from_bytes(bytes));
        }
        Ok(DataGrid { rows, cols, width, cells })
    }

    /// An all-zero grid.
    pub fn zero(rows: usize, cols: usize, width: usize) -> Result<Self, CodecError> {
        Self::from_bytes(&[], rows, cols, width)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The symbol at row `z`, column `l`. Panics if out of range.
    pub fn cell(&self, z: usize, l: usize) -> &SymbolBuf {
        assert!(z < self.rows && l < self.cols, "cell ({z},{l}) out of range");
        &self.cells[z * self.cols + l]
    }

    pub(crate) fn set_cell(&mut self, z: usize, l: usize, value: SymbolBuf) {
        assert!(z < self.rows && l < self.cols, "cell ({z},{l}) out of range");
        debug_assert_eq!(value.width(), self.width);
        self.cells[z * self.cols + l] = value;
    }

    /// Serializes the first `len` bytes of the grid, row-major.
    ///
    /// `len` must not exceed the grid capacity; callers typically pass the
    /// original payload length to strip the zero padding.
    pub fn to_bytes(&self, len: usize) -> Result<Vec<u8>, CodecError> {
        let capacity = self.rows * self.cols * self.width;
        if len > capacity {
            return Err(CodecError::Parameter(format!(
                "requested {len} bytes from a grid holding {capacity}"
            )));
        }
        let mut out = Vec::with_capacity(len);
        for cell in &self.cells {
            if out.len() >= len {
                break;
            }
            let take = (len - out.len()).min(self.width);
            out.extend_from_slice(&cell.as_bytes()[..take]);
        }
        Ok(out)
    }

    /// Cellwise XOR of two grids with identical shape.
    pub fn xor(&self, other: &DataGrid) -> Result<DataGrid, CodecError> {
        if self.rows != other.rows || self.cols != other.cols || self.width != other.width {
            return Err(CodecError::Structure(format!(
                "grid shape mismatch: {}x{}x{} vs {}x{}x{}",
                self.rows, self.cols, self.width, other.rows, other.cols, other.width
            )));
        }
        let mut out = self.clone();
        for (dst, src) in out.cells.iter_mut().zip(&other.cells) {
            dst.xor_assign_unchecked(src);
        }
        Ok(out)
    }
}

impl std::fmt::Debug for DataGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DataGrid({}x{}, width {})", self.rows, self.cols, self.width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        // 2 rows, 3 cols, width 2: payload bytes land left to right, top row first.
        let payload: Vec<u8> = (1..=12).collect();
        let g = DataGrid::from_bytes(&payload, 2, 3, 2).unwrap();
        assert_eq!(g.cell(0, 0).as_bytes(), &[1, 2]);
        assert_eq!(g.cell(0, 2).as_bytes(), &[5, 6]);
        assert_eq!(g.cell(1, 0).as_bytes(), &[7, 8]);
        assert_eq!(g.cell(1, 2).as_bytes(), &[11, 12]);
    }

    #[test]
    fn short_payload_zero_padded() {
        let g = DataGrid::from_bytes(&[9, 8, 7], 2, 2, 2).unwrap();
        assert_eq!(g.cell(0, 0).as_bytes(), &[9, 8]);
        assert_eq!(g.cell(0, 1).as_bytes(), &[7, 0]);
        assert!(g.cell(1, 0).is_zero());
        assert!(g.cell(1, 1).is_zero());
    }

    #[test]
    fn oversize_payload_rejected() {
        assert!(matches!(
            DataGrid::from_bytes(&[0; 9], 2, 2, 2),
            Err(CodecError::PayloadTooLarge { payload: 9, capacity: 8 })
        ));
    }

    #[test]
    fn byte_round_trip() {
        let payload: Vec<u8> = (0..23).collect();
        let g = DataGrid::from_bytes(&payload, 3, 4, 2).unwrap();
        assert_eq!(g.to_bytes(23).unwrap(), payload);
        // Full capacity includes the zero pad byte.
        let full = g.to_bytes(24).unwrap();
        assert_eq!(&full[..23], &payload[..]);
        assert_eq!(full[23], 0);
    }

    #[test]
    fn degenerate_dimensions_rejected() {
        assert!(DataGrid::from_bytes(&[], 0, 3, 1).is_err());
        assert!(DataGrid::from_bytes(&[], 3, 0, 1).is_err());
        assert!(DataGrid::from_bytes(&[], 3, 3, 0).is_err());
    }
}
