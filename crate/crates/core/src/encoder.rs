//! Projection of a grid along integer directions into XOR bins.

use crate::code::CodeSpec;
use crate::direction::Direction;
use crate::error::CodecError;
use crate::grid::DataGrid;
use crate::symbol::SymbolBuf;

/// One encoded projection: every grid cell XORed into exactly one bin
/// along lines of direction `dir`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Projection {
    /// Position of this projection within the code's direction list.
    pub index: usize,
    pub dir: Direction,
    pub bins: Vec<SymbolBuf>,
}

/// Number of bins a `b x k` grid produces along `dir`:
/// `|p| (k-1) + |q| (b-1) + 1`.
///
/// Panics if `b` or `k` is zero.
pub fn projection_length(dir: Direction, b: usize, k: usize) -> usize {
    assert!(b >= 1 && k >= 1, "grid dimensions must be positive");
    dir.p().unsigned_abs() as usize * (k - 1) + dir.q().unsigned_abs() as usize * (b - 1) + 1
}

/// Bin receiving the cell at row `z`, column `l` under `dir`:
/// `(b-1) q [q>0] + (k-1) p [p>0] - z q - l p`.
///
/// The offset terms shift the minimum over the grid to zero, so the result
/// always lies in `0..projection_length(dir, b, k)`. Panics if `z` or `l`
/// is out of range.
pub fn bin_index(dir: Direction, z: usize, l: usize, b: usize, k: usize) -> usize {
    assert!(z < b && l < k, "cell ({z},{l}) outside {b}x{k} grid");
    let p = dir.p() as i64;
    let q = dir.q() as i64;
    let pos = |s: i64| -> i64 { (s > 0) as i64 };
    let j = (b as i64 - 1) * q * pos(q) + (k as i64 - 1) * p * pos(p)
        - z as i64 * q
        - l as i64 * p;
    debug_assert!(
        (0..projection_length(dir, b, k) as i64).contains(&j),
        "bin index {j} escaped range for dir {dir:?}, b={b}, k={k}"
    );
    j as usize
}

/// How many cells land in each bin of `dir` over a `b x k` grid.
///
/// Entries may be zero: directions with steps larger than the grid span
/// skip lattice lines (e.g. `(2,3)` over a 2x2 grid).
pub fn bin_degree_map(dir: Direction, b: usize, k: usize) -> Vec<usize> {
    let mut degrees = vec![0usize; projection_length(dir, b, k)];
    for z in 0..b {
        for l in 0..k {
            degrees[bin_index(dir, z, l, b, k)] += 1;
        }
    }
    degrees
}

/// Projects `grid` along a single direction. Bins start zeroed, so bins no
/// line passes through stay zero.
pub(crate) fn project_one(grid: &DataGrid, dir: Direction) -> Vec<SymbolBuf> {
    let b = grid.rows();
    let k = grid.cols();
    let mut bins = vec![SymbolBuf::zero(grid.width()); projection_length(dir, b, k)];
    for z in 0..b {
        for l in 0..k {
            bins[bin_index(dir, z, l, b, k)].xor_assign_unchecked(grid.cell(z, l));
        }
    }
    bins
}

/// Encodes `grid` into one projection per direction of `spec`, in the
/// spec's direction order.
pub fn encode(grid: &DataGrid, spec: &CodeSpec) -> Result<Vec<Projection>, CodecError> {
    if grid.rows() != spec.b() || grid.cols() != spec.k() || grid.width() != spec.width() {
        return Err(CodecError::Structure(format!(
            "grid {}x{} width {} does not match spec b={} k={} width={}",
            grid.rows(),
            grid.cols(),
            grid.width(),
            spec.b(),
            spec.k(),
            spec.width()
        )));
    }
    Ok(spec
        .directions()
        .iter()
        .enumerate()
        .map(|(index, &dir)| Projection {
            index,
            dir,
            bins: project_one(grid, dir),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CodeSpec;
    use crate::construction::Construction;

    fn dir(p: i32, q: i32) -> Direction {
        Direction::new(p, q).unwrap()
    }

    #[test]
    fn length_formula() {
        // 4x3 grid.
        assert_eq!(projection_length(dir(-1, 1), 4, 3), 6);
        assert_eq!(projection_length(dir(0, 1), 4, 3), 4);
        assert_eq!(projection_length(dir(1, 1), 4, 3), 6);
        assert_eq!(projection_length(dir(1, 0), 4, 3), 3);
        // Hand-picked three-direction set over the same grid.
        let lens: Vec<usize> = [dir(-1, 1), dir(1, 0), dir(1, 1)]
            .into_iter()
            .map(|d| projection_length(d, 4, 3))
            .collect();
        assert_eq!(lens, vec![6, 3, 6]);
    }

    #[test]
    fn bin_index_corners() {
        assert_eq!(bin_index(dir(1, 1), 3, 2, 4, 3), 0);
        assert_eq!(bin_index(dir(-1, 1), 0, 0, 4, 3), 3);
        // Every cell maps inside the projection, covering the full range
        // exactly when the direction steps fit the grid.
        let mut seen = vec![false; projection_length(dir(1, 1), 4, 3)];
        for z in 0..4 {
            for l in 0..3 {
                seen[bin_index(dir(1, 1), z, l, 4, 3)] = true;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn degree_map_known_values() {
        assert_eq!(bin_degree_map(dir(1, 1), 4, 3), vec![1, 2, 3, 3, 2, 1]);
        assert_eq!(bin_degree_map(dir(0, 1), 4, 3), vec![3, 3, 3, 3]);
        // Steps larger than the grid leave gaps.
        assert_eq!(bin_degree_map(dir(2, 3), 2, 2), vec![1, 0, 1, 1, 0, 1]);
        let gaps = bin_degree_map(dir(5, 1), 2, 3);
        assert_eq!(gaps.iter().filter(|&&d| d == 0).count(), 6);
        assert_eq!(gaps.iter().sum::<usize>(), 6);
    }

    #[test]
    fn degrees_partition_grid() {
        for (p, q) in [(1, 1), (-2, 1), (3, 2), (1, 0), (0, -1), (-3, -4)] {
            for (b, k) in [(1, 1), (2, 5), (4, 3), (7, 7)] {
                let total: usize = bin_degree_map(dir(p, q), b, k).iter().sum();
                assert_eq!(total, b * k, "dir ({p},{q}), grid {b}x{k}");
            }
        }
    }

    #[test]
    fn encode_known_bins() {
        // 2x2 grid, width 1, payload [1,2,3,4]; direction (1,1) has bins
        // j = 2 - z - l, so bin0 = cell(1,1), bin1 = cell(0,1)^cell(1,0),
        // bin2 = cell(0,0).
        let grid = DataGrid::from_bytes(&[1, 2, 3, 4], 2, 2, 1).unwrap();
        let bins = project_one(&grid, dir(1, 1));
        let flat: Vec<u8> = bins.iter().map(|s| s.as_bytes()[0]).collect();
        assert_eq!(flat, vec![4, 2 ^ 3, 1]);
    }

    #[test]
    fn encode_matches_spec_order_and_lengths() {
        let spec = CodeSpec::new(Construction::C33, 3, 3, 4, 1).unwrap();
        let grid = DataGrid::from_bytes(&[0xab; 12], 4, 3, 1).unwrap();
        let projs = encode(&grid, &spec).unwrap();
        assert_eq!(projs.len(), 3);
        let lens: Vec<usize> = projs.iter().map(|p| p.bins.len()).collect();
        assert_eq!(lens, vec![6, 4, 6]);
        for (i, proj) in projs.iter().enumerate() {
            assert_eq!(proj.index, i);
            assert_eq!(proj.dir, spec.directions()[i]);
        }
    }

    #[test]
    fn encode_rejects_shape_mismatch() {
        let spec = CodeSpec::new(Construction::C33, 3, 3, 4, 1).unwrap();
        let grid = DataGrid::from_bytes(&[], 4, 4, 1).unwrap();
        assert!(matches!(encode(&grid, &spec), Err(CodecError::Structure(_))));
    }
}
