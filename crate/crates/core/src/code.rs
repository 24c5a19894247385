//! Complete code parameterization: dimensions, direction set, and the
//! derived reconstruction guarantees.

use crate::construction::{code_sigma, validate, Construction};
use crate::direction::Direction;
use crate::error::CodecError;

/// Everything needed to encode and decode one code instance.
///
/// `n` projections protect a `b x k` grid of `width`-byte symbols. Any
/// `reconstruction_size` projections suffice to rebuild the grid for the
/// two systematic families, so up to `tolerance = n - reconstruction_size`
/// projections may be lost.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodeSpec {
    construction: Construction,
    n: usize,
    k: usize,
    b: usize,
    width: usize,
    directions: Vec<Direction>,
    sigma: usize,
    reconstruction_size: usize,
}

impl CodeSpec {
    /// Builds a spec for one of the systematic families, deriving the
    /// canonical direction list.
    pub fn new(
        construction: Construction,
        n: usize,
        k: usize,
        b: usize,
        width: usize,
    ) -> Result<Self, CodecError> {
        if matches!(construction, Construction::Custom) {
            return Err(CodecError::Parameter(
                "custom direction sets go through CodeSpec::with_directions".into(),
            ));
        }
        let directions = construction.canonical_directions(n)?;
        Self::assemble(construction, n, k, b, width, directions)
    }

    /// Builds a spec around a hand-picked direction set. The set claims no
    /// erasure tolerance: reconstruction needs all of it.
    pub fn with_directions(
        k: usize,
        b: usize,
        width: usize,
        directions: Vec<Direction>,
    ) -> Result<Self, CodecError> {
        let n = directions.len();
        Self::assemble(Construction::Custom, n, k, b, width, directions)
    }

    fn assemble(
        construction: Construction,
        n: usize,
        k: usize,
        b: usize,
        width: usize,
        directions: Vec<Direction>,
    ) -> Result<Self, CodecError> {
        let sigma = code_sigma(&directions, b.max(1), k.max(1));
        let reconstruction_size = construction.reconstruction_size(n, k);
        let spec = CodeSpec {
            construction,
            n,
            k,
            b,
            width,
            directions,
            sigma,
            reconstruction_size,
        };
        let findings = validate(&spec);
        if let Some(first) = findings.first() {
            return Err(CodecError::Parameter(format!(
                "{} ({})",
                first.message,
                first.code.as_str()
            )));
        }
        Ok(spec)
    }

    /// Assembles a spec verbatim, skipping every check. Exists so that
    /// [`validate`](crate::validate) has something to catch; production
    /// paths use [`CodeSpec::new`].
    pub fn from_parts(
        construction: Construction,
        n: usize,
        k: usize,
        b: usize,
        width: usize,
        directions: Vec<Direction>,
        sigma: usize,
    ) -> Self {
        let reconstruction_size = construction.reconstruction_size(n, k);
        CodeSpec {
            construction,
            n,
            k,
            b,
            width,
            directions,
            sigma,
            reconstruction_size,
        }
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Maximum bin degree over the direction set.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// How many projections reconstruction needs.
    pub fn reconstruction_size(&self) -> usize {
        self.reconstruction_size
    }

    /// How many projections may be lost: `n - reconstruction_size`.
    pub fn tolerance(&self) -> usize {
        self.n.saturating_sub(self.reconstruction_size)
    }

    /// Payload capacity in bytes.
    pub fn capacity(&self) -> usize {
        self.b * self.k * self.width
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{validate, FindingCode};

    #[test]
    fn c33_spec_derives_everything() {
        let spec = CodeSpec::new(Construction::C33, 5, 3, 4, 2).unwrap();
        assert_eq!(spec.n(), 5);
        assert_eq!(spec.sigma(), 3);
        assert_eq!(spec.reconstruction_size(), 3);
        assert_eq!(spec.tolerance(), 2);
        assert_eq!(spec.capacity(), 24);
        assert_eq!(spec.directions().len(), 5);
        assert!(validate(&spec).is_empty());
    }

    #[test]
    fn c35_allows_n_below_k() {
        // ceil(6/2) = 3 projections reconstruct, so n = 4 is legitimate
        // even though n < k.
        let spec = CodeSpec::new(Construction::C35 { q_e: 2 }, 4, 6, 8, 1).unwrap();
        assert_eq!(spec.reconstruction_size(), 3);
        assert_eq!(spec.tolerance(), 1);
        assert!(validate(&spec).is_empty());
    }

    #[test]
    fn n_below_reconstruction_size_rejected() {
        assert!(CodeSpec::new(Construction::C33, 2, 3, 4, 1).is_err());
    }

    #[test]
    fn custom_set_accepted() {
        let dirs = vec![
            Direction::new(-1, 1).unwrap(),
            Direction::new(1, 0).unwrap(),
            Direction::new(1, 1).unwrap(),
        ];
        let spec = CodeSpec::with_directions(3, 4, 1, dirs).unwrap();
        assert_eq!(spec.n(), 3);
        assert_eq!(spec.reconstruction_size(), 3);
        assert_eq!(spec.tolerance(), 0);
        // max degree: (1,0) covers a full column of 4 cells.
        assert_eq!(spec.sigma(), 4);
    }

    #[test]
    fn duplicate_directions_rejected() {
        let dirs = vec![Direction::new(1, 1).unwrap(), Direction::new(1, 1).unwrap()];
        assert!(CodeSpec::with_directions(3, 4, 1, dirs).is_err());
    }

    #[test]
    fn from_parts_is_unchecked_and_validate_catches_it() {
        let spec = CodeSpec::from_parts(
            Construction::C33,
            3,
            3,
            4,
            1,
            Construction::C33.canonical_directions(3).unwrap(),
            99,
        );
        let findings = validate(&spec);
        assert!(findings.iter().any(|f| f.code == FindingCode::SigmaMismatch));
    }

    #[test]
    fn katz_failure_detected_on_starved_family_spec() {
        // A single (0,1) projection claimed as a family code over a 3-column
        // grid: sum|p| = 0 < b and sum|q| = 1 < k, unreconstructible even
        // with everything it has.
        let spec = CodeSpec::from_parts(
            Construction::C33,
            1,
            3,
            4,
            1,
            Construction::C33.canonical_directions(1).unwrap(),
            3,
        );
        let findings = validate(&spec);
        assert!(findings.iter().any(|f| f.code == FindingCode::KatzUnsatisfied));
    }
}
