//! On-disk projection container: a fixed 50-byte little-endian header with
//! a trailing CRC-32, followed by the raw bin payload, plus a JSON manifest
//! describing the whole projection set.

use crate::error::CliError;
use ambx_core::{CodeSpec, Construction, Direction};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

pub const MAGIC: [u8; 4] = *b"AMBX";
pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 50;

pub const CONSTRUCTION_C33: u8 = 0;
pub const CONSTRUCTION_C35: u8 = 1;
pub const CONSTRUCTION_CUSTOM: u8 = 2;

/// Parsed fixed header of one projection file.
///
/// Layout (little-endian, offsets in bytes):
/// 0 magic[4], 4 version u8, 5 construction u8, 6 n u32, 10 k u32,
/// 14 b u32, 18 q_e u16, 20 width u16, 22 payload_len u64,
/// 30 projection_index u32, 34 p i32, 38 q i32, 42 bin_count u32,
/// 46 crc32-of-bytes-0..46 u32.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ContainerHeader {
    pub construction: u8,
    pub n: u32,
    pub k: u32,
    pub b: u32,
    pub q_e: u16,
    pub width: u16,
    pub payload_len: u64,
    pub projection_index: u32,
    pub p: i32,
    pub q: i32,
    pub bin_count: u32,
}

impl ContainerHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut buf = [0u8; HEADER_LEN];
        buf[0..4].copy_from_slice(&MAGIC);
        buf[4] = FORMAT_VERSION;
        buf[5] = self.construction;
        buf[6..10].copy_from_slice(&self.n.to_le_bytes());
        buf[10..14].copy_from_slice(&self.k.to_le_bytes());
        buf[14..18].copy_from_slice(&self.b.to_le_bytes());
        buf[18..20].copy_from_slice(&self.q_e.to_le_bytes());
        buf[20..22].copy_from_slice(&self.width.to_le_bytes());
        buf[22..30].copy_from_slice(&self.payload_len.to_le_bytes());
        buf[30..34].copy_from_slice(&self.projection_index.to_le_bytes());
        buf[34..38].copy_from_slice(&self.p.to_le_bytes());
        buf[38..42].copy_from_slice(&self.q.to_le_bytes());
        buf[42..46].copy_from_slice(&self.bin_count.to_le_bytes());
        let crc = crc32fast::hash(&buf[0..46]);
        buf[46..50].copy_from_slice(&crc.to_le_bytes());
        buf
    }

    /// Parses and checks magic, version, and header CRC.
    pub fn parse(buf: &[u8], origin: &str) -> Result<Self, CliError> {
        if buf.len() < HEADER_LEN {
            return Err(CliError::Corrupt(format!(
                "{origin}: {} bytes is shorter than the {HEADER_LEN}-byte header",
                buf.len()
            )));
        }
        if buf[0..4] != MAGIC {
            return Err(CliError::Corrupt(format!("{origin}: bad magic")));
        }
        if buf[4] != FORMAT_VERSION {
            return Err(CliError::Corrupt(format!(
                "{origin}: unsupported format version {}",
                buf[4]
            )));
        }
        let stored_crc = u32::from_le_bytes(buf[46..50].try_into().unwrap());
        let actual_crc = crc32fast::hash(&buf[0..46]);
        if stored_crc != actual_crc {
            return Err(CliError::Corrupt(format!(
                "{origin}: header checksum mismatch (stored {stored_crc:08x}, computed {actual_crc:08x})"
            )));
        }
        let le32 = |at: usize| u32::from_le_bytes(buf[at..at + 4].try_into().unwrap());
        let le16 = |at: usize| u16::from_le_bytes(buf[at..at + 2].try_into().unwrap());
        Ok(ContainerHeader {
            construction: buf[5],
            n: le32(6),
            k: le32(10),
            b: le32(14),
            q_e: le16(18),
            width: le16(20),
            payload_len: u64::from_le_bytes(buf[22..30].try_into().unwrap()),
            projection_index: le32(30),
            p: i32::from_le_bytes(buf[34..38].try_into().unwrap()),
            q: i32::from_le_bytes(buf[38..42].try_into().unwrap()),
            bin_count: le32(42),
        })
    }
}

pub fn construction_code(c: Construction) -> u8 {
    match c {
        Construction::C33 => CONSTRUCTION_C33,
        Construction::C35 { .. } => CONSTRUCTION_C35,
        Construction::Custom => CONSTRUCTION_CUSTOM,
    }
}

pub fn construction_name(code: u8) -> Result<&'static str, CliError> {
    match code {
        CONSTRUCTION_C33 => Ok("c33"),
        CONSTRUCTION_C35 => Ok("c35"),
        CONSTRUCTION_CUSTOM => Ok("custom"),
        other => Err(CliError::Corrupt(format!("unknown construction code {other}"))),
    }
}

pub fn construction_label(c: Construction) -> &'static str {
    construction_name(construction_code(c)).expect("every construction has a code")
}

/// Inverse of [`construction_code`]; `q_e` is only meaningful for c35.
pub fn construction_from_code(code: u8, q_e: u16) -> Result<Construction, String> {
    match code {
        CONSTRUCTION_C33 => Ok(Construction::C33),
        CONSTRUCTION_C35 => Ok(Construction::C35 { q_e }),
        CONSTRUCTION_CUSTOM => Ok(Construction::Custom),
        other => Err(format!("unknown construction code {other}")),
    }
}

/// Filename of projection i within an output directory.
pub fn projection_file_name(index: usize) -> String {
    format!("proj_{index:04}.ambx")
}

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct ManifestEntry {
    pub file: String,
    pub projection_index: u32,
    pub p: i32,
    pub q: i32,
    pub bin_count: u32,
    /// CRC-32 of the body bytes (everything after the header), lower hex.
    pub body_crc32: String,
}

/// Sidecar description of a full projection set; field order is the
/// serialization order, and no volatile fields (timestamps) are included,
/// so re-encoding identical input yields an identical manifest.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct Manifest {
    pub format_version: u8,
    pub construction: String,
    pub n: u32,
    pub k: u32,
    pub b: u32,
    pub q_e: u16,
    pub width: u16,
    pub payload_len: u64,
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn for_code(spec: &CodeSpec, payload_len: u64, files: Vec<ManifestEntry>) -> Self {
        Manifest {
            format_version: FORMAT_VERSION,
            construction: construction_label(spec.construction()).to_string(),
            n: spec.n() as u32,
            k: spec.k() as u32,
            b: spec.b() as u32,
            q_e: match spec.construction() {
                Construction::C35 { q_e } => q_e,
                _ => 0,
            },
            width: spec.width() as u16,
            payload_len,
            files,
        }
    }

    /// Code-level agreement between this manifest and a projection header.
    pub fn check_matches_header(&self, h: &ContainerHeader) -> Result<(), CliError> {
        let name = construction_name(h.construction)?;
        let same = self.format_version == FORMAT_VERSION
            && self.construction == name
            && self.n == h.n
            && self.k == h.k
            && self.b == h.b
            && self.q_e == h.q_e
            && self.width == h.width
            && self.payload_len == h.payload_len;
        if !same {
            return Err(CliError::Corrupt(
                "manifest describes a different code than the projection headers".into(),
            ));
        }
        Ok(())
    }
}

/// Builds the header for projection `index` of `spec`.
pub fn header_for(spec: &CodeSpec, payload_len: u64, index: usize, bin_count: usize) -> ContainerHeader {
    let dir = spec.directions()[index];
    ContainerHeader {
        construction: construction_code(spec.construction()),
        n: spec.n() as u32,
        k: spec.k() as u32,
        b: spec.b() as u32,
        q_e: match spec.construction() {
            Construction::C35 { q_e } => q_e,
            _ => 0,
        },
        width: spec.width() as u16,
        payload_len,
        projection_index: index as u32,
        p: dir.p(),
        q: dir.q(),
        bin_count: bin_count as u32,
    }
}

/// Writes one projection file: header then raw bins.
pub fn write_projection_file(
    path: &Path,
    header: &ContainerHeader,
    body: &[u8],
) -> Result<(), CliError> {
    debug_assert_eq!(body.len(), header.bin_count as usize * header.width as usize);
    let mut file = std::fs::File::create(path)?;
    file.write_all(&header.to_bytes())?;
    file.write_all(body)?;
    Ok(())
}

/// Reads and structurally checks one projection file.
///
/// Guarantees on return: magic/version/CRC pass, the direction is a valid
/// coprime pair, bin_count matches the direction's projection length over
/// the header's grid, and the body length is exactly bin_count * width.
pub fn read_projection_file(path: &Path) -> Result<(ContainerHeader, Vec<u8>), CliError> {
    let origin = path.display().to_string();
    let bytes = std::fs::read(path)?;
    let header = ContainerHeader::parse(&bytes, &origin)?;
    construction_name(header.construction)?;
    if header.k == 0 || header.b == 0 || header.width == 0 || header.n == 0 {
        return Err(CliError::Corrupt(format!("{origin}: zero dimension in header")));
    }
    if header.projection_index >= header.n {
        return Err(CliError::Corrupt(format!(
            "{origin}: projection index {} out of range for n={}",
            header.projection_index, header.n
        )));
    }
    let dir = Direction::new(header.p, header.q).map_err(|_| {
        CliError::Corrupt(format!(
            "{origin}: ({},{}) is not a valid direction",
            header.p, header.q
        ))
    })?;
    let expected_bins =
        ambx_core::projection_length(dir, header.b as usize, header.k as usize);
    if header.bin_count as usize != expected_bins {
        return Err(CliError::Corrupt(format!(
            "{origin}: header claims {} bins but direction ({},{}) over a {}x{} grid yields {}",
            header.bin_count, header.p, header.q, header.b, header.k, expected_bins
        )));
    }
    let body_len = expected_bins * header.width as usize;
    if bytes.len() != HEADER_LEN + body_len {
        return Err(CliError::Corrupt(format!(
            "{origin}: file is {} bytes, expected {}",
            bytes.len(),
            HEADER_LEN + body_len
        )));
    }
    Ok((header, bytes[HEADER_LEN..].to_vec()))
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Corrupt(format!("manifest serialization failed: {e}")))?;
    std::fs::write(dir.join(MANIFEST_NAME), json + "\n")?;
    Ok(())
}

pub fn read_manifest(dir: &Path) -> Result<Option<Manifest>, CliError> {
    let path = dir.join(MANIFEST_NAME);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path)?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Corrupt(format!("{}: {e}", path.display())))?;
    Ok(Some(manifest))
}

pub fn body_crc_hex(body: &[u8]) -> String {
    format!("{:08x}", crc32fast::hash(body))
}
