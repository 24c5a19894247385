//! gen-params, encode, and decode. Simulation and tables live in their own
//! modules.

use crate::cli::{CodeArgs, ConstructionArg, DecodeArgs, EncodeArgs, GenParamsArgs};
use crate::container::{
    self, read_manifest, read_projection_file, write_manifest, write_projection_file,
    ContainerHeader, Manifest,
};
use crate::error::CliError;
use ambx_core::{
    decodable, decode_with, encode, overhead_exact, CodeSpec, Construction, DataGrid,
    DecodeOptions, DecodeStatus, Direction, Projection,
};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

/// Parses "p:q,p:q,..." into validated directions.
pub fn parse_directions(text: &str) -> Result<Vec<Direction>, CliError> {
    let mut dirs = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let (p, q) = part
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("direction `{part}` is not of the form p:q")))?;
        let p: i32 = p
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad direction component in `{part}`")))?;
        let q: i32 = q
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad direction component in `{part}`")))?;
        dirs.push(Direction::new(p, q).map_err(CliError::from)?);
    }
    Ok(dirs)
}

/// Builds the code described by the shared flags.
pub fn spec_from_args(args: &CodeArgs) -> Result<CodeSpec, CliError> {
    if let Some(text) = &args.dirs {
        let dirs = parse_directions(text)?;
        if let Some(n) = args.n {
            if n != dirs.len() {
                return Err(CliError::Usage(format!(
                    "--n {n} disagrees with the {} directions in --dirs",
                    dirs.len()
                )));
            }
        }
        return CodeSpec::with_directions(args.k, args.b, args.width, dirs).map_err(CliError::from);
    }
    match args.construction {
        ConstructionArg::Custom => Err(CliError::Usage(
            "--construction custom requires --dirs".into(),
        )),
        ConstructionArg::C33 => {
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("--n is required for the c33 family".into()))?;
            CodeSpec::new(Construction::C33, n, args.k, args.b, args.width).map_err(CliError::from)
        }
        ConstructionArg::C35 => {
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("--n is required for the c35 family".into()))?;
            CodeSpec::new(
                Construction::C35 { q_e: args.qe },
                n,
                args.k,
                args.b,
                args.width,
            )
            .map_err(CliError::from)
        }
    }
}

#[derive(Serialize)]
struct DirectionDoc {
    p: i32,
    q: i32,
}

#[derive(Serialize)]
struct OverheadDoc {
    /// Symbols fetched in the worst tolerated erasure pattern.
    worst_subset_symbols: u64,
    /// Exact relative retrieval overhead, as an exact fraction and a float.
    eps_exact: String,
    eps_exact_f64: f64,
    /// Family closed form; always equals eps_exact when present.
    eps_closed_form: Option<String>,
    /// Large-n smooth model of the same quantity.
    eps_smooth: Option<f64>,
    /// Exact envelope around the smooth model, when the family has one.
    eps_bracket: Option<[String; 2]>,
    /// Mean surviving projection length over the worst subset.
    mean_worst_projection_len: String,
}

#[derive(Serialize)]
struct ParamsDoc {
    construction: &'static str,
    n: usize,
    k: usize,
    b: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_e: Option<u16>,
    width: usize,
    /// Peak cells any one projection bin covers.
    sigma: usize,
    /// Projections that always suffice to reconstruct.
    reconstruction_size: usize,
    /// Erasures the code is guaranteed to survive.
    tolerance: usize,
    capacity_bytes: usize,
    directions: Vec<DirectionDoc>,
    projection_lengths: Vec<u64>,
    overhead: OverheadDoc,
}

fn params_doc(spec: &CodeSpec) -> Result<ParamsDoc, CliError> {
    let report = overhead_exact(spec)?;
    let projection_lengths = report.projection_lengths.clone();
    let overhead = OverheadDoc {
        worst_subset_symbols: report.worst_subset_total,
        eps_exact: report.eps_exact.to_string(),
        eps_exact_f64: report.eps_exact.to_f64().unwrap_or(f64::NAN),
        eps_closed_form: report.eps_closed_form.as_ref().map(|r| r.to_string()),
        eps_smooth: report.eps_asymptotic,
        eps_bracket: report
            .bracket
            .as_ref()
            .map(|(lo, hi)| [lo.to_string(), hi.to_string()]),
        mean_worst_projection_len: report.b_prime_avg.to_string(),
    };
    Ok(ParamsDoc {
        construction: container::construction_label(spec.construction()),
        n: spec.n(),
        k: spec.k(),
        b: spec.b(),
        q_e: match spec.construction() {
            Construction::C35 { q_e } => Some(q_e),
            _ => None,
        },
        width: spec.width(),
        sigma: spec.sigma(),
        reconstruction_size: spec.reconstruction_size(),
        tolerance: spec.tolerance(),
        capacity_bytes: spec.capacity(),
        directions: spec
            .directions()
            .iter()
            .map(|d| DirectionDoc { p: d.p(), q: d.q() })
            .collect(),
        projection_lengths,
        overhead,
    })
}

pub fn cmd_gen_params(args: &GenParamsArgs) -> Result<(), CliError> {
    let spec = spec_from_args(&args.code)?;
    let doc = params_doc(&spec)?;
    let mut text = serde_json::to_string_pretty(&doc).expect("parameter document serializes");
    text.push('\n');
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

pub fn cmd_encode(args: &EncodeArgs) -> Result<(), CliError> {
    let spec = spec_from_args(&args.code)?;
    let payload = fs::read(&args.input)?;
    let grid = DataGrid::from_bytes(&payload, spec.b(), spec.k(), spec.width())?;
    let projections = encode(&grid, &spec)?;
    fs::create_dir_all(&args.out)?;
    let mut entries = Vec::with_capacity(projections.len());
    for proj in &projections {
        let header = container::header_for(&spec, payload.len() as u64, proj.index, proj.bins.len());
        let mut body = Vec::with_capacity(proj.bins.len() * spec.width());
        for bin in &proj.bins {
            body.extend_from_slice(bin.as_bytes());
        }
        let name = container::projection_file_name(proj.index);
        write_projection_file(&args.out.join(&name), &header, &body)?;
        entries.push(container::ManifestEntry {
            file: name,
            projection_index: proj.index as u32,
            p: proj.dir.p(),
            q: proj.dir.q(),
            bin_count: proj.bins.len() as u32,
            body_crc32: container::body_crc_hex(&body),
        });
    }
    let manifest = Manifest::for_code(&spec, payload.len() as u64, entries);
    write_manifest(&args.out, &manifest)?;
    println!(
        "encoded {} bytes into {} projection files under {} (any {} recover it)",
        payload.len(),
        projections.len(),
        args.out.display(),
        spec.reconstruction_size()
    );
    Ok(())
}

/// Expands the decode inputs into container paths plus the directory to
/// search for a manifest, if the input was a directory.
fn collect_inputs(inputs: &[PathBuf]) -> Result<(Vec<PathBuf>, Option<PathBuf>), CliError> {
    if inputs.len() == 1 && inputs[0].is_dir() {
        let dir = &inputs[0];
        let mut files: Vec<PathBuf> = fs::read_dir(dir)?
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|ext| ext == "ambx"))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(CliError::Usage(format!(
                "no .ambx files found in {}",
                dir.display()
            )));
        }
        Ok((files, Some(dir.clone())))
    } else {
        Ok((inputs.to_vec(), None))
    }
}

struct LoadedProjection {
    path: PathBuf,
    header: ContainerHeader,
    body: Vec<u8>,
}

fn check_headers_agree(loaded: &[LoadedProjection]) -> Result<(), CliError> {
    let first = &loaded[0].header;
    for lp in &loaded[1..] {
        let h = &lp.header;
        let same = h.construction == first.construction
            && h.n == first.n
            && h.k == first.k
            && h.b == first.b
            && h.q_e == first.q_e
            && h.width == first.width
            && h.payload_len == first.payload_len;
        if !same {
            return Err(CliError::Corrupt(format!(
                "{} describes a different code than {}",
                lp.path.display(),
                loaded[0].path.display()
            )));
        }
    }
    let mut seen = BTreeMap::new();
    for lp in loaded {
        if let Some(prev) = seen.insert(lp.header.projection_index, &lp.path) {
            return Err(CliError::Corrupt(format!(
                "{} and {} both claim projection index {}",
                prev.display(),
                lp.path.display(),
                lp.header.projection_index
            )));
        }
    }
    Ok(())
}

/// Rebuilds the code the containers claim to belong to. Family codes are
/// re-derived and each header direction is checked against the derived set;
/// custom codes take their directions from the manifest when present, with
/// inert placeholders at indices nothing survives for.
fn spec_from_headers(
    loaded: &[LoadedProjection],
    manifest: Option<&Manifest>,
) -> Result<CodeSpec, CliError> {
    let h = &loaded[0].header;
    let n = h.n as usize;
    let k = h.k as usize;
    let b = h.b as usize;
    let width = h.width as usize;
    let construction = container::construction_from_code(h.construction, h.q_e)
        .map_err(CliError::Corrupt)?;
    if let Some(m) = manifest {
        m.check_matches_header(h)?;
    }
    match construction {
        Construction::Custom => {
            let mut dirs: Vec<Option<Direction>> = vec![None; n];
            if let Some(m) = manifest {
                for entry in &m.files {
                    let idx = entry.projection_index as usize;
                    if idx >= n {
                        return Err(CliError::Corrupt(format!(
                            "manifest lists projection index {idx} but the code has n={n}"
                        )));
                    }
                    let dir = Direction::new(entry.p, entry.q)
                        .map_err(|e| CliError::Corrupt(e.to_string()))?;
                    dirs[idx] = Some(dir);
                }
            }
            for lp in loaded {
                let dir = Direction::new(lp.header.p, lp.header.q)
                    .map_err(|e| CliError::Corrupt(e.to_string()))?;
                let slot = &mut dirs[lp.header.projection_index as usize];
                if let Some(existing) = slot {
                    if *existing != dir {
                        return Err(CliError::Corrupt(format!(
                            "{} direction disagrees with the manifest",
                            lp.path.display()
                        )));
                    }
                } else {
                    *slot = Some(dir);
                }
            }
            // Unknown absent directions only need to be distinct placeholders;
            // decoding never touches projections that are not supplied.
            let mut filler = (1i32..).map(|v| Direction::new(v, 1).expect("coprime"));
            let dirs: Vec<Direction> = dirs
                .into_iter()
                .map(|d| d.unwrap_or_else(|| filler.next().expect("endless")))
                .collect();
            let sigma = ambx_core::code_sigma(&dirs, b, k);
            Ok(CodeSpec::from_parts(
                Construction::Custom,
                n,
                k,
                b,
                width,
                dirs,
                sigma,
            ))
        }
        family => {
            let spec = CodeSpec::new(family, n, k, b, width)
                .map_err(|e| CliError::Corrupt(e.to_string()))?;
            for lp in loaded {
                let expected = spec.directions()[lp.header.projection_index as usize];
                if (lp.header.p, lp.header.q) != (expected.p(), expected.q()) {
                    return Err(CliError::Corrupt(format!(
                        "{} carries direction ({},{}) but index {} of this family is {}",
                        lp.path.display(),
                        lp.header.p,
                        lp.header.q,
                        lp.header.projection_index,
                        expected
                    )));
                }
            }
            Ok(spec)
        }
    }
}

fn check_manifest_bodies(
    manifest: &Manifest,
    loaded: &[LoadedProjection],
) -> Result<(), CliError> {
    let by_index: BTreeMap<u32, &container::ManifestEntry> = manifest
        .files
        .iter()
        .map(|e| (e.projection_index, e))
        .collect();
    for lp in loaded {
        let entry = by_index.get(&lp.header.projection_index).ok_or_else(|| {
            CliError::Corrupt(format!(
                "manifest has no entry for projection index {}",
                lp.header.projection_index
            ))
        })?;
        if entry.p != lp.header.p || entry.q != lp.header.q {
            return Err(CliError::Corrupt(format!(
                "{} direction disagrees with the manifest",
                lp.path.display()
            )));
        }
        if entry.bin_count != lp.header.bin_count {
            return Err(CliError::Corrupt(format!(
                "{} bin count disagrees with the manifest",
                lp.path.display()
            )));
        }
        let actual = container::body_crc_hex(&lp.body);
        if actual != entry.body_crc32 {
            return Err(CliError::Corrupt(format!(
                "{} body checksum {} does not match manifest value {}",
                lp.path.display(),
                actual,
                entry.body_crc32
            )));
        }
    }
    Ok(())
}

fn bins_from_body(header: &ContainerHeader, body: &[u8]) -> Vec<ambx_core::SymbolBuf> {
    let width = header.width as usize;
    body.chunks_exact(width)
        .map(|chunk| ambx_core::SymbolBuf::from_bytes(chunk.to_vec()))
        .collect()
}

pub fn cmd_decode(args: &DecodeArgs) -> Result<(), CliError> {
    let (paths, manifest_dir) = collect_inputs(&args.inputs)?;
    let mut loaded = Vec::with_capacity(paths.len());
    for path in paths {
        let (header, body) = read_projection_file(&path)?;
        loaded.push(LoadedProjection { path, header, body });
    }
    check_headers_agree(&loaded)?;
    let manifest = match &manifest_dir {
        Some(dir) => read_manifest(dir)?,
        None => None,
    };
    if let Some(m) = &manifest {
        check_manifest_bodies(m, &loaded)?;
    }
    let spec = spec_from_headers(&loaded, manifest.as_ref())?;
    let payload_len = loaded[0].header.payload_len as usize;
    if payload_len > spec.capacity() {
        return Err(CliError::Corrupt(format!(
            "headers claim a {payload_len} byte payload but the grid holds {}",
            spec.capacity()
        )));
    }
    let projections: Vec<Projection> = loaded
        .iter()
        .map(|lp| Projection {
            index: lp.header.projection_index as usize,
            dir: spec.directions()[lp.header.projection_index as usize],
            bins: bins_from_body(&lp.header, &lp.body),
        })
        .collect();
    let options = DecodeOptions {
        verify_consistency: !args.skip_consistency,
    };
    let output = decode_with(&spec, &projections, options)?;
    match output.report.status {
        DecodeStatus::Success => {
            let grid = output
                .grid
                .to_data_grid()
                .expect("successful decode yields a complete grid");
            fs::write(&args.out, grid.to_bytes(payload_len)?)?;
            println!(
                "recovered {} bytes from {} projections in {} peel steps ({} xor ops)",
                payload_len,
                projections.len(),
                output.report.peel_trace.len(),
                output.report.xor_ops
            );
            Ok(())
        }
        DecodeStatus::Stalled => {
            let survivors: Vec<Direction> = projections.iter().map(|p| p.dir).collect();
            let sum_p: u64 = survivors.iter().map(|d| d.p().unsigned_abs() as u64).sum();
            let sum_q: u64 = survivors.iter().map(|d| d.q().unsigned_abs() as u64).sum();
            let feasible = decodable(&spec, &survivors);
            eprintln!(
                "decode stalled: resolved {} of {} cells, {} unresolved",
                output.report.resolved_count,
                spec.b() * spec.k(),
                output.report.residual_unresolved
            );
            eprintln!(
                "survivors reach sum|p|={sum_p} (rows b={}) and sum|q|={sum_q} (cols k={}); \
                 these projections {} suffice for any payload",
                spec.b(),
                spec.k(),
                if feasible { "should" } else { "cannot" }
            );
            Err(CliError::Stalled(format!(
                "{} of {} cells unresolved",
                output.report.residual_unresolved,
                spec.b() * spec.k()
            )))
        }
    }
}
