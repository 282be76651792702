//! Image and volume ingestion, field serialization, display normalization.
//!
//! Inputs: PGM (`P2`/`P5`, maxval ≤ 255), 8-bit grayscale PNG, and raw voxel
//! volumes (a text line `D H W` followed by `D·H·W` bytes, `x` fastest).
//!
//! Outputs: CSV (one line per grid row, shortest round-trip decimals), raw
//! little-endian `f32` after a one-line `kind dims` header, or 8-bit PGM.
//! Multi-grid fields become named CSV sections (`# horizontal R C`), or one
//! file per grid for the binary formats with a `.h`/`.v` (or `.z`/`.y`/`.x`)
//! suffix appended to the target path.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::{Axis, EdgeField, EdgeField3D, GrayImage, Grid, Grid3, PixelField, VoxelVolume};

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a];

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    GrayImage::from_gray_levels(&decode_gray_levels(&read_bytes(path.as_ref())?)?)
}

/// Decodes PGM or PNG bytes into 8-bit gray levels.
pub fn decode_gray_levels(bytes: &[u8]) -> Result<Grid<u8>> {
    if bytes.starts_with(&PNG_SIGNATURE) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else {
        Err(Error::Unsupported("expected a PGM (P2/P5) or PNG file".into()))
    }
}

struct Tokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format {
                offset: start,
                message: if start >= self.bytes.len() {
                    format!("unexpected end of file, expected {what}")
                } else {
                    format!("expected {what}")
                },
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Format {
                offset: start,
                message: format!("{what} is out of range"),
            })
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Grid<u8>> {
    let binary = match bytes.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        _ => {
            return Err(Error::Format {
                offset: 0,
                message: "missing P2/P5 magic number".into(),
            })
        }
    };
    let mut t = Tokens { bytes, pos: 2 };
    let width = t.number("width")? as usize;
    let height = t.number("height")? as usize;
    let maxval_at = t.pos;
    let maxval = t.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Format {
            offset: maxval_at,
            message: "image has zero size".into(),
        });
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::Unsupported(format!(
            "PGM maxval {maxval}; only 8-bit images (maxval 1..=255) are supported"
        )));
    }
    let rescale = |v: u32, offset: usize| -> Result<u8> {
        if v > maxval {
            return Err(Error::Format {
                offset,
                message: format!("sample {v} exceeds maxval {maxval}"),
            });
        }
        Ok(((v * 255 + maxval / 2) / maxval) as u8)
    };
    let n = width * height;
    let mut samples = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = t.pos + 1;
        let raster = bytes.get(start..start + n).ok_or(Error::Format {
            offset: bytes.len(),
            message: format!("raster truncated: expected {n} bytes after offset {start}"),
        })?;
        for (k, &v) in raster.iter().enumerate() {
            samples.push(rescale(u32::from(v), start + k)?);
        }
    } else {
        for _ in 0..n {
            t.skip_space();
            let at = t.pos;
            let v = t.number("sample")?;
            samples.push(rescale(v, at)?);
        }
    }
    Grid::from_vec(height, width, samples)
}

fn decode_png(bytes: &[u8]) -> Result<Grid<u8>> {
    let png_err = |e: png::DecodingError| Error::Format {
        offset: 0,
        message: format!("PNG: {e}"),
    };
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder.read_info().map_err(png_err)?;
    let info = reader.info();
    if info.color_type != png::ColorType::Grayscale || info.bit_depth != png::BitDepth::Eight {
        return Err(Error::Unsupported(format!(
            "PNG with {:?} color at {:?} bit depth; only 8-bit grayscale is supported",
            info.color_type, info.bit_depth
        )));
    }
    let (width, height) = (info.width as usize, info.height as usize);
    let size = reader.output_buffer_size().ok_or(Error::Format {
        offset: 0,
        message: "PNG image is too large".into(),
    })?;
    let mut buf = vec![0; size];
    let frame = reader.next_frame(&mut buf).map_err(png_err)?;
    let stride = frame.line_size;
    let data = (0..height)
        .flat_map(|r| buf[r * stride..r * stride + width].iter().copied())
        .collect();
    Grid::from_vec(height, width, data)
}

/// Encodes 8-bit gray levels as an 8-bit grayscale PNG.
pub fn encode_png(levels: &Grid<u8>) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, levels.cols() as u32, levels.rows() as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        let err = |e: png::EncodingError| Error::Unsupported(format!("PNG encoding: {e}"));
        let mut writer = enc.write_header().map_err(err)?;
        writer.write_image_data(levels.as_slice()).map_err(err)?;
    }
    Ok(out)
}

pub fn encode_pgm(levels: &Grid<u8>) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", levels.cols(), levels.rows()).into_bytes();
    out.extend_from_slice(levels.as_slice());
    out
}

pub fn read_volume(path: impl AsRef<Path>) -> Result<VoxelVolume> {
    VoxelVolume::from_gray_levels(&decode_volume(&read_bytes(path.as_ref())?)?)
}

pub fn decode_volume(bytes: &[u8]) -> Result<Grid3<u8>> {
    let eol = bytes.iter().position(|&b| b == b'\n').ok_or(Error::Format {
        offset: bytes.len(),
        message: "missing 'D H W' header line".into(),
    })?;
    let header = std::str::from_utf8(&bytes[..eol]).map_err(|e| Error::Format {
        offset: e.valid_up_to(),
        message: "header is not text".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|s| s.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Format {
            offset: 0,
            message: format!("header '{header}' is not three integers"),
        })?;
    let [d, h, w] = dims[..] else {
        return Err(Error::Format {
            offset: 0,
            message: format!("header '{header}' is not 'D H W'"),
        });
    };
    if d == 0 || h == 0 || w == 0 {
        return Err(Error::Format {
            offset: 0,
            message: "volume has zero size".into(),
        });
    }
    let n = d * h * w;
    let payload = &bytes[eol + 1..];
    if payload.len() != n {
        return Err(Error::Format {
            offset: eol + 1 + payload.len().min(n),
            message: format!("expected {n} voxel bytes, found {}", payload.len()),
        });
    }
    Grid3::from_vec([d, h, w], payload.to_vec())
}

pub fn encode_volume(levels: &Grid3<u8>) -> Vec<u8> {
    let [d, h, w] = levels.dims();
    let mut out = format!("{d} {h} {w}\n").into_bytes();
    out.extend_from_slice(levels.as_slice());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Pgm,
    Csv,
    RawF32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Values must already lie in `[0, 255]` (PGM only).
    None,
    /// Linear map of `[min, max]` onto `[0, 255]`; a constant field maps to 128.
    MinMax,
    /// `0 ↦ 128`, `±max|v| ↦ 128 ± 127`.
    SignedSym,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Stdout,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSpec {
    pub format: Format,
    pub normalization: Normalization,
    pub target: Target,
}

#[derive(Debug, Clone, Copy)]
pub enum FieldRef<'a> {
    Pixel(&'a PixelField),
    Edge(&'a EdgeField),
    Edge3d(&'a EdgeField3D),
}

/// One grid of a field, flattened to rows.
struct Section<'a> {
    name: &'static str,
    kind: &'static str,
    dims: Vec<usize>,
    rows: usize,
    cols: usize,
    values: &'a [f64],
}

fn plane<'a>(name: &'static str, kind: &'static str, g: &'a Grid<f64>) -> Section<'a> {
    Section {
        name,
        kind,
        dims: vec![g.rows(), g.cols()],
        rows: g.rows(),
        cols: g.cols(),
        values: g.as_slice(),
    }
}

fn sections(field: FieldRef<'_>) -> Vec<Section<'_>> {
    match field {
        FieldRef::Pixel(g) => vec![plane("pixel", "pixel", g)],
        FieldRef::Edge(e) => vec![plane("h", "edge-h", e.horizontal()), plane("v", "edge-v", e.vertical())],
        FieldRef::Edge3d(e) => Axis::ALL
            .iter()
            .map(|&axis| {
                let g = e.family(axis);
                let d = g.dims();
                let (name, kind) = match axis {
                    Axis::Z => ("z", "edge3d-z"),
                    Axis::Y => ("y", "edge3d-y"),
                    Axis::X => ("x", "edge3d-x"),
                };
                Section {
                    name,
                    kind,
                    dims: d.to_vec(),
                    rows: d[0] * d[1],
                    cols: d[2],
                    values: g.as_slice(),
                }
            })
            .collect(),
    }
}

fn section_title(name: &str) -> &str {
    match name {
        "h" => "horizontal",
        "v" => "vertical",
        other => other,
    }
}

/// Quantizes `values` to gray levels using a range shared across the field.
fn quantizer(all: impl Iterator<Item = f64> + Clone, norm: Normalization) -> Result<impl Fn(f64) -> u8> {
    let (lo, hi) = all
        .clone()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if norm == Normalization::None && (lo < 0.0 || hi > 255.0) {
        return Err(Error::InvalidParameter(format!(
            "values span [{lo}, {hi}]; PGM output outside [0, 255] needs a normalization"
        )));
    }
    let amp = lo.abs().max(hi.abs());
    Ok(move |v: f64| {
        let g = match norm {
            Normalization::None => v,
            Normalization::MinMax if hi > lo => (v - lo) / (hi - lo) * 255.0,
            Normalization::MinMax => 128.0,
            Normalization::SignedSym if amp > 0.0 => 128.0 + 127.0 * v / amp,
            Normalization::SignedSym => 128.0,
        };
        g.round().clamp(0.0, 255.0) as u8
    })
}

/// Quantizes a pixel field to gray levels.
pub fn to_gray_levels(field: &PixelField, norm: Normalization) -> Result<Grid<u8>> {
    let q = quantizer(field.iter().copied(), norm)?;
    Ok(field.map(|&v| q(v)))
}

/// Serialized output: one payload per file, with an optional path suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub suffix: Option<String>,
    pub bytes: Vec<u8>,
}

pub fn encode_field(field: FieldRef<'_>, format: Format, norm: Normalization) -> Result<Vec<Part>> {
    let secs = sections(field);
    let multi = secs.len() > 1;
    match format {
        Format::Csv => {
            let mut text = String::new();
            for s in &secs {
                if multi {
                    let dims: Vec<String> = s.dims.iter().map(|d| d.to_string()).collect();
                    writeln!(text, "# {} {}", section_title(s.name), dims.join(" ")).expect("string");
                }
                for row in s.values.chunks(s.cols.max(1)) {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                    text.push_str(&cells.join(","));
                    text.push('\n');
                }
            }
            Ok(vec![Part {
                suffix: None,
                bytes: text.into_bytes(),
            }])
        }
        Format::RawF32 => Ok(secs
            .iter()
            .map(|s| {
                let dims: Vec<String> = s.dims.iter().map(|d| d.to_string()).collect();
                let mut bytes = format!("{} {}\n", s.kind, dims.join(" ")).into_bytes();
                for &v in s.values {
                    bytes.extend_from_slice(&(v as f32).to_le_bytes());
                }
                Part {
                    suffix: multi.then(|| format!(".{}", s.name)),
                    bytes,
                }
            })
            .collect()),
        Format::Pgm => {
            let q = quantizer(secs.iter().flat_map(|s| s.values.iter().copied()), norm)?;
            secs.iter()
                .map(|s| {
                    let levels = Grid::from_vec(s.rows, s.cols, s.values.iter().map(|&v| q(v)).collect())?;
                    Ok(Part {
                        suffix: multi.then(|| format!(".{}", s.name)),
                        bytes: encode_pgm(&levels),
                    })
                })
                .collect()
        }
    }
}

pub fn write_parts(parts: &[Part], target: &Target) -> Result<()> {
    match target {
        Target::Stdout => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for p in parts {
                lock.write_all(&p.bytes).map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            }
            lock.flush().map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
        Target::File(path) => {
            for p in parts {
                let mut name = path.clone().into_os_string();
                if let Some(s) = &p.suffix {
                    name.push(s);
                }
                let name = PathBuf::from(name);
                fs::write(&name, &p.bytes).map_err(|source| Error::Io { path: name, source })?;
            }
            Ok(())
        }
    }
}

pub fn write_field(field: FieldRef<'_>, spec: &OutputSpec) -> Result<()> {
    write_parts(&encode_field(field, spec.format, spec.normalization)?, &spec.target)
}

/// Parses CSV written by [`encode_field`]: a list of `(section title, grid)`;
/// the title is `None` for an unsectioned pixel field.
pub fn parse_csv(text: &str) -> Result<Vec<(Option<String>, Grid<f64>)>> {
    let mut out: Vec<(Option<String>, Vec<Vec<f64>>)> = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.trim_end();
        if let Some(title) = body.strip_prefix("# ") {
            let name = title.split_whitespace().next().unwrap_or_default().to_string();
            out.push((Some(name), Vec::new()));
        } else if !body.is_empty() {
            if out.is_empty() {
                out.push((None, Vec::new()));
            }
            let row = body
                .split(',')
                .map(|c| {
                    c.trim().parse::<f64>().map_err(|_| Error::Format {
                        offset,
                        message: format!("'{c}' is not a number"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.last_mut().expect("section").1.push(row);
        }
        offset += line.len();
    }
    out.into_iter()
        .map(|(name, rows)| {
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != cols) {
                return Err(Error::Format {
                    offset: 0,
                    message: "ragged CSV rows".into(),
                });
            }
            let n = rows.len();
            Ok((name, Grid::from_vec(n, cols, rows.concat())?))
        })
        .collect()
}
