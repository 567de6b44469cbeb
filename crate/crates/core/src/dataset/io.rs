//! On-disk dataset format.
//!
//! A dataset is a binary sample file plus a JSON manifest file beside it
//! (same stem, `.json` extension).
//!
//! Binary layout, all integers and floats little-endian:
//!
//! ```text
//! magic        8 bytes   "RISFDET\0" (detection) or "RISFLOC\0" (localization)
//! version      u32
//! count        u64
//! records      count x (body, crc32 of body as u32)
//! trailer      u64       CRC-64/XZ of every preceding byte
//! ```
//!
//! Detection body: `y` (M x (f32 re, f32 im)), element statuses (N bytes,
//! 1 = working), SA statuses (K bytes), position (3 x f64), snr_db (f64).
//!
//! Localization body: `y` (M x 2 f32), complete `y_r` (N x 2 f32), element
//! statuses (N bytes), position (3 x f64), snr_db (f64).
//!
//! The per-record CRC is CRC-32/ISO-HDLC (zlib's `crc32`). Element order is
//! the elevation-major order of [`crate::channelgeom`].

use std::fs;
use std::path::{Path, PathBuf};

use crc::{Crc, CRC_32_ISO_HDLC, CRC_64_XZ};
use num_complex::Complex32;
use serde::{Deserialize, Serialize};

use super::generate::{DetectionSample, LocalizationSample};
use super::manifest::{DatasetKind, DatasetManifest, FORMAT_VERSION};
use crate::channelgeom::Position3D;
use crate::error::{Error, Result};
use crate::fault::{FaultStatusVector, SaStatusVector};

const RECORD_CRC: Crc<u32> = Crc::<u32>::new(&CRC_32_ISO_HDLC);
const FILE_CRC: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

pub const HEADER_LEN: usize = 8 + 4 + 8;
pub const TRAILER_LEN: usize = 8;

/// Array sizes that fix the record width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecordDims {
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl RecordDims {
    pub fn of(manifest: &DatasetManifest) -> Self {
        Self {
            m: manifest.scene.bs_array.len(),
            n: manifest.scene.ris_array.len(),
            k: manifest.sa_count,
        }
    }
}

pub trait Record: Sized {
    const MAGIC: [u8; 8];
    const KIND: DatasetKind;

    /// Body length in bytes, excluding the record CRC.
    fn body_len(dims: RecordDims) -> usize;
    fn encode(&self, dims: RecordDims, out: &mut Vec<u8>) -> Result<()>;
    fn decode(dims: RecordDims, body: &[u8]) -> Result<Self>;
}

fn put_complex(out: &mut Vec<u8>, v: &[Complex32]) {
    for c in v {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
}

fn put_tail(out: &mut Vec<u8>, p: &Position3D, snr_db: f64) {
    for v in [p.x, p.y, p.z, snr_db] {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::dim(expected, got, what));
    }
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize) -> &'a [u8] {
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        s
    }

    fn f32(&mut self) -> f32 {
        f32::from_le_bytes(self.take(4).try_into().expect("4 bytes"))
    }

    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take(8).try_into().expect("8 bytes"))
    }

    fn complex(&mut self, n: usize) -> Vec<Complex32> {
        (0..n)
            .map(|_| {
                let re = self.f32();
                Complex32::new(re, self.f32())
            })
            .collect()
    }

    fn tail(&mut self) -> (Position3D, f64) {
        let p = Position3D::new(self.f64(), self.f64(), self.f64());
        (p, self.f64())
    }
}

impl Record for DetectionSample {
    const MAGIC: [u8; 8] = *b"RISFDET\0";
    const KIND: DatasetKind = DatasetKind::Detection;

    fn body_len(d: RecordDims) -> usize {
        8 * d.m + d.n + d.k + 32
    }

    fn encode(&self, d: RecordDims, out: &mut Vec<u8>) -> Result<()> {
        check_len("bs signal length", d.m, self.bs_signal.len())?;
        check_len("element status length", d.n, self.element_statuses.len())?;
        check_len("SA status length", d.k, self.sa_statuses.len())?;
        put_complex(out, &self.bs_signal);
        out.extend(self.element_statuses.to_bytes());
        out.extend(self.sa_statuses.to_bytes());
        put_tail(out, &self.mu_position, self.snr_db);
        Ok(())
    }

    fn decode(d: RecordDims, body: &[u8]) -> Result<Self> {
        let mut r = Reader::new(body);
        let bs_signal = r.complex(d.m);
        let element_statuses = FaultStatusVector::from_bytes(r.take(d.n))?;
        let sa_statuses = SaStatusVector::from_bytes(r.take(d.k))?;
        let (mu_position, snr_db) = r.tail();
        Ok(Self {
            bs_signal,
            element_statuses,
            sa_statuses,
            mu_position,
            snr_db,
        })
    }
}

impl Record for LocalizationSample {
    const MAGIC: [u8; 8] = *b"RISFLOC\0";
    const KIND: DatasetKind = DatasetKind::Localization;

    fn body_len(d: RecordDims) -> usize {
        8 * d.m + 8 * d.n + d.n + 32
    }

    fn encode(&self, d: RecordDims, out: &mut Vec<u8>) -> Result<()> {
        check_len("bs signal length", d.m, self.bs_signal.len())?;
        check_len("ris signal length", d.n, self.ris_signal_complete.len())?;
        check_len("element status length", d.n, self.element_statuses.len())?;
        put_complex(out, &self.bs_signal);
        put_complex(out, &self.ris_signal_complete);
        out.extend(self.element_statuses.to_bytes());
        put_tail(out, &self.mu_position, self.snr_db);
        Ok(())
    }

    fn decode(d: RecordDims, body: &[u8]) -> Result<Self> {
        let mut r = Reader::new(body);
        let bs_signal = r.complex(d.m);
        let ris_signal_complete = r.complex(d.n);
        let element_statuses = FaultStatusVector::from_bytes(r.take(d.n))?;
        let (mu_position, snr_db) = r.tail();
        Ok(Self {
            bs_signal,
            ris_signal_complete,
            element_statuses,
            mu_position,
            snr_db,
        })
    }
}

/// One field of a record body, for readers in other languages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldLayout {
    pub name: String,
    /// Byte offset from the start of the record body.
    pub offset: usize,
    /// Element type: `complex64` (two f32), `u8` or `f64`.
    pub dtype: String,
    pub count: usize,
}

/// Field-by-field layout of one record; the record CRC follows the last field.
pub fn record_layout(kind: DatasetKind, dims: RecordDims) -> Vec<FieldLayout> {
    let fields: Vec<(&str, &str, usize, usize)> = match kind {
        DatasetKind::Detection => vec![
            ("bs_signal", "complex64", 8 * dims.m, dims.m),
            ("element_statuses", "u8", dims.n, dims.n),
            ("sa_statuses", "u8", dims.k, dims.k),
            ("mu_position", "f64", 24, 3),
            ("snr_db", "f64", 8, 1),
        ],
        DatasetKind::Localization => vec![
            ("bs_signal", "complex64", 8 * dims.m, dims.m),
            ("ris_signal_complete", "complex64", 8 * dims.n, dims.n),
            ("element_statuses", "u8", dims.n, dims.n),
            ("mu_position", "f64", 24, 3),
            ("snr_db", "f64", 8, 1),
        ],
    };
    let mut offset = 0;
    fields
        .into_iter()
        .map(|(name, dtype, bytes, count)| {
            let f = FieldLayout {
                name: name.into(),
                offset,
                dtype: dtype.into(),
                count,
            };
            offset += bytes;
            f
        })
        .collect()
}

/// Contents of the JSON file written beside the binary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub manifest: DatasetManifest,
    pub data_file: String,
    pub record_count: u64,
    /// File-level CRC-64/XZ trailer, 16 lowercase hex digits.
    pub checksum: String,
    /// Indices into the generated dataset when this file holds a subset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_indices: Option<Vec<u64>>,
}

/// A dataset read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetFile<R> {
    pub manifest_file: ManifestFile,
    pub samples: Vec<R>,
}

impl<R> DatasetFile<R> {
    pub fn manifest(&self) -> &DatasetManifest {
        &self.manifest_file.manifest
    }

    pub fn checksum(&self) -> &str {
        &self.manifest_file.checksum
    }

    /// Generation index of each stored record.
    pub fn source_indices(&self) -> Vec<u64> {
        match &self.manifest_file.source_indices {
            Some(ix) => ix.clone(),
            None => (0..self.samples.len() as u64).collect(),
        }
    }
}

pub fn checksum_hex(checksum: u64) -> String {
    format!("{checksum:016x}")
}

/// Path of the manifest belonging to a binary dataset file.
pub fn manifest_path(data_path: &Path) -> PathBuf {
    data_path.with_extension("json")
}

/// Serializes the binary file in memory; returns the bytes and the file checksum.
pub fn encode_dataset<R: Record>(manifest: &DatasetManifest, samples: &[R]) -> Result<(Vec<u8>, u64)> {
    if manifest.kind != R::KIND {
        return Err(Error::InvalidManifest(format!(
            "manifest kind {:?} does not match record kind {:?}",
            manifest.kind,
            R::KIND
        )));
    }
    let dims = RecordDims::of(manifest);
    let body_len = R::body_len(dims);
    let mut out = Vec::with_capacity(HEADER_LEN + samples.len() * (body_len + 4) + TRAILER_LEN);
    out.extend_from_slice(&R::MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(samples.len() as u64).to_le_bytes());
    for s in samples {
        let start = out.len();
        s.encode(dims, &mut out)?;
        debug_assert_eq!(out.len() - start, body_len);
        let crc = RECORD_CRC.checksum(&out[start..]);
        out.extend_from_slice(&crc.to_le_bytes());
    }
    let checksum = FILE_CRC.checksum(&out);
    out.extend_from_slice(&checksum.to_le_bytes());
    Ok((out, checksum))
}

fn write_files(path: &Path, bytes: &[u8], manifest_file: &ManifestFile) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let mpath = manifest_path(path);
    let json = serde_json::to_string_pretty(manifest_file)?;
    fs::write(&mpath, json).map_err(|e| Error::io(mpath, e))?;
    Ok(())
}

/// Writes `samples` and their manifest; returns the file checksum.
pub fn write_dataset<R: Record>(path: &Path, manifest: &DatasetManifest, samples: &[R]) -> Result<u64> {
    write_dataset_subset(path, manifest, samples, None)
}

/// Like [`write_dataset`], recording which generated indices the records came from.
pub fn write_dataset_subset<R: Record>(
    path: &Path,
    manifest: &DatasetManifest,
    samples: &[R],
    source_indices: Option<Vec<u64>>,
) -> Result<u64> {
    if let Some(ix) = &source_indices {
        check_len("source index count", samples.len(), ix.len())?;
    }
    let (bytes, checksum) = encode_dataset(manifest, samples)?;
    let manifest_file = ManifestFile {
        manifest: manifest.clone(),
        data_file: path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default(),
        record_count: samples.len() as u64,
        checksum: checksum_hex(checksum),
        source_indices,
    };
    write_files(path, &bytes, &manifest_file)?;
    Ok(checksum)
}

pub fn read_manifest(data_path: &Path) -> Result<ManifestFile> {
    let mpath = manifest_path(data_path);
    let text = fs::read_to_string(&mpath).map_err(|e| Error::io(&mpath, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Decodes a binary dataset; every integrity check runs before any record is decoded.
pub fn decode_dataset<R: Record>(dims: RecordDims, bytes: &[u8]) -> Result<(Vec<R>, u64)> {
    if bytes.len() < HEADER_LEN + TRAILER_LEN {
        return Err(Error::Truncated {
            expected: (HEADER_LEN + TRAILER_LEN) as u64,
            found: bytes.len() as u64,
        });
    }
    if bytes[..8] != R::MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &bytes[..8])));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let count = u64::from_le_bytes(bytes[12..20].try_into().expect("8 bytes"));
    let stride = R::body_len(dims) + 4;
    let expected = (stride as u128) * (count as u128) + (HEADER_LEN + TRAILER_LEN) as u128;
    let found = bytes.len() as u128;
    if found < expected {
        return Err(Error::Truncated {
            expected: expected.min(u64::MAX as u128) as u64,
            found: found as u64,
        });
    }
    if found > expected {
        return Err(Error::Format(format!("{} unexpected trailing bytes", found - expected)));
    }
    let split = bytes.len() - TRAILER_LEN;
    let stored = u64::from_le_bytes(bytes[split..].try_into().expect("8 bytes"));
    let actual = FILE_CRC.checksum(&bytes[..split]);
    if stored != actual {
        return Err(Error::Checksum(format!(
            "file checksum {} does not match contents {}",
            checksum_hex(stored),
            checksum_hex(actual)
        )));
    }
    let body_len = stride - 4;
    let mut samples = Vec::with_capacity(count as usize);
    for (i, rec) in bytes[HEADER_LEN..split].chunks_exact(stride).enumerate() {
        let (body, crc) = rec.split_at(body_len);
        let crc = u32::from_le_bytes(crc.try_into().expect("4 bytes"));
        if RECORD_CRC.checksum(body) != crc {
            return Err(Error::Checksum(format!("record {i} checksum mismatch")));
        }
        samples.push(R::decode(dims, body)?);
    }
    Ok((samples, stored))
}

/// Reads a dataset and its manifest.
pub fn read_dataset<R: Record>(path: &Path) -> Result<DatasetFile<R>> {
    let manifest_file = read_manifest(path)?;
    let manifest = &manifest_file.manifest;
    if manifest.format_version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: manifest.format_version,
            expected: FORMAT_VERSION,
        });
    }
    if manifest.kind != R::KIND {
        return Err(Error::InvalidManifest(format!(
            "{} holds a {:?} dataset, expected {:?}",
            path.display(),
            manifest.kind,
            R::KIND
        )));
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (samples, checksum) = decode_dataset::<R>(RecordDims::of(manifest), &bytes)?;
    if checksum_hex(checksum) != manifest_file.checksum {
        return Err(Error::Checksum(format!(
            "manifest checksum {} does not match data file {}",
            manifest_file.checksum,
            checksum_hex(checksum)
        )));
    }
    if samples.len() as u64 != manifest_file.record_count {
        return Err(Error::Format(format!(
            "manifest lists {} records, file holds {}",
            manifest_file.record_count,
            samples.len()
        )));
    }
    Ok(DatasetFile { manifest_file, samples })
}

/// File-level checksum of a dataset, as stored in its manifest.
pub fn dataset_checksum(path: &Path) -> Result<String> {
    Ok(read_manifest(path)?.checksum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::generate::{gen_detection_dataset, gen_localization_dataset};

    fn det_manifest(count: u64) -> DatasetManifest {
        DatasetManifest {
            sample_count: count,
            ..DatasetManifest::detection_default(11)
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let m = det_manifest(40);
        let samples = gen_detection_dataset(&m).unwrap();
        let path = dir.path().join("d.bin");
        let sum = write_dataset(&path, &m, &samples).unwrap();
        let back = read_dataset::<DetectionSample>(&path).unwrap();
        assert_eq!(back.samples, samples);
        assert_eq!(back.manifest(), &m);
        assert_eq!(back.checksum(), checksum_hex(sum));

        let lm = DatasetManifest {
            sample_count: 25,
            ..DatasetManifest::localization_default(4)
        };
        let ls = gen_localization_dataset(&lm).unwrap();
        let lpath = dir.path().join("l.bin");
        write_dataset(&lpath, &lm, &ls).unwrap();
        assert_eq!(read_dataset::<LocalizationSample>(&lpath).unwrap().samples, ls);
        assert!(read_dataset::<DetectionSample>(&lpath).is_err());
    }

    #[test]
    fn corrupted_trailer_fails_checksum() {
        let m = det_manifest(5);
        let (mut bytes, _) = encode_dataset(&m, &gen_detection_dataset(&m).unwrap()).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 0xff;
        assert!(matches!(decode_dataset::<DetectionSample>(RecordDims::of(&m), &bytes), Err(Error::Checksum(_))));
    }

    #[test]
    fn corrupted_record_fails_checksum() {
        let m = det_manifest(5);
        let (mut bytes, _) = encode_dataset(&m, &gen_detection_dataset(&m).unwrap()).unwrap();
        bytes[HEADER_LEN + 3] ^= 0x01;
        assert!(matches!(decode_dataset::<DetectionSample>(RecordDims::of(&m), &bytes), Err(Error::Checksum(_))));
    }

    #[test]
    fn truncation_detected() {
        let m = det_manifest(5);
        let (bytes, _) = encode_dataset(&m, &gen_detection_dataset(&m).unwrap()).unwrap();
        let cut = &bytes[..bytes.len() - 20];
        assert!(matches!(decode_dataset::<DetectionSample>(RecordDims::of(&m), cut), Err(Error::Truncated { .. })));
        assert!(matches!(decode_dataset::<DetectionSample>(RecordDims::of(&m), &bytes[..10]), Err(Error::Truncated { .. })));
    }

    #[test]
    fn foreign_version_rejected_before_records() {
        let m = det_manifest(5);
        let (mut bytes, _) = encode_dataset(&m, &gen_detection_dataset(&m).unwrap()).unwrap();
        bytes[8..12].copy_from_slice(&7u32.to_le_bytes());
        // also truncate: the version check must win
        bytes.truncate(40);
        assert!(matches!(
            decode_dataset::<DetectionSample>(RecordDims::of(&m), &bytes),
            Err(Error::VersionMismatch { found: 7, .. })
        ));
    }

    #[test]
    fn layout_matches_encoder() {
        let m = DatasetManifest {
            sample_count: 3,
            ..DatasetManifest::localization_default(5)
        };
        let dims = RecordDims::of(&m);
        let samples = gen_localization_dataset(&m).unwrap();
        let layout = record_layout(DatasetKind::Localization, dims);
        let last = layout.last().unwrap();
        assert_eq!(last.offset + 8, LocalizationSample::body_len(dims));
        let mut body = Vec::new();
        samples[1].encode(dims, &mut body).unwrap();
        let field = |name: &str| layout.iter().find(|f| f.name == name).unwrap().offset;
        let yr = field("ris_signal_complete") + 8 * 4;
        assert_eq!(f32::from_le_bytes(body[yr..yr + 4].try_into().unwrap()), samples[1].ris_signal_complete[4].re);
        let st = field("element_statuses") + 10;
        assert_eq!(body[st] == 1, samples[1].element_statuses.is_healthy(10));
        let z = field("mu_position") + 16;
        assert_eq!(f64::from_le_bytes(body[z..z + 8].try_into().unwrap()), samples[1].mu_position.z);
        let det = record_layout(DatasetKind::Detection, dims);
        assert_eq!(det.last().unwrap().offset + 8, DetectionSample::body_len(dims));
    }

    #[test]
    fn header_layout() {
        let m = det_manifest(2);
        let (bytes, sum) = encode_dataset(&m, &gen_detection_dataset(&m).unwrap()).unwrap();
        assert_eq!(&bytes[..8], b"RISFDET\0");
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 2);
        let rec = 8 * 16 + 81 + 9 + 32 + 4;
        assert_eq!(bytes.len(), HEADER_LEN + 2 * rec + TRAILER_LEN);
        assert_eq!(u64::from_le_bytes(bytes[bytes.len() - 8..].try_into().unwrap()), sum);
    }
}
