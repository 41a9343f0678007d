//! Binary cache files for residue sets.
//!
//! Layout: magic `MZXN`, one format-version byte, the exponent as a
//! little-endian u32, then ceil(2^n/8) payload bytes with bit r at byte
//! r>>3, position r&7 (LSB-first). Writes land in a temp file next to the
//! target and are renamed into place, so readers never see a partial file.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sieve::ResidueSet;

pub const MAGIC: [u8; 4] = *b"MZXN";
pub const FORMAT_VERSION: u8 = 1;
const HEADER_LEN: usize = 9;

/// Writes the set atomically to `path`, creating parent directories.
pub fn write_set(path: &Path, set: &ResidueSet) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&MAGIC)?;
    tmp.write_all(&[FORMAT_VERSION])?;
    tmp.write_all(&set.exponent().to_le_bytes())?;
    tmp.write_all(&set.to_le_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Reads and strictly validates a cache file: magic, version, exponent
/// range, exact payload length, clean padding bits.
pub fn read_set(path: &Path) -> Result<ResidueSet> {
    let data = fs::read(path)?;
    if data.len() < HEADER_LEN {
        return Err(Error::MalformedCache(
            "file is shorter than the 9-byte header".into(),
        ));
    }
    if data[..4] != MAGIC {
        return Err(Error::MalformedCache("bad magic; not an MZXN file".into()));
    }
    if data[4] != FORMAT_VERSION {
        return Err(Error::MalformedCache(format!(
            "unsupported format version {}",
            data[4]
        )));
    }
    let exponent = u32::from_le_bytes([data[5], data[6], data[7], data[8]]);
    ResidueSet::from_le_bytes(exponent, &data[HEADER_LEN..])
}

/// Conventional file name for the cached X_n at exponent `n`.
pub fn xn_file_name(n: u32) -> String {
    format!("x{n}.mzxn")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::compute_xn;

    #[test]
    fn round_trips_bit_identically() {
        let dir = tempfile::tempdir().unwrap();
        for n in [1u32, 3, 10] {
            let set = compute_xn(n, 24).unwrap();
            let path = dir.path().join(xn_file_name(n));
            write_set(&path, &set).unwrap();
            assert_eq!(read_set(&path).unwrap(), set, "n={n}");
        }
    }

    #[test]
    fn x3_file_layout_is_pinned() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x3.mzxn");
        write_set(&path, &compute_xn(3, 24).unwrap()).unwrap();
        let data = fs::read(&path).unwrap();
        // "MZXN", version 1, exponent 3 LE, payload bits {0,1,3,6} = 0x4b
        assert_eq!(data, vec![0x4d, 0x5a, 0x58, 0x4e, 1, 3, 0, 0, 0, 0x4b]);
    }

    #[test]
    fn creates_missing_directories() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b/x1.mzxn");
        write_set(&path, &compute_xn(1, 24).unwrap()).unwrap();
        assert!(path.is_file());
    }

    #[test]
    fn rejects_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("x3.mzxn");
        write_set(&good, &compute_xn(3, 24).unwrap()).unwrap();
        let bytes = fs::read(&good).unwrap();

        let check = |name: &str, data: &[u8]| {
            let p = dir.path().join(name);
            fs::write(&p, data).unwrap();
            assert!(
                matches!(read_set(&p), Err(Error::MalformedCache(_))),
                "{name} should be rejected"
            );
        };

        check("short.mzxn", &bytes[..5]);
        let mut bad_magic = bytes.clone();
        bad_magic[0] = b'Q';
        check("magic.mzxn", &bad_magic);
        let mut bad_version = bytes.clone();
        bad_version[4] = 9;
        check("version.mzxn", &bad_version);
        let mut trailing = bytes.clone();
        trailing.push(0);
        check("trailing.mzxn", &trailing);
        let mut truncated = bytes.clone();
        truncated.pop();
        check("truncated.mzxn", &truncated);
        let mut zero_exp = bytes.clone();
        zero_exp[5] = 0;
        check("zeroexp.mzxn", &zero_exp);

        // n=1 payload with a padding bit beyond 2^1 set
        let dirty = [0x4d, 0x5a, 0x58, 0x4e, 1, 1, 0, 0, 0, 0b0000_0101];
        check("padding.mzxn", &dirty);

        assert!(matches!(
            read_set(&dir.path().join("absent.mzxn")),
            Err(Error::Io(_))
        ));
    }
}
