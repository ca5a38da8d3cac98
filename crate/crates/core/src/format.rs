//! On-disk formats.
//!
//! Signals, text:
//!
//! ```text
//! QSIG v1 <continuum|discrete> <n1> <n2> <l1> <l2>
//! m,n,w,x,y,z          (n1·n2 lines)
//! ```
//!
//! Signals, binary: magic `QSG1`, little-endian `u32 n1, n2`, `f64 l1, l2`,
//! `u8 mode` (0 continuum, 1 discrete), then `n1·n2·4` `f64` in storage order
//! with `(w, x, y, z)` interleaved.
//!
//! Spectra use the binary layout with magic `QSP1` and one extra `u8` after the
//! mode byte flagging the four component spectra, which follow the assembled data
//! in order `G0..G3`.
//!
//! Hermite coefficients, text: `QCOEF v1 <kmax> <lmax>` then `k,l,w,x,y,z` lines.
//!
//! Reals are written with 17 significant digits so text files reload bit-exactly.

use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{QftError, Result};
use crate::grid::{Grid2, GridMode, QSignal, QSpectrum};
use crate::hermite::QCoefficients;
use crate::quaternion::Quaternion;

pub const SIGNAL_TEXT_MAGIC: &str = "QSIG";
pub const SIGNAL_BINARY_MAGIC: &[u8; 4] = b"QSG1";
pub const SPECTRUM_BINARY_MAGIC: &[u8; 4] = b"QSP1";
pub const COEFFICIENTS_MAGIC: &str = "QCOEF";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalFormat {
    Text,
    Binary,
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn mode_byte(mode: GridMode) -> u8 {
    match mode {
        GridMode::Continuum => 0,
        GridMode::PureDiscrete => 1,
    }
}

pub fn write_signal_text<W: Write>(f: &QSignal, out: &mut W) -> io::Result<()> {
    let g = f.grid;
    writeln!(
        out,
        "{SIGNAL_TEXT_MAGIC} v1 {} {} {} {} {}",
        g.mode,
        g.n1,
        g.n2,
        real(g.l1),
        real(g.l2)
    )?;
    for n in 0..g.n2 {
        for m in 0..g.n1 {
            let q = f.at(m, n);
            writeln!(
                out,
                "{m},{n},{},{},{},{}",
                real(q.w),
                real(q.x),
                real(q.y),
                real(q.z)
            )?;
        }
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(tok: &str, line: usize, offset: usize, what: &str) -> Result<T> {
    tok.trim()
        .parse()
        .map_err(|_| QftError::text(line, offset, format!("cannot parse {what} from `{tok}`")))
}

fn grid_from_header(mode: GridMode, n1: usize, n2: usize, l1: f64, l2: f64, line: usize, offset: usize) -> Result<Grid2> {
    if n1 == 0 || n2 == 0 {
        return Err(if line > 0 {
            QftError::text(line, offset, "empty grid")
        } else {
            QftError::binary(offset, "empty grid")
        });
    }
    Grid2::new(mode, n1, n2, l1, l2).map_err(|e| {
        let msg = format!("invalid grid: {e}");
        if line > 0 {
            QftError::text(line, offset, msg)
        } else {
            QftError::binary(offset, msg)
        }
    })
}

pub fn read_signal_text<R: BufRead>(input: R) -> Result<QSignal> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(l) => l?,
        None => return Err(QftError::text(1, 0, "missing header")),
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 7 || toks[0] != SIGNAL_TEXT_MAGIC || toks[1] != "v1" {
        return Err(QftError::text(
            1,
            0,
            format!("expected `{SIGNAL_TEXT_MAGIC} v1 <mode> <n1> <n2> <l1> <l2>`"),
        ));
    }
    let mode: GridMode = toks[2]
        .parse()
        .map_err(|_| QftError::text(1, 0, format!("unknown mode `{}`", toks[2])))?;
    let n1: usize = parse_field(toks[3], 1, 0, "n1")?;
    let n2: usize = parse_field(toks[4], 1, 0, "n2")?;
    let l1: f64 = parse_field(toks[5], 1, 0, "l1")?;
    let l2: f64 = parse_field(toks[6], 1, 0, "l2")?;
    let grid = grid_from_header(mode, n1, n2, l1, l2, 1, 0)?;

    let mut data = vec![Quaternion::ZERO; grid.len()];
    let mut seen = vec![false; grid.len()];
    let mut count = 0usize;
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(QftError::text(lineno, 0, format!("expected 6 fields, found {}", fields.len())));
        }
        let mut offset = 0;
        let mut offsets = [0usize; 6];
        for (k, f) in fields.iter().enumerate() {
            offsets[k] = offset;
            offset += f.len() + 1;
        }
        let m: usize = parse_field(fields[0], lineno, offsets[0], "m")?;
        let n: usize = parse_field(fields[1], lineno, offsets[1], "n")?;
        if m >= n1 || n >= n2 {
            return Err(QftError::text(lineno, 0, format!("index ({m}, {n}) outside {n1}x{n2}")));
        }
        let mut c = [0.0; 4];
        for r in 0..4 {
            c[r] = parse_field(fields[2 + r], lineno, offsets[2 + r], "component")?;
        }
        let idx = grid.index(m, n);
        if seen[idx] {
            return Err(QftError::text(lineno, 0, format!("duplicate sample ({m}, {n})")));
        }
        seen[idx] = true;
        data[idx] = Quaternion::from_array(c);
        count += 1;
    }
    if count != grid.len() {
        return Err(QftError::text(
            count + 2,
            0,
            format!("truncated: {count} of {} samples present", grid.len()),
        ));
    }
    QSignal::new(grid, data)
}

fn put_header(buf: &mut Vec<u8>, magic: &[u8; 4], g: &Grid2) {
    buf.extend_from_slice(magic);
    buf.extend_from_slice(&(g.n1 as u32).to_le_bytes());
    buf.extend_from_slice(&(g.n2 as u32).to_le_bytes());
    buf.extend_from_slice(&g.l1.to_le_bytes());
    buf.extend_from_slice(&g.l2.to_le_bytes());
    buf.push(mode_byte(g.mode));
}

fn put_values(buf: &mut Vec<u8>, data: &[Quaternion]) {
    for q in data {
        for v in q.to_array() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
}

pub fn encode_signal_binary(f: &QSignal) -> Vec<u8> {
    let mut buf = Vec::with_capacity(29 + 32 * f.data.len());
    put_header(&mut buf, SIGNAL_BINARY_MAGIC, &f.grid);
    put_values(&mut buf, &f.data);
    buf
}

pub fn encode_spectrum_binary(s: &QSpectrum) -> Vec<u8> {
    let bands = if s.components.is_some() { 5 } else { 1 };
    let mut buf = Vec::with_capacity(30 + 32 * bands * s.data.len());
    put_header(&mut buf, SPECTRUM_BINARY_MAGIC, &s.grid);
    buf.push(u8::from(s.components.is_some()));
    put_values(&mut buf, &s.data);
    if let Some(c) = &s.components {
        for g in c {
            put_values(&mut buf, g);
        }
    }
    buf
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(QftError::binary(
                self.pos,
                format!("truncated while reading {what}"),
            ));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn quaternions(&mut self, count: usize, what: &str) -> Result<Vec<Quaternion>> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut c = [0.0; 4];
            for v in &mut c {
                *v = self.f64(what)?;
            }
            out.push(Quaternion::from_array(c));
        }
        Ok(out)
    }

    fn header(&mut self, magic: &[u8; 4]) -> Result<Grid2> {
        let got = self.take(4, "magic")?;
        if got != magic {
            return Err(QftError::binary(0, format!("bad magic {got:?}")));
        }
        let n1 = self.u32("n1")? as usize;
        let n2 = self.u32("n2")? as usize;
        let l1 = self.f64("l1")?;
        let l2 = self.f64("l2")?;
        let at = self.pos;
        let mode = match self.u8("mode")? {
            0 => GridMode::Continuum,
            1 => GridMode::PureDiscrete,
            other => return Err(QftError::binary(at, format!("unknown mode byte {other}"))),
        };
        grid_from_header(mode, n1, n2, l1, l2, 0, at)
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(QftError::binary(
                self.pos,
                format!("{} trailing bytes", self.bytes.len() - self.pos),
            ));
        }
        Ok(())
    }
}

pub fn decode_signal_binary(bytes: &[u8]) -> Result<QSignal> {
    let mut cur = Cursor { bytes, pos: 0 };
    let grid = cur.header(SIGNAL_BINARY_MAGIC)?;
    let data = cur.quaternions(grid.len(), "samples")?;
    cur.finish()?;
    QSignal::new(grid, data)
}

pub fn decode_spectrum_binary(bytes: &[u8]) -> Result<QSpectrum> {
    let mut cur = Cursor { bytes, pos: 0 };
    let grid = cur.header(SPECTRUM_BINARY_MAGIC)?;
    let at = cur.pos;
    let has_components = match cur.u8("component flag")? {
        0 => false,
        1 => true,
        other => return Err(QftError::binary(at, format!("bad component flag {other}"))),
    };
    let data = cur.quaternions(grid.len(), "spectrum")?;
    let components = if has_components {
        let mut bands = Vec::with_capacity(4);
        for _ in 0..4 {
            bands.push(cur.quaternions(grid.len(), "component spectrum")?);
        }
        let arr: [Vec<Quaternion>; 4] = bands.try_into().expect("four bands");
        Some(arr)
    } else {
        None
    };
    cur.finish()?;
    QSpectrum::new(grid, data, components)
}

pub fn save_signal(f: &QSignal, path: &Path, format: SignalFormat) -> Result<()> {
    match format {
        SignalFormat::Text => {
            let mut w = BufWriter::new(fs::File::create(path)?);
            write_signal_text(f, &mut w)?;
            w.flush()?;
        }
        SignalFormat::Binary => fs::write(path, encode_signal_binary(f))?,
    }
    Ok(())
}

/// Loads a signal, picking the format from the leading magic bytes.
pub fn load_signal(path: &Path) -> Result<QSignal> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(SIGNAL_BINARY_MAGIC) {
        decode_signal_binary(&bytes)
    } else {
        read_signal_text(BufReader::new(bytes.as_slice()))
    }
}

pub fn save_spectrum(s: &QSpectrum, path: &Path) -> Result<()> {
    fs::write(path, encode_spectrum_binary(s))?;
    Ok(())
}

pub fn load_spectrum(path: &Path) -> Result<QSpectrum> {
    decode_spectrum_binary(&fs::read(path)?)
}

pub fn write_coefficients<W: Write>(c: &QCoefficients, out: &mut W) -> io::Result<()> {
    writeln!(out, "{COEFFICIENTS_MAGIC} v1 {} {}", c.kmax, c.lmax)?;
    for (k, l, q) in c.iter() {
        writeln!(
            out,
            "{k},{l},{},{},{},{}",
            real(q.w),
            real(q.x),
            real(q.y),
            real(q.z)
        )?;
    }
    Ok(())
}

pub fn read_coefficients<R: BufRead>(input: R) -> Result<QCoefficients> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(l) => l?,
        None => return Err(QftError::text(1, 0, "missing header")),
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != COEFFICIENTS_MAGIC || toks[1] != "v1" {
        return Err(QftError::text(1, 0, format!("expected `{COEFFICIENTS_MAGIC} v1 <kmax> <lmax>`")));
    }
    let kmax: usize = parse_field(toks[2], 1, 0, "kmax")?;
    let lmax: usize = parse_field(toks[3], 1, 0, "lmax")?;
    let mut c = QCoefficients::zeros(kmax, lmax).map_err(|e| QftError::text(1, 0, e.to_string()))?;
    let mut count = 0;
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(QftError::text(lineno, 0, format!("expected 6 fields, found {}", fields.len())));
        }
        let k: usize = parse_field(fields[0], lineno, 0, "k")?;
        let l: usize = parse_field(fields[1], lineno, 0, "l")?;
        if k > kmax || l > lmax {
            return Err(QftError::text(lineno, 0, format!("index ({k}, {l}) outside truncation")));
        }
        let mut q = [0.0; 4];
        for r in 0..4 {
            q[r] = parse_field(fields[2 + r], lineno, 0, "component")?;
        }
        c.set(k, l, Quaternion::from_array(q));
        count += 1;
    }
    if count != c.a.len() {
        return Err(QftError::text(count + 2, 0, format!("truncated: {count} of {} coefficients", c.a.len())));
    }
    Ok(c)
}
