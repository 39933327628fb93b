use std::fmt::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Format {
    Xyz,
    #[default]
    ExtendedXyz,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xyz" => Ok(Format::Xyz),
            "extxyz" | "extended-xyz" | "exyz" => Ok(Format::ExtendedXyz),
            _ => Err(Error::InvalidParameter(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Frame {
    pub positions: Vec<Vec3>,
    /// Rows are the periodic cell vectors.
    pub cell: Option<[Vec3; 3]>,
    pub species: Vec<String>,
}

impl Frame {
    pub fn new(positions: Vec<Vec3>, cell: Option<[Vec3; 3]>, species: Vec<String>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidParameter("frame has no particles".into()));
        }
        if let Some(i) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(format!("particle {i} has a non-finite coordinate")));
        }
        if !species.is_empty() && species.len() != positions.len() {
            return Err(Error::InvalidParameter("one species label per particle required".into()));
        }
        if let Some(c) = &cell {
            let vol = c[0].dot(c[1].cross(c[2])).abs();
            let scale = c[0].norm() * c[1].norm() * c[2].norm();
            if !(vol > 1e-12 * scale) {
                return Err(Error::Degenerate("periodic cell is singular".into()));
            }
        }
        Ok(Frame {
            positions,
            cell,
            species,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn species_of(&self, i: usize) -> &str {
        self.species.get(i).map_or("X", String::as_str)
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Value of `key=...` in an extended-xyz comment line, quotes removed.
fn comment_value<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    let mut rest = comment;
    while let Some(pos) = rest.find('=') {
        let name = rest[..pos].split_whitespace().last().unwrap_or("");
        let after = &rest[pos + 1..];
        let (value, tail) = if let Some(q) = after.strip_prefix('"') {
            let end = q.find('"')?;
            (&q[..end], &q[end + 1..])
        } else {
            let end = after.find(char::is_whitespace).unwrap_or(after.len());
            (&after[..end], &after[end..])
        };
        if name.eq_ignore_ascii_case(key) {
            return Some(value);
        }
        rest = tail;
    }
    None
}

/// Column offsets of species and positions from a `Properties=` spec.
fn columns(props: Option<&str>) -> std::result::Result<(Option<usize>, usize), String> {
    let Some(props) = props else {
        return Ok((Some(0), 1));
    };
    let fields: Vec<&str> = props.split(':').collect();
    if fields.len() % 3 != 0 {
        return Err(format!("malformed Properties {props:?}"));
    }
    let (mut col, mut species, mut pos) = (0, None, None);
    for f in fields.chunks(3) {
        let width: usize = f[2].parse().map_err(|_| format!("bad column count in {props:?}"))?;
        match f[0].to_ascii_lowercase().as_str() {
            "species" => species = Some(col),
            "pos" if width == 3 => pos = Some(col),
            _ => {}
        }
        col += width;
    }
    Ok((species, pos.ok_or("Properties lacks pos:R:3")?))
}

/// Parses every frame of XYZ or extended-XYZ text.
pub fn parse_frames(text: &str, path: &Path) -> Result<Vec<Frame>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut frames = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if lines[i].trim().is_empty() {
            i += 1;
            continue;
        }
        let n: usize = lines[i]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, i + 1, format!("expected particle count, found {:?}", lines[i].trim())))?;
        if n == 0 {
            return Err(parse_err(path, i + 1, "frame has no particles"));
        }
        let comment = *lines
            .get(i + 1)
            .ok_or_else(|| parse_err(path, i + 2, "missing comment line"))?;
        let cell = match comment_value(comment, "Lattice") {
            None => None,
            Some(v) => {
                let x: Vec<f64> = v
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| parse_err(path, i + 2, "non-numeric Lattice entry"))?;
                if x.len() != 9 {
                    return Err(parse_err(path, i + 2, format!("Lattice needs 9 numbers, found {}", x.len())));
                }
                Some([
                    Vec3::new(x[0], x[1], x[2]),
                    Vec3::new(x[3], x[4], x[5]),
                    Vec3::new(x[6], x[7], x[8]),
                ])
            }
        };
        let (species_col, pos_col) =
            columns(comment_value(comment, "Properties")).map_err(|m| parse_err(path, i + 2, m))?;
        let mut positions = Vec::with_capacity(n);
        let mut species = Vec::with_capacity(n);
        for a in 0..n {
            let ln = i + 2 + a;
            let line = lines.get(ln).ok_or_else(|| {
                parse_err(path, ln + 1, format!("expected {n} particles, file ends after {a}"))
            })?;
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() < pos_col + 3 {
                return Err(parse_err(path, ln + 1, format!("expected at least {} columns", pos_col + 3)));
            }
            let mut xyz = [0.0; 3];
            for (c, v) in xyz.iter_mut().enumerate() {
                *v = cols[pos_col + c]
                    .parse()
                    .map_err(|_| parse_err(path, ln + 1, format!("bad coordinate {:?}", cols[pos_col + c])))?;
            }
            positions.push(Vec3::from(xyz));
            species.push(species_col.map_or("X", |c| cols[c]).to_string());
        }
        let frame = Frame::new(positions, cell, species).map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        frames.push(frame);
        i += 2 + n;
    }
    if frames.is_empty() {
        return Err(parse_err(path, 1, "no frames"));
    }
    Ok(frames)
}

pub fn read_frames(path: impl AsRef<Path>) -> Result<Vec<Frame>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_frames(&text, path)
}

/// Serialises frames; extended-XYZ also records the cell.
pub fn write_frames(frames: &[Frame], format: Format) -> String {
    let mut s = String::new();
    for f in frames {
        writeln!(s, "{}", f.len()).unwrap();
        match (format, &f.cell) {
            (Format::ExtendedXyz, Some(c)) => {
                let v: Vec<String> = c.iter().flat_map(|r| r.to_array()).map(|x| x.to_string()).collect();
                writeln!(s, "Lattice=\"{}\" Properties=species:S:1:pos:R:3 pbc=\"T T T\"", v.join(" ")).unwrap();
            }
            (Format::ExtendedXyz, None) => s.push_str("Properties=species:S:1:pos:R:3\n"),
            (Format::Xyz, _) => s.push('\n'),
        }
        for (i, p) in f.positions.iter().enumerate() {
            writeln!(s, "{} {} {} {}", f.species_of(i), p.x, p.y, p.z).unwrap();
        }
    }
    s
}

pub fn write_frames_to(path: impl Into<PathBuf>, frames: &[Frame], format: Format) -> Result<()> {
    std::fs::write(path.into(), write_frames(frames, format))?;
    Ok(())
}
