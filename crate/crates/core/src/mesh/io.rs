//! ASCII OBJ, OFF and PLY readers. Only positions and triangle connectivity
//! are read; vertex order and face order are preserved.

use std::path::Path;
use std::str::FromStr;

use super::{Mesh, MeshError, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Off,
    Ply,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        ext.parse().ok()
    }
}

impl FromStr for MeshFormat {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(Self::Obj),
            "off" => Ok(Self::Off),
            "ply" => Ok(Self::Ply),
            other => Err(MeshError::Unsupported(format!("mesh format '{other}'"))),
        }
    }
}

/// Reads a mesh file. The format is taken from `format` or, if absent, from
/// the file extension.
pub fn load_mesh(path: impl AsRef<Path>, format: Option<MeshFormat>) -> Result<Mesh, MeshError> {
    let path = path.as_ref();
    let format = match format.or_else(|| MeshFormat::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(MeshError::Unsupported(format!(
                "cannot infer format of {}",
                path.display()
            )))
        }
    };
    let text = std::fs::read_to_string(path).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_mesh(&text, format)
}

pub fn parse_mesh(text: &str, format: MeshFormat) -> Result<Mesh, MeshError> {
    let (positions, faces) = match format {
        MeshFormat::Obj => parse_obj(text)?,
        MeshFormat::Off => parse_off(text)?,
        MeshFormat::Ply => parse_ply(text)?,
    };
    Mesh::from_triangles(positions, faces)
}

type Raw = (Vec<Point3>, Vec<[usize; 3]>);

fn parse_err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64, MeshError> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing coordinate"))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid number '{tok}'")))
}

fn parse_point<'a>(
    mut toks: impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<Point3, MeshError> {
    Ok([
        parse_f64(toks.next(), line)?,
        parse_f64(toks.next(), line)?,
        parse_f64(toks.next(), line)?,
    ])
}

fn check_index(index: i64, count: usize, line: usize) -> Result<usize, MeshError> {
    if index < 0 || index as usize >= count {
        return Err(MeshError::IndexOutOfRange { line, index, count });
    }
    Ok(index as usize)
}

fn parse_obj(text: &str) -> Result<Raw, MeshError> {
    let mut positions = Vec::new();
    let mut pending: Vec<(usize, [i64; 3])> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("v") => positions.push(parse_point(toks, line)?),
            Some("f") => {
                let corners: Vec<&str> = toks.collect();
                if corners.len() != 3 {
                    return Err(MeshError::NonTriangularFace {
                        line,
                        count: corners.len(),
                    });
                }
                let mut f = [0i64; 3];
                for (k, c) in corners.iter().enumerate() {
                    let idx = c.split('/').next().unwrap_or("");
                    let idx: i64 = idx
                        .parse()
                        .map_err(|_| parse_err(line, format!("invalid face index '{c}'")))?;
                    // OBJ indices are 1-based; negative indices count back from
                    // the most recent vertex
                    f[k] = match idx {
                        0 => {
                            return Err(MeshError::IndexOutOfRange {
                                line,
                                index: 0,
                                count: positions.len(),
                            })
                        }
                        n if n > 0 => n - 1,
                        n => positions.len() as i64 + n,
                    };
                }
                pending.push((line, f));
            }
            _ => {}
        }
    }
    let n = positions.len();
    let faces = pending
        .into_iter()
        .map(|(line, f)| {
            Ok([
                check_index(f[0], n, line)?,
                check_index(f[1], n, line)?,
                check_index(f[2], n, line)?,
            ])
        })
        .collect::<Result<Vec<_>, MeshError>>()?;
    Ok((positions, faces))
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let c = l.split('#').next().unwrap_or("").trim();
        (!c.is_empty()).then_some((i + 1, c))
    })
}

fn parse_face_list<'a>(
    mut toks: impl Iterator<Item = &'a str>,
    line: usize,
    nv: usize,
) -> Result<[usize; 3], MeshError> {
    let count: usize = toks
        .next()
        .ok_or_else(|| parse_err(line, "missing face vertex count"))?
        .parse()
        .map_err(|_| parse_err(line, "invalid face vertex count"))?;
    if count != 3 {
        return Err(MeshError::NonTriangularFace { line, count });
    }
    let mut f = [0usize; 3];
    for slot in &mut f {
        let tok = toks
            .next()
            .ok_or_else(|| parse_err(line, "truncated face"))?;
        let idx: i64 = tok
            .parse()
            .map_err(|_| parse_err(line, format!("invalid face index '{tok}'")))?;
        *slot = check_index(idx, nv, line)?;
    }
    Ok(f)
}

fn parse_off(text: &str) -> Result<Raw, MeshError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let rest = header
        .strip_prefix("OFF")
        .ok_or_else(|| parse_err(line, "missing OFF header"))?
        .trim();
    let (count_line, counts) = if rest.is_empty() {
        lines
            .next()
            .ok_or_else(|| parse_err(line, "missing element counts"))?
    } else {
        (line, rest)
    };
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(count_line, "invalid element count"))
        })
        .collect::<Result<_, _>>()?;
    if counts.len() < 2 {
        return Err(parse_err(count_line, "expected vertex and face counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);
    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, l) = lines
            .next()
            .ok_or_else(|| parse_err(count_line, "truncated vertex list"))?;
        positions.push(parse_point(l.split_whitespace(), line)?);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, l) = lines
            .next()
            .ok_or_else(|| parse_err(count_line, "truncated face list"))?;
        faces.push(parse_face_list(l.split_whitespace(), line, nv)?);
    }
    Ok((positions, faces))
}

struct PlyElement {
    name: String,
    count: usize,
    properties: Vec<String>,
    list_property: Option<String>,
}

fn parse_ply(text: &str) -> Result<Raw, MeshError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "ply")) => {}
        _ => return Err(parse_err(1, "missing 'ply' magic")),
    }
    let mut elements: Vec<PlyElement> = Vec::new();
    let mut header_end = None;
    for (line, l) in lines.by_ref() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first().copied() {
            Some("format") => {
                if toks.get(1) != Some(&"ascii") {
                    return Err(MeshError::Unsupported(format!(
                        "PLY format '{}' (only ascii is read)",
                        toks.get(1).unwrap_or(&"")
                    )));
                }
            }
            Some("element") => {
                let name = toks
                    .get(1)
                    .ok_or_else(|| parse_err(line, "element without name"))?;
                let count = toks
                    .get(2)
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| parse_err(line, "element without count"))?;
                elements.push(PlyElement {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                    list_property: None,
                });
            }
            Some("property") => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(line, "property before element"))?;
                if toks.get(1) == Some(&"list") {
                    let name = toks
                        .get(4)
                        .ok_or_else(|| parse_err(line, "list property without name"))?;
                    el.list_property = Some(name.to_string());
                    el.properties.push(name.to_string());
                } else {
                    let name = toks
                        .get(2)
                        .ok_or_else(|| parse_err(line, "property without name"))?;
                    el.properties.push(name.to_string());
                }
            }
            Some("end_header") => {
                header_end = Some(line);
                break;
            }
            _ => {}
        }
    }
    let header_end = header_end.ok_or_else(|| parse_err(1, "missing end_header"))?;

    let mut positions = Vec::new();
    let mut faces = Vec::new();
    let mut body = lines.filter(|(_, l)| !l.is_empty());
    for el in &elements {
        match el.name.as_str() {
            "vertex" => {
                let col = |n: &str| {
                    el.properties
                        .iter()
                        .position(|p| p == n)
                        .ok_or_else(|| parse_err(header_end, format!("vertex element lacks '{n}'")))
                };
                let (cx, cy, cz) = (col("x")?, col("y")?, col("z")?);
                for _ in 0..el.count {
                    let (line, l) = body
                        .next()
                        .ok_or_else(|| parse_err(header_end, "truncated vertex list"))?;
                    let toks: Vec<&str> = l.split_whitespace().collect();
                    positions.push([
                        parse_f64(toks.get(cx).copied(), line)?,
                        parse_f64(toks.get(cy).copied(), line)?,
                        parse_f64(toks.get(cz).copied(), line)?,
                    ]);
                }
            }
            "face" => {
                if el.list_property.is_none() || el.properties.len() != 1 {
                    return Err(parse_err(
                        header_end,
                        "face element must hold a single index list",
                    ));
                }
                for _ in 0..el.count {
                    let (line, l) = body
                        .next()
                        .ok_or_else(|| parse_err(header_end, "truncated face list"))?;
                    faces.push(parse_face_list(
                        l.split_whitespace(),
                        line,
                        positions.len(),
                    )?);
                }
            }
            _ => {
                for _ in 0..el.count {
                    body.next();
                }
            }
        }
    }
    Ok((positions, faces))
}
