//! OFF and OBJ readers (triangles only) and an OFF writer.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{MeshGeometry, Vec3};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()) {
            Some(e) if e == "off" => Ok(MeshFormat::Off),
            Some(e) if e == "obj" => Ok(MeshFormat::Obj),
            _ => Err(Error::InvalidRequest(format!(
                "cannot infer mesh format of {}",
                path.display()
            ))),
        }
    }
}

impl FromStr for MeshFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(MeshFormat::Off),
            "obj" => Ok(MeshFormat::Obj),
            other => Err(Error::InvalidRequest(format!("unknown mesh format {other:?}"))),
        }
    }
}

pub fn load_mesh(path: &Path, format: MeshFormat) -> Result<MeshGeometry> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    match format {
        MeshFormat::Off => parse_off(&text),
        MeshFormat::Obj => parse_obj(&text),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

fn parse_coord(tok: &str, line: usize) -> Result<f64> {
    let x: f64 = parse_num(tok, line, "coordinate")?;
    if !x.is_finite() {
        return Err(parse_err(line, format!("non-finite coordinate {tok:?}")));
    }
    Ok(x)
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

pub fn parse_off(text: &str) -> Result<MeshGeometry> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if header[0] != "OFF" {
        return Err(parse_err(hl, "missing OFF header"));
    }
    let (cl, counts) = if header.len() > 1 {
        (hl, header[1..].to_vec())
    } else {
        lines.next().ok_or_else(|| parse_err(hl + 1, "missing element counts"))?
    };
    if counts.len() < 2 {
        return Err(parse_err(cl, "expected vertex and face counts"));
    }
    let nv: usize = parse_num(counts[0], cl, "vertex count")?;
    let nf: usize = parse_num(counts[1], cl, "face count")?;

    let mut vertices = Vec::with_capacity(nv.min(1 << 20));
    for _ in 0..nv {
        let (l, t) = lines.next().ok_or_else(|| parse_err(cl, "fewer vertices than declared"))?;
        if t.len() < 3 {
            return Err(parse_err(l, "vertex needs three coordinates"));
        }
        vertices.push([parse_coord(t[0], l)?, parse_coord(t[1], l)?, parse_coord(t[2], l)?]);
    }
    let mut faces = Vec::with_capacity(nf.min(1 << 20));
    for _ in 0..nf {
        let (l, t) = lines.next().ok_or_else(|| parse_err(cl, "fewer faces than declared"))?;
        let k: usize = parse_num(t[0], l, "face size")?;
        if k != 3 {
            return Err(parse_err(l, format!("only triangles are supported, got {k}-gon")));
        }
        if t.len() < 4 {
            return Err(parse_err(l, "face needs three indices"));
        }
        let mut f = [0usize; 3];
        for (slot, tok) in f.iter_mut().zip(&t[1..4]) {
            *slot = parse_num(tok, l, "vertex index")?;
            if *slot >= nv {
                return Err(parse_err(l, format!("vertex index {slot} out of range")));
            }
        }
        faces.push(f);
    }
    MeshGeometry::new(vertices, faces)
}

fn obj_index(tok: &str, count: usize, line: usize) -> Result<usize> {
    let head = tok.split('/').next().unwrap_or("");
    let i: i64 = parse_num(head, line, "vertex index")?;
    let resolved = if i > 0 {
        i - 1
    } else if i < 0 {
        count as i64 + i
    } else {
        -1
    };
    if resolved < 0 || resolved >= count as i64 {
        return Err(parse_err(line, format!("vertex index {i} out of range")));
    }
    Ok(resolved as usize)
}

/// Reads `v` and `f` records; other record types are skipped and logged.
pub fn parse_obj(text: &str) -> Result<MeshGeometry> {
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut faces = Vec::new();
    let mut ignored = 0usize;
    for (l, t) in content_lines(text) {
        match t[0] {
            "v" => {
                if t.len() < 4 {
                    return Err(parse_err(l, "vertex needs three coordinates"));
                }
                vertices.push([parse_coord(t[1], l)?, parse_coord(t[2], l)?, parse_coord(t[3], l)?]);
            }
            "f" => {
                if t.len() != 4 {
                    return Err(parse_err(
                        l,
                        format!("only triangles are supported, got {} indices", t.len() - 1),
                    ));
                }
                let n = vertices.len();
                faces.push([obj_index(t[1], n, l)?, obj_index(t[2], n, l)?, obj_index(t[3], n, l)?]);
            }
            _ => ignored += 1,
        }
    }
    if ignored > 0 {
        log::warn!("ignored {ignored} unsupported OBJ records");
    }
    MeshGeometry::new(vertices, faces)
}

pub fn write_off(mesh: &MeshGeometry) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "OFF\n{} {} 0", mesh.num_vertices(), mesh.num_faces());
    for v in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?} {:?}", v[0], v[1], v[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(s, "3 {} {} {}", f[0], f[1], f[2]);
    }
    s
}

pub fn save_off(mesh: &MeshGeometry, path: &Path) -> Result<()> {
    std::fs::write(path, write_off(mesh))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TET: &str = "OFF\n# regular tetrahedron\n4 4 6\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n";

    #[test]
    fn regular_tetrahedron_area() {
        let m = parse_off(TET).unwrap();
        let a = 8f64.sqrt();
        assert!((m.total_area() - 3f64.sqrt() * a * a).abs() < 1e-12);
    }

    #[test]
    fn off_roundtrip_is_exact() {
        let m = parse_off(TET).unwrap();
        let again = parse_off(&write_off(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn obj_with_slashes_and_negative_indices() {
        let text = "o t\nv 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\nvn 0 0 1\nf 1/1/1 2//1 3\nf 1 4 2\nf -4 -2 -1\nf 2 4 3\n";
        let m = parse_obj(text).unwrap();
        assert_eq!(m.num_faces(), 4);
        assert_eq!(m, parse_off(TET).unwrap());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = TET.replace("1 -1 -1", "1 x -1");
        assert!(matches!(parse_off(&bad), Err(Error::Parse { line: 5, .. })));
        let quad = TET.replace("3 1 3 2", "4 1 3 2 0");
        assert!(matches!(parse_off(&quad), Err(Error::Parse { line: 11, .. })));
        assert!(matches!(parse_off("OFF\n4 4 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_obj("v 0 0 0\nf 1 2 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_off("PLY\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn deleted_face_requires_closed_surface() {
        let open = TET.replace("4 4 6", "4 3 6").replace("3 1 3 2\n", "");
        assert!(matches!(parse_off(&open), Err(Error::ClosedSurfaceRequired(..))));
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(MeshFormat::from_path(Path::new("a/b.OFF")).unwrap(), MeshFormat::Off);
        assert_eq!(MeshFormat::from_path(Path::new("b.obj")).unwrap(), MeshFormat::Obj);
        assert!(MeshFormat::from_path(Path::new("b.stl")).is_err());
    }
}
