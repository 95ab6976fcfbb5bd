use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::{BoundaryTag, GeometryError, Mesh};

/// Writes `nodes N triangles T`, then N lines `x y`, then T lines
/// `i j k tag01 tag12 tag20` with 0-based indices.
pub fn write_mesh<W: Write>(mesh: &Mesh, mut out: W) -> Result<(), GeometryError> {
    let mut s = String::with_capacity(40 * (mesh.nodes.len() + mesh.triangles.len()));
    writeln!(s, "nodes {} triangles {}", mesh.nodes.len(), mesh.triangles.len()).unwrap();
    for p in &mesh.nodes {
        writeln!(s, "{:.17e} {:.17e}", p[0], p[1]).unwrap();
    }
    for (t, tags) in mesh.triangles.iter().zip(&mesh.edge_tags) {
        writeln!(s, "{} {} {} {} {} {}", t[0], t[1], t[2], tags[0].code(), tags[1].code(), tags[2].code()).unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Reads the format written by [`write_mesh`]. Blank lines and lines
/// starting with `#` are skipped.
pub fn read_mesh<R: BufRead>(input: R) -> Result<Mesh, GeometryError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)))
        .filter(|r| r.as_ref().map_or(true, |(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#')));
    let err = |line: usize, msg: &str| GeometryError::Parse { line, msg: msg.to_string() };

    let (ln, header) = lines.next().ok_or_else(|| err(0, "empty input"))??;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "nodes" || h[2] != "triangles" {
        return Err(err(ln, "expected `nodes N triangles T`"));
    }
    let n: usize = h[1].parse().map_err(|_| err(ln, "bad node count"))?;
    let t: usize = h[3].parse().map_err(|_| err(ln, "bad triangle count"))?;

    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, l) = lines.next().ok_or_else(|| err(ln, "missing node line"))??;
        let v: Vec<f64> = l.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| err(ln, "bad coordinate"))?;
        if v.len() != 2 {
            return Err(err(ln, "node line needs two coordinates"));
        }
        nodes.push([v[0], v[1]]);
    }
    let mut triangles = Vec::with_capacity(t);
    let mut edge_tags = Vec::with_capacity(t);
    for _ in 0..t {
        let (ln, l) = lines.next().ok_or_else(|| err(ln, "missing triangle line"))??;
        let v: Vec<usize> = l.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| err(ln, "bad integer"))?;
        if v.len() != 6 {
            return Err(err(ln, "triangle line needs three indices and three tags"));
        }
        if v[..3].iter().any(|&i| i >= n) {
            return Err(err(ln, "node index out of range"));
        }
        let tag = |c: usize| u8::try_from(c).ok().and_then(BoundaryTag::from_code).ok_or_else(|| err(ln, "unknown boundary tag"));
        triangles.push([v[0], v[1], v[2]]);
        edge_tags.push([tag(v[3])?, tag(v[4])?, tag(v[5])?]);
    }
    if let Some(extra) = lines.next() {
        let (ln, _) = extra?;
        return Err(err(ln, "unexpected trailing content"));
    }
    Ok(Mesh { nodes, triangles, edge_tags, grading: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, MeshParams, Shape};

    #[test]
    fn roundtrip() {
        let d = DomainSpec::new(Shape::Triangle, 0.7, 0.0).unwrap();
        let m = Mesh::generate(&d, &MeshParams::default()).unwrap();
        let mut buf = Vec::new();
        write_mesh(&m, &mut buf).unwrap();
        let back = read_mesh(&buf[..]).unwrap();
        assert_eq!(back.nodes, m.nodes);
        assert_eq!(back.triangles, m.triangles);
        assert_eq!(back.edge_tags, m.edge_tags);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_mesh(&b"nodes 1 triangles 0\n0 0 0\n"[..]).is_err());
        assert!(read_mesh(&b"nodes 3 triangles 1\n0 0\n1 0\n0 1\n0 1 2 0 0 9\n"[..]).is_err());
    }
}
