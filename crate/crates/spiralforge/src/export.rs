//! OBJ and CSV writers for meshes, and an OBJ vertex reader.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use spiralforge_core::verify::Mesh;
use spiralforge_core::Vec3;

use crate::RunError;

/// ASCII OBJ: `v x y z` in shortest round-trip decimal, faces 1-indexed.
pub fn write_obj(mesh: &Mesh, path: &Path) -> Result<(), RunError> {
    let io = |e| RunError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v.x, v.y, v.z).map_err(io)?;
    }
    for f in &mesh.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Vertices of an OBJ file, in order.
pub fn read_obj_vertices(path: &Path) -> Result<Vec<Vec3>, RunError> {
    let file = File::open(path).map_err(|e| RunError::io(path, e))?;
    let mut out = vec![];
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| RunError::io(path, e))?;
        let mut it = line.split_whitespace();
        if it.next() != Some("v") {
            continue;
        }
        let c: Vec<f64> = it.map(str::parse).collect::<Result<_, _>>().map_err(|e| {
            RunError::io(path, std::io::Error::new(std::io::ErrorKind::InvalidData, format!("bad vertex {line:?}: {e}")))
        })?;
        if c.len() < 3 {
            return Err(RunError::io(path, std::io::Error::new(std::io::ErrorKind::InvalidData, format!("short vertex {line:?}"))));
        }
        out.push(Vec3::new(c[0], c[1], c[2]));
    }
    Ok(out)
}

/// Per-vertex scalars with header `s,theta,H_abs,u`.
pub fn write_csv(mesh: &Mesh, path: &Path) -> Result<(), RunError> {
    let err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => RunError::io(path, e),
        other => RunError::io(path, std::io::Error::other(format!("{other:?}"))),
    };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["s", "theta", "H_abs", "u"]).map_err(err)?;
    for i in 0..mesh.vertices.len() {
        let row = [mesh.s[i], mesh.theta[i], mesh.h_abs[i], mesh.u[i]].map(|x| x.to_string());
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|e| RunError::io(path, e))
}
