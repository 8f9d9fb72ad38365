//! File emitters: graticule SVG, surface OBJ, coordinate CSV, and the
//! `u,f` profile table reader.
//!
//! Every writer renders to a string first and then replaces the target file
//! atomically (temporary file in the same directory, then rename).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::profile::{DomainInterval, GeneralProfile, QuadraticProfile, SurfacePoint};
use crate::projection::{PlanePoint, Projection};
use crate::verifier::check_meridian_straightness;

/// Sampled meridian images further than this from their chord abort the
/// SVG export.
pub const COLLINEARITY_GUARD: f64 = 1e-9;

/// Shortest representation that parses back to the same `f64`; negative
/// zero is printed as `0`.
pub fn format_f64(v: f64) -> String {
    format!("{}", v + 0.0)
}

fn ensure_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("non-finite value in {what}")))
    }
}

/// Replaces `path` with `contents` via a sibling temporary file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraticuleSpec {
    pub t_range: (f64, f64),
    pub u_range: DomainInterval,
    pub n_meridians: usize,
    pub n_parallels: usize,
    pub samples_per_curve: usize,
}

impl GraticuleSpec {
    fn validate(&self, profile: &QuadraticProfile) -> Result<()> {
        if self.n_meridians < 2 || self.n_parallels < 2 {
            return Err(Error::Invalid(
                "graticule needs at least 2 meridians and 2 parallels".into(),
            ));
        }
        if self.samples_per_curve < 8 {
            return Err(Error::Invalid(
                "graticule needs at least 8 samples per curve".into(),
            ));
        }
        let (t0, t1) = self.t_range;
        if !(t0.is_finite() && t1.is_finite()) || t0 >= t1 {
            return Err(Error::Invalid(format!("bad t range [{t0}, {t1}]")));
        }
        let admissible = profile.admissible_interval(self.u_range)?;
        if admissible != self.u_range {
            return Err(Error::Invalid(format!(
                "u range {} is not admissible (largest admissible part is {admissible})",
                self.u_range
            )));
        }
        Ok(())
    }

    fn meridian_angles(&self) -> Vec<f64> {
        DomainInterval {
            lo: self.t_range.0,
            hi: self.t_range.1,
        }
        .linspace(self.n_meridians)
    }
}

fn guard_meridian(t: f64, deviation: f64) -> Result<()> {
    if deviation <= COLLINEARITY_GUARD {
        Ok(())
    } else {
        Err(Error::CollinearityViolation { t, deviation })
    }
}

/// What went into a graticule SVG. Curves are in plane coordinates
/// (before the y flip).
#[derive(Debug, Clone, PartialEq)]
pub struct Graticule {
    pub meridians: Vec<(f64, [PlanePoint; 2])>,
    pub parallels: Vec<(f64, Vec<PlanePoint>)>,
    pub max_meridian_deviation: f64,
    /// `min_x min_y width height` in screen units.
    pub view_box: [f64; 4],
}

impl Graticule {
    pub fn build(proj: &Projection, spec: &GraticuleSpec) -> Result<Self> {
        spec.validate(&proj.profile)?;
        let u_samples = spec.u_range.linspace(spec.samples_per_curve);
        let mut max_dev = 0.0_f64;
        let mut meridians = Vec::with_capacity(spec.n_meridians);
        for t in spec.meridian_angles() {
            let dev = check_meridian_straightness(proj, t, &u_samples)?.max_abs_residual;
            guard_meridian(t, dev)?;
            max_dev = max_dev.max(dev);
            let ends = [
                proj.project(SurfacePoint::new(t, spec.u_range.lo)),
                proj.project(SurfacePoint::new(t, spec.u_range.hi)),
            ];
            meridians.push((t, ends));
        }
        let t_samples = DomainInterval {
            lo: spec.t_range.0,
            hi: spec.t_range.1,
        }
        .linspace(spec.samples_per_curve);
        let parallels: Vec<(f64, Vec<PlanePoint>)> = spec
            .u_range
            .linspace(spec.n_parallels)
            .into_iter()
            .map(|u| {
                (
                    u,
                    t_samples
                        .iter()
                        .map(|&t| proj.project(SurfacePoint::new(t, u)))
                        .collect(),
                )
            })
            .collect();

        let all = meridians
            .iter()
            .flat_map(|(_, e)| e.iter())
            .chain(parallels.iter().flat_map(|(_, p)| p.iter()));
        let (mut min_x, mut max_x, mut min_y, mut max_y) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for q in all {
            ensure_finite(&[q.x, q.y], "graticule")?;
            min_x = min_x.min(q.x);
            max_x = max_x.max(q.x);
            // screen y = -plane y
            min_y = min_y.min(-q.y);
            max_y = max_y.max(-q.y);
        }
        let width = (max_x - min_x).max(f64::EPSILON);
        let height = (max_y - min_y).max(f64::EPSILON);
        let (mx, my) = (0.05 * width, 0.05 * height);
        Ok(Self {
            meridians,
            parallels,
            max_meridian_deviation: max_dev,
            view_box: [min_x - mx, min_y - my, width + 2.0 * mx, height + 2.0 * my],
        })
    }

    pub fn to_svg(&self) -> String {
        let [vx, vy, vw, vh] = self.view_box;
        let stroke = 0.003 * vw.max(vh);
        let points = |pts: &mut dyn Iterator<Item = &PlanePoint>| {
            pts.map(|q| format!("{},{}", format_f64(q.x), format_f64(-q.y)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
        );
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
            format_f64(vx),
            format_f64(vy),
            format_f64(vw),
            format_f64(vh)
        );
        let _ = writeln!(
            s,
            r#"<g fill="none" stroke-linecap="round" stroke-width="{}">"#,
            format_f64(stroke)
        );
        for (t, ends) in &self.meridians {
            let _ = writeln!(
                s,
                r#"<polyline class="meridian" data-t="{}" stroke="black" points="{}"/>"#,
                format_f64(*t),
                points(&mut ends.iter())
            );
        }
        for (u, pts) in &self.parallels {
            let _ = writeln!(
                s,
                r##"<polyline class="parallel" data-u="{}" stroke="#1f5fbf" points="{}"/>"##,
                format_f64(*u),
                points(&mut pts.iter())
            );
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraticuleSummary {
    pub meridians: usize,
    pub parallels: usize,
    pub max_meridian_deviation: f64,
    pub view_box: [f64; 4],
}

pub fn export_graticule_svg(
    proj: &Projection,
    spec: &GraticuleSpec,
    path: &Path,
) -> Result<GraticuleSummary> {
    let g = Graticule::build(proj, spec)?;
    write_atomic(path, &g.to_svg())?;
    Ok(GraticuleSummary {
        meridians: g.meridians.len(),
        parallels: g.parallels.len(),
        max_meridian_deviation: g.max_meridian_deviation,
        view_box: g.view_box,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSpec {
    pub t_divisions: usize,
    pub u_divisions: usize,
    pub u_range: DomainInterval,
    /// Where `g` is anchored to zero.
    pub u_ref: f64,
}

impl MeshSpec {
    /// 64 × 32 on `[0.05, 2]` anchored at `0.05`.
    pub fn figure() -> Self {
        Self {
            t_divisions: 64,
            u_divisions: 32,
            u_range: DomainInterval { lo: 0.05, hi: 2.0 },
            u_ref: 0.05,
        }
    }
}

/// Vertices `r(t_i, u_j)` indexed `i * u_divisions + j`, and quads closing
/// the seam at `t = 2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices.
    pub quads: Vec<[usize; 4]>,
    pub t_values: Vec<f64>,
    pub u_values: Vec<f64>,
}

impl Mesh {
    pub fn build(profile: &QuadraticProfile, spec: &MeshSpec) -> Result<Self> {
        if spec.t_divisions < 3 || spec.u_divisions < 3 {
            return Err(Error::Invalid("mesh divisions must be at least 3".into()));
        }
        let u_range = profile.admissible_interval(spec.u_range)?;
        let nt = spec.t_divisions;
        let nu = spec.u_divisions;
        let t_values: Vec<f64> = (0..nt)
            .map(|i| std::f64::consts::TAU * i as f64 / nt as f64)
            .collect();
        let u_values = u_range.linspace(nu);
        let rows = u_values
            .iter()
            .map(|&u| Ok((profile.radius(u), profile.eval_g(u, spec.u_ref)?)))
            .collect::<Result<Vec<_>>>()?;

        let mut vertices = Vec::with_capacity(nt * nu);
        for &t in &t_values {
            let (s, c) = t.sin_cos();
            for &(r, z) in &rows {
                vertices.push([r * c, r * s, z]);
            }
        }
        let index = |i: usize, j: usize| (i % nt) * nu + j;
        let mut quads = Vec::with_capacity(nt * (nu - 1));
        for i in 0..nt {
            for j in 0..nu - 1 {
                quads.push([
                    index(i, j),
                    index(i + 1, j),
                    index(i + 1, j + 1),
                    index(i, j + 1),
                ]);
            }
        }
        Ok(Self {
            vertices,
            quads,
            t_values,
            u_values,
        })
    }

    pub fn to_obj(&self, profile: &QuadraticProfile) -> Result<String> {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# surface of revolution f(u)^2 = {}u^2 + {}u + {}",
            format_f64(profile.c()),
            format_f64(profile.d()),
            format_f64(profile.k())
        );
        let _ = writeln!(
            s,
            "# {} vertices, {} quads",
            self.vertices.len(),
            self.quads.len()
        );
        for v in &self.vertices {
            ensure_finite(v, "mesh vertex")?;
            let _ = writeln!(
                s,
                "v {} {} {}",
                format_f64(v[0]),
                format_f64(v[1]),
                format_f64(v[2])
            );
        }
        for q in &self.quads {
            let _ = writeln!(s, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSummary {
    pub vertices: usize,
    pub faces: usize,
    /// Largest `|√(X² + Y²) - f(u)|` over the vertices.
    pub max_radius_error: f64,
}

pub fn export_mesh_obj(
    profile: &QuadraticProfile,
    spec: &MeshSpec,
    path: &Path,
) -> Result<MeshSummary> {
    let mesh = Mesh::build(profile, spec)?;
    write_atomic(path, &mesh.to_obj(profile)?)?;
    let nu = mesh.u_values.len();
    let max_radius_error = mesh
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v[0].hypot(v[1]) - profile.radius(mesh.u_values[i % nu])).abs())
        .fold(0.0, f64::max);
    Ok(MeshSummary {
        vertices: mesh.vertices.len(),
        faces: mesh.quads.len(),
        max_radius_error,
    })
}

/// `t,u,x,y` rows for each point.
pub fn render_sample_table(proj: &Projection, points: &[SurfacePoint]) -> Result<String> {
    let mut s = String::from("t,u,x,y\n");
    for &pt in points {
        let q = proj.project(pt);
        ensure_finite(&[pt.t, pt.u, q.x, q.y], "sample table")?;
        let _ = writeln!(
            s,
            "{},{},{},{}",
            format_f64(pt.t),
            format_f64(pt.u),
            format_f64(q.x),
            format_f64(q.y)
        );
    }
    Ok(s)
}

/// Writes the table and returns the number of data rows.
pub fn sample_table_csv(proj: &Projection, points: &[SurfacePoint], path: &Path) -> Result<usize> {
    write_atomic(path, &render_sample_table(proj, points)?)?;
    Ok(points.len())
}

fn parse_error(path: &Path, line: u64, msg: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("{}:{line}: {msg}", path.display()))
}

/// Reads `(t, u, x, y)` rows written by [`sample_table_csv`].
pub fn read_sample_table(path: &Path) -> Result<Vec<(SurfacePoint, PlanePoint)>> {
    let rows = read_numeric_csv(path, &["t", "u", "x", "y"])?;
    Ok(rows
        .into_iter()
        .map(|r| (SurfacePoint::new(r[0], r[1]), PlanePoint::new(r[2], r[3])))
        .collect())
}

/// Reads a tabulated profile: header `u,f`, strictly increasing `u`.
pub fn read_profile_csv(path: &Path) -> Result<GeneralProfile> {
    let rows = read_numeric_csv(path, &["u", "f"])?;
    let (u, f): (Vec<f64>, Vec<f64>) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
    let name = format!("csv:{}", path.display());
    GeneralProfile::from_samples(name, u, f)
}

fn read_numeric_csv(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let found: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if found != header {
        return Err(parse_error(
            path,
            1,
            format!(
                "expected header {:?}, found {:?}",
                header.join(","),
                found.join(",")
            ),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| parse_error(path, line, format!("not a number: {field:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::Io {
                path: path.to_path_buf(),
                source,
            },
            _ => unreachable!("checked is_io_error"),
        }
    } else {
        Error::Invalid(format!("{}: {e}", path.display()))
    }
}
