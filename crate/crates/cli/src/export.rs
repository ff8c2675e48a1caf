//! Sampling a surface on a `(u, v)` grid and writing it as CSV, OBJ or JSON.

use std::io::Write;

use serde::Serialize;
use zmcrot_core::profiles::regular_signs;
use zmcrot_core::{SurfaceFamily, SurfaceKind, Vec4};

use crate::config::{Coord, Interval};
use crate::error::{CliError, Result};

pub const EXPORT_SCHEMA: &str = "zmcrot/export/v1";

/// Surface points on a tensor grid, row-major in `u` then `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub points: Vec<Vec4>,
}

impl Grid {
    pub fn point(&self, i: usize, j: usize) -> Vec4 {
        self.points[i * self.v.len() + j]
    }
}

/// `n` equally spaced nodes over the closed interval.
pub fn nodes(range: Interval, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { range.end } else { range.start + (range.end - range.start) * i as f64 / last })
        .collect()
}

/// Samples the surface, refusing grids that touch the singular locus or
/// straddle two regular subintervals.
pub fn build_grid(surface: &SurfaceFamily, u_range: Interval, v_range: Interval, nu: usize, nv: usize) -> Result<Grid> {
    let u = nodes(u_range, nu);
    let v = nodes(v_range, nv);
    let (lo, hi) = surface.profile.domain();
    if u_range.start < lo || u_range.end > hi {
        return Err(CliError::Config(format!("u range {u_range} leaves the profile domain [{lo}, {hi}]")));
    }
    let signs: Vec<_> = u.iter().map(|&x| regular_signs(surface, x)).collect();
    let singular: Vec<String> = u
        .iter()
        .zip(&signs)
        .enumerate()
        .filter(|(_, (_, s))| s.is_none())
        .map(|(i, (x, _))| format!("u[{i}] = {x} (all {} v nodes)", v.len()))
        .collect();
    if !singular.is_empty() {
        return Err(CliError::SingularGrid { nodes: singular });
    }
    let first = signs[0];
    let crossed: Vec<String> = u
        .iter()
        .zip(&signs)
        .enumerate()
        .filter(|(_, (_, s))| **s != first)
        .map(|(i, (x, s))| {
            let (e, es) = s.expect("checked regular");
            format!(
                "u[{i}] = {x} has (ε, ε*) = ({e}, {es}), the grid starts in {:?}",
                first.map(|(a, b)| (a.value(), b.value()))
            )
        })
        .collect();
    if !crossed.is_empty() {
        return Err(CliError::SingularGrid { nodes: crossed });
    }
    let mut points = Vec::with_capacity(u.len() * v.len());
    for &x in &u {
        for &y in &v {
            points.push(surface.eval_point(x, y)?);
        }
    }
    Ok(Grid { u, v, points })
}

pub fn write_csv(grid: &Grid, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "u,v,x1,x2,x3,x4")?;
    for (i, &u) in grid.u.iter().enumerate() {
        for (j, &v) in grid.v.iter().enumerate() {
            let p = grid.point(i, j);
            writeln!(out, "{u},{v},{},{},{},{}", p.x1, p.x2, p.x3, p.x4)?;
        }
    }
    Ok(())
}

/// Orthographic projection dropping one coordinate; each grid quad becomes
/// two triangles.
pub fn write_obj(grid: &Grid, drop: Coord, out: &mut dyn Write) -> std::io::Result<()> {
    let keep: Vec<usize> = (0..4).filter(|&k| k != drop.index()).collect();
    writeln!(out, "# dropped coordinate x{}", drop.index() + 1)?;
    for p in &grid.points {
        let c = p.to_array();
        writeln!(out, "v {} {} {}", c[keep[0]], c[keep[1]], c[keep[2]])?;
    }
    let nv = grid.v.len();
    let index = |i: usize, j: usize| i * nv + j + 1;
    for i in 0..grid.u.len() - 1 {
        for j in 0..nv - 1 {
            let (a, b, c, d) = (index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1));
            writeln!(out, "f {a} {b} {c}")?;
            writeln!(out, "f {a} {c} {d}")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonExport<'a> {
    schema: &'static str,
    surface: &'a str,
    kind: SurfaceKind,
    b: f64,
    u: &'a [f64],
    v: &'a [f64],
    points: Vec<[f64; 4]>,
}

pub fn write_json(grid: &Grid, id: &str, surface: &SurfaceFamily, out: &mut dyn Write) -> std::io::Result<()> {
    let doc = JsonExport {
        schema: EXPORT_SCHEMA,
        surface: id,
        kind: surface.kind,
        b: surface.b,
        u: &grid.u,
        v: &grid.v,
        points: grid.points.iter().map(|p| p.to_array()).collect(),
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};
    use zmcrot_core::{ExplicitCurve, ProfileCurve};

    fn circle(b: f64) -> SurfaceFamily {
        SurfaceFamily::new(SurfaceKind::M1, b, ProfileCurve::explicit(ExplicitCurve::SinCos).unwrap()).unwrap()
    }

    fn range(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn nodes_hit_both_ends() {
        let n = nodes(range(0.1, 0.7), 7);
        assert_eq!(n.len(), 7);
        assert_eq!(n[0], 0.1);
        assert_eq!(n[6], 0.7);
    }

    #[test]
    fn csv_has_one_row_per_node() {
        let g = build_grid(&circle(1.0), range(0.0, 0.5), range(0.0, 2.0 * PI), 4, 3).unwrap();
        let mut buf = Vec::new();
        write_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "u,v,x1,x2,x3,x4");
        assert_eq!(lines.len(), 13);
        // row-major: the second row advances v
        assert!(lines[2].starts_with("0,"));
    }

    #[test]
    fn csv_values_round_trip() {
        let g = build_grid(&circle(1.0), range(0.1, 0.3), range(0.2, 1.1), 3, 3).unwrap();
        let mut buf = Vec::new();
        write_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row: Vec<f64> = text.lines().nth(5).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        let p = g.point(1, 1);
        assert_eq!(row, vec![g.u[1], g.v[1], p.x1, p.x2, p.x3, p.x4]);
    }

    #[test]
    fn obj_triangulates_quads() {
        let g = build_grid(&circle(1.0), range(0.0, 0.5), range(0.0, 1.0), 3, 4).unwrap();
        let mut buf = Vec::new();
        write_obj(&g, Coord::X3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 12);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2 * 2 * 3);
        let p = g.point(0, 0);
        assert_eq!(text.lines().nth(1).unwrap(), format!("v {} {} {}", p.x1, p.x2, p.x4));
    }

    #[test]
    fn singular_nodes_are_listed() {
        let err = build_grid(&circle(1.0), range(0.0, FRAC_PI_2), range(0.0, 1.0), 33, 2).unwrap_err();
        match err {
            CliError::SingularGrid { nodes } => {
                assert_eq!(nodes.len(), 1);
                assert!(nodes[0].starts_with("u[16]"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grids_straddling_the_locus_are_refused() {
        let err = build_grid(&circle(1.0), range(0.0, 1.5), range(0.0, 1.0), 4, 2).unwrap_err();
        assert!(matches!(err, CliError::SingularGrid { .. }));
    }
}
