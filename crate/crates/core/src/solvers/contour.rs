//! Zero curves of family functions by marching squares.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PotentialExponent, RingConfiguration};
use crate::system::{build_f, pfaffian, zero_mass_values_of, FamilyKind};

/// Largest `|f|` accepted at a refined crossing.
pub const VERTEX_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveTag {
    Pfaffian,
    Z1,
    Z2,
    Z3,
}

impl CurveTag {
    pub fn name(self) -> &'static str {
        match self {
            CurveTag::Pfaffian => "pfaffian",
            CurveTag::Z1 => "z1",
            CurveTag::Z2 => "z2",
            CurveTag::Z3 => "z3",
        }
    }
}

impl fmt::Display for CurveTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pfaffian" | "pf" => Ok(CurveTag::Pfaffian),
            "z1" => Ok(CurveTag::Z1),
            "z2" => Ok(CurveTag::Z2),
            "z3" => Ok(CurveTag::Z3),
            _ => Err(Error::Domain(format!("unknown curve tag `{s}`"))),
        }
    }
}

/// Axis-aligned rectangle in the two free angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Window {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Window { x, y }
    }

    /// `(0, π)²`, the window of the published plots.
    pub fn default_for(_kind: FamilyKind) -> Self {
        Window { x: (0.0, PI), y: (0.0, PI) }
    }

    fn valid(&self) -> bool {
        [self.x, self.y].iter().all(|&(a, b)| a.is_finite() && b.is_finite() && a < b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub function_tag: CurveTag,
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceResult {
    pub tag: CurveTag,
    pub family: FamilyKind,
    pub window: Window,
    pub grid_n: usize,
    pub polylines: Vec<Polyline>,
    /// Cells `(i, j)` skipped because a corner collides or a sign change is a pole.
    pub degenerate_cells: Vec<(usize, usize)>,
    pub max_vertex_residual: f64,
}

/// Two-variable function traced for `tag` on `family`, `None` at collisions.
fn family_function(tag: CurveTag, family: FamilyKind, s: PotentialExponent) -> Result<impl Fn(f64, f64) -> Option<f64> + Sync> {
    let ok = match tag {
        CurveTag::Pfaffian => matches!(family, FamilyKind::Type2Ring4 | FamilyKind::Type1Ring6),
        _ => family == FamilyKind::Symmetric5,
    };
    if !ok {
        return Err(Error::Domain(format!(
            "curve `{tag}` is not defined on a two-angle slice of {family}"
        )));
    }
    Ok(move |x: f64, y: f64| {
        let c = RingConfiguration::new(family.expand_unchecked(&[x, y]), s).ok()?;
        let v = match tag {
            CurveTag::Pfaffian => pfaffian(&build_f(&c)).ok()?,
            CurveTag::Z1 => zero_mass_values_of(&c)[0],
            CurveTag::Z2 => zero_mass_values_of(&c)[1],
            CurveTag::Z3 => zero_mass_values_of(&c)[2],
        };
        v.is_finite().then_some(v)
    })
}

/// Evaluates the traced function at a point, for residual checks.
pub fn evaluate_tag(tag: CurveTag, family: FamilyKind, s: PotentialExponent, x: f64, y: f64) -> Result<Option<f64>> {
    Ok(family_function(tag, family, s)?(x, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeId {
    /// `(i, j)` to `(i + 1, j)`.
    H(usize, usize),
    /// `(i, j)` to `(i, j + 1)`.
    V(usize, usize),
}

/// Sign-change bisection; `None` if the end point is not a zero (a pole).
fn refine(f: &impl Fn(f64, f64) -> Option<f64>, a: (f64, f64), b: (f64, f64), fa: f64) -> Option<((f64, f64), f64)> {
    let at = |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (mut flo, mut fhi) = (fa, f64::NAN);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let p = at(mid);
        let fm = f(p.0, p.1)?;
        if fm == 0.0 {
            return Some((p, 0.0));
        }
        if fm.signum() == fa.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    let (t, v) = if fhi.is_nan() || flo.abs() <= fhi.abs() { (lo, flo) } else { (hi, fhi) };
    (v.abs() <= VERTEX_TOL).then(|| (at(t), v.abs()))
}

/// Refined zero on an edge and its residual.
type Crossing = ((f64, f64), f64);

/// Marching-squares zero curves of `tag` on a `grid_n × grid_n` grid over `window`.
pub fn trace_zero_curve(
    tag: CurveTag,
    family: FamilyKind,
    window: Window,
    grid_n: usize,
    s: PotentialExponent,
) -> Result<TraceResult> {
    if grid_n < 16 {
        return Err(Error::Domain(format!("grid_n must be at least 16, got {grid_n}")));
    }
    let (dlo, dhi) = if family == FamilyKind::Type2Ring4 { (-PI, PI) } else { (0.0, PI) };
    if !window.valid() || [window.x, window.y].iter().any(|&(a, b)| a < dlo || b > dhi) {
        return Err(Error::Domain(format!("window {window:?} outside [{dlo}, {dhi}]²")));
    }
    let f = family_function(tag, family, s)?;
    let n = grid_n;
    let px = |i: usize| window.x.0 + (window.x.1 - window.x.0) * i as f64 / n as f64;
    let py = |j: usize| window.y.0 + (window.y.1 - window.y.0) * j as f64 / n as f64;
    let vals: Vec<Option<f64>> = (0..(n + 1) * (n + 1))
        .into_par_iter()
        .map(|k| f(px(k % (n + 1)), py(k / (n + 1))))
        .collect();
    let val = |i: usize, j: usize| vals[i + j * (n + 1)];
    let ends = |e: EdgeId| match e {
        EdgeId::H(i, j) => ((i, j), (i + 1, j)),
        EdgeId::V(i, j) => ((i, j), (i, j + 1)),
    };

    let mut crossing_edges = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            for e in [EdgeId::H(i, j), EdgeId::V(i, j)] {
                let ((i0, j0), (i1, j1)) = ends(e);
                if i1 > n || j1 > n {
                    continue;
                }
                if let (Some(a), Some(b)) = (val(i0, j0), val(i1, j1)) {
                    if (a >= 0.0) != (b >= 0.0) {
                        crossing_edges.push(e);
                    }
                }
            }
        }
    }
    let refined: BTreeMap<EdgeId, Option<Crossing>> = crossing_edges
        .par_iter()
        .map(|&e| {
            let ((i0, j0), (i1, j1)) = ends(e);
            let fa = val(i0, j0).expect("crossing edges have finite ends");
            (e, refine(&f, (px(i0), py(j0)), (px(i1), py(j1)), fa))
        })
        .collect();

    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    let mut degenerate = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let c = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            if c.iter().any(Option::is_none) {
                degenerate.push((i, j));
                continue;
            }
            let c = c.map(Option::unwrap);
            let (bottom, right, top, left) = (EdgeId::H(i, j), EdgeId::V(i + 1, j), EdgeId::H(i, j + 1), EdgeId::V(i, j));
            let edges: Vec<EdgeId> = [bottom, right, top, left]
                .into_iter()
                .filter(|e| refined.contains_key(e))
                .collect();
            if edges.is_empty() {
                continue;
            }
            if edges.iter().any(|e| refined[e].is_none()) {
                degenerate.push((i, j));
                continue;
            }
            match edges.len() {
                2 => segments.push((edges[0], edges[1])),
                4 => {
                    let centre = c.iter().sum::<f64>() / 4.0;
                    if (centre >= 0.0) == (c[0] >= 0.0) {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => degenerate.push((i, j)),
            }
        }
    }

    let mut incident: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    let mut max_res = 0.0f64;
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let walk = |from: EdgeId, used: &mut Vec<bool>| {
            let mut chain = Vec::new();
            let mut edge = from;
            while let Some(&k) = incident[&edge].iter().find(|&&k| !used[k]) {
                used[k] = true;
                let (a, b) = segments[k];
                edge = if a == edge { b } else { a };
                chain.push(edge);
            }
            chain
        };
        let (a, b) = segments[start];
        let forward = walk(b, &mut used);
        let backward = walk(a, &mut used);
        let mut chain: Vec<EdgeId> = backward.into_iter().rev().collect();
        chain.push(a);
        chain.push(b);
        chain.extend(forward);
        let closed = chain.len() > 2 && chain.first() == chain.last();
        let points = chain
            .iter()
            .map(|e| {
                let (p, r) = refined[e].expect("segments use accepted crossings");
                max_res = max_res.max(r);
                p
            })
            .collect();
        polylines.push(Polyline { function_tag: tag, points, closed });
    }

    Ok(TraceResult {
        tag,
        family,
        window,
        grid_n,
        polylines,
        degenerate_cells: degenerate,
        max_vertex_residual: max_res,
    })
}

/// `tag,curve_id,theta1,theta2`, one row per vertex.
pub fn write_polylines_csv<W: Write>(polylines: &[Polyline], mut out: W) -> io::Result<()> {
    writeln!(out, "tag,curve_id,theta1,theta2")?;
    for (id, line) in polylines.iter().enumerate() {
        for (x, y) in &line.points {
            writeln!(out, "{},{},{:.16e},{:.16e}", line.function_tag, id, x, y)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    const S3: PotentialExponent = PotentialExponent::NEWTONIAN;

    #[test]
    fn pfaffian_curve_passes_through_the_square() {
        let r = trace_zero_curve(CurveTag::Pfaffian, FamilyKind::Type2Ring4, Window::default_for(FamilyKind::Type2Ring4), 64, S3).unwrap();
        assert!(r.max_vertex_residual <= VERTEX_TOL);
        let h = PI / 64.0;
        let near = r.polylines.iter().flat_map(|p| &p.points).any(|&(x, y)| {
            (x - 3.0 * FRAC_PI_4).abs() < h && (y - FRAC_PI_4).abs() < h
        });
        assert!(near);
    }

    #[test]
    fn consecutive_points_stay_within_a_cell() {
        let r = trace_zero_curve(CurveTag::Z3, FamilyKind::Symmetric5, Window::default_for(FamilyKind::Symmetric5), 32, S3).unwrap();
        let h = PI / 32.0;
        for p in &r.polylines {
            for w in p.points.windows(2) {
                assert!((w[0].0 - w[1].0).abs() <= h + 1e-12 && (w[0].1 - w[1].1).abs() <= h + 1e-12);
            }
        }
    }

    #[test]
    fn constant_sign_window_is_empty() {
        let w = Window::new((2.0, 2.05), (0.30, 0.35));
        let r = trace_zero_curve(CurveTag::Pfaffian, FamilyKind::Type2Ring4, w, 16, S3).unwrap();
        assert!(r.polylines.is_empty());
        let mut buf = Vec::new();
        write_polylines_csv(&r.polylines, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "tag,curve_id,theta1,theta2\n");
    }

    #[test]
    fn invalid_requests() {
        let w = Window::default_for(FamilyKind::Symmetric5);
        assert!(trace_zero_curve(CurveTag::Z1, FamilyKind::Type2Ring4, w, 32, S3).is_err());
        assert!(trace_zero_curve(CurveTag::Pfaffian, FamilyKind::Symmetric5, w, 32, S3).is_err());
        assert!(trace_zero_curve(CurveTag::Z1, FamilyKind::Symmetric5, w, 8, S3).is_err());
        assert!(trace_zero_curve(CurveTag::Z1, FamilyKind::Symmetric5, Window::new((-1.0, 1.0), (0.0, 1.0)), 32, S3).is_err());
        assert_eq!("Z2".parse::<CurveTag>().unwrap(), CurveTag::Z2);
    }
}
