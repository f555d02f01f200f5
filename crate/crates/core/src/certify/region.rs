//! Box-subdivision certificate that `det(H₂)` does not vanish at convex
//! symmetric 1+5 central configurations.
//!
//! The region is `C = {π/6 < θ₂ < π/3, θ₂ < θ₁ < π/2}` (the gap condition
//! `θ₁ - θ₂ < π/3` is implied there). A box is resolved when, for every
//! mass choice of the strategy, either the reduced equations are certified
//! unsolvable on the box or `det(H₂)` is certified nonzero on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{interval_f, interval_h, CertifiedSign, Interval};
use crate::error::{Error, Result};

/// How the positive mass degrees of freedom are swept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MassStrategy {
    /// `m₁ = m₂ = m₃`.
    Equal,
    Fixed { m1: f64, m2: f64, m3: f64 },
    /// Interior lattice points `(a, b, c)/divisions` of the mass simplex;
    /// a box must resolve for every one of them.
    Slices { divisions: usize },
    /// The kernel direction `(Z₁, -Z₂, Z₃)` of the reduced system, which
    /// covers every positive symmetric mass vector at once.
    Kernel,
}

impl MassStrategy {
    fn fixed_masses(&self) -> Vec<[f64; 3]> {
        match *self {
            MassStrategy::Equal => vec![[1.0, 1.0, 1.0]],
            MassStrategy::Fixed { m1, m2, m3 } => vec![[m1, m2, m3]],
            MassStrategy::Slices { divisions: k } => {
                let mut out = Vec::new();
                for a in 1..k {
                    for b in 1..(k - a) {
                        let c = k - a - b;
                        out.push([a as f64, b as f64, c as f64]);
                    }
                }
                out
            }
            MassStrategy::Kernel => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionOptions {
    pub grid_n: usize,
    pub max_depth: u32,
    pub max_boxes: usize,
    pub strategy: MassStrategy,
    pub s: f64,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions {
            grid_n: 32,
            max_depth: 8,
            max_boxes: 4_000_000,
            strategy: MassStrategy::Equal,
            s: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxOutcome {
    Outside,
    NoCentralConfiguration,
    DetPositive,
    DetNegative,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub id: String,
    pub level: u32,
    pub theta1: Interval,
    pub theta2: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub strategy: MassStrategy,
    pub grid_n: usize,
    pub max_depth: u32,
    pub s: f64,
    pub total_area: f64,
    pub certified_area: f64,
    pub certified_fraction: f64,
    pub boxes_processed: usize,
    pub no_cc_boxes: usize,
    pub det_positive_boxes: usize,
    pub det_negative_boxes: usize,
    /// Boxes on which `det(H₂) = 0` was certified; interval evaluation can
    /// only certify signs, so this stays 0 unless a point box hits an exact zero.
    pub det_zero_certified_boxes: usize,
    pub unresolved_area: f64,
    pub unresolved: Vec<BoxRecord>,
}

impl CoverageReport {
    /// No box certified `det(H₂) = 0` and at least `min_fraction` of the area is resolved.
    pub fn passes(&self, min_fraction: f64) -> bool {
        self.det_zero_certified_boxes == 0 && self.certified_fraction > min_fraction
    }
}

/// Area of `C`, which is `π²/24`.
pub fn region_c_area() -> f64 {
    std::f64::consts::PI * std::f64::consts::PI / 24.0
}

/// Area of `[x0, x1] × [y0, y1] ∩ C` with `x = θ₁`, `y = θ₂`.
fn clipped_area(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};
    let ya = y0.max(FRAC_PI_6);
    let yb = y1.min(FRAC_PI_3);
    if ya >= yb {
        return 0.0;
    }
    let xr = x1.min(FRAC_PI_2);
    let len = |y: f64| (xr - x0.max(y)).max(0.0);
    let mut cuts = vec![ya, yb];
    for c in [x0, xr] {
        if c > ya && c < yb {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).map(|w| 0.5 * (len(w[0]) + len(w[1])) * (w[1] - w[0])).sum()
}

struct PairEnclosures {
    f12: Interval,
    f13: Interval,
    f14: Interval,
    f15: Interval,
    f23: Interval,
    f24: Interval,
    h12: Interval,
    h13: Interval,
    h14: Interval,
    h15: Interval,
    h23: Interval,
    h24: Interval,
}

fn pair_enclosures(t1: Interval, t2: Interval, s: f64) -> Result<PairEnclosures> {
    let d = [t1 - t2, t1, t1 + t2, t1 * 2.0, t2, t2 * 2.0];
    let f = |k: usize| interval_f(d[k], s);
    let h = |k: usize| interval_h(d[k], s);
    Ok(PairEnclosures {
        f12: f(0)?,
        f13: f(1)?,
        f14: f(2)?,
        f15: f(3)?,
        f23: f(4)?,
        f24: f(5)?,
        h12: h(0)?,
        h13: h(1)?,
        h14: h(2)?,
        h15: h(3)?,
        h23: h(4)?,
        h24: h(5)?,
    })
}

fn det_h2(p: &PairEnclosures, m: [Interval; 3]) -> Interval {
    let [m1, m2, m3] = m;
    let a = p.h12 + p.h14;
    let d11 = m1 * 2.0 * (p.h15 * m1 * 2.0 + a * m2 + p.h13 * m3);
    let d22 = m2 * 2.0 * (a * m1 + p.h24 * m2 * 2.0 + p.h23 * m3);
    let off = m1 * m2 * 2.0 * (p.h14 - p.h12);
    d11 * d22 - off.sqr()
}

fn det_outcome(det: Interval) -> Option<BoxOutcome> {
    match det.sign() {
        CertifiedSign::Positive => Some(BoxOutcome::DetPositive),
        CertifiedSign::Negative => Some(BoxOutcome::DetNegative),
        CertifiedSign::ContainsZero => None,
    }
}

fn merge(acc: BoxOutcome, next: BoxOutcome) -> BoxOutcome {
    match (acc, next) {
        (BoxOutcome::Unresolved, _) | (_, BoxOutcome::Unresolved) => BoxOutcome::Unresolved,
        (BoxOutcome::NoCentralConfiguration, x) => x,
        (x, _) => x,
    }
}

/// Classifies one box `θ₁ × θ₂` of the symmetric 1+5 parameter plane.
pub fn classify_box(theta1: Interval, theta2: Interval, strategy: &MassStrategy, s: f64) -> Result<BoxOutcome> {
    if theta2.lo >= theta1.hi {
        return Err(Error::Domain(format!("box {theta1} × {theta2} has θ₂ ≥ θ₁ throughout")));
    }
    let p = match pair_enclosures(theta1, theta2, s) {
        Ok(p) => p,
        Err(Error::Collision { .. }) => return Ok(BoxOutcome::Unresolved),
        Err(e) => return Err(e),
    };
    if let MassStrategy::Kernel = strategy {
        let z1 = p.f23 * (p.f12 + p.f14) - p.f13 * p.f24;
        let z2 = p.f13 * (p.f12 - p.f14) + p.f15 * p.f23;
        let z3 = p.f12.sqr() - p.f14.sqr() + p.f15 * p.f24;
        let k = [z1, -z2, z3];
        let signs: Vec<CertifiedSign> = k.iter().map(|x| x.sign()).collect();
        let mixed = signs.contains(&CertifiedSign::Positive) && signs.contains(&CertifiedSign::Negative);
        if mixed {
            return Ok(BoxOutcome::NoCentralConfiguration);
        }
        return Ok(det_outcome(det_h2(&p, k)).unwrap_or(BoxOutcome::Unresolved));
    }
    let mut acc = BoxOutcome::NoCentralConfiguration;
    for [m1, m2, m3] in strategy.fixed_masses() {
        let row1 = p.f15 * m1 + (p.f12 + p.f14) * m2 + p.f13 * m3;
        let row2 = (p.f14 - p.f12) * m1 + p.f24 * m2 + p.f23 * m3;
        let outcome = if row1.sign().is_certain() || row2.sign().is_certain() {
            BoxOutcome::NoCentralConfiguration
        } else {
            let m = [Interval::point(m1), Interval::point(m2), Interval::point(m3)];
            det_outcome(det_h2(&p, m)).unwrap_or(BoxOutcome::Unresolved)
        };
        acc = merge(acc, outcome);
        if acc == BoxOutcome::Unresolved {
            break;
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy)]
struct Cell {
    level: u32,
    i: u64,
    j: u64,
}

struct Grid {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    n: u64,
}

impl Grid {
    // same rational i/denom always rounds to the same float, so children share parent edges exactly
    fn coord(lo: f64, hi: f64, i: u64, denom: u64) -> f64 {
        if i == denom {
            hi
        } else {
            lo + (hi - lo) * (i as f64 / denom as f64)
        }
    }

    fn bounds(&self, c: Cell) -> (Interval, Interval) {
        let denom = self.n << c.level;
        let t1 = Interval::new(Grid::coord(self.x0, self.x1, c.i, denom), Grid::coord(self.x0, self.x1, c.i + 1, denom));
        let t2 = Interval::new(Grid::coord(self.y0, self.y1, c.j, denom), Grid::coord(self.y0, self.y1, c.j + 1, denom));
        (t1, t2)
    }
}

fn outside_c(t1: Interval, t2: Interval) -> bool {
    let pi6 = Interval::PI / 6.0;
    let pi3 = Interval::PI / 3.0;
    let pi2 = Interval::PI / 2.0;
    t2.hi <= pi6.lo || t2.lo >= pi3.hi || t1.lo >= pi2.hi || t1.hi <= t2.lo
}

fn record(grid: &Grid, c: Cell) -> BoxRecord {
    let (theta1, theta2) = grid.bounds(c);
    BoxRecord { id: format!("L{}:{}:{}", c.level, c.i, c.j), level: c.level, theta1, theta2 }
}

/// Adaptive subdivision over `C`, level by level. Each level is classified
/// in parallel and merged in box order, so the report is deterministic.
pub fn certify_det_h2_region(opts: &RegionOptions) -> Result<CoverageReport> {
    if opts.grid_n < 32 {
        return Err(Error::Domain(format!("grid_n must be at least 32, got {}", opts.grid_n)));
    }
    if let MassStrategy::Slices { divisions } = opts.strategy {
        if divisions < 3 {
            return Err(Error::Domain("mass slices need at least 3 divisions".into()));
        }
    }
    let grid = Grid {
        x0: (Interval::PI / 6.0).lo,
        x1: (Interval::PI / 2.0).hi,
        y0: (Interval::PI / 6.0).lo,
        y1: (Interval::PI / 3.0).hi,
        n: opts.grid_n as u64,
    };
    let mut report = CoverageReport {
        strategy: opts.strategy.clone(),
        grid_n: opts.grid_n,
        max_depth: opts.max_depth,
        s: opts.s,
        total_area: region_c_area(),
        certified_area: 0.0,
        certified_fraction: 0.0,
        boxes_processed: 0,
        no_cc_boxes: 0,
        det_positive_boxes: 0,
        det_negative_boxes: 0,
        det_zero_certified_boxes: 0,
        unresolved_area: 0.0,
        unresolved: Vec::new(),
    };

    let mut queue: Vec<Cell> = (0..grid.n)
        .flat_map(|i| (0..grid.n).map(move |j| Cell { level: 0, i, j }))
        .collect();
    let area_of = |c: Cell| {
        let (t1, t2) = grid.bounds(c);
        clipped_area(t1.lo, t1.hi, t2.lo, t2.hi)
    };

    for level in 0..=opts.max_depth {
        if queue.is_empty() {
            break;
        }
        if report.boxes_processed + queue.len() > opts.max_boxes {
            for c in &queue {
                report.unresolved_area += area_of(*c);
                report.unresolved.push(record(&grid, *c));
            }
            finish(&mut report);
            return Err(Error::ResourceLimit { partial: Box::new(report) });
        }
        let outcomes: Vec<Result<BoxOutcome>> = queue
            .par_iter()
            .map(|&c| {
                let (t1, t2) = grid.bounds(c);
                if outside_c(t1, t2) {
                    Ok(BoxOutcome::Outside)
                } else {
                    classify_box(t1, t2, &opts.strategy, opts.s)
                }
            })
            .collect();
        let mut next = Vec::new();
        for (c, outcome) in queue.iter().zip(outcomes) {
            report.boxes_processed += 1;
            let outcome = outcome?;
            match outcome {
                BoxOutcome::Outside => {}
                BoxOutcome::NoCentralConfiguration => {
                    report.no_cc_boxes += 1;
                    report.certified_area += area_of(*c);
                }
                BoxOutcome::DetPositive | BoxOutcome::DetNegative => {
                    if outcome == BoxOutcome::DetPositive {
                        report.det_positive_boxes += 1;
                    } else {
                        report.det_negative_boxes += 1;
                    }
                    report.certified_area += area_of(*c);
                }
                BoxOutcome::Unresolved => {
                    if level < opts.max_depth {
                        for (di, dj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                            next.push(Cell { level: level + 1, i: 2 * c.i + di, j: 2 * c.j + dj });
                        }
                    } else {
                        report.unresolved_area += area_of(*c);
                        report.unresolved.push(record(&grid, *c));
                    }
                }
            }
        }
        queue = next;
    }
    finish(&mut report);
    Ok(report)
}

fn finish(report: &mut CoverageReport) {
    report.certified_fraction = report.certified_area / report.total_area;
    report.unresolved.sort_by(|a, b| a.level.cmp(&b.level).then_with(|| a.id.cmp(&b.id)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    #[test]
    fn clipped_area_of_whole_region() {
        let a = clipped_area(0.0, 2.0, 0.0, 2.0);
        assert!((a - region_c_area()).abs() < 1e-14);
        let half = clipped_area(0.0, 2.0, FRAC_PI_6, 0.25 * (FRAC_PI_6 + FRAC_PI_3) * 2.0);
        assert!(half > 0.0 && half < a);
        assert_eq!(clipped_area(0.0, FRAC_PI_6, 0.0, 2.0), 0.0);
    }

    #[test]
    fn infeasible_box_is_rejected() {
        let r = classify_box(Interval::new(0.5, 0.6), Interval::new(0.7, 0.8), &MassStrategy::Equal, 3.0);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn diagonal_box_is_unresolved() {
        let r = classify_box(Interval::new(0.6, 0.7), Interval::new(0.6, 0.7), &MassStrategy::Equal, 3.0);
        assert_eq!(r.unwrap(), BoxOutcome::Unresolved);
    }

    #[test]
    fn small_grid_is_rejected() {
        let o = RegionOptions { grid_n: 16, ..Default::default() };
        assert!(certify_det_h2_region(&o).is_err());
    }

    #[test]
    fn resource_limit_carries_partial_report() {
        let o = RegionOptions { max_boxes: 1500, ..Default::default() };
        match certify_det_h2_region(&o) {
            Err(Error::ResourceLimit { partial }) => {
                assert!(partial.boxes_processed > 0);
                assert!(partial.certified_fraction < 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn slices_enumerate_interior_points() {
        let m = MassStrategy::Slices { divisions: 4 }.fixed_masses();
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|x| x.iter().all(|&v| v > 0.0) && x.iter().sum::<f64>() == 4.0));
    }
}
