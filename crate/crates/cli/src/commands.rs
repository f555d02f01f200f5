use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};
use std::fmt;
use std::io;

use coorbital::certify::{
    certify_det_h2_region, certify_theorem1, certify_theorem4, MassStrategy, RegionOptions,
};
use coorbital::geometry::RingConfiguration;
use coorbital::solvers::{
    arc_ordered, is_convex_configuration, region_b_report, region_c_check, solve_1p2p1, solve_symmetric_family,
    trace_zero_curve, write_polylines_csv, Case1p2p1, CurveTag, NewtonOptions, Window,
};
use coorbital::stability::{lemma1_report, DEFAULT_EIGEN_TOL};
use coorbital::system::{
    build_f, expand_family, mass_kernel, pfaffian, positive_mass_region, FamilyKind,
    PositiveMassRegion, SymmetricFamily, DEFAULT_KERNEL_TOL,
};
use coorbital::{Error, MassVector, PotentialExponent};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::angles::{parse_angle, parse_angle_list, parse_number_list, parse_seed_lists};
use crate::output::{emit_csv, emit_json, RunManifest};
use crate::{Cli, Command, Format};

/// Minimum resolved area fraction for a passing `thm5` run.
const H2_MIN_FRACTION: f64 = 0.9;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Collision { .. }) => 3,
            CliError::Lib(Error::CertificationFailed(_)) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(r: Result<T, String>) -> CliResult<T> {
    r.map_err(CliError::Usage)
}

fn manifest(cli: &Cli) -> RunManifest {
    let tagged = serde_json::to_value(&cli.command).unwrap_or(Value::Null);
    let (name, fields) = match tagged {
        Value::Object(map) => map.into_iter().next().unwrap_or((String::new(), Value::Null)),
        Value::String(name) => (name, Value::Null),
        _ => (String::new(), Value::Null),
    };
    let mut params: BTreeMap<String, Value> = match fields {
        Value::Object(m) => m.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    params.insert("s".into(), json!(cli.s));
    params.insert("tol".into(), json!(cli.tol));
    params.insert("grid".into(), json!(cli.grid));
    params.insert("format".into(), json!(cli.format));
    params.insert("threads".into(), json!(cli.threads));
    RunManifest::new(&name, params)
}

fn format_or(cli: &Cli, default: Format, csv_ok: bool) -> CliResult<Format> {
    let f = cli.format.unwrap_or(default);
    if f == Format::Csv && !csv_ok {
        return Err(CliError::Usage("CSV output is only available for trace and solve-1p2p1".into()));
    }
    Ok(f)
}

fn config_from(text: &str, s: PotentialExponent) -> CliResult<RingConfiguration> {
    Ok(RingConfiguration::new(usage(parse_angle_list(text))?, s)?)
}

fn masses_from(text: &str) -> CliResult<MassVector> {
    Ok(MassVector::new(usage(parse_number_list(text))?))
}

fn vecs(v: &[DVector<f64>]) -> Vec<Vec<f64>> {
    v.iter().map(|x| x.iter().copied().collect()).collect()
}

fn normalized(v: &DVector<f64>) -> Vec<f64> {
    let top = v.amax();
    v.iter().map(|x| x / top).collect()
}

pub fn run(cli: &Cli) -> CliResult<u8> {
    let s = PotentialExponent::new(cli.s)?;
    let man = manifest(cli);
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Fmatrix { thetas } => {
            format_or(cli, Format::Json, false)?;
            let config = config_from(thetas, s)?;
            let f = build_f(&config);
            let tol = cli.tol.unwrap_or(DEFAULT_KERNEL_TOL);
            let k = mass_kernel(&f, tol)?;
            let rows: Vec<Vec<f64>> = f.entries().row_iter().map(|r| r.iter().copied().collect()).collect();
            let pf = if config.len() % 2 == 0 { Some(pfaffian(&f)?) } else { None };
            let result = json!({
                "thetas": config.thetas(),
                "s": s.value(),
                "f": rows,
                "singular_values": k.singular_values,
                "tolerance": tol,
                "kernel_dimension": k.dimension(),
                "kernel": vecs(&k.vectors),
                "pfaffian": pf,
                "determinant": f.determinant(),
            });
            emit_json(&man, &result, out)?;
        }
        Command::Masses { thetas } => {
            format_or(cli, Format::Json, false)?;
            let config = config_from(thetas, s)?;
            let f = build_f(&config);
            let k = mass_kernel(&f, cli.tol.unwrap_or(DEFAULT_KERNEL_TOL))?;
            let region = match positive_mass_region(&k.vectors) {
                Ok(PositiveMassRegion::Empty) => json!({"kind": "empty"}),
                Ok(PositiveMassRegion::Ray { direction }) => {
                    json!({"kind": "ray", "sample": normalized(&direction)})
                }
                Ok(PositiveMassRegion::Cone { plus, minus, sample }) => json!({
                    "kind": "cone",
                    "plus": plus,
                    "minus": minus,
                    "sample": normalized(&sample),
                }),
                Err(Error::UnsupportedKernelDimension(d)) => json!({"kind": "unsupported", "dimension": d}),
                Err(e) => return Err(e.into()),
            };
            let result = json!({
                "thetas": config.thetas(),
                "s": s.value(),
                "kernel_dimension": k.dimension(),
                "kernel": vecs(&k.vectors),
                "positive_region": region,
            });
            emit_json(&man, &result, out)?;
        }
        Command::Pfaffian { thetas, family, free } => {
            format_or(cli, Format::Json, false)?;
            let config = match (thetas, family, free) {
                (Some(t), _, _) => config_from(t, s)?,
                (None, Some(fam), Some(fr)) => {
                    let kind: FamilyKind = fam.parse()?;
                    expand_family(&SymmetricFamily::new(kind, usage(parse_angle_list(fr))?), s)?
                }
                _ => return Err(CliError::Usage("give --thetas or --family with --free".into())),
            };
            let value = pfaffian(&build_f(&config))?;
            emit_json(&man, &json!({"thetas": config.thetas(), "s": s.value(), "pfaffian": value}), out)?;
        }
        Command::Stability { thetas, masses } => {
            format_or(cli, Format::Json, false)?;
            let config = config_from(thetas, s)?;
            let report = lemma1_report(&config, &masses_from(masses)?, cli.tol.unwrap_or(DEFAULT_EIGEN_TOL))?;
            emit_json(&man, &report, out)?;
        }
        Command::Solve1p2p1 { m1, case } => {
            let fmt = format_or(cli, Format::Json, true)?;
            let cases: Vec<Case1p2p1> = if case.eq_ignore_ascii_case("all") {
                Case1p2p1::ALL.to_vec()
            } else {
                vec![case.parse()?]
            };
            let lists = cases.into_iter().map(|c| solve_1p2p1(*m1, c, s)).collect::<Result<Vec<_>, _>>()?;
            let total: usize = lists.iter().map(|l| l.roots.len()).sum();
            match fmt {
                Format::Json => emit_json(&man, &json!({"cases": lists, "total_roots": total}), out)?,
                Format::Csv => {
                    let mut body = String::from("case,index,theta3\n");
                    for l in &lists {
                        for (i, r) in l.roots.iter().enumerate() {
                            body.push_str(&format!("{},{},{:.16e}\n", l.case_label, i, r));
                        }
                    }
                    emit_csv(&man, body.as_bytes(), out)?;
                }
            }
        }
        Command::Trace { tag, family, window } => {
            let fmt = format_or(cli, Format::Csv, true)?;
            let tag: CurveTag = tag.parse()?;
            let kind: FamilyKind = family.parse()?;
            let window = match window {
                None => Window::default_for(kind),
                Some(w) => match usage(parse_angle_list(w))?.as_slice() {
                    &[x0, x1, y0, y1] => Window::new((x0, x1), (y0, y1)),
                    _ => return Err(CliError::Usage("--window needs x0,x1,y0,y1".into())),
                },
            };
            let result = trace_zero_curve(tag, kind, window, cli.grid.unwrap_or(256), s)?;
            match fmt {
                Format::Json => emit_json(&man, &result, out)?,
                Format::Csv => {
                    let mut body = Vec::new();
                    write_polylines_csv(&result.polylines, &mut body)?;
                    emit_csv(&man, &body, out)?;
                }
            }
        }
        Command::SolveFamily { family, masses, seeds, random_seeds, convex, seed } => {
            format_or(cli, Format::Json, false)?;
            let kind: FamilyKind = family.parse()?;
            let m = masses_from(masses)?;
            let seeds = match (seeds, random_seeds) {
                (Some(text), None) => usage(parse_seed_lists(text))?,
                (None, Some(k)) => random_family_seeds(kind, *k, *convex, *seed),
                _ => return Err(CliError::Usage("give --seeds or --random-seeds".into())),
            };
            let report = solve_symmetric_family(kind, &m, &seeds, s, &NewtonOptions::default())?;
            let annotated: Vec<Value> = report
                .solutions
                .iter()
                .map(|sol| {
                    let config = RingConfiguration::new(sol.thetas.clone(), s).ok();
                    let convex = config.as_ref().is_some_and(is_convex_configuration);
                    let region = match (kind, convex, &config) {
                        (FamilyKind::Type2Ring4, true, Some(c)) => {
                            arc_ordered(c).and_then(|a| region_b_report(&a).ok()).map(|r| r.inside)
                        }
                        // the mirror image (-θ₁, -θ₂) is the same configuration
                        (FamilyKind::Symmetric5, true, _) => {
                            region_c_check(sol.free_angles[0].abs(), sol.free_angles[1].abs()).ok()
                        }
                        _ => None,
                    };
                    json!({"solution": sol, "convex": convex, "in_region": region})
                })
                .collect();
            let result = json!({
                "family": kind,
                "seed_count": seeds.len(),
                "solutions": annotated,
                "failures": report.failures,
            });
            emit_json(&man, &result, out)?;
        }
        Command::RegionCheck { region, thetas, theta1, theta2 } => {
            format_or(cli, Format::Json, false)?;
            let result = if region == "b" {
                let t = thetas.as_ref().ok_or_else(|| CliError::Usage("region b needs --thetas".into()))?;
                serde_json::to_value(region_b_report(&config_from(t, s)?)?).map_err(io::Error::other)?
            } else {
                let (Some(a), Some(b)) = (theta1, theta2) else {
                    return Err(CliError::Usage("region c needs --theta1 and --theta2".into()));
                };
                let (a, b) = (usage(parse_angle(a))?, usage(parse_angle(b))?);
                json!({"theta1": a, "theta2": b, "inside": region_c_check(a, b)?})
            };
            emit_json(&man, &result, out)?;
        }
        Command::Certify { target, strategy, max_depth, max_boxes } => {
            format_or(cli, Format::Json, false)?;
            let newtonian_only = |name: &str| {
                if cli.s != 3.0 {
                    Err(CliError::Usage(format!("{name} is a Newtonian (s = 3) certificate")))
                } else {
                    Ok(())
                }
            };
            let passed = match target.as_str() {
                "thm1" | "thm4n6" | "thm4n8" => {
                    newtonian_only(target)?;
                    let report = match target.as_str() {
                        "thm1" => certify_theorem1()?,
                        "thm4n6" => certify_theorem4(6)?,
                        _ => certify_theorem4(8)?,
                    };
                    emit_json(&man, &report, out)?;
                    report.passed
                }
                "thm5" => {
                    let defaults = RegionOptions::default();
                    let opts = RegionOptions {
                        grid_n: cli.grid.unwrap_or(defaults.grid_n),
                        max_depth: max_depth.unwrap_or(defaults.max_depth),
                        max_boxes: max_boxes.unwrap_or(defaults.max_boxes),
                        strategy: parse_strategy(strategy)?,
                        s: s.value(),
                    };
                    let (coverage, complete) = match certify_det_h2_region(&opts) {
                        Ok(r) => (r, true),
                        Err(Error::ResourceLimit { partial }) => (*partial, false),
                        Err(e) => return Err(e.into()),
                    };
                    let passed = complete && coverage.passes(H2_MIN_FRACTION);
                    let result = json!({
                        "target": "thm5",
                        "passed": passed,
                        "complete": complete,
                        "min_certified_fraction": H2_MIN_FRACTION,
                        "coverage": coverage,
                    });
                    emit_json(&man, &result, out)?;
                    passed
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown certificate `{other}`; expected thm1, thm4n6, thm4n8 or thm5"
                    )))
                }
            };
            if !passed {
                eprintln!("certification failed for {target}");
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn parse_strategy(text: &str) -> CliResult<MassStrategy> {
    let t = text.trim().to_ascii_lowercase();
    match t.split_once(':') {
        None if t == "equal" => Ok(MassStrategy::Equal),
        None if t == "kernel" => Ok(MassStrategy::Kernel),
        Some(("slices", k)) => k
            .trim()
            .parse::<usize>()
            .map(|divisions| MassStrategy::Slices { divisions })
            .map_err(|_| CliError::Usage(format!("bad slice count in `{text}`"))),
        Some(("fixed", list)) => match usage(parse_number_list(list))?.as_slice() {
            &[m1, m2, m3] => Ok(MassStrategy::Fixed { m1, m2, m3 }),
            _ => Err(CliError::Usage("fixed strategy needs three masses".into())),
        },
        _ => Err(CliError::Usage(format!("unknown mass strategy `{text}`"))),
    }
}

/// Uniform seeds in the admissible free-angle region of a family.
fn random_family_seeds(kind: FamilyKind, count: usize, convex: bool, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = if convex { FRAC_PI_2 } else { PI };
    (0..count)
        .map(|_| match kind {
            FamilyKind::Symmetric5 => {
                let t2 = rng.gen_range(FRAC_PI_6..FRAC_PI_3);
                vec![rng.gen_range(t2..FRAC_PI_2), t2]
            }
            FamilyKind::Type1Ring4 => vec![rng.gen_range(0.0..PI)],
            FamilyKind::Type1Ring6 => {
                let mut v = [rng.gen_range(0.0..PI), rng.gen_range(0.0..PI)];
                v.sort_by(f64::total_cmp);
                v.to_vec()
            }
            _ => {
                let mut v: Vec<f64> = (0..kind.free_count()).map(|_| rng.gen_range(0.0..top)).collect();
                v.sort_by(|a, b| b.total_cmp(a));
                v
            }
        })
        .collect()
}
