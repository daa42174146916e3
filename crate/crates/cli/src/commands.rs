use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use antipodes::counting::{count_pairs_brute, count_pairs_grid, count_pairs_metric};
use antipodes::experiments::{
    dyadic_range, fit_exponent, floor_violations, search_restarts, svg_loglog, Schedule, Start,
    SweepRow,
};
use antipodes::generators::{star_metric, Family, GeneratorSpec};
use antipodes::geometry::Epsilon;
use antipodes::graph::{
    annuli_intersection, common_neighbor_profile, default_forbidden_radius, lens_cover_audit,
};
use antipodes::io as text;
use antipodes::pipeline::certify;

use crate::{
    BoundArgs, CountArgs, Engine, EpsListArgs, FamilyArg, FitArgs, GenSpecArgs, GenerateArgs,
    LensArgs, ProfileArgs, SearchArgs, StartArg, Status, SweepArgs,
};

const SEARCH_NOTE: &str =
    "heuristic annealing result: evidence about low ratios, not an optimality claim";

fn epsilon(v: f64) -> Result<Epsilon> {
    Epsilon::new(v).with_context(|| format!("invalid --eps {v}"))
}

/// Prints `value` as a JSON object with the run configuration under
/// `"config"`.
fn emit(config: Value, value: impl Serialize) -> Result<()> {
    let mut v = serde_json::to_value(value)?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| anyhow!("output is not a JSON object"))?;
    obj.insert("config".into(), config);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, &v)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| {
        format!("cannot create {}", path.display())
    })?))
}

/// Runs `f` against the file at `path`, or stdout when absent.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn load_text(path: &Path) -> Result<String> {
    text::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn family(f: FamilyArg) -> Result<Family> {
    Ok(match f {
        FamilyArg::Circle => Family::Circle,
        FamilyArg::Reuleaux => Family::Reuleaux,
        FamilyArg::Polygon => Family::Polygon,
        FamilyArg::SphereD => Family::SphereD,
        FamilyArg::OriginPlusCap => Family::OriginPlusCap,
        FamilyArg::TwoClusters => Family::TwoClusters,
        FamilyArg::RandomDisk => Family::RandomDisk,
        FamilyArg::Star => bail!("the star metric is not a point set; use it with `generate`"),
    })
}

fn generator(a: &GenSpecArgs) -> Result<GeneratorSpec> {
    let mut spec = GeneratorSpec::new(family(a.family)?, a.n)
        .with_dim(a.dim)
        .with_seed(a.seed);
    if let Some(k) = a.k {
        spec = spec.with_k(k);
    }
    Ok(spec)
}

pub fn generate(a: &GenerateArgs, config: Value) -> Result<Status> {
    if a.spec.family == FamilyArg::Star {
        let m = star_metric(a.spec.n)?;
        with_output(a.out.as_deref(), |w| Ok(text::write_metric(w, &m)?))?;
        if a.out.is_some() {
            emit(
                config,
                serde_json::json!({ "n": m.len(), "diameter": m.diameter() }),
            )?;
        }
        return Ok(Status::Ok);
    }
    let mut spec = generator(&a.spec)?;
    if let Some(e) = a.eps {
        spec = spec.with_epsilon(epsilon(e)?);
    }
    let mut ps = spec.generate()?;
    if a.normalize {
        ps = ps.normalize_to_unit_diameter()?;
    }
    with_output(a.out.as_deref(), |w| Ok(text::write_point_set(w, &ps)?))?;
    if a.out.is_some() {
        emit(
            config,
            serde_json::json!({ "n": ps.len(), "dim": ps.dim(), "diameter": ps.diameter() }),
        )?;
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct CountOut {
    n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    near: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    far: Option<f64>,
    neighbors: u64,
    antipodes: u64,
}

pub fn count(a: &CountArgs, config: Value) -> Result<Status> {
    let raw = load_text(&a.input)?;
    let out = if a.metric {
        let m = text::parse_metric(&raw).with_context(|| format!("in {}", a.input.display()))?;
        let (near, far) = (a.near.unwrap_or_default(), a.far.unwrap_or_default());
        let c = count_pairs_metric(&m, near, far)?;
        CountOut {
            n: c.n,
            epsilon: None,
            near: Some(near),
            far: Some(far),
            neighbors: c.neighbors,
            antipodes: c.antipodes,
        }
    } else {
        let eps = epsilon(a.eps.ok_or_else(|| anyhow!("--eps is required"))?)?;
        let ps =
            text::parse_point_set(&raw).with_context(|| format!("in {}", a.input.display()))?;
        let c = match a.engine {
            Engine::Brute => count_pairs_brute(&ps, eps)?,
            Engine::Grid => count_pairs_grid(&ps, eps)?,
        };
        CountOut {
            n: c.n,
            epsilon: Some(eps.value()),
            near: None,
            far: None,
            neighbors: c.neighbors,
            antipodes: c.antipodes,
        }
    };
    emit(config, out)?;
    Ok(Status::Ok)
}

pub fn bound(a: &BoundArgs, config: Value) -> Result<Status> {
    let eps = epsilon(a.eps)?;
    let ps = text::parse_point_set(&load_text(&a.input)?)
        .with_context(|| format!("in {}", a.input.display()))?;
    let cert = certify(&ps, eps)?;
    if let Some(p) = &a.emit_matrix {
        let mut w = create(p)?;
        text::write_box_graph(&mut w, &cert.boxes, &cert.matrix)?;
        w.flush()?;
    }
    let ok = cert.report.chain_ok;
    emit(config, &cert.report)?;
    Ok(if ok { Status::Ok } else { Status::Violation })
}

pub fn lens(a: &LensArgs, config: Value) -> Result<Status> {
    let eps = epsilon(a.eps)?;
    let g = annuli_intersection(a.d, eps)?;
    let mut v = serde_json::to_value(g)?;
    if a.audit {
        v["audit"] = serde_json::to_value(lens_cover_audit(a.d, eps)?)?;
    }
    emit(config, v)?;
    Ok(Status::Ok)
}

pub fn profile(a: &ProfileArgs, config: Value) -> Result<Status> {
    let g = text::parse_box_graph(&load_text(&a.matrix)?)
        .with_context(|| format!("in {}", a.matrix.display()))?;
    let radius = match (a.radius, a.eps) {
        (Some(r), _) => r,
        (None, Some(e)) => default_forbidden_radius(epsilon(e)?),
        (None, None) => bail!("give --radius or --eps"),
    };
    let p = common_neighbor_profile(&g, radius)?;
    with_output(a.out.as_deref(), |w| {
        let mut csv = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        for r in &p.rows {
            csv.serialize(r)?;
        }
        csv.flush()?;
        Ok(())
    })?;
    log::info!("c_emp = {}, max |N_v|/√k = {}", p.c_emp, p.forbidden_ratio);
    if let Some(s) = &a.summary {
        let mut v = serde_json::to_value(&p)?;
        v["config"] = config;
        let mut w = create(s)?;
        serde_json::to_writer_pretty(&mut w, &v)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(Status::Ok)
}

fn eps_list(a: &EpsListArgs) -> Result<Vec<Epsilon>> {
    match (&a.eps, &a.eps_dyadic) {
        (Some(v), None) => v.iter().map(|&e| epsilon(e)).collect(),
        (None, Some(r)) => {
            let (lo, hi) = r
                .split_once(':')
                .ok_or_else(|| anyhow!("--eps-dyadic expects a:b, got '{r}'"))?;
            let lo: u32 = lo
                .trim()
                .parse()
                .with_context(|| format!("bad --eps-dyadic '{r}'"))?;
            let hi: u32 = hi
                .trim()
                .parse()
                .with_context(|| format!("bad --eps-dyadic '{r}'"))?;
            Ok(dyadic_range(lo, hi)?)
        }
        _ => bail!("give --eps or --eps-dyadic"),
    }
}

const BOUND_COLUMNS: [&str; 9] = [
    "k",
    "k_times_eps",
    "quad_form",
    "norm_sq",
    "lambda1",
    "trace_mtm",
    "strip_points",
    "eigen_iterations",
    "chain_ok",
];

fn write_sweep_csv(w: &mut dyn Write, rows: &[SweepRow], with_bounds: bool) -> Result<()> {
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let mut header = vec!["epsilon", "n", "neighbors", "antipodes", "ratio"];
    if with_bounds {
        header.extend(BOUND_COLUMNS);
    }
    csv.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.epsilon.to_string(),
            r.n.to_string(),
            r.neighbors.to_string(),
            r.antipodes.to_string(),
            r.ratio.map(|q| q.to_string()).unwrap_or_default(),
        ];
        if let Some(b) = &r.bounds {
            rec.extend([
                b.k.to_string(),
                b.k_times_eps.to_string(),
                b.quad_form.to_string(),
                b.norm_sq.to_string(),
                b.lambda1.to_string(),
                b.trace_mtm.to_string(),
                b.strip_points.to_string(),
                b.eigen_iterations.to_string(),
                b.chain_ok.to_string(),
            ]);
        }
        csv.write_record(&rec)?;
    }
    csv.flush()?;
    Ok(())
}

fn write_svg(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let fit = match fit_exponent(rows) {
        Ok(f) => Some(f),
        Err(e) => {
            log::warn!("plot without fitted line: {e}");
            None
        }
    };
    let mut w = create(path)?;
    w.write_all(svg_loglog(rows, fit.as_ref()).as_bytes())?;
    w.flush()?;
    Ok(())
}

fn report_floor(rows: &[SweepRow]) {
    for r in floor_violations(rows) {
        eprintln!(
            "warning: ε = {} has neighbors/antipodes below the theorem floor ({} / {})",
            r.epsilon, r.neighbors, r.antipodes
        );
    }
}

pub fn sweep(a: &SweepArgs, _config: Value) -> Result<Status> {
    let spec = generator(&a.spec)?;
    let eps = eps_list(&a.eps)?;
    let rows = antipodes::experiments::sweep(&spec, &eps, a.with_bounds)?;
    with_output(a.out.as_deref(), |w| {
        write_sweep_csv(w, &rows, a.with_bounds)
    })?;
    if let Some(p) = &a.svg {
        write_svg(p, &rows)?;
    }
    report_floor(&rows);
    let violated = rows
        .iter()
        .any(|r| r.bounds.as_ref().is_some_and(|b| !b.chain_ok));
    Ok(if violated {
        Status::Violation
    } else {
        Status::Ok
    })
}

#[derive(Deserialize)]
struct CsvRow {
    epsilon: f64,
    n: u64,
    neighbors: u64,
    antipodes: u64,
    ratio: Option<f64>,
}

pub fn fit(a: &FitArgs, config: Value) -> Result<Status> {
    let file =
        File::open(&a.input).with_context(|| format!("cannot read {}", a.input.display()))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<CsvRow>().enumerate() {
        let r = rec.with_context(|| format!("{} row {}", a.input.display(), i + 1))?;
        let eps = epsilon(r.epsilon)?;
        rows.push(SweepRow {
            epsilon: r.epsilon,
            n: r.n,
            neighbors: r.neighbors,
            antipodes: r.antipodes,
            ratio: r.ratio,
            floor_ok: r.neighbors as f64
                >= antipodes::counting::theorem_floor(eps) * r.antipodes as f64,
            bounds: None,
        });
    }
    let f = fit_exponent(&rows)?;
    if let Some(p) = &a.svg {
        write_svg(p, &rows)?;
    }
    emit(config, f)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct RestartSummary {
    seed: u64,
    best_objective: f64,
    accepted: usize,
}

pub fn search(a: &SearchArgs, config: Value) -> Result<Status> {
    let eps = epsilon(a.eps)?;
    if a.restarts == 0 {
        bail!("--restarts must be at least 1");
    }
    let schedule = Schedule {
        proposals: a.proposals,
        cooling: a.cooling,
        trace_every: a.trace_every,
        start: match a.start {
            StartArg::Circle => Start::Circle,
            StartArg::RandomDisk => Start::RandomDisk,
        },
        ..Schedule::default()
    };
    let seeds: Vec<u64> = (0..a.restarts as u64)
        .map(|i| a.seed.wrapping_add(i))
        .collect();
    let states = search_restarts(a.n, eps, &seeds, &schedule)?;
    let summary: Vec<RestartSummary> = states
        .iter()
        .map(|s| RestartSummary {
            seed: s.seed,
            best_objective: s.best_objective,
            accepted: s.accepted,
        })
        .collect();
    let best = states
        .into_iter()
        .reduce(|a, b| {
            if b.best_objective < a.best_objective {
                b
            } else {
                a
            }
        })
        .expect("at least one restart");
    if let Some(p) = &a.out {
        text::save_point_set(p, &best.best)?;
    }
    let mut v = serde_json::to_value(&best)?;
    v["diameter"] = serde_json::json!(best.best.diameter());
    v["floor"] = serde_json::json!(antipodes::counting::theorem_floor(eps));
    v["restarts"] = serde_json::to_value(summary)?;
    v["note"] = serde_json::json!(SEARCH_NOTE);
    if !best.best_counts.satisfies_floor(eps) {
        eprintln!("warning: search found a ratio below the theorem floor");
    }
    emit(config, v)?;
    Ok(Status::Ok)
}
