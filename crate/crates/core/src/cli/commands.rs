use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::table::{emit, Cell, Manifest, Table};
use super::{
    DistArgs, ExponentArg, Failure, Format, Grid, LimitArgs, OutputArgs, ScanArgs, Tolerances,
    VerifyArgs, EXIT_OK, EXIT_PARAMS, EXIT_VERIFY,
};
use crate::coefficients::{
    coeff_su11, coeff_su2, distribution_su11, distribution_su2, limit_comparison_su11,
    limit_comparison_su2, ExponentForm, LimitMetric,
};
use crate::error::Error;
use crate::hamiltonians::eigencheck as spectral_check;
use crate::oracle::{build_generators, displacement_oracle, oracle_state, Truncation};
use crate::params::{AlgebraKind, DnsParams, Su11Params, Su2Params};
use crate::squeezing::squeezing_scan;
use crate::stats::{self, magnitude_for_abscissa, Classification};

/// Largest su(2) label `oracle-verify` accepts.
const MAX_VERIFY_LABEL: u32 = 60;
const HERMITICITY_TOLERANCE: f64 = 1e-12;

fn write(table: &Table, request: &impl Serialize, output: &OutputArgs) -> Result<(), Failure> {
    let tolerances: Tolerances = output.tolerance_profile.tolerances();
    let manifest = Manifest::new(json!(request), json!(tolerances));
    let text = match output.format {
        Format::Csv => table.to_csv(&manifest),
        Format::Json => table.to_json(&manifest),
    };
    emit(&text, output.out.as_deref())?;
    Ok(())
}

fn phases(single: Option<f64>, grid: Option<Grid>, default: Grid) -> Vec<f64> {
    match single {
        Some(p) => vec![p],
        None => grid.unwrap_or(default).values(),
    }
}

/// The exit code of the first error when every cell failed.
fn all_failed<'a>(mut errors: impl Iterator<Item = Option<&'a Error>>) -> Option<Failure> {
    let mut first = None;
    for e in errors.by_ref() {
        match e {
            None => return None,
            Some(e) if first.is_none() => first = Some(e.clone()),
            Some(_) => {}
        }
    }
    first.map(Failure::from)
}

pub fn dist(a: &DistArgs) -> Result<u8, Failure> {
    let kind = AlgebraKind::from(a.algebra);
    let p = DnsParams::new(kind, a.label, a.n, a.magnitude, a.phase)?;
    let probs = match &p {
        DnsParams::Su2(p) => distribution_su2(p)?.probs,
        DnsParams::Su11(p) => distribution_su11(p, Truncation::Auto)?.probs,
    };
    let oracle =
        oracle_state(kind, a.label, a.n, a.magnitude, a.phase, Truncation::Auto)?.probabilities();

    let mut t = Table::new(&["m", "probability", "closed_form_vs_oracle_delta"]);
    for (m, &prob) in probs.iter().enumerate() {
        let delta = (prob - oracle.get(m).copied().unwrap_or(0.0)).abs();
        t.push(vec![m.into(), prob.into(), delta.into()]);
    }
    write(&t, a, &a.output)?;
    Ok(EXIT_OK)
}

fn default_magnitudes(kind: AlgebraKind) -> Grid {
    match kind {
        AlgebraKind::Su2 => Grid::new(0.0, FRAC_PI_2, 101),
        AlgebraKind::Su11 => Grid::new(0.0, 1.5, 101),
    }
}

pub fn qscan(a: &ScanArgs) -> Result<u8, Failure> {
    let kind = AlgebraKind::from(a.algebra);
    let phase = a.phase.unwrap_or(0.0);
    let boundary = stats::q_boundary(kind, a.label, a.n)?;

    let row = |magnitude: f64, tag: Option<&str>| -> Result<Vec<Cell>, Failure> {
        let p = DnsParams::new(kind, a.label, a.n, magnitude, phase)?;
        let qp = stats::q_prime(&p);
        let (q, class) = match stats::mandel_q(&p) {
            Ok(s) => (s.q, s.classification),
            Err(Error::UndefinedQ) => (f64::NAN, Classification::of(qp)),
            Err(e) => return Err(e.into()),
        };
        Ok(vec![
            magnitude.into(),
            p.parabola_abscissa().into(),
            qp.into(),
            q.into(),
            tag.unwrap_or(class.as_str()).into(),
        ])
    };

    let mut t = Table::new(&["magnitude", "s", "q_prime", "q", "classification"]);
    for r in a.grid.unwrap_or(default_magnitudes(kind)).values() {
        t.push(row(r, None)?);
    }
    let root_tag = if boundary.is_tangent() {
        "tangency"
    } else {
        "root"
    };
    for &s in &boundary.roots {
        t.push(row(magnitude_for_abscissa(kind, s), Some(root_tag))?);
    }
    if kind == AlgebraKind::Su2 {
        let s = boundary.extremum_location;
        t.push(row(magnitude_for_abscissa(kind, s), Some("extremum"))?);
    }
    write(&t, a, &a.output)?;
    Ok(EXIT_OK)
}

pub fn squeeze_scan(a: &ScanArgs) -> Result<u8, Failure> {
    let kind = AlgebraKind::from(a.algebra);
    let magnitudes = a.grid.unwrap_or(Grid::new(0.0, 1.5, 101)).values();
    let phases = phases(a.phase, a.phase_grid, Grid::new(0.0, FRAC_PI_2, 25));
    let scan = squeezing_scan(kind, a.label, a.n, &magnitudes, &phases);
    if let Some(f) = all_failed(scan.cells.iter().map(|c| c.report.as_ref().err())) {
        return Err(f);
    }

    let mut t = Table::new(&["magnitude", "phase", "var_x", "var_p", "squeezed"]);
    for c in &scan.cells {
        let (vx, vp, tag) = match &c.report {
            Ok(r) => {
                let tag = match (r.squeezed_x, r.squeezed_p) {
                    (true, false) => "x",
                    (false, true) => "p",
                    (true, true) => "xp",
                    (false, false) => "none",
                };
                (r.var_x, r.var_p, tag.to_owned())
            }
            Err(e) => (f64::NAN, f64::NAN, format!("error: {e}")),
        };
        t.push(vec![
            c.magnitude.into(),
            c.phase.into(),
            vx.into(),
            vp.into(),
            Cell::Text(tag),
        ]);
    }
    if let Some(i) = scan.min_var_x {
        let c = &scan.cells[i];
        let r = c
            .report
            .as_ref()
            .expect("minimum is taken over successful cells");
        t.push(vec![
            c.magnitude.into(),
            c.phase.into(),
            r.var_x.into(),
            r.var_p.into(),
            "min_var_x".into(),
        ]);
    }
    write(&t, a, &a.output)?;
    Ok(EXIT_OK)
}

pub fn eigencheck(a: &ScanArgs) -> Result<u8, Failure> {
    let kind = AlgebraKind::from(a.algebra);
    if !(a.omega.is_finite() && a.omega > 0.0) {
        return Err(Error::Domain(format!("omega must be positive, got {}", a.omega)).into());
    }
    let tol = a.output.tolerance_profile.tolerances();
    let limit = match kind {
        AlgebraKind::Su2 => tol.su2_residual,
        AlgebraKind::Su11 => tol.su11_residual,
    };
    let magnitudes = a.grid.unwrap_or(Grid::new(0.0, 1.4, 10)).values();
    let phases = phases(a.phase, a.phase_grid, Grid::new(0.0, FRAC_PI_2, 4));
    let grid: Vec<(f64, f64)> = magnitudes
        .iter()
        .flat_map(|&r| phases.iter().map(move |&t| (r, t)))
        .collect();
    let checks: Vec<_> = grid
        .par_iter()
        .map(|&(r, phase)| {
            DnsParams::new(kind, a.label, a.n, r, phase).and_then(|p| spectral_check(&p, a.omega))
        })
        .collect();
    if let Some(f) = all_failed(checks.iter().map(|c| c.as_ref().err())) {
        return Err(f);
    }

    let mut failed = false;
    let mut t = Table::new(&[
        "magnitude",
        "phase",
        "energy",
        "residual",
        "hermiticity_defect",
        "admissible",
        "status",
    ]);
    for (&(r, phase), check) in grid.iter().zip(&checks) {
        let row = match check {
            Ok(c) => {
                let ok = c.residual_norm <= limit && c.hermiticity_defect <= HERMITICITY_TOLERANCE;
                failed |= !ok;
                vec![
                    c.energy.into(),
                    c.residual_norm.into(),
                    c.hermiticity_defect.into(),
                    c.energy_non_negative.into(),
                    if ok { "ok" } else { "fail" }.into(),
                ]
            }
            Err(e) => vec![
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                Cell::text(""),
                Cell::Text(format!("error: {e}")),
            ],
        };
        let mut full = vec![r.into(), phase.into()];
        full.extend(row);
        t.push(full);
    }
    write(&t, a, &a.output)?;
    if failed {
        eprintln!("eigencheck: residual above {limit:e} or non-Hermitian matrix");
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

/// Worst coefficient mismatch for one `(algebra, M, n)`.
#[derive(Debug, Clone, Copy)]
struct Worst {
    delta: f64,
    m: u32,
    magnitude: f64,
    phase: f64,
    tail: f64,
    fallbacks: usize,
}

impl Worst {
    fn new() -> Self {
        Self {
            delta: 0.0,
            m: 0,
            magnitude: 0.0,
            phase: 0.0,
            tail: 0.0,
            fallbacks: 0,
        }
    }

    fn note(&mut self, delta: f64, m: u32, magnitude: f64, phase: f64) {
        // A NaN delta is a failure, never a silent pass.
        let delta = if delta.is_nan() { f64::INFINITY } else { delta };
        if delta > self.delta {
            *self = Self {
                delta,
                m,
                magnitude,
                phase,
                ..*self
            };
        }
    }

    fn merge(&mut self, other: &Worst) {
        let (tail, fallbacks) = (self.tail.max(other.tail), self.fallbacks + other.fallbacks);
        if other.delta > self.delta {
            *self = *other;
        }
        self.tail = tail;
        self.fallbacks = fallbacks;
    }
}

fn seeds(label: u32, fixed: Option<u32>, default: &[u32]) -> Vec<u32> {
    let mut s: Vec<u32> = match fixed {
        Some(n) => vec![n],
        None => default.iter().map(|&n| n.min(label)).collect(),
    };
    s.sort_unstable();
    s.dedup();
    s
}

fn form(e: ExponentArg) -> ExponentForm {
    match e {
        ExponentArg::Corrected => ExponentForm::Corrected,
        ExponentArg::Printed => ExponentForm::Printed,
    }
}

/// One su(2) cell: a dense oracle at `(r, phase)` against every seed.
fn verify_su2_cell(
    label: u32,
    seeds: &[u32],
    r: f64,
    phase: f64,
    form: ExponentForm,
) -> Result<Vec<Worst>, Error> {
    let gens = build_generators(AlgebraKind::Su2, label, label as usize + 1)?;
    let u = displacement_oracle(&gens, r, phase)?.matrix;
    seeds
        .iter()
        .map(|&n| {
            let p = Su2Params::new(label, n, r, phase)?;
            let ln_ratio = p.varsigma_abs().ln();
            let mut w = Worst::new();
            for m in 0..=label {
                match coeff_su2(&p, m) {
                    Ok(c) => {
                        let c = form.rescale(c, label, m, ln_ratio).value(phase);
                        w.note((c - u[(m as usize, n as usize)]).norm(), m, r, phase);
                    }
                    Err(Error::PrecisionLoss { .. }) => w.fallbacks += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok(w)
        })
        .collect()
}

fn verify_su11_cell(
    label: u32,
    n: u32,
    r: f64,
    phase: f64,
    form: ExponentForm,
) -> Result<Worst, Error> {
    let p = Su11Params::new(label, n, r, phase)?;
    let state = oracle_state(AlgebraKind::Su11, label, n, r, phase, Truncation::Auto)?;
    let ln_ratio = p.lambda_abs().ln();
    let mut w = Worst::new();
    w.tail = state.tail_bound;
    for (m, amp) in state.amplitudes.iter().enumerate() {
        let m = m as u32;
        match coeff_su11(&p, m) {
            Ok(c) => w.note(
                (form.rescale(c, label, m, ln_ratio).value(phase) - amp).norm(),
                m,
                r,
                phase,
            ),
            Err(Error::PrecisionLoss { .. }) => w.fallbacks += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(w)
}

struct VerifyRow {
    kind: AlgebraKind,
    label: u32,
    n: u32,
    worst: Worst,
    tolerance: f64,
    pass: bool,
}

fn verify_su2(a: &VerifyArgs, tol: &Tolerances) -> Result<Vec<VerifyRow>, Failure> {
    let labels = a
        .label
        .map_or_else(|| vec![1, 2, 5, 10, 20, 40], |m| vec![m]);
    if let Some(&m) = labels.iter().find(|&&m| m > MAX_VERIFY_LABEL) {
        return Err(Error::Domain(format!(
            "oracle-verify caps su(2) at M = {MAX_VERIFY_LABEL}, got {m}"
        ))
        .into());
    }
    let magnitudes = a.grid.unwrap_or(Grid::new(0.0, 1.4, 25)).values();
    let phases = match (a.phase, a.phase_grid) {
        (Some(p), _) => vec![p],
        (None, Some(g)) => g.values(),
        (None, None) => vec![0.0, FRAC_PI_4, FRAC_PI_2],
    };
    let form = form(a.exponent);
    let mut rows = Vec::new();
    for label in labels {
        let seeds = seeds(label, a.n, &[0, 1, 3, 6]);
        if let Some(&n) = seeds.iter().find(|&&n| n > label) {
            return Err(
                Error::Domain(format!("su(2) needs n <= M, got n = {n}, M = {label}")).into(),
            );
        }
        let cells: Vec<(f64, f64)> = phases
            .iter()
            .flat_map(|&t| magnitudes.iter().map(move |&r| (r, t)))
            .collect();
        let results = cells
            .par_iter()
            .map(|&(r, t)| verify_su2_cell(label, &seeds, r, t, form))
            .collect::<Result<Vec<_>, Error>>()?;
        for (i, &n) in seeds.iter().enumerate() {
            let mut worst = Worst::new();
            for cell in &results {
                worst.merge(&cell[i]);
            }
            rows.push(VerifyRow {
                kind: AlgebraKind::Su2,
                label,
                n,
                worst,
                tolerance: tol.su2_coefficient,
                pass: worst.delta <= tol.su2_coefficient,
            });
        }
    }
    Ok(rows)
}

fn verify_su11(a: &VerifyArgs, tol: &Tolerances) -> Result<Vec<VerifyRow>, Failure> {
    let labels = a.label.map_or_else(|| vec![1, 2, 5, 10], |m| vec![m]);
    let magnitudes = a
        .grid
        .map_or_else(|| vec![0.1, 0.5, 1.0, 1.5], |g| g.values());
    let phases = match (a.phase, a.phase_grid) {
        (Some(p), _) => vec![p],
        (None, Some(g)) => g.values(),
        (None, None) => vec![0.0, FRAC_PI_2],
    };
    let form = form(a.exponent);
    let mut rows = Vec::new();
    for label in labels {
        let seeds: Vec<u32> = a.n.map_or_else(|| vec![0, 1, 3], |n| vec![n]);
        for n in seeds {
            let cells: Vec<(f64, f64)> = phases
                .iter()
                .flat_map(|&t| magnitudes.iter().map(move |&r| (r, t)))
                .collect();
            let results = cells
                .par_iter()
                .map(|&(r, t)| verify_su11_cell(label, n, r, t, form))
                .collect::<Result<Vec<_>, Error>>()?;
            let mut worst = Worst::new();
            for w in &results {
                worst.merge(w);
            }
            rows.push(VerifyRow {
                kind: AlgebraKind::Su11,
                label,
                n,
                worst,
                tolerance: tol.su11_coefficient,
                pass: worst.delta <= tol.su11_coefficient && worst.tail < tol.su11_tail,
            });
        }
    }
    Ok(rows)
}

pub fn oracle_verify(a: &VerifyArgs) -> Result<u8, Failure> {
    let tol = a.output.tolerance_profile.tolerances();
    let mut rows = Vec::new();
    let algebras = match a.algebra {
        Some(k) => vec![AlgebraKind::from(k)],
        None => vec![AlgebraKind::Su2, AlgebraKind::Su11],
    };
    for kind in algebras {
        rows.extend(match kind {
            AlgebraKind::Su2 => verify_su2(a, &tol)?,
            AlgebraKind::Su11 => verify_su11(a, &tol)?,
        });
    }

    let mut t = Table::new(&[
        "algebra",
        "M",
        "n",
        "max_delta",
        "worst_m",
        "worst_magnitude",
        "worst_phase",
        "max_tail",
        "fallbacks",
        "tolerance",
        "pass",
    ]);
    for r in &rows {
        let w = &r.worst;
        t.push(vec![
            r.kind.to_string().as_str().into(),
            r.label.into(),
            r.n.into(),
            w.delta.into(),
            w.m.into(),
            w.magnitude.into(),
            w.phase.into(),
            w.tail.into(),
            w.fallbacks.into(),
            r.tolerance.into(),
            r.pass.into(),
        ]);
    }
    write(&t, a, &a.output)?;

    let failures: Vec<&VerifyRow> = rows.iter().filter(|r| !r.pass).collect();
    if let Some(worst) = failures
        .iter()
        .max_by(|x, y| (x.worst.delta / x.tolerance).total_cmp(&(y.worst.delta / y.tolerance)))
    {
        let w = &worst.worst;
        eprintln!(
            "oracle-verify: {} of {} groups failed; worst {} M = {} n = {} m = {} magnitude = {} phase = {}: delta {:e} (tolerance {:e}), tail {:e}",
            failures.len(),
            rows.len(),
            worst.kind,
            worst.label,
            worst.n,
            w.m,
            w.magnitude,
            w.phase,
            w.delta,
            worst.tolerance,
            w.tail
        );
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

pub fn limits(a: &LimitArgs) -> Result<u8, Failure> {
    if a.labels.is_empty() {
        return Err(Failure {
            code: EXIT_PARAMS,
            message: "at least one M is required".into(),
        });
    }
    let kind = AlgebraKind::from(a.algebra);
    let distances = a
        .labels
        .par_iter()
        .map(|&label| match kind {
            AlgebraKind::Su2 => {
                limit_comparison_su2(label, a.alpha, a.phase, a.n, LimitMetric::TotalVariation)
            }
            AlgebraKind::Su11 => {
                limit_comparison_su11(label, a.alpha, a.phase, a.n, LimitMetric::TotalVariation)
            }
        })
        .collect::<Result<Vec<f64>, Error>>()?;

    let mut t = Table::new(&["M", "magnitude", "tv_distance"]);
    for (&label, &d) in a.labels.iter().zip(&distances) {
        t.push(vec![
            label.into(),
            (a.alpha.abs() / f64::from(label).sqrt()).into(),
            d.into(),
        ]);
    }
    write(&t, a, &a.output)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::exit_code_for;

    #[test]
    fn nan_deltas_count_as_worst() {
        let mut w = Worst::new();
        w.note(1e-3, 1, 0.0, 0.0);
        w.note(f64::NAN, 2, 0.0, 0.0);
        assert_eq!(w.delta, f64::INFINITY);
        assert_eq!(w.m, 2);
    }

    #[test]
    fn all_failed_needs_every_cell() {
        let e = Error::TruncationInsufficient {
            dim: 1,
            tail: 1.0,
            target: 1e-12,
        };
        assert!(all_failed([Some(&e), None].into_iter()).is_none());
        assert_eq!(
            all_failed([Some(&e), Some(&e)].into_iter()).unwrap().code,
            exit_code_for(&e)
        );
    }

    #[test]
    fn seeds_clamp_to_label() {
        assert_eq!(seeds(2, None, &[0, 1, 3, 6]), vec![0, 1, 2]);
        assert_eq!(seeds(9, Some(4), &[0]), vec![4]);
    }
}
