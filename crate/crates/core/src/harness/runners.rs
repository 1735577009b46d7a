//! Grid expansion, point execution with a wall-clock budget, and summary
//! fits for each task.

use std::collections::BTreeMap;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;

use super::config::{ExperimentConfig, Task};
use super::record::{params, ExperimentRecord, Param, Params, Validity};
use crate::cloning_rp::formulas::{eb_tomography_risk, f_all_bound, f_one_bound, to_f64, RpSpec, Site};
use crate::cloning_rp::cloner::MAX_CLONER_DIM;
use crate::cloning_rp::{separation_table, SymmetricCloner};
use crate::dme::{dme_error, incoherent_dme_error, incoherent_lower_bound};
use crate::error::{Error, Result};
use crate::framework::{definetti_bound, definetti_gap, symmetric_marginal_channel};
use crate::numerics::random::{haar_state_vector, haar_unitary, seeded_rng};
use crate::numerics::stats::{linear_fit, loglog_fit, mean_stderr};
use crate::numerics::{haar_pure_state, state_with_spectrum};
use crate::qpa::{
    adjacent_gap_upper, coherent_sample_upper, eb_asymptotic_coefficient, eb_covariant_protocol, eb_sample_lower,
    separation_crossover, SpectrumParams,
};
use crate::schur::{multiset_dim, symmetric_dim};

type Job = Box<dyn FnOnce() -> Result<Vec<ExperimentRecord>> + Send>;

struct Point {
    params: Params,
    job: Job,
}

fn point(params: Params, job: impl FnOnce() -> Result<Vec<ExperimentRecord>> + Send + 'static) -> Point {
    Point { params, job: Box::new(job) }
}

/// Records of a run plus what went wrong along the way.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub records: Vec<ExperimentRecord>,
    pub timeouts: usize,
    pub failures: Vec<(Params, Error)>,
}

impl RunSummary {
    /// 0 when every point finished, 2 after a numerical failure, 3 when
    /// points ran out of time.
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() {
            2
        } else if self.timeouts > 0 {
            3
        } else {
            0
        }
    }
}

enum Outcome {
    Done(Vec<ExperimentRecord>),
    Failed(Error),
    TimedOut,
}

/// Run `job` on its own thread and stop waiting after `timeout`. A point
/// that overruns keeps its thread until it finishes, but its result is
/// dropped.
fn run_with_timeout(job: Job, timeout: Duration) -> Outcome {
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(job());
    });
    match rx.recv_timeout(timeout) {
        Ok(Ok(r)) => Outcome::Done(r),
        Ok(Err(e)) => Outcome::Failed(e),
        Err(mpsc::RecvTimeoutError::Timeout) => Outcome::TimedOut,
        Err(mpsc::RecvTimeoutError::Disconnected) => Outcome::Failed(Error::Numerical("grid point panicked".into())),
    }
}

fn point_seed(seed: u64, idx: usize) -> u64 {
    seed ^ (idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let points = match cfg.task {
        Task::Identity => identity_points(cfg),
        Task::Rp => rp_points(cfg),
        Task::Cloning => cloning_points(cfg),
        Task::Qpa => qpa_points(cfg),
        Task::Dme => dme_points(cfg),
        Task::Definetti => definetti_points(cfg),
    };
    let timeout = Duration::from_secs_f64(cfg.timeout_s);
    let task = cfg.task.name();
    let mut summary = RunSummary { records: Vec::new(), timeouts: 0, failures: Vec::new() };
    for p in points {
        let start = Instant::now();
        let outcome = run_with_timeout(p.job, timeout);
        let ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
        let rows = match outcome {
            Outcome::Done(rows) => rows,
            Outcome::Failed(e) => {
                summary.failures.push((p.params.clone(), e));
                vec![ExperimentRecord::new(task, p.params, "point", None).flagged(Validity::Failed)]
            }
            Outcome::TimedOut => {
                summary.timeouts += 1;
                vec![ExperimentRecord::new(task, p.params, "point", None).flagged(Validity::Timeout)]
            }
        };
        summary.records.extend(rows.into_iter().map(|mut r| {
            r.seed = cfg.seed;
            r.ms = ms;
            r
        }));
    }
    let fits = match cfg.task {
        Task::Identity | Task::Cloning => Vec::new(),
        Task::Rp => rp_fits(&summary.records),
        Task::Qpa => qpa_fits(&summary.records),
        Task::Dme => dme_summaries(&summary.records),
        Task::Definetti => definetti_fits(&summary.records),
    };
    summary.records.extend(fits.into_iter().map(|mut r| {
        r.seed = cfg.seed;
        r
    }));
    Ok(summary)
}

fn num(p: &Params, key: &str) -> f64 {
    match p.get(key) {
        Some(Param::Int(x)) => *x as f64,
        Some(Param::Real(x)) => *x,
        _ => f64::NAN,
    }
}

fn bound_validity(valid: bool) -> Validity {
    if valid {
        Validity::Ok
    } else {
        Validity::OutOfRange
    }
}

struct FitSpec<'a> {
    metric: &'a str,
    series: &'a str,
    /// Parameters that identify a curve.
    group: &'a [&'a str],
    x: fn(&Params) -> f64,
    loglog: bool,
}

/// `fit.slope` and `fit.r2` rows for every curve with at least two points.
fn fit_rows(task: &str, records: &[ExperimentRecord], spec: &FitSpec) -> Vec<ExperimentRecord> {
    let mut curves: BTreeMap<Vec<String>, (Params, Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.metric == spec.metric) {
        let Some(y) = r.value else { continue };
        let key: Vec<String> = spec.group.iter().map(|g| r.params.get(*g).map(|p| p.to_string()).unwrap_or_default()).collect();
        let entry = curves.entry(key).or_insert_with(|| {
            let mut p: Params = spec.group.iter().filter_map(|g| r.params.get(*g).map(|v| (g.to_string(), v.clone()))).collect();
            p.insert("series".into(), spec.series.into());
            (p, Vec::new(), Vec::new())
        });
        entry.1.push((spec.x)(&r.params));
        entry.2.push(y);
    }
    let mut out = Vec::new();
    for (_, (p, xs, ys)) in curves {
        if xs.len() < 2 {
            continue;
        }
        let fit = if spec.loglog { loglog_fit(&xs, &ys) } else { linear_fit(&xs, &ys) };
        out.push(ExperimentRecord::new(task, p.clone(), "fit.slope", Some(fit.slope)));
        out.push(ExperimentRecord::new(task, p, "fit.r2", Some(fit.r2)));
    }
    out
}

fn identity_points(cfg: &ExperimentConfig) -> Vec<Point> {
    let mut out = Vec::new();
    for &d in &cfg.grid.d {
        for &n in &cfg.grid.n {
            let p = params([("d", d.into()), ("n", n.into())]);
            let (samples, seed) = (cfg.samples, point_seed(cfg.seed, out.len()));
            let q = p.clone();
            out.push(point(p, move || {
                let mut rows = vec![
                    ExperimentRecord::formula_row("identity", q.clone(), "coherent_infidelity", 0.0),
                    ExperimentRecord::formula_row(
                        "identity",
                        q.clone(),
                        "eb_one_site",
                        to_f64(&eb_tomography_risk(n, 1, d, Site::One)?),
                    ),
                ];
                if d == 2 {
                    // Optimal covariant estimate-and-prepare; its exact
                    // infidelity is 1 - D_n / D_{n+1} = (d - 1) / (n + d).
                    let psi = haar_pure_state(d, &mut seeded_rng(seed));
                    let est = eb_covariant_protocol(&psi, n, 1, samples, seed)?;
                    let exact = 1.0 - (multiset_dim(d, n).to_f64().unwrap_or(f64::NAN)
                        / multiset_dim(d, n + 1).to_f64().unwrap_or(f64::NAN));
                    rows.push(
                        ExperimentRecord::new("identity", q, "eb_one_site_mc", Some(est.infidelity()))
                            .with_stderr(est.stderr)
                            .with_formula(exact, 1e-12),
                    );
                }
                Ok(rows)
            }));
        }
    }
    out
}

fn rp_points(cfg: &ExperimentConfig) -> Vec<Point> {
    let g = &cfg.grid;
    let mut out = Vec::new();
    for &d in &g.d {
        for &r in &g.r {
            for &ell in &g.ell {
                for &n in &g.n {
                    let p = params([("d", d.into()), ("r", r.into()), ("ell", ell.into()), ("n", n.into())]);
                    let q = p.clone();
                    out.push(point(p, move || {
                        let table = separation_table(d, r, ell, &[n])?;
                        let row = &table.rows[0];
                        let value = row.brute_force.unwrap_or(row.coherent);
                        Ok(vec![
                            ExperimentRecord::new("rp", q.clone(), "coherent_one_site", Some(value))
                                .with_formula(row.coherent, 1e-9),
                            ExperimentRecord::formula_row("rp", q, "eb_one_site", row.eb),
                        ])
                    }));
                }
            }
        }
    }
    out
}

fn rp_fits(records: &[ExperimentRecord]) -> Vec<ExperimentRecord> {
    let group = &["d", "r", "ell"];
    let n = |p: &Params| num(p, "n");
    let mut out = fit_rows("rp", records, &FitSpec { metric: "coherent_one_site", series: "coherent", group, x: n, loglog: true });
    out.extend(fit_rows("rp", records, &FitSpec { metric: "eb_one_site", series: "eb", group, x: n, loglog: true }));
    out
}

/// Haar inputs used for the brute-force cloner check.
const CLONING_INPUTS: usize = 20;

fn cloning_points(cfg: &ExperimentConfig) -> Vec<Point> {
    let g = &cfg.grid;
    let mut out = Vec::new();
    for &d in &g.d {
        for &n in &g.n {
            for &m in g.m.iter().filter(|&&m| m > n) {
                let p = params([("d", d.into()), ("n", n.into()), ("m", m.into())]);
                let (seed, inputs) = (point_seed(cfg.seed, out.len()), cfg.samples.min(CLONING_INPUTS));
                let q = p.clone();
                out.push(point(p, move || {
                    let spec = RpSpec::new(n, m, d, 1)?;
                    let f_all = to_f64(&f_all_bound(&spec));
                    let f_one = to_f64(&f_one_bound(&spec));
                    let small = (d as u128).checked_pow(m as u32).is_some_and(|x| x <= MAX_CLONER_DIM as u128);
                    let (all, one) = if small {
                        let cl = SymmetricCloner::new(n, m, d)?;
                        let mut rng = seeded_rng(seed);
                        let (mut a, mut o) = (Vec::new(), Vec::new());
                        for _ in 0..inputs {
                            let psi = haar_state_vector(d, &mut rng);
                            a.push(cl.all_site_fidelity(&psi)?);
                            let sites = cl.one_site_fidelities(&psi)?;
                            o.push(sites.iter().sum::<f64>() / sites.len() as f64);
                        }
                        (Some(mean_stderr(&a)), Some(mean_stderr(&o)))
                    } else {
                        (None, None)
                    };
                    let row = |metric: &str, est: Option<crate::numerics::stats::MeanEstimate>, formula: f64| {
                        let base = ExperimentRecord::new("cloning", q.clone(), metric, Some(est.map_or(formula, |e| e.mean)));
                        let base = match est {
                            Some(e) => base.with_stderr(e.stderr),
                            None => base,
                        };
                        base.with_formula(formula, 1e-9)
                    };
                    Ok(vec![
                        row("f_all", all, f_all),
                        row("f_one", one, f_one),
                        ExperimentRecord::formula_row(
                            "cloning",
                            q.clone(),
                            "eb_all_site_loss",
                            to_f64(&eb_tomography_risk(n, m, d, Site::All)?),
                        ),
                        ExperimentRecord::formula_row(
                            "cloning",
                            q.clone(),
                            "eb_one_site_loss",
                            to_f64(&eb_tomography_risk(n, m, d, Site::One)?),
                        ),
                    ])
                }));
            }
        }
    }
    out
}

fn qpa_points(cfg: &ExperimentConfig) -> Vec<Point> {
    let g = &cfg.grid;
    let mut out = Vec::new();
    for &k in &g.k {
        for &eps in &g.eps {
            for &d_min in &g.d_min {
                for &m in &g.m {
                    for &d in g.d.iter().filter(|&&d| d >= k) {
                        let p = params([
                            ("d", d.into()),
                            ("k", k.into()),
                            ("eps", eps.into()),
                            ("d_min", d_min.into()),
                            ("m", m.into()),
                        ]);
                        let q = p.clone();
                        out.push(point(p, move || {
                            let up = coherent_sample_upper(m, eps, d_min)?;
                            let adj = adjacent_gap_upper(m, eps, d_min, k, d)?;
                            let lo = eb_sample_lower(eps, d, k)?;
                            Ok(vec![
                                ExperimentRecord::new("qpa", q.clone(), "coherent_sample_upper", Some(up.value))
                                    .flagged(bound_validity(up.valid)),
                                ExperimentRecord::new("qpa", q.clone(), "adjacent_gap_upper", Some(adj as f64)),
                                ExperimentRecord::new("qpa", q, "eb_sample_lower", Some(lo.value))
                                    .flagged(bound_validity(lo.valid)),
                            ])
                        }));
                    }
                    let p = params([("k", k.into()), ("eps", eps.into()), ("d_min", d_min.into()), ("m", m.into())]);
                    let q = p.clone();
                    out.push(point(p, move || {
                        let d = separation_crossover(eps, k, d_min, m)?;
                        let row = ExperimentRecord::new("qpa", q, "separation_crossover_d", d.map(|x| x as f64));
                        Ok(vec![if d.is_some() { row } else { row.flagged(Validity::OutOfRange) }])
                    }));
                }
            }
        }
    }
    if let Some(p) = &g.p {
        let d = p.len();
        // One fixed state per run so that the n-dependence is not mixed
        // with the choice of eigenbasis.
        let u = haar_unitary(d, &mut seeded_rng(cfg.seed));
        for &k in &g.k {
            for &n in &g.n {
                let prm = params([("d", d.into()), ("k", k.into()), ("n", n.into())]);
                let (spectrum, u, samples) = (p.clone(), u.clone(), cfg.samples);
                let seed = point_seed(cfg.seed, out.len());
                let q = prm.clone();
                out.push(point(prm, move || {
                    let rho = state_with_spectrum(&spectrum, &u)?;
                    let coef = eb_asymptotic_coefficient(&SpectrumParams::new(spectrum, k)?);
                    let est = eb_covariant_protocol(&rho, n, k, samples, seed)?;
                    let flag = if est.low_ess { Validity::Failed } else { Validity::Asymptotic };
                    Ok(vec![ExperimentRecord::new("qpa", q, "eb_infidelity_mc", Some(est.infidelity()))
                        .with_stderr(est.stderr)
                        .flagged(flag)
                        .with_formula(coef / n as f64, 0.0)])
                }));
            }
        }
    }
    out
}

fn qpa_fits(records: &[ExperimentRecord]) -> Vec<ExperimentRecord> {
    let group = &["k", "eps", "d_min", "m"];
    let mut out = fit_rows(
        "qpa",
        records,
        &FitSpec {
            metric: "eb_sample_lower",
            series: "eb_lower_vs_d_minus_k",
            group,
            x: |p| num(p, "d") - num(p, "k"),
            loglog: false,
        },
    );
    out.extend(fit_rows(
        "qpa",
        records,
        &FitSpec { metric: "coherent_sample_upper", series: "coherent_upper_vs_d", group, x: |p| num(p, "d"), loglog: false },
    ));
    out.extend(fit_rows(
        "qpa",
        records,
        &FitSpec { metric: "eb_infidelity_mc", series: "eb_infidelity_vs_inv_n", group: &["d", "k"], x: |p| 1.0 / num(p, "n"), loglog: false },
    ));
    out
}

fn dme_points(cfg: &ExperimentConfig) -> Vec<Point> {
    let g = &cfg.grid;
    let mut out = Vec::new();
    for &d in &g.d {
        let rho = haar_pure_state(d, &mut seeded_rng(cfg.seed.wrapping_add(d as u64)));
        // The probe set stays fixed along n; a maximum over fresh probes
        // would add noise to the ratios.
        let probe_seed = point_seed(cfg.seed, usize::MAX - d);
        for &t in &g.t {
            for &n in &g.n {
                let p = params([("d", d.into()), ("t", t.into()), ("n", n.into())]);
                let (rho, probes, trials) = (rho.clone(), g.probes, g.trials);
                let seed = point_seed(cfg.seed, out.len());
                let q = p.clone();
                out.push(point(p, move || {
                    let lmr = dme_error(&rho, t, n, probes, probe_seed)?;
                    let mut rows = vec![ExperimentRecord::new("dme", q.clone(), "lmr_error", Some(lmr))];
                    rows.push(if n >= d * d {
                        let inc = incoherent_dme_error(&rho, t, n, probes, trials, seed)?;
                        ExperimentRecord::new("dme", q, "incoherent_error", Some(inc.error.mean)).with_stderr(inc.error.stderr)
                    } else {
                        ExperimentRecord::new("dme", q, "incoherent_error", None).flagged(Validity::OutOfRange)
                    });
                    Ok(rows)
                }));
            }
            for &eps in &g.eps {
                let p = params([("d", d.into()), ("t", t.into()), ("eps", eps.into())]);
                let q = p.clone();
                out.push(point(p, move || {
                    let b = incoherent_lower_bound(eps, d, t)?;
                    Ok(vec![ExperimentRecord::new("dme", q, "incoherent_lower_bound", Some(b.value))
                        .flagged(bound_validity(b.valid))])
                }));
            }
        }
    }
    out
}

/// `(n, error, params)` of one partial-swap row.
type Sample = (f64, f64, Params);

fn dme_summaries(records: &[ExperimentRecord]) -> Vec<ExperimentRecord> {
    let mut out = Vec::new();
    let mut curves: BTreeMap<(u64, u64), Vec<Sample>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.metric == "lmr_error") {
        if let Some(v) = r.value {
            let key = (num(&r.params, "d") as u64, num(&r.params, "t").to_bits());
            curves.entry(key).or_default().push((num(&r.params, "n"), v, r.params.clone()));
        }
    }
    for pts in curves.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pts.windows(2) {
            if w[1].0 == 2.0 * w[0].0 && w[0].1 > 0.0 {
                out.push(ExperimentRecord::new("dme", w[1].2.clone(), "lmr_error_ratio", Some(w[1].1 / w[0].1)));
            }
        }
    }
    let group = &["d", "t"];
    let n = |p: &Params| num(p, "n");
    out.extend(fit_rows("dme", records, &FitSpec { metric: "lmr_error", series: "lmr", group, x: n, loglog: true }));
    out.extend(fit_rows(
        "dme",
        records,
        &FitSpec { metric: "incoherent_error", series: "incoherent", group, x: n, loglog: true },
    ));
    out
}

fn definetti_points(cfg: &ExperimentConfig) -> Vec<Point> {
    let mut out = Vec::new();
    for &d in &cfg.grid.d {
        for &m in &cfg.grid.m {
            let p = params([("d", d.into()), ("m", m.into())]);
            let q = p.clone();
            out.push(point(p, move || {
                let ch = symmetric_marginal_channel(d, m)?;
                let gap = definetti_gap(ch.choi(), d, m)?;
                Ok(vec![
                    ExperimentRecord::new("definetti", q.clone(), "definetti_gap", Some(gap)),
                    ExperimentRecord::new(
                        "definetti",
                        q,
                        "definetti_bound",
                        Some(definetti_bound(symmetric_dim(d, m), d, m)),
                    ),
                ])
            }));
        }
    }
    out
}

fn definetti_fits(records: &[ExperimentRecord]) -> Vec<ExperimentRecord> {
    fit_rows(
        "definetti",
        records,
        &FitSpec { metric: "definetti_gap", series: "gap", group: &["d"], x: |p| num(p, "m"), loglog: true },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::record::to_csv;

    fn find<'a>(recs: &'a [ExperimentRecord], metric: &str, key: &str, val: f64) -> &'a ExperimentRecord {
        recs.iter().find(|r| r.metric == metric && num(&r.params, key) == val).expect("record present")
    }

    #[test]
    fn identity_rows() {
        let mut cfg = ExperimentConfig::new(Task::Identity);
        cfg.grid.n = vec![1, 4];
        let s = run(&cfg).unwrap();
        assert_eq!(s.exit_code(), 0);
        let eb = find(&s.records, "eb_one_site", "n", 1.0);
        assert!((eb.value.unwrap() - 0.5).abs() < 1e-15);
        assert!(s.records.iter().filter(|r| r.metric == "coherent_infidelity").all(|r| r.value == Some(0.0)));
        for r in s.records.iter().filter(|r| r.metric == "eb_one_site_mc") {
            assert!(r.stderr.is_some());
            assert_eq!(r.valid, Validity::Ok, "{r:?}");
        }
    }

    #[test]
    fn rp_fit_rows_present() {
        let mut cfg = ExperimentConfig::new(Task::Rp);
        cfg.grid.n = (8..=64).collect();
        let s = run(&cfg).unwrap();
        let eb_slope = s
            .records
            .iter()
            .find(|r| r.metric == "fit.slope" && r.params.get("series") == Some(&Param::from("eb")))
            .unwrap();
        assert!((eb_slope.value.unwrap() + 1.0).abs() < 0.05);
        assert!(s.records.iter().all(|r| r.valid == Validity::Ok));
    }

    #[test]
    fn cloning_brute_force_matches() {
        let mut cfg = ExperimentConfig::new(Task::Cloning);
        cfg.grid.d = vec![2, 3];
        cfg.grid.n = vec![1, 2];
        cfg.grid.m = vec![2, 3];
        let s = run(&cfg).unwrap();
        assert!(s.records.iter().all(|r| r.valid == Validity::Ok), "{:?}", s.records);
        assert!(s.records.iter().any(|r| r.metric == "f_one" && r.stderr.is_some()));
    }

    #[test]
    fn qpa_lower_bound_is_linear_and_upper_flat() {
        let mut cfg = ExperimentConfig::new(Task::Qpa);
        cfg.grid.d = (2..=6).collect();
        let s = run(&cfg).unwrap();
        let slope = |series: &str| {
            s.records
                .iter()
                .find(|r| r.metric == "fit.slope" && r.params.get("series") == Some(&Param::from(series)))
                .and_then(|r| r.value)
                .unwrap()
        };
        assert!((slope("eb_lower_vs_d_minus_k") - (1.0 / 0.02 - 1.0)).abs() < 1e-9);
        assert_eq!(slope("coherent_upper_vs_d"), 0.0);
        let r2 = s.records.iter().find(|r| r.metric == "fit.r2" && r.params.get("series") == Some(&Param::from("eb_lower_vs_d_minus_k"))).unwrap();
        assert!((r2.value.unwrap() - 1.0).abs() < 1e-12);
        assert!(s.records.iter().any(|r| r.metric == "separation_crossover_d"));
    }

    #[test]
    fn dme_ratios_near_half() {
        let mut cfg = ExperimentConfig::new(Task::Dme);
        cfg.grid.n = vec![16, 32, 64];
        cfg.grid.trials = 2;
        cfg.grid.eps = vec![1e-7];
        let s = run(&cfg).unwrap();
        let ratios: Vec<f64> = s.records.iter().filter(|r| r.metric == "lmr_error_ratio").filter_map(|r| r.value).collect();
        assert_eq!(ratios.len(), 2);
        assert!(ratios.iter().all(|r| (r - 0.5).abs() < 0.1), "{ratios:?}");
        assert_eq!(find(&s.records, "incoherent_lower_bound", "d", 2.0).valid, Validity::Ok);
    }

    #[test]
    fn definetti_gap_decays() {
        let mut cfg = ExperimentConfig::new(Task::Definetti);
        cfg.grid.m = (2..=6).collect();
        let s = run(&cfg).unwrap();
        let slope = s.records.iter().find(|r| r.metric == "fit.slope").and_then(|r| r.value).unwrap();
        assert!(slope < -0.5, "{slope}");
    }

    #[test]
    fn identical_configs_give_identical_bytes() {
        let mut cfg = ExperimentConfig::new(Task::Identity);
        cfg.grid.n = vec![2, 3];
        cfg.samples = 2000;
        let a = to_csv(&run(&cfg).unwrap().records).unwrap();
        let b = to_csv(&run(&cfg).unwrap().records).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn timeouts_are_recorded() {
        let out = run_with_timeout(
            Box::new(|| {
                std::thread::sleep(Duration::from_millis(500));
                Ok(Vec::new())
            }),
            Duration::from_millis(10),
        );
        assert!(matches!(out, Outcome::TimedOut));
        let failing = run_with_timeout(Box::new(|| Err(Error::Numerical("x".into()))), Duration::from_secs(1));
        assert!(matches!(failing, Outcome::Failed(_)));
        let s = RunSummary { records: Vec::new(), timeouts: 1, failures: Vec::new() };
        assert_eq!(s.exit_code(), 3);
    }
}
