//! The five commands: compute, scan, oracle, schur, figures.

use std::path::{Path, PathBuf};

use serde::Serialize;

use wehrl::{
    mc_moment_bi, mc_moment_mono, mc_wehrl_bi, mc_wehrl_mono, moment_closed_form, mu,
    mu_simplex_oracle, q_scan, random_pure_bipartite, renyi_subentropy, rescaled_moment,
    schmidt_spectrum, schur_concavity_suite, subentropy, wehrl_entropy_bi, wehrl_entropy_mono,
    BipartitePureState, EntropyReport, HermitianState, McEstimate, MomentOrder, Partition,
    RngSeed, SchurReport, Spectrum,
};

use crate::input::{load_state, LoadedState};
use crate::output::{csv_line, fmt17, write_text};
use crate::{Failure, Format};

const SIGMA_GATE: f64 = 4.0;

pub struct Config {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub q_grid: Vec<MomentOrder>,
    pub samples: u64,
    pub seed: RngSeed,
    pub dims: Vec<usize>,
    pub pairs: usize,
}

pub fn parse_orders(raw: &[f64]) -> Result<Vec<MomentOrder>, Failure> {
    raw.iter()
        .map(|&q| {
            if q.is_nan() || q <= 0.0 {
                return Err(Failure::Parse(format!("--q must be positive, got {q}")));
            }
            MomentOrder::new(q).map_err(|e| Failure::Parse(e.to_string()))
        })
        .collect()
}

fn load_required_state(cfg: &Config) -> Result<LoadedState, Failure> {
    let path = cfg
        .input
        .as_deref()
        .ok_or_else(|| Failure::Parse("--input is required for this command".to_owned()))?;
    load_state(path)
}

/// compute and scan: a full entropy report for the input state. The two
/// commands differ only in their default q grid.
pub fn cmd_compute(cfg: &Config, default_grid: &[f64]) -> Result<(), Failure> {
    let state = load_required_state(cfg)?;
    let grid = if cfg.q_grid.is_empty() {
        parse_orders(default_grid)?
    } else {
        cfg.q_grid.clone()
    };
    let mut report =
        q_scan(&state.spectrum, &grid).map_err(|e| Failure::Invariant(e.to_string()))?;
    report.source = state.source.to_owned();
    let content = match cfg.format {
        Format::Json => render_json(&report)?,
        Format::Csv => render_report_csv(&report),
    };
    write_text(cfg.output.as_deref(), &content)
}

fn render_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Io(format!("serialization failed: {e}")))
}

fn render_report_csv(report: &EntropyReport) -> String {
    let mut lines = vec![csv_line(&[
        "q".into(),
        "renyi".into(),
        "renyi_sub".into(),
        "tsallis_moment".into(),
        "renyi_wehrl_mono".into(),
        "renyi_wehrl_bi".into(),
    ])];
    for row in &report.scan {
        lines.push(csv_line(&[
            fmt17(row.q),
            fmt17(row.renyi),
            fmt17(row.renyi_sub),
            fmt17(row.tsallis_moment),
            fmt17(row.renyi_wehrl_mono),
            fmt17(row.renyi_wehrl_bi),
        ]));
    }
    lines.join("\n") + "\n"
}

#[derive(Debug, Serialize)]
struct OracleRow {
    check: String,
    closed_form: f64,
    estimate: f64,
    std_error: f64,
    sigma: f64,
}

impl OracleRow {
    fn new(check: String, closed_form: f64, est: &McEstimate) -> Self {
        Self {
            check,
            closed_form,
            estimate: est.mean,
            std_error: est.std_error,
            sigma: est.sigma_distance(closed_form),
        }
    }
}

/// oracle: Monte-Carlo estimates against closed forms for the input state
/// (or a seeded random state); exits nonzero when any check strays past 4σ.
pub fn cmd_oracle(cfg: &Config) -> Result<(), Failure> {
    let err = |e: wehrl::Error| Failure::Invariant(e.to_string());
    // resolve the state under test
    let (lam, rho, psi, source) = match &cfg.input {
        Some(_) => {
            let state = load_required_state(cfg)?;
            let lam = state.spectrum.clone();
            let rho = match state.density {
                Some(rho) => rho,
                None => HermitianState::from_diagonal(lam.values()).map_err(err)?,
            };
            let psi = match state.bipartite {
                Some(psi) => psi,
                None => BipartitePureState::from_schmidt(&lam).map_err(err)?,
            };
            (lam, rho, psi, state.source)
        }
        None => {
            let n = cfg.dims.first().copied().unwrap_or(2);
            let psi = random_pure_bipartite(n, cfg.seed.derive(0xA11CE)).map_err(err)?;
            let lam = schmidt_spectrum(&psi).map_err(err)?;
            let rho = HermitianState::from_diagonal(lam.values()).map_err(err)?;
            (lam, rho, psi, "random")
        }
    };
    let n = rho.dim();
    let grid = if cfg.q_grid.is_empty() {
        parse_orders(&[1.0, 2.0, 3.0])?
    } else {
        cfg.q_grid.clone()
    };

    let mut rows = Vec::new();
    let mut stream = 0u64;
    let mut next_seed = || {
        stream += 1;
        cfg.seed.derive(stream)
    };
    for &q in &grid {
        let closed = moment_closed_form(q, &lam, n, Partition::Mono).map_err(err)?;
        let est = mc_moment_mono(&rho, q, cfg.samples, next_seed()).map_err(config_err)?;
        rows.push(OracleRow::new(format!("m_q mono q={}", q.get()), closed, &est));

        let closed = moment_closed_form(q, &lam, n, Partition::Bi).map_err(err)?;
        let est = mc_moment_bi(&psi, q, cfg.samples, next_seed()).map_err(config_err)?;
        rows.push(OracleRow::new(format!("m_q bi q={}", q.get()), closed, &est));

        let closed = mu(q, &lam).map_err(err)?;
        let est = mu_simplex_oracle(q, &lam, cfg.samples, next_seed()).map_err(config_err)?;
        rows.push(OracleRow::new(
            format!("mu simplex q={}", q.get()),
            closed,
            &est,
        ));
    }
    let closed = wehrl_entropy_mono(&lam, n).map_err(err)?;
    let est = mc_wehrl_mono(&rho, cfg.samples, next_seed()).map_err(config_err)?;
    rows.push(OracleRow::new("wehrl mono".to_owned(), closed, &est));
    let closed = wehrl_entropy_bi(&lam, n).map_err(err)?;
    let est = mc_wehrl_bi(&psi, cfg.samples, next_seed()).map_err(config_err)?;
    rows.push(OracleRow::new("wehrl bi".to_owned(), closed, &est));

    let mut text = format!(
        "oracle validation: state={source} n={n} samples={} seed={}\n{:<22} {:>24} {:>24} {:>13} {:>8}\n",
        cfg.samples, cfg.seed.0, "check", "closed_form", "estimate", "std_error", "sigma"
    );
    for row in &rows {
        text.push_str(&format!(
            "{:<22} {:>24} {:>24} {:>13.4e} {:>8.3}\n",
            row.check,
            fmt17(row.closed_form),
            fmt17(row.estimate),
            row.std_error,
            row.sigma
        ));
    }
    let worst = rows.iter().map(|r| r.sigma).fold(0.0f64, f64::max);
    text.push_str(&format!("worst sigma: {worst:.3}\n"));

    if let Some(path) = cfg.output.as_deref() {
        write_text(Some(path), &render_json(&rows)?)?;
    }
    print!("{text}");
    if worst > SIGMA_GATE {
        return Err(Failure::Oracle(format!(
            "{} of {} checks beyond {SIGMA_GATE} standard errors (worst {worst:.3})",
            rows.iter().filter(|r| r.sigma > SIGMA_GATE).count(),
            rows.len()
        )));
    }
    Ok(())
}

fn config_err(e: wehrl::Error) -> Failure {
    match e {
        wehrl::Error::TooFewSamples { .. } | wehrl::Error::NonPositiveOrder(_) => {
            Failure::Parse(e.to_string())
        }
        other => Failure::Invariant(other.to_string()),
    }
}

/// schur: Schur-concavity suites for the subentropy families over the
/// configured dimensions; exits nonzero on any violation.
pub fn cmd_schur(cfg: &Config) -> Result<(), Failure> {
    let dims = if cfg.dims.is_empty() {
        vec![2, 3, 4, 5]
    } else {
        cfg.dims.clone()
    };
    let qs = if cfg.q_grid.is_empty() {
        parse_orders(&[0.5, 2.0, 5.0])?
    } else {
        cfg.q_grid.clone()
    };
    let err = |e: wehrl::Error| Failure::Invariant(e.to_string());
    let mut reports: Vec<SchurReport> = Vec::new();
    reports.push(
        schur_concavity_suite("subentropy", subentropy, &dims, cfg.pairs, cfg.seed)
            .map_err(err)?,
    );
    for &q in &qs {
        reports.push(
            schur_concavity_suite(
                &format!("renyi_subentropy_q{}", q.get()),
                move |lam: &Spectrum| renyi_subentropy(q, lam).unwrap_or(f64::NAN),
                &dims,
                cfg.pairs,
                cfg.seed,
            )
            .map_err(err)?,
        );
        reports.push(
            schur_concavity_suite(
                &format!("rescaled_moment_q{}", q.get()),
                move |lam: &Spectrum| rescaled_moment(q, lam).unwrap_or(f64::NAN),
                &dims,
                cfg.pairs,
                cfg.seed,
            )
            .map_err(err)?,
        );
    }
    write_text(cfg.output.as_deref(), &render_json(&reports)?)?;
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    if violations > 0 {
        return Err(Failure::Schur(format!(
            "{violations} Schur-concavity violations across {} suites",
            reports.len()
        )));
    }
    Ok(())
}

/// figures: deterministic CSV datasets behind the four reference plots.
pub fn cmd_figures(cfg: &Config) -> Result<(), Failure> {
    let dir = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    write_fig1(&dir)?;
    write_fig23(&dir)?;
    write_fig4(&dir)?;
    Ok(())
}

fn fig_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

/// N = 2: S_q and Q_q against the single free coordinate x, q ∈ {1/2, 1, 2, 10}.
fn write_fig1(dir: &Path) -> Result<(), Failure> {
    const QS: [f64; 4] = [0.5, 1.0, 2.0, 10.0];
    let mut header = vec!["x".to_owned()];
    for q in QS {
        header.push(format!("renyi_q{q}"));
        header.push(format!("subentropy_q{q}"));
    }
    let mut lines = vec![csv_line(&header)];
    for i in 0..=200u32 {
        let x = f64::from(i) / 200.0;
        let lam = Spectrum::new(vec![x, 1.0 - x])
            .map_err(|e| Failure::Invariant(e.to_string()))?;
        let mut cells = vec![fmt17(x)];
        for q in QS {
            let q = MomentOrder::new(q).expect("finite");
            let s = wehrl::renyi_entropy(q, &lam)
                .map_err(|e| Failure::Invariant(e.to_string()))?;
            let qq = renyi_subentropy(q, &lam)
                .map_err(|e| Failure::Invariant(e.to_string()))?;
            cells.push(fmt17(s));
            cells.push(fmt17(qq));
        }
        lines.push(csv_line(&cells));
    }
    write_text(Some(&fig_path(dir, "fig1.csv")), &(lines.join("\n") + "\n"))
}

/// N = 3 barycentric grids of Q_q (fig2) and M_q (fig3), q ∈ {1/2, 1, 2, 5};
/// 201×201 resolution with infeasible points omitted.
fn write_fig23(dir: &Path) -> Result<(), Failure> {
    const QS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
    let mut header2 = vec!["lambda1".to_owned(), "lambda2".to_owned()];
    let mut header3 = header2.clone();
    for q in QS {
        header2.push(format!("subentropy_q{q}"));
        header3.push(format!("tsallis_moment_q{q}"));
    }
    let mut lines2 = vec![csv_line(&header2)];
    let mut lines3 = vec![csv_line(&header3)];
    for i in 0..=200u32 {
        for j in 0..=200u32 - i {
            let l1 = f64::from(i) / 200.0;
            let l2 = f64::from(j) / 200.0;
            let l3 = f64::from(200 - i - j) / 200.0;
            let lam = Spectrum::new(vec![l1, l2, l3])
                .map_err(|e| Failure::Invariant(e.to_string()))?;
            let mut cells2 = vec![fmt17(l1), fmt17(l2)];
            let mut cells3 = cells2.clone();
            for q in QS {
                let q = MomentOrder::new(q).expect("finite");
                cells2.push(fmt17(
                    renyi_subentropy(q, &lam).map_err(|e| Failure::Invariant(e.to_string()))?,
                ));
                cells3.push(fmt17(
                    rescaled_moment(q, &lam).map_err(|e| Failure::Invariant(e.to_string()))?,
                ));
            }
            lines2.push(csv_line(&cells2));
            lines3.push(csv_line(&cells3));
        }
    }
    write_text(Some(&fig_path(dir, "fig2.csv")), &(lines2.join("\n") + "\n"))?;
    write_text(Some(&fig_path(dir, "fig3.csv")), &(lines3.join("\n") + "\n"))
}

/// N = 4 power-law spectra p_j ∝ j^κ for κ ∈ {3/2, 3}: S_q and Q_q over
/// q ∈ [0.1, 20].
fn write_fig4(dir: &Path) -> Result<(), Failure> {
    const KAPPAS: [f64; 2] = [1.5, 3.0];
    let mut header = vec!["q".to_owned()];
    for kappa in KAPPAS {
        header.push(format!("renyi_kappa{kappa}"));
        header.push(format!("subentropy_kappa{kappa}"));
    }
    let spectra: Vec<Spectrum> = KAPPAS
        .iter()
        .map(|&kappa| {
            let weights: Vec<f64> = (1..=4).map(|j| (j as f64).powf(kappa)).collect();
            Spectrum::new(weights).map_err(|e| Failure::Invariant(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let mut lines = vec![csv_line(&header)];
    for k in 0..200u32 {
        let q = 0.1 + f64::from(k) * (20.0 - 0.1) / 199.0;
        let q = MomentOrder::new(q).expect("finite");
        let mut cells = vec![fmt17(q.get())];
        for lam in &spectra {
            cells.push(fmt17(
                wehrl::renyi_entropy(q, lam).map_err(|e| Failure::Invariant(e.to_string()))?,
            ));
            cells.push(fmt17(
                renyi_subentropy(q, lam).map_err(|e| Failure::Invariant(e.to_string()))?,
            ));
        }
        lines.push(csv_line(&cells));
    }
    write_text(Some(&fig_path(dir, "fig4.csv")), &(lines.join("\n") + "\n"))
}
