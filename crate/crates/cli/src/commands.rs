use anyhow::{bail, Context};
use genbinom::analytic::{poisson_limit_trace, product_identity_check};
use genbinom::distribution::{distribution_row, loss_run_comparison, sample_trials};
use genbinom::io::{load_scalar_list, write_csv};
use genbinom::polynomials::{eta_max, p_recurrence, sigma_classify};
use genbinom::reconstruction::{reconstruct, ReconstructOptions, RootSequence};
use genbinom::{GenSequence, Scalar};
use serde_json::{json, Value};

use crate::args::{parse_n_spec, split_grid, Cli, Command, Common, FamilyArg, Format};

const DEFAULT_TOL: &str = "1e-40";

/// What a subcommand produced, before formatting.
struct Report {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    /// Extra `#` lines after the config line.
    notes: Vec<String>,
    json: Value,
}

pub fn run<S: Scalar>(cli: &Cli) -> anyhow::Result<String> {
    let report = match &cli.command {
        Command::Curves {
            n,
            eta_grid,
            show_negative,
            ..
        } => curves::<S>(&cli.common, n, eta_grid, *show_negative)?,
        Command::CompareLoss { n, eta_grid } => compare_loss::<S>(&cli.common, *n, eta_grid)?,
        Command::Limit { t, k, n } => limit::<S>(&cli.common, t, *k, n)?,
        Command::Classify => classify::<S>(&cli.common)?,
        Command::Reconstruct {
            check_det,
            no_system,
        } => reconstruct_cmd::<S>(&cli.common, *check_det, !*no_system)?,
        Command::Sample {
            n,
            eta,
            draws,
            seed,
        } => sample::<S>(&cli.common, *n, eta, *draws, *seed)?,
        Command::IdentityCheck { eta, t, order } => identity::<S>(&cli.common, eta, t, *order)?,
    };
    render(cli, report)
}

fn render(cli: &Cli, report: Report) -> anyhow::Result<String> {
    match cli.common.format {
        Format::Json => {
            let doc = json!({ "config": cli, "result": report.json });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut config = format!("config {}", serde_json::to_string(cli)?);
            for note in &report.notes {
                config.push_str("\n# ");
                config.push_str(note);
            }
            let mut buf = Vec::new();
            write_csv(&mut buf, &config, &report.header, &report.rows)?;
            Ok(String::from_utf8(buf)?)
        }
    }
}

fn show<S: Scalar>(common: &Common, v: &S) -> String {
    if common.decimal {
        format!("{}", v.to_f64())
    } else {
        v.to_string()
    }
}

fn scalar<S: Scalar>(text: &str, what: &str) -> anyhow::Result<S> {
    S::parse(text).with_context(|| format!("invalid {what}"))
}

fn tolerance<S: Scalar>(common: &Common) -> anyhow::Result<S> {
    let tol: S = scalar(common.tol.as_deref().unwrap_or(DEFAULT_TOL), "--tol")?;
    if !tol.is_positive() {
        bail!("--tol must be positive");
    }
    Ok(tol)
}

fn grid<S: Scalar>(text: &str) -> anyhow::Result<Vec<S>> {
    let (start, end, points) = split_grid(text)?;
    let start: S = scalar(&start, "grid start")?;
    let end: S = scalar(&end, "grid end")?;
    if points == 1 {
        return Ok(vec![start]);
    }
    let step = (end - &start) / S::from_int(points as i64 - 1);
    Ok((0..points)
        .map(|i| start.clone() + step.clone() * S::from_int(i as i64))
        .collect())
}

fn roots<S: Scalar>(common: &Common) -> anyhow::Result<RootSequence<S>> {
    let values: Vec<S> = match (&common.roots, &common.roots_file) {
        (Some(list), None) => list
            .split(',')
            .map(|s| scalar(s, "--roots entry"))
            .collect::<anyhow::Result<_>>()?,
        (None, Some(path)) => load_scalar_list(path)
            .with_context(|| format!("reading {}", path.display()))?,
        (Some(_), Some(_)) => bail!("give either --roots or --roots-file, not both"),
        (None, None) => bail!("a root sequence is required (--roots or --roots-file)"),
    };
    Ok(RootSequence::new(values)?)
}

/// The sequence selected by the family flags, materialized through at least `needed`.
fn sequence<S: Scalar>(common: &Common, needed: usize) -> anyhow::Result<GenSequence<S>> {
    let max = common.n_max.unwrap_or(0).max(needed).max(1);
    let seq = match common.family {
        FamilyArg::Natural => GenSequence::natural(max)?,
        FamilyArg::Qbracket => {
            let q = common.q.as_deref().context("--family qbracket needs --q")?;
            GenSequence::qbracket(scalar(q, "--q")?, max)?
        }
        FamilyArg::Explicit => {
            let path = common
                .values_file
                .as_ref()
                .context("--family explicit needs --values-file")?;
            let values = load_scalar_list(path)
                .with_context(|| format!("reading {}", path.display()))?;
            GenSequence::explicit(values)?
        }
        FamilyArg::PowerLog => {
            let alpha = common.alpha.as_deref().context("--family power-log needs --alpha")?;
            let beta = common.beta.as_deref().unwrap_or("0");
            GenSequence::power_log(scalar(alpha, "--alpha")?, scalar(beta, "--beta")?, max)?
        }
        FamilyArg::RootDriven => GenSequence::root_driven(roots(common)?)?,
    };
    if seq.max_index() < needed {
        bail!(
            "the {} sequence stops at index {}, but index {needed} is needed",
            seq.family(),
            seq.max_index()
        );
    }
    Ok(seq)
}

fn curves<S: Scalar>(
    common: &Common,
    n_spec: &str,
    eta_grid: &str,
    show_negative: bool,
) -> anyhow::Result<Report> {
    let ns = parse_n_spec(n_spec)?;
    let seq: GenSequence<S> = sequence(common, *ns.iter().max().unwrap())?;
    let grid: Vec<S> = grid(eta_grid)?;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for &n in &ns {
        let p = p_recurrence(&seq, n)?;
        let mut etas: Vec<S> = grid.clone();
        if !show_negative {
            let root = eta_max(&seq, n)?;
            etas.retain(|eta| *eta <= root);
            let last = grid.last().cloned().unwrap_or_else(S::one);
            if root < last && !etas.contains(&root) && grid.first().is_some_and(|f| *f < root) {
                etas.push(root);
            }
        }
        for eta in etas {
            let value = p.eval(&eta);
            rows.push(vec![n.to_string(), show(common, &eta), show(common, &value)]);
            points.push(json!({ "n": n, "eta": show(common, &eta), "p_n": show(common, &value) }));
        }
    }
    Ok(Report {
        header: vec!["n", "eta", "p_n"],
        rows,
        notes: vec![format!("sequence {}", seq.family())],
        json: Value::Array(points),
    })
}

fn compare_loss<S: Scalar>(common: &Common, n: usize, eta_grid: &str) -> anyhow::Result<Report> {
    let seq: GenSequence<S> = sequence(common, n)?;
    let table = loss_run_comparison(&seq, n, &grid::<S>(eta_grid)?)?;
    let rows = table
        .iter()
        .map(|r| vec![show(common, &r.eta), show(common, &r.varpi), show(common, &r.bernoulli)])
        .collect();
    Ok(Report {
        header: vec!["eta", "varpi_n0", "bernoulli_term"],
        rows,
        notes: vec![format!("sequence {}, n = {n}", seq.family())],
        json: serde_json::to_value(&table)?,
    })
}

fn limit<S: Scalar>(common: &Common, t: &str, k: usize, n_spec: &str) -> anyhow::Result<Report> {
    let ns = parse_n_spec(n_spec)?;
    let seq: GenSequence<S> = sequence(common, *ns.iter().max().unwrap())?;
    let t: S = scalar(t, "--t")?;
    let trace = poisson_limit_trace(&seq, &t, k, &ns, &tolerance(common)?)?;
    let target = show(common, &trace.target);
    let rows = trace
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                show(common, &r.value),
                target.clone(),
                show(common, &r.deviation),
            ]
        })
        .collect();
    let mut notes = vec![format!("sequence {}", seq.family())];
    if let Some(w) = &trace.warning {
        eprintln!("warning: {w}");
        notes.push(format!("warning: {w}"));
    }
    Ok(Report {
        header: vec!["n", "value", "target", "deviation"],
        rows,
        notes,
        json: serde_json::to_value(&trace)?,
    })
}

fn classify<S: Scalar>(common: &Common) -> anyhow::Result<Report> {
    let horizon = common.n_max.unwrap_or(20);
    let seq: GenSequence<S> = sequence(common, horizon)?;
    let report = sigma_classify(&seq, horizon)?;
    let rows = report
        .rows
        .iter()
        .map(|r| {
            let (lo, hi) = match &r.smallest_root {
                Some(b) => (show(common, &b.lo), show(common, &b.hi)),
                None => (String::new(), String::new()),
            };
            vec![r.n.to_string(), r.sturm_count.to_string(), lo, hi, show(common, &r.eta_max)]
        })
        .collect();
    let first = report
        .first_violating_n
        .map_or("none".to_string(), |n| n.to_string());
    Ok(Report {
        header: vec!["n", "sturm_count", "root_lo", "root_hi", "eta_max"],
        rows,
        notes: vec![format!(
            "sequence {}, class {}, first violating n {first}",
            seq.family(),
            report.class
        )],
        json: serde_json::to_value(&report)?,
    })
}

fn reconstruct_cmd<S: Scalar>(
    common: &Common,
    check_det: bool,
    cross_check_system: bool,
) -> anyhow::Result<Report> {
    let roots: RootSequence<S> = roots(common)?;
    let horizon = common.n_max.unwrap_or(roots.len() + 1);
    let opts = ReconstructOptions {
        cross_check_system,
        check_det,
    };
    let report = reconstruct(&roots, horizon, opts)?;
    let flag = |b: Option<bool>| b.map_or(String::new(), |b| b.to_string());
    let rows = report
        .steps
        .iter()
        .map(|s| {
            vec![
                s.n.to_string(),
                show(common, &s.a),
                show(common, &s.x),
                show(common, &s.i),
                s.monotone.to_string(),
                s.i_recurrence.to_string(),
                s.factorizes.to_string(),
                flag(s.system_agrees),
                flag(s.det.as_ref().map(|d| d.passed())),
            ]
        })
        .collect();
    let passed = report.all_checks_pass();
    if !passed {
        eprintln!("warning: some reconstruction checks failed");
    }
    Ok(Report {
        header: vec![
            "n",
            "a",
            "x_n",
            "I_n",
            "monotone",
            "i_recurrence",
            "factorizes",
            "system_agrees",
            "det_passed",
        ],
        rows,
        notes: vec![format!("all checks pass: {passed}")],
        json: serde_json::from_str(&report.to_json()?)?,
    })
}

fn sample<S: Scalar>(
    common: &Common,
    n: usize,
    eta: &str,
    draws: u64,
    seed: u64,
) -> anyhow::Result<Report> {
    let seq: GenSequence<S> = sequence(common, n)?;
    let eta: S = scalar(eta, "--eta")?;
    let hist = sample_trials(&seq, n, &eta, draws, seed)?;
    let row = distribution_row(&seq, n, &eta)?;
    let rows = hist
        .counts
        .iter()
        .zip(&row.probs)
        .enumerate()
        .map(|(k, (c, p))| {
            vec![
                k.to_string(),
                c.to_string(),
                format!("{}", *c as f64 / draws.max(1) as f64),
                show(common, p),
            ]
        })
        .collect();
    Ok(Report {
        header: vec!["k", "count", "frequency", "probability"],
        rows,
        notes: vec![format!("sequence {}", seq.family())],
        json: json!({ "histogram": hist, "row": row }),
    })
}

fn identity<S: Scalar>(common: &Common, eta: &str, t: &str, order: usize) -> anyhow::Result<Report> {
    let seq: GenSequence<S> = sequence(common, order)?;
    let check = product_identity_check(&seq, &scalar(eta, "--eta")?, &scalar(t, "--t")?, order)?;
    let rows = check
        .coefficient_residuals
        .iter()
        .enumerate()
        .map(|(m, r)| vec![m.to_string(), show(common, r)])
        .collect();
    Ok(Report {
        header: vec!["m", "residual"],
        rows,
        notes: vec![format!(
            "sequence {}, coefficients vanish: {}, lhs {}, rhs {}",
            seq.family(),
            check.coefficients_vanish,
            show(common, &check.lhs),
            show(common, &check.rhs)
        )],
        json: serde_json::to_value(&check)?,
    })
}
