//! Subcommands. Each one builds a [`Report`]; `main` decides where it goes.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::Rng;
use relmaj::entangle::{
    battery_cost_search, entanglement_cost, entanglement_gain, fidelity_bounds, locc_possible,
    vidal_probability, vidal_probability_lp,
};
use relmaj::sample;
use relmaj::submaj::{
    approx_submajorizes, lambda_star, lambda_star_lp, optimal_errors, optimal_errors_lp,
    relatively_majorizes, submajorizes, witness_from_curves, z_star, z_star_lp, verify_witness,
    ApproxParams, Method, Witness,
};
use relmaj::thermo::{
    asymptotic_work_rate, bounds_report, erasure_cooling_rates, errors_at, phi, work_cost,
    work_value, z_to_work, BatteryContext, Outcome as BoundOutcome, Resource,
};
use relmaj::{Ext, LP_TOL};

use crate::plot::render_lorenz;
use crate::report::{Cell, Format, Report, Table};
use crate::spec::{load_resource, load_schmidt};

#[derive(Debug, Parser)]
#[command(name = "relmaj", version, about = "Relative majorization, thermodynamic work and entanglement calculus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report (or, for `lorenz`, the SVG) to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// `start:stop:count`, evenly spaced and inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Grid, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err("expected start:stop:count".into());
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let (start, stop) = (num(a)?, num(b)?);
        let count: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
        if count == 0 || !start.is_finite() || !stop.is_finite() {
            return Err("count must be ≥ 1 and bounds finite".into());
        }
        if count == 1 {
            return Ok(Grid(vec![start]));
        }
        let step = (stop - start) / (count - 1) as f64;
        Ok(Grid((0..count).map(|k| start + step * k as f64).collect()))
    }
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Source resource file.
    #[arg(long)]
    pub a: PathBuf,
    /// Target resource file.
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and sub-majorization decisions, with a witness matrix.
    Check(PairArgs),
    /// Boundary λ*_z of the feasible (λ, z) region.
    Region {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        z: Option<f64>,
        #[arg(long)]
        grid: Option<Grid>,
        /// Also report z*_λ at this probability.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Work value, work cost and φ_z of one resource.
    Work {
        #[arg(long)]
        a: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Convert z values to work at this inverse temperature.
        #[arg(long)]
        beta: Option<f64>,
        /// Tabulate φ_z over this grid of z.
        #[arg(long)]
        grid: Option<Grid>,
    },
    /// Optimal first- and second-kind errors ε*_z, η̂*_z.
    Approx {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long)]
        grid: Option<Grid>,
        /// Scale η̂ to a physical error for a battery at this β…
        #[arg(long)]
        beta: Option<f64>,
        /// …starting at this energy…
        #[arg(long, default_value_t = 0.0)]
        battery_energy: f64,
        /// …with this partition function.
        #[arg(long, default_value_t = 1.0)]
        battery_partition: f64,
    },
    /// Evaluate the inequality suite for a pair of resources.
    Bounds {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long = "z-prime", default_value_t = 1.0)]
        z_prime: f64,
    },
    /// Work rates of i.i.d. copies, or erasure rates when `--b` is absent.
    Asympt {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        nmax: u32,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Pure-state conversions between Schmidt vectors.
    Entangle {
        /// Source Schmidt file.
        #[arg(long)]
        a: PathBuf,
        /// Target Schmidt file.
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        /// Largest battery size for the integer search.
        #[arg(long, default_value_t = 64)]
        nmax: u32,
    },
    /// Plot Lorenz curves to the SVG file given by `--out`.
    Lorenz {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        /// Further resource files.
        more: Vec<PathBuf>,
    },
    /// Cross-check closed forms against the LP oracle on random instances.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

/// A finished command: its report and the exit code it asks for.
pub struct Outcome {
    pub report: Report,
    pub code: i32,
    /// Where the report goes (`None`: stdout).
    pub report_path: Option<PathBuf>,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut report_path = cli.out.clone();
    let mut code = 0;
    let report = match &cli.command {
        Command::Check(p) => check(p)?,
        Command::Region { pair, z, grid, lambda } => region(pair, *z, grid.as_ref(), *lambda)?,
        Command::Work { a, z, lambda, beta, grid } => work(a, *z, *lambda, *beta, grid.as_ref())?,
        Command::Approx { pair, z, grid, beta, battery_energy, battery_partition } => {
            let battery = beta.map(|b| BatteryContext::new(b, *battery_energy, *battery_partition)).transpose()?;
            approx(pair, *z, grid.as_ref(), battery)?
        }
        Command::Bounds { pair, lambda, z, z_prime } => bounds(pair, *lambda, *z, *z_prime)?,
        Command::Asympt { a, b, nmax, lambda } => asympt(a, b.as_deref(), *nmax, *lambda)?,
        Command::Entangle { a, b, z, nmax } => entangle(a, b, *z, *nmax)?,
        Command::Lorenz { a, b, more } => {
            let Some(path) = report_path.take() else {
                bail!("lorenz needs --out <file.svg>");
            };
            lorenz(a, b.as_deref(), more, &path)?
        }
        Command::Verify { seed, cases } => {
            let (r, ok) = verify(*seed, *cases)?;
            if !ok {
                code = 1;
            }
            r
        }
    };
    Ok(Outcome { report, code, report_path })
}

fn load_pair(p: &PairArgs) -> Result<(Resource, Resource)> {
    Ok((load_resource(&p.a)?, load_resource(&p.b)?))
}

fn grid_or(z: Option<f64>, grid: Option<&Grid>, default: f64) -> Vec<f64> {
    match (grid, z) {
        (Some(g), _) => g.0.clone(),
        (None, Some(z)) => vec![z],
        (None, None) => vec![default],
    }
}

fn witness_table(title: &str, w: &Witness) -> Table {
    let mut t = Table::new(title, &["row", "col", "value"]);
    for (j, row) in w.matrix.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            t.push(vec![j.into(), i.into(), (*v).into()]);
        }
    }
    t
}

fn check(p: &PairArgs) -> Result<Report> {
    let (a, b) = load_pair(p)?;
    let (pa, pb) = (a.pair(), b.pair());
    let exact = relatively_majorizes(&pa, &pb)?;
    let sub = submajorizes(&pa, &pb, Method::Lp)?;
    let geo = submajorizes(&pa, &pb, Method::Geometric)?;
    let mut t = Table::new("decision", &["source", "target", "relation", "holds"]);
    for (rel, holds) in [("majorizes", exact.holds), ("submajorizes-lp", sub.holds), ("submajorizes-geometric", geo.holds)] {
        t.push(vec![a.label().into(), b.label().into(), rel.into(), holds.into()]);
    }
    let mut r = Report::default();
    r.add(t);
    if let Some(w) = exact.witness.as_ref().or(sub.witness.as_ref()) {
        r.add(witness_table("witness", w));
    }
    Ok(r)
}

fn region(p: &PairArgs, z: Option<f64>, grid: Option<&Grid>, lambda: Option<f64>) -> Result<Report> {
    let (a, b) = load_pair(p)?;
    let (pa, pb) = (a.pair(), b.pair());
    let mut t = Table::new("boundary", &["z", "lambda_star"]);
    for z in grid_or(z, grid, 1.0) {
        t.push(vec![z.into(), lambda_star(&pa, &pb, z)?.into()]);
    }
    let mut r = Report::default();
    r.add(t);
    if let Some(l) = lambda {
        let mut t = Table::new("z_star", &["lambda", "z_star"]);
        t.push(vec![l.into(), z_star(&pa, &pb, l)?.into()]);
        r.add(t);
    }
    Ok(r)
}

fn work(a: &Path, z: f64, lambda: f64, beta: Option<f64>, grid: Option<&Grid>) -> Result<Report> {
    let a = load_resource(a)?;
    let mut r = Report::default();
    let v = work_value(&a, z, lambda)?;
    let mut t = Table::new("value", &["z", "lambda", "z_star", "lambda_star", "eta_hat", "work_extracted"]);
    let w = beta.map_or(Cell::Text(String::new()), |b| z_to_work(v.z_star, b).into());
    t.push(vec![z.into(), lambda.into(), v.z_star.into(), v.lambda_star.into(), v.eta_hat.into(), w]);
    r.add(t);
    let z_cost = z.max(1.0);
    let c = work_cost(&a, lambda, z_cost)?;
    let mut t = Table::new("cost", &["z", "lambda", "z_star", "eps_star", "eta_star", "work_spent"]);
    let w = beta.map_or(Cell::Text(String::new()), |b| (-z_to_work(c.z_star, b)).into());
    t.push(vec![z_cost.into(), lambda.into(), c.z_star.into(), c.eps_star.into(), c.eta_star.into(), w]);
    r.add(t);
    if let Some(g) = grid {
        let mut t = Table::new("phi", &["z", "phi"]);
        for &z in &g.0 {
            t.push(vec![z.into(), phi(&a, z)?.into()]);
        }
        r.add(t);
    }
    Ok(r)
}

fn approx(p: &PairArgs, z: f64, grid: Option<&Grid>, battery: Option<BatteryContext>) -> Result<Report> {
    let (a, b) = load_pair(p)?;
    let mut t = Table::new("errors", &["z", "eps_star", "eta_hat_star", "eta_physical"]);
    for z in grid_or(Some(z), grid, 1.0) {
        let (eps, eta) = errors_at(&a, &b, z)?;
        let phys = battery.map_or(Cell::Text(String::new()), |bc| bc.physical_eta(eta).into());
        t.push(vec![z.into(), eps.into(), eta.into(), phys]);
    }
    let mut r = Report::default();
    r.add(t);
    Ok(r)
}

fn bounds(p: &PairArgs, lambda: f64, z: f64, z_prime: f64) -> Result<Report> {
    let (a, b) = load_pair(p)?;
    let rep = bounds_report(&a, &b, lambda, z, z_prime)?;
    let mut t = Table::new("bounds", &["id", "lhs", "rhs", "outcome", "note"]);
    for e in &rep.entries {
        let (outcome, note) = match &e.outcome {
            BoundOutcome::Holds => ("holds", String::new()),
            BoundOutcome::Violated => ("violated", String::new()),
            BoundOutcome::Skipped(why) => ("skipped", why.clone()),
        };
        let num = |v: Ext| if e.is_skipped() { Cell::Text(String::new()) } else { v.into() };
        t.push(vec![e.id.into(), num(e.lhs), num(e.rhs), outcome.into(), note.into()]);
    }
    let mut r = Report::default();
    r.add(t);
    Ok(r)
}

fn asympt(a: &Path, b: Option<&Path>, nmax: u32, lambda: f64) -> Result<Report> {
    if nmax == 0 {
        bail!("--nmax must be at least 1");
    }
    let a = load_resource(a)?;
    let ns: Vec<u32> = (1..=nmax).collect();
    let table = match b {
        Some(b) => asymptotic_work_rate(&a, &load_resource(b)?, &ns, lambda)?,
        None => erasure_cooling_rates(&a, &ns)?,
    };
    let mut t = Table::new("rates", &["n", "rate"]);
    for pt in &table.points {
        t.push(vec![pt.n.into(), pt.rate.into()]);
    }
    let mut l = Table::new("limit", &["limit"]);
    l.push(vec![table.limit.into()]);
    let mut r = Report::default();
    r.add(t);
    r.add(l);
    Ok(r)
}

fn entangle(a: &Path, b: &Path, z: f64, nmax: u32) -> Result<Report> {
    let (na, s) = load_schmidt(a)?;
    let (nb, t) = load_schmidt(b)?;
    let mut d = Table::new("conversion", &["source", "target", "certain", "probability", "cost", "gain"]);
    d.push(vec![
        na.into(),
        nb.into(),
        locc_possible(&s, &t)?.into(),
        vidal_probability(&s, &t).into(),
        entanglement_cost(&s, &t).into(),
        entanglement_gain(&s, &t).into(),
    ]);
    let mut r = Report::default();
    r.add(d);
    let mut bt = Table::new("battery", &["initial", "final", "ratio"]);
    if let Some(found) = battery_cost_search(&s, &t, nmax) {
        bt.push(vec![found.initial.into(), found.final_.into(), found.ratio().into()]);
    }
    r.add(bt);
    let f = fidelity_bounds(&s, &t, z)?;
    let opt = |v: Option<f64>| v.map_or(Cell::Text(String::new()), Cell::Num);
    let mut ft = Table::new("fidelity", &["z", "shift", "entropy", "cost", "bhattacharyya"]);
    ft.push(vec![z.into(), f.shift.into(), opt(f.entropy), opt(f.cost), f.bhattacharyya.into()]);
    r.add(ft);
    Ok(r)
}

fn lorenz(a: &Path, b: Option<&Path>, more: &[PathBuf], out: &Path) -> Result<Report> {
    let mut curves = Vec::new();
    for path in std::iter::once(a).chain(b).chain(more.iter().map(PathBuf::as_path)) {
        let res = load_resource(path)?;
        curves.push((res.label().to_string(), res.pair()));
    }
    render_lorenz(&curves, out).with_context(|| format!("rendering {}", out.display()))?;
    let mut t = Table::new("curves", &["label", "elbows"]);
    for (label, pair) in &curves {
        t.push(vec![label.clone().into(), pair.elbows().points.len().into()]);
    }
    let mut r = Report::default();
    r.add(t);
    Ok(r)
}

fn close(a: Ext, b: Ext, tol: f64) -> bool {
    match (a, b) {
        (Ext::Finite(x), Ext::Finite(y)) => (x - y).abs() <= tol * (1.0 + x.abs()),
        (x, y) => x == y,
    }
}

/// Random cross-checks. Returns the summary and whether everything agreed.
pub fn verify(seed: u64, cases: usize) -> Result<(Report, bool)> {
    let mut rng = sample::rng(seed);
    let names = [
        "submajorization",
        "curve-witness",
        "approximate",
        "lambda-star",
        "z-star",
        "optimal-errors",
        "success-probability",
    ];
    let mut agree = [0usize; 7];
    let mut tried = [0usize; 7];
    for _ in 0..cases {
        let (a, b) = (sample::pair(&mut rng, 6), sample::pair(&mut rng, 6));
        let lp = submajorizes(&a, &b, Method::Lp)?.holds;
        let geo = submajorizes(&a, &b, Method::Geometric)?.holds;
        tried[0] += 1;
        agree[0] += usize::from(lp == geo);
        if geo {
            tried[1] += 1;
            agree[1] += usize::from(verify_witness(&witness_from_curves(&a, &b)?, &a, &b));
        }
        let params = ApproxParams::new(rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5))?;
        tried[2] += 1;
        agree[2] += usize::from(
            approx_submajorizes(&a, &b, params, Method::Lp)? == approx_submajorizes(&a, &b, params, Method::Geometric)?,
        );
        let (e, h) = optimal_errors(&a, &b);
        let (e2, h2) = optimal_errors_lp(&a, &b)?;
        tried[5] += 1;
        agree[5] += usize::from((e - e2).abs() <= LP_TOL && close(h, h2, LP_TOL));

        let (na, nb) = (sample::normalized_pair(&mut rng, 1, 5), sample::normalized_pair(&mut rng, 1, 5));
        let z = rng.gen_range(0.2..3.0);
        tried[3] += 1;
        agree[3] += usize::from((lambda_star(&na, &nb, z)? - lambda_star_lp(&na, &nb, z)?).abs() <= LP_TOL);
        let l = rng.gen_range(0.05..1.0);
        tried[4] += 1;
        agree[4] += usize::from(close(z_star(&na, &nb, l)?, z_star_lp(&na, &nb, l)?, LP_TOL));

        let (s, t) = (sample::schmidt(&mut rng, 1, 5), sample::schmidt(&mut rng, 1, 5));
        tried[6] += 1;
        agree[6] += usize::from((vidal_probability(&s, &t) - vidal_probability_lp(&s, &t)?).abs() <= 1e-6);
    }
    let mut t = Table::new("verify", &["check", "cases", "agreements"]);
    for k in 0..names.len() {
        t.push(vec![names[k].into(), tried[k].into(), agree[k].into()]);
    }
    let mut s = Table::new("summary", &["seed", "cases", "all_agree"]);
    let ok = agree == tried;
    s.push(vec![Cell::Int(seed as i64), cases.into(), ok.into()]);
    let mut r = Report::default();
    r.add(t);
    r.add(s);
    Ok((r, ok))
}

/// Render to the requested place.
pub fn emit(outcome: &Outcome, format: Format) -> Result<()> {
    let text = outcome.report.render(format);
    match &outcome.report_path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
