use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use chen_core::bar::{bar_cohomology, build_bar};
use chen_core::cobar::{
    bar_cobar_rank_compare, fixture, group_ring_oracle, h0_algebra, pairing_with_integrals, presentation_fixture,
    GeometricRealization, Presentation, SimplicialSet,
};
use chen_core::dga::{sphere_model, torus_model, wedge_of_circles, DgaModel};
use chen_core::exact_seq::{build_sequence_at, check_exactness};
use chen_core::numerics::{SolverOptions, C};
use chen_core::special::{li_k, mpl11_integral, mpl11_series, zeta, Method, Mpl11Config};
use chen_core::sphere::sphere_report;
use chen_core::suites::{run_suite, SUITES};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Parser, Debug)]
#[command(name = "chen", version, about = "Iterated integrals, bar and cobar constructions, and their oracles")]
struct Cli {
    /// Output format.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Comparison tolerance for numerical checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Word-length cap.
    #[arg(long, global = true)]
    len: Option<usize>,
    /// Degree cap.
    #[arg(long, global = true)]
    deg: Option<u32>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory with `simplicial/` and `presentations/` JSON fixtures.
    #[arg(long, global = true)]
    fixture_dir: Option<PathBuf>,
    /// TOML file with defaults for the flags above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Loop-space cohomology, ring constants and homotopy ranks of a sphere.
    Sphere {
        #[arg(long)]
        n: u32,
    },
    /// Polylogarithm by series, integral or both.
    Polylog {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        /// Imaginary part of the argument.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Single zeta value with its remainder bound.
    Mzv {
        #[arg(long)]
        k: u32,
    },
    /// Two-variable polylogarithm by integral and double series.
    Mpl11 {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
    },
    /// Compare `H₀` of the truncated cobar construction with the group-ring oracle.
    Cobar {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        s: usize,
        /// Also compare bar and cobar rank tables up to `--deg`.
        #[arg(long)]
        ranks: bool,
    },
    /// Pair closed iterated integrals with the group ring of a geometric realization.
    Pairing {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long)]
        s: usize,
    },
    /// Run a property suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Bar cohomology rank table of a model.
    Bar {
        /// `sphere:N`, `torus:G`, `wedge:K` or a path to a model JSON file.
        #[arg(long)]
        model: String,
    },
    /// Five-term exact sequence ranks of a model.
    ExactSeq {
        #[arg(long)]
        model: String,
        /// Middle degree; every degree up to the model's top plus one when omitted.
        #[arg(long)]
        k: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Series,
    Integral,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Space {
    Torus,
    PuncturedPlane,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    format: Option<Format>,
    tol: Option<f64>,
    len: Option<usize>,
    deg: Option<u32>,
    seed: Option<u64>,
    fixture_dir: Option<PathBuf>,
}

struct Settings {
    format: Format,
    tol: f64,
    len: Option<usize>,
    deg: Option<u32>,
    seed: u64,
    fixture_dir: Option<PathBuf>,
}

impl Settings {
    fn solver(&self) -> SolverOptions {
        SolverOptions { tol: (self.tol * 1e-2).max(1e-13), ..Default::default() }
    }
}

#[derive(Serialize)]
struct Output {
    command: &'static str,
    pass: bool,
    report: Value,
    #[serde(skip)]
    table: Vec<Vec<String>>,
}

fn settings(cli: &Cli) -> anyhow::Result<Settings> {
    let file: RunConfig = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).map_err(|e| chen_core::Error::Input(format!("config {}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    let tol = cli.tol.or(file.tol).unwrap_or(1e-8);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(chen_core::Error::Input(format!("tolerance must be positive, got {tol}")).into());
    }
    Ok(Settings {
        format: cli.format.or(file.format).unwrap_or_default(),
        tol,
        len: cli.len.or(file.len),
        deg: cli.deg.or(file.deg),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        fixture_dir: cli.fixture_dir.clone().or(file.fixture_dir),
    })
}

fn f(x: f64) -> String {
    format!("{x:.15e}")
}

fn cx(z: C) -> String {
    if z.im == 0.0 {
        f(z.re)
    } else {
        format!("{}{:+.15e}i", f(z.re), z.im)
    }
}

fn load_set(name: &str, dir: Option<&Path>) -> anyhow::Result<(SimplicialSet, Presentation)> {
    let Some(dir) = dir else {
        let set = fixture(name)?;
        let pres = presentation_fixture(name).unwrap_or(Presentation { generators: vec![], relators: vec![] });
        return Ok((set, pres));
    };
    let read = |sub: &str| std::fs::read_to_string(dir.join(sub).join(format!("{name}.json")));
    let text = read("simplicial").map_err(|e| chen_core::Error::Input(format!("fixture {name}: {e}")))?;
    let set = SimplicialSet::from_json(&text)?;
    let pres = match read("presentations") {
        Ok(t) => Presentation::from_json(&t)?,
        Err(_) => Presentation { generators: vec![], relators: vec![] },
    };
    Ok((set, pres))
}

fn load_model(name: &str) -> anyhow::Result<DgaModel> {
    let arg = |s: &str| -> anyhow::Result<u32> {
        s.parse().map_err(|_| chen_core::Error::Input(format!("bad model parameter '{s}'")).into())
    };
    Ok(match name.split_once(':') {
        Some(("sphere", n)) => sphere_model(arg(n)?)?,
        Some(("torus", g)) => torus_model(arg(g)?)?,
        Some(("wedge", k)) => wedge_of_circles(arg(k)?)?,
        _ if name == "s2xs2" => {
            let s = sphere_model(2)?;
            s.tensor(&s)
        }
        _ => {
            let text = std::fs::read_to_string(name)
                .map_err(|e| chen_core::Error::Input(format!("model '{name}': {e}")))?;
            DgaModel::from_json(&text)?
        }
    })
}

fn run(cli: &Cli, st: &Settings) -> anyhow::Result<Output> {
    let opts = st.solver();
    Ok(match &cli.command {
        Command::Sphere { n } => {
            let r = sphere_report(*n, st.len.unwrap_or(4), st.deg)?;
            let mut pass = true;
            let mut table = vec![vec!["kind".into(), "index".into(), "value".into()]];
            for (j, k) in r.ranks.iter().enumerate() {
                let expected = usize::from(j as u32 % (n - 1) == 0 && j / (*n as usize - 1) <= r.length_cap);
                pass &= *k == expected;
                table.push(vec!["H".into(), j.to_string(), k.to_string()]);
            }
            for p in &r.products {
                table.push(vec!["theta_product".into(), format!("{}*{}", p.a, p.b), p.coefficient.clone().unwrap_or("-".into())]);
            }
            for p in &r.powers {
                table.push(vec!["theta1_power".into(), p.m.to_string(), p.coefficient.clone().unwrap_or("-".into())]);
            }
            for (j, k) in &r.homotopy {
                table.push(vec!["pi".into(), j.to_string(), k.to_string()]);
            }
            Output { command: "sphere", pass, report: serde_json::to_value(&r)?, table }
        }
        Command::Polylog { k, x, im, method } => {
            let z = C::new(*x, *im);
            let methods: &[Method] = match method {
                MethodArg::Series => &[Method::Series],
                MethodArg::Integral => &[Method::Integral],
                MethodArg::Both => &[Method::Series, Method::Integral],
            };
            let values = methods.iter().map(|m| li_k(*k, z, *m, &opts)).collect::<Result<Vec<_>, _>>()?;
            let gap = if values.len() == 2 { (values[0].value - values[1].value).norm() } else { 0.0 };
            let mut table = vec![vec!["method".into(), "value".into(), "error".into()]];
            for v in &values {
                table.push(vec![serde_json::to_value(v.method)?.as_str().unwrap_or("").into(), cx(v.value), f(v.error)]);
            }
            Output {
                command: "polylog",
                pass: gap <= st.tol,
                report: json!({"k": k, "x": [z.re, z.im], "values": values, "difference": gap}),
                table,
            }
        }
        Command::Mzv { k } => {
            let r = zeta(*k)?;
            let table = vec![
                vec!["k".into(), "value".into(), "remainder_bound".into()],
                vec![k.to_string(), f(r.value), f(r.remainder_bound)],
            ];
            Output { command: "mzv", pass: r.remainder_bound <= st.tol, report: serde_json::to_value(&r)?, table }
        }
        Command::Mpl11 { x, y } => {
            let (x, y) = (C::new(*x, 0.0), C::new(*y, 0.0));
            let integral = mpl11_integral(x, y, &Mpl11Config::default(), &opts)?;
            let series = mpl11_series(x, y)?;
            let gap = (integral.value - series.value).norm();
            let table = vec![
                vec!["method".into(), "value".into(), "error".into()],
                vec!["integral".into(), cx(integral.value), f(integral.error)],
                vec!["series".into(), cx(series.value), f(series.error)],
            ];
            Output {
                command: "mpl11",
                pass: gap <= st.tol.max(1e-6),
                report: json!({"x": x.re, "y": y.re, "integral": integral, "series": series, "difference": gap}),
                table,
            }
        }
        Command::Cobar { fixture, s, ranks } => {
            let (set, pres) = load_set(fixture, st.fixture_dir.as_deref())?;
            let h0 = h0_algebra(&set, *s)?;
            let oracle = group_ring_oracle(&pres, *s)?;
            let mut pass = h0.dimension == oracle.dimension;
            let mut table = vec![
                vec!["fixture".into(), "s".into(), "h0_dimension".into(), "oracle_dimension".into()],
                vec![fixture.clone(), s.to_string(), h0.dimension.to_string(), oracle.dimension.to_string()],
            ];
            let mut report = json!({"fixture": fixture, "s": s, "h0": h0, "oracle": oracle});
            if *ranks {
                let cmp = bar_cobar_rank_compare(&set, *s, st.deg.unwrap_or(2))?;
                pass &= cmp.agrees();
                table.push(vec!["bar_ranks".into(), format!("{:?}", cmp.bar)]);
                table.push(vec!["cobar_ranks".into(), format!("{:?}", cmp.cobar)]);
                report["ranks"] = serde_json::to_value(&cmp)?;
            }
            Output { command: "cobar", pass, report, table }
        }
        Command::Pairing { space, s } => {
            let real = match space {
                Space::Torus => GeometricRealization::flat_torus()?,
                Space::PuncturedPlane => GeometricRealization::punctured_plane()?,
            };
            let r = pairing_with_integrals(&real, *s, 1e8, &opts)?;
            let mut table = vec![r.columns.iter().cloned().fold(vec!["row".to_string()], |mut v, c| {
                v.push(c);
                v
            })];
            for (label, row) in r.rows.iter().zip(&r.matrix) {
                let mut line = vec![label.clone()];
                line.extend(row.iter().map(|z| cx(*z)));
                table.push(line);
            }
            Output { command: "pairing", pass: r.nonsingular, report: serde_json::to_value(&r)?, table }
        }
        Command::Verify { suite } => {
            let r = run_suite(suite, st.seed).map_err(|e| match e {
                chen_core::Error::Input(m) => chen_core::Error::Input(format!("{m}; suites: {}", SUITES.join(", "))),
                other => other,
            })?;
            let mut table = vec![vec!["check".into(), "cases".into(), "pass".into(), "detail".into()]];
            for c in &r.checks {
                table.push(vec![c.name.clone(), c.cases.to_string(), c.pass.to_string(), c.detail.clone()]);
            }
            Output { command: "verify", pass: r.pass, report: serde_json::to_value(&r)?, table }
        }
        Command::Bar { model } => {
            let m = load_model(model)?;
            let len = st.len.unwrap_or(3);
            let deg = st.deg.unwrap_or(4);
            let coh = bar_cohomology(&build_bar(&m, len, deg)?);
            let mut table = vec![(0..=deg).map(|j| format!("H^{j}")).fold(vec!["s".to_string()], |mut v, c| {
                v.push(c);
                v
            })];
            for (s, row) in coh.table().iter().enumerate() {
                let mut line = vec![s.to_string()];
                line.extend(row.iter().map(usize::to_string));
                table.push(line);
            }
            Output {
                command: "bar",
                pass: true,
                report: json!({"model": model, "length_cap": len, "degree_cap": deg, "ranks": coh.table()}),
                table,
            }
        }
        Command::ExactSeq { model, k } => {
            let m = load_model(model)?;
            let degrees: Vec<u32> = match k {
                Some(k) => vec![*k],
                None => (2..=m.max_degree().max(2) + 1).collect(),
            };
            let mut pass = true;
            let mut reports = Vec::new();
            let mut table = vec![vec!["k".into(), "node".into(), "dim".into(), "outgoing_rank".into(), "exact".into()]];
            for k in degrees {
                let seq = build_sequence_at(&m, k)?;
                let rep = check_exactness(&seq);
                pass &= rep.is_exact();
                let map_ranks: Vec<usize> = seq.maps.iter().map(|q| q.rank()).collect();
                for (i, node) in rep.nodes.iter().enumerate() {
                    let out = map_ranks.get(i).map_or("-".to_string(), usize::to_string);
                    table.push(vec![k.to_string(), node.node.into(), node.dim.to_string(), out, node.exact.to_string()]);
                }
                reports.push(json!({"k": k, "dims": seq.dims, "map_ranks": map_ranks, "nodes": rep.nodes}));
            }
            Output { command: "exact-seq", pass, report: json!({"model": model, "sequences": reports}), table }
        }
    })
}

fn emit(out: &Output, format: Format) -> anyhow::Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(out)?),
        Format::Tsv => {
            for row in &out.table {
                println!("{}", row.join("\t"));
            }
            println!("pass\t{}", out.pass);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = settings(&cli).and_then(|st| {
        let out = run(&cli, &st)?;
        emit(&out, st.format)?;
        Ok(out.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let input = e.downcast_ref::<chen_core::Error>().map_or(true, |c| c.is_input_error());
            if input {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
