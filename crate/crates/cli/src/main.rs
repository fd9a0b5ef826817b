use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rank3_core::expected::expected;
use rank3_core::geometry::Family;
use rank3_core::pipeline::{
    analyze, check_ell, geometry_stage, group_stage, space_spec, suite, Options, Status, DEFAULT_MAX_P,
};
use rank3_core::report::{verify, Report};

#[derive(Parser)]
#[command(name = "rank3", version, about = "Rank-3 permutation modules of O±2n(2) and Um(2) on nonsingular points")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nonsingular and singular point counts.
    Points(Instance),
    /// Parameters (v, a, b, r, s) and the roots c, d.
    Params(Instance),
    /// Group order by Schreier–Sims, rank and suborbits.
    Order(Instance),
    /// Full structure analysis of FP over F_ℓ.
    Analyze(Instance),
    /// The structure predicted for an instance.
    Expect(Instance),
    /// Analyze (or load a stored report) and compare with the prediction.
    Verify {
        #[command(flatten)]
        inst: Instance,
        /// Verify a stored JSON report instead of recomputing.
        #[arg(long)]
        report: Option<std::path::PathBuf>,
    },
    /// Every verifiable case of the predicted structures.
    Suite {
        #[command(flatten)]
        common: Common,
        /// Also run U m=7, ℓ=3.
        #[arg(long)]
        extended: bool,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_P)]
    max_p_size: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Skip the complete Schreier–Sims run; the order then rests on bounds.
    #[arg(long)]
    skip_order: bool,
}

#[derive(Args, Clone)]
struct Instance {
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Dimension of the natural module (2n for orthogonal families).
    #[arg(long, conflicts_with = "n")]
    dim: Option<usize>,
    /// Witt index n of an orthogonal family.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ell: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).map_err(|e| e.to_string())
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

impl Instance {
    fn family(&self) -> Result<Family, Usage> {
        self.family.ok_or_else(|| Usage("--family is required".into()))
    }

    /// n for orthogonal families, m for unitary.
    fn size(&self) -> Result<usize, Usage> {
        let fam = self.family()?;
        match (fam, self.dim, self.n) {
            (Family::Unitary, Some(m), None) => Ok(m),
            (Family::Unitary, _, Some(_)) => Err(Usage("--n applies to orthogonal families; use --dim".into())),
            (_, Some(d), None) if d % 2 == 0 => Ok(d / 2),
            (_, Some(d), None) => Err(Usage(format!("orthogonal dimension must be even, got {d}"))),
            (_, None, Some(n)) => Ok(n),
            _ => Err(Usage("one of --dim or --n is required".into())),
        }
    }

    fn ell(&self) -> Result<u32, Usage> {
        let ell = self.ell.ok_or_else(|| Usage("--ell is required".into()))?;
        check_ell(ell)?;
        Ok(ell)
    }

    fn options(&self) -> Options {
        Options {
            seed: self.common.seed,
            max_p_size: self.common.max_p_size,
            skip_order: self.common.skip_order,
            ..Options::default()
        }
    }
}

fn print_value(v: &serde_json::Value, text: String, fmt: Format) {
    match fmt {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("value serializes")),
        Format::Text => print!("{text}"),
    }
}

fn print_report(r: &Report, fmt: Format) {
    match fmt {
        Format::Json => println!("{}", r.to_json()),
        Format::Text => print!("{}", r.to_text()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Usage> {
    match cli.cmd {
        Cmd::Points(inst) => {
            let spec = space_spec(inst.family()?, inst.size()?)?;
            let geo = geometry_stage(spec, inst.common.max_p_size)?;
            let (p, p0) = (geo.ps.p.len(), geo.ps.p0.len());
            let v = json!({"schema": 1, "family": spec.family, "m": spec.dim, "n": spec.n(),
                "points": {"nonsingular": p, "singular": p0}});
            print_value(&v, format!("{spec}: |P| = {p}, |P0| = {p0}\n"), inst.common.format);
        }
        Cmd::Params(inst) => {
            let spec = space_spec(inst.family()?, inst.size()?)?;
            let geo = geometry_stage(spec, inst.common.max_p_size)?;
            let (p, r) = (geo.params, geo.roots);
            let v = json!({"schema": 1, "family": spec.family, "m": spec.dim, "n": spec.n(),
                "params": p, "roots": [r.c, r.d]});
            let text = format!("({}, {}, {}, {}, {}), roots ({}, {})\n", p.v, p.a, p.b, p.r, p.s, r.c, r.d);
            print_value(&v, text, inst.common.format);
        }
        Cmd::Order(inst) => {
            let spec = space_spec(inst.family()?, inst.size()?)?;
            let geo = geometry_stage(spec, inst.common.max_p_size)?;
            let gs = group_stage(&geo, inst.common.seed, inst.common.skip_order)?;
            let g = gs.info();
            let text = format!(
                "{spec}: order {} (formula {}, {}), rank {}, suborbits {:?}\n",
                g.order, g.formula_order, g.certificate, g.rank, g.suborbits
            );
            let v = json!({"schema": 1, "family": spec.family, "m": spec.dim, "n": spec.n(), "group": g});
            print_value(&v, text, inst.common.format);
        }
        Cmd::Analyze(inst) => {
            let r = analyze(inst.family()?, inst.size()?, inst.ell()?, &inst.options())?;
            print_report(&r, inst.common.format);
        }
        Cmd::Expect(inst) => {
            let exp = expected(inst.family()?, inst.size()?, inst.ell()?)?;
            let layers: Vec<Vec<&str>> = exp.layers().iter().map(|l| l.iter().map(|x| x.name()).collect()).collect();
            let v = json!({"schema": 1, "expected": exp, "layers": layers});
            let dims: Vec<String> = exp.dims.iter().map(|d| format!("{}:{}", d.label, d.dim)).collect();
            let text = format!(
                "{} m={} ell={} [{}]; dims {}; layers {}\n",
                exp.family,
                exp.m,
                exp.ell,
                exp.condition,
                dims.join(" "),
                layers.iter().map(|l| l.join("+")).collect::<Vec<_>>().join(" - ")
            );
            print_value(&v, text, inst.common.format);
        }
        Cmd::Verify { inst, report } => {
            let r = match report {
                Some(path) => {
                    let r = Report::from_json(&std::fs::read_to_string(path)?)?;
                    let exp = expected(r.input.family, size_of(&r), r.input.ell)?;
                    let mut r = r;
                    r.verdict = verify(&r, &exp);
                    r
                }
                None => analyze(inst.family()?, inst.size()?, inst.ell()?, &inst.options())?,
            };
            print_report(&r, inst.common.format);
            return Ok(if r.verdict.matched { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Cmd::Suite { common, extended } => {
            let opts = Options {
                seed: common.seed,
                max_p_size: common.max_p_size,
                skip_order: common.skip_order,
                ..Options::default()
            };
            let entries = suite(&opts, extended);
            match common.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&json!({"schema": 1, "suite": entries}))?),
                Format::Text => {
                    for e in &entries {
                        let status = serde_json::to_value(e.status)?;
                        let line = format!(
                            "{:<8} {} size={} ell={} {}",
                            status.as_str().unwrap_or("?"),
                            e.family,
                            e.size,
                            e.ell,
                            e.note
                        );
                        println!("{}", line.trim_end());
                    }
                }
            }
            if entries.iter().any(|e| e.status == Status::Error) {
                return Ok(ExitCode::from(2));
            }
            if entries.iter().any(|e| e.status == Status::Fail) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn size_of(r: &Report) -> usize {
    match r.input.family {
        Family::Unitary => r.input.m,
        _ => r.input.n,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
