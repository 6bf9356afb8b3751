use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flipcheck_core::dualgraph::elephant_components;
use flipcheck_core::transitions::enumerate_targets;
use flipcheck_core::{
    oracle_check, verify_divisorial_case, verify_flip_case, Bounds, CaseLabel, Configuration, ExtremalNbhd, NbhdKind,
    Params, SingType, TerminalPoint, VerifyReport,
};
use serde_json::json;

mod config;

#[derive(Parser, Debug)]
#[command(name = "flipcheck", version, about = "Invariants of terminal threefold singularities and bounded checks of how flips and divisorial contractions change them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Ξ and F of a single terminal point.
    Invariant,
    /// Dual graph of the general elephant of a point, or of a case.
    Graph,
    /// Describe a case of the catalog, or list all cases.
    Classify,
    /// Admissible singularities after the contraction.
    Enumerate,
    /// Sweep a case (or every case) and check the inequalities.
    Verify,
    /// Cross-check closed forms against baskets and the elephant table.
    Oracle,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Point type: cA, cAx2, cAx4, cD2, cD3, cE2.
    #[arg(long = "type", global = true)]
    point_type: Option<SingType>,
    /// Index of a cA point.
    #[arg(long, global = true)]
    r: Option<u64>,
    /// Axial weight, or the case parameter k.
    #[arg(long, global = true)]
    k: Option<u64>,
    /// Case label such as 2.2.1.1 or 2.2.1'.3 (also 2.2.1p.3).
    #[arg(long = "case", global = true)]
    case: Option<CaseLabel>,
    /// Every case.
    #[arg(long, global = true)]
    all: bool,
    #[arg(long, global = true)]
    m: Option<u64>,
    #[arg(long, global = true)]
    r1: Option<u64>,
    #[arg(long, global = true)]
    k1: Option<u64>,
    #[arg(long, global = true)]
    r2: Option<u64>,
    #[arg(long, global = true)]
    k2: Option<u64>,
    /// isolated (flip) or divisorial. Verify runs every applicable kind when omitted.
    #[arg(long, global = true)]
    kind: Option<NbhdKind>,
    #[arg(long, global = true, default_value_t = 20)]
    max_index: u64,
    #[arg(long, global = true, default_value_t = 20)]
    max_aw: u64,
    /// Defaults to json for enumerate and text otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// key=value file mirroring these flags; flags win.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

impl Opts {
    fn bounds(&self) -> Result<Bounds> {
        Ok(Bounds::new(self.max_index, self.max_aw)?)
    }

    fn format(&self, command: Command) -> Format {
        self.format.unwrap_or(if command == Command::Enumerate { Format::Json } else { Format::Text })
    }

    fn point(&self) -> Result<TerminalPoint> {
        let tag = self.point_type.ok_or_else(|| anyhow!("--type is required"))?;
        let r = match (tag.fixed_index(), self.r) {
            (Some(fixed), None) => fixed,
            (_, Some(r)) => r,
            (None, None) => bail!("--r is required for type {}", tag.as_str()),
        };
        let k = match (tag.fixed_aw(), self.k) {
            (Some(fixed), None) => fixed,
            (_, Some(k)) => k,
            (None, None) => bail!("--k is required for type {}", tag.as_str()),
        };
        Ok(TerminalPoint::new(tag, r, k)?)
    }

    fn params(&self) -> Params {
        Params { m: self.m, k: self.k, r1: self.r1, k1: self.k1, r2: self.r2, k2: self.k2 }
    }

    fn case(&self) -> Result<CaseLabel> {
        self.case.ok_or_else(|| anyhow!("--case is required"))
    }

    fn nbhd(&self) -> Result<ExtremalNbhd> {
        let label = self.case()?;
        let kind = self.kind.unwrap_or(default_kind(label));
        Ok(ExtremalNbhd::new(label, kind, self.params())?)
    }
}

fn default_kind(label: CaseLabel) -> NbhdKind {
    if label.allows(NbhdKind::Isolated) {
        NbhdKind::Isolated
    } else {
        NbhdKind::Divisorial
    }
}

struct Output {
    body: String,
    violations: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, violations: false }
    }

    fn report(report: &VerifyReport, format: Format) -> Self {
        let body = match format {
            Format::Json => report.to_json() + "\n",
            Format::Csv => report.to_csv(),
            Format::Text => report.to_text(),
        };
        Output { body, violations: !report.passes() }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn invariant(opts: &Opts, format: Format) -> Result<Output> {
    let p = opts.point()?;
    let (xi, f) = (p.xi(), p.f_invariant());
    Ok(Output::ok(match format {
        Format::Text => format!("Xi={xi} F={f}\n"),
        Format::Csv => format!("point,xi,F\n{p},{xi},{f}\n"),
        Format::Json => pretty(&json!({
            "point": p,
            "xi": xi,
            "F": f.to_string(),
            "basket": p.basket().entries().iter().map(|e| json!([e.b, e.r])).collect::<Vec<_>>(),
        })),
    }))
}

fn graph(opts: &Opts, format: Format) -> Result<Output> {
    if opts.case.is_some() {
        let n = opts.nbhd()?;
        let (ex, ey) = (n.graph_ex().to_string(), n.graph_ey().to_string());
        return Ok(Output::ok(match format {
            Format::Text => format!("E_X={ex} E_Y={ey}\n"),
            Format::Csv => format!("case,E_X,E_Y\n{},{ex},{ey}\n", n.label()),
            Format::Json => pretty(&json!({"case": n.label(), "params": n.params(), "graph_ex": ex, "graph_ey": ey})),
        }));
    }
    let p = opts.point()?;
    let g = elephant_components(&p).to_string();
    Ok(Output::ok(match format {
        Format::Text => format!("{g}\n"),
        Format::Csv => format!("point,graph\n{p},{g}\n"),
        Format::Json => pretty(&json!({"point": p, "graph": g})),
    }))
}

fn describe(n: &ExtremalNbhd) -> serde_json::Value {
    json!({
        "case": n.label(),
        "kind": n.kind(),
        "params": n.params(),
        "description": n.label().description(),
        "mu": n.mu(),
        "source": n.source_config(),
        "graph_ex": n.graph_ex().to_string(),
        "graph_ey": n.graph_ey().to_string(),
        "gorenstein_only": n.check_exclude() == flipcheck_core::TargetConstraint::GorensteinOnly,
    })
}

fn classify(opts: &Opts, format: Format) -> Result<Output> {
    if opts.all || opts.case.is_none() {
        let rows: Vec<_> = CaseLabel::ALL
            .iter()
            .map(|&l| {
                let kinds: Vec<&str> = [NbhdKind::Isolated, NbhdKind::Divisorial]
                    .into_iter()
                    .filter(|&k| l.allows(k))
                    .map(NbhdKind::as_str)
                    .collect();
                (l, kinds)
            })
            .collect();
        return Ok(Output::ok(match format {
            Format::Json => pretty(&json!(rows
                .iter()
                .map(|(l, kinds)| json!({
                    "case": l,
                    "description": l.description(),
                    "kinds": kinds,
                    "params": l.param_names(),
                }))
                .collect::<Vec<_>>())),
            Format::Csv | Format::Text => {
                let sep = if format == Format::Csv { "," } else { " " };
                let mut s = if format == Format::Csv { "case,description,kinds,params\n".to_string() } else { String::new() };
                for (l, kinds) in &rows {
                    s.push_str(&[l.as_str(), l.description(), &kinds.join("|"), &l.param_names().join("|")].join(sep));
                    s.push('\n');
                }
                s
            }
        }));
    }
    let n = opts.nbhd()?;
    let d = describe(&n);
    Ok(Output::ok(match format {
        Format::Json => pretty(&d),
        Format::Text | Format::Csv => {
            let fields = [
                ("case", n.label().to_string()),
                ("kind", n.kind().to_string()),
                ("params", format!("[{}]", n.params())),
                ("description", n.label().description().to_string()),
                ("mu", n.mu().to_string()),
                ("source", n.source_config().to_string()),
                ("graph_ex", n.graph_ex().to_string()),
                ("graph_ey", n.graph_ey().to_string()),
                ("gorenstein_only", d["gorenstein_only"].to_string()),
            ];
            if format == Format::Text {
                fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
            } else {
                let head: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
                let row: Vec<String> = fields.iter().map(|(_, v)| csv_field(v)).collect();
                format!("{}\n{}\n", head.join(","), row.join(","))
            }
        }
    }))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn enumerate(opts: &Opts, format: Format) -> Result<Output> {
    let n = opts.nbhd()?;
    let targets: Vec<Configuration> = enumerate_targets(&n, opts.bounds()?)?;
    Ok(Output::ok(match format {
        Format::Json => pretty(&json!({
            "case": n.label(),
            "kind": n.kind(),
            "params": n.params(),
            "targets": targets,
        })),
        Format::Text => {
            let mut s = format!("case={} kind={} params=[{}] targets={}\n", n.label(), n.kind(), n.params(), targets.len());
            for t in &targets {
                s.push_str(&format!("{t} Xi={} F={}\n", t.xi(), t.f_invariant()));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("target,xi,F\n");
            for t in &targets {
                s.push_str(&format!("{},{},{}\n", csv_field(&serde_json::to_string(t)?), t.xi(), t.f_invariant()));
            }
            s
        }
    }))
}

fn verify(opts: &Opts, format: Format) -> Result<Output> {
    let bounds = opts.bounds()?;
    let labels: Vec<CaseLabel> = match (opts.all, opts.case) {
        (true, _) => CaseLabel::ALL.to_vec(),
        (false, Some(l)) => vec![l],
        (false, None) => bail!("verify needs --case or --all"),
    };
    let mut report: Option<VerifyReport> = None;
    for label in labels {
        let kinds: Vec<NbhdKind> = match opts.kind {
            Some(k) => vec![k],
            None => [NbhdKind::Isolated, NbhdKind::Divisorial].into_iter().filter(|&k| label.allows(k)).collect(),
        };
        for kind in kinds {
            if opts.all && !label.allows(kind) {
                continue;
            }
            let r = match kind {
                NbhdKind::Isolated => verify_flip_case(label, bounds)?,
                NbhdKind::Divisorial => verify_divisorial_case(label, bounds)?,
            };
            report = Some(match report {
                Some(acc) => acc.merge(r),
                None => r,
            });
        }
    }
    let mut report = report.unwrap_or_else(|| VerifyReport::empty("all", bounds));
    if opts.all {
        report.case = "all".into();
    }
    Ok(Output::report(&report, format))
}

fn run(cli: &Cli) -> Result<Output> {
    let opts = &cli.opts;
    if let Some(j) = opts.jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("configuring worker threads")?;
    }
    let format = opts.format(cli.command);
    match cli.command {
        Command::Invariant => invariant(opts, format),
        Command::Graph => graph(opts, format),
        Command::Classify => classify(opts, format),
        Command::Enumerate => enumerate(opts, format),
        Command::Verify => verify(opts, format),
        Command::Oracle => Ok(Output::report(&oracle_check(opts.bounds()?), format)),
    }
}

fn emit(cli: &Cli, out: &Output) -> Result<()> {
    match &cli.opts.out {
        Some(path) => fs::write(path, &out.body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.body.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e:#}");
    eprintln!("usage: flipcheck <invariant|graph|classify|enumerate|verify|oracle> [flags]; see --help");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => return usage_error(e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => return usage_error(e),
    };
    if let Err(e) = emit(&cli, &out) {
        return usage_error(e);
    }
    ExitCode::from(u8::from(out.violations))
}
