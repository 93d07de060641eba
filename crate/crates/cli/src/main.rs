use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ehc_core::chainlocal::ChainContext;
use ehc_core::cycpoly::check_prime;
use ehc_core::genre::{esplit_levis, levi_name, order_polynomial, relative_weyl, GroupDescriptor, Model, Series};
use ehc_core::uniphc::{defect, ehc_series, relative_weyl_with_lambda, unipotent_blocks, unipotent_characters};
use ehc_core::verify::{verify_ctc_cardinality, verify_dade, Mode, VerificationReport, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "ehc", version, about = "Unipotent e-Harish-Chandra series, blocks and chain counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List unipotent characters with degrees and defects.
    Uch(Common),
    /// Unipotent e-Harish-Chandra series.
    Series(Common),
    /// e-split Levi classes.
    Levis(Explore),
    /// e-chain classes.
    Chains(Explore),
    /// Unipotent blocks with character counts per defect.
    Blocks(Common),
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Alternating chain-sum identity, per block and defect.
    Dade(VerifyArgs),
    /// Even and odd chain masses per block and defect.
    Ctc(VerifyArgs),
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// A, 2A, B or C.
    #[arg(long)]
    series: String,
    #[arg(long)]
    rank: u32,
    /// sc or gl (gl only for A and 2A).
    #[arg(long, default_value = "sc")]
    model: String,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    ell: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct Explore {
    #[command(flatten)]
    group: GroupArgs,
    /// Use this e directly instead of deriving it from q and ell.
    #[arg(long, conflicts_with_all = ["q", "ell"])]
    e: Option<u32>,
    #[arg(long, requires = "ell")]
    q: Option<u64>,
    #[arg(long, requires = "q")]
    ell: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    ell: u64,
    /// per-block or aggregate.
    #[arg(long, default_value = "per-block")]
    mode: String,
    /// Worker threads for the local counts.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

/// Argument problems that should exit with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(r: ehc_core::Result<T>) -> Result<T> {
    r.map_err(|e| Usage(e.to_string()).into())
}

impl GroupArgs {
    fn descriptor(&self) -> Result<GroupDescriptor> {
        let series = usage(Series::parse(&self.series))?;
        let model = usage(Model::parse(&self.model))?;
        usage(GroupDescriptor::new(series, self.rank, model))
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }

    fn text(&self, title: &str) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for r in &self.rows {
            for (w, v) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell(v).chars().count());
            }
        }
        let line = |cells: Vec<String>| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut s = format!("{title}\n");
        s += &line(self.columns.iter().map(|c| c.to_string()).collect());
        for r in &self.rows {
            s += &line(r.iter().map(cell).collect());
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = self.columns.join(",") + "\n";
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|v| {
                    let c = cell(v);
                    if c.contains([',', '"', ' ']) {
                        format!("\"{}\"", c.replace('"', "\"\""))
                    } else {
                        c
                    }
                })
                .collect();
            s += &(cells.join(",") + "\n");
        }
        s
    }

    fn json(&self, meta: Value) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect::<Map<_, _>>()))
            .collect();
        let mut obj = match meta {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("rows".into(), Value::Array(rows));
        Value::Object(obj)
    }

    fn render(&self, format: Format, title: &str, meta: Value) -> Result<String> {
        Ok(match format {
            Format::Text => self.text(title),
            Format::Csv => self.csv(),
            Format::Json => pretty(&self.json(meta))?,
        })
    }
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn emit(out: &OutputArgs, body: &str) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn group_meta(g: &GroupDescriptor) -> Value {
    json!({ "group": g.to_string() })
}

fn cmd_uch(a: &Common) -> Result<bool> {
    let g = a.group.descriptor()?;
    usage(check_prime(a.q, a.ell))?;
    let order = order_polynomial(&g);
    let mut t = Table::new(&["label", "degree", "degree_at_q", "defect"]);
    for ch in unipotent_characters(&g) {
        let at_q = ch.degree.evaluate(a.q as i64);
        let d = defect(&order, &ch.degree, a.q, a.ell)?;
        t.push(vec![json!(ch.label.to_string()), json!(ch.degree.to_string()), json!(at_q.to_string()), json!(d)]);
    }
    let title = format!("unipotent characters of {g} at q={} ell={}", a.q, a.ell);
    let meta = json!({ "group": g.to_string(), "q": a.q, "ell": a.ell });
    emit(&a.out, &t.render(a.out.format, &title, meta)?)?;
    Ok(true)
}

fn cmd_series(a: &Common) -> Result<bool> {
    let g = a.group.descriptor()?;
    let e = usage(check_prime(a.q, a.ell))?;
    let mut t = Table::new(&["levi", "cuspidal", "relative_weyl", "size", "members"]);
    for s in ehc_series(&g, e)? {
        let w = relative_weyl_with_lambda(&g, &s.pair)?;
        let members: Vec<String> = s.members.iter().map(|m| m.label.to_string()).collect();
        t.push(vec![
            json!(levi_name(&g, &s.pair.levi)),
            json!(s.pair.class.label.to_string()),
            json!(w.to_string()),
            json!(s.members.len()),
            json!(members.join(" ")),
        ]);
    }
    let title = format!("{g} e={e}: unipotent {e}-series");
    let meta = json!({ "group": g.to_string(), "e": e, "q": a.q, "ell": a.ell });
    emit(&a.out, &t.render(a.out.format, &title, meta)?)?;
    Ok(true)
}

fn explore_e(a: &Explore) -> Result<u32> {
    match (a.e, a.q, a.ell) {
        (Some(0), _, _) => Err(Usage("e must be positive".into()).into()),
        (Some(e), _, _) => Ok(e),
        (None, Some(q), Some(ell)) => usage(check_prime(q, ell)),
        _ => Err(Usage("give either --e or both --q and --ell".into()).into()),
    }
}

fn cmd_levis(a: &Explore) -> Result<bool> {
    let g = a.group.descriptor()?;
    let e = explore_e(a)?;
    let mut t = Table::new(&["levi", "relative_weyl", "weyl_order"]);
    for l in esplit_levis(&g, e)? {
        let w = relative_weyl(&g, &l)?;
        t.push(vec![json!(levi_name(&g, &l)), json!(w.to_string()), json!(w.order() as u64)]);
    }
    let mut meta = group_meta(&g);
    meta["e"] = json!(e);
    emit(&a.out, &t.render(a.out.format, &format!("{g} e={e}: e-split Levi classes"), meta)?)?;
    Ok(true)
}

fn cmd_chains(a: &Explore) -> Result<bool> {
    let g = a.group.descriptor()?;
    let e = explore_e(a)?;
    let cx = ChainContext::new(&g, e, None)?;
    let mut t = Table::new(&["length", "sign", "chain", "stabilizer_index"]);
    for c in &cx.chains {
        t.push(vec![json!(c.len()), json!(c.sign()), json!(cx.render_chain(c)), json!(c.relative_order())]);
    }
    let mut meta = group_meta(&g);
    meta["e"] = json!(e);
    emit(&a.out, &t.render(a.out.format, &format!("{g} e={e}: e-chain classes"), meta)?)?;
    Ok(true)
}

fn by_defect(m: &std::collections::BTreeMap<u32, u64>) -> String {
    let parts: Vec<String> = m.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    parts.join(" ")
}

fn cmd_blocks(a: &Common) -> Result<bool> {
    let g = a.group.descriptor()?;
    let e = usage(check_prime(a.q, a.ell))?;
    let mut t = Table::new(&["block", "levi", "cuspidal", "k_u", "k_cu"]);
    for b in unipotent_blocks(&g, a.q, a.ell)? {
        t.push(vec![
            json!(b.block.to_string()),
            json!(levi_name(&g, &b.pair.levi)),
            json!(b.pair.class.label.to_string()),
            json!(by_defect(&b.k_u)),
            json!(by_defect(&b.k_cu)),
        ]);
    }
    let title = format!("{g} q={} ell={} e={e}: unipotent blocks (counts as defect:number)", a.q, a.ell);
    let meta = json!({ "group": g.to_string(), "q": a.q, "ell": a.ell, "e": e });
    emit(&a.out, &t.render(a.out.format, &title, meta)?)?;
    Ok(true)
}

fn cmd_verify(a: &VerifyArgs, dade: bool) -> Result<bool> {
    let g = a.group.descriptor()?;
    usage(check_prime(a.q, a.ell))?;
    let Some(mode) = Mode::parse(&a.mode) else {
        bail!(Usage(format!("unknown mode {:?}; use per-block or aggregate", a.mode)));
    };
    if a.jobs == 0 {
        bail!(Usage("--jobs must be at least 1".into()));
    }
    let report: VerificationReport = if dade {
        verify_dade(&g, a.q, a.ell, mode, a.jobs)?
    } else {
        verify_ctc_cardinality(&g, a.q, a.ell, a.jobs)?
    };
    log::info!("{} rows, {} ms", report.rows.len(), report.elapsed_ms);
    let body = match a.out.format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
        Format::Json => pretty(&serde_json::to_value(&report)?)?,
    };
    emit(&a.out, &body)?;
    Ok(report.pass)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Uch(a) => cmd_uch(a),
        Command::Series(a) => cmd_series(a),
        Command::Levis(a) => cmd_levis(a),
        Command::Chains(a) => cmd_chains(a),
        Command::Blocks(a) => cmd_blocks(a),
        Command::Verify(VerifyCommand::Dade(a)) => cmd_verify(a, true),
        Command::Verify(VerifyCommand::Ctc(a)) => cmd_verify(a, false),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                let unsupported = matches!(err.downcast_ref::<ehc_core::Error>(), Some(ehc_core::Error::Unsupported(_)));
                ExitCode::from(if unsupported { 2 } else { 1 })
            }
        }
    }
}
