//! Both sides of the alternating-sum identity for unipotent blocks, and the
//! cardinality check for the even/odd chain quadruples.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::chainlocal::{ChainContext, LocalCounter, Triple};
use crate::cycpoly::check_prime;
use crate::error::Result;
use crate::genre::{levi_factor_names, GroupDescriptor, Model};
use crate::uniphc::{pair_levi, unipotent_blocks, BlockId, CountTable};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PerBlock,
    Aggregate,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "per-block" => Some(Mode::PerBlock),
            "aggregate" => Some(Mode::Aggregate),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Dade,
    Ctc,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub block: String,
    pub unipotent: bool,
    pub d: u32,
    /// Dade: left-hand side. Ctc: even-length mass.
    pub lhs: i64,
    /// Dade: direct chain sum. Ctc: odd-length mass.
    pub rhs: i64,
    /// Dade only: the sum surviving the Δ cancellation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_delta: Option<i64>,
    pub equal: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub contributing_chains: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub check: Check,
    pub group: String,
    pub series: String,
    pub rank: u32,
    pub model: Model,
    pub q: u64,
    pub ell: u64,
    pub e: u32,
    pub mode: Mode,
    /// Multiplier applied to the unipotent counts on the left (gl model only).
    pub lhs_scale: u64,
    pub census: BTreeMap<usize, usize>,
    pub triples: usize,
    pub transport_failures: Vec<String>,
    pub delta_failures: Vec<String>,
    pub rows: Vec<Row>,
    pub pass: bool,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.equal)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let name = match self.check {
            Check::Dade => "dade",
            Check::Ctc => "ctc",
        };
        let _ = writeln!(s, "{name} {} q={} ell={} e={} mode={}", self.group, self.q, self.ell, self.e, mode_str(self.mode));
        let census: Vec<String> = self.census.iter().map(|(l, n)| format!("{l}:{n}")).collect();
        let _ = writeln!(s, "chains by length {{{}}}, triples {}", census.join(", "), self.triples);
        if self.lhs_scale != 1 {
            let _ = writeln!(s, "lhs scaled by |Z(G*)| = {}", self.lhs_scale);
        }
        let (l, r) = match self.check {
            Check::Dade => ("lhs", "rhs"),
            Check::Ctc => ("even", "odd"),
        };
        let width = self.rows.iter().map(|r| r.block.len()).max().unwrap_or(5).max(5);
        let _ = write!(s, "{:<width$}  {:>3}  {:>6}  {:>6}", "block", "d", l, r);
        if self.check == Check::Dade {
            let _ = write!(s, "  {:>6}", "delta");
        }
        let _ = writeln!(s, "  ok");
        for row in &self.rows {
            let _ = write!(s, "{:<width$}  {:>3}  {:>6}  {:>6}", row.block, row.d, row.lhs, row.rhs);
            if let Some(x) = row.rhs_delta {
                let _ = write!(s, "  {x:>6}");
            }
            let _ = writeln!(s, "  {}", if row.equal { "yes" } else { "NO" });
        }
        for (i, row) in self.mismatches().take(20).enumerate() {
            let _ = writeln!(s, "mismatch {}: {} d={} from {}", i + 1, row.block, row.d, row.contributing_chains.join("; "));
        }
        for f in self.transport_failures.iter().take(20) {
            let _ = writeln!(s, "transport failure: {f}");
        }
        for f in self.delta_failures.iter().take(20) {
            let _ = writeln!(s, "delta failure: {f}");
        }
        let _ = writeln!(s, "result: {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("block,unipotent,d,lhs,rhs,rhs_delta,equal\n");
        for r in &self.rows {
            let delta = r.rhs_delta.map(|x| x.to_string()).unwrap_or_default();
            let _ = writeln!(s, "\"{}\",{},{},{},{},{},{}", r.block, r.unipotent, r.d, r.lhs, r.rhs, delta, r.equal);
        }
        s
    }
}

fn mode_str(m: Mode) -> &'static str {
    match m {
        Mode::PerBlock => "per-block",
        Mode::Aggregate => "aggregate",
    }
}

pub fn render_block(cx: &ChainContext, b: &BlockId) -> String {
    let levi = pair_levi(&cx.setup, b.pair.zeros);
    let mut s = format!("{} {}", levi_factor_names(&cx.group, &levi).join("x"), b.pair.label);
    if !b.central.is_empty() {
        let z: Vec<String> = b.central.iter().map(u64::to_string).collect();
        let _ = write!(s, " z=({})", z.join(","));
    }
    s
}

/// Local counts of every triple, computed over `jobs` threads.
pub fn all_local_counts(cx: &ChainContext, q: u64, ell: u64, jobs: usize) -> Result<BTreeMap<Triple, CountTable>> {
    let triples = cx.triples();
    let jobs = jobs.max(1).min(triples.len().max(1));
    let chunk = triples.len().div_ceil(jobs).max(1);
    let results: Vec<Result<Vec<(Triple, CountTable)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = triples
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let mut lc = LocalCounter::new(cx, q, ell)?;
                    part.iter().map(|t| Ok((t.clone(), lc.local_count(t)?))).collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = BTreeMap::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

type Key = (BlockId, u32);

fn accumulate(target: &mut BTreeMap<Key, i64>, table: &CountTable, sign: i64) {
    for (b, d, n) in table.iter() {
        *target.entry((b.clone(), d)).or_insert(0) += sign * n as i64;
    }
}

struct Checks {
    transport: Vec<String>,
    delta: Vec<String>,
}

fn check_pairing(cx: &ChainContext, counts: &BTreeMap<Triple, CountTable>) -> Result<Checks> {
    let mut transport = Vec::new();
    let mut delta = Vec::new();
    for t in counts.keys() {
        let d = cx.delta(t)?;
        let back = cx.delta(&d)?;
        let (lt, ld) = (cx.chains[t.chain].len(), cx.chains[d.chain].len());
        if back != *t || d == *t || lt.abs_diff(ld) != 1 {
            delta.push(cx.render_triple(t));
        }
        if counts.get(&d) != counts.get(t) {
            transport.push(cx.render_triple(t));
        }
    }
    Ok(Checks { transport, delta })
}

fn z_center_order(g: &GroupDescriptor, q: u64) -> u64 {
    match (g.model, g.series.is_linear(), g.twisted()) {
        (Model::Gl, true, false) => q - 1,
        (Model::Gl, true, true) => q + 1,
        _ => 1,
    }
}

fn aggregate(map: &BTreeMap<Key, i64>, mode: Mode) -> BTreeMap<(Option<BlockId>, u32), i64> {
    let mut out = BTreeMap::new();
    for ((b, d), n) in map {
        let key = match mode {
            Mode::PerBlock => (Some(b.clone()), *d),
            Mode::Aggregate => (None, *d),
        };
        *out.entry(key).or_insert(0) += n;
    }
    out
}

pub struct Prepared {
    pub cx: ChainContext,
    pub counts: BTreeMap<Triple, CountTable>,
    pub e: u32,
}

pub fn prepare(g: &GroupDescriptor, q: u64, ell: u64, jobs: usize) -> Result<Prepared> {
    let e = check_prime(q, ell)?;
    let cx = ChainContext::new(g, e, None)?;
    let counts = all_local_counts(&cx, q, ell, jobs)?;
    Ok(Prepared { cx, counts, e })
}

fn base_report(p: &Prepared, g: &GroupDescriptor, q: u64, ell: u64, mode: Mode, check: Check) -> VerificationReport {
    VerificationReport {
        schema_version: SCHEMA_VERSION,
        check,
        group: g.to_string(),
        series: g.series.to_string(),
        rank: g.rank,
        model: g.model,
        q,
        ell,
        e: p.e,
        mode,
        lhs_scale: 1,
        census: p.cx.census(),
        triples: p.counts.len(),
        transport_failures: Vec::new(),
        delta_failures: Vec::new(),
        rows: Vec::new(),
        pass: false,
        elapsed_ms: 0,
    }
}

fn contributors(p: &Prepared, block: &Option<BlockId>, d: u32, filter: impl Fn(usize) -> bool) -> Vec<String> {
    let mut chains = BTreeSet::new();
    for (t, table) in &p.counts {
        if !filter(p.cx.chains[t.chain].len()) {
            continue;
        }
        if table.iter().any(|(b, dd, _)| dd == d && block.as_ref().is_none_or(|x| x == b)) {
            chains.insert(t.chain);
        }
    }
    chains.into_iter().map(|c| p.cx.render_chain(&p.cx.chains[c])).collect()
}

pub fn verify_dade(g: &GroupDescriptor, q: u64, ell: u64, mode: Mode, jobs: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let p = prepare(g, q, ell, jobs)?;
    let mut report = base_report(&p, g, q, ell, mode, Check::Dade);
    let scale = z_center_order(g, q);
    report.lhs_scale = scale;

    let mut lhs: BTreeMap<Key, i64> = BTreeMap::new();
    for b in unipotent_blocks(g, q, ell)? {
        for (&d, &n) in &b.k_u {
            *lhs.entry((b.block.clone(), d)).or_insert(0) += (n * scale) as i64;
        }
        for (&d, &n) in &b.k_cu {
            *lhs.entry((b.block.clone(), d)).or_insert(0) -= (n * scale) as i64;
        }
    }
    let mut direct: BTreeMap<Key, i64> = BTreeMap::new();
    let mut via_delta: BTreeMap<Key, i64> = BTreeMap::new();
    for (t, table) in &p.counts {
        let chain = &p.cx.chains[t.chain];
        if chain.is_empty() {
            continue;
        }
        accumulate(&mut direct, table, -chain.sign());
        if chain.len() == 1 && p.cx.local_pair(t)?.terminal {
            accumulate(&mut via_delta, table, 1);
        }
    }
    let checks = check_pairing(&p.cx, &p.counts)?;
    report.transport_failures = checks.transport;
    report.delta_failures = checks.delta;

    let (lhs, direct, via_delta) = (aggregate(&lhs, mode), aggregate(&direct, mode), aggregate(&via_delta, mode));
    let keys: BTreeSet<_> = lhs.keys().chain(direct.keys()).chain(via_delta.keys()).cloned().collect();
    for key in keys {
        let l = lhs.get(&key).copied().unwrap_or(0);
        let r = direct.get(&key).copied().unwrap_or(0);
        let rd = via_delta.get(&key).copied().unwrap_or(0);
        if l == 0 && r == 0 && rd == 0 {
            continue;
        }
        let (block, d) = key;
        let equal = l == r && r == rd;
        let contributing_chains = if equal { Vec::new() } else { contributors(&p, &block, d, |len| len > 0) };
        report.rows.push(Row {
            block: block.as_ref().map(|b| render_block(&p.cx, b)).unwrap_or_else(|| "*".into()),
            unipotent: block.as_ref().is_none_or(BlockId::is_unipotent),
            d,
            lhs: l,
            rhs: r,
            rhs_delta: Some(rd),
            equal,
            contributing_chains,
        });
    }
    report.pass = report.rows.iter().all(|r| r.equal)
        && report.transport_failures.is_empty()
        && report.delta_failures.is_empty()
        && report.rows.iter().all(|r| r.unipotent || r.rhs == 0);
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn verify_ctc_cardinality(g: &GroupDescriptor, q: u64, ell: u64, jobs: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let p = prepare(g, q, ell, jobs)?;
    let mut report = base_report(&p, g, q, ell, Mode::PerBlock, Check::Ctc);
    let mut even: BTreeMap<Key, i64> = BTreeMap::new();
    let mut odd: BTreeMap<Key, i64> = BTreeMap::new();
    for (t, table) in &p.counts {
        let target = if p.cx.chains[t.chain].len() % 2 == 0 { &mut even } else { &mut odd };
        accumulate(target, table, 1);
    }
    let checks = check_pairing(&p.cx, &p.counts)?;
    report.transport_failures = checks.transport;
    report.delta_failures = checks.delta;
    let keys: BTreeSet<Key> = even.keys().chain(odd.keys()).cloned().collect();
    for key in keys {
        let a = even.get(&key).copied().unwrap_or(0);
        let b = odd.get(&key).copied().unwrap_or(0);
        let (block, d) = key;
        let equal = a == b;
        let contributing_chains = if equal { Vec::new() } else { contributors(&p, &Some(block.clone()), d, |_| true) };
        report.rows.push(Row {
            block: render_block(&p.cx, &block),
            unipotent: block.is_unipotent(),
            d,
            lhs: a,
            rhs: b,
            rhs_delta: None,
            equal,
            contributing_chains,
        });
    }
    report.pass =
        report.rows.iter().all(|r| r.equal) && report.transport_failures.is_empty() && report.delta_failures.is_empty();
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Chain counts by length and the alternating total `Σ (-1)^{|σ|}`.
#[derive(Clone, Debug, Serialize)]
pub struct CensusSummary {
    pub by_length: BTreeMap<usize, usize>,
    pub alternating: i64,
}

pub fn census_summary(g: &GroupDescriptor, e: u32) -> Result<CensusSummary> {
    let cx = ChainContext::new(g, e, None)?;
    let by_length = cx.census();
    let alternating = by_length.iter().map(|(&l, &n)| if l % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
    Ok(CensusSummary { by_length, alternating })
}
