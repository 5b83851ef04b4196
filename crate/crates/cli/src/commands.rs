//! The CLI verbs. Each writes JSON lines to `out` and a human summary to
//! standard error.

use std::io::Write;
use std::path::Path;
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use weelcp::{
    build_lcp_kasai_counted, build_suffix_array, find_decrease_violation, DelayedAccess, LcpArray,
    SadakaneLcp, SpaceReport, SuffixAccess, Text, WeeLcp, WeeParams,
};

use crate::bundle::{Bundle, Repr};

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub reprs: Vec<Repr>,
    pub delta: f64,
    pub kappa: Option<usize>,
    pub lambda: Option<usize>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            reprs: Repr::ALL.to_vec(),
            delta: WeeParams::DEFAULT_DELTA,
            kappa: None,
            lambda: None,
        }
    }
}

/// Index for `raw`, with the time each representation took including the
/// shared suffix array and Kasai passes.
pub fn build_bundle(raw: &[u8], opts: &BuildOptions) -> Result<(Bundle, Vec<(Repr, f64)>)> {
    ensure!(!opts.reprs.is_empty(), "no representation requested");
    let start = Instant::now();
    let text = Text::load(raw)?;
    let sa = build_suffix_array(&text);
    let (h, _) = build_lcp_kasai_counted(&text, &sa);
    let shared = start.elapsed().as_secs_f64();

    let mut bundle = Bundle {
        text,
        sa,
        plain: None,
        sadakane: None,
        wee: None,
    };
    let mut times = Vec::new();
    let mut reprs = opts.reprs.clone();
    reprs.sort();
    reprs.dedup();
    for r in reprs {
        let t = Instant::now();
        match r {
            Repr::Plain => bundle.plain = Some(h.clone()),
            Repr::Sadakane => bundle.sadakane = Some(SadakaneLcp::build(&h, &bundle.sa)?),
            Repr::Wee => {
                let params = WeeParams::with_overrides(
                    bundle.text.len(),
                    opts.delta,
                    opts.kappa,
                    opts.lambda,
                    None,
                )?;
                bundle.wee = Some(WeeLcp::build(&h, &bundle.sa, params)?);
            }
        }
        times.push((r, shared + t.elapsed().as_secs_f64()));
    }
    Ok((bundle, times))
}

pub fn space_report(bundle: &Bundle, r: Repr) -> Option<SpaceReport> {
    let n = bundle.text.len();
    match r {
        Repr::Plain => bundle
            .plain
            .as_ref()
            .map(|h| SpaceReport::new(n).with("H", h.size_in_bits())),
        Repr::Sadakane => bundle.sadakane.as_ref().map(SadakaneLcp::space_report),
        Repr::Wee => bundle.wee.as_ref().map(WeeLcp::space_report),
    }
}

fn report_json(r: Repr, rep: &SpaceReport) -> Value {
    let components: Vec<Value> = rep
        .components()
        .iter()
        .map(|&(name, bits)| json!({ "name": name, "bits": bits }))
        .collect();
    json!({
        "repr": r.name(),
        "n": rep.n,
        "components": components,
        "total_bits": rep.total_bits(),
        "bits_per_symbol": rep.bits_per_symbol(),
    })
}

fn emit(out: &mut dyn Write, v: Value) -> Result<()> {
    writeln!(out, "{v}")?;
    Ok(())
}

pub fn cmd_build(
    input: &Path,
    output: &Path,
    opts: &BuildOptions,
    out: &mut dyn Write,
) -> Result<()> {
    let raw = std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let (bundle, times) = build_bundle(&raw, opts)?;
    bundle.save(output)?;
    let (n, sigma) = (bundle.text.len(), bundle.text.sigma());
    for (r, secs) in times {
        let rep = space_report(&bundle, r).expect("built above");
        let mut line = report_json(r, &rep);
        line["command"] = json!("build");
        line["sigma"] = json!(sigma);
        line["build_seconds"] = json!(secs);
        if let (Repr::Wee, Some(w)) = (r, &bundle.wee) {
            let p = w.params();
            line["params"] =
                json!({ "kappa": p.kappa, "lambda": p.lambda, "s": p.s, "delta": p.delta });
        }
        emit(out, line)?;
        eprintln!(
            "{r}: n = {n}, sigma = {sigma}, {:.3} bits/symbol, built in {secs:.3}s",
            rep.bits_per_symbol()
        );
    }
    eprintln!("wrote {}", output.display());
    Ok(())
}

/// Positions to look up: one index or an inclusive range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcpQuery {
    Pos(usize),
    Range(usize, usize),
}

/// `H[i]` through representation `r`, with the comparisons it took.
pub fn lookup<A: SuffixAccess + ?Sized>(
    bundle: &Bundle,
    r: Repr,
    sa: &A,
    i: usize,
) -> Result<(usize, usize)> {
    Ok(match r {
        Repr::Plain => (
            bundle
                .plain
                .as_ref()
                .context("no plain LCP array")?
                .get(i)?,
            0,
        ),
        Repr::Sadakane => {
            let d = bundle.sadakane.as_ref().context("no sadakane encoding")?;
            (d.get(sa, i)?, 0)
        }
        Repr::Wee => {
            let w = bundle.wee.as_ref().context("no wee structure")?;
            let l = w.lcp_access_packed(sa, &bundle.text, i)?;
            (l.lcp, l.comparisons)
        }
    })
}

fn pick_repr(bundle: &Bundle, r: Option<Repr>) -> Result<Repr> {
    match r {
        Some(r) if bundle.has(r) => Ok(r),
        Some(r) => bail!("bundle has no {r} representation"),
        None => Ok(*bundle
            .reprs()
            .last()
            .expect("bundles hold at least one representation")),
    }
}

pub fn cmd_lcp(
    path: &Path,
    query: LcpQuery,
    repr: Option<Repr>,
    out: &mut dyn Write,
) -> Result<()> {
    let bundle = Bundle::load(path)?;
    let r = pick_repr(&bundle, repr)?;
    let (lo, hi) = match query {
        LcpQuery::Pos(i) => (i, i),
        LcpQuery::Range(a, b) => (a, b),
    };
    let n = bundle.text.len();
    ensure!(
        1 <= lo && lo <= hi && hi <= n,
        "positions {lo}..{hi} outside 1..{n}"
    );
    let values = (lo..=hi)
        .map(|i| lookup(&bundle, r, &bundle.sa, i).map(|v| v.0))
        .collect::<Result<Vec<_>>>()?;
    match query {
        LcpQuery::Pos(i) => emit(out, json!({ "repr": r.name(), "i": i, "lcp": values[0] }))?,
        LcpQuery::Range(a, b) => emit(
            out,
            json!({ "repr": r.name(), "from": a, "to": b, "lcp": values }),
        )?,
    }
    let shown: Vec<String> = values.iter().map(usize::to_string).collect();
    eprintln!("{}", shown.join(" "));
    Ok(())
}

/// First disagreement found by `verify`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub check: String,
    pub position: usize,
    pub expected: String,
    pub found: String,
}

/// Recomputes the suffix array and `H` from the text and checks every
/// stored component against them. Returns the failed checks.
pub fn verify_bundle(bundle: &Bundle) -> Vec<Mismatch> {
    let mut failures = Vec::new();
    let n = bundle.text.len();
    let sa = build_suffix_array(&bundle.text);
    if let Some(i) = (1..=n).find(|&i| sa.get(i).ok() != bundle.sa.get(i).ok()) {
        failures.push(Mismatch {
            check: "suffix_array".into(),
            position: i,
            expected: sa.get(i).map(|v| v.to_string()).unwrap_or_default(),
            found: bundle.sa.get(i).map(|v| v.to_string()).unwrap_or_default(),
        });
    }
    let (h, comparisons) = build_lcp_kasai_counted(&bundle.text, &sa);
    if comparisons > 2 * n {
        failures.push(Mismatch {
            check: "kasai_comparisons".into(),
            position: 0,
            expected: format!("<= {}", 2 * n),
            found: comparisons.to_string(),
        });
    }
    if let Some(p) = find_decrease_violation(&h, &sa) {
        failures.push(Mismatch {
            check: "decrease_bound".into(),
            position: p,
            expected: "H[A^-1[p]] >= H[A^-1[p-1]] - 1".into(),
            found: "violated".into(),
        });
    }
    for r in bundle.reprs() {
        if let Some(m) = verify_repr(bundle, r, &h) {
            failures.push(m);
        }
    }
    failures
}

fn verify_repr(bundle: &Bundle, r: Repr, h: &LcpArray) -> Option<Mismatch> {
    let mismatch = |position: usize, expected: String, found: String| Mismatch {
        check: r.name().into(),
        position,
        expected,
        found,
    };
    for i in 1..=h.len() {
        let expected = h.get(i).expect("in range");
        let found = match lookup(bundle, r, &bundle.sa, i) {
            Ok((v, _)) => v,
            Err(e) => return Some(mismatch(i, expected.to_string(), format!("error: {e}"))),
        };
        if found != expected {
            return Some(mismatch(i, expected.to_string(), found.to_string()));
        }
        if let (Repr::Wee, Some(w)) = (r, &bundle.wee) {
            let s = w.params().s;
            match w.lcp_access(&bundle.sa, &bundle.text, i) {
                Ok(l) if l.lcp == expected && l.comparisons <= s => {}
                Ok(l) if l.lcp != expected => {
                    return Some(mismatch(i, expected.to_string(), l.lcp.to_string()))
                }
                Ok(l) => {
                    return Some(Mismatch {
                        check: "wee_comparisons".into(),
                        position: i,
                        expected: format!("<= {s}"),
                        found: l.comparisons.to_string(),
                    })
                }
                Err(e) => return Some(mismatch(i, expected.to_string(), format!("error: {e}"))),
            }
        }
    }
    None
}

/// Returns whether every check passed.
pub fn cmd_verify(path: &Path, out: &mut dyn Write) -> Result<bool> {
    let bundle = Bundle::load(path)?;
    let failures = verify_bundle(&bundle);
    for m in &failures {
        emit(
            out,
            json!({
                "command": "verify",
                "check": m.check,
                "status": "mismatch",
                "position": m.position,
                "expected": m.expected,
                "found": m.found,
            }),
        )?;
        eprintln!(
            "{}: mismatch at position {}: expected {}, found {}",
            m.check, m.position, m.expected, m.found
        );
    }
    let reprs: Vec<&str> = bundle.reprs().iter().map(|r| r.name()).collect();
    let ok = failures.is_empty();
    emit(
        out,
        json!({
            "command": "verify",
            "status": if ok { "ok" } else { "failed" },
            "n": bundle.text.len(),
            "reprs": reprs,
        }),
    )?;
    if ok {
        eprintln!(
            "OK: n = {}, checked {}",
            bundle.text.len(),
            reprs.join(", ")
        );
    }
    Ok(ok)
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub queries: usize,
    pub seed: u64,
    pub sa_delay: Duration,
    pub threads: usize,
    pub reprs: Option<Vec<Repr>>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            queries: 100_000,
            seed: 0,
            sa_delay: Duration::ZERO,
            threads: 1,
            reprs: None,
        }
    }
}

/// Latency and work of one representation over a query set.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchResult {
    pub repr: Repr,
    pub values: Vec<usize>,
    pub median_ns: Option<u64>,
    pub p99_ns: Option<u64>,
    pub mean_comparisons: f64,
    pub max_comparisons: usize,
}

pub fn random_queries(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(1..=n)).collect()
}

fn percentile(sorted: &[u64], q: f64) -> Option<u64> {
    if sorted.is_empty() {
        return None;
    }
    let idx = ((sorted.len() as f64 * q).ceil() as usize).clamp(1, sorted.len()) - 1;
    Some(sorted[idx])
}

pub fn bench_repr(
    bundle: &Bundle,
    r: Repr,
    queries: &[usize],
    opts: &BenchOptions,
) -> Result<BenchResult> {
    let threads = opts.threads.max(1);
    let chunk = queries.len().div_ceil(threads).max(1);
    let parts: Vec<Result<Vec<(usize, usize, u64)>>> = thread::scope(|scope| {
        let handles: Vec<_> = queries
            .chunks(chunk)
            .map(|qs| {
                scope.spawn(move || {
                    let sa = DelayedAccess::new(&bundle.sa, opts.sa_delay);
                    qs.iter()
                        .map(|&i| {
                            let t = Instant::now();
                            let (v, c) = lookup(bundle, r, &sa, i)?;
                            Ok((v, c, t.elapsed().as_nanos() as u64))
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect()
    });

    let mut values = Vec::with_capacity(queries.len());
    let mut latencies = Vec::with_capacity(queries.len());
    let (mut total, mut max_comparisons) = (0usize, 0usize);
    for part in parts {
        for (v, c, ns) in part? {
            values.push(v);
            latencies.push(ns);
            total += c;
            max_comparisons = max_comparisons.max(c);
        }
    }
    latencies.sort_unstable();
    Ok(BenchResult {
        repr: r,
        values,
        median_ns: percentile(&latencies, 0.5),
        p99_ns: percentile(&latencies, 0.99),
        mean_comparisons: if queries.is_empty() {
            0.0
        } else {
            total as f64 / queries.len() as f64
        },
        max_comparisons,
    })
}

/// Returns whether all representations agreed on every query.
pub fn cmd_bench(path: &Path, opts: &BenchOptions, out: &mut dyn Write) -> Result<bool> {
    let bundle = Bundle::load(path)?;
    let reprs = match &opts.reprs {
        Some(rs) => {
            for &r in rs {
                ensure!(bundle.has(r), "bundle has no {r} representation");
            }
            rs.clone()
        }
        None => bundle.reprs(),
    };
    let queries = random_queries(bundle.text.len(), opts.queries, opts.seed);
    let mut results = Vec::new();
    for r in reprs {
        let res = bench_repr(&bundle, r, &queries, opts)?;
        let mut line = json!({
            "command": "bench",
            "repr": r.name(),
            "queries": queries.len(),
            "threads": opts.threads.max(1),
            "seed": opts.seed,
            "sa_delay_ns": opts.sa_delay.as_nanos() as u64,
            "median_ns": res.median_ns,
            "p99_ns": res.p99_ns,
            "mean_comparisons": res.mean_comparisons,
            "max_comparisons": res.max_comparisons,
        });
        if let (Repr::Wee, Some(w)) = (r, &bundle.wee) {
            line["s"] = json!(w.params().s);
        }
        emit(out, line)?;
        eprintln!(
            "{r}: {} queries, median {} ns, p99 {} ns, {:.2} comparisons on average",
            queries.len(),
            res.median_ns.map_or("-".into(), |v| v.to_string()),
            res.p99_ns.map_or("-".into(), |v| v.to_string()),
            res.mean_comparisons
        );
        results.push(res);
    }

    let disagreement = results.split_first().and_then(|(first, rest)| {
        rest.iter().find_map(|other| {
            let k = first
                .values
                .iter()
                .zip(&other.values)
                .position(|(a, b)| a != b)?;
            Some((first.repr, other.repr, k))
        })
    });
    let names: Vec<&str> = results.iter().map(|r| r.repr.name()).collect();
    match disagreement {
        None => {
            emit(
                out,
                json!({ "command": "bench", "cross_check": "ok", "reprs": names, "queries": queries.len() }),
            )?;
            Ok(true)
        }
        Some((a, b, k)) => {
            emit(
                out,
                json!({ "command": "bench", "cross_check": "mismatch", "reprs": [a.name(), b.name()], "position": queries[k] }),
            )?;
            eprintln!("{a} and {b} disagree at position {}", queries[k]);
            Ok(false)
        }
    }
}

pub fn cmd_space(path: &Path, out: &mut dyn Write) -> Result<()> {
    let bundle = Bundle::load(path)?;
    for r in bundle.reprs() {
        let rep = space_report(&bundle, r).expect("present");
        emit(out, report_json(r, &rep))?;
        let parts: Vec<String> = rep
            .components()
            .iter()
            .map(|(c, b)| format!("{c}={b}"))
            .collect();
        eprintln!(
            "{r}: {} bits total, {:.4} bits/symbol ({})",
            rep.total_bits(),
            rep.bits_per_symbol(),
            parts.join(", ")
        );
    }
    Ok(())
}
