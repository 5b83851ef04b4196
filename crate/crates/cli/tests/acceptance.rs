//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weelcp::{
    build_lcp_kasai, build_suffix_array, encode_differential, find_decrease_violation, BitVector,
    LcpArray, NavIndex, RankSelect, SadakaneAccessor, SadakaneLcp, SuffixArray, Text, WeeAccessor,
    WeeLcp, WeeParams,
};
use weelcp_cli::locate_section;

const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const EQUIVALENCE_LIMIT: Duration = Duration::from_secs(60);
const SPACE_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_TEXTS: usize = 240;
const MAX_RANDOM_LEN: usize = 4096;
const ALPHABETS: [usize; 4] = [2, 4, 26, 255];
const DELTAS: [f64; 3] = [0.25, 0.5, 1.0];
const MIN_BOUNDED_QUERIES: usize = 1_000_000;
const SPACE_SIZES: [u32; 5] = [12, 14, 16, 18, 20];
const SPACE_TREND_RATIO: f64 = 0.9;
const SPACE_CEILING_BITS: f64 = 2.0;
const PACKED_OPS_RATIO: f64 = 0.25;
const PACKED_UNARY_LEN: usize = 1 << 16;
const RANK_SELECT_MAX_LEN: usize = 1024;
const RANK_SELECT_CONTENTS: usize = 100;
const NAV_MAX_LEN: usize = 2048;
const CLI_TEXT_BYTES: usize = 1 << 20;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, format!("took {took:.2?}, limit {limit:?}"))
}

struct Indexed {
    text: Text,
    sa: SuffixArray,
    h: LcpArray,
}

impl Indexed {
    fn new(raw: &[u8]) -> Self {
        let text = Text::load(raw).expect("no NUL bytes");
        let sa = build_suffix_array(&text);
        let h = build_lcp_kasai(&text, &sa);
        Indexed { text, sa, h }
    }

    fn n(&self) -> usize {
        self.text.len()
    }
}

fn random_text(rng: &mut ChaCha8Rng, len: usize, sigma: usize) -> Vec<u8> {
    let base = if sigma <= 26 { b'a' } else { 1 };
    (0..len)
        .map(|_| base + rng.gen_range(0..sigma) as u8)
        .collect()
}

fn fibonacci(len: usize) -> Vec<u8> {
    let (mut a, mut b) = (b"a".to_vec(), b"ab".to_vec());
    while b.len() < len {
        let next = [b.as_slice(), a.as_slice()].concat();
        a = std::mem::replace(&mut b, next);
    }
    b.truncate(len);
    b
}

/// Random texts over every alphabet plus `a^n`, `(ab)^(n/2)` and Fibonacci
/// strings, all shorter than the length cap once the sentinel is added.
fn corpus() -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let mut out = Vec::new();
    for k in 0..RANDOM_TEXTS {
        let sigma = ALPHABETS[k % ALPHABETS.len()];
        let len = rng.gen_range(0..MAX_RANDOM_LEN);
        out.push(random_text(&mut rng, len, sigma));
    }
    for len in [1, 2, 3, 10, 100, 1000, MAX_RANDOM_LEN - 1] {
        out.push(vec![b'a'; len]);
        out.push(b"ab".iter().cycle().take(len / 2 * 2).copied().collect());
        out.push(fibonacci(len));
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ix = Indexed::new(b"CACAACCAC");
    check(
        ix.sa.positions() == [10, 4, 8, 2, 5, 9, 3, 7, 1, 6],
        format!("A = {:?}", ix.sa.positions()),
    )?;
    check(
        ix.h.values() == [0, 0, 1, 2, 2, 0, 1, 2, 3, 1],
        format!("H = {:?}", ix.h.values()),
    )?;
    within(EXAMPLE_LIMIT, start)?;
    Ok(format!("A and H match in {:.2?}", start.elapsed()))
}

fn criterion_2(texts: &[Indexed]) -> Outcome {
    let start = Instant::now();
    let mut positions = 0;
    for (t, ix) in texts.iter().enumerate() {
        let d = SadakaneLcp::build(&ix.h, &ix.sa).map_err(|e| e.to_string())?;
        let w = WeeLcp::build(&ix.h, &ix.sa, WeeParams::for_len(ix.n(), 0.5).unwrap()).unwrap();
        for i in 1..=ix.n() {
            let h = ix.h.get(i).unwrap();
            let got = [
                d.access_eq1(&ix.sa, i).unwrap(),
                d.access_eq2(&ix.sa, i).unwrap(),
                w.lcp_access(&ix.sa, &ix.text, i).unwrap().lcp,
            ];
            check(
                got == [h; 3],
                format!("text {t}, i = {i}: H = {h}, got {got:?}"),
            )?;
            positions += 1;
        }
    }
    within(EQUIVALENCE_LIMIT, start)?;
    Ok(format!(
        "{} texts, {positions} positions equal in {:.2?}",
        texts.len(),
        start.elapsed()
    ))
}

fn criterion_3(texts: &[Indexed]) -> Outcome {
    for (t, ix) in texts.iter().enumerate() {
        if let Some(p) = find_decrease_violation(&ix.h, &ix.sa) {
            return Err(format!(
                "text {t}: decrease of more than one at text position {p}"
            ));
        }
        encode_differential(&ix.h, &ix.sa).map_err(|e| format!("text {t}: {e}"))?;
    }
    Ok(format!(
        "{} texts, no negative unary difference",
        texts.len()
    ))
}

fn criterion_4(texts: &[Indexed]) -> Outcome {
    for (t, ix) in texts.iter().enumerate() {
        let s = encode_differential(&ix.h, &ix.sa).unwrap();
        check(
            s.len() == 2 * ix.n() && s.count_ones() == ix.n(),
            format!(
                "text {t}: |S| = {}, ones = {}, n = {}",
                s.len(),
                s.count_ones(),
                ix.n()
            ),
        )?;
    }
    Ok(format!("{} texts, |S| = 2n with n ones", texts.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let len = 100_000;
    let raws = [
        random_text(&mut rng, len, 2),
        random_text(&mut rng, len, 26),
        fibonacci(len),
        vec![b'a'; len],
    ];
    let mut queries = 0;
    let mut worst = 0.0f64;
    for raw in &raws {
        let ix = Indexed::new(raw);
        for delta in DELTAS {
            let p = WeeParams::for_len(ix.n(), delta).unwrap();
            let w = WeeLcp::build(&ix.h, &ix.sa, p).unwrap();
            for i in 1..=ix.n() {
                let l = w.lcp_access(&ix.sa, &ix.text, i).unwrap();
                check(
                    l.comparisons <= p.s,
                    format!("delta {delta}, i = {i}: {} > s = {}", l.comparisons, p.s),
                )?;
                check(
                    l.lcp == ix.h.get(i).unwrap(),
                    format!("delta {delta}, i = {i}: wrong value"),
                )?;
                worst = worst.max(l.comparisons as f64 / p.s as f64);
                queries += 1;
            }
        }
    }
    check(
        queries >= MIN_BOUNDED_QUERIES,
        format!("only {queries} queries"),
    )?;
    Ok(format!("{queries} queries, max comparisons/s = {worst:.3}"))
}

fn criterion_6(texts: &[Indexed]) -> Outcome {
    let mut approximate = 0;
    for (t, ix) in texts.iter().enumerate().step_by(3) {
        let reference = RankSelect::new(encode_differential(&ix.h, &ix.sa).unwrap());
        for delta in DELTAS {
            let p = WeeParams::for_len(ix.n(), delta).unwrap();
            let w = WeeLcp::build(&ix.h, &ix.sa, p).unwrap();
            for j in 1..=ix.n() {
                let r = w.approx_select(j).unwrap();
                let truth = reference.select1(j).unwrap();
                if r.exact {
                    check(
                        r.value == truth,
                        format!("text {t}, j = {j}: exact {} != {truth}", r.value),
                    )?;
                } else {
                    approximate += 1;
                    check(
                        r.value <= truth && truth - r.value <= p.s,
                        format!(
                            "text {t}, delta {delta}, j = {j}: value {} truth {truth} s {}",
                            r.value, p.s
                        ),
                    )?;
                }
            }
        }
    }
    check(approximate > 0, "no approximate answer was exercised")?;
    Ok(format!("{approximate} approximate answers within s"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut per_symbol = Vec::new();
    for k in SPACE_SIZES {
        let n = 1usize << k;
        let ix = Indexed::new(&random_text(&mut rng, n - 1, 26));
        let w = WeeLcp::build(
            &ix.h,
            &ix.sa,
            WeeParams::for_len(n, WeeParams::DEFAULT_DELTA).unwrap(),
        )
        .unwrap();
        let bps = w.space_report().bits_per_symbol();
        check(
            bps < SPACE_CEILING_BITS,
            format!("n = 2^{k}: {bps:.4} bits/symbol"),
        )?;
        per_symbol.push(bps);
    }
    let (first, last) = (per_symbol[0], *per_symbol.last().unwrap());
    check(
        last <= SPACE_TREND_RATIO * first,
        format!("2^20: {last:.4} vs 2^12: {first:.4} bits/symbol"),
    )?;
    within(SPACE_LIMIT, start)?;
    let shown: Vec<String> = per_symbol.iter().map(|b| format!("{b:.4}")).collect();
    Ok(format!(
        "bits/symbol at 2^12..2^20 = [{}], ratio {:.3}, {:.1?}",
        shown.join(", "),
        last / first,
        start.elapsed()
    ))
}

fn criterion_8(texts: &[Indexed]) -> Outcome {
    for (t, ix) in texts.iter().enumerate() {
        let w = WeeLcp::build(&ix.h, &ix.sa, WeeParams::for_len(ix.n(), 0.5).unwrap()).unwrap();
        for i in 1..=ix.n() {
            let a = w.lcp_access(&ix.sa, &ix.text, i).unwrap();
            let b = w.lcp_access_packed(&ix.sa, &ix.text, i).unwrap();
            check(
                a.lcp == b.lcp,
                format!("text {t}, i = {i}: {} vs {}", a.lcp, b.lcp),
            )?;
        }
    }
    let ix = Indexed::new(&vec![b'a'; PACKED_UNARY_LEN]);
    let w = WeeLcp::build(&ix.h, &ix.sa, WeeParams::for_len(ix.n(), 0.5).unwrap()).unwrap();
    let (mut bytewise, mut packed) = (0usize, 0usize);
    for i in 1..=ix.n() {
        bytewise += w.lcp_access(&ix.sa, &ix.text, i).unwrap().comparisons;
        packed += w
            .lcp_access_packed(&ix.sa, &ix.text, i)
            .unwrap()
            .comparisons;
    }
    check(bytewise > 0, "unary text needed no comparisons")?;
    let ratio = packed as f64 / bytewise as f64;
    check(
        ratio <= PACKED_OPS_RATIO,
        format!("packed/bytewise = {packed}/{bytewise} = {ratio:.3}"),
    )?;
    Ok(format!(
        "identical on corpus; a^2^16$: {packed} word vs {bytewise} byte ops ({ratio:.3})"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut vectors = 0;
    for len in 0..=RANK_SELECT_MAX_LEN {
        for c in 0..RANK_SELECT_CONTENTS {
            let density = (c % 10) as f64 / 9.0;
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
            let rs = RankSelect::new(bits.iter().copied().collect::<BitVector>());
            let (mut ones, mut zeros) = (0, 0);
            for i in 0..=len {
                if i > 0 {
                    if bits[i - 1] {
                        ones += 1;
                        check(
                            rs.select1(ones).ok() == Some(i),
                            format!("len {len}: select1({ones})"),
                        )?;
                    } else {
                        zeros += 1;
                        check(
                            rs.select0(zeros).ok() == Some(i),
                            format!("len {len}: select0({zeros})"),
                        )?;
                    }
                }
                let (r1, r0) = (rs.rank1(i).unwrap(), rs.rank0(i).unwrap());
                check(
                    r1 == ones && r0 == zeros && r1 + r0 == i,
                    format!("len {len}: rank at {i}"),
                )?;
            }
            for q in 1..=ones {
                check(
                    rs.rank1(rs.select1(q).unwrap()).ok() == Some(q),
                    format!("len {len}: rank1(select1({q}))"),
                )?;
            }
            check(
                rs.select1(ones + 1).is_err() && rs.select0(zeros + 1).is_err(),
                "select past the end",
            )?;
            vectors += 1;
        }
    }
    Ok(format!(
        "{vectors} bitvectors of length 0..={RANK_SELECT_MAX_LEN} match the scan"
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut raws = vec![
        random_text(&mut rng, NAV_MAX_LEN - 1, 2),
        random_text(&mut rng, NAV_MAX_LEN - 1, 26),
        fibonacci(NAV_MAX_LEN - 1),
        vec![b'a'; NAV_MAX_LEN - 1],
    ];
    for sigma in ALPHABETS {
        raws.push(random_text(&mut rng, 300, sigma));
    }
    let mut chains = 0;
    for (t, raw) in raws.iter().enumerate() {
        let ix = Indexed::new(raw);
        let h = ix.h.values();
        let n = ix.n();
        let d = SadakaneLcp::build(&ix.h, &ix.sa).unwrap();
        let w = WeeLcp::build(&ix.h, &ix.sa, WeeParams::for_len(n, 0.5).unwrap()).unwrap();
        let plain = NavIndex::new(ix.h.clone());
        let by_sada = NavIndex::new(SadakaneAccessor {
            lcp: &d,
            sa: &ix.sa,
        });
        let by_wee = NavIndex::new(WeeAccessor {
            lcp: &w,
            sa: &ix.sa,
            text: &ix.text,
        });
        // succinct backends: every pair on short texts, every 16th right end otherwise
        let stride = if n <= 512 { 1 } else { 16 };

        for l in 2..=n {
            let mut best = l;
            for r in l..=n {
                if h[r - 1] < h[best - 1] {
                    best = r;
                }
                check(
                    plain.rmq(l, r).ok() == Some(best),
                    format!("text {t}: rmq({l}, {r})"),
                )?;
                if (r - l) % stride == 0 {
                    check(
                        by_sada.rmq(l, r).ok() == Some(best) && by_wee.rmq(l, r).ok() == Some(best),
                        format!("text {t}: backends disagree on rmq({l}, {r})"),
                    )?;
                }
            }
            let psv = (1..l).rev().find(|&j| h[j - 1] < h[l - 1]);
            let nsv = (l + 1..=n).find(|&j| h[j - 1] < h[l - 1]);
            for nav_psv in [plain.psv(l), by_sada.psv(l), by_wee.psv(l)] {
                check(nav_psv.ok() == Some(psv), format!("text {t}: psv({l})"))?;
            }
            for nav_nsv in [plain.nsv(l), by_sada.nsv(l), by_wee.nsv(l)] {
                check(nav_nsv.ok() == Some(nsv), format!("text {t}: nsv({l})"))?;
            }
        }

        for i in 1..=n {
            let leaf = weelcp::IntervalNode {
                left: i,
                right: i,
                depth: n - ix.sa.get(i).unwrap() + 1,
            };
            let mut cur = leaf;
            let mut steps = 0;
            while let Some(p) = plain.parent_interval(cur) {
                check(
                    by_sada.parent_interval(cur) == Some(p)
                        && by_wee.parent_interval(cur) == Some(p),
                    format!("text {t}: backends disagree on the parent of {cur:?}"),
                )?;
                check(
                    p.depth < cur.depth && p.left <= cur.left && cur.right <= p.right,
                    format!("text {t}: bad parent {p:?} of {cur:?}"),
                )?;
                cur = p;
                steps += 1;
                check(
                    steps <= n,
                    format!("text {t}: chain from leaf {i} does not terminate"),
                )?;
            }
            check(
                (cur.left, cur.right) == (1, n),
                format!("text {t}: chain from leaf {i} ends at {cur:?}"),
            )?;
            chains += 1;
        }
    }
    Ok(format!(
        "{} texts up to n = {NAV_MAX_LEN}, {chains} parent chains reach [1, n]",
        raws.len()
    ))
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) {
    let Ok(entries) = fs::read_dir(dir) else {
        return;
    };
    for e in entries.flatten() {
        let p = e.path();
        if p.is_dir() {
            if p.file_name().is_some_and(|n| n != "target") {
                collect_files(&p, out);
            }
        } else if p
            .extension()
            .is_some_and(|x| x == "rs" || x == "md" || x == "toml")
        {
            out.push(p);
        }
    }
}

/// Source files of the workspace (and the example corpus when present),
/// concatenated and repeated up to the requested size.
fn real_text(bytes: usize) -> Vec<u8> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let mut files = Vec::new();
    collect_files(&root.join("examples"), &mut files);
    collect_files(&root.join("crates"), &mut files);
    files.sort();
    let mut text: Vec<u8> = files
        .iter()
        .flat_map(|f| fs::read(f).unwrap_or_default())
        .filter(|&b| b != 0)
        .collect();
    assert!(
        !text.is_empty(),
        "no source files found under {}",
        root.display()
    );
    let unique = text.len();
    while text.len() < bytes {
        text.extend_from_within(..unique.min(bytes - text.len()));
    }
    text.truncate(bytes);
    text
}

fn criterion_11() -> Outcome {
    let dir = std::env::temp_dir().join(format!("weelcp-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let result = cli_round_trip(&dir);
    let _ = fs::remove_dir_all(&dir);
    result
}

fn cli_round_trip(dir: &Path) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_weelcp");
    let input = dir.join("corpus.txt");
    let index = dir.join("corpus.bundle");
    fs::write(&input, real_text(CLI_TEXT_BYTES)).map_err(|e| e.to_string())?;

    let run = |args: &[&Path]| {
        Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())
    };
    let build = run(&[
        Path::new("build"),
        Path::new("--input"),
        &input,
        Path::new("--output"),
        &index,
    ])?;
    check(
        build.status.success(),
        format!("build failed: {}", String::from_utf8_lossy(&build.stderr)),
    )?;
    let verify = run(&[Path::new("verify"), Path::new("--input"), &index])?;
    check(
        verify.status.success(),
        format!("verify failed: {}", String::from_utf8_lossy(&verify.stderr)),
    )?;

    let mut bytes = fs::read(&index).map_err(|e| e.to_string())?;
    let (at, len) = locate_section(&bytes, *b"SADK").ok_or("no SADK section")?;
    let flip = at + 16 + (len - 16) / 2;
    bytes[flip] ^= 0x10;
    fs::write(&index, &bytes).map_err(|e| e.to_string())?;
    let faulty = run(&[Path::new("verify"), Path::new("--input"), &index])?;
    let stderr = String::from_utf8_lossy(&faulty.stderr);
    let located = stderr
        .lines()
        .find(|l| l.contains("mismatch at position"))
        .map(str::to_owned);
    check(
        !faulty.status.success(),
        "verify accepted a bundle with a flipped bit",
    )?;
    let located = located.ok_or_else(|| format!("no located mismatch in: {stderr}"))?;
    Ok(format!(
        "{CLI_TEXT_BYTES}-byte text verifies; flipped bit reported as \"{located}\""
    ))
}

fn main() -> ExitCode {
    let texts: Vec<Indexed> = corpus().iter().map(|r| Indexed::new(r)).collect();
    let criteria: Vec<Criterion> = vec![
        ("example regression", Box::new(criterion_1)),
        (
            "representation equivalence",
            Box::new(|| criterion_2(&texts)),
        ),
        (
            "text-order decrease bound",
            Box::new(|| criterion_3(&texts)),
        ),
        ("encoding size", Box::new(|| criterion_4(&texts))),
        ("comparison bound", Box::new(criterion_5)),
        ("approximation soundness", Box::new(|| criterion_6(&texts))),
        ("space trend", Box::new(criterion_7)),
        ("packed comparison", Box::new(|| criterion_8(&texts))),
        ("rank/select", Box::new(criterion_9)),
        ("tree navigation", Box::new(criterion_10)),
        ("cli round trip", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
