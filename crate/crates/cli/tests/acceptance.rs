//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::collections::BTreeSet;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use seshadri::bounds::{
    best_bounds, eps_upper_sweep, harbourne_piecewise, harbourne_square_maximal, harbourne_surface, symmetrization_chain,
    trivial_upper, tutaj_lower, Assumption, Bound, BoundKind, Source, SurfaceContext,
};
use seshadri::exact::{ComparisonBudget, PrimeField, RadicalValue, Rational};
use seshadri::fatpoints::{
    alpha_generic, build_condition_matrix, FatPointScheme, GenericProtocol, MultiplicityVector, PointConfiguration,
};

const ALPHA_LIMIT: Duration = Duration::from_secs(10);
const RANK_LIMIT: Duration = Duration::from_secs(5);

type Check = Result<String, String>;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seshadri")).args(args).output().expect("binary runs")
}

fn json_out(args: &[&str]) -> Result<Value, String> {
    let out = bin(args);
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn equal(a: &RadicalValue, b: &RadicalValue) -> bool {
    a.cmp_with(b, ComparisonBudget::default()).map(|o| o.is_eq()).unwrap_or(false)
}

fn squares() -> Check {
    let protocol = GenericProtocol::default();
    let mut slowest = Duration::ZERO;
    for (r, s) in [(4usize, 2u32), (9, 3)] {
        for m in 1..=5 {
            let start = Instant::now();
            let a = alpha_generic(2, &MultiplicityVector::uniform(r, m), &protocol).map_err(|e| e.to_string())?.alpha;
            let t = start.elapsed();
            slowest = slowest.max(t);
            ensure(a == s * m, || format!("r={r} m={m}: alpha {a}, want {}", s * m))?;
            ensure(t < ALPHA_LIMIT, || format!("r={r} m={m} took {t:?}"))?;
        }
    }
    Ok(format!("alpha = 2m and 3m for m <= 5, slowest {slowest:.2?}"))
}

fn maximality() -> Check {
    let sweep = json_out(&["sweep", "--n", "2", "--r", "9", "--mmax", "1"])?;
    let best = sweep["best"]["display"].as_str().unwrap_or_default().to_string();
    let trivial = trivial_upper(2, 1, 9).map_err(|e| e.to_string())?.value.to_string();
    ensure(best == "1/3" && trivial == "1/3", || format!("sweep {best}, trivial {trivial}"))?;
    Ok(format!("sweep upper {best} = trivial upper {trivial}"))
}

fn exceptions() -> Check {
    let rows = json_out(&["expdim", "--n", "2", "--d-max", "6", "--r-max", "10"])?;
    let rows = rows.as_array().ok_or("expdim output is not an array")?;
    let flagged: Vec<(u64, u64)> = rows
        .iter()
        .filter(|row| row["table"] == "exceptional" || row["engine"] == "exceptional" || row["mismatch"] == true)
        .map(|row| (row["d"].as_u64().unwrap(), row["r"].as_u64().unwrap()))
        .collect();
    ensure(flagged == [(2, 2), (4, 5)], || format!("flagged {flagged:?}"))?;
    ensure(rows.iter().all(|row| row["mismatch"] == false), || "engine disagrees with table".into())?;
    let row = rows.iter().find(|row| row["d"] == 4 && row["r"] == 5).ok_or("no (4,5) row")?;
    let ranks = row["ranks"].as_array().ok_or("no ranks")?;
    let primes: BTreeSet<u64> = ranks.iter().filter(|x| x["rank"] == 14).map(|x| x["prime"].as_u64().unwrap()).collect();
    ensure(row["columns"] == 15 && row["conditions"] == 15, || format!("shape {} x {}", row["conditions"], row["columns"]))?;
    ensure(ranks.iter().all(|x| x["rank"] == 14) && primes.len() >= 2, || format!("ranks {ranks:?}"))?;
    Ok(format!("flagged {flagged:?}; (4,5) rank 14 of 15x15 over {} primes", primes.len()))
}

fn semicontinuity() -> Check {
    let reports = json_out(&["verify", "--suite", "semicontinuity"])?;
    let rep = &reports[0];
    ensure(rep["counterexamples"].as_array().is_some_and(Vec::is_empty), || format!("{}", rep["counterexamples"]))?;
    let collinear = rep["cases"].as_array().and_then(|c| c.iter().find(|c| c["label"] == "collinear-3")).ok_or("no collinear-3")?;
    ensure(collinear["lhs"] == 1 && collinear["rhs"] == 2, || format!("collinear-3 {collinear}"))?;
    Ok(format!("{}/{} cases, collinear-3 alpha 1 vs 2", rep["passed"], rep["attempted"]))
}

fn exact_formulas() -> Check {
    let one = Bound::new(RadicalValue::one(), BoundKind::Exact, 2, Source::Supplied);
    let e = |r: Result<Bound, _>| r.map(|b| b.value).map_err(|e: seshadri::bounds::BoundsError| e.to_string());
    let fixtures = [
        ("tutaj(10)", e(tutaj_lower(10, &one))?, "2*3^(1/2)/11"),
        ("piecewise(10,3,1)", e(harbourne_piecewise(10, 3, 1, &one))?, "3/10"),
        (
            "square(9,4)",
            harbourne_square_maximal(9, 4).map_err(|e| e.to_string())?.ok_or("no square bound")?.value,
            "2/3",
        ),
    ];
    for (name, got, want) in &fixtures {
        let want: RadicalValue = want.parse().map_err(|e| format!("{e}"))?;
        ensure(equal(got, &want), || format!("{name} = {got}, want {want}"))?;
    }
    let direct = RadicalValue::power(&rat(12, 121), &rat(1, 2)).map_err(|e| e.to_string())?;
    ensure(equal(&fixtures[0].1, &direct), || "tutaj differs from (12/121)^(1/2)".into())?;
    Ok(fixtures.iter().map(|(n, v, _)| format!("{n} = {v}")).collect::<Vec<_>>().join(", "))
}

fn pinning() -> Check {
    let mut seen = Vec::new();
    for assume in ["nagata,ns-generator,char0", "ns-generator,char0"] {
        let rep = json_out(&["bounds", "--n", "2", "--Ln", "4", "--eps-point", "steffens", "--r", "9", "--assume", assume])?;
        let lo = rep["best_lower"]["display"].as_str().unwrap_or_default();
        let hi = rep["best_upper"]["display"].as_str().unwrap_or_default();
        ensure(rep["pinned"] == true && lo == "2/3" && hi == "2/3", || format!("{assume}: pinned {} {lo}..{hi}", rep["pinned"]))?;
        seen.push(format!("[{assume}] {lo} = {hi}"));
    }
    Ok(format!("pinned {}", seen.join(", ")))
}

fn chain() -> Check {
    let protocol = GenericProtocol::default();
    for (r, d, ratio) in [(9usize, 3u32, 3i64), (4, 2, 2)] {
        let res = alpha_generic(2, &MultiplicityVector::uniform(r, 1), &protocol).map_err(|e| e.to_string())?;
        ensure(res.alpha == d, || format!("r={r}: witness degree {}", res.alpha))?;
        for k in 1..=5u32 {
            let rec = symmetrization_chain(2, r, res.alpha, &res.actual_mults, k).map_err(|e| e.to_string())?;
            ensure(rec.ratio_dm == rat(ratio, 1), || format!("r={r}: ratio {}", rec.ratio_dm))?;
            ensure(rec.final_factor == rat(k as i64 + 1, k as i64 + 2), || format!("k={k}: factor {}", rec.final_factor))?;
            ensure(rec.conclusion_holds, || format!("r={r} k={k}: conclusion fails"))?;
        }
    }
    Ok("ratio 3 and 2, factor (k+1)/(k+2), holds for k = 1..5".into())
}

fn consistency() -> Check {
    let one = Bound::new(RadicalValue::one(), BoundKind::Exact, 2, Source::Supplied);
    let allowed: BTreeSet<Assumption> = Assumption::USER_LEVEL.into_iter().collect();
    let protocol = GenericProtocol::default();
    let mut compared = 0usize;
    for r in [4u64, 9, 16] {
        let sweep = eps_upper_sweep(2, r as usize, 4, &protocol).map_err(|e| e.to_string())?;
        let mut lowers: Vec<Bound> = best_bounds(&SurfaceContext::projective(2), r, &allowed)
            .map_err(|e| e.to_string())?
            .lower;
        let window = (r as f64).sqrt().ceil() as u64 + 1;
        for d in 1..=window {
            for s in 1..=r * d {
                lowers.extend(harbourne_surface(r, s, d, 1).ok());
                if s <= r {
                    lowers.extend(harbourne_piecewise(r, s, d, &one).ok());
                }
            }
        }
        lowers.extend(tutaj_lower(r, &one).ok());
        for lo in lowers.iter().filter(|b| !b.is_conjectural()) {
            for row in &sweep.rows {
                compared += 1;
                let ord = row.bound.value.cmp_with(&lo.value, ComparisonBudget::default()).map_err(|e| e.to_string())?;
                ensure(ord.is_ge(), || format!("r={r} m={}: upper {} < {:?} {}", row.m, row.bound.value, lo.source, lo.value))?;
            }
        }
    }
    Ok(format!("{compared} upper/lower pairs, no violation"))
}

fn determinism() -> Check {
    let a = bin(&["verify", "--suite", "all"]);
    let b = bin(&["verify", "--suite", "all"]);
    ensure(a.status.success() && b.status.success(), || "verify failed".into())?;
    ensure(a.stdout == b.stdout, || "verify reports differ".into())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = dir.path().join("cache.jsonl");
    let cache = cache.to_str().ok_or("non-utf8 temp path")?;
    let args = ["sweep", "--n", "2", "--r", "9", "--mmax", "3", "--cache", cache];
    let first = bin(&args);
    let again = bin(&[&args[..], &["--recheck"]].concat());
    ensure(first.status.success() && again.status.success(), || String::from_utf8_lossy(&again.stderr).into_owned())?;
    let stats = String::from_utf8_lossy(&again.stderr);
    ensure(stats.contains("3 rechecked, 0 mismatches"), || format!("recheck stats: {stats}"))?;
    ensure(first.stdout == again.stdout, || "cached sweep differs".into())?;
    Ok(format!("{} identical report bytes; {}", a.stdout.len(), stats.trim()))
}

fn performance() -> Check {
    let f = PrimeField::defaults()[0];
    let cfg = PointConfiguration::random(2, 10, f, 1);
    let scheme = FatPointScheme::new(cfg, MultiplicityVector::uniform(10, 19)).map_err(|e| e.to_string())?;
    let cm = build_condition_matrix(&scheme, 60, f).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let rank = cm.matrix.rank();
    let t = start.elapsed();
    let (rows, cols) = cm.matrix.shape();
    ensure(rank == cols, || format!("rank {rank} of {cols} columns"))?;
    ensure(t < RANK_LIMIT, || format!("{rows}x{cols} rank took {t:?}"))?;
    Ok(format!("{rows}x{cols} full rank in {t:.2?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("alpha on square point counts", squares),
        ("maximality pinning by sweep", maximality),
        ("double point exceptions", exceptions),
        ("semicontinuity suite", semicontinuity),
        ("exact bound formulas", exact_formulas),
        ("pinned bounds with and without nagata", pinning),
        ("symmetrization chain on witnesses", chain),
        ("cross-module consistency", consistency),
        ("determinism and cache recheck", determinism),
        ("rank performance floor", performance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
