use std::collections::BTreeSet;
use std::io::Write;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use seshadri::bounds::{
    best_bounds_with, eps_upper_sweep, steffens_lower, sweep::sweep_from_results, Assumption, Bound, BoundKind, Source,
    SurfaceContext,
};
use seshadri::exact::{PrimeField, RadicalValue};
use seshadri::fatpoints::{
    alpha, alpha_generic, expdim_table, expected_alpha, AlphaResult, FatPointError, FatPointScheme, GenericProtocol,
    MultiplicityVector, SearchMode,
};
use seshadri::verify::{
    certify, default_axiom_samples, default_semicontinuity_cases, default_suites, suite_alpha_axioms,
    suite_remark_alpha, suite_semicontinuity, SuiteReport,
};

use crate::cache::{Cache, CacheKey};
use crate::points::load_points;
use crate::{AlphaArgs, BoundsArgs, CacheArgs, Cli, Command, EngineArgs, ExpdimArgs, Format, Suite, SweepArgs, VerifyArgs};

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let degenerate = error
            .chain()
            .any(|c| c.downcast_ref::<FatPointError>() == Some(&FatPointError::DegenerateScheme));
        Failure { code: if degenerate { 3 } else { 2 }, error }
    }
}

pub fn run(cli: Cli) -> Result<u8, Failure> {
    let code = match cli.command {
        Command::Alpha(a) => cmd_alpha(a)?,
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Bounds(a) => cmd_bounds(a)?,
        Command::Verify(a) => cmd_verify(a)?,
        Command::Expdim(a) => cmd_expdim(a)?,
    };
    Ok(code)
}

fn protocol(e: &EngineArgs) -> Result<GenericProtocol> {
    let primes = match &e.primes {
        None => PrimeField::defaults(),
        Some(list) => list.iter().map(|&p| PrimeField::new(p)).collect::<Result<Vec<_>, _>>()?,
    };
    if primes.is_empty() || e.trials == 0 {
        bail!("need at least one prime and one trial");
    }
    let mode = if e.scan { SearchMode::Scan } else { SearchMode::Binary };
    Ok(GenericProtocol { primes, trials: e.trials, seed: e.seed, mode })
}

fn parse_mults(spec: &str, r: Option<usize>) -> Result<MultiplicityVector> {
    let spec = spec.trim();
    if let Some(m) = spec.strip_prefix("uniform:") {
        let m: u32 = m.trim().parse().with_context(|| format!("bad multiplicity in {spec:?}"))?;
        let r = r.ok_or_else(|| anyhow!("uniform multiplicities need --r or a points file"))?;
        return Ok(MultiplicityVector::uniform(r, m));
    }
    let list = spec
        .split(',')
        .map(|x| x.trim().parse::<u32>().with_context(|| format!("bad multiplicity {x:?}")))
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = r {
        if r != list.len() {
            bail!("{} multiplicities for {r} points", list.len());
        }
    }
    Ok(MultiplicityVector(list))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

struct Memo {
    cache: Option<Cache>,
    recheck: bool,
}

impl Memo {
    fn open(args: &CacheArgs) -> Result<Self> {
        let cache = args.cache.as_deref().map(Cache::open).transpose()?;
        if args.recheck && cache.is_none() {
            bail!("--recheck needs --cache or SESHADRI_CACHE");
        }
        Ok(Memo { cache, recheck: args.recheck })
    }

    fn alpha_generic(&mut self, n: usize, mults: &MultiplicityVector, protocol: &GenericProtocol) -> Result<AlphaResult> {
        let Some(cache) = self.cache.as_mut() else {
            return Ok(alpha_generic(n, mults, protocol)?);
        };
        let key = CacheKey {
            n,
            r: mults.len(),
            mults: mults.0.clone(),
            primes: protocol.primes.iter().map(|f| f.modulus()).collect(),
            seed: protocol.seed,
            trials: protocol.trials,
            mode: protocol.mode,
            degree_range: [1, expected_alpha(n, mults.as_slice())?],
        };
        if let Some(hit) = cache.get(&key).cloned() {
            cache.stats.hits += 1;
            if self.recheck {
                let fresh = alpha_generic(n, mults, protocol)?;
                cache.stats.rechecked += 1;
                if serde_json::to_string(&fresh)? != serde_json::to_string(&hit)? {
                    cache.stats.mismatches += 1;
                    bail!("cache mismatch for {}", serde_json::to_string(&key)?);
                }
            }
            return Ok(hit);
        }
        cache.stats.misses += 1;
        let fresh = alpha_generic(n, mults, protocol)?;
        cache.put(key, fresh.clone())?;
        Ok(fresh)
    }

    fn report(&self) {
        if let Some(c) = &self.cache {
            let s = &c.stats;
            eprintln!(
                "cache: {} hits, {} misses, {} rechecked, {} mismatches",
                s.hits, s.misses, s.rechecked, s.mismatches
            );
        }
    }
}

fn cmd_alpha(a: AlphaArgs) -> Result<u8> {
    let protocol = protocol(&a.engine)?;
    let result = if a.points == "random" {
        let r = match (a.r, a.mults.starts_with("uniform:")) {
            (Some(r), _) => r,
            (None, false) => a.mults.split(',').count(),
            (None, true) => bail!("random points need --r"),
        };
        let mults = parse_mults(&a.mults, Some(r))?;
        if a.witness.is_some() || a.certify {
            // Cached results carry no witness.
            alpha_generic(a.n, &mults, &protocol)?
        } else {
            let mut memo = Memo::open(&a.cache)?;
            let res = memo.alpha_generic(a.n, &mults, &protocol);
            memo.report();
            res?
        }
    } else {
        let config = load_points(a.points.as_ref())?;
        if config.n() != a.n {
            bail!("--n {} but the points file has n = {}", a.n, config.n());
        }
        if let Some(r) = a.r {
            if r != config.len() {
                bail!("--r {r} but the points file has {} points", config.len());
            }
        }
        let mults = parse_mults(&a.mults, Some(config.len()))?;
        alpha(&FatPointScheme::new(config, mults)?, &protocol.primes, protocol.mode)?
    };
    print_json(&result)?;
    if let Some(path) = &a.witness {
        let coeffs = result.witness_coefficients().unwrap_or(&[]);
        std::fs::write(path, serde_json::to_string(coeffs)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if a.certify {
        let cert = certify(&result, &protocol.primes)?;
        eprintln!("certificate: {}", serde_json::to_string(&cert)?);
        if !cert.certified {
            return Ok(1);
        }
    }
    Ok(0)
}

fn cmd_sweep(a: SweepArgs) -> Result<u8> {
    if a.mmax < 1 || a.r < 1 {
        bail!("--r and --mmax must be at least 1");
    }
    let protocol = protocol(&a.engine)?;
    let mut memo = Memo::open(&a.cache)?;
    let mut results = Vec::new();
    for m in 1..=a.mmax {
        let res = memo.alpha_generic(a.n, &MultiplicityVector::uniform(a.r, m), &protocol);
        if res.is_err() {
            memo.report();
        }
        results.push((m, res?));
    }
    memo.report();
    let report = sweep_from_results(a.n, a.r, &protocol, &results)?;
    match a.format {
        Format::Json => print_json(&report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["m", "alpha", "actual_total", "ratio", "bound", "best_so_far"])?;
            for row in &report.rows {
                w.write_record([
                    row.m.to_string(),
                    row.alpha.to_string(),
                    row.actual_total.to_string(),
                    row.ratio.to_string(),
                    row.bound.value.to_string(),
                    row.best_so_far.value.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_bounds(a: BoundsArgs) -> Result<u8> {
    let eps = if a.eps_point.trim() == "steffens" {
        if a.n != 2 {
            bail!("the steffens one-point bound is for surfaces (n = 2)");
        }
        steffens_lower(a.ln)?
    } else {
        let v: RadicalValue = a.eps_point.parse()?;
        if !v.is_positive() {
            bail!("--eps-point must be positive");
        }
        Bound::new(v, BoundKind::Lower, a.n, Source::Supplied)
    };
    let ctx = SurfaceContext::new(a.n, a.ln, eps)?;
    let allowed = a
        .assume
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Assumption>().map_err(|e| anyhow!(e)))
        .collect::<Result<BTreeSet<_>>>()?;
    let extra: Vec<Bound> = match a.sweep {
        None => Vec::new(),
        Some(mmax) => {
            let r = usize::try_from(a.r)?;
            eps_upper_sweep(a.n, r, mmax, &protocol(&a.engine)?)?.rows.into_iter().map(|row| row.bound).collect()
        }
    };
    print_json(&best_bounds_with(&ctx, a.r, &allowed, &extra)?)?;
    Ok(0)
}

fn nth_powers_up_to(n: usize, limit: u64) -> Vec<u64> {
    (1u64..).map(|s| s.pow(n as u32)).take_while(|&r| r <= limit).collect()
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let protocol = protocol(&a.engine)?;
    let scaled = a.n.is_some() || a.r.is_some() || a.mmax.is_some();
    let reports: Vec<SuiteReport> = if a.suite == Suite::All && !scaled {
        default_suites(&protocol)?
    } else {
        let n = a.n.unwrap_or(2);
        let mut out = Vec::new();
        if matches!(a.suite, Suite::RemarkAlpha | Suite::All) {
            let r_list = a.r.map_or_else(|| nth_powers_up_to(n, 10), |r| vec![r]);
            let m_max = a.mmax.unwrap_or(if n == 2 { 5 } else { 2 });
            out.push(suite_remark_alpha(n, &r_list, m_max, &protocol)?);
        }
        if matches!(a.suite, Suite::Semicontinuity | Suite::All) {
            out.push(suite_semicontinuity(&default_semicontinuity_cases(), &protocol)?);
        }
        if matches!(a.suite, Suite::Axioms | Suite::All) {
            let r = usize::try_from(a.r.unwrap_or(4))?;
            let samples = default_axiom_samples(r, a.mmax.unwrap_or(3));
            out.push(suite_alpha_axioms(n, &samples, &protocol)?);
        }
        out
    };
    for rep in &reports {
        eprintln!(
            "{}: {}/{} passed in {:.2}s",
            rep.suite,
            rep.passed,
            rep.attempted,
            rep.wall_time.as_secs_f64()
        );
    }
    print_json(&reports)?;
    Ok(if reports.iter().all(SuiteReport::ok) { 0 } else { 1 })
}

fn cmd_expdim(a: ExpdimArgs) -> Result<u8> {
    let rows = expdim_table(a.n, a.d_max, a.r_max, &protocol(&a.engine)?)?;
    match a.format {
        Format::Json => print_json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record([
                "d", "r", "columns", "conditions", "expected", "actual", "table", "engine", "mismatch", "ranks",
            ])?;
            for row in &rows {
                let ranks: Vec<String> = row.ranks.iter().map(|x| format!("{}:{}", x.prime, x.rank)).collect();
                w.write_record([
                    row.d.to_string(),
                    row.r.to_string(),
                    row.columns.to_string(),
                    row.conditions.to_string(),
                    row.expected.to_string(),
                    row.actual.to_string(),
                    row.table.to_string(),
                    row.engine.to_string(),
                    row.mismatch.to_string(),
                    ranks.join(";"),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}
