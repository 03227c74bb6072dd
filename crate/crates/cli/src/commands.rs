use std::fs;
use std::path::Path;

use kronpoly::kronecker::{check_semigroup, check_stability, entropy_check, KronSet};
use kronpoly::spectra::{derive_seed, l1_distance};
use kronpoly::{
    build_polytope, enumerate_kron, enumerate_kron_up_to, enumerate_partitions, estimation_bound,
    estimation_convergence, extract_generators, kl_divergence, kronecker_coefficient, random_density,
    schur_weyl_prob, spectral_triple, DensityOperator, Partition, PolytopeV, PureState, RowBounds, Spectrum,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::args::{Cli, Command, Fixture};
use crate::cache::CacheSession;
use crate::config::{RunConfig, Tolerances};
use crate::error::{CliError, CliResult};
use crate::output::{emit, fmt_float};

/// Parses, configures and runs one invocation.
pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = cli.config();
    cfg.validate()?;
    if let Some(threads) = cfg.threads {
        // only the first call in a process can size the global pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let session = match &cfg.cache {
        Some(path) => {
            let session = CacheSession::open(path, cfg.seed)?;
            if session.is_none() {
                eprintln!("warning: {} is locked by another process; running without cache", path.display());
            }
            session
        }
        None => None,
    };
    dispatch(&cli.command, &cfg)?;
    if let Some(session) = session {
        session.save()?;
    }
    Ok(())
}

fn dispatch(command: &Command, cfg: &RunConfig) -> CliResult<()> {
    let out = cfg.out.as_deref();
    match command {
        Command::Coeff { mu, nu, lambda } => {
            let g = coeff(mu, nu, lambda)?;
            emit(out, &format!("{g}\n"))
        }
        Command::Enumerate { k, .. } => {
            let set = enumerate_kron(*k, cfg.bounds)?;
            emit(out, &(set.to_json() + "\n"))?;
            eprintln!("triples: {}", set.len());
            Ok(())
        }
        Command::Polytope { max_boxes, .. } => {
            let poly = polytope(*max_boxes, cfg.bounds)?;
            emit(out, &(poly.to_json() + "\n"))?;
            eprintln!("vertices: {}", poly.len());
            Ok(())
        }
        Command::Sample {
            trials,
            m,
            n,
            hull,
            fixture,
        } => {
            let report = sample(*trials, *m, *n, hull, fixture, cfg)?;
            emit(out, &report.csv)?;
            eprintln!(
                "trials: {}, max hull distance: {}, exceeding {}: {}",
                trials,
                fmt_float(report.max_distance),
                fmt_float(cfg.tolerances.hull),
                report.exceeding
            );
            Ok(())
        }
        Command::Estimate { spec, k_max } => {
            let report = estimate(spec, *k_max, &cfg.tolerances)?;
            emit(out, &report.table)?;
            eprintln!(
                "fitted c: {}, rows above {}/sqrt(k): {}",
                fmt_float(report.fitted_c),
                fmt_float(cfg.tolerances.convergence),
                report.failures
            );
            Ok(())
        }
        Command::Generators { max_boxes, .. } => {
            let set = generators(*max_boxes, cfg.bounds)?;
            emit(out, &(set.to_json() + "\n"))?;
            eprintln!("generators: {}", set.len());
            Ok(())
        }
        Command::Check { max_boxes, trials, .. } => {
            let report = check(*max_boxes, *trials, cfg)?;
            emit(out, &report.text)?;
            report.verdict()
        }
    }
}

fn parse_shape(text: &str) -> CliResult<Partition> {
    text.parse::<Partition>()
        .map_err(|e| CliError::Input(format!("{text:?}: {e}")))
}

pub fn coeff(mu: &str, nu: &str, lambda: &str) -> CliResult<u64> {
    let (mu, nu, lambda) = (parse_shape(mu)?, parse_shape(nu)?, parse_shape(lambda)?);
    Ok(kronecker_coefficient(&mu, &nu, &lambda)?)
}

pub fn polytope(max_boxes: u32, bounds: RowBounds) -> CliResult<PolytopeV> {
    if max_boxes == 0 {
        return Err(CliError::Input("max-boxes must be at least 1".into()));
    }
    Ok(build_polytope(&enumerate_kron_up_to(max_boxes, bounds)?)?)
}

/// Indecomposable members of the set of all triples up to `max_boxes`.
pub fn generators(max_boxes: u32, bounds: RowBounds) -> CliResult<KronSet> {
    if max_boxes == 0 {
        return Err(CliError::Input("max-boxes must be at least 1".into()));
    }
    let all = enumerate_kron_up_to(max_boxes, bounds)?;
    let mut set = KronSet {
        bounds,
        max_boxes,
        triples: extract_generators(&all),
    };
    set.sort();
    Ok(set)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub csv: String,
    pub max_distance: f64,
    pub exceeding: usize,
}

pub fn read_hull(path: &Path) -> CliResult<PolytopeV> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    PolytopeV::from_json(&text).map_err(|e| CliError::Consistency(format!("{}: {e}", path.display())))
}

fn fixture_state(fixture: Fixture, m: usize, n: usize) -> CliResult<DensityOperator> {
    let psi = match fixture {
        Fixture::MaxEntangled if m == n => PureState::maximally_entangled(m),
        Fixture::MaxEntangled => {
            return Err(CliError::Input(format!("max-entangled fixture needs m = n, got {m}x{n}")))
        }
        Fixture::Product => PureState::basis(m, 0).tensor(&PureState::basis(n, 0)),
    };
    Ok(DensityOperator::from_pure(&psi))
}

pub fn sample(
    trials: usize,
    m: usize,
    n: usize,
    hull_path: &Path,
    fixtures: &[Fixture],
    cfg: &RunConfig,
) -> CliResult<SampleReport> {
    let hull = read_hull(hull_path)?;
    let hb = hull.bounds();
    if (hb.m, hb.n) != (m, n) {
        return Err(CliError::Consistency(format!(
            "hull {} is for {}x{} but sampling {m}x{n}",
            hull_path.display(),
            hb.m,
            hb.n
        )));
    }
    let tol = cfg.tolerances;
    let measure = |rho: &DensityOperator| -> CliResult<(Vec<f64>, f64)> {
        let t = spectral_triple(rho, m, n)?;
        let membership = hull.membership_with_tolerance(&t, tol.membership)?;
        Ok((t.flatten(), membership.distance))
    };

    let mut rows: Vec<(String, String, Vec<f64>, f64)> = Vec::new();
    for &f in fixtures {
        let (coords, dist) = measure(&fixture_state(f, m, n)?)?;
        let id = match f {
            Fixture::MaxEntangled => "max-entangled",
            Fixture::Product => "product",
        };
        rows.push((id.into(), String::new(), coords, dist));
    }
    let sampled: Vec<(String, String, Vec<f64>, f64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(cfg.seed, i as u64);
            let (coords, dist) = measure(&random_density(m * n, seed))?;
            Ok((i.to_string(), seed.to_string(), coords, dist))
        })
        .collect::<CliResult<_>>()?;
    rows.extend(sampled);

    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string(), "seed".to_string()];
    header.extend((1..=m).map(|i| format!("rA_{i}")));
    header.extend((1..=n).map(|i| format!("rB_{i}")));
    header.extend((1..=m * n).map(|i| format!("rAB_{i}")));
    header.push("hull_distance".into());
    let csv_err = |e: csv::Error| CliError::Io(format!("csv: {e}"));
    writer.write_record(&header).map_err(csv_err)?;
    let mut max_distance = 0.0f64;
    let mut exceeding = 0;
    for (id, seed, coords, dist) in &rows {
        let mut record = vec![id.clone(), seed.clone()];
        record.extend(coords.iter().map(|&x| fmt_float(x)));
        record.push(fmt_float(*dist));
        writer.write_record(&record).map_err(csv_err)?;
        max_distance = max_distance.max(*dist);
        if *dist > tol.hull {
            exceeding += 1;
        }
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?;
    Ok(SampleReport {
        csv: String::from_utf8(bytes).expect("csv output is utf-8"),
        max_distance,
        exceeding,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub table: String,
    pub fitted_c: f64,
    pub failures: usize,
}

/// Parses `0.7,0.3` into a spectrum, sorting it into decreasing order.
pub fn parse_spectrum(text: &str, tol: f64) -> CliResult<Spectrum> {
    let mut probs = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(format!("{text:?}: {e}")))?;
    probs.sort_by(|a, b| b.total_cmp(a));
    Ok(Spectrum::with_tolerance(probs, tol)?)
}

pub fn estimate(spec: &str, k_max: u32, tol: &Tolerances) -> CliResult<EstimateReport> {
    if k_max == 0 {
        return Err(CliError::Input("k-max must be at least 1".into()));
    }
    let r = parse_spectrum(spec, tol.spectrum)?;
    let ks: Vec<u32> = (1..=k_max).collect();
    let table = estimation_convergence(&r, &ks)?;
    let mut text = String::from("k,argmax,probability,distance,bound,pass\n");
    let mut failures = 0;
    for row in &table.rows {
        let bound = tol.convergence / f64::from(row.k).sqrt();
        let pass = row.distance <= bound;
        failures += usize::from(!pass);
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.k,
            row.argmax.to_string().replace(',', " "),
            fmt_float(row.probability),
            fmt_float(row.distance),
            fmt_float(bound),
            pass
        ));
    }
    Ok(EstimateReport {
        table: text,
        fitted_c: table.fitted_c,
        failures,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub text: String,
    /// Violations of the semigroup property, stability or the two inequalities.
    pub falsifications: usize,
    /// Normalization failures; these indicate numerical trouble, not a counterexample.
    pub inconsistencies: usize,
}

impl CheckReport {
    fn line(&mut self, suite: &str, cases: usize, violations: usize) {
        self.text.push_str(&format!("{suite}: {cases} cases, {violations} violations\n"));
    }

    pub fn verdict(&self) -> CliResult<()> {
        if self.falsifications > 0 {
            Err(CliError::Falsification(format!("{} violations in the check suites", self.falsifications)))
        } else if self.inconsistencies > 0 {
            Err(CliError::Consistency(format!("{} normalization failures", self.inconsistencies)))
        } else {
            Ok(())
        }
    }
}

fn random_spectrum(d: usize, seed: u64) -> CliResult<Spectrum> {
    Ok(random_density(d, seed).spectrum()?)
}

/// Runs every falsification suite; the report holds one line per suite.
pub fn check(max_boxes: u32, trials: usize, cfg: &RunConfig) -> CliResult<CheckReport> {
    let bounds = cfg.bounds;
    let tol = &cfg.tolerances;
    let mut report = CheckReport::default();

    let sets: Vec<KronSet> = (0..=max_boxes)
        .map(|k| enumerate_kron(k, bounds))
        .collect::<Result<_, _>>()?;
    let pairs: Vec<_> = (1..=max_boxes as usize)
        .flat_map(|k1| (k1..=max_boxes as usize - k1).map(move |k2| (k1, k2)))
        .flat_map(|(k1, k2)| {
            let sets = &sets;
            sets[k1]
                .triples
                .iter()
                .flat_map(move |a| sets[k2].triples.iter().map(move |b| (a, b)))
        })
        .collect();
    let bad = pairs
        .par_iter()
        .filter(|(a, b)| !matches!(check_semigroup(a, b), Ok(t) if t.g > 0))
        .count();
    report.falsifications += bad;
    report.line("semigroup", pairs.len(), bad);

    let small: Vec<_> = sets.iter().take(6).flat_map(|s| s.triples.iter()).collect();
    let bad = small
        .par_iter()
        .map(|t| [2, 3].iter().filter(|&&f| !check_stability(t, f).unwrap_or(false)).count())
        .sum();
    report.falsifications += bad;
    report.line("stability", small.len() * 2, bad);

    let all: Vec<_> = sets.iter().flat_map(|s| s.triples.iter()).collect();
    let bad = all
        .par_iter()
        .filter(|t| !entropy_check(t).map(|r| r.holds).unwrap_or(false))
        .count();
    report.falsifications += bad;
    report.line("entropy", all.len(), bad);

    let (cases, bad) = (0..trials)
        .into_par_iter()
        .map(|i| -> CliResult<(usize, usize)> {
            let d = 2 + i % 2;
            let r = random_spectrum(d, derive_seed(cfg.seed ^ 0x5eed_0001, i as u64))?;
            let mut cases = 0;
            let mut bad = 0;
            for k in 1..=10 {
                for lambda in enumerate_partitions(k, d) {
                    cases += 1;
                    if schur_weyl_prob(&lambda, &r, k)? > estimation_bound(&lambda, &r, k)? + 1e-10 {
                        bad += 1;
                    }
                }
            }
            Ok((cases, bad))
        })
        .collect::<CliResult<Vec<_>>>()?
        .into_iter()
        .fold((0, 0), |(c, b), (c2, b2)| (c + c2, b + b2));
    report.falsifications += bad;
    report.line("estimation-bound", cases, bad);

    let (cases, bad) = (0..trials)
        .into_par_iter()
        .map(|i| -> CliResult<(usize, usize)> {
            let d = 1 + i % 3;
            let r = random_spectrum(d, derive_seed(cfg.seed ^ 0x5eed_0002, i as u64))?;
            let mut bad = 0;
            for k in 0..=8 {
                let total: f64 = enumerate_partitions(k, d)
                    .iter()
                    .map(|l| schur_weyl_prob(l, &r, k))
                    .sum::<Result<f64, _>>()?;
                bad += usize::from((total - 1.0).abs() > tol.normalization);
            }
            Ok((9, bad))
        })
        .collect::<CliResult<Vec<_>>>()?
        .into_iter()
        .fold((0, 0), |(c, b), (c2, b2)| (c + c2, b + b2));
    report.inconsistencies += bad;
    report.line("normalization", cases, bad);

    let bad = (0..trials)
        .into_par_iter()
        .map(|i| -> CliResult<usize> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed ^ 0x5eed_0003, i as u64));
            let d = rng.random_range(1..=6);
            let mut draw = || {
                let v: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
                let total: f64 = v.iter().sum();
                v.into_iter().map(|x| x / total).collect::<Vec<_>>()
            };
            let (p, q) = (draw(), draw());
            let l1 = l1_distance(&p, &q);
            Ok(usize::from(l1 * l1 / 2.0 > kl_divergence(&p, &q)? + tol.pinsker))
        })
        .collect::<CliResult<Vec<_>>>()?
        .into_iter()
        .sum();
    report.falsifications += bad;
    report.line("pinsker", trials, bad);

    Ok(report)
}
