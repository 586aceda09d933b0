use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::report::{CertificateStatus, PointReport, Record, Report, SuiteReport};
use super::{ConfigError, PointSpec, Suite, SuiteConfig};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::frt::checks::{verify_algebra, verify_functionals};
use crate::frt::{CrossRelations, Functionals, NormalFormEngine};
use crate::lorentz::{
    make_big_r, make_lambda, verify_big_r, verify_exchange_with_lambda, verify_functional_laws, verify_lambda,
    verify_orthogonality, BigFunctionals, LorentzGenerators,
};
use crate::minkspace::{verify_minkowski, Bimodule};
use crate::params::{ParameterSet, Sign};
use crate::rmat::{make_r, verify_all, RMatrixPair};
use crate::sigma::fixture::{compare, FixtureEntry, MetricFixture};
use crate::sigma::{make_metric, make_sigma, verify as verify_sigma, verify_dual_identities, MinkowskiMetric, SigmaSet};
use crate::tensor::{make_spinor_metric, SpinorMetric};

fn load_fixture(cfg: &SuiteConfig) -> std::result::Result<MetricFixture, ConfigError> {
    Ok(match &cfg.fixture {
        Some(path) => MetricFixture::load(path)?,
        None => MetricFixture::builtin(),
    })
}

/// Run every enabled suite at every point. Points run concurrently; the
/// report keeps the configured point order.
pub fn run(cfg: &SuiteConfig) -> std::result::Result<Report, ConfigError> {
    cfg.validate()?;
    let fixture = load_fixture(cfg)?;
    let params = cfg.points.iter().map(|pt| cfg.params(pt)).collect::<std::result::Result<Vec<_>, _>>()?;
    let points = params.par_iter().map(|p| run_point(cfg, p, &fixture)).collect();
    Ok(Report::new(cfg.precision_digits, cfg.max_degree, cfg.suites.iter().copied().collect(), points))
}

/// Objects shared by the suites at one point. Each stage keeps its error so
/// that dependent suites report it instead of aborting the run.
struct Stages {
    m: SpinorMetric,
    rm: Result<RMatrixPair>,
    sigma: Result<(SigmaSet, MinkowskiMetric)>,
    fun: Option<Functionals>,
    bf: Option<BigFunctionals>,
    engines: Vec<(Sign, Result<NormalFormEngine>)>,
    lambdas: Vec<(Sign, Result<LorentzGenerators>)>,
}

fn upstream<T>(r: &Result<T>) -> Result<&T> {
    r.as_ref().map_err(Clone::clone)
}

impl Stages {
    fn build(cfg: &SuiteConfig, p: &ParameterSet) -> Self {
        let needs = |s: &[Suite]| s.iter().any(|x| cfg.suites.contains(x));
        let m = make_spinor_metric(p);
        let rm = make_r(p, &m);
        let sigma = upstream(&rm).and_then(|rm| {
            let ss = make_sigma(p, &m, rm)?;
            let mm = make_metric(p, &m, &ss)?;
            Ok((ss, mm))
        });
        let algebra = needs(&[Suite::Hopf, Suite::Lorentz, Suite::Bigr, Suite::Minkowski]);
        let fun = match (&rm, algebra) {
            (Ok(rm), true) => Some(Functionals::new(p, &m, rm)),
            _ => None,
        };
        let bf = match (&sigma, &fun, needs(&[Suite::Bigr, Suite::Minkowski])) {
            (Ok((ss, _)), Some(fun), true) => Some(BigFunctionals::new(p, &m, ss, fun)),
            _ => None,
        };
        let engines: Vec<_> = if algebra {
            Sign::BOTH
                .par_iter()
                .map(|&s| {
                    let eng = upstream(&rm)
                        .and_then(|rm| NormalFormEngine::new(p, &m, rm, CrossRelations::matched(s), cfg.max_degree));
                    (s, eng)
                })
                .collect()
        } else {
            Vec::new()
        };
        let lambdas = if needs(&[Suite::Lorentz, Suite::Bigr, Suite::Minkowski]) {
            engines
                .par_iter()
                .map(|(s, eng)| {
                    let lg = upstream(&sigma)
                        .and_then(|(ss, mm)| upstream(eng).and_then(|eng| make_lambda(p, &m, ss, mm, eng)));
                    (*s, lg)
                })
                .collect()
        } else {
            Vec::new()
        };
        Stages { m, rm, sigma, fun, bf, engines, lambdas }
    }

    fn engine(&self, s: Sign) -> Result<&NormalFormEngine> {
        upstream(&self.engines.iter().find(|(t, _)| *t == s).expect("engine built").1)
    }

    fn lambda(&self, s: Sign) -> Result<&LorentzGenerators> {
        upstream(&self.lambdas.iter().find(|(t, _)| *t == s).expect("lambda built").1)
    }

    fn fun(&self) -> Result<&Functionals> {
        upstream(&self.rm)?;
        Ok(self.fun.as_ref().expect("functionals built"))
    }

    fn bf(&self) -> Result<&BigFunctionals> {
        upstream(&self.sigma)?;
        self.fun()?;
        Ok(self.bf.as_ref().expect("big functionals built"))
    }
}

/// Append "-in-plus" or "-in-minus": which algebra the identity was checked in.
fn in_algebra(mut checks: Vec<Check>, s: Sign) -> Vec<Check> {
    for c in &mut checks {
        c.id = format!("{}-in-{}", c.id, s.word());
    }
    checks
}

fn run_point(cfg: &SuiteConfig, p: &ParameterSet, fixture: &MetricFixture) -> PointReport {
    let label = p.label();
    let st = Stages::build(cfg, p);
    let mut report = PointReport { point: label.clone(), suites: Vec::new(), certificates: Vec::new(), fixture_mismatches: Vec::new() };
    for &suite in &cfg.suites {
        let start = Instant::now();
        let outcome = match suite {
            Suite::Metric => metric_suite(p, &st, fixture).map(|(checks, mism)| {
                report.fixture_mismatches = mism;
                checks
            }),
            Suite::Rmatrix => upstream(&st.rm).and_then(|rm| verify_all(p, &st.m, rm)),
            Suite::Sigma => sigma_suite(p, &st),
            Suite::Hopf => hopf_suite(cfg, p, &st).map(|(checks, certs)| {
                report.certificates = certs;
                checks
            }),
            Suite::Lorentz => lorentz_suite(p, &st),
            Suite::Bigr => bigr_suite(p, &st),
            Suite::Minkowski => minkowski_suite(cfg, p, &st),
        };
        let records = match outcome {
            Ok(checks) => checks.iter().map(|c| Record::from_check(c, &label)).collect(),
            Err(e) => vec![Record::error(format!("{suite}-error"), &label, e.to_string())],
        };
        let ms = start.elapsed().as_millis() as u64;
        report.suites.push(SuiteReport { suite, wall_time_ms: cfg.timing.then_some(ms), records });
    }
    report
}

fn metric_suite(p: &ParameterSet, st: &Stages, fixture: &MetricFixture) -> Result<(Vec<Check>, Vec<FixtureEntry>)> {
    let mut checks = st.m.verify(p)?;
    let (_, mm) = upstream(&st.sigma)?;
    let mut mismatches = Vec::new();
    for s in Sign::BOTH {
        for e in compare(p, fixture, s, mm.upper(s), mm.lower(s))? {
            let id = format!("metric-fixture-{}-{}-{}{}", e.matrix, s.word(), e.row, e.col);
            let bits = p.prec.bits();
            let res = rug::Float::parse(&e.residual)
                .map(|v| rug::Float::with_val(bits, v))
                .unwrap_or_else(|_| rug::Float::with_val(bits, rug::float::Special::Nan));
            let c = if e.required { Check::holds(id, res, &p.tolerance) } else { Check::info(id, res, &p.tolerance) };
            checks.push(c.with_note(e.expression.clone()));
            if !e.matches {
                mismatches.push(e);
            }
        }
    }
    Ok((checks, mismatches))
}

fn sigma_suite(p: &ParameterSet, st: &Stages) -> Result<Vec<Check>> {
    let rm = upstream(&st.rm)?;
    let (ss, mm) = upstream(&st.sigma)?;
    let mut out = verify_sigma(p, &st.m, rm, ss, mm)?;
    for s in Sign::BOTH {
        out.extend(verify_dual_identities(p, &st.m, rm, ss, mm, s)?);
    }
    Ok(out)
}

fn hopf_suite(cfg: &SuiteConfig, p: &ParameterSet, st: &Stages) -> Result<(Vec<Check>, Vec<CertificateStatus>)> {
    let rm = upstream(&st.rm)?;
    let fun = st.fun()?;
    let per_sign = Sign::BOTH
        .par_iter()
        .map(|&s| {
            let eng = st.engine(s)?;
            let mut checks = verify_algebra(eng, cfg.samples, cfg.seed)?;
            checks.extend(verify_functionals(eng, fun, rm)?);
            Ok((in_algebra(checks, s), CertificateStatus::new(s.word(), eng.certificate())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut certs = Vec::new();
    for (c, cert) in per_sign {
        out.extend(c);
        certs.push(cert);
    }
    // Imposing both cross relations at once is only consistent classically.
    let both = NormalFormEngine::new(p, &st.m, rm, CrossRelations::Both, 2);
    let note = match &both {
        Ok(_) => "both cross relation signs imposed: consistent".to_string(),
        Err(e) => format!("both cross relation signs imposed: {e}"),
    };
    out.push(Check::info("cross-relations-both-signs", p.real(0), &p.tolerance).with_note(note));
    Ok((out, certs))
}

fn lorentz_suite(p: &ParameterSet, st: &Stages) -> Result<Vec<Check>> {
    let (ss, mm) = upstream(&st.sigma)?;
    let per_sign = Sign::BOTH
        .par_iter()
        .map(|&s| {
            let (eng, lg) = (st.engine(s)?, st.lambda(s)?);
            let mut checks = verify_lambda(lg, p, &st.m, ss, mm, eng)?;
            checks.extend(verify_orthogonality(lg, p, mm, eng)?);
            Ok(in_algebra(checks, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_sign.into_iter().flatten().collect())
}

fn bigr_suite(p: &ParameterSet, st: &Stages) -> Result<Vec<Check>> {
    let (_, mm) = upstream(&st.sigma)?;
    let bf = st.bf()?;
    let mut out = verify_functional_laws(p, &st.m, mm, bf);
    for s in Sign::BOTH {
        out.extend(in_algebra(verify_exchange_with_lambda(st.engine(s)?, bf, st.lambda(s)?)?, s));
    }
    let lg = st.lambda(Sign::Plus)?;
    let br = make_big_r(lg, bf);
    out.extend(verify_big_r(p, mm, &br, bf, lg));
    Ok(out)
}

fn minkowski_suite(cfg: &SuiteConfig, p: &ParameterSet, st: &Stages) -> Result<Vec<Check>> {
    let (_, mm) = upstream(&st.sigma)?;
    let (fun, bf) = (st.fun()?, st.bf()?);
    let per_sign = Sign::BOTH
        .par_iter()
        .map(|&s| {
            let (eng, lg) = (st.engine(s)?, st.lambda(s)?);
            let bm = Bimodule::new(p, &st.m, fun, bf, lg);
            Ok(in_algebra(verify_minkowski(&bm, mm, eng, cfg.samples.min(8), cfg.seed)?, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_sign.into_iter().flatten().collect())
}

#[derive(Serialize)]
struct MetricDump {
    point: String,
    signs: Vec<SignDump>,
}

#[derive(Serialize)]
struct SignDump {
    sign: Sign,
    upper: Vec<Vec<String>>,
    lower: Vec<Vec<String>>,
    fixture: Vec<FixtureEntry>,
}

/// Write G_±^{IJ} and G_{±IJ} at every configured point, with the displayed
/// shorthand expressions and their comparison.
pub fn emit_metrics(cfg: &SuiteConfig, path: &Path) -> std::result::Result<(), ConfigError> {
    let fixture = load_fixture(cfg)?;
    let mut dumps = Vec::new();
    for pt in &cfg.points {
        dumps.push(metric_dump(cfg, pt, &fixture)?);
    }
    let mut text = serde_json::to_string_pretty(&dumps).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn metric_dump(cfg: &SuiteConfig, pt: &PointSpec, fixture: &MetricFixture) -> std::result::Result<MetricDump, ConfigError> {
    let p = cfg.params(pt)?;
    let m = make_spinor_metric(&p);
    let rm = make_r(&p, &m)?;
    let ss = make_sigma(&p, &m, &rm)?;
    let mm = make_metric(&p, &m, &ss)?;
    let digits = (cfg.precision_digits as usize).min(30);
    let grid = |t: &crate::tensor::Tensor| -> Vec<Vec<String>> {
        (0..4).map(|i| (0..4).map(|j| format!("{:.*}", digits, t.get(&[i, j]))).collect()).collect()
    };
    let signs = Sign::BOTH
        .into_iter()
        .map(|s| {
            Ok(SignDump {
                sign: s,
                upper: grid(mm.upper(s)),
                lower: grid(mm.lower(s)),
                fixture: compare(&p, fixture, s, mm.upper(s), mm.lower(s))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricDump { point: p.label(), signs })
}
