//! The four subcommands: `run`, `bounds`, `oracle` and `table`.

use std::fmt::Write as _;
use std::path::Path;

use fsc_capacity::channels::bec::bec_output_source;
use fsc_capacity::channels::*;
use fsc_capacity::markov::{
    build_forbidden_word_adjacency, conditional_entropy_bruteforce, conditional_entropy_forward, perron_log_eigenvalue,
    HiddenMarkovSource, MarkovChain, BRUTEFORCE_MAX_BLOCK,
};
use fsc_capacity::optimizer::*;
use fsc_capacity::{Error, ObjectiveSequence, ParamDomain, SequenceConstants};
use nalgebra::DMatrix;

use crate::config::{ChannelKind, RunConfig};
use crate::format::{sig9, write_trace};
use crate::report::{Bound, Constants, FinalIterate, Report, Verification};
use crate::CliError;

/// Second-order BEC input at which the order gain is published.
pub const BEC_BIRCH_POINT: (f64, f64) = (0.597275, 0.614746);
/// First-order input of the noiseless channel for its Birch bound.
pub const NOISELESS_BIRCH_POINT: (f64, f64) = (0.674521, 0.595176);

/// Published iterates `(k, θ_k, f_k(θ_k))` of the floored run on the default
/// Gilbert-Elliott channel.
pub const GE_PUBLISHED: [(usize, f64, f64); 10] = [
    (7, 0.28824, 0.327527),
    (8, 0.378401, 0.347958),
    (9, 0.404626, 0.349884),
    (10, 0.415306, 0.350211),
    (11, 0.417635, 0.350248),
    (12, 0.421001, 0.350281),
    (13, 0.422514, 0.350288),
    (14, 0.4232, 0.350289),
    (15, 0.423511, 0.350289),
    (16, 0.423653, 0.350289),
];

/// Errors from building inputs are configuration errors; the rest are
/// runtime failures, except an inconsistent convergence guarantee, which is
/// an assumption failure.
fn core_err(e: Error) -> CliError {
    match e {
        Error::InvalidConfig(_)
        | Error::InitialPoint(_)
        | Error::InvalidDomain(_)
        | Error::InvalidConstants(_)
        | Error::InvalidMatrix(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::ProbabilityOutOfRange(_) => CliError::Config(e.to_string()),
        Error::ConvergenceConstants(_) => CliError::Verification(e.to_string()),
        _ => CliError::Runtime(e.to_string()),
    }
}

fn merged_constants(base: &SequenceConstants, cfg: &RunConfig) -> Result<SequenceConstants, CliError> {
    SequenceConstants::new(
        cfg.n_poly.unwrap_or(base.n_poly),
        cfg.rho.unwrap_or(base.rho),
        cfg.big_m.unwrap_or(base.big_m),
        cfg.m.or(base.m),
        cfg.k0.unwrap_or(base.k0),
    )
    .map_err(core_err)
}

fn domain(cfg: &RunConfig) -> Result<Option<ParamDomain>, CliError> {
    cfg.domain.map(|[lo, hi]| ParamDomain::interval(lo, hi)).transpose().map_err(core_err)
}

fn require<T: Clone>(v: &Option<T>, field: &str, channel: ChannelKind) -> Result<T, CliError> {
    v.clone()
        .ok_or_else(|| CliError::Config(format!("missing field `{field}` for channel {}", channel.name())))
}

fn state_chain(rows: &[Vec<f64>]) -> Result<MarkovChain, CliError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Config("state_matrix must be a non-empty square matrix".into()));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    MarkovChain::new(DMatrix::from_row_slice(n, n, &flat)).map_err(core_err)
}

fn build_objective(cfg: &RunConfig) -> Result<Box<dyn ObjectiveSequence>, CliError> {
    let dom = domain(cfg)?;
    Ok(match cfg.channel {
        ChannelKind::Bec => {
            let ch = BecRllChannel::new(cfg.epsilon.unwrap_or(0.1)).map_err(core_err)?;
            let mut obj = bec_objective(ch);
            if let Some(d) = dom {
                obj = obj.with_domain(d).map_err(core_err)?;
            }
            let c = merged_constants(obj.constants(), cfg)?;
            Box::new(obj.with_constants(c).map_err(core_err)?)
        }
        ChannelKind::Noiseless => {
            let mut obj = noiseless_objective();
            if let Some(d) = dom {
                obj = obj.with_domain(d).map_err(core_err)?;
            }
            let c = merged_constants(obj.constants(), cfg)?;
            Box::new(obj.with_constants(c).map_err(core_err)?)
        }
        ChannelKind::GilbertElliott => {
            let ch = match (&cfg.state_matrix, &cfg.crossovers) {
                (None, None) => GilbertElliott::default(),
                (rows, cross) => {
                    let def = GilbertElliott::default();
                    let chain = match rows {
                        Some(r) => state_chain(r)?,
                        None => def.state_chain().clone(),
                    };
                    let cross: [f64; 2] = match cross {
                        Some(c) => c
                            .as_slice()
                            .try_into()
                            .map_err(|_| CliError::Config("crossovers must have two entries".into()))?,
                        None => def.crossover(),
                    };
                    GilbertElliott::new(chain, cross).map_err(core_err)?
                }
            };
            let mut obj = ge_objective(ch).map_err(core_err)?;
            if let Some(d) = dom {
                obj = obj.with_domain(d).map_err(core_err)?;
            }
            let c = merged_constants(obj.constants(), cfg)?;
            Box::new(obj.with_constants(c).map_err(core_err)?)
        }
        ChannelKind::Generic => {
            let kind = ChannelKind::Generic;
            let input = match require(&cfg.input, "input", kind)?.as_str() {
                "rll" => rll_input(),
                "iid" => iid_input(),
                other => return Err(CliError::Config(format!("input must be `rll` or `iid`, got `{other}`"))),
            };
            let chain = state_chain(&require(&cfg.state_matrix, "state_matrix", kind)?)?;
            let cross = require(&cfg.crossovers, "crossovers", kind)?;
            let fsc = GenericFsc::binary_symmetric(input, &chain, &cross).map_err(core_err)?;
            let d = dom.ok_or_else(|| CliError::Config("missing field `domain` for channel generic".into()))?;
            let c = SequenceConstants::new(
                require(&cfg.n_poly, "n_poly", kind)?,
                require(&cfg.rho, "rho", kind)?,
                require(&cfg.big_m, "big_m", kind)?,
                cfg.m,
                require(&cfg.k0, "k0", kind)?,
            )
            .map_err(core_err)?;
            Box::new(GenericObjective::new(fsc, d, c).map_err(core_err)?)
        }
    })
}

/// The published settings of each channel, overridden by the config.
fn algo_config(cfg: &RunConfig, obj: &dyn ObjectiveSequence) -> Algo1Config {
    let (alpha, beta, theta0, iters) = match cfg.channel {
        ChannelKind::Bec => (0.4, 0.9, vec![0.5], 110),
        ChannelKind::Noiseless => (0.4, 0.9, vec![0.5], 450),
        ChannelKind::GilbertElliott => (
            GE_DEFAULT_ALPHA,
            GE_DEFAULT_BETA,
            vec![GE_DEFAULT_THETA0],
            GE_DEFAULT_OUTER_ITERS,
        ),
        ChannelKind::Generic => {
            let d = obj.domain();
            let mid = d.lower().iter().zip(d.upper()).map(|(l, u)| 0.5 * (l + u)).collect();
            (0.4, 0.9, mid, GENERIC_MAX_K.saturating_sub(obj.constants().k0).max(1))
        }
    };
    let mut a = Algo1Config::new(
        cfg.alpha.unwrap_or(alpha),
        cfg.beta.unwrap_or(beta),
        cfg.theta0.as_ref().map_or(theta0, |p| p.coords()),
        cfg.outer_iters.unwrap_or(iters),
    );
    if let Some(mb) = cfg.max_backtracks {
        a.max_backtracks = mb;
    }
    a
}

/// Result of a `run`: the accepted iterates and the report.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: Vec<IterateRecord>,
    pub report: Report,
}

/// Audit, optimize and (for the concave runner) bound, as configured.
pub fn execute(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let algorithm = cfg.algorithm.unwrap_or(match cfg.channel {
        ChannelKind::GilbertElliott => 3,
        _ => 1,
    });
    if algorithm != 1 && algorithm != 3 {
        return Err(CliError::Config(format!("algorithm must be 1 or 3, got {algorithm}")));
    }
    let b = match (algorithm, cfg.b, cfg.channel) {
        (3, Some(b), _) => Some(b),
        (3, None, ChannelKind::GilbertElliott) => Some(GE_DEFAULT_B),
        (3, None, _) => return Err(CliError::Config("algorithm 3 requires b".into())),
        _ => None,
    };
    let obj = build_objective(cfg)?;
    let obj = obj.as_ref();
    let base = algo_config(cfg, obj);
    base.validate(obj.domain()).map_err(core_err)?;
    let c = obj.constants().clone();

    let proxy_k = cfg.proxy_k.unwrap_or(match cfg.channel {
        ChannelKind::GilbertElliott => GE_PROXY_K,
        ChannelKind::Generic => GENERIC_MAX_K,
        _ => c.k0 + PROXY_OFFSET,
    });

    let (trace, verification, bound) = if let Some(b) = b {
        let audit = verify_lemma5_at(obj, b, cfg.grid_points.unwrap_or(91), proxy_k).map_err(core_err)?;
        if !audit.passed && !cfg.force {
            return Err(CliError::Verification(format!(
                "start-up conditions do not hold (delta = {:.6e}, condition lhs = ({:.4e}, {:.4e}), witness = {:?}); set force = true to run anyway",
                audit.delta_est, audit.cond_a_lhs.0, audit.cond_a_lhs.1, audit.witness
            )));
        }
        let y0 = cfg.y0.unwrap_or(audit.y0);
        let a3 = Algo3Config::new(base, b, y0);
        a3.validate(obj.domain()).map_err(core_err)?;
        let trace = match run_algorithm3(obj, &a3) {
            Ok(t) => t,
            Err(Error::BacktracksExhausted { partial, .. }) => partial,
            Err(e) => return Err(core_err(e)),
        };
        let v = Verification {
            passed: audit.passed,
            delta: audit.delta_est,
            y0,
            dist: audit.dist_c_boundary,
        };
        (trace, v, None)
    } else {
        let audit = verify_lemma1_at(obj, cfg.grid_points.unwrap_or(201), proxy_k).map_err(core_err)?;
        if !audit.passed && !cfg.force {
            return Err(CliError::Verification(format!(
                "start-up conditions do not hold (delta = {:.6e}, condition lhs = ({:.4e}, {:.4e}), delta/8 = {:.4e}); set force = true to run anyway",
                audit.delta_est,
                audit.cond_a_lhs.0,
                audit.cond_a_lhs.1,
                audit.delta_est / 8.0
            )));
        }
        let trace = run_algorithm1(obj, &base).map_err(core_err)?;
        let bound = match c.m {
            Some(_) => {
                let delta0 = cfg.delta0.unwrap_or(2.0 * c.big_m);
                let r = certified_bound(&trace, obj, &base, audit.dist_c_boundary, delta0).map_err(core_err)?;
                Some(Bound {
                    eta: r.eta,
                    recursion: r.recursion_bound,
                    tail: r.tail,
                    interval: [r.interval.0, r.interval.1],
                })
            }
            None => None,
        };
        let v = Verification {
            passed: audit.passed,
            delta: audit.delta_est,
            y0: audit.y0,
            dist: audit.dist_c_boundary,
        };
        (trace, v, bound)
    };

    let last = trace
        .last()
        .ok_or_else(|| CliError::Runtime("no iterate was accepted".into()))?;
    let report = Report {
        channel: cfg.channel.name().to_string(),
        algorithm,
        constants: Constants {
            n_poly: c.n_poly,
            rho: c.rho,
            big_m: c.big_m,
            m: c.m,
            k0: c.k0,
        },
        final_iterate: FinalIterate {
            theta: last.theta.clone(),
            f: last.f_value,
            grad_norm: last.grad_norm,
        },
        bound,
        verification,
    };
    Ok(RunOutcome { trace, report })
}

/// `run`: executes the config and writes the trace and report. Without a
/// `report_json` path the report goes to stdout.
pub fn cmd_run(config: &Path, overrides: &[String]) -> Result<(), CliError> {
    let cfg = RunConfig::load(config, overrides)?;
    let out = execute(&cfg)?;
    if let Some(path) = &cfg.trace_csv {
        let file = std::fs::File::create(path)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        write_trace(std::io::BufWriter::new(file), &out.trace)?;
    }
    let json = out.report.to_json();
    match &cfg.report_json {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    let last = out.trace.last().expect("non-empty trace");
    eprintln!(
        "{}: {} iterates, final θ = {:?}, f = {}",
        cfg.channel.name(),
        out.trace.len(),
        last.theta,
        sig9(last.f_value)
    );
    Ok(())
}

/// `bounds`: certified first-order interval beside the second-order (BEC)
/// or first-order (noiseless) Birch lower bound.
pub fn cmd_bounds(channel: ChannelKind, p: Option<f64>, q: Option<f64>) -> Result<String, CliError> {
    type BirchFn = fn(f64, f64) -> fsc_capacity::Result<f64>;
    let (default, birch): ((f64, f64), BirchFn) = match channel {
        ChannelKind::Bec => (BEC_BIRCH_POINT, |p, q| birch_bound_bec(p, q, 0.1)),
        ChannelKind::Noiseless => (NOISELESS_BIRCH_POINT, birch_bound_noiseless),
        other => {
            return Err(CliError::Config(format!("bounds supports bec and noiseless, not {}", other.name())));
        }
    };
    let (p, q) = (p.unwrap_or(default.0), q.unwrap_or(default.1));
    let lower = birch(p, q).map_err(core_err)?;
    let mut cfg = RunConfig::for_channel(channel);
    cfg.force = true;
    let out = execute(&cfg)?;
    let bound = out
        .report
        .bound
        .ok_or_else(|| CliError::Runtime("no certified bound".into()))?;
    let [lo, hi] = bound.interval;

    let mut s = String::new();
    writeln!(s, "channel: {}", channel.name()).unwrap();
    if !out.report.verification.passed {
        writeln!(s, "note: start-up conditions do not hold for the stated constants; interval computed anyway").unwrap();
    }
    writeln!(s, "certified interval (order 1): [{lo:.10}, {hi:.10}]").unwrap();
    let order = if channel == ChannelKind::Bec { 2 } else { 1 };
    writeln!(s, "Birch lower bound (order {order}) at ({p}, {q}): {lower:.10}").unwrap();
    if channel == ChannelKind::Noiseless {
        let cap = perron_log_eigenvalue(&build_forbidden_word_adjacency(&[1, 0, 1]).map_err(core_err)?)
            .map_err(core_err)?;
        writeln!(s, "Shannon capacity: {cap:.10}").unwrap();
    }
    if lower > hi {
        writeln!(s, "order gain demonstrated").unwrap();
    } else {
        writeln!(s, "no order gain: the Birch bound does not exceed the upper end").unwrap();
    }
    Ok(s)
}

fn oracle_source(name: &str, theta: f64) -> Result<HiddenMarkovSource, CliError> {
    let single = |emit: [f64; 2]| {
        HiddenMarkovSource::stationary(
            MarkovChain::from_rows(&[&[1.0]]).expect("static chain"),
            DMatrix::from_row_slice(1, 2, &emit),
        )
    };
    match name {
        "coin" => single([0.5, 0.5]),
        "deterministic" => single([1.0, 0.0]),
        "ge-error" => GilbertElliott::default().error_source(),
        "ge-output" => GilbertElliott::default().output_source(theta),
        "noiseless" => noiseless_output_source(theta),
        "bec" => bec_output_source(&BecRllChannel::default(), theta),
        other => {
            return Err(CliError::Config(format!(
                "unknown source `{other}` (coin, deterministic, ge-error, ge-output, noiseless, bec)"
            )))
        }
    }
    .map_err(core_err)
}

/// `oracle`: forward against brute-force conditional entropy.
pub fn cmd_oracle(source: &str, n: usize, theta: f64) -> Result<String, CliError> {
    if n == 0 || n > BRUTEFORCE_MAX_BLOCK {
        return Err(CliError::Config(format!("n must lie in 1..={BRUTEFORCE_MAX_BLOCK}, got {n}")));
    }
    let src = oracle_source(source, theta)?;
    let fwd = conditional_entropy_forward(&src, n).map_err(core_err)?;
    let brute = conditional_entropy_bruteforce(&src, n).map_err(core_err)?;
    Ok(format!(
        "source: {source}, n = {n}\nforward:     {fwd:.15}\nbrute force: {brute:.15}\ndifference:  {:.3e}\n",
        (fwd - brute).abs()
    ))
}

/// `table`: re-emits a published table as CSV next to the computed values.
pub fn cmd_table(fixture: &str) -> Result<String, CliError> {
    let mut s = String::new();
    match fixture {
        "ge" => {
            let out = execute(&RunConfig::for_channel(ChannelKind::GilbertElliott))?;
            let k0 = out.report.constants.k0;
            writeln!(s, "k,theta,f_value,published_theta,published_f").unwrap();
            for &(k, pt, pf) in &GE_PUBLISHED {
                match out.trace.iter().find(|r| r.outer_k + k0 == k) {
                    Some(r) => writeln!(s, "{k},{},{},{pt},{pf}", sig9(r.theta[0]), sig9(r.f_value)),
                    None => writeln!(s, "{k},,,{pt},{pf}"),
                }
                .unwrap();
            }
        }
        "bec" | "noiseless" => {
            let channel = if fixture == "bec" { ChannelKind::Bec } else { ChannelKind::Noiseless };
            let mut cfg = RunConfig::for_channel(channel);
            cfg.force = true;
            let out = execute(&cfg)?;
            let r = &out.report;
            let k = out.trace.last().map_or(0, |l| l.outer_k);
            let [lo, hi] = r.bound.as_ref().map_or([f64::NAN; 2], |b| b.interval);
            let rows: Vec<(String, f64, f64)> = if channel == ChannelKind::Bec {
                vec![
                    (format!("theta_{k}"), r.final_iterate.theta[0], 0.395485),
                    (format!("f_{k}"), r.final_iterate.f, 0.442239),
                    ("interval_lower".into(), lo, 0.4422382),
                    ("interval_upper".into(), hi, 0.4422398),
                    (
                        "birch_order2".into(),
                        birch_bound_bec(BEC_BIRCH_POINT.0, BEC_BIRCH_POINT.1, 0.1).map_err(core_err)?,
                        0.442329,
                    ),
                ]
            } else {
                vec![
                    (format!("theta_{k}"), r.final_iterate.theta[0], 0.6257911),
                    (format!("f_{k}"), r.final_iterate.f, 0.4292892),
                    ("interval_lower".into(), lo, 0.4291146),
                    ("interval_upper".into(), hi, 0.4294638),
                    (
                        "birch_order1".into(),
                        birch_bound_noiseless(NOISELESS_BIRCH_POINT.0, NOISELESS_BIRCH_POINT.1).map_err(core_err)?,
                        0.513259,
                    ),
                    (
                        "shannon_capacity".into(),
                        perron_log_eigenvalue(&build_forbidden_word_adjacency(&[1, 0, 1]).map_err(core_err)?)
                            .map_err(core_err)?,
                        0.562399,
                    ),
                ]
            };
            writeln!(s, "quantity,computed,published").unwrap();
            for (name, v, p) in rows {
                writeln!(s, "{name},{},{p}", sig9(v)).unwrap();
            }
        }
        other => return Err(CliError::Config(format!("unknown fixture `{other}` (ge, bec, noiseless)"))),
    }
    Ok(s)
}
