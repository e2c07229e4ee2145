//! One function per subcommand, each returning its report.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::time::Instant;

use rayon::prelude::*;
use spacings_core::asymptotics::{
    closed_form_moments, holst_vs_corrected, mean_correction, null_moments, per_term_moments,
    standardize,
};
use spacings_core::montecarlo::{
    estimate_sigma_m, mean_estimate, replicate_statistic, replication_z, summarize, McConfig,
    SeededStream, WindowFunction,
};
use spacings_core::specfun::digamma_int;
use spacings_core::statistics::evaluate;
use spacings_core::{CircularSample, Error, NamedStatistic, StatisticKind, SumFunction, Variant};

use crate::args::{
    Builtin, Function, MeancheckArgs, ParallelArgs, SeedArgs, SigmaArgs, SimulateArgs, TestArgs,
};
use crate::error::CliError;
use crate::input::read_observations;
use crate::report::*;

/// Stream id for the leading-term estimate of custom functions; kept far
/// from the replication ids `0..R`.
const LEADING_TERM_STREAM: u64 = 1 << 63;

fn document(command: &str, params: Params, result: ReportResult, warnings: Vec<String>, started: Option<Instant>) -> ReportDocument {
    ReportDocument {
        schema_version: SCHEMA_VERSION.into(),
        command: command.into(),
        params,
        result,
        warnings,
        elapsed_ms: started.map(|t| t.elapsed().as_secs_f64() * 1e3),
    }
}

fn scheme_name(variant: Variant, m: usize) -> &'static str {
    match variant {
        Variant::Z => "tuples",
        Variant::Q => "disjoint",
        _ if m == 1 => "simple",
        _ => "overlapping",
    }
}

impl SeedArgs {
    pub fn resolve(&self) -> Result<u64, CliError> {
        match (self.seed, self.seed_from_entropy) {
            (Some(seed), _) => Ok(seed),
            (None, true) => {
                use std::hash::{BuildHasher, Hasher};
                let mut h = std::collections::hash_map::RandomState::new().build_hasher();
                h.write_u128(std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_nanos()));
                Ok(h.finish())
            }
            (None, false) => Err(CliError::Config(
                "a seed is required: pass --seed N or, explicitly, --seed-from-entropy".into(),
            )),
        }
    }
}

impl ParallelArgs {
    /// Runs `f` on a pool of the requested size, or on the global pool.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        match self.threads {
            None => Ok(f()),
            Some(0) => Err(CliError::Config("--threads must be at least 1".into())),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(|pool| pool.install(f))
                .map_err(|e| CliError::Config(e.to_string())),
        }
    }
}

pub fn cmd_test(args: &TestArgs, stdin: &mut dyn BufRead) -> Result<ReportDocument, CliError> {
    let started = args.output.timing.then(Instant::now);
    let source = args.data_path.to_string_lossy().into_owned();
    let observations = if source == "-" {
        read_observations(stdin)?
    } else {
        let file = File::open(&args.data_path)
            .map_err(|e| CliError::Input(format!("cannot open {source}: {e}")))?;
        read_observations(BufReader::new(file))?
    };
    let named: NamedStatistic = args.statistic.into();
    let variant: Variant = args.variant.into();
    let sample = CircularSample::from_unit_observations(&observations)?;
    let n = sample.arc_count();
    let moments = null_moments(named, variant, n, args.m)?;
    let result = evaluate(&sample, args.m, named.into(), variant)?;
    let report = standardize(&result, &moments)?;
    let params = TestParams {
        data: source,
        n,
        m: args.m,
        statistic: named.name().into(),
        variant: variant.name().into(),
        scheme: scheme_name(variant, args.m).into(),
    };
    Ok(document(
        "test",
        Params::Test(params),
        ReportResult::Test(TestResult::new(&report, result.summand_count)),
        Vec::new(),
        started,
    ))
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<ReportDocument, CliError> {
    let started = args.output.timing.then(Instant::now);
    let seed = args.seed.resolve()?;
    let named: NamedStatistic = args.statistic.into();
    let variant: Variant = args.variant.into();
    let config = McConfig::new(args.n, args.m, named.into(), args.reps, seed).with_variant(variant);
    config.validate()?;
    let moments = config.null_moments()?;
    let z = args.parallel.install(|| {
        (0..config.replications)
            .into_par_iter()
            .map(|r| replication_z(&config, &moments, r))
            .collect::<Result<Vec<f64>, Error>>()
    })??;
    let summary = summarize(&z, seed);
    let params = SimulateParams {
        n: args.n,
        m: args.m,
        statistic: named.name().into(),
        variant: variant.name().into(),
        scheme: scheme_name(variant, args.m).into(),
        reps: args.reps,
        seed,
    };
    Ok(document(
        "simulate",
        Params::Simulate(params),
        ReportResult::Simulate(SimulateResult::new(&summary, moments.mean, moments.variance)),
        Vec::new(),
        started,
    ))
}

fn sum_function(function: &Function) -> &dyn SumFunction {
    match function {
        Function::Named(s) => s,
        Function::Custom(b) => b,
    }
}

pub fn cmd_sigma(args: &SigmaArgs) -> Result<ReportDocument, CliError> {
    let started = args.output.timing.then(Instant::now);
    let seed = args.seed.resolve()?;
    let function = args.function.function();
    let h = WindowFunction::Sum(sum_function(&function));
    let sigma2 = estimate_sigma_m(h, args.m, args.draws, seed)?;
    let holst = if args.compare_holst { Some(holst_vs_corrected(h, args.m, args.draws, seed)?.into()) } else { None };
    let closed_form = function.named().map(|s| per_term_moments(s, args.m).variance);
    let mut warnings = Vec::new();
    if let Some(exact) = closed_form {
        let gap = (sigma2.value - exact).abs();
        if gap > (3.0 * sigma2.se).max(0.02 * exact.abs()) {
            warnings.push(format!(
                "estimate {} differs from the closed form {} by {} standard errors",
                significant(sigma2.value, 6),
                significant(exact, 6),
                significant(gap / sigma2.se, 3)
            ));
        }
    }
    let params = SigmaParams {
        statistic: function.name().into(),
        m: args.m,
        draws: args.draws,
        seed,
        compare_holst: args.compare_holst,
    };
    Ok(document(
        "sigma",
        Params::Sigma(params),
        ReportResult::Sigma(SigmaResult { sigma2: sigma2.into(), closed_form, holst }),
        warnings,
        started,
    ))
}

/// Exact `E V_{n,1} − n E h(X_0)` from the Beta(1, n − 1) law of one spacing.
pub fn exact_order_one_correction(named: NamedStatistic, n: usize) -> f64 {
    let nf = n as f64;
    let psi = |k: usize| digamma_int(k as u64).expect("n >= 2");
    match named {
        NamedStatistic::Greenwood => -2.0 * nf / (nf + 1.0),
        NamedStatistic::Moran => nf * (nf.ln() - psi(n)),
        NamedStatistic::Entropy => nf * (nf.ln() - psi(n + 1)),
    }
}

/// `n·E h(|X^m|)` by simple Monte Carlo for functions without a closed form.
fn leading_term_mc(h: &dyn SumFunction, n: usize, m: usize, draws: usize, seed: u64) -> Result<Estimate, CliError> {
    let mut stream = SeededStream::new(seed, LEADING_TERM_STREAM);
    let values = (0..draws)
        .map(|draw| {
            let total: f64 = (0..m).map(|_| stream.exponential()).sum();
            h.eval(total).ok_or(Error::NonFiniteSample { draw })
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let e = mean_estimate(&values);
    let nf = n as f64;
    Ok(Estimate { value: nf * e.value, se: if e.se.is_finite() { nf * e.se } else { 0.0 } })
}

use spacings_core::Estimate;

pub fn cmd_meancheck(args: &MeancheckArgs) -> Result<ReportDocument, CliError> {
    let started = args.output.timing.then(Instant::now);
    let seed = args.seed.resolve()?;
    let function = args.function.function();
    let h = sum_function(&function);
    let kind: StatisticKind<'_> = match function {
        Function::Named(s) => s.into(),
        Function::Custom(_) => StatisticKind::CustomSum(h),
    };
    let config = McConfig::new(args.n, args.m, kind, args.reps, seed);
    config.validate()?;

    let leading = match function.named() {
        Some(s) => Estimate { value: closed_form_moments(s.into(), args.n, args.m)?.mean, se: 0.0 },
        None => leading_term_mc(h, args.n, args.m, args.draws, seed)?,
    };
    let formula = mean_correction(WindowFunction::Sum(h), args.m, args.draws, seed)?;
    let values = args.parallel.install(|| {
        (0..config.replications)
            .into_par_iter()
            .map(|r| replicate_statistic(&config, r).map(|s| s.value))
            .collect::<Result<Vec<f64>, Error>>()
    })??;
    let simulated = mean_estimate(&values);
    let correction = Estimate {
        value: simulated.value - leading.value,
        se: simulated.se.hypot(leading.se),
    };
    let exact = match (function, args.m) {
        (Function::Named(s), 1) => Some(exact_order_one_correction(s, args.n)),
        (Function::Custom(Builtin::Zero), _) => Some(0.0),
        _ => None,
    };

    let combined_se = correction.se.hypot(formula.se);
    let gap = (formula.value - correction.value).abs();
    let discrepancy = if gap == 0.0 { 0.0 } else { gap / combined_se };
    let mut warnings = Vec::new();
    if discrepancy > 3.0 {
        warnings.push(format!(
            "first-order mean correction {} disagrees with the simulated correction {} ± {} ({} standard errors)",
            significant(formula.value, 6),
            significant(correction.value, 6),
            significant(correction.se, 3),
            significant(discrepancy, 3)
        ));
    }
    if let Some(exact) = exact {
        if (correction.value - exact).abs() > 3.0 * correction.se {
            warnings.push(format!(
                "simulated correction {} ± {} is more than 3 standard errors from the exact value {}",
                significant(correction.value, 6),
                significant(correction.se, 3),
                significant(exact, 6)
            ));
        }
    }
    let params = MeancheckParams {
        statistic: function.name().into(),
        n: args.n,
        m: args.m,
        reps: args.reps,
        draws: args.draws,
        seed,
    };
    Ok(document(
        "meancheck",
        Params::Meancheck(params),
        ReportResult::Meancheck(MeancheckResult {
            leading_term: leading.into(),
            formula_correction: formula.into(),
            simulated_mean: simulated.into(),
            simulated_correction: correction.into(),
            exact_correction: exact,
            formula_discrepancy_se: discrepancy,
        }),
        warnings,
        started,
    ))
}
