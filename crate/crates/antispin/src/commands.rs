use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use antispin_core::encoding::EncodingMode;
use antispin_core::evaluator::{evaluate, fidelity, monte_carlo_evaluate};
use antispin_core::instrument::validate_seed;
use antispin_core::linalg::frobenius_distance;
use antispin_core::povm4::{
    build_discrete_with, literal_tetrahedral_unitaries, pairwise_dots, tetrahedral_group,
    tetrahedral_unitaries, Realization, COMPLETENESS_TARGET,
};
use antispin_core::tradeoff::{
    bound_curve, bound_distance, d_min, disturbance_reduction, information_max, literal_mdm_matrix,
    mdm_point, mdm_seed, theta_max, CurveMethod, INFORMATION_MIN,
};
use antispin_core::{
    ComplexMatrix, Direction, KrausSeed, OptimizerConfig, Provenance, TradeoffPoint,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cli::{Cli, Command};
use crate::curve::{write_comparison, write_curve};
use crate::error::{CliError, Status};
use crate::seedfile::SeedFile;
use crate::solve::{moments, optimizer_curve};

pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;

/// Runs a parsed command. Reports go to `out` (or the `--out` file for
/// report commands), diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, CliError> {
    match &cli.command {
        Command::Validate { path } => with_report(cli, out, |w| validate(cli, path, w)),
        Command::Evaluate { path } => with_report(cli, out, |w| evaluate_file(cli, path, w)),
        Command::Sweep { points } => sweep(cli, *points, out, err),
        Command::Compare { points, restarts } => compare(cli, *points, *restarts, out, err),
        Command::Povm4Check { path, theta, group } => with_report(cli, out, |w| {
            povm4_check(cli, path.as_deref(), *theta, *group, w)
        }),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn with_report(
    cli: &Cli,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<Status, CliError>,
) -> Result<Status, CliError> {
    match &cli.out {
        Some(path) => {
            let mut file = create(path)?;
            let status = body(&mut file)?;
            file.flush()?;
            Ok(status)
        }
        None => body(out),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn rng(cli: &Cli) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cli.seed)
}

fn write_weights(seed: &KrausSeed, w: &mut dyn Write) -> io::Result<()> {
    writeln!(
        w,
        "singlet weight: {:.12} (required 1)",
        seed.singlet_weight()
    )?;
    writeln!(
        w,
        "triplet weight: {:.12} (required 3)",
        seed.triplet_weight()
    )?;
    writeln!(w, "valid: {}", yes_no(seed.is_validated()))
}

/// Conditions broken by the coefficients as originally printed.
fn literal_coefficient_report(w: &mut dyn Write) -> Result<bool, CliError> {
    writeln!(w, "literal coefficients:")?;
    let mut violated = false;
    for k in 0..5 {
        let theta = theta_max() * k as f64 / 4.0;
        let seed = validate_seed(literal_mdm_matrix(theta))?;
        if !seed.is_validated() {
            violated = true;
        }
        writeln!(
            w,
            "  family at theta {theta:.6}: singlet {:.6}, triplet {:.6} (required 1, 3): {}",
            seed.singlet_weight(),
            seed.triplet_weight(),
            if seed.is_validated() {
                "ok"
            } else {
                "violated"
            }
        )?;
    }
    let u1 = &literal_tetrahedral_unitaries()[1];
    let gram = &u1.adjoint() * u1;
    let deviation = frobenius_distance(&gram, &ComplexMatrix::identity(2))?;
    let unitary = u1.is_unitary(1e-12);
    violated |= !unitary;
    writeln!(
        w,
        "  U1 unitarity: |U1^dag U1 - I| = {deviation:.6} (U1^dag U1 = {:.6} I): {}",
        gram[(0, 0)].re,
        if unitary { "ok" } else { "violated" }
    )?;
    Ok(violated)
}

fn load_seed(path: &Path) -> Result<(SeedFile, KrausSeed), CliError> {
    let file = SeedFile::load(path)?;
    let seed = validate_seed(file.to_matrix()?)?;
    Ok((file, seed))
}

fn validate(cli: &Cli, path: &Path, w: &mut dyn Write) -> Result<Status, CliError> {
    let (file, seed) = load_seed(path)?;
    if let Some(label) = &file.label {
        writeln!(w, "label: {label}")?;
    }
    write_weights(&seed, w)?;
    if cli.paper_coefficients {
        literal_coefficient_report(w)?;
    }
    Ok(if seed.is_validated() {
        Status::Success
    } else {
        Status::DomainFailure
    })
}

fn evaluate_file(cli: &Cli, path: &Path, w: &mut dyn Write) -> Result<Status, CliError> {
    let (file, seed) = load_seed(path)?;
    if let Some(label) = &file.label {
        writeln!(w, "label: {label}")?;
    }
    if cli.paper_coefficients {
        literal_coefficient_report(w)?;
    }
    if !seed.is_validated() {
        write_weights(&seed, w)?;
        writeln!(w, "seed violates the trace conditions; nothing to evaluate")?;
        return Ok(Status::DomainFailure);
    }
    let mode = EncodingMode::from(cli.mode);
    let m = moments(mode);
    let p = evaluate(&seed, m)?;
    writeln!(w, "mode: {mode}")?;
    writeln!(w, "information: {:.12}", p.information)?;
    writeln!(w, "disturbance: {:.12}", p.disturbance)?;
    writeln!(w, "fidelity: {:.12}", fidelity(&seed, m)?)?;
    if mode == EncodingMode::Antiparallel && p.information >= INFORMATION_MIN {
        let floor = d_min(p.information.min(information_max()))?;
        writeln!(w, "bound at this information: {floor:.12}")?;
    }
    if let Some(samples) = cli.mc_samples {
        let povm = build_discrete_with(&seed, Realization::TetrahedralGroup)?;
        let mc = monte_carlo_evaluate(&povm.instrument(), mode, &mut rng(cli), samples)?;
        writeln!(
            w,
            "monte carlo samples: {samples} (12-outcome tetrahedral realization)"
        )?;
        writeln!(
            w,
            "monte carlo information: {:.6} +/- {:.6}",
            mc.information, mc.information_std_error
        )?;
        writeln!(
            w,
            "monte carlo disturbance: {:.6} +/- {:.6}",
            mc.disturbance, mc.disturbance_std_error
        )?;
        writeln!(
            w,
            "agrees within 3 sigma: {}",
            yes_no(mc.agrees_with(p.information, p.disturbance, 3.0))
        )?;
    }
    Ok(Status::Success)
}

fn sweep(
    cli: &Cli,
    points: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Status, CliError> {
    if cli.paper_coefficients {
        let violated = literal_coefficient_report(err)?;
        writeln!(
            err,
            "no curve written: the literal family is not trace preserving"
        )?;
        return Ok(if violated {
            Status::DomainFailure
        } else {
            Status::Success
        });
    }
    let mode = EncodingMode::from(cli.mode);
    let m = moments(mode);
    let mut rows = Vec::with_capacity(2 * points);
    let (mut discrepancy, mut distance): (f64, f64) = (0.0, 0.0);
    for k in 0..points {
        let theta = theta_max() * k as f64 / (points - 1) as f64;
        let mut p = evaluate(&mdm_seed(theta)?, m)?;
        p.provenance = Provenance::TraceFormula;
        rows.push(p);
        if mode == EncodingMode::Antiparallel {
            let exact = mdm_point(theta)?;
            discrepancy = discrepancy
                .max((p.information - exact.information).abs())
                .max((p.disturbance - exact.disturbance).abs());
            distance = distance.max(bound_distance(p.information, p.disturbance));
            rows.push(exact);
        }
    }
    match &cli.out {
        Some(path) => write_curve(create(path)?, &rows)?,
        None => write_curve(&mut *out, &rows)?,
    }
    if mode == EncodingMode::Antiparallel {
        writeln!(err, "max |evaluated - analytic|: {discrepancy:.3e}")?;
        writeln!(err, "max distance from the bound curve: {distance:.3e}")?;
    } else {
        writeln!(err, "no closed form for {mode} spins; evaluated rows only")?;
    }
    Ok(Status::Success)
}

/// Relative disturbance saved by antiparallel spins along a parallel curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Interleaved antiparallel bound rows and parallel optimizer rows.
    pub rows: Vec<(TradeoffPoint, Option<f64>)>,
    pub parallel: Vec<TradeoffPoint>,
    pub parallel_range: (f64, f64),
    pub converged: bool,
}

impl Comparison {
    /// `(information, D_par, D_anti, ratio)` for every parallel point.
    pub fn pairs(&self) -> Vec<(f64, f64, f64, Option<f64>)> {
        self.parallel
            .iter()
            .map(|p| {
                let i = p.information.clamp(INFORMATION_MIN, information_max());
                let anti = d_min(i).expect("clamped into the domain");
                (
                    p.information,
                    p.disturbance,
                    anti,
                    disturbance_reduction(p.disturbance, anti),
                )
            })
            .collect()
    }

    /// The parallel point closest to information `3/4`.
    pub fn at_three_quarters(&self) -> (f64, f64, f64, Option<f64>) {
        self.pairs()
            .into_iter()
            .min_by(|a, b| (a.0 - 0.75).abs().total_cmp(&(b.0 - 0.75).abs()))
            .expect("at least three points")
    }
}

pub fn comparison(points: usize, restarts: usize, seed: u64) -> Result<Comparison, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = OptimizerConfig {
        restarts,
        ..OptimizerConfig::default()
    };
    let anti = bound_curve(
        EncodingMode::Antiparallel,
        points,
        CurveMethod::Analytic,
        &mut rng,
    )?;
    let (par, _) = optimizer_curve(EncodingMode::Parallel, points, &mut rng, &config)?;
    let mut out = Comparison {
        rows: anti.points.iter().map(|&p| (p, None)).collect(),
        parallel: par.points.clone(),
        parallel_range: par.domain,
        converged: par.converged,
    };
    for (p, (_, _, _, ratio)) in par.points.iter().zip(out.pairs()) {
        out.rows.push((*p, ratio));
    }
    Ok(out)
}

fn compare(
    cli: &Cli,
    points: usize,
    restarts: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Status, CliError> {
    let c = comparison(points, restarts, cli.seed)?;
    match &cli.out {
        Some(path) => write_comparison(create(path)?, &c.rows)?,
        None => write_comparison(&mut *out, &c.rows)?,
    }
    let pairs = c.pairs();
    let ratios: Vec<f64> = pairs.iter().filter_map(|p| p.3).collect();
    let ordered = pairs.iter().all(|&(_, par, anti, _)| par >= anti - 1e-6);
    let monotonic = ratios.windows(2).all(|w| w[1] >= w[0] - 0.02 * w[0].abs());
    writeln!(
        err,
        "parallel information range: [{:.9}, {:.9}]",
        c.parallel_range.0, c.parallel_range.1
    )?;
    let (i, par, anti, ratio) = c.at_three_quarters();
    writeln!(
        err,
        "at information {i:.9}: parallel {par:.6}, antiparallel {anti:.6}, ratio {} (sqrt(2/3) = {:.6})",
        ratio.map_or("undefined".into(), |r| format!("{r:.6}")),
        (2.0f64 / 3.0).sqrt()
    )?;
    if let (Some(lo), Some(hi)) = (
        ratios.iter().copied().reduce(f64::min),
        ratios.iter().copied().reduce(f64::max),
    ) {
        writeln!(
            err,
            "ratio range: [{lo:.6}, {hi:.6}], nondecreasing: {}",
            yes_no(monotonic)
        )?;
    }
    writeln!(
        err,
        "parallel above antiparallel at every point: {}",
        yes_no(ordered)
    )?;
    if !c.converged {
        writeln!(
            err,
            "warning: some optimizer targets were not reached; output is partial"
        )?;
        return Ok(Status::ConvergenceWarning);
    }
    Ok(if ordered {
        Status::Success
    } else {
        Status::DomainFailure
    })
}

fn povm4_check(
    cli: &Cli,
    path: Option<&Path>,
    theta: f64,
    group: bool,
    w: &mut dyn Write,
) -> Result<Status, CliError> {
    let mut ok = true;
    let unitaries: Vec<ComplexMatrix> = if group {
        tetrahedral_group().into()
    } else if cli.paper_coefficients {
        literal_tetrahedral_unitaries().into()
    } else {
        tetrahedral_unitaries().into()
    };
    for (i, u) in unitaries.iter().enumerate() {
        let dev = frobenius_distance(&(&u.adjoint() * u), &ComplexMatrix::identity(2))?;
        let unitary = u.is_unitary(1e-12);
        ok &= unitary;
        writeln!(
            w,
            "U{i}: |U^dag U - I| = {dev:.3e}, unitary: {}",
            yes_no(unitary)
        )?;
    }
    if !ok {
        writeln!(w, "not all operators are unitary; realization not built")?;
        return Ok(Status::DomainFailure);
    }
    if !group {
        let dirs = unitaries
            .iter()
            .map(|u| Direction::from_state(&u.column(0)))
            .collect::<antispin_core::Result<Vec<_>>>()?;
        let dots = pairwise_dots(&dirs);
        let worst = dots
            .iter()
            .map(|d| (d + 1.0 / 3.0).abs())
            .fold(0.0, f64::max);
        writeln!(w, "max |pairwise Bloch dot + 1/3|: {worst:.3e}")?;
        ok &= worst < 1e-12;
    }

    let seed = match path {
        Some(p) => load_seed(p)?.1,
        None if cli.paper_coefficients => {
            let theta = theta.clamp(0.0, theta_max());
            validate_seed(literal_mdm_matrix(theta))?
        }
        None => mdm_seed(theta)?,
    };
    if !seed.is_validated() {
        write_weights(&seed, w)?;
        writeln!(
            w,
            "seed violates the trace conditions; realization not built"
        )?;
        return Ok(Status::DomainFailure);
    }
    let realization = if group {
        Realization::TetrahedralGroup
    } else {
        Realization::Tetrahedral4
    };
    let povm = match build_discrete_with(&seed, realization) {
        Ok(p) => p,
        Err(antispin_core::Error::NotComplete(r)) => {
            writeln!(
                w,
                "completeness residual: {r:.3e}; not a complete measurement"
            )?;
            writeln!(w, "the twelve-element group (--group) works for every seed")?;
            return Ok(Status::DomainFailure);
        }
        Err(e) => return Err(e.into()),
    };
    writeln!(w, "outcomes: {}", povm.kraus().len())?;
    writeln!(
        w,
        "completeness residual: {:.3e}",
        povm.completeness_residual()
    )?;
    ok &= povm.completeness_residual() <= COMPLETENESS_TARGET;

    let mode = EncodingMode::from(cli.mode);
    let exact = evaluate(&seed, moments(mode))?;
    let samples = cli.mc_samples.unwrap_or(DEFAULT_MC_SAMPLES);
    let mc = monte_carlo_evaluate(&povm.instrument(), mode, &mut rng(cli), samples)?;
    writeln!(w, "mode: {mode}")?;
    writeln!(
        w,
        "trace formula: information {:.9}, disturbance {:.9}",
        exact.information, exact.disturbance
    )?;
    writeln!(
        w,
        "monte carlo ({samples} samples): information {:.6} +/- {:.6}, disturbance {:.6} +/- {:.6}",
        mc.information, mc.information_std_error, mc.disturbance, mc.disturbance_std_error
    )?;
    let agree = mc.agrees_with(exact.information, exact.disturbance, 3.0);
    writeln!(w, "agrees within 3 sigma: {}", yes_no(agree))?;
    ok &= agree;
    Ok(if ok {
        Status::Success
    } else {
        Status::DomainFailure
    })
}
