use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ghostfield::bell::BellConfig;
use ghostfield::local::{single_malus_expectation, MIN_MC_SAMPLES};
use ghostfield::sampling::derive_seed;
use ghostfield::{
    bell_sum, build_quadrature, conditional_from_state, correlation_from_matrix, empirical_correlation,
    generate_sequences_with, joint_expectation, malus_correlation_closed, malus_correlation_quadrature,
    naive_field, quasi_field, signed_mc_correlation_with, singlet_conditional, trine_config, BellReport,
    CorrelationModel, Direction, ExactQuantum, FixedMatrix, GhostError, LocalGhost, LocalGhostMonteCarlo,
    LocalGhostQuadrature, McPlan, NonlocalEmpirical, NonlocalGhost, SignedSphereDistribution, TwoSpinState,
};

use crate::args::{BellModel, Command, Format, LocalModel, McArgs, OutputArgs, PairArgs, QuadArgs};
use crate::output::{Cell, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(GhostError),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numeric(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<GhostError> for CliError {
    fn from(e: GhostError) -> Self {
        match e {
            GhostError::TooFewSamples { .. }
            | GhostError::NoWorkers
            | GhostError::QuadratureOrder { .. }
            | GhostError::InvalidConfig(_)
            | GhostError::NonFiniteAngle
            | GhostError::DegenerateDirection
            | GhostError::NonUnitDirection { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

const COUNTEREXAMPLE_NOTE: &str = "counterexample-5-12: E = 5/12 - 7/12 = -1/6 for every pair; \
the same matrix is sometimes quoted as -(1/3) cos 120 deg, which is +1/6, and the sign here follows from the matrix";

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Exact { pair, output } => {
            let p = resolve_pair(&pair)?;
            let ab = p.a.dot(&p.b);
            let t = Table::record(vec![
                ("alpha_deg", p.alpha_deg.into()),
                ("a_dot_b", ab.into()),
                ("E_quantum", joint_expectation(&TwoSpinState::singlet(), &p.a, &p.b).into()),
            ]);
            emit(&t, &output, Format::Table)
        }
        Command::Local { pair, model, mc, quad, output } => {
            let p = resolve_pair(&pair)?;
            let plan = plan(&mc)?;
            let (dist, name): (SignedSphereDistribution, &str) = match model {
                LocalModel::NaiveLocal => (naive_field(), "naive-local"),
                LocalModel::QuasiLocal => (quasi_field(), "quasi-local"),
            };
            let q = build_quadrature(quad.quad_theta, quad.quad_phi)?;
            let est = signed_mc_correlation_with(&dist, &p.a, &p.b, &plan)?;
            let t = Table::record(vec![
                ("model", name.into()),
                ("alpha_deg", p.alpha_deg.into()),
                ("E_closed", malus_correlation_closed(&dist, &p.a, &p.b).into()),
                ("E_quadrature", malus_correlation_quadrature(&dist, &p.a, &p.b, &q).into()),
                ("E_mc", est.mean.into()),
                ("mc_stderr", est.stderr.into()),
                ("n_samples", est.n_samples.into()),
                ("seed", est.seed.into()),
                ("E_single", single_malus_expectation(&dist, &p.a).into()),
                ("marginal_density", ghostfield::marginal_density(&dist).into()),
                ("off_atom_density", dist.off_atom_density().into()),
                ("E_quantum", joint_expectation(&TwoSpinState::singlet(), &p.a, &p.b).into()),
            ]);
            emit(&t, &output, Format::Table)
        }
        Command::Nonlocal { pair, mc, output } => {
            let p = resolve_pair(&pair)?;
            let plan = plan(&mc)?;
            let singlet = TwoSpinState::singlet();
            let q = conditional_from_state(&singlet, &p.a, &p.b)?;
            let seqs = generate_sequences_with(&q, &plan)?;
            let est = empirical_correlation::<f64>(&seqs);
            let [[pp, pm], [mp, mm]] = q.entries();
            let t = Table::record(vec![
                ("alpha_deg", p.alpha_deg.into()),
                ("q_pp", pp.into()),
                ("q_pm", pm.into()),
                ("q_mp", mp.into()),
                ("q_mm", mm.into()),
                ("marginal_b", ghostfield::marginal_outcome::<f64>().into()),
                ("E_matrix", correlation_from_matrix(&q).into()),
                ("E_quantum", joint_expectation(&singlet, &p.a, &p.b).into()),
                ("E_empirical", est.mean.into()),
                ("empirical_stderr", est.stderr.into()),
                ("same_fraction", seqs.same_outcome_fraction().into()),
                ("n_samples", est.n_samples.into()),
                ("seed", est.seed.into()),
            ]);
            emit(&t, &output, Format::Table)
        }
        Command::Bell { model, directions, mc, quad, output } => {
            let config = match directions {
                None => trine_config(),
                Some(s) => {
                    let [a, b, c] = parse_directions::<3>(&s)?;
                    BellConfig::new(a, b, c)?
                }
            };
            let report = bell(model, &config, &mc, &quad)?;
            match output.format.unwrap_or(Format::Json) {
                Format::Json => with_output(&output.out, |w| {
                    serde_json::to_writer_pretty(&mut *w, &report).map_err(io::Error::from)?;
                    writeln!(w)
                }),
                f => {
                    let t = bell_table(&report, model);
                    emit(&t, &output, f)
                }
            }
        }
        Command::Sweep { from, to, step, mc, mc_args, output } => {
            let plan = if mc { Some(plan(&mc_args)?) } else { None };
            let t = sweep(from, to, step, plan.as_ref())?;
            emit(&t, &output, Format::Csv)
        }
        Command::Sequences { alpha, samples, seed, workers, out } => {
            let q = singlet_conditional(finite_angle(alpha)?.to_radians())?;
            if workers == 0 {
                return Err(GhostError::NoWorkers.into());
            }
            if samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let seqs = generate_sequences_with(&q, &McPlan::new(samples, seed).with_workers(workers))?;
            let est = empirical_correlation::<f64>(&seqs);
            with_output(&out, |w| {
                seqs.write_csv(&mut *w)?;
                writeln!(
                    w,
                    "# alpha_deg={alpha},n={},seed={seed},workers={workers},correlation={},stderr={},same_fraction={}",
                    seqs.len(),
                    est.mean,
                    est.stderr,
                    seqs.same_outcome_fraction()
                )
            })
        }
    }
}

struct Pair {
    a: Direction,
    b: Direction,
    alpha_deg: f64,
}

fn finite_angle(deg: f64) -> CliResult<f64> {
    if deg.is_finite() {
        Ok(deg)
    } else {
        Err(CliError::Usage(format!("angle must be finite, got {deg}")))
    }
}

fn resolve_pair(args: &PairArgs) -> CliResult<Pair> {
    match (&args.alpha, &args.directions) {
        (Some(alpha), None) => {
            let alpha = finite_angle(*alpha)?;
            Ok(Pair { a: Direction::unit_z(), b: Direction::in_xz_plane(alpha.to_radians()), alpha_deg: alpha })
        }
        (None, Some(s)) => {
            let [a, b] = parse_directions::<2>(s)?;
            Ok(Pair { a, b, alpha_deg: a.angle_to(&b).to_degrees() })
        }
        _ => Err(CliError::Usage("give either --alpha or --directions".into())),
    }
}

/// Parses `"x,y,z;x,y,z;..."` into exactly `N` normalized directions.
pub fn parse_directions<const N: usize>(s: &str) -> CliResult<[Direction; N]> {
    let parts: Vec<&str> = s.split(';').map(str::trim).collect();
    if parts.len() != N {
        return Err(CliError::Usage(format!("expected {N} directions separated by ';', got {}", parts.len())));
    }
    let mut dirs = Vec::with_capacity(N);
    for p in parts {
        let comps: Vec<f64> = p
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("bad direction '{p}': {e}")))?;
        let [x, y, z] = comps[..] else {
            return Err(CliError::Usage(format!("direction '{p}' needs three components")));
        };
        dirs.push(Direction::normalized(x, y, z).map_err(|e| CliError::Usage(format!("direction '{p}': {e}")))?);
    }
    Ok(dirs.try_into().expect("length checked above"))
}

fn plan(mc: &McArgs) -> CliResult<McPlan> {
    if mc.samples < MIN_MC_SAMPLES {
        return Err(GhostError::TooFewSamples { requested: mc.samples, minimum: MIN_MC_SAMPLES }.into());
    }
    if mc.workers == 0 {
        return Err(GhostError::NoWorkers.into());
    }
    Ok(McPlan::new(mc.samples, mc.seed).with_workers(mc.workers))
}

fn bell(model: BellModel, config: &BellConfig<f64>, mc: &McArgs, quad: &QuadArgs) -> CliResult<BellReport> {
    let sampled = if model.is_sampled() { Some(plan(mc)?) } else { None };
    let m: Box<dyn CorrelationModel<f64>> = match model {
        BellModel::Quantum => Box::new(ExactQuantum::singlet()),
        BellModel::NaiveLocal => Box::new(LocalGhost::naive()),
        BellModel::QuasiLocal => Box::new(LocalGhost::quasi()),
        BellModel::QuasiLocalQuad => Box::new(LocalGhostQuadrature {
            dist: quasi_field(),
            quad: build_quadrature(quad.quad_theta, quad.quad_phi)?,
            label: "quasi-local-quad".into(),
        }),
        BellModel::NaiveLocalMc => Box::new(LocalGhostMonteCarlo {
            dist: naive_field(),
            plan: sampled.expect("sampled model"),
            label: "naive-local-mc".into(),
        }),
        BellModel::QuasiLocalMc => Box::new(LocalGhostMonteCarlo {
            dist: quasi_field(),
            plan: sampled.expect("sampled model"),
            label: "quasi-local-mc".into(),
        }),
        BellModel::Nonlocal => Box::new(NonlocalGhost::singlet()),
        BellModel::NonlocalEmpirical => Box::new(NonlocalEmpirical {
            state: TwoSpinState::singlet(),
            plan: sampled.expect("sampled model"),
        }),
        BellModel::Counterexample512 => Box::new(FixedMatrix::counterexample_5_12()),
    };
    Ok(bell_sum(m.as_ref(), config)?)
}

fn bell_table(r: &BellReport, model: BellModel) -> Table {
    let mut fields: Vec<(&str, Cell)> = vec![
        ("model_name", r.model_name.clone().into()),
        ("e_ab", r.e_ab.into()),
        ("e_ac", r.e_ac.into()),
        ("e_bc", r.e_bc.into()),
        ("s", r.s.into()),
        ("bound", r.bound.into()),
        ("violated", r.violated.into()),
    ];
    if let Some(se) = r.s_stderr {
        fields.push(("s_stderr", se.into()));
    }
    let fmt = |d: &Direction| format!("[{}, {}, {}]", d.x(), d.y(), d.z());
    let mut t = Table::record(fields)
        .comment(format!("a = {}", fmt(&r.config.a)))
        .comment(format!("b = {}", fmt(&r.config.b)))
        .comment(format!("c = {}", fmt(&r.config.c)));
    if model == BellModel::Counterexample512 {
        t = t.comment(COUNTEREXAMPLE_NOTE);
    }
    t
}

/// Angle grid `from, from + step, …` up to `to` (inclusive within rounding).
fn grid(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(CliError::Usage("grid bounds and step must be finite".into()));
    }
    if step <= 0.0 {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    if to < from {
        return Err(CliError::Usage("empty grid: --to is below --from".into()));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| from + i as f64 * step).collect())
}

fn sweep(from: f64, to: f64, step: f64, mc: Option<&McPlan>) -> CliResult<Table> {
    let mut cols = vec!["alpha_deg", "E_quantum", "E_naive_local", "E_quasi_local", "E_nonlocal_matrix"];
    if mc.is_some() {
        cols.extend(["E_mc", "mc_stderr"]);
    }
    let mut t = Table::new(&cols);
    let singlet = TwoSpinState::singlet();
    let a = Direction::unit_z();
    for (i, alpha) in grid(from, to, step)?.into_iter().enumerate() {
        let b = Direction::in_xz_plane(alpha.to_radians());
        let mut row: Vec<Cell> = vec![
            alpha.into(),
            joint_expectation(&singlet, &a, &b).into(),
            malus_correlation_closed(&naive_field(), &a, &b).into(),
            malus_correlation_closed(&quasi_field(), &a, &b).into(),
            correlation_from_matrix(&singlet_conditional(alpha.to_radians())?).into(),
        ];
        if let Some(plan) = mc {
            let p = McPlan { seed: derive_seed(plan.seed, i as u64), ..*plan };
            let est = signed_mc_correlation_with(&quasi_field(), &a, &b, &p)?;
            row.extend([est.mean.into(), est.stderr.into()]);
        }
        t.push(row);
    }
    if let Some(plan) = mc {
        t = t.comment(format!(
            "E_mc: quasi-local signed Monte Carlo, n={} per row, seed={}, workers={}",
            plan.samples, plan.seed, plan.workers
        ));
    }
    Ok(t)
}

fn emit(t: &Table, output: &OutputArgs, default: Format) -> CliResult<()> {
    let format = output.format.unwrap_or(default);
    with_output(&output.out, |w| t.write(format, w))
}

fn with_output<F>(out: &Option<impl AsRef<Path>>, f: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_parsing() {
        let [a, b] = parse_directions::<2>("0,0,2; 1,0,0").unwrap();
        assert_eq!(a, Direction::unit_z());
        assert_eq!(b, Direction::unit_x());
        assert!(matches!(parse_directions::<2>("0,0,1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_directions::<2>("0,0,1;0,0"), Err(CliError::Usage(_))));
        assert!(matches!(parse_directions::<2>("0,0,1;0,0,0"), Err(CliError::Usage(_))));
        assert!(matches!(parse_directions::<2>("0,0,1;a,b,c"), Err(CliError::Usage(_))));
    }

    #[test]
    fn grid_points() {
        assert_eq!(grid(0.0, 180.0, 60.0).unwrap(), vec![0.0, 60.0, 120.0, 180.0]);
        assert_eq!(grid(0.0, 0.3, 0.1).unwrap().len(), 4);
        assert_eq!(grid(5.0, 5.0, 1.0).unwrap(), vec![5.0]);
        assert!(grid(10.0, 0.0, 1.0).is_err());
        assert!(grid(0.0, 10.0, 0.0).is_err());
    }

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(GhostError::TooFewSamples { requested: 1, minimum: 1000 }).exit_code(), 2);
        assert_eq!(CliError::from(GhostError::ZeroMarginal).exit_code(), 1);
    }
}
