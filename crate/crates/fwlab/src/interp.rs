//! Evaluates declarations and runs queries against the core library.

use std::collections::HashMap;
use std::fmt::Debug;

use fwlab_core::frameworks::{
    are_compatible, born_distribution, common_refinement, event_probability, max_commutator_norm,
    Event, FrameworkError, QuantumState,
};
use fwlab_core::histories::{HistoryError, HistoryFamily, TimeGrid};
use fwlab_core::numerics::{pauli, NumericsError};
use fwlab_core::projective::{
    conjunction, spectral_pdi, Observable, Pdi, ProjectiveError, Projector,
};
use fwlab_core::scenarios::{
    certify_perfect_channel, choi_distance_from_identity, sample_flip_probabilities,
    teleport_analysis, teleport_combined, Basis, QubitChannel, ScenarioError, SpinFramework,
};
use fwlab_core::{ComplexMatrix, Ket};
use thiserror::Error;

use crate::ast::{Declaration, FrameworkName, Query, ScenarioAst, Statement};
use crate::error::{ErrorKind, SourceError, MAX_ERRORS};
use crate::report::{BlockSummary, PhysicsError, QueryReport, QueryResult, Report, RunConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("{} source error(s)", .0.len())]
    Source(Vec<SourceError>),
    #[error("invalid configuration: {0}")]
    Config(String),
}

enum Value {
    Space,
    Op(ComplexMatrix),
    State(Ket),
    Pdi(Pdi),
    Family(HistoryFamily),
    Channel(QubitChannel),
}

/// Either a dimension problem (a source error) or a physics result.
enum Failure {
    Dimension(String),
    Physics(PhysicsError),
}

fn variant_name(e: &impl Debug) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or("Error")
        .to_string()
}

fn physics(e: &(impl Debug + std::fmt::Display)) -> Failure {
    Failure::Physics(PhysicsError {
        kind: variant_name(e),
        message: e.to_string(),
    })
}

impl From<NumericsError> for Failure {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::DimensionMismatch { .. } => Failure::Dimension(e.to_string()),
            _ => physics(&e),
        }
    }
}

impl From<ProjectiveError> for Failure {
    fn from(e: ProjectiveError) -> Self {
        match e {
            ProjectiveError::Numerics(n) => n.into(),
            ProjectiveError::DimensionMismatch { .. } => Failure::Dimension(e.to_string()),
            _ => physics(&e),
        }
    }
}

impl From<FrameworkError> for Failure {
    fn from(e: FrameworkError) -> Self {
        match e {
            FrameworkError::Numerics(n) => n.into(),
            FrameworkError::Projective(p) => p.into(),
            FrameworkError::DimensionMismatch { .. } => Failure::Dimension(e.to_string()),
            _ => physics(&e),
        }
    }
}

impl From<HistoryError> for Failure {
    fn from(e: HistoryError) -> Self {
        match e {
            HistoryError::Numerics(n) => n.into(),
            HistoryError::Projective(p) => p.into(),
            HistoryError::Framework(f) => f.into(),
            HistoryError::DimensionMismatch { .. } => Failure::Dimension(e.to_string()),
            _ => physics(&e),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Numerics(n) => n.into(),
            ScenarioError::Projective(p) => p.into(),
            ScenarioError::Framework(f) => f.into(),
            ScenarioError::History(h) => h.into(),
            _ => physics(&e),
        }
    }
}

struct Env {
    values: HashMap<String, Value>,
}

impl Env {
    fn with_constants() -> Self {
        let values = [
            ("I2", pauli::identity()),
            ("X", pauli::x()),
            ("Y", pauli::y()),
            ("Z", pauli::z()),
            ("H", pauli::hadamard()),
        ]
        .into_iter()
        .map(|(n, m)| (n.to_string(), Value::Op(m)))
        .collect();
        Self { values }
    }

    fn missing(name: &str) -> Failure {
        Failure::Physics(PhysicsError {
            kind: "UndefinedName".into(),
            message: format!("`{name}` has no value"),
        })
    }

    fn op(&self, name: &str) -> Result<&ComplexMatrix, Failure> {
        match self.values.get(name) {
            Some(Value::Op(m)) => Ok(m),
            _ => Err(Self::missing(name)),
        }
    }

    fn state(&self, name: &str) -> Result<&Ket, Failure> {
        match self.values.get(name) {
            Some(Value::State(k)) => Ok(k),
            _ => Err(Self::missing(name)),
        }
    }

    fn pdi(&self, name: &str) -> Result<&Pdi, Failure> {
        match self.values.get(name) {
            Some(Value::Pdi(p)) => Ok(p),
            _ => Err(Self::missing(name)),
        }
    }

    fn family(&self, name: &str) -> Result<&HistoryFamily, Failure> {
        match self.values.get(name) {
            Some(Value::Family(f)) => Ok(f),
            _ => Err(Self::missing(name)),
        }
    }

    fn channel(&self, name: &str) -> Result<&QubitChannel, Failure> {
        match self.values.get(name) {
            Some(Value::Channel(c)) => Ok(c),
            _ => Err(Self::missing(name)),
        }
    }
}

fn evaluate(decl: &Declaration, env: &Env, config: &RunConfig) -> Result<Value, Failure> {
    let tol = &config.tolerances;
    Ok(match decl {
        Declaration::Space { .. } => Value::Space,
        Declaration::Op { rows, .. } => Value::Op(ComplexMatrix::from_rows(rows)?),
        Declaration::State { amplitudes, .. } => Value::State(Ket::normalized(amplitudes.clone())?),
        Declaration::PdiFrom { op, .. } => {
            let obs = Observable::new(env.op(op)?.clone(), tol)?;
            Value::Pdi(spectral_pdi(&obs, tol)?)
        }
        Declaration::PdiBlocks { blocks, .. } => {
            let projectors = blocks
                .iter()
                .map(|b| Ok(Projector::new(env.op(b)?.clone(), tol)?))
                .collect::<Result<Vec<_>, Failure>>()?;
            Value::Pdi(Pdi::new(projectors, None, tol)?)
        }
        Declaration::Family { init, steps, .. } => {
            let unitaries = steps
                .iter()
                .map(|(u, _)| env.op(u).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let pdis = steps
                .iter()
                .map(|(_, f)| env.pdi(f).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let grid = TimeGrid::uniform(unitaries, tol)?;
            Value::Family(HistoryFamily::new(env.state(init)?.clone(), grid, pdis)?)
        }
        Declaration::Channel { kraus, .. } => {
            let ops = kraus
                .iter()
                .map(|k| env.op(k).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            Value::Channel(QubitChannel::new(ops, tol)?)
        }
    })
}

fn block_summaries(pdi: &Pdi) -> Vec<BlockSummary> {
    pdi.blocks()
        .iter()
        .enumerate()
        .map(|(j, b)| BlockSummary {
            label: pdi.label(j).map(|l| l.to_string()),
            rank: b.rank(),
        })
        .collect()
}

fn spin(f: FrameworkName) -> SpinFramework {
    match f {
        FrameworkName::Z => SpinFramework::Z,
        FrameworkName::X => SpinFramework::X,
    }
}

fn execute(
    query: &Query,
    index: usize,
    env: &Env,
    config: &RunConfig,
) -> Result<QueryResult, Failure> {
    let tol = &config.tolerances;
    Ok(match query {
        Query::Prob { state, pdi } => {
            let f = env.pdi(pdi)?;
            let d = born_distribution(&QuantumState::Pure(env.state(state)?.clone()), f, tol)?;
            QueryResult::Distribution {
                framework: f.id().to_string(),
                blocks: block_summaries(f),
                probs: d.probs().to_vec(),
            }
        }
        Query::EventProb {
            state,
            pdi,
            indices,
        } => {
            let f = env.pdi(pdi)?;
            let d = born_distribution(&QuantumState::Pure(env.state(state)?.clone()), f, tol)?;
            let event = Event::new(f, indices.iter().copied())?;
            QueryResult::EventProbability {
                indices: event.indices().iter().copied().collect(),
                probability: event_probability(&d, &event)?,
            }
        }
        Query::Compat { left, right } => {
            let (f, g) = (env.pdi(left)?, env.pdi(right)?);
            QueryResult::Compatibility {
                compatible: are_compatible(f, g, tol)?,
                max_commutator_norm: max_commutator_norm(f, g)?,
            }
        }
        Query::Refine { left, right } => {
            let r = common_refinement(env.pdi(left)?, env.pdi(right)?, tol)?;
            QueryResult::Refinement {
                framework: r.id().to_string(),
                blocks: block_summaries(&r),
            }
        }
        Query::Conj { left, right } => {
            let p = Projector::new(env.op(left)?.clone(), tol)?;
            let q = Projector::new(env.op(right)?.clone(), tol)?;
            let c = conjunction(&p, &q, tol)?;
            QueryResult::Conjunction {
                rank: c.rank(),
                matrix: c.into_matrix(),
            }
        }
        Query::Consistent { family } => QueryResult::Consistency(
            env.family(family)?
                .consistency_check(&config.consistency, tol)?,
        ),
        Query::HistProb { family } => {
            let d = env
                .family(family)?
                .history_distribution(&config.consistency, tol)?;
            QueryResult::Histories {
                total: d.total(),
                probabilities: d.iter().map(|(h, p)| (h.clone(), p)).collect(),
            }
        }
        Query::ChannelCheck { channel } => {
            let ch = env.channel(channel)?;
            let seed = config.seed.wrapping_add(index as u64);
            QueryResult::ChannelCheck {
                certification: certify_perfect_channel(ch, config.tol_cert),
                choi_distance: choi_distance_from_identity(ch),
                sampled: [Basis::Z, Basis::X]
                    .into_iter()
                    .enumerate()
                    .map(|(k, b)| {
                        sample_flip_probabilities(
                            ch,
                            b,
                            config.shots,
                            seed.wrapping_mul(2).wrapping_add(k as u64),
                        )
                    })
                    .collect(),
                shots: config.shots,
            }
        }
        Query::Teleport { state, frameworks } => {
            let input = env.state(state)?;
            match frameworks.as_slice() {
                [f] => QueryResult::Teleport(teleport_analysis(
                    input,
                    spin(*f),
                    tol,
                    &config.consistency,
                )?),
                _ => QueryResult::CombinedFamily {
                    history_count: teleport_combined(input, tol)?.history_count(),
                },
            }
        }
    })
}

/// Runs every query in order. Physics errors become query results; invalid
/// declarations and dimension mismatches become source errors.
pub fn run_scenario(ast: &ScenarioAst, config: &RunConfig) -> Result<Report, RunError> {
    config
        .tolerances
        .validate()
        .map_err(|e| RunError::Config(e.to_string()))?;
    if !(config.consistency.tolerance >= 0.0 && config.tol_cert >= 0.0) {
        return Err(RunError::Config(
            "consistency and certification tolerances must be nonnegative".into(),
        ));
    }
    let mut env = Env::with_constants();
    let mut errors = Vec::new();
    let mut queries = Vec::new();
    for item in &ast.items {
        if errors.len() >= MAX_ERRORS {
            break;
        }
        match &item.statement {
            Statement::Declaration(d) => match evaluate(d, &env, config) {
                Ok(v) => {
                    env.values.insert(d.name().to_string(), v);
                }
                Err(failure) => {
                    let (kind, message) = match failure {
                        Failure::Dimension(m) => (ErrorKind::Dimension, m),
                        Failure::Physics(p) => (ErrorKind::Physics, p.message),
                    };
                    errors.push(SourceError::new(kind, item.line, item.column, message));
                }
            },
            Statement::Query(q) => {
                if !errors.is_empty() {
                    continue;
                }
                let outcome = match execute(q, queries.len(), &env, config) {
                    Ok(r) => Ok(r),
                    Err(Failure::Physics(p)) => Err(p),
                    Err(Failure::Dimension(m)) => {
                        errors.push(SourceError::new(
                            ErrorKind::Dimension,
                            item.line,
                            item.column,
                            m,
                        ));
                        continue;
                    }
                };
                queries.push(QueryReport {
                    kind: q.keyword(),
                    line: item.line,
                    inputs: q.inputs(),
                    outcome,
                });
            }
        }
    }
    if errors.is_empty() {
        Ok(Report {
            config: *config,
            queries,
        })
    } else {
        Err(RunError::Source(errors))
    }
}
