//! Worked one-qubit scenarios: noisy channels tested in two bases, spin
//! preparation followed by a later measurement, and teleportation described
//! in two incompatible frameworks.
//!
//! Teleportation conventions: qubits are ordered (A, a, b) with A the input,
//! (a, b) the shared pair |Φ+⟩, and basis index 4A + 2a + b. Alice applies
//! CNOT(A→a) then H on A and reads (m_A, m_a); outcome index m = 2·m_A + m_a.
//! Bob's correction for outcome 00, 01, 10, 11 is I, X, Z, XZ in gate order,
//! i.e. the operator Z^{m_A} X^{m_a}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::frameworks::{common_refinement, DensityOperator, FrameworkError, QuantumState};
use crate::histories::{
    combine_families, ConsistencyConfig, ConsistencyReport, HistoryError, HistoryFamily, TimeGrid,
};
use crate::numerics::{
    hermitian_eigendecomposition, pauli, vec_norm, ComplexMatrix, Ket, NumericsError, Tolerances,
    C64, ONE, ZERO,
};
use crate::projective::{projector_from_ket, Pdi, ProjectiveError, Projector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    History(#[from] HistoryError),
    #[error("Kraus operators are not trace preserving (‖Σ K†K − I‖_F = {defect:.3e})")]
    NotTracePreserving { defect: f64 },
    #[error("invalid Kraus set: {0}")]
    InvalidKraus(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A one-qubit CPTP map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitChannel {
    kraus: Vec<ComplexMatrix>,
}

fn check_probability(name: &str, p: f64) -> Result<(), ScenarioError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ScenarioError::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {p}"
        )))
    }
}

impl QubitChannel {
    pub fn new(kraus: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self, ScenarioError> {
        if kraus.is_empty() {
            return Err(ScenarioError::InvalidKraus("no operators".into()));
        }
        let mut sum = ComplexMatrix::zeros(2, 2);
        for (k, op) in kraus.iter().enumerate() {
            if op.rows() != 2 || op.cols() != 2 {
                return Err(ScenarioError::InvalidKraus(format!(
                    "operator {k} is {}x{}, expected 2x2",
                    op.rows(),
                    op.cols()
                )));
            }
            sum = &sum + &(&op.adjoint() * op);
        }
        let defect = sum.frobenius_distance(&ComplexMatrix::identity(2));
        if defect > tol.algebraic {
            return Err(ScenarioError::NotTracePreserving { defect });
        }
        Ok(Self { kraus })
    }

    pub fn identity() -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(2)],
        }
    }

    /// ρ ↦ (1−p)ρ + p ZρZ
    pub fn phase_flip(p: f64) -> Result<Self, ScenarioError> {
        check_probability("flip probability", p)?;
        Ok(Self {
            kraus: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
                pauli::z().scale_real(p.sqrt()),
            ],
        })
    }

    /// ρ ↦ (1−p)ρ + p XρX
    pub fn bit_flip(p: f64) -> Result<Self, ScenarioError> {
        check_probability("flip probability", p)?;
        Ok(Self {
            kraus: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
                pauli::x().scale_real(p.sqrt()),
            ],
        })
    }

    /// ρ ↦ (1−p)ρ + p I/2
    pub fn depolarizing(p: f64) -> Result<Self, ScenarioError> {
        check_probability("depolarizing probability", p)?;
        let w = (p / 4.0).sqrt();
        Ok(Self {
            kraus: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - 3.0 * p / 4.0).sqrt()),
                pauli::x().scale_real(w),
                pauli::y().scale_real(w),
                pauli::z().scale_real(w),
            ],
        })
    }

    pub fn unitary(u: ComplexMatrix, tol: &Tolerances) -> Result<Self, ScenarioError> {
        Self::new(vec![u], tol)
    }

    /// Rotation by `angle` about the unit Bloch axis `axis`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self, ScenarioError> {
        Ok(Self {
            kraus: vec![rotation_matrix(axis, angle)?],
        })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Σ_k K_k ρ K_k†
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(2, 2);
        for k in &self.kraus {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        out
    }

    /// Choi matrix Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|).
    pub fn choi(&self) -> ComplexMatrix {
        let mut choi = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                let mut unit = ComplexMatrix::zeros(2, 2);
                unit[(i, j)] = ONE;
                let image = self.apply_matrix(&unit);
                choi = &choi + &unit.kron(&image);
            }
        }
        choi
    }
}

fn rotation_matrix(axis: [f64; 3], angle: f64) -> Result<ComplexMatrix, ScenarioError> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(ScenarioError::InvalidParameter(
            "rotation axis is zero".into(),
        ));
    }
    let [nx, ny, nz] = axis.map(|c| c / norm);
    let (s, c) = (angle / 2.0).sin_cos();
    // cos(θ/2) I − i sin(θ/2) n·σ
    let generator =
        &(&pauli::x().scale_real(nx) + &pauli::y().scale_real(ny)) + &pauli::z().scale_real(nz);
    Ok(&ComplexMatrix::identity(2).scale_real(c) + &generator.scale(C64::new(0.0, -s)))
}

pub fn apply_channel(ch: &QubitChannel, rho: &DensityOperator) -> DensityOperator {
    DensityOperator::new_unchecked(ch.apply_matrix(rho.matrix()))
}

/// Measurement basis for flip statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    Z,
    X,
    /// Spin along the Bloch direction with polar angle θ and azimuth φ.
    Bloch {
        theta: f64,
        phi: f64,
    },
}

impl Basis {
    /// (|w+⟩, |w−⟩)
    pub fn kets(&self) -> (Ket, Ket) {
        match *self {
            Basis::Z => (pauli::z_plus(), pauli::z_minus()),
            Basis::X => (pauli::x_plus(), pauli::x_minus()),
            Basis::Bloch { theta, phi } => (
                pauli::bloch_ket(theta, phi),
                pauli::bloch_ket(std::f64::consts::PI - theta, phi + std::f64::consts::PI),
            ),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Basis::Z => "Z".into(),
            Basis::X => "X".into(),
            Basis::Bloch { theta, phi } => format!("w(θ={theta}, φ={phi})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlipReport {
    pub basis: Basis,
    pub p_plus_to_minus: f64,
    pub p_minus_to_plus: f64,
}

impl FlipReport {
    pub fn max_flip(&self) -> f64 {
        self.p_plus_to_minus.max(self.p_minus_to_plus)
    }
}

/// Exact flip probabilities Tr(P_∓ E(P_±)).
pub fn flip_probabilities(ch: &QubitChannel, basis: Basis) -> FlipReport {
    let (plus, minus) = basis.kets();
    let p_plus = plus.dyad();
    let p_minus = minus.dyad();
    let flip = |from: &ComplexMatrix, to: &ComplexMatrix| {
        (to * &ch.apply_matrix(from)).trace().re.clamp(0.0, 1.0)
    };
    FlipReport {
        basis,
        p_plus_to_minus: flip(&p_plus, &p_minus),
        p_minus_to_plus: flip(&p_minus, &p_plus),
    }
}

/// Seeded Monte Carlo estimate of the flip probabilities from `shots` runs
/// per input state.
pub fn sample_flip_probabilities(
    ch: &QubitChannel,
    basis: Basis,
    shots: usize,
    seed: u64,
) -> FlipReport {
    let exact = flip_probabilities(ch, basis);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut estimate = |p: f64| {
        if shots == 0 {
            return 0.0;
        }
        let hits = (0..shots).filter(|_| rng.random::<f64>() < p).count();
        hits as f64 / shots as f64
    };
    FlipReport {
        basis,
        p_plus_to_minus: estimate(exact.p_plus_to_minus),
        p_minus_to_plus: estimate(exact.p_minus_to_plus),
    }
}

/// ½ ‖a − b‖_1 for Hermitian a, b.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = (a - b).hermitian_part();
    let tol = Tolerances {
        algebraic: f64::INFINITY,
        degeneracy: f64::INFINITY,
        probability: 0.0,
    };
    match hermitian_eigendecomposition(&diff, &tol) {
        Ok(eig) => 0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>(),
        Err(_) => diff.frobenius_norm(),
    }
}

/// Frobenius distance between the Choi matrices of `ch` and the identity channel.
pub fn choi_distance_from_identity(ch: &QubitChannel) -> f64 {
    ch.choi()
        .frobenius_distance(&QubitChannel::identity().choi())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisCheck {
    pub flips: FlipReport,
    /// Largest trace distance between a basis state and its image.
    pub max_trace_distance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail { basis: Basis, flips: FlipReport },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub verdict: Verdict,
    pub tol_cert: f64,
    /// Z first, then X.
    pub checks: Vec<BasisCheck>,
}

impl Certification {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass)
    }
}

/// Certifies a channel as perfect from two mutually unbiased bases only.
///
/// A basis passes when both flip probabilities are at most `tol_cert` and
/// both basis states come back within trace distance `tol_cert`. The channel
/// passes when Z and X both pass; otherwise the verdict names the worse basis.
pub fn certify_perfect_channel(ch: &QubitChannel, tol_cert: f64) -> Certification {
    let checks: Vec<BasisCheck> = [Basis::Z, Basis::X]
        .into_iter()
        .map(|basis| {
            let flips = flip_probabilities(ch, basis);
            let (plus, minus) = basis.kets();
            let max_trace_distance = [plus, minus]
                .iter()
                .map(|k| {
                    let rho = k.dyad();
                    trace_distance(&ch.apply_matrix(&rho), &rho)
                })
                .fold(0.0, f64::max);
            let passed = flips.max_flip() <= tol_cert && max_trace_distance <= tol_cert;
            BasisCheck {
                flips,
                max_trace_distance,
                passed,
            }
        })
        .collect();
    let badness = |c: &BasisCheck| c.flips.max_flip().max(c.max_trace_distance);
    let worst = checks
        .iter()
        .filter(|c| !c.passed)
        .fold(None::<&BasisCheck>, |acc, c| match acc {
            Some(best) if badness(best) >= badness(c) => Some(best),
            _ => Some(c),
        });
    let verdict = match worst {
        None => Verdict::Pass,
        Some(c) => Verdict::Fail {
            basis: c.flips.basis,
            flips: c.flips.clone(),
        },
    };
    Certification {
        verdict,
        tol_cert,
        checks,
    }
}

/// Seeded random channel between the identity (`noise_scale = 0`) and a
/// generic CPTP map.
///
/// The channel is ρ ↦ (1−s) UρU† + s E(ρ), where U rotates by an angle up to
/// `noise_scale · π` about a random axis, s is drawn from [0, noise_scale],
/// and E has one to four Kraus operators cut from a random isometry.
pub fn random_channel(seed: u64, noise_scale: f64) -> Result<QubitChannel, ScenarioError> {
    check_probability("noise_scale", noise_scale)?;
    if noise_scale == 0.0 {
        return Ok(QubitChannel::identity());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axis: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let angle = noise_scale * std::f64::consts::PI * rng.random::<f64>();
    let u = rotation_matrix(axis, angle).unwrap_or_else(|_| ComplexMatrix::identity(2));
    let weight = noise_scale * rng.random::<f64>();
    let n_kraus = rng.random_range(1..=4usize);
    let isometry = random_isometry(&mut rng, 2 * n_kraus);

    let mut kraus = vec![u.scale_real((1.0 - weight).sqrt())];
    for k in 0..n_kraus {
        let block = ComplexMatrix::from_fn(2, 2, |r, c| isometry[c][2 * k + r]);
        kraus.push(block.scale_real(weight.sqrt()));
    }
    Ok(QubitChannel { kraus })
}

/// Two orthonormal columns of length `rows`, by Gram-Schmidt on Gaussian vectors.
fn random_isometry(rng: &mut ChaCha8Rng, rows: usize) -> [Vec<C64>; 2] {
    let draw = |rng: &mut ChaCha8Rng| -> Vec<C64> {
        (0..rows)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect()
    };
    loop {
        let a = draw(rng);
        let b = draw(rng);
        let na = vec_norm(&a);
        let a: Vec<C64> = a.iter().map(|z| z / na).collect();
        let overlap: C64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        let b: Vec<C64> = b.iter().zip(&a).map(|(y, x)| y - x * overlap).collect();
        let nb = vec_norm(&b);
        if nb > 1e-6 {
            let b = b.iter().map(|z| z / nb).collect();
            return [a, b];
        }
    }
}

/// Spin component singled out by a framework.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinFramework {
    Z,
    X,
}

impl SpinFramework {
    pub fn basis(&self) -> Basis {
        match self {
            SpinFramework::Z => Basis::Z,
            SpinFramework::X => Basis::X,
        }
    }

    /// {[w+], [w−]} on one qubit.
    pub fn pdi(&self, tol: &Tolerances) -> Result<Pdi, ScenarioError> {
        let (plus, minus) = self.basis().kets();
        Ok(Pdi::from_basis(&[plus, minus], tol)?)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpinFramework::Z => "Z",
            SpinFramework::X => "X",
        }
    }
}

/// A spin prepared in |x+⟩, free evolution, then a question about the spin
/// just before a later measurement, asked in the Z or the X framework.
pub fn prep_measure_family(
    framework: SpinFramework,
    tol: &Tolerances,
) -> Result<HistoryFamily, ScenarioError> {
    let grid = TimeGrid::uniform(vec![ComplexMatrix::identity(2)], tol)?;
    Ok(HistoryFamily::new(
        pauli::x_plus(),
        grid,
        vec![framework.pdi(tol)?],
    )?)
}

/// Attempts to merge the S_z and S_x descriptions of the prepare-and-measure
/// setup into one. The frameworks are incompatible, so this always fails
/// with `MeaninglessCombination`.
pub fn prep_measure_combined(tol: &Tolerances) -> Result<HistoryFamily, ScenarioError> {
    let z = prep_measure_family(SpinFramework::Z, tol)?;
    let x = prep_measure_family(SpinFramework::X, tol)?;
    Ok(combine_families(&z, &x, tol)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportReport {
    pub framework: SpinFramework,
    /// Probability of Bell outcome m = 2·m_A + m_a.
    pub outcome_probs: [f64; 4],
    /// Probability, given outcome m, that Bob's corrected spin component in the
    /// framework equals the input's component at the start.
    pub conditional_match: [f64; 4],
    pub consistency: ConsistencyReport,
}

fn embed(op: &ComplexMatrix, position: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let factors: [&ComplexMatrix; 3] = match position {
        0 => [op, &id, &id],
        1 => [&id, op, &id],
        _ => [&id, &id, op],
    };
    factors[0].kron(factors[1]).kron(factors[2])
}

fn lift_pdi(pdi: &Pdi, position: usize, tol: &Tolerances) -> Result<Pdi, ScenarioError> {
    let blocks = pdi
        .blocks()
        .iter()
        .map(|b| Projector::new(embed(b.matrix(), position), tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Pdi::new(blocks, None, tol)?)
}

/// CNOT(A→a) followed by H on A.
fn bell_rotation() -> ComplexMatrix {
    let mut cnot = ComplexMatrix::zeros(8, 8);
    for idx in 0..8 {
        let target = if idx & 4 != 0 { idx ^ 2 } else { idx };
        cnot[(target, idx)] = ONE;
    }
    &embed(&pauli::hadamard(), 0) * &cnot
}

/// Σ_m |m⟩⟨m| ⊗ Z^{m_A} X^{m_a} on Bob's qubit.
fn correction() -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(8, 8);
    for m_a_big in 0..2 {
        for m_a in 0..2 {
            let mut bob = ComplexMatrix::identity(2);
            if m_a == 1 {
                bob = &pauli::x() * &bob;
            }
            if m_a_big == 1 {
                bob = &pauli::z() * &bob;
            }
            let base = 4 * m_a_big + 2 * m_a;
            for r in 0..2 {
                for c in 0..2 {
                    u[(base + r, base + c)] = bob[(r, c)];
                }
            }
        }
    }
    u
}

/// Alice's four outcomes as rank-2 projectors |m_A m_a⟩⟨m_A m_a| ⊗ I.
fn outcome_pdi(tol: &Tolerances) -> Result<Pdi, ScenarioError> {
    let blocks = (0..4)
        .map(|m| {
            let mut p = ComplexMatrix::zeros(8, 8);
            p[(2 * m, 2 * m)] = ONE;
            p[(2 * m + 1, 2 * m + 1)] = ONE;
            Projector::new(p, tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Pdi::new(blocks, None, tol)?)
}

/// Three-step teleportation family in one spin framework:
///
/// - t1: the input's spin component (PDI on A),
/// - t2: after the Bell rotation, Alice's outcome refined with Bob's component,
/// - t3: after the correction, Bob's component.
pub fn teleport_family(
    input: &Ket,
    framework: SpinFramework,
    tol: &Tolerances,
) -> Result<HistoryFamily, ScenarioError> {
    if input.dim() != 2 {
        return Err(ScenarioError::InvalidParameter(format!(
            "teleportation input must be a qubit, got dimension {}",
            input.dim()
        )));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phi_plus = Ket::new(vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)])?;
    let initial = input.tensor(&phi_plus);
    let spin = framework.pdi(tol)?;
    let on_input = lift_pdi(&spin, 0, tol)?;
    let on_bob = lift_pdi(&spin, 2, tol)?;
    let mid = common_refinement(&outcome_pdi(tol)?, &on_bob, tol)?;
    let grid = TimeGrid::uniform(
        vec![ComplexMatrix::identity(8), bell_rotation(), correction()],
        tol,
    )?;
    Ok(HistoryFamily::new(
        initial,
        grid,
        vec![on_input, mid, on_bob],
    )?)
}

/// Outcome statistics and framework-conditional transmission for one framework.
pub fn teleport_analysis(
    input: &Ket,
    framework: SpinFramework,
    tol: &Tolerances,
    config: &ConsistencyConfig,
) -> Result<TeleportReport, ScenarioError> {
    let family = teleport_family(input, framework, tol)?;
    let consistency = family.consistency_check(config, tol)?;
    let dist = family.history_distribution(config, tol)?;
    let mid = &family.event_pdis()[1];
    let outcome_of = |block: usize| match mid.label(block) {
        Some(crate::projective::BlockLabel::Pair(m, _)) => *m,
        _ => unreachable!("refinement blocks carry pair labels"),
    };
    let mut outcome_probs = [0.0; 4];
    let mut matched = [0.0; 4];
    for (h, p) in dist.iter() {
        let m = outcome_of(h[1]);
        outcome_probs[m] += p;
        if h[0] == h[2] {
            matched[m] += p;
        }
    }
    let mut conditional_match = [0.0; 4];
    for m in 0..4 {
        // Every outcome has probability 1/4, so the ratio is always defined;
        // guard anyway for degenerate inputs.
        if outcome_probs[m] > tol.probability {
            conditional_match[m] = matched[m] / outcome_probs[m];
        }
    }
    Ok(TeleportReport {
        framework,
        outcome_probs,
        conditional_match,
        consistency,
    })
}

/// Attempts a single description carrying both the Z and the X information
/// at the intermediate time. Always fails with `MeaninglessCombination`.
pub fn teleport_combined(input: &Ket, tol: &Tolerances) -> Result<HistoryFamily, ScenarioError> {
    let z = teleport_family(input, SpinFramework::Z, tol)?;
    let x = teleport_family(input, SpinFramework::X, tol)?;
    Ok(combine_families(&z, &x, tol)?)
}

/// Convenience for callers holding a [`QuantumState`] that should be a qubit ket.
pub fn qubit_ket(state: &QuantumState) -> Result<Ket, ScenarioError> {
    match state {
        QuantumState::Pure(k) if k.dim() == 2 => Ok(k.clone()),
        _ => Err(ScenarioError::InvalidParameter(
            "expected a pure one-qubit state".into(),
        )),
    }
}

/// [w±] for a basis, as projectors.
pub fn basis_projectors(basis: Basis) -> (Projector, Projector) {
    let (p, m) = basis.kets();
    (projector_from_ket(&p), projector_from_ket(&m))
}
