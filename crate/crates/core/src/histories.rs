//! History families and their consistency.
//!
//! A family fixes an initial state at t_0, a unitary for each interval, and a
//! PDI at each later time t_1..t_f. A history picks one block per time. Its
//! chain operator is
//!
//! ```text
//! C_α = P_{α_f} U(t_f, t_{f-1}) ⋯ P_{α_1} U(t_1, t_0)
//! ```
//!
//! and the decoherence functional is D(α, β) = Tr(C_α ρ C_β†). The family is
//! consistent when every off-diagonal D vanishes (within a tolerance), and
//! only then are the diagonal values D(α, α) handed out as probabilities.
//!
//! The tensor-product history space is never built: chain operators are
//! sequential products, and the consistency scan works with the vectors
//! C_α |w_i⟩ for a square-root factorization ρ = Σ |w_i⟩⟨w_i|.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::frameworks::{common_refinement, FrameworkError, QuantumState};
use crate::numerics::{
    hermitian_eigendecomposition, inner, is_unitary, ComplexMatrix, NumericsError, Tolerances, C64,
};
use crate::projective::{Pdi, ProjectiveError};

/// Largest family the all-pairs consistency scan accepts.
pub const MAX_HISTORIES: usize = 4096;

/// (α, β, D(α, β)) by history enumeration index.
type OffendingIndex = (usize, usize, C64);

/// Offending pairs beyond this many are counted but not listed.
pub const MAX_REPORTED_PAIRS: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HistoryError {
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error("time labels must be strictly increasing")]
    TimesNotIncreasing,
    #[error("{times} time labels need {expected} unitaries, got {found}")]
    StepCountMismatch {
        times: usize,
        expected: usize,
        found: usize,
    },
    #[error("the evolution for interval {step} is not unitary")]
    NotUnitary { step: usize },
    #[error("a family needs at least one time step")]
    Empty,
    #[error("dimension mismatch at {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("history has {found} entries, family has {expected} times")]
    WrongHistoryLength { expected: usize, found: usize },
    #[error("index {index} at time step {step} is out of range ({len} blocks)")]
    IndexOutOfRange {
        step: usize,
        index: usize,
        len: usize,
    },
    #[error("family has {count} histories, more than the {cap} the consistency scan handles")]
    TooManyHistories { count: usize, cap: usize },
    #[error(
        "family is inconsistent (max off-diagonal |D| = {max_offdiag:.6e}); it is not a framework \
         and its histories get no probabilities"
    )]
    InconsistentFamily { max_offdiag: f64 },
    #[error("families cannot be compared: {0}")]
    FamilyMismatch(String),
}

/// Time labels and the unitaries U(t_{k+1}, t_k) between them.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
    unitaries: Vec<ComplexMatrix>,
}

impl TimeGrid {
    pub fn new(
        times: Vec<f64>,
        unitaries: Vec<ComplexMatrix>,
        tol: &Tolerances,
    ) -> Result<Self, HistoryError> {
        if times
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
        {
            return Err(HistoryError::TimesNotIncreasing);
        }
        if times.len() != unitaries.len() + 1 {
            return Err(HistoryError::StepCountMismatch {
                times: times.len(),
                expected: times.len().saturating_sub(1),
                found: unitaries.len(),
            });
        }
        if unitaries.is_empty() {
            return Err(HistoryError::Empty);
        }
        for (step, u) in unitaries.iter().enumerate() {
            if !is_unitary(u, tol) {
                return Err(HistoryError::NotUnitary { step });
            }
        }
        Ok(Self { times, unitaries })
    }

    /// Times 0, 1, …, n.
    pub fn uniform(unitaries: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self, HistoryError> {
        let times = (0..=unitaries.len()).map(|k| k as f64).collect();
        Self::new(times, unitaries, tol)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn steps(&self) -> usize {
        self.unitaries.len()
    }

    /// U(t_f, t_0)
    pub fn total_evolution(&self) -> ComplexMatrix {
        let dim = self.unitaries[0].dim();
        self.unitaries
            .iter()
            .fold(ComplexMatrix::identity(dim), |acc, u| u * &acc)
    }
}

/// Which off-diagonal part of D must vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConsistencyCondition {
    /// D(α, β) = 0 for α ≠ β.
    #[default]
    Strong,
    /// Re D(α, β) = 0 for α ≠ β.
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyConfig {
    pub tolerance: f64,
    pub condition: ConsistencyCondition,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            condition: ConsistencyCondition::Strong,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OffendingPair {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub value: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub condition: ConsistencyCondition,
    pub tolerance: f64,
    pub history_count: usize,
    /// Largest |D(α, β)| (or |Re D| under the weak condition) over α ≠ β.
    pub max_offdiag: f64,
    /// Pairs α < β above the tolerance, in enumeration order, at most
    /// [`MAX_REPORTED_PAIRS`] of them.
    pub offending_pairs: Vec<OffendingPair>,
    pub offending_total: usize,
    /// Σ_α D(α, α)
    pub diagonal_sum: f64,
    pub consistent: bool,
}

/// Probabilities of the histories of a consistent family, keyed by history.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryDistribution {
    probs: BTreeMap<Vec<usize>, f64>,
}

impl HistoryDistribution {
    pub fn get(&self, history: &[usize]) -> Option<f64> {
        self.probs.get(history).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, f64)> {
        self.probs.iter().map(|(h, &p)| (h, p))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Probability of each block at one time step, summed over the others.
    pub fn marginal(&self, step: usize) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        for (h, &p) in &self.probs {
            *out.entry(h[step]).or_insert(0.0) += p;
        }
        out
    }

    pub fn into_map(self) -> BTreeMap<Vec<usize>, f64> {
        self.probs
    }
}

#[derive(Debug, Clone)]
pub struct HistoryFamily {
    initial: QuantumState,
    grid: TimeGrid,
    event_pdis: Vec<Pdi>,
}

impl HistoryFamily {
    pub fn new(
        initial: impl Into<QuantumState>,
        grid: TimeGrid,
        event_pdis: Vec<Pdi>,
    ) -> Result<Self, HistoryError> {
        let initial = initial.into();
        let dim = initial.dim();
        if event_pdis.len() != grid.steps() {
            return Err(HistoryError::StepCountMismatch {
                times: grid.times.len(),
                expected: grid.steps(),
                found: event_pdis.len(),
            });
        }
        for (k, u) in grid.unitaries.iter().enumerate() {
            if u.dim() != dim {
                return Err(HistoryError::DimensionMismatch {
                    what: format!("unitary {k}"),
                    expected: dim,
                    found: u.dim(),
                });
            }
        }
        for (k, f) in event_pdis.iter().enumerate() {
            if f.dim() != dim {
                return Err(HistoryError::DimensionMismatch {
                    what: format!("PDI at time step {}", k + 1),
                    expected: dim,
                    found: f.dim(),
                });
            }
        }
        Ok(Self {
            initial,
            grid,
            event_pdis,
        })
    }

    pub fn initial(&self) -> &QuantumState {
        &self.initial
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn event_pdis(&self) -> &[Pdi] {
        &self.event_pdis
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    /// Number of histories, saturating at `usize::MAX`.
    pub fn history_count(&self) -> usize {
        self.event_pdis
            .iter()
            .fold(1usize, |acc, f| acc.saturating_mul(f.len()))
    }

    /// All histories in lexicographic order, earliest time most significant.
    pub fn histories(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let radices: Vec<usize> = self.event_pdis.iter().map(Pdi::len).collect();
        (0..self.history_count()).map(move |mut n| {
            let mut h = vec![0; radices.len()];
            for (slot, &r) in h.iter_mut().zip(&radices).rev() {
                *slot = n % r;
                n /= r;
            }
            h
        })
    }

    fn check_history(&self, alpha: &[usize]) -> Result<(), HistoryError> {
        if alpha.len() != self.event_pdis.len() {
            return Err(HistoryError::WrongHistoryLength {
                expected: self.event_pdis.len(),
                found: alpha.len(),
            });
        }
        for (step, (&index, f)) in alpha.iter().zip(&self.event_pdis).enumerate() {
            if index >= f.len() {
                return Err(HistoryError::IndexOutOfRange {
                    step,
                    index,
                    len: f.len(),
                });
            }
        }
        Ok(())
    }

    /// C_α = P_{α_f} U(t_f,t_{f−1}) ⋯ P_{α_1} U(t_1,t_0)
    pub fn chain_operator(&self, alpha: &[usize]) -> Result<ComplexMatrix, HistoryError> {
        self.check_history(alpha)?;
        let mut c = ComplexMatrix::identity(self.dim());
        for ((u, f), &j) in self.grid.unitaries.iter().zip(&self.event_pdis).zip(alpha) {
            c = f.blocks()[j].matrix().matmul(&u.matmul(&c)?)?;
        }
        Ok(c)
    }

    /// D(α, β) = Tr(C_α ρ C_β†); for a pure state ⟨ψ|C_β† C_α|ψ⟩.
    pub fn decoherence_functional(
        &self,
        alpha: &[usize],
        beta: &[usize],
    ) -> Result<C64, HistoryError> {
        let ca = self.chain_operator(alpha)?;
        let cb = self.chain_operator(beta)?;
        let rho = self.initial.density_matrix();
        Ok(ca.matmul(&rho)?.matmul(&cb.adjoint())?.trace())
    }

    /// Vectors w_i with ρ = Σ |w_i⟩⟨w_i|.
    fn state_factors(&self, tol: &Tolerances) -> Result<Vec<Vec<C64>>, HistoryError> {
        Ok(match &self.initial {
            QuantumState::Pure(k) => vec![k.amplitudes().to_vec()],
            QuantumState::Mixed(rho) => {
                let eig = hermitian_eigendecomposition(rho.matrix(), tol)?;
                eig.values
                    .iter()
                    .zip(eig.vectors)
                    .filter(|(lambda, _)| **lambda > 0.0)
                    .map(|(lambda, v)| {
                        let s = lambda.sqrt();
                        v.into_amplitudes().into_iter().map(|z| z * s).collect()
                    })
                    .collect()
            }
        })
    }

    /// C_α w_i for every history α (in enumeration order) and factor i.
    fn chain_states(&self, tol: &Tolerances) -> Result<Vec<Vec<Vec<C64>>>, HistoryError> {
        let factors = self.state_factors(tol)?;
        // Walk the history tree one time step at a time, so shared prefixes are
        // propagated once.
        let mut layer: Vec<Vec<Vec<C64>>> = vec![factors];
        for (u, f) in self.grid.unitaries.iter().zip(&self.event_pdis) {
            let mut next = Vec::with_capacity(layer.len() * f.len());
            for states in &layer {
                let evolved = states
                    .iter()
                    .map(|w| u.apply(w))
                    .collect::<Result<Vec<_>, _>>()?;
                for block in f.blocks() {
                    next.push(
                        evolved
                            .iter()
                            .map(|w| block.matrix().apply(w))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
            }
            layer = next;
        }
        Ok(layer)
    }

    /// Evaluates every off-diagonal D(α, β) and compares the largest against
    /// `config.tolerance`.
    pub fn consistency_check(
        &self,
        config: &ConsistencyConfig,
        tol: &Tolerances,
    ) -> Result<ConsistencyReport, HistoryError> {
        let count = self.history_count();
        if count > MAX_HISTORIES {
            return Err(HistoryError::TooManyHistories {
                count,
                cap: MAX_HISTORIES,
            });
        }
        let states = self.chain_states(tol)?;
        let functional = |a: usize, b: usize| -> C64 {
            states[a]
                .iter()
                .zip(&states[b])
                .map(|(wa, wb)| inner(wb, wa))
                .sum()
        };
        let measure = |d: C64| match config.condition {
            ConsistencyCondition::Strong => d.norm(),
            ConsistencyCondition::Weak => d.re.abs(),
        };
        // Each row is independent; results are gathered in row order so the
        // report does not depend on scheduling.
        let rows: Vec<(f64, Vec<OffendingIndex>)> = (0..count)
            .into_par_iter()
            .map(|a| {
                let mut worst: f64 = 0.0;
                let mut offending = Vec::new();
                for b in (a + 1)..count {
                    let d = functional(a, b);
                    let m = measure(d);
                    worst = worst.max(m);
                    if m > config.tolerance {
                        offending.push((a, b, d));
                    }
                }
                (worst, offending)
            })
            .collect();
        let diagonal_sum = (0..count).map(|a| functional(a, a).re).sum();
        let histories: Vec<Vec<usize>> = self.histories().collect();
        let max_offdiag = rows.iter().map(|(w, _)| *w).fold(0.0, f64::max);
        let offending_total = rows.iter().map(|(_, o)| o.len()).sum();
        let offending_pairs = rows
            .into_iter()
            .flat_map(|(_, o)| o)
            .take(MAX_REPORTED_PAIRS)
            .map(|(a, b, value)| OffendingPair {
                alpha: histories[a].clone(),
                beta: histories[b].clone(),
                value,
            })
            .collect();
        Ok(ConsistencyReport {
            condition: config.condition,
            tolerance: config.tolerance,
            history_count: count,
            max_offdiag,
            offending_pairs,
            offending_total,
            diagonal_sum,
            consistent: max_offdiag <= config.tolerance,
        })
    }

    /// Pr(α) = D(α, α), only for consistent families. Zero-weight histories
    /// are kept so the keys cover the whole product sample space.
    pub fn history_distribution(
        &self,
        config: &ConsistencyConfig,
        tol: &Tolerances,
    ) -> Result<HistoryDistribution, HistoryError> {
        let report = self.consistency_check(config, tol)?;
        if !report.consistent {
            return Err(HistoryError::InconsistentFamily {
                max_offdiag: report.max_offdiag,
            });
        }
        let states = self.chain_states(tol)?;
        let mut probs = BTreeMap::new();
        for (h, s) in self.histories().zip(&states) {
            let p: f64 = s.iter().map(|w| inner(w, w).re).sum();
            if p < -tol.probability {
                return Err(FrameworkError::InvalidDistribution(format!(
                    "history {h:?} has negative weight {p:e}"
                ))
                .into());
            }
            probs.insert(h, p.max(0.0));
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > tol.probability {
            return Err(FrameworkError::InvalidDistribution(format!(
                "history probabilities sum to {total}"
            ))
            .into());
        }
        Ok(HistoryDistribution { probs })
    }

    /// Σ_α C_α, which should equal U(t_f, t_0).
    pub fn chain_sum(&self) -> Result<ComplexMatrix, HistoryError> {
        let dim = self.dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for h in self.histories() {
            sum = &sum + &self.chain_operator(&h)?;
        }
        Ok(sum)
    }
}

/// Merges two families over the same initial state and dynamics into one
/// whose PDI at each time is the common refinement of the two.
///
/// Fails with `MeaninglessCombination` as soon as one time carries
/// incompatible PDIs.
pub fn combine_families(
    a: &HistoryFamily,
    b: &HistoryFamily,
    tol: &Tolerances,
) -> Result<HistoryFamily, HistoryError> {
    if a.dim() != b.dim() {
        return Err(HistoryError::DimensionMismatch {
            what: "combined families".into(),
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if a.grid.steps() != b.grid.steps() {
        return Err(HistoryError::FamilyMismatch(format!(
            "{} vs {} time steps",
            a.grid.steps(),
            b.grid.steps()
        )));
    }
    for (k, (ua, ub)) in a.grid.unitaries.iter().zip(&b.grid.unitaries).enumerate() {
        if ua.frobenius_distance(ub) > tol.algebraic {
            return Err(HistoryError::FamilyMismatch(format!(
                "dynamics differ on interval {k}"
            )));
        }
    }
    let rho_gap = a
        .initial
        .density_matrix()
        .frobenius_distance(&b.initial.density_matrix());
    if rho_gap > tol.algebraic {
        return Err(HistoryError::FamilyMismatch("initial states differ".into()));
    }
    let mut refined = Vec::with_capacity(a.event_pdis.len());
    for (f, g) in a.event_pdis.iter().zip(&b.event_pdis) {
        match common_refinement(f, g, tol) {
            Ok(r) => refined.push(r),
            Err(FrameworkError::IncompatibleFrameworks {
                max_commutator_norm,
            }) => {
                return Err(FrameworkError::MeaninglessCombination {
                    max_commutator_norm,
                }
                .into())
            }
            Err(other) => return Err(other.into()),
        }
    }
    HistoryFamily::new(a.initial.clone(), a.grid.clone(), refined)
}

/// Single-time family: one interval with evolution `u` and events `f`.
pub fn single_time_family(
    initial: impl Into<QuantumState>,
    u: ComplexMatrix,
    f: Pdi,
    tol: &Tolerances,
) -> Result<HistoryFamily, HistoryError> {
    HistoryFamily::new(initial, TimeGrid::uniform(vec![u], tol)?, vec![f])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frameworks::{born_distribution, DensityOperator};
    use crate::numerics::{pauli, Ket};
    use crate::projective::{spectral_pdi, Observable};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn pdi_of(m: ComplexMatrix) -> Pdi {
        spectral_pdi(&Observable::new(m, &tol()).unwrap(), &tol()).unwrap()
    }

    fn z_pdi() -> Pdi {
        pdi_of(pauli::z())
    }

    fn x_pdi() -> Pdi {
        pdi_of(pauli::x())
    }

    fn id2() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    fn two_step(psi: Ket, first: Pdi, second: Pdi) -> HistoryFamily {
        HistoryFamily::new(
            psi,
            TimeGrid::uniform(vec![id2(), id2()], &tol()).unwrap(),
            vec![first, second],
        )
        .unwrap()
    }

    #[test]
    fn grid_validation() {
        let t = tol();
        assert!(matches!(
            TimeGrid::new(vec![0.0, 0.0], vec![id2()], &t),
            Err(HistoryError::TimesNotIncreasing)
        ));
        assert!(matches!(
            TimeGrid::new(vec![0.0, 1.0, 2.0], vec![id2()], &t),
            Err(HistoryError::StepCountMismatch { .. })
        ));
        let shear = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            TimeGrid::new(vec![0.0, 1.0], vec![shear], &t),
            Err(HistoryError::NotUnitary { step: 0 })
        ));
        assert!(matches!(
            TimeGrid::uniform(vec![], &t),
            Err(HistoryError::Empty)
        ));
    }

    #[test]
    fn family_validation() {
        let t = tol();
        let grid = TimeGrid::uniform(vec![id2()], &t).unwrap();
        assert!(HistoryFamily::new(pauli::z_plus(), grid.clone(), vec![]).is_err());
        assert!(HistoryFamily::new(pauli::z_plus(), grid, vec![Pdi::trivial(3)]).is_err());
    }

    #[test]
    fn chain_operator_single_time_is_projector() {
        let fam = single_time_family(pauli::x_plus(), id2(), z_pdi(), &tol()).unwrap();
        for j in 0..2 {
            let c = fam.chain_operator(&[j]).unwrap();
            assert_eq!(&c, z_pdi().blocks()[j].matrix());
        }
        assert!(matches!(
            fam.chain_operator(&[2]),
            Err(HistoryError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            fam.chain_operator(&[0, 0]),
            Err(HistoryError::WrongHistoryLength { .. })
        ));
    }

    #[test]
    fn chain_operator_trivial_pdis_is_total_evolution() {
        let t = tol();
        let h = pauli::hadamard();
        let y = pauli::y();
        let fam = HistoryFamily::new(
            pauli::z_plus(),
            TimeGrid::uniform(vec![h.clone(), y.clone()], &t).unwrap(),
            vec![Pdi::trivial(2), Pdi::trivial(2)],
        )
        .unwrap();
        let c = fam.chain_operator(&[0, 0]).unwrap();
        assert!(c.frobenius_distance(&(&y * &h)) < 1e-15);
    }

    #[test]
    fn chain_operator_of_orthogonal_projectors_vanishes() {
        let fam = two_step(pauli::x_plus(), z_pdi(), z_pdi());
        assert!(fam.chain_operator(&[0, 1]).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn decoherence_functional_values() {
        let fam = single_time_family(pauli::x_plus(), id2(), z_pdi(), &tol()).unwrap();
        assert!((fam.decoherence_functional(&[0], &[0]).unwrap().re - 0.5).abs() < 1e-15);
        assert!(fam.decoherence_functional(&[0], &[1]).unwrap().norm() < 1e-15);

        let xz = two_step(pauli::z_plus(), x_pdi(), z_pdi());
        let d = xz.decoherence_functional(&[0, 0], &[1, 0]).unwrap();
        assert!((d.norm() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn consistency_of_single_time_family() {
        let fam = single_time_family(pauli::bloch_ket(0.7, 0.2), id2(), x_pdi(), &tol()).unwrap();
        let r = fam
            .consistency_check(&ConsistencyConfig::default(), &tol())
            .unwrap();
        assert!(r.consistent);
        assert!(r.max_offdiag <= 1e-15);
    }

    #[test]
    fn z_then_z_is_consistent() {
        let fam = two_step(pauli::x_plus(), z_pdi(), z_pdi());
        let r = fam
            .consistency_check(&ConsistencyConfig::default(), &tol())
            .unwrap();
        assert!(r.consistent);
        let dist = fam
            .history_distribution(&ConsistencyConfig::default(), &tol())
            .unwrap();
        assert_eq!(dist.len(), 4);
        assert_eq!(dist.get(&[0, 1]), Some(0.0));
        assert!((dist.get(&[0, 0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn x_then_z_is_inconsistent() {
        let fam = two_step(pauli::z_plus(), x_pdi(), z_pdi());
        let r = fam
            .consistency_check(&ConsistencyConfig::default(), &tol())
            .unwrap();
        assert!(!r.consistent);
        assert!((r.max_offdiag - 0.25).abs() < 1e-12);
        assert!(!r.offending_pairs.is_empty());
        assert!((r.diagonal_sum - 1.0).abs() < 1e-12);
        assert!(matches!(
            fam.history_distribution(&ConsistencyConfig::default(), &tol()),
            Err(HistoryError::InconsistentFamily { .. })
        ));
    }

    #[test]
    fn weak_condition_is_recorded() {
        let fam = two_step(pauli::z_plus(), x_pdi(), z_pdi());
        let config = ConsistencyConfig {
            condition: ConsistencyCondition::Weak,
            ..Default::default()
        };
        let r = fam.consistency_check(&config, &tol()).unwrap();
        assert_eq!(r.condition, ConsistencyCondition::Weak);
        // D((x+,z+),(x−,z+)) = 1/4 is real, so the weak condition also fails.
        assert!(!r.consistent);
    }

    #[test]
    fn prep_measure_frameworks() {
        let t = tol();
        let config = ConsistencyConfig::default();
        let z_fam = single_time_family(pauli::x_plus(), id2(), z_pdi(), &t).unwrap();
        let x_fam = single_time_family(pauli::x_plus(), id2(), x_pdi(), &t).unwrap();
        let dz = z_fam.history_distribution(&config, &t).unwrap();
        let dx = x_fam.history_distribution(&config, &t).unwrap();
        assert!((dz.get(&[0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((dz.get(&[1]).unwrap() - 0.5).abs() < 1e-12);
        assert!((dx.get(&[0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(dx.get(&[1]).unwrap().abs() < 1e-12);
        assert!(matches!(
            combine_families(&z_fam, &x_fam, &t),
            Err(HistoryError::Framework(
                FrameworkError::MeaninglessCombination { .. }
            ))
        ));
    }

    #[test]
    fn combine_compatible_families() {
        let t = tol();
        let a = single_time_family(pauli::x_plus(), id2(), z_pdi(), &t).unwrap();
        let b = single_time_family(pauli::x_plus(), id2(), Pdi::trivial(2), &t).unwrap();
        let c = combine_families(&a, &b, &t).unwrap();
        assert_eq!(c.event_pdis()[0].id(), z_pdi().id());
        let other = single_time_family(pauli::z_plus(), id2(), z_pdi(), &t).unwrap();
        assert!(matches!(
            combine_families(&a, &other, &t),
            Err(HistoryError::FamilyMismatch(_))
        ));
    }

    #[test]
    fn mixed_initial_state() {
        let t = tol();
        let rho = DensityOperator::new(
            ComplexMatrix::diagonal(&[C64::new(0.75, 0.0), C64::new(0.25, 0.0)]),
            &t,
        )
        .unwrap();
        let fam = HistoryFamily::new(
            rho,
            TimeGrid::uniform(vec![pauli::hadamard(), id2()], &t).unwrap(),
            vec![x_pdi(), z_pdi()],
        )
        .unwrap();
        // HρH is diagonal in the X basis, so the X-then-Z family decoheres.
        let r = fam
            .consistency_check(&ConsistencyConfig::default(), &t)
            .unwrap();
        assert!(r.consistent, "max_offdiag {}", r.max_offdiag);
        assert!((r.diagonal_sum - 1.0).abs() < 1e-12);
        // The factorized scan and the direct trace formula agree.
        for a in fam.histories() {
            for b in fam.histories() {
                let direct = fam.decoherence_functional(&a, &b).unwrap();
                if a == b {
                    let dist = fam
                        .history_distribution(&ConsistencyConfig::default(), &t)
                        .unwrap();
                    assert!((dist.get(&a).unwrap() - direct.re).abs() < 1e-14);
                } else {
                    assert!(direct.norm() <= r.max_offdiag + 1e-15);
                }
            }
        }
    }

    #[test]
    fn chain_operators_sum_to_evolution() {
        let t = tol();
        let fam = HistoryFamily::new(
            pauli::bloch_ket(1.0, 2.0),
            TimeGrid::uniform(vec![pauli::hadamard(), pauli::y()], &t).unwrap(),
            vec![x_pdi(), z_pdi()],
        )
        .unwrap();
        let total = fam.grid().total_evolution();
        assert!(fam.chain_sum().unwrap().frobenius_distance(&total) <= t.algebraic);
    }

    #[test]
    fn single_time_distribution_matches_born() {
        let t = tol();
        let psi = pauli::bloch_ket(0.4, -1.3);
        let fam = single_time_family(psi.clone(), pauli::hadamard(), z_pdi(), &t).unwrap();
        let dist = fam
            .history_distribution(&ConsistencyConfig::default(), &t)
            .unwrap();
        let evolved = Ket::new(pauli::hadamard().apply(psi.amplitudes()).unwrap()).unwrap();
        let born = born_distribution(&evolved.into(), &z_pdi(), &t).unwrap();
        for j in 0..2 {
            assert!((dist.get(&[j]).unwrap() - born.probs()[j]).abs() <= t.probability);
        }
    }

    #[test]
    fn too_many_histories() {
        let t = tol();
        let basis: Vec<Ket> = (0..8).map(|k| Ket::basis(8, k)).collect();
        let f = Pdi::from_basis(&basis, &t).unwrap();
        let id = ComplexMatrix::identity(8);
        let fam = HistoryFamily::new(
            Ket::basis(8, 0),
            TimeGrid::uniform(vec![id.clone(); 5], &t).unwrap(),
            vec![f; 5],
        )
        .unwrap();
        assert_eq!(fam.history_count(), 32768);
        assert!(matches!(
            fam.consistency_check(&ConsistencyConfig::default(), &t),
            Err(HistoryError::TooManyHistories { .. })
        ));
    }

    #[test]
    fn history_enumeration_order() {
        let fam = two_step(pauli::z_plus(), z_pdi(), x_pdi());
        let all: Vec<Vec<usize>> = fam.histories().collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
