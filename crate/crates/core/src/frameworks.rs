//! PDIs used as sample spaces.
//!
//! Probabilities live on a single framework at a time. An [`Event`] is a set
//! of block indices of one PDI and a [`Distribution`] is a probability vector
//! over the blocks of one PDI; both carry the [`FrameworkId`] of the PDI they
//! belong to, and every operation that mixes two of them checks it.
//! Compatible frameworks are combined through their common refinement;
//! incompatible ones cannot be combined at all.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::numerics::{
    hermitian_eigendecomposition, ComplexMatrix, Ket, NumericsError, Tolerances,
};
use crate::projective::{
    commutator_norm, BlockLabel, FrameworkId, Pdi, ProjectiveError, Projector,
};

/// Largest PDI whose full event algebra may be enumerated.
pub const MAX_ENUMERABLE_BLOCKS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameworkError {
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("event belongs to framework {event} but the distribution to {distribution}")]
    FrameworkMismatch {
        event: FrameworkId,
        distribution: FrameworkId,
    },
    #[error(
        "frameworks are incompatible (max ‖P_j Q_k − Q_k P_j‖ = {max_commutator_norm:.6}); \
         they have no common refinement"
    )]
    IncompatibleFrameworks { max_commutator_norm: f64 },
    #[error("projector is not in the event algebra of this framework: {0}")]
    NotInAlgebra(String),
    #[error(
        "meaningless combination: events come from incompatible frameworks \
         (max commutator norm {max_commutator_norm:.6}); the single framework rule forbids combining them"
    )]
    MeaninglessCombination { max_commutator_norm: f64 },
    #[error("block index {index} out of range for a PDI with {len} blocks")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("not a density operator: {0}")]
    NotADensityOperator(String),
    #[error("framework {0} is not registered")]
    UnknownFramework(FrameworkId),
    #[error("event algebra of {0} blocks is too large to enumerate (cap {MAX_ENUMERABLE_BLOCKS})")]
    TooManyBlocks(usize),
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Hermiticity and positivity are checked against `tol.algebraic`, the
    /// trace against `tol.probability`.
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self, FrameworkError> {
        matrix.ensure_square()?;
        let defect = matrix.hermiticity_defect();
        if defect > tol.algebraic {
            return Err(FrameworkError::NotADensityOperator(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol.probability {
            return Err(FrameworkError::NotADensityOperator(format!(
                "trace is {trace}, not 1"
            )));
        }
        let eig = hermitian_eigendecomposition(&matrix, tol)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -tol.algebraic {
            return Err(FrameworkError::NotADensityOperator(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn from_ket(ket: &Ket) -> Self {
        Self { matrix: ket.dyad() }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Either a normalized ket or a density operator.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(Ket),
    Mixed(DensityOperator),
}

impl From<Ket> for QuantumState {
    fn from(k: Ket) -> Self {
        QuantumState::Pure(k)
    }
}

impl From<DensityOperator> for QuantumState {
    fn from(r: DensityOperator) -> Self {
        QuantumState::Mixed(r)
    }
}

impl QuantumState {
    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(k) => k.dim(),
            QuantumState::Mixed(r) => r.dim(),
        }
    }

    /// ⟨ψ|M|ψ⟩ or Tr(ρM), real part.
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<f64, FrameworkError> {
        if m.dim() != self.dim() {
            return Err(FrameworkError::DimensionMismatch {
                left: self.dim(),
                right: m.dim(),
            });
        }
        Ok(match self {
            QuantumState::Pure(k) => k.expectation(m)?.re,
            QuantumState::Mixed(r) => r.matrix.matmul(m)?.trace().re,
        })
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        match self {
            QuantumState::Pure(k) => k.dyad(),
            QuantumState::Mixed(r) => r.matrix.clone(),
        }
    }
}

/// Probabilities p_j over the blocks of one PDI.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    framework: FrameworkId,
    probs: Vec<f64>,
    // canonical position -> local block index
    local_of_canonical: Vec<usize>,
}

impl Distribution {
    /// Accepts any probability vector over `pdi`, not only a Born one. Entries
    /// below `-tol.probability` are rejected; smaller negative rounding noise
    /// is clamped to zero. The sum must be 1 within `tol.probability`.
    pub fn new(pdi: &Pdi, probs: Vec<f64>, tol: &Tolerances) -> Result<Self, FrameworkError> {
        if probs.len() != pdi.len() {
            return Err(FrameworkError::InvalidDistribution(format!(
                "{} probabilities for {} blocks",
                probs.len(),
                pdi.len()
            )));
        }
        let mut clean = Vec::with_capacity(probs.len());
        for (j, &p) in probs.iter().enumerate() {
            if !p.is_finite() {
                return Err(FrameworkError::InvalidDistribution(format!(
                    "p[{j}] is not finite"
                )));
            }
            if p < -tol.probability {
                return Err(FrameworkError::InvalidDistribution(format!(
                    "p[{j}] = {p:e} is negative"
                )));
            }
            clean.push(p.max(0.0));
        }
        let total: f64 = clean.iter().sum();
        if (total - 1.0).abs() > tol.probability {
            return Err(FrameworkError::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let local_of_canonical = (0..pdi.len()).map(|c| pdi.block_at_canonical(c)).collect();
        Ok(Self {
            framework: pdi.id().clone(),
            probs: clean,
            local_of_canonical,
        })
    }

    pub fn framework(&self) -> &FrameworkId {
        &self.framework
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// p_j = ⟨ψ|P_j|ψ⟩ (or Tr(ρ P_j)) for every block of `f`.
pub fn born_distribution(
    state: &QuantumState,
    f: &Pdi,
    tol: &Tolerances,
) -> Result<Distribution, FrameworkError> {
    if state.dim() != f.dim() {
        return Err(FrameworkError::DimensionMismatch {
            left: state.dim(),
            right: f.dim(),
        });
    }
    let probs = f
        .blocks()
        .iter()
        .map(|b| state.expectation(b.matrix()))
        .collect::<Result<Vec<_>, _>>()?;
    Distribution::new(f, probs, tol)
}

/// A member of a framework's Boolean event algebra: the sum of a subset of
/// its blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    framework: FrameworkId,
    indices: BTreeSet<usize>,
    canonical: BTreeSet<usize>,
    projector: Projector,
}

impl Event {
    pub fn new(
        pdi: &Pdi,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self, FrameworkError> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&j| j >= pdi.len()) {
            return Err(FrameworkError::IndexOutOfRange {
                index: bad,
                len: pdi.len(),
            });
        }
        let dim = pdi.dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for &j in &indices {
            m = &m + pdi.blocks()[j].matrix();
        }
        let rank = indices.iter().map(|&j| pdi.blocks()[j].rank()).sum();
        let projector = Projector::from_sum(m, rank);
        Ok(Self {
            framework: pdi.id().clone(),
            canonical: indices.iter().map(|&j| pdi.canonical_position(j)).collect(),
            indices,
            projector,
        })
    }

    pub fn framework(&self) -> &FrameworkId {
        &self.framework
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.indices
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }

    /// NOT: the complementary index set in the same framework.
    pub fn complement(&self, pdi: &Pdi) -> Result<Self, FrameworkError> {
        self.check_owner(pdi)?;
        let canonical: BTreeSet<usize> = (0..pdi.len())
            .filter(|c| !self.canonical.contains(c))
            .collect();
        Event::new(pdi, canonical.iter().map(|&c| pdi.block_at_canonical(c)))
    }

    fn check_owner(&self, pdi: &Pdi) -> Result<(), FrameworkError> {
        if &self.framework != pdi.id() {
            return Err(FrameworkError::FrameworkMismatch {
                event: self.framework.clone(),
                distribution: pdi.id().clone(),
            });
        }
        Ok(())
    }
}

/// Every element of the event algebra of `pdi`, 2^n of them.
pub fn all_events(pdi: &Pdi) -> Result<Vec<Event>, FrameworkError> {
    let n = pdi.len();
    if n > MAX_ENUMERABLE_BLOCKS {
        return Err(FrameworkError::TooManyBlocks(n));
    }
    (0u32..(1u32 << n))
        .map(|mask| Event::new(pdi, (0..n).filter(|j| mask & (1 << j) != 0)))
        .collect()
}

/// Σ_{j ∈ e} p_j, refusing events from another framework.
pub fn event_probability(d: &Distribution, e: &Event) -> Result<f64, FrameworkError> {
    if d.framework != e.framework {
        return Err(FrameworkError::FrameworkMismatch {
            event: e.framework.clone(),
            distribution: d.framework.clone(),
        });
    }
    Ok(e.canonical
        .iter()
        .map(|&c| d.probs[d.local_of_canonical[c]])
        .sum())
}

/// Largest spectral-norm commutator over all block pairs of `f` and `g`.
pub fn max_commutator_norm(f: &Pdi, g: &Pdi) -> Result<f64, FrameworkError> {
    if f.dim() != g.dim() {
        return Err(FrameworkError::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    let mut worst: f64 = 0.0;
    for p in f.blocks() {
        for q in g.blocks() {
            worst = worst.max(commutator_norm(p.matrix(), q.matrix())?);
        }
    }
    Ok(worst)
}

/// True iff every block of `f` commutes with every block of `g`.
pub fn are_compatible(f: &Pdi, g: &Pdi, tol: &Tolerances) -> Result<bool, FrameworkError> {
    Ok(max_commutator_norm(f, g)? <= tol.algebraic)
}

/// The PDI of all nonzero products P_j Q_k, labeled `(j, k)` in row-major order.
pub fn common_refinement(f: &Pdi, g: &Pdi, tol: &Tolerances) -> Result<Pdi, FrameworkError> {
    let max_commutator_norm = max_commutator_norm(f, g)?;
    if max_commutator_norm > tol.algebraic {
        return Err(FrameworkError::IncompatibleFrameworks {
            max_commutator_norm,
        });
    }
    let mut blocks = Vec::new();
    let mut labels = Vec::new();
    for (j, p) in f.blocks().iter().enumerate() {
        for (k, q) in g.blocks().iter().enumerate() {
            let product = p.matrix().matmul(q.matrix())?.hermitian_part();
            let trace = product.trace().re;
            if trace < 0.5 {
                continue;
            }
            blocks.push(Projector::from_sum(product, trace.round() as usize));
            labels.push(BlockLabel::Pair(j, k));
        }
    }
    // Products of nearly commuting blocks are only projectors up to the
    // commutator size, so validation gets a little slack.
    let slack = Tolerances {
        algebraic: 10.0 * tol.algebraic,
        ..*tol
    };
    Ok(Pdi::new(blocks, Some(labels), &slack)?)
}

/// Finds S with p = Σ_{j∈S} P_j, if there is one.
pub fn event_in_algebra(p: &Projector, f: &Pdi, tol: &Tolerances) -> Result<Event, FrameworkError> {
    if p.dim() != f.dim() {
        return Err(FrameworkError::DimensionMismatch {
            left: p.dim(),
            right: f.dim(),
        });
    }
    let mut indices = Vec::new();
    for (j, b) in f.blocks().iter().enumerate() {
        let compressed = b.matrix().matmul(p.matrix())?.matmul(b.matrix())?;
        if compressed.frobenius_distance(b.matrix()) <= tol.algebraic {
            indices.push(j);
        } else if compressed.frobenius_norm() > tol.algebraic {
            return Err(FrameworkError::NotInAlgebra(format!(
                "block {j} is neither contained in nor orthogonal to the projector"
            )));
        }
    }
    let event = Event::new(f, indices)?;
    let residual = event.projector.matrix().frobenius_distance(p.matrix());
    if residual > tol.algebraic {
        return Err(FrameworkError::NotInAlgebra(format!(
            "projector differs from the nearest event by {residual:.3e}"
        )));
    }
    Ok(event)
}

/// Boolean connectives available inside one framework.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
}

/// Append-only map from framework ids to their PDIs.
#[derive(Debug, Default)]
pub struct FrameworkRegistry {
    frameworks: RwLock<HashMap<FrameworkId, Arc<Pdi>>>,
}

impl FrameworkRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `pdi` unless a structurally equal framework is already present,
    /// and returns the registered instance.
    pub fn register(&self, pdi: Pdi) -> Arc<Pdi> {
        if let Some(existing) = self.get(pdi.id()) {
            return existing;
        }
        let mut map = self.frameworks.write().expect("registry lock poisoned");
        map.entry(pdi.id().clone())
            .or_insert_with(|| Arc::new(pdi))
            .clone()
    }

    pub fn get(&self, id: &FrameworkId) -> Option<Arc<Pdi>> {
        self.frameworks
            .read()
            .expect("registry lock poisoned")
            .get(id)
            .cloned()
    }

    pub fn len(&self) -> usize {
        self.frameworks
            .read()
            .expect("registry lock poisoned")
            .len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Combines two events with AND / OR.
///
/// Events of one framework combine in its Boolean algebra. Events of two
/// compatible frameworks are lifted into their common refinement, which is
/// registered. Events of incompatible frameworks are never combined.
pub fn combine_events(
    e1: &Event,
    e2: &Event,
    connective: Connective,
    registry: &FrameworkRegistry,
    tol: &Tolerances,
) -> Result<Event, FrameworkError> {
    let f = registry
        .get(&e1.framework)
        .ok_or_else(|| FrameworkError::UnknownFramework(e1.framework.clone()))?;
    if e1.framework == e2.framework {
        let canonical = apply(connective, &e1.canonical, &e2.canonical);
        return Event::new(&f, canonical.iter().map(|&c| f.block_at_canonical(c)));
    }
    let g = registry
        .get(&e2.framework)
        .ok_or_else(|| FrameworkError::UnknownFramework(e2.framework.clone()))?;
    let refined = match common_refinement(&f, &g, tol) {
        Ok(r) => registry.register(r),
        Err(FrameworkError::IncompatibleFrameworks {
            max_commutator_norm,
        }) => {
            return Err(FrameworkError::MeaninglessCombination {
                max_commutator_norm,
            })
        }
        Err(other) => return Err(other),
    };
    let lifted1 = event_in_algebra(&e1.projector, &refined, tol)?;
    let lifted2 = event_in_algebra(&e2.projector, &refined, tol)?;
    let indices = apply(connective, &lifted1.indices, &lifted2.indices);
    Event::new(&refined, indices)
}

fn apply(connective: Connective, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
    match connective {
        Connective::And => a.intersection(b).copied().collect(),
        Connective::Or => a.union(b).copied().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{pauli, C64};
    use crate::projective::{projector_from_ket, spectral_pdi, Observable};

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

    #[test]
    fn born_eigenstate() {
        let d = born_distribution(&pauli::z_plus().into(), &z_pdi(), &tol()).unwrap();
        assert_eq!(d.probs(), &[1.0, 0.0]);
    }

    #[test]
    fn born_x_plus_over_z() {
        let d = born_distribution(&pauli::x_plus().into(), &z_pdi(), &tol()).unwrap();
        assert!((d.probs()[0] - 0.5).abs() < 1e-12);
        assert!((d.probs()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn born_trivial_framework() {
        let psi = pauli::bloch_ket(0.3, 1.1);
        let d = born_distribution(&psi.into(), &Pdi::trivial(2), &tol()).unwrap();
        assert!((d.probs()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn born_mixed_state() {
        let rho = DensityOperator::new(ComplexMatrix::identity(2).scale_real(0.5), &tol()).unwrap();
        let d = born_distribution(&rho.into(), &x_pdi(), &tol()).unwrap();
        assert!((d.probs()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn born_dimension_mismatch() {
        let err = born_distribution(&pauli::z_plus().into(), &Pdi::trivial(3), &tol()).unwrap_err();
        assert!(matches!(err, FrameworkError::DimensionMismatch { .. }));
    }

    #[test]
    fn density_operator_validation() {
        let t = tol();
        assert!(DensityOperator::new(ComplexMatrix::identity(2), &t).is_err());
        let neg = ComplexMatrix::diagonal(&[C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]);
        assert!(DensityOperator::new(neg, &t).is_err());
        let skew = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.0, 0.5]]).unwrap();
        assert!(DensityOperator::new(skew, &t).is_err());
    }

    #[test]
    fn distribution_rejects_negative_and_unnormalized() {
        let f = z_pdi();
        let t = tol();
        assert!(Distribution::new(&f, vec![1.1, -0.1], &t).is_err());
        assert!(Distribution::new(&f, vec![0.5, 0.4], &t).is_err());
        assert!(Distribution::new(&f, vec![1.0], &t).is_err());
        let d = Distribution::new(&f, vec![1.0 + 1e-13, -1e-13], &t).unwrap();
        assert_eq!(d.probs()[1], 0.0);
    }

    #[test]
    fn event_probabilities() {
        let t = tol();
        let f = z_pdi();
        let d = Distribution::new(&f, vec![0.5, 0.5], &t).unwrap();
        assert_eq!(
            event_probability(&d, &Event::new(&f, [0, 1]).unwrap()).unwrap(),
            1.0
        );
        assert_eq!(
            event_probability(&d, &Event::new(&f, []).unwrap()).unwrap(),
            0.0
        );

        let three =
            Pdi::from_basis(&[Ket::basis(3, 0), Ket::basis(3, 1), Ket::basis(3, 2)], &t).unwrap();
        let third = 1.0 / 3.0;
        let d3 = Distribution::new(&three, vec![third; 3], &t).unwrap();
        let p = event_probability(&d3, &Event::new(&three, [0, 1]).unwrap()).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn event_probability_guards_framework() {
        let t = tol();
        let d = Distribution::new(&z_pdi(), vec![0.5, 0.5], &t).unwrap();
        let e = Event::new(&x_pdi(), [0]).unwrap();
        assert!(matches!(
            event_probability(&d, &e),
            Err(FrameworkError::FrameworkMismatch { .. })
        ));
        assert!(matches!(
            Event::new(&x_pdi(), [2]),
            Err(FrameworkError::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn event_probability_follows_blocks_across_orderings() {
        let t = tol();
        let zp = projector_from_ket(&pauli::z_plus());
        let zm = projector_from_ket(&pauli::z_minus());
        let a = Pdi::new(vec![zp.clone(), zm.clone()], None, &t).unwrap();
        let b = Pdi::new(vec![zm, zp], None, &t).unwrap();
        let d = Distribution::new(&a, vec![0.9, 0.1], &t).unwrap();
        // Block 0 of `b` is [z−].
        let e = Event::new(&b, [0]).unwrap();
        assert!((event_probability(&d, &e).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn compatibility() {
        let t = tol();
        assert!(are_compatible(&z_pdi(), &z_pdi(), &t).unwrap());
        assert!(!are_compatible(&z_pdi(), &x_pdi(), &t).unwrap());
        let zi = pdi_of(pauli::z().kron(&pauli::identity()));
        let ix = pdi_of(pauli::identity().kron(&pauli::x()));
        assert!(are_compatible(&zi, &ix, &t).unwrap());
        assert!(matches!(
            are_compatible(&z_pdi(), &Pdi::trivial(4), &t),
            Err(FrameworkError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn refinement_with_trivial_framework() {
        let t = tol();
        let r = common_refinement(&Pdi::trivial(2), &z_pdi(), &t).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.id(), z_pdi().id());
        assert_eq!(r.label(1), Some(&BlockLabel::Pair(0, 1)));
    }

    #[test]
    fn refinement_of_two_qubit_z_frameworks() {
        let t = tol();
        let zi = pdi_of(pauli::z().kron(&pauli::identity()));
        let iz = pdi_of(pauli::identity().kron(&pauli::z()));
        let r = common_refinement(&zi, &iz, &t).unwrap();
        assert_eq!(r.len(), 4);
        let computational: Vec<Ket> = (0..4).map(|k| Ket::basis(4, k)).collect();
        assert_eq!(r.id(), Pdi::from_basis(&computational, &t).unwrap().id());
        for b in r.blocks() {
            assert_eq!(b.rank(), 1);
        }
    }

    #[test]
    fn refinement_of_incompatible_frameworks_fails() {
        let err = common_refinement(&z_pdi(), &x_pdi(), &tol()).unwrap_err();
        match err {
            FrameworkError::IncompatibleFrameworks {
                max_commutator_norm,
            } => assert!((max_commutator_norm - 0.5).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn events_in_algebra() {
        let t = tol();
        let f = z_pdi();
        let all = event_in_algebra(&Projector::identity(2), &f, &t).unwrap();
        assert_eq!(
            all.indices().iter().copied().collect::<Vec<_>>(),
            vec![0, 1]
        );
        let zp = projector_from_ket(&pauli::z_plus());
        let e = event_in_algebra(&zp, &f, &t).unwrap();
        assert_eq!(e.indices().iter().copied().collect::<Vec<_>>(), vec![0]);
        let xp = projector_from_ket(&pauli::x_plus());
        assert!(matches!(
            event_in_algebra(&xp, &f, &t),
            Err(FrameworkError::NotInAlgebra(_))
        ));
    }

    #[test]
    fn combine_within_one_framework() {
        let t = tol();
        let reg = FrameworkRegistry::new();
        let f = reg.register(z_pdi());
        let e0 = Event::new(&f, [0]).unwrap();
        let e1 = Event::new(&f, [1]).unwrap();
        let or = combine_events(&e0, &e1, Connective::Or, &reg, &t).unwrap();
        assert_eq!(or.indices().len(), 2);
        let and = combine_events(&e0, &e1, Connective::And, &reg, &t).unwrap();
        assert!(and.indices().is_empty());
        assert!(and.projector().is_zero());
    }

    #[test]
    fn combine_through_refinement() {
        let t = tol();
        let reg = FrameworkRegistry::new();
        let zi = reg.register(pdi_of(pauli::z().kron(&pauli::identity())));
        let iz = reg.register(pdi_of(pauli::identity().kron(&pauli::z())));
        let a = Event::new(&zi, [0]).unwrap(); // first qubit up
        let b = Event::new(&iz, [0]).unwrap(); // second qubit up
        let both = combine_events(&a, &b, Connective::And, &reg, &t).unwrap();
        assert_eq!(both.projector().rank(), 1);
        let expected = projector_from_ket(&Ket::basis(4, 0));
        assert!(
            both.projector()
                .matrix()
                .frobenius_distance(expected.matrix())
                < 1e-12
        );
        assert_eq!(reg.len(), 3);
    }

    #[test]
    fn combine_incompatible_is_meaningless() {
        let t = tol();
        let reg = FrameworkRegistry::new();
        let z = reg.register(z_pdi());
        let x = reg.register(x_pdi());
        let err = combine_events(
            &Event::new(&z, [0]).unwrap(),
            &Event::new(&x, [1]).unwrap(),
            Connective::And,
            &reg,
            &t,
        )
        .unwrap_err();
        assert!(matches!(err, FrameworkError::MeaninglessCombination { .. }));
        assert!(err.to_string().contains("single framework rule"));
    }

    #[test]
    fn combine_requires_registration() {
        let t = tol();
        let reg = FrameworkRegistry::new();
        let f = z_pdi();
        let e = Event::new(&f, [0]).unwrap();
        assert!(matches!(
            combine_events(&e, &e, Connective::Or, &reg, &t),
            Err(FrameworkError::UnknownFramework(_))
        ));
    }

    #[test]
    fn complement_and_enumeration() {
        let f = z_pdi();
        let e = Event::new(&f, [0]).unwrap();
        let c = e.complement(&f).unwrap();
        assert_eq!(c.indices().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(all_events(&f).unwrap().len(), 4);
        assert!(e.complement(&x_pdi()).is_err());
    }

    #[test]
    fn registry_deduplicates_structurally() {
        let reg = FrameworkRegistry::new();
        let a = reg.register(z_pdi());
        let b =
            reg.register(Pdi::from_basis(&[pauli::z_plus(), pauli::z_minus()], &tol()).unwrap());
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(reg.len(), 1);
    }
}
