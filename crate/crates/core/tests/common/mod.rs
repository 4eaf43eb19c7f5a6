//! Seeded random inputs for the property tests. Proptest drives the seeds,
//! so failing cases shrink to a small seed and dimension.

#![allow(dead_code)]

use fwlab_core::frameworks::DensityOperator;
use fwlab_core::projective::{Pdi, Projector};
use fwlab_core::{ComplexMatrix, Ket, Tolerances, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_ket(rng: &mut ChaCha8Rng, d: usize) -> Ket {
    loop {
        let v: Vec<C64> = (0..d).map(|_| random_complex(rng)).collect();
        if let Ok(k) = Ket::normalized(v) {
            return k;
        }
    }
}

/// Orthonormal basis by twice-iterated Gram-Schmidt.
pub fn random_basis(rng: &mut ChaCha8Rng, d: usize) -> Vec<Ket> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| random_complex(rng)).collect();
        for _ in 0..2 {
            for b in &basis {
                let ov: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= bi * ov;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            basis.push(v.iter().map(|z| z / norm).collect());
        }
    }
    basis.into_iter().map(|v| Ket::new(v).unwrap()).collect()
}

/// Unitary whose columns are a random orthonormal basis.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let basis = random_basis(rng, d);
    ComplexMatrix::from_fn(d, d, |r, c| basis[c].amplitudes()[r])
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| random_complex(rng));
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Convex mixture of a few random pure states.
pub fn random_density(rng: &mut ChaCha8Rng, d: usize, tol: &Tolerances) -> DensityOperator {
    let terms = rng.random_range(1..=3);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(d, d);
    for w in weights {
        m = &m + &random_ket(rng, d).dyad().scale_real(w / total);
    }
    DensityOperator::new(m, tol).unwrap()
}

/// Groups of a shuffled 0..d, each nonempty.
pub fn random_partition(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        idx.swap(i, rng.random_range(0..=i));
    }
    let mut groups = vec![vec![idx[0]]];
    for &i in &idx[1..] {
        if rng.random_bool(0.5) {
            groups.push(vec![i]);
        } else {
            groups.last_mut().unwrap().push(i);
        }
    }
    groups
}

pub fn pdi_from_groups(basis: &[Ket], groups: &[Vec<usize>], tol: &Tolerances) -> Pdi {
    let d = basis.len();
    let blocks = groups
        .iter()
        .map(|g| {
            let m = g.iter().fold(ComplexMatrix::zeros(d, d), |acc, &i| {
                &acc + &basis[i].dyad()
            });
            Projector::new(m, tol).unwrap()
        })
        .collect();
    Pdi::new(blocks, None, tol).unwrap()
}

/// A coarse-graining of a random basis.
pub fn random_pdi(rng: &mut ChaCha8Rng, d: usize, tol: &Tolerances) -> Pdi {
    let basis = random_basis(rng, d);
    let groups = random_partition(rng, d);
    pdi_from_groups(&basis, &groups, tol)
}

/// Largest Frobenius violation of the PDI conditions.
pub fn pdi_defect(pdi: &Pdi) -> f64 {
    let d = pdi.dim();
    let mut worst: f64 = 0.0;
    let mut sum = ComplexMatrix::zeros(d, d);
    for (j, p) in pdi.blocks().iter().enumerate() {
        let m = p.matrix();
        worst = worst.max(m.frobenius_distance(&m.adjoint()));
        worst = worst.max((m * m).frobenius_distance(m));
        for q in &pdi.blocks()[j + 1..] {
            worst = worst.max((m * q.matrix()).frobenius_norm());
        }
        sum = &sum + m;
    }
    worst.max(sum.frobenius_distance(&ComplexMatrix::identity(d)))
}
