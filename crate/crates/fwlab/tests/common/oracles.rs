//! Reference computations that share no code with the library: closed-form
//! 2×2 algebra, a plain statevector simulation of teleportation, and the
//! Choi matrix built from vectorized Kraus operators.

use std::f64::consts::FRAC_1_SQRT_2;

use fwlab_core::C64;

pub type M2 = [[C64; 2]; 2];

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Largest singular value of a 2×2 matrix from the characteristic
/// polynomial of M†M.
pub fn m2_spectral_norm(m: &M2) -> f64 {
    let t: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm_sqr();
    let disc = (t * t - 4.0 * det).max(0.0);
    ((t + disc.sqrt()) / 2.0).sqrt()
}

pub fn m2_commutator_norm(a: &M2, b: &M2) -> f64 {
    let ab = m2_mul(a, b);
    let ba = m2_mul(b, a);
    let mut d = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            d[i][j] = ab[i][j] - ba[i][j];
        }
    }
    m2_spectral_norm(&d)
}

pub fn dyad2(v: [C64; 2]) -> M2 {
    [
        [v[0] * v[0].conj(), v[0] * v[1].conj()],
        [v[1] * v[0].conj(), v[1] * v[1].conj()],
    ]
}

pub fn z_plus() -> [C64; 2] {
    [c(1.0, 0.0), c(0.0, 0.0)]
}

pub fn z_minus() -> [C64; 2] {
    [c(0.0, 0.0), c(1.0, 0.0)]
}

pub fn x_plus() -> [C64; 2] {
    [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]
}

pub fn x_minus() -> [C64; 2] {
    [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]
}

pub fn bloch(theta: f64, phi: f64) -> [C64; 2] {
    [
        c((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

pub fn overlap_sq(a: [C64; 2], b: [C64; 2]) -> f64 {
    (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr()
}

/// Bob's qubit after the correction for each outcome m = 2·m_A + m_a, left
/// unnormalized so its squared norm is the outcome probability.
///
/// Qubit order (A, a, b) with basis index 4A + 2a + b; the pair starts in
/// (|00⟩ + |11⟩)/√2.
pub fn teleport_statevector(input: [C64; 2]) -> [[C64; 2]; 4] {
    let mut s = [c(0.0, 0.0); 8];
    for a_bit in 0..2 {
        s[4 * a_bit] = input[a_bit] * FRAC_1_SQRT_2;
        s[4 * a_bit + 3] = input[a_bit] * FRAC_1_SQRT_2;
    }
    // CNOT with A as control and a as target.
    for idx in 4..8 {
        if idx & 2 == 0 {
            s.swap(idx, idx | 2);
        }
    }
    // Hadamard on A.
    let mut t = [c(0.0, 0.0); 8];
    for low in 0..4 {
        t[low] = (s[low] + s[4 + low]) * FRAC_1_SQRT_2;
        t[4 + low] = (s[low] - s[4 + low]) * FRAC_1_SQRT_2;
    }
    let mut out = [[c(0.0, 0.0); 2]; 4];
    for m_big in 0..2 {
        for m_small in 0..2 {
            let base = 4 * m_big + 2 * m_small;
            let mut bob = [t[base], t[base + 1]];
            if m_small == 1 {
                bob.swap(0, 1);
            }
            if m_big == 1 {
                bob[1] = -bob[1];
            }
            out[2 * m_big + m_small] = bob;
        }
    }
    out
}

/// Weights w[m][s][b]: the input's component s in the framework basis, Bell
/// outcome m, and Bob's corrected component b, obtained by teleporting each
/// projected input separately.
pub fn teleport_weights(input: [C64; 2], basis: [[C64; 2]; 2]) -> [[[f64; 2]; 2]; 4] {
    let mut w = [[[0.0; 2]; 2]; 4];
    for s in 0..2 {
        let amp = basis[s][0].conj() * input[0] + basis[s][1].conj() * input[1];
        let projected = [basis[s][0] * amp, basis[s][1] * amp];
        let bobs = teleport_statevector(projected);
        for m in 0..4 {
            for b in 0..2 {
                let o = basis[b][0].conj() * bobs[m][0] + basis[b][1].conj() * bobs[m][1];
                w[m][s][b] = o.norm_sqr();
            }
        }
    }
    w
}

/// Choi matrix Σ_k |v_k⟩⟨v_k| with v_k[2i + a] = K_k[a][i].
pub fn choi_from_kraus(kraus: &[M2]) -> [[C64; 4]; 4] {
    let mut j = [[c(0.0, 0.0); 4]; 4];
    for k in kraus {
        let mut v = [c(0.0, 0.0); 4];
        for i in 0..2 {
            for a in 0..2 {
                v[2 * i + a] = k[a][i];
            }
        }
        for r in 0..4 {
            for col in 0..4 {
                j[r][col] += v[r] * v[col].conj();
            }
        }
    }
    j
}

pub fn choi_distance_to_identity(kraus: &[M2]) -> f64 {
    let id = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let a = choi_from_kraus(kraus);
    let b = choi_from_kraus(&[id]);
    let mut sum = 0.0;
    for r in 0..4 {
        for col in 0..4 {
            sum += (a[r][col] - b[r][col]).norm_sqr();
        }
    }
    sum.sqrt()
}

/// Flip probability ⟨to| E(|from⟩⟨from|) |to⟩.
pub fn flip(kraus: &[M2], from: [C64; 2], to: [C64; 2]) -> f64 {
    kraus
        .iter()
        .map(|k| {
            let image = [
                k[0][0] * from[0] + k[0][1] * from[1],
                k[1][0] * from[0] + k[1][1] * from[1],
            ];
            overlap_sq(to, image)
        })
        .sum()
}
