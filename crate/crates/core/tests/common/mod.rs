//! Oracles and fixtures shared by the integration tests. Nothing here calls
//! the Klein-Voronoi machinery; the oracles are brute force on purpose.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use sl3z::exact::{cubic_form, Mat3Z, Vec3Z};
use sl3z::spectra::{spectrum_class, SpectrumClass};
use sl3z::{Family, HessenbergType};

/// The complexity-at-most-4 table: type, ς and the printed count.
pub const TABLE: [(&str, i64, usize); 18] = [
    ("0,1|0,0,1", 1, 0),
    ("0,1|1,0,2", 2, 12),
    ("0,1|1,1,2", 2, 12),
    ("0,1|1,0,3", 3, 6),
    ("0,1|1,1,3", 3, 10),
    ("0,1|1,2,3", 3, 10),
    ("0,1|2,0,3", 3, 14),
    ("0,1|2,1,3", 3, 10),
    ("0,1|2,2,3", 3, 10),
    ("1,2|0,0,1", 4, 94),
    ("0,1|1,0,4", 4, 6),
    ("0,1|1,1,4", 4, 8),
    ("0,1|1,2,4", 4, 10),
    ("0,1|1,3,4", 4, 8),
    ("0,1|3,0,4", 4, 10),
    ("0,1|3,1,4", 4, 12),
    ("0,1|3,2,4", 4, 8),
    ("0,1|3,3,4", 4, 8),
];

pub fn ty(s: &str) -> HessenbergType {
    s.parse().unwrap()
}

pub fn family(s: &str, v: [i64; 3]) -> Family {
    Family::new(ty(s), Vec3Z::from_i64(v)).unwrap()
}

pub fn omega0() -> Family {
    family("0,1|0,0,1", [1, 0, 0])
}

/// Six assorted families used by the symbolic checks.
pub fn assorted() -> Vec<Family> {
    vec![
        omega0(),
        family("0,1|1,0,2", [1, 0, 1]),
        family("0,1|1,1,2", [1, 0, 1]),
        Family::canonical(ty("0,1|2,1,3")).unwrap(),
        Family::canonical(ty("1,2|0,0,1")).unwrap(),
        family("1,2|1,1,3", [0, 0, -1]),
    ]
}

/// Brute-force minimum of `|F_M|` over nonzero `w` with `‖w‖∞ ≤ b`, straight
/// from the definition `|det(w, Mw, M²w)|`.
pub fn brute_min(m: &Mat3Z, b: i64) -> BigInt {
    let mut best: Option<BigInt> = None;
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                if x == 0 && y == 0 && z == 0 {
                    continue;
                }
                let w = Vec3Z::from_i64([x, y, z]);
                let v = sl3z::exact::md_characteristic(m, &w);
                if best.as_ref().is_none_or(|cur| v < *cur) {
                    best = Some(v);
                }
            }
        }
    }
    best.unwrap()
}

/// Some unimodular `X` with `‖X‖∞ ≤ bound` and `X M1 X⁻¹ = M2`, if one
/// exists. Since `M1` is cyclic, `X` is fixed by `u = X e1` through
/// `X·[e1, M1e1, M1²e1] = [u, M2u, M2²u]`, so it is enough to scan `u`.
pub fn conjugator_oracle(m1: &Mat3Z, m2: &Mat3Z, bound: i64) -> Option<Mat3Z> {
    let e1 = Vec3Z::unit(0);
    let k1 = Mat3Z::from_cols(&e1, &m1.mul_vec(&e1), &m1.mul_vec(&m1.mul_vec(&e1)));
    let d = k1.det();
    if d.is_zero() {
        return None;
    }
    let adj = k1.adjugate();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                let u = Vec3Z::from_i64([a, b, c]);
                if u.is_zero() {
                    continue;
                }
                let k2 = Mat3Z::from_cols(&u, &m2.mul_vec(&u), &m2.mul_vec(&m2.mul_vec(&u)));
                // X = K2 · adj(K1) / det(K1)
                let num = &k2 * &adj;
                if num.0.iter().flatten().any(|e| !(e % &d).is_zero()) {
                    continue;
                }
                let x = Mat3Z(std::array::from_fn(|i| std::array::from_fn(|j| &num.0[i][j] / &d)));
                if x.max_abs() > BigInt::from(bound) || !x.det().abs().is_one() {
                    continue;
                }
                if &x * m1 == m2 * &x {
                    return Some(x);
                }
            }
        }
    }
    None
}

/// Random unimodular matrix with `‖X‖∞ ≤ bound`, built as a product of
/// elementary matrices and filtered by the norm.
pub fn random_unimodular<R: Rng>(rng: &mut R, bound: i64) -> Mat3Z {
    loop {
        let mut x = Mat3Z::identity();
        for _ in 0..rng.random_range(1..6) {
            let (i, j) = (rng.random_range(0..3), rng.random_range(0..3));
            if i == j {
                continue;
            }
            let k: i64 = rng.random_range(-2..=2);
            let mut e = Mat3Z::identity();
            e.0[i][j] = BigInt::from(k);
            x = &x * &e;
        }
        if rng.random_bool(0.5) {
            let mut p = Mat3Z::zero();
            let perm = [[1, 0, 2], [0, 2, 1], [2, 1, 0]][rng.random_range(0..3)];
            for (i, &j) in perm.iter().enumerate() {
                p.0[i][j] = BigInt::one();
            }
            x = &x * &p;
        }
        if x.max_abs() <= BigInt::from(bound) && x.max_abs() > BigInt::one() {
            return x;
        }
    }
}

/// Random `SL(3, ℤ)` matrix with entries bounded by `bound`, irreducible
/// characteristic polynomial and nonreal spectrum.
pub fn random_small_nrs<R: Rng>(rng: &mut R, bound: i64) -> Mat3Z {
    loop {
        let rows: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-bound..=bound)));
        let m = Mat3Z::from_i64(rows);
        if m.det().is_one() && spectrum_class(&m) == SpectrumClass::NRS {
            return m;
        }
    }
}

/// Random perfect Hessenberg NRS matrix from one of the assorted families.
pub fn random_family_nrs<R: Rng>(rng: &mut R, half: i64) -> Mat3Z {
    let fams = assorted();
    loop {
        let f = &fams[rng.random_range(0..fams.len())];
        let m = f.matrix_i64(rng.random_range(-half..=half), rng.random_range(-half..=half));
        if spectrum_class(&m) == SpectrumClass::NRS {
            return m;
        }
    }
}

pub fn signed_form(m: &Mat3Z, w: [i64; 3]) -> BigInt {
    cubic_form(m).eval(&Vec3Z::from_i64(w))
}
