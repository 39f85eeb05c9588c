//! Spectrum classification of family members, the symbolic discriminant
//! `δ(m, n)` and its parabolic approximation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{charpoly_coeffs, rat, rat_int, BiPoly, CharPoly, Mat3Z, Rational};
use crate::hessenberg::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectrumClass {
    /// The characteristic polynomial has a rational root.
    ReduciblePoly,
    /// Three distinct real eigenvalues.
    RS,
    /// One real eigenvalue and a complex-conjugate pair.
    NRS,
    /// Irreducible with vanishing discriminant (cannot happen for a cubic,
    /// kept so every input has a class).
    DegenerateDiscriminant,
}

pub fn classify_charpoly(cp: &CharPoly) -> SpectrumClass {
    if cp.has_rational_root() {
        return SpectrumClass::ReduciblePoly;
    }
    let d = cp.discriminant();
    if d.is_negative() {
        SpectrumClass::NRS
    } else if d.is_positive() {
        SpectrumClass::RS
    } else {
        SpectrumClass::DegenerateDiscriminant
    }
}

pub fn spectrum_class(m: &Mat3Z) -> SpectrumClass {
    classify_charpoly(&charpoly_coeffs(m))
}

fn family_entries(f: &Family) -> [[BiPoly; 3]; 3] {
    let t = &f.ty;
    let c = |v: &BigInt| BiPoly::constant(rat_int(v));
    let (m, n) = (BiPoly::m(), BiPoly::n());
    let col3 = [
        &(&(&m * &c(&t.a11)) + &(&n * &c(&t.a12))) + &c(&f.v.0[0]),
        &(&(&m * &c(&t.a21)) + &(&n * &c(&t.a22))) + &c(&f.v.0[1]),
        &(&n * &c(&t.a32)) + &c(&f.v.0[2]),
    ];
    let [c13, c23, c33] = col3;
    [
        [c(&t.a11), c(&t.a12), c13],
        [c(&t.a21), c(&t.a22), c23],
        [BiPoly::zero(), c(&t.a32), c33],
    ]
}

/// Characteristic coefficients `(b1, b2, b3)` of `H_Ω^v(m, n)` as polynomials.
pub fn symbolic_charpoly(f: &Family) -> (BiPoly, BiPoly, BiPoly) {
    let e = family_entries(f);
    let minor = |i: usize, j: usize| &(&e[i][i] * &e[j][j]) - &(&e[i][j] * &e[j][i]);
    let b1 = &(&e[0][0] + &e[1][1]) + &e[2][2];
    let b2 = &(&minor(0, 1) + &minor(0, 2)) + &minor(1, 2);
    let det = {
        let m01 = &(&e[1][1] * &e[2][2]) - &(&e[1][2] * &e[2][1]);
        let m02 = &(&e[1][0] * &e[2][2]) - &(&e[1][2] * &e[2][0]);
        let m03 = &(&e[1][0] * &e[2][1]) - &(&e[1][1] * &e[2][0]);
        &(&(&e[0][0] * &m01) - &(&e[0][1] * &m02)) + &(&e[0][2] * &m03)
    };
    (b1, b2, det)
}

/// `δ_Ω^v(m, n)`, the discriminant of the family as a polynomial.
pub fn delta_polynomial(f: &Family) -> BiPoly {
    let (b1, b2, b3) = symbolic_charpoly(f);
    let k = |c: i64| BiPoly::int(c);
    let b1_2 = &b1 * &b1;
    let b2_2 = &b2 * &b2;
    let t1 = &(&(&k(18) * &b1) * &b2) * &b3;
    let t2 = &(&(&k(4) * &b1_2) * &b1) * &b3;
    let t3 = &b1_2 * &b2_2;
    let t4 = &(&k(4) * &b2_2) * &b2;
    let t5 = &(&k(27) * &b3) * &b3;
    &(&(&(&t1 - &t2) + &t3) - &t4) - &t5
}

/// Coefficients of the two quadratics whose zero sets are the asymptotic
/// boundary parabolas of the NRS region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolaPair {
    pub alpha1: Rational,
    pub beta1: Rational,
    pub gamma1: Rational,
    pub alpha2: Rational,
    pub beta2: Rational,
    pub gamma2: Rational,
    a11: Rational,
    a21: Rational,
}

impl ParabolaPair {
    /// `p1(m, n) = m − α1 n² − β1 n − γ1`.
    pub fn p1(&self) -> BiPoly {
        let n = BiPoly::n();
        let c = |v: &Rational| BiPoly::constant(v.clone());
        &(&(&BiPoly::m() - &(&(&n * &n) * &c(&self.alpha1))) - &(&n * &c(&self.beta1))) - &c(&self.gamma1)
    }

    /// `p2(m, n) = n/a21 − α2 u² − β2 u − γ2` with `u = (a21 m − a11 n)/a21`.
    pub fn p2(&self) -> BiPoly {
        let c = |v: &Rational| BiPoly::constant(v.clone());
        let inv = c(&(Rational::one() / &self.a21));
        let u = &(&(&BiPoly::m() * &c(&self.a21)) - &(&BiPoly::n() * &c(&self.a11))) * &inv;
        let lin = &BiPoly::n() * &inv;
        &(&(&lin - &(&(&u * &u) * &c(&self.alpha2))) - &(&u * &c(&self.beta2))) - &c(&self.gamma2)
    }
}

pub fn parabola_coefficients(f: &Family) -> Result<ParabolaPair> {
    let t = &f.ty;
    t.complexity()?;
    let cp = charpoly_coeffs(&f.origin());
    if cp.b3.is_zero() {
        return Err(Error::Invalid("b3 = 0".into()));
    }
    let r = |v: &BigInt| rat_int(v);
    let (a11, a21, a22, a32, a33) = (r(&t.a11), r(&t.a21), r(&t.a22), r(&t.a32), r(&f.v.0[2]));
    let (b1, b2, b3) = (r(&cp.b1), r(&cp.b2), r(&cp.b3));
    let four = rat(4, 1);
    let two = rat(2, 1);
    Ok(ParabolaPair {
        alpha1: -&a32 / (&four * &a21),
        beta1: (&a11 - &a22 - &a33) / (&two * &a21),
        gamma1: (&four * &b2 - &b1 * &b1) / (&four * &a21 * &a32),
        alpha2: &a32 * &a21 / (&four * &b3),
        beta2: -&b2 / (&two * &b3),
        gamma2: (&b2 * &b2 - &four * &b1 * &b3) / (&four * &a21 * &a32 * &b3),
        a11,
        a21,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaVerdict {
    /// In the shrunk region `Λ_ε`.
    InsideShrunk,
    /// In `Λ_{−ε}` but not in `Λ_ε`.
    Boundary,
    /// Outside the grown region `Λ_{−ε}`.
    OutsideGrown,
}

/// `Λ_t = {p1 ≤ −t ∧ p2 ≤ −t} ∪ {p1 ≥ t ∧ p2 ≥ t}`.
fn in_lambda(p1: &Rational, p2: &Rational, t: &Rational) -> bool {
    let nt = -t.clone();
    (p1 <= &nt && p2 <= &nt) || (p1 >= t && p2 >= t)
}

/// Places `(m, n)` relative to the parabolic sandwich `Λ_ε ⊂ NRS ⊂ Λ_{−ε}`.
pub fn asymptotic_nrs_test(pair: &ParabolaPair, m: &BigInt, n: &BigInt, eps: &Rational) -> LambdaVerdict {
    let p1 = pair.p1().eval_int(m, n);
    let p2 = pair.p2().eval_int(m, n);
    if in_lambda(&p1, &p2, eps) {
        LambdaVerdict::InsideShrunk
    } else if in_lambda(&p1, &p2, &-eps.clone()) {
        LambdaVerdict::Boundary
    } else {
        LambdaVerdict::OutsideGrown
    }
}

/// Finds `s ∈ {+1, −1}` making `δ − s·16·a21²·a32²·b3·p1·p2` of degree ≤ 2
/// and returns `s` with that residual.
pub fn parabola_identity_check(f: &Family) -> Result<(i8, BiPoly)> {
    let pair = parabola_coefficients(f)?;
    let delta = delta_polynomial(f);
    let t = &f.ty;
    let b3 = charpoly_coeffs(&f.origin()).b3;
    let k = Rational::from_integer(BigInt::from(16) * &t.a21 * &t.a21 * &t.a32 * &t.a32 * b3);
    let prod = (&pair.p1() * &pair.p2()).scale(&k);
    for s in [1i8, -1] {
        let residual = if s == 1 { &delta - &prod } else { &delta + &prod };
        if residual.total_degree().map_or(true, |d| d <= 2) {
            return Ok((s, residual));
        }
    }
    Err(Error::NoFactorization)
}

/// Rational conjugation to the companion family `H_Ω₀^{(1,0,0)}`.
///
/// `X` is the Krylov matrix `[e1 | H e1 | H² e1]`, which does not depend on
/// `(m, n)`; `H_Ω^v(m, n) · X = X · H_Ω₀(m', n')` with
/// `m' = a21 a32 m − a11 a32 n + c1`, `n' = a32 n + c2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub x: Mat3Z,
    /// Linear part `[[a21 a32, −a11 a32], [0, a32]]`.
    pub linear: [[BigInt; 2]; 2],
    pub offset: [BigInt; 2],
}

impl Normalization {
    pub fn image(&self, m: &BigInt, n: &BigInt) -> (BigInt, BigInt) {
        let l = &self.linear;
        (
            &l[0][0] * m + &l[0][1] * n + &self.offset[0],
            &l[1][0] * m + &l[1][1] * n + &self.offset[1],
        )
    }

    /// Exact check of the conjugation identity at `(m, n)`.
    pub fn verify(&self, f: &Family, m: &BigInt, n: &BigInt) -> bool {
        let (m2, n2) = self.image(m, n);
        let h = f.matrix(m, n);
        let h0 = omega0_matrix(&m2, &n2);
        &h * &self.x == &self.x * &h0
    }
}

/// `H_⟨0,1|0,0,1⟩^{(1,0,0)}(m, n)`.
pub fn omega0_matrix(m: &BigInt, n: &BigInt) -> Mat3Z {
    let mut h = Mat3Z::from_i64([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
    h.0[1][2] = m.clone();
    h.0[2][2] = n.clone();
    h
}

pub fn normalization(f: &Family) -> Result<Normalization> {
    let t = &f.ty;
    t.complexity()?;
    let h = f.origin();
    let e1 = crate::exact::Vec3Z::unit(0);
    let he1 = h.mul_vec(&e1);
    let h2e1 = h.mul_vec(&he1);
    let x = Mat3Z::from_cols(&e1, &he1, &h2e1);
    let (a11, a21, a12, a22, a32) = (&t.a11, &t.a21, &t.a12, &t.a22, &t.a32);
    let (a23, a33) = (&f.v.0[1], &f.v.0[2]);
    let c1 = a23 * a32 - a11 * a33 + a12 * a21 - a22 * a33 - a11 * a22;
    let c2 = a11 + a22 + a33;
    Ok(Normalization {
        x,
        linear: [[a21 * a32, -(a11 * a32)], [BigInt::zero(), a32.clone()]],
        offset: [c1, c2],
    })
}

/// `δ(−p1(0, t) + ε, t)` as a polynomial in `t` (stored in the `m` slot).
pub fn ray_discriminant_along_parabola(f: &Family, eps: &Rational) -> Result<BiPoly> {
    let pair = parabola_coefficients(f)?;
    let t = BiPoly::m();
    let c = |v: &Rational| BiPoly::constant(v.clone());
    let msub = &(&(&(&(&t * &t) * &c(&pair.alpha1)) + &(&t * &c(&pair.beta1))) + &c(&pair.gamma1)) + &c(eps);
    Ok(delta_polynomial(f).compose(&msub, &t))
}

/// Expected `t⁴` coefficient `¼·a21·a32⁵·ε`.
pub fn expected_ray_leading(f: &Family, eps: &Rational) -> Rational {
    let t = &f.ty;
    rat(1, 4) * rat_int(&t.a21) * num_traits::pow(rat_int(&t.a32), 5) * eps
}

/// True iff `δ(−p1(0,t)+ε, t)` has degree 4 with leading coefficient `¼·a21·a32⁵·ε`.
pub fn ray_leading_coefficient_check(f: &Family, eps: &Rational) -> Result<bool> {
    let poly = ray_discriminant_along_parabola(f, eps)?;
    Ok(poly.degree_m() == Some(4) && poly.coeff(4, 0) == expected_ray_leading(f, eps))
}
