//! Hessenberg types, the families `H_Ω^v(m, n)`, NRS-ray parametrisations
//! and the reduction `(M|w)` of an operator to a perfect Hessenberg matrix.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{div_rem_euclid, ext_gcd, int, parse_ints, Mat3Z, Vec3Z};

/// `⟨a11, a21 | a12, a22, a32⟩`: the first two columns of a Hessenberg matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HessenbergType {
    pub a11: BigInt,
    pub a21: BigInt,
    pub a12: BigInt,
    pub a22: BigInt,
    pub a32: BigInt,
}

impl HessenbergType {
    pub fn new(a11: i64, a21: i64, a12: i64, a22: i64, a32: i64) -> Self {
        HessenbergType { a11: int(a11), a21: int(a21), a12: int(a12), a22: int(a22), a32: int(a32) }
    }

    pub fn is_perfect(&self) -> bool {
        let z = BigInt::zero();
        z <= self.a11 && self.a11 < self.a21 && z <= self.a12 && self.a12 < self.a32
            && z <= self.a22
            && self.a22 < self.a32
    }

    fn check_nondegenerate(&self) -> Result<()> {
        if self.a21.is_zero() || self.a32.is_zero() {
            return Err(Error::DegenerateType(self.to_string()));
        }
        Ok(())
    }

    /// Hessenberg complexity `a21²·a32`, the volume spanned by
    /// `e1, M e1, M² e1`.
    pub fn complexity(&self) -> Result<BigInt> {
        self.check_nondegenerate()?;
        Ok(&self.a21 * &self.a21 * &self.a32)
    }

    pub fn first_column(&self) -> Vec3Z {
        Vec3Z([self.a11.clone(), self.a21.clone(), BigInt::zero()])
    }

    pub fn second_column(&self) -> Vec3Z {
        Vec3Z([self.a12.clone(), self.a22.clone(), self.a32.clone()])
    }

    /// Coefficients `(c1, c2, c3)` of the determinant as a linear form in the
    /// third column: `det = c1·a13 − c2·a23 + c3·a33`.
    fn det_form(&self) -> (BigInt, BigInt, BigInt) {
        (
            &self.a21 * &self.a32,
            &self.a11 * &self.a32,
            &self.a11 * &self.a22 - &self.a12 * &self.a21,
        )
    }

    /// Determinant of the matrix with third column `v`.
    pub fn det_with(&self, v: &Vec3Z) -> BigInt {
        let (c1, c2, c3) = self.det_form();
        c1 * &v.0[0] - c2 * &v.0[1] + c3 * &v.0[2]
    }
}

impl fmt::Display for HessenbergType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}|{},{},{}", self.a11, self.a21, self.a12, self.a22, self.a32)
    }
}

/// Parses `"a11,a21|a12,a22,a32"`.
impl FromStr for HessenbergType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("expected 'a11,a21|a12,a22,a32', got {s:?}")))?;
        let l = parse_ints(l, ',')?;
        let r = parse_ints(r, ',')?;
        match (l.as_slice(), r.as_slice()) {
            ([a11, a21], [a12, a22, a32]) => Ok(HessenbergType {
                a11: a11.clone(),
                a21: a21.clone(),
                a12: a12.clone(),
                a22: a22.clone(),
                a32: a32.clone(),
            }),
            _ => Err(Error::Parse(format!("expected 2|3 integers in {s:?}"))),
        }
    }
}

impl Serialize for HessenbergType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HessenbergType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reads off the Hessenberg type and whether the matrix is perfect.
pub fn type_of(m: &Mat3Z) -> Result<(HessenbergType, bool)> {
    if !m.is_hessenberg() {
        return Err(Error::NotHessenberg(m.0[2][0].to_string()));
    }
    let ty = HessenbergType {
        a11: m.0[0][0].clone(),
        a21: m.0[1][0].clone(),
        a12: m.0[0][1].clone(),
        a22: m.0[1][1].clone(),
        a32: m.0[2][1].clone(),
    };
    let perfect = ty.is_perfect();
    Ok((ty, perfect))
}

/// Canonical third column `v` making the matrix unimodular with det 1.
///
/// Solutions form a coset of the lattice spanned by the first two columns,
/// so `v` is reduced to `0 ≤ a33 < |a32|`, `0 ≤ a23 < |a21|`; the family is
/// the same for every valid `v` up to shifting `(m, n)`.
pub fn complete_type(ty: &HessenbergType) -> Result<Vec3Z> {
    ty.check_nondegenerate()?;
    let (c1, c2, c3) = ty.det_form();
    // c1·x + (−c2)·y + c3·z = 1
    let (g12, s, t) = ext_gcd(&c1, &-&c2);
    let (g, u, w) = ext_gcd(&g12, &c3);
    if !g.is_one() {
        return Err(Error::NoUnimodularCompletion(ty.to_string()));
    }
    let v = Vec3Z([&u * &s, &u * &t, w]);
    let col1 = ty.first_column();
    let col2 = ty.second_column();
    let (n_shift, _) = div_rem_euclid(&v.0[2], &ty.a32);
    let n_shift = if ty.a32.is_negative() { -n_shift } else { n_shift };
    let v = &v - &col2.scale(&n_shift);
    let (m_shift, _) = div_rem_euclid(&v.0[1], &ty.a21);
    let m_shift = if ty.a21.is_negative() { -m_shift } else { m_shift };
    let v = &v - &col1.scale(&m_shift);
    debug_assert!(ty.det_with(&v).is_one());
    Ok(v)
}

/// The two-parameter family `H_Ω^v(m, n)` of a type with a fixed completion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub ty: HessenbergType,
    pub v: Vec3Z,
}

impl Family {
    pub fn new(ty: HessenbergType, v: Vec3Z) -> Result<Self> {
        ty.check_nondegenerate()?;
        if !ty.det_with(&v).is_one() {
            return Err(Error::InvalidCompletion { ty: ty.to_string(), v: v.to_string() });
        }
        Ok(Family { ty, v })
    }

    /// Family with the canonical completion.
    pub fn canonical(ty: HessenbergType) -> Result<Self> {
        let v = complete_type(&ty)?;
        Family::new(ty, v)
    }

    /// Third column `(a11 m + a12 n + a13, a21 m + a22 n + a23, a32 n + a33)`.
    pub fn third_column(&self, m: &BigInt, n: &BigInt) -> Vec3Z {
        let t = &self.ty;
        Vec3Z([
            &t.a11 * m + &t.a12 * n + &self.v.0[0],
            &t.a21 * m + &t.a22 * n + &self.v.0[1],
            &t.a32 * n + &self.v.0[2],
        ])
    }

    pub fn matrix(&self, m: &BigInt, n: &BigInt) -> Mat3Z {
        Mat3Z::from_cols(&self.ty.first_column(), &self.ty.second_column(), &self.third_column(m, n))
    }

    pub fn matrix_i64(&self, m: i64, n: i64) -> Mat3Z {
        self.matrix(&int(m), &int(n))
    }

    pub fn origin(&self) -> Mat3Z {
        self.matrix_i64(0, 0)
    }
}

/// A point of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPoint {
    pub family: Family,
    pub m: BigInt,
    pub n: BigInt,
}

pub fn family_matrix(pt: &FamilyPoint) -> Mat3Z {
    pt.family.matrix(&pt.m, &pt.n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RayIndex {
    /// Direction `(−1, 0)`.
    One,
    /// Direction `(a11, a21)`.
    Two,
}

impl RayIndex {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(RayIndex::One),
            2 => Ok(RayIndex::Two),
            _ => Err(Error::Invalid(format!("ray index must be 1 or 2, got {k}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            RayIndex::One => 1,
            RayIndex::Two => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySpec {
    pub family: Family,
    pub base: (BigInt, BigInt),
    pub index: RayIndex,
}

impl RaySpec {
    pub fn new(family: Family, base: (i64, i64), index: RayIndex) -> Self {
        RaySpec { family, base: (int(base.0), int(base.1)), index }
    }

    pub fn direction(&self) -> (BigInt, BigInt) {
        match self.index {
            RayIndex::One => (int(-1), int(0)),
            RayIndex::Two => (self.family.ty.a11.clone(), self.family.ty.a21.clone()),
        }
    }

    /// Family coordinates of the `t`-th point.
    pub fn point(&self, t: &BigInt) -> (BigInt, BigInt) {
        let (dm, dn) = self.direction();
        (&self.base.0 + dm * t, &self.base.1 + dn * t)
    }

    pub fn matrix(&self, t: &BigInt) -> Mat3Z {
        let (m, n) = self.point(t);
        self.family.matrix(&m, &n)
    }
}

pub fn ray_matrix(r: &RaySpec, t: u64) -> Mat3Z {
    r.matrix(&BigInt::from(t))
}

/// Output of `(M|w)`: the perfect Hessenberg matrix `B⁻¹ M B` and the
/// unimodular basis `B = [e1 | e2 | e3]` with `e1 = w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectReduction {
    pub matrix: Mat3Z,
    pub basis: Mat3Z,
}

/// Basis of the rank-2 lattice `{u ∈ ℤ³ : n·u = 0}` for primitive `n`.
pub(crate) fn kernel_basis(n: &Vec3Z) -> (Vec3Z, Vec3Z) {
    let [n0, n1, n2] = &n.0;
    let (g, s, t) = ext_gcd(n0, n1);
    if g.is_zero() {
        return (Vec3Z::unit(0), Vec3Z::unit(1));
    }
    let u1 = Vec3Z([n1 / &g, -(n0 / &g), BigInt::zero()]);
    let u2 = Vec3Z([-(n2 * &s), -(n2 * &t), g]);
    (u1, u2)
}

/// Some `g` with `n·g = 1`; `n` must be primitive.
pub(crate) fn unit_dual(n: &Vec3Z) -> Vec3Z {
    let [n0, n1, n2] = &n.0;
    let (g01, s, t) = ext_gcd(n0, n1);
    let (g, u, w) = ext_gcd(&g01, n2);
    debug_assert!(g.is_one());
    Vec3Z([&u * s, &u * t, w])
}

/// Integer coordinates `(α, β)` of `w = α·b1 + β·b2`, where `w` is known to
/// lie in the lattice spanned by `b1, b2`.
fn coords2(w: &Vec3Z, b1: &Vec3Z, b2: &Vec3Z) -> (BigInt, BigInt) {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = &b1.0[i] * &b2.0[j] - &b2.0[i] * &b1.0[j];
        if d.is_zero() {
            continue;
        }
        let a = &w.0[i] * &b2.0[j] - &b2.0[i] * &w.0[j];
        let b = &b1.0[i] * &w.0[j] - &w.0[i] * &b1.0[j];
        return (a / &d, b / &d);
    }
    unreachable!("basis vectors are linearly independent")
}

/// Lattice completions used by the reduction: `g2` completes `w` to a basis of
/// `span(w, Mw) ∩ ℤ³`, `g3` completes `{w, g2}` to a basis of `ℤ³`.
pub fn canonical_completions(m: &Mat3Z, w: &Vec3Z) -> Result<(Vec3Z, Vec3Z)> {
    if !w.is_primitive() {
        return Err(Error::NotPrimitive(w.to_string()));
    }
    let mw = m.mul_vec(w);
    let normal = w.cross(&mw);
    if normal.is_zero() {
        return Err(Error::ReduciblePolynomial);
    }
    let normal = normal.primitive_part();
    let (u1, u2) = kernel_basis(&normal);
    let (alpha, beta) = coords2(w, &u1, &u2);
    let (_, s, t) = ext_gcd(&alpha, &beta);
    // α·s − β·(−t) = 1
    let g2 = &u1.scale(&-t) + &u2.scale(&s);
    let g3 = unit_dual(&w.cross(&g2).primitive_part());
    Ok((g2, g3))
}

/// `(M|w)`: the perfect Hessenberg matrix of `M` in the basis grown from `w`.
pub fn reduce_to_perfect(m: &Mat3Z, w: &Vec3Z) -> Result<PerfectReduction> {
    let (g2, g3) = canonical_completions(m, w)?;
    reduce_with_completions(m, w, &g2, &g3)
}

/// Same as [`reduce_to_perfect`] with caller-chosen lattice completions.
/// The output does not depend on the choice.
pub fn reduce_with_completions(m: &Mat3Z, w: &Vec3Z, g2: &Vec3Z, g3: &Vec3Z) -> Result<PerfectReduction> {
    if !w.is_primitive() {
        return Err(Error::NotPrimitive(w.to_string()));
    }
    let e1 = w.clone();
    let me1 = m.mul_vec(&e1);
    let normal = e1.cross(&me1);
    if normal.is_zero() {
        return Err(Error::ReduciblePolynomial);
    }
    let plane = e1.cross(g2);
    if plane != normal.primitive_part() && plane != -&normal.primitive_part() {
        return Err(Error::Invalid(format!("{g2} does not complete {w} to a basis of its plane lattice")));
    }

    // M e1 = q11 e1 + a21 g2
    let (q11, a21) = coords2(&me1, &e1, g2);
    let (b11, _) = div_rem_euclid(&q11, &a21);
    let e2 = &g2.scale(&a21.signum()) + &e1.scale(&b11);

    let c = Mat3Z::from_cols(&e1, &e2, g3);
    let ci = c
        .unimodular_inverse()
        .map_err(|_| Error::Invalid(format!("{g3} does not complete the plane basis to ℤ³")))?;
    // M e2 = q12 e1 + q22 e2 + a32 g3
    let q = ci.mul_vec(&m.mul_vec(&e2));
    let (q12, q22, a32) = (&q.0[0], &q.0[1], &q.0[2]);
    if a32.is_zero() {
        return Err(Error::ReduciblePolynomial);
    }
    let (b12, _) = div_rem_euclid(q12, a32);
    let (b22, _) = div_rem_euclid(q22, a32);
    let e3 = &(&e1.scale(&b12) + &e2.scale(&b22)) + &g3.scale(&a32.signum());

    let basis = Mat3Z::from_cols(&e1, &e2, &e3);
    let bi = basis.unimodular_inverse()?;
    let matrix = &(&bi * m) * &basis;
    let (_, perfect) = type_of(&matrix)?;
    assert!(perfect, "(M|w) produced a non-perfect matrix {matrix}");
    Ok(PerfectReduction { matrix, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::md_characteristic;

    fn ty(s: &str) -> HessenbergType {
        s.parse().unwrap()
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(ty("0,1|0,0,1").complexity().unwrap(), int(1));
        assert_eq!(ty("0,1|1,0,2").complexity().unwrap(), int(2));
        assert_eq!(ty("1,2|1,1,3").complexity().unwrap(), int(12));
        assert!(matches!(ty("1,0|1,1,3").complexity(), Err(Error::DegenerateType(_))));
    }

    #[test]
    fn type_of_examples() {
        let (t, p) = type_of(&"0,0,1;1,0,1;0,1,3".parse().unwrap()).unwrap();
        assert_eq!((t, p), (ty("0,1|0,0,1"), true));
        let (t, p) = type_of(&"0,1,1;1,0,0;0,2,1".parse().unwrap()).unwrap();
        assert_eq!((t, p), (ty("0,1|1,0,2"), true));
        let (t, p) = type_of(&"2,0,1;1,0,0;0,1,0".parse().unwrap()).unwrap();
        assert_eq!((t, p), (ty("2,1|0,0,1"), false));
        assert!(matches!(type_of(&"1,0,0;0,1,0;1,0,1".parse().unwrap()), Err(Error::NotHessenberg(_))));
    }

    #[test]
    fn completion_examples() {
        assert_eq!(complete_type(&ty("0,1|0,0,1")).unwrap(), Vec3Z::from_i64([1, 0, 0]));
        assert_eq!(complete_type(&ty("0,1|1,0,2")).unwrap(), Vec3Z::from_i64([1, 0, 1]));
        assert_eq!(complete_type(&ty("0,1|1,1,2")).unwrap(), Vec3Z::from_i64([1, 0, 1]));
        assert!(matches!(complete_type(&ty("2,2|0,0,2")), Err(Error::NoUnimodularCompletion(_))));
        let v = complete_type(&ty("1,2|1,1,3")).unwrap();
        assert_eq!(ty("1,2|1,1,3").det_with(&v), int(1));
        assert!(Family::new(ty("1,2|1,1,3"), Vec3Z::from_i64([0, 0, -1])).is_ok());
        assert!(Family::new(ty("0,1|1,0,2"), Vec3Z::from_i64([1, 0, 0])).is_err());
    }

    #[test]
    fn family_examples() {
        let f0 = Family::new(ty("0,1|0,0,1"), Vec3Z::from_i64([1, 0, 0])).unwrap();
        assert_eq!(f0.matrix_i64(4, -2), Mat3Z::from_i64([[0, 0, 1], [1, 0, 4], [0, 1, -2]]));
        let f = Family::new(ty("0,1|1,0,2"), Vec3Z::from_i64([1, 0, 1])).unwrap();
        for (m, n) in [(0, 0), (3, -5), (-7, 2)] {
            assert_eq!(f.matrix_i64(m, n), Mat3Z::from_i64([[0, 1, n + 1], [1, 0, m], [0, 2, 2 * n + 1]]));
            assert_eq!(f.matrix_i64(m, n).det(), int(1));
        }
    }

    #[test]
    fn ray_examples() {
        let f0 = Family::canonical(ty("0,1|0,0,1")).unwrap();
        let r = RaySpec::new(f0.clone(), (0, 0), RayIndex::Two);
        assert_eq!(ray_matrix(&r, 5), f0.matrix_i64(0, 5));
        let r1 = RaySpec::new(f0.clone(), (3, 4), RayIndex::One);
        assert_eq!(ray_matrix(&r1, 0), f0.matrix_i64(3, 4));
        assert_eq!(ray_matrix(&r1, 2), f0.matrix_i64(1, 4));
        let f = Family::new(ty("1,2|1,1,3"), Vec3Z::from_i64([0, 0, -1])).unwrap();
        let r2 = RaySpec::new(f.clone(), (-2, -1), RayIndex::Two);
        assert_eq!(ray_matrix(&r2, 1), f.matrix_i64(-1, 1));
    }

    #[test]
    fn reduce_examples() {
        let a: Mat3Z = "0,0,1;1,0,1;0,1,3".parse().unwrap();
        let r = reduce_to_perfect(&a, &Vec3Z::from_i64([1, 0, 0])).unwrap();
        assert_eq!(r.matrix, a);
        let r = reduce_to_perfect(&a, &Vec3Z::from_i64([0, 1, 0])).unwrap();
        assert_eq!(type_of(&r.matrix).unwrap(), (ty("0,1|0,0,1"), true));
        assert!(matches!(
            reduce_to_perfect(&a, &Vec3Z::from_i64([2, 0, 0])),
            Err(Error::NotPrimitive(_))
        ));
    }

    #[test]
    fn reduction_complexity_matches_md() {
        let a: Mat3Z = "2,-1,3;1,4,0;-2,1,1".parse().unwrap();
        let a = {
            // force det 1 via a product of elementary matrices
            let _ = a;
            let e1 = Mat3Z::from_i64([[1, 2, 0], [0, 1, 0], [0, 0, 1]]);
            let e2 = Mat3Z::from_i64([[1, 0, 0], [3, 1, 0], [0, -1, 1]]);
            let e3 = Mat3Z::from_i64([[1, 0, 1], [0, 1, 0], [0, 0, 1]]);
            &(&e1 * &e2) * &e3
        };
        assert_eq!(a.det(), int(1));
        for w in [[1, 0, 0], [0, 1, 0], [1, 1, 1], [2, -3, 5]] {
            let w = Vec3Z::from_i64(w);
            if let Ok(r) = reduce_to_perfect(&a, &w) {
                let (t, p) = type_of(&r.matrix).unwrap();
                assert!(p);
                assert_eq!(t.complexity().unwrap(), md_characteristic(&a, &w));
                assert_eq!(&(&r.basis.unimodular_inverse().unwrap() * &a) * &r.basis, r.matrix);
                assert_eq!(r.basis.col(0), w);
            }
        }
    }

    #[test]
    fn kernel_basis_spans_kernel() {
        for n in [[3, 5, 7], [0, 0, 1], [0, 4, 9], [6, 10, 15], [1, 0, 0]] {
            let n = Vec3Z::from_i64(n);
            let (u1, u2) = kernel_basis(&n);
            assert!(n.dot(&u1).is_zero() && n.dot(&u2).is_zero());
            let c = u1.cross(&u2);
            assert!(c == n || c == -&n, "{c} vs {n}");
            assert!(n.dot(&unit_dual(&n)).is_one());
        }
    }
}
