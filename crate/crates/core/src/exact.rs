//! Exact integer and rational algebra for 3×3 matrices, cubic forms and
//! bivariate polynomials.
//!
//! Everything here is arbitrary precision. Fixed-width arithmetic only
//! appears in [`FastCubic`], which uses checked `i128` operations and reports
//! overflow instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Euclidean division with remainder in `[0, |d|)`.
pub fn div_rem_euclid(a: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
    let ad = d.abs();
    let r = a.mod_floor(&ad);
    let q = (a - &r) / &ad;
    (q, r)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec3Z(pub [BigInt; 3]);

impl Vec3Z {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        Vec3Z([x.into(), y.into(), z.into()])
    }

    pub fn from_i64(v: [i64; 3]) -> Self {
        Vec3Z(v.map(BigInt::from))
    }

    pub fn zero() -> Self {
        Vec3Z::from_i64([0, 0, 0])
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Vec3Z::zero();
        v.0[i] = BigInt::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn gcd(&self) -> BigInt {
        self.0[0].gcd(&self.0[1]).gcd(&self.0[2])
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd().is_one()
    }

    /// Divides out the content; the zero vector is returned unchanged.
    pub fn primitive_part(&self) -> Vec3Z {
        let g = self.gcd();
        if g.is_zero() {
            return self.clone();
        }
        Vec3Z(self.0.clone().map(|c| c / &g))
    }

    /// Representative of `{w, -w}` whose first nonzero coordinate is positive.
    pub fn canonical_sign(&self) -> Vec3Z {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    pub fn dot(&self, o: &Vec3Z) -> BigInt {
        &self.0[0] * &o.0[0] + &self.0[1] * &o.0[1] + &self.0[2] * &o.0[2]
    }

    pub fn cross(&self, o: &Vec3Z) -> Vec3Z {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        Vec3Z([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn scale(&self, k: &BigInt) -> Vec3Z {
        Vec3Z(self.0.clone().map(|c| c * k))
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap()
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.0[i].to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_i64(&self) -> Option<[i64; 3]> {
        Some([self.0[0].to_i64()?, self.0[1].to_i64()?, self.0[2].to_i64()?])
    }
}

impl Add<&Vec3Z> for &Vec3Z {
    type Output = Vec3Z;
    fn add(self, o: &Vec3Z) -> Vec3Z {
        Vec3Z([&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2]])
    }
}

impl Sub<&Vec3Z> for &Vec3Z {
    type Output = Vec3Z;
    fn sub(self, o: &Vec3Z) -> Vec3Z {
        Vec3Z([&self.0[0] - &o.0[0], &self.0[1] - &o.0[1], &self.0[2] - &o.0[2]])
    }
}

impl Neg for &Vec3Z {
    type Output = Vec3Z;
    fn neg(self) -> Vec3Z {
        Vec3Z(self.0.clone().map(|c| -c))
    }
}

impl fmt::Display for Vec3Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for Vec3Z {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_ints(s, ',')?;
        let arr: [BigInt; 3] = parts
            .try_into()
            .map_err(|_| Error::Parse(format!("expected three integers in {s:?}")))?;
        Ok(Vec3Z(arr))
    }
}

pub(crate) fn parse_ints(s: &str, sep: char) -> Result<Vec<BigInt>> {
    s.split(sep)
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

/// 3×3 integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat3Z(pub [[BigInt; 3]; 3]);

impl Mat3Z {
    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        Mat3Z(rows.map(|r| r.map(BigInt::from)))
    }

    pub fn identity() -> Self {
        Mat3Z::from_i64([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn zero() -> Self {
        Mat3Z::from_i64([[0; 3]; 3])
    }

    pub fn from_cols(c0: &Vec3Z, c1: &Vec3Z, c2: &Vec3Z) -> Self {
        let cols = [c0, c1, c2];
        Mat3Z(std::array::from_fn(|i| std::array::from_fn(|j| cols[j].0[i].clone())))
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.0[i][j]
    }

    pub fn col(&self, j: usize) -> Vec3Z {
        Vec3Z([self.0[0][j].clone(), self.0[1][j].clone(), self.0[2][j].clone()])
    }

    pub fn row(&self, i: usize) -> Vec3Z {
        Vec3Z(self.0[i].clone())
    }

    pub fn transpose(&self) -> Mat3Z {
        Mat3Z(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone())))
    }

    pub fn mul_vec(&self, v: &Vec3Z) -> Vec3Z {
        Vec3Z(std::array::from_fn(|i| self.row(i).dot(v)))
    }

    pub fn det(&self) -> BigInt {
        let m = &self.0;
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    pub fn trace(&self) -> BigInt {
        &self.0[0][0] + &self.0[1][1] + &self.0[2][2]
    }

    /// Sum of the three principal 2×2 minors.
    pub fn principal_minor_sum(&self) -> BigInt {
        let m = &self.0;
        (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0])
            + (&m[0][0] * &m[2][2] - &m[0][2] * &m[2][0])
            + (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
    }

    pub fn adjugate(&self) -> Mat3Z {
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
        };
        // adj[i][j] = (-1)^{i+j} minor(j, i)
        Mat3Z([
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ])
    }

    pub fn unimodular_inverse(&self) -> Result<Mat3Z> {
        let d = self.det();
        if d.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(d.to_string()));
        }
        let adj = self.adjugate();
        Ok(if d.is_one() { adj } else { -&adj })
    }

    pub fn pow(&self, k: u32) -> Mat3Z {
        let mut acc = Mat3Z::identity();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_hessenberg(&self) -> bool {
        self.0[2][0].is_zero()
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().flatten().map(|c| c.abs()).max().unwrap()
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j].to_f64().unwrap_or(f64::NAN))
        })
    }

    pub fn charpoly(&self) -> CharPoly {
        charpoly_coeffs(self)
    }

    /// `X M X⁻¹` for unimodular `X`.
    pub fn conjugate_by(&self, x: &Mat3Z) -> Result<Mat3Z> {
        let xi = x.unimodular_inverse()?;
        Ok(&(x * self) * &xi)
    }
}

impl Mul<&Mat3Z> for &Mat3Z {
    type Output = Mat3Z;
    fn mul(self, o: &Mat3Z) -> Mat3Z {
        Mat3Z(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                &self.0[i][0] * &o.0[0][j] + &self.0[i][1] * &o.0[1][j] + &self.0[i][2] * &o.0[2][j]
            })
        }))
    }
}

impl Neg for &Mat3Z {
    type Output = Mat3Z;
    fn neg(self) -> Mat3Z {
        Mat3Z(self.0.clone().map(|r| r.map(|c| -c)))
    }
}

impl fmt::Display for Mat3Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{},{}", r[0], r[1], r[2])?;
        }
        Ok(())
    }
}

/// Parses the shared text format `"a,b,c;d,e,f;g,h,i"`.
impl FromStr for Mat3Z {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 3 {
            return Err(Error::Parse(format!("expected three rows in {s:?}")));
        }
        let mut out = Mat3Z::zero();
        for (i, r) in rows.iter().enumerate() {
            let v: Vec3Z = r.parse()?;
            out.0[i] = v.0;
        }
        Ok(out)
    }
}

/// Coefficients of `−t³ + b1·t² − b2·t + b3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPoly {
    pub b1: BigInt,
    pub b2: BigInt,
    pub b3: BigInt,
}

impl CharPoly {
    pub fn eval(&self, t: &BigInt) -> BigInt {
        -(t * t * t) + &self.b1 * t * t - &self.b2 * t + &self.b3
    }

    pub fn eval_rational(&self, t: &Rational) -> Rational {
        let (b1, b2, b3) = (rat_int(&self.b1), rat_int(&self.b2), rat_int(&self.b3));
        -(t * t * t) + b1 * t * t - b2 * t + b3
    }

    pub fn discriminant(&self) -> BigInt {
        discriminant_from_coeffs(&self.b1, &self.b2, &self.b3)
    }

    /// Rational-root test. The polynomial is monic up to sign, so rational
    /// roots are integer divisors of `b3`.
    pub fn has_rational_root(&self) -> bool {
        if self.b3.is_zero() {
            return true;
        }
        let b3 = self.b3.abs();
        if b3.is_one() {
            return self.eval(&BigInt::one()).is_zero() || self.eval(&-BigInt::one()).is_zero();
        }
        let mut d = BigInt::one();
        while &d * &d <= b3 {
            if (&b3 % &d).is_zero() {
                for c in [d.clone(), &b3 / &d] {
                    if self.eval(&c).is_zero() || self.eval(&-c).is_zero() {
                        return true;
                    }
                }
            }
            d += 1;
        }
        false
    }
}

pub fn charpoly_coeffs(m: &Mat3Z) -> CharPoly {
    CharPoly { b1: m.trace(), b2: m.principal_minor_sum(), b3: m.det() }
}

/// Discriminant of `−t³ + b1 t² − b2 t + b3`; positive for three distinct
/// real roots, negative for one real root and a complex pair.
pub fn discriminant_from_coeffs(b1: &BigInt, b2: &BigInt, b3: &BigInt) -> BigInt {
    let b1_2 = b1 * b1;
    let b2_2 = b2 * b2;
    BigInt::from(18) * b1 * b2 * b3 - BigInt::from(4) * &b1_2 * b1 * b3 + &b1_2 * &b2_2
        - BigInt::from(4) * &b2_2 * b2
        - BigInt::from(27) * b3 * b3
}

/// Exponents of the ten cubic monomials, in storage order.
pub const CUBIC_MONOMIALS: [[u8; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

fn monomial_index(e: [u8; 3]) -> usize {
    CUBIC_MONOMIALS.iter().position(|m| *m == e).unwrap()
}

/// Homogeneous cubic in `(x, y, z)` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm {
    pub coeffs: [BigInt; 10],
}

impl CubicForm {
    pub fn zero() -> Self {
        CubicForm { coeffs: std::array::from_fn(|_| BigInt::zero()) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, w: &Vec3Z) -> BigInt {
        let mut acc = BigInt::zero();
        for (c, e) in self.coeffs.iter().zip(CUBIC_MONOMIALS) {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for (k, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term *= &w.0[k];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn fast(&self) -> Option<FastCubic> {
        let mut c = [0i128; 10];
        for (dst, src) in c.iter_mut().zip(&self.coeffs) {
            *dst = src.to_i128()?;
        }
        Some(FastCubic { c })
    }
}

/// `F_M(w) = det(w, Mw, M²w)` as a cubic form.
pub fn cubic_form(m: &Mat3Z) -> CubicForm {
    let m2 = m * m;
    // entry (i, j) of the matrix [w | Mw | M²w] is a linear form in w
    let lin = |i: usize, j: usize| -> [BigInt; 3] {
        match j {
            0 => std::array::from_fn(|k| if k == i { BigInt::one() } else { BigInt::zero() }),
            1 => m.0[i].clone(),
            _ => m2.0[i].clone(),
        }
    };
    let perms: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ];
    let mut f = CubicForm::zero();
    for (p, sign) in perms {
        let (a, b, c) = (lin(0, p[0]), lin(1, p[1]), lin(2, p[2]));
        for i in 0..3 {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j] * sign;
                for k in 0..3 {
                    if c[k].is_zero() {
                        continue;
                    }
                    let mut e = [0u8; 3];
                    e[i] += 1;
                    e[j] += 1;
                    e[k] += 1;
                    f.coeffs[monomial_index(e)] += &ab * &c[k];
                }
            }
        }
    }
    f
}

/// Markoff–Davenport characteristic `|det(w, Mw, M²w)|`.
pub fn md_characteristic(m: &Mat3Z, w: &Vec3Z) -> BigInt {
    Mat3Z::from_cols(w, &m.mul_vec(w), &m.mul_vec(&m.mul_vec(w))).det().abs()
}

/// `i128` copy of a cubic form for hot loops. Every operation is checked.
#[derive(Clone, Copy, Debug)]
pub struct FastCubic {
    pub c: [i128; 10],
}

impl FastCubic {
    pub fn eval(&self, x: i64, y: i64, z: i64) -> Option<i128> {
        let col = self.column(x, y)?;
        col.eval(z)
    }

    /// Restriction to the line `(x, y, ·)`, a cubic polynomial in `z`.
    pub fn column(&self, x: i64, y: i64) -> Option<ZCubic> {
        let (x, y) = (x as i128, y as i128);
        let c = &self.c;
        let xx = x.checked_mul(x)?;
        let xy = x.checked_mul(y)?;
        let yy = y.checked_mul(y)?;
        let t = |a: i128, b: i128| a.checked_mul(b);
        let add = |a: i128, b: i128| a.checked_add(b);
        // z^0: x³ x²y xy² y³
        let k0 = add(
            add(t(c[0], t(xx, x)?)?, t(c[1], t(xx, y)?)?)?,
            add(t(c[3], t(xy, y)?)?, t(c[6], t(yy, y)?)?)?,
        )?;
        // z^1: x²z xyz y²z
        let k1 = add(add(t(c[2], xx)?, t(c[4], xy)?)?, t(c[7], yy)?)?;
        // z^2: xz² yz²
        let k2 = add(t(c[5], x)?, t(c[8], y)?)?;
        Some(ZCubic { k: [k0, k1, k2, c[9]] })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZCubic {
    pub k: [i128; 4],
}

impl ZCubic {
    pub fn eval(&self, z: i64) -> Option<i128> {
        let z = z as i128;
        let mut acc = self.k[3];
        for i in (0..3).rev() {
            acc = acc.checked_mul(z)?.checked_add(self.k[i])?;
        }
        Some(acc)
    }
}

/// Polynomial in two variables `(m, n)` with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn int(c: i64) -> Self {
        BiPoly::constant(rat(c, 1))
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    /// The variable `m`.
    pub fn m() -> Self {
        BiPoly::monomial(rat(1, 1), 1, 0)
    }

    /// The variable `n`.
    pub fn n() -> Self {
        BiPoly::monomial(rat(1, 1), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in it {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// Degree in `m` alone (useful for univariate polynomials stored in `m`).
    pub fn degree_m(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    pub fn scale(&self, k: &Rational) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, c * k)))
    }

    pub fn pow(&self, k: u32) -> BiPoly {
        let mut acc = BiPoly::int(1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, m: &Rational, n: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num_traits::pow(m.clone(), i as usize) * num_traits::pow(n.clone(), j as usize);
        }
        acc
    }

    pub fn eval_int(&self, m: &BigInt, n: &BigInt) -> Rational {
        self.eval(&rat_int(m), &rat_int(n))
    }

    /// Substitutes `m := msub`, `n := nsub`.
    pub fn compose(&self, msub: &BiPoly, nsub: &BiPoly) -> BiPoly {
        let mut acc = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let t = &(&msub.pow(i) * &nsub.pow(j)) * &BiPoly::constant(c.clone());
            acc = &acc + &t;
        }
        acc
    }
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, -c.clone())))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*m^{i}")?;
            }
            if j > 0 {
                write!(f, "*n^{j}")?;
            }
        }
        Ok(())
    }
}


macro_rules! string_serde {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Vec3Z);
string_serde!(Mat3Z);
