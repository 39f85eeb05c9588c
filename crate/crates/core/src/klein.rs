//! Floating-point eigen-geometry of operators with one real eigenvalue and a
//! complex pair: orbits of the elliptic rotation group, projection to the
//! half-plane `π₊`, factor-sails and the candidate regions `Γ⁰(p)`.
//!
//! In the eigenbasis `(g1, g2, g3)`, with `g2 + i·g3` a complex eigenvector,
//! the operator acts on the `(y, z)` plane as `|c|` times a rotation. Orbits
//! are therefore circles `x = const, y² + z² = ρ²` in eigen-coordinates and
//! the convex hull of two orbits is a frustum. Nothing in this module is
//! exact; every consumer re-evaluates the MD-characteristic exactly on the
//! integer points found here.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{charpoly_coeffs, Mat3Z, Rational, Vec3Z};
use crate::spectra::{classify_charpoly, SpectrumClass};

type V3 = [f64; 3];

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &V3) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn ccross(a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn cnorm(a: &[Complex64; 3]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn mat_vec(m: &[[f64; 3]; 3], v: &V3) -> V3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

fn inverse3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let c0 = [m[0][0], m[1][0], m[2][0]];
    let c1 = [m[0][1], m[1][1], m[2][1]];
    let c2 = [m[0][2], m[1][2], m[2][2]];
    let det = dot(&c0, &cross(&c1, &c2));
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    // rows of the inverse are the dual basis
    let r0 = cross(&c1, &c2).map(|v| v / det);
    let r1 = cross(&c2, &c0).map(|v| v / det);
    let r2 = cross(&c0, &c1).map(|v| v / det);
    Some([r0, r1, r2])
}

/// Real eigenvalue `r`, complex eigenvalue `c`, and the eigenbasis
/// `g1` (real), `g2 + i·g3` (complex, rotated so that `g2 ⟂ g3`).
#[derive(Clone, Debug)]
pub struct SpectralBasis {
    pub r: f64,
    pub c: Complex64,
    pub g1: V3,
    pub g2: V3,
    pub g3: V3,
    /// Rows map standard coordinates to eigen-coordinates `(x, y, z)`.
    pub inverse: [[f64; 3]; 3],
    /// Largest relative eigen-equation defect.
    pub residual: f64,
    matrix: [[f64; 3]; 3],
}

/// Sign of `p(t)` evaluated exactly at the dyadic rational `t`.
fn exact_sign(cp: &crate::exact::CharPoly, t: f64) -> i8 {
    let q = Rational::from_float(t).expect("finite bisection point");
    let v = cp.eval_rational(&q);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// The unique real root of the characteristic polynomial of an NRS matrix,
/// bracketed with exact sign evaluations and bisected to f64 resolution.
fn real_root(cp: &crate::exact::CharPoly) -> f64 {
    // p(t) = −t³ + …, so p → −∞ as t → +∞
    let bound = [&cp.b1, &cp.b2, &cp.b3]
        .iter()
        .map(|b| b.abs().to_f64().unwrap_or(f64::MAX))
        .fold(0.0, f64::max)
        + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    let s_lo = exact_sign(cp, lo);
    if s_lo == 0 {
        return lo;
    }
    for _ in 0..4000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match exact_sign(cp, mid) {
            0 => return mid,
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    0.5 * (lo + hi)
}

pub fn spectral_basis(m: &Mat3Z) -> Result<SpectralBasis> {
    let cp = charpoly_coeffs(m);
    let class = classify_charpoly(&cp);
    if class != SpectrumClass::NRS {
        return Err(Error::SpectrumMismatch(format!("{class:?}")));
    }
    let r = real_root(&cp);
    let b1 = cp.b1.to_f64().unwrap();
    let b3 = cp.b3.to_f64().unwrap();
    // −t³ + b1 t² − b2 t + b3 = −(t − r)(t² − s t + q)
    let s = b1 - r;
    let q = b3 / r;
    let im = (q - s * s / 4.0).max(0.0).sqrt();
    let c = Complex64::new(s / 2.0, im);

    let a = m.to_f64();
    let shifted = |lam: f64| -> [[f64; 3]; 3] {
        let mut s = a;
        for (i, row) in s.iter_mut().enumerate() {
            row[i] -= lam;
        }
        s
    };
    let rs = shifted(r);
    let mut g1 = [0.0; 3];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let cand = cross(&rs[i], &rs[j]);
        if norm(&cand) > norm(&g1) {
            g1 = cand;
        }
    }
    let n1 = norm(&g1);
    g1 = g1.map(|v| v / n1);

    let cs: [[Complex64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(a[i][j], 0.0) - if i == j { c } else { Complex64::new(0.0, 0.0) }));
    let mut u = [Complex64::new(0.0, 0.0); 3];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let cand = ccross(&cs[i], &cs[j]);
        if cnorm(&cand) > cnorm(&u) {
            u = cand;
        }
    }
    let nu = cnorm(&u);
    let u = u.map(|z| z / nu);
    // rotate the phase so that real and imaginary parts are orthogonal
    let p: V3 = u.map(|z| z.re);
    let qv: V3 = u.map(|z| z.im);
    let phi = 0.5 * (-2.0 * dot(&p, &qv)).atan2(dot(&p, &p) - dot(&qv, &qv));
    let rot = Complex64::new(phi.cos(), phi.sin());
    let u = u.map(|z| z * rot);
    let g2: V3 = u.map(|z| z.re);
    let g3: V3 = u.map(|z| z.im);

    let gm = [[g1[0], g2[0], g3[0]], [g1[1], g2[1], g3[1]], [g1[2], g2[2], g3[2]]];
    let inverse = inverse3(&gm).ok_or_else(|| Error::SpectrumMismatch("singular eigenbasis".into()))?;

    let anorm = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let ag1 = mat_vec(&a, &g1);
    let res1 = norm(&[ag1[0] - r * g1[0], ag1[1] - r * g1[1], ag1[2] - r * g1[2]]) / (anorm * norm(&g1));
    let au: [Complex64; 3] = std::array::from_fn(|i| {
        (0..3).map(|j| u[j] * a[i][j]).sum::<Complex64>() - c * u[i]
    });
    let res2 = cnorm(&au) / (anorm * cnorm(&u));
    Ok(SpectralBasis { r, c, g1, g2, g3, inverse, residual: res1.max(res2), matrix: a })
}

impl SpectralBasis {
    pub fn coords(&self, w: &V3) -> V3 {
        mat_vec(&self.inverse, w)
    }

    pub fn from_coords(&self, e: &V3) -> V3 {
        std::array::from_fn(|i| e[0] * self.g1[i] + e[1] * self.g2[i] + e[2] * self.g3[i])
    }

    pub fn apply(&self, w: &V3) -> V3 {
        mat_vec(&self.matrix, w)
    }

    /// Lengths of the principal axes of the unit orbit, `(major, minor)`.
    pub fn orbit_axes(&self) -> (f64, f64) {
        // g2 ⟂ g3 by construction, but recompute from the Gram matrix anyway
        let (a, b, c) = (dot(&self.g2, &self.g2), dot(&self.g2, &self.g3), dot(&self.g3, &self.g3));
        let tr = a + c;
        let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
        (((tr + disc) / 2.0).sqrt(), ((tr - disc) / 2.0).max(0.0).sqrt())
    }
}

/// Point of the half-plane `π₊`: eigen-coordinate `x` and orbit radius `ρ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiPoint {
    pub x: f64,
    pub rho: f64,
    pub source: Option<Vec3Z>,
}

pub fn pi_project(basis: &SpectralBasis, w: &Vec3Z) -> PiPoint {
    let e = basis.coords(&w.to_f64());
    PiPoint { x: e[0], rho: e[1].hypot(e[2]), source: Some(w.clone()) }
}

/// `samples` points of the orbit of `w` at uniformly spaced angles.
pub fn orbit_points(basis: &SpectralBasis, w: &V3, samples: usize) -> Vec<V3> {
    let e = basis.coords(w);
    (0..samples)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let (s, c) = th.sin_cos();
            basis.from_coords(&[e[0], e[1] * c - e[2] * s, e[1] * s + e[2] * c])
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SailVertex {
    pub source: Vec3Z,
    pub pi: [f64; 2],
    pub certified: bool,
}

/// Factor-sails of both components of `π₊ \ {x = 0}`, computed from a
/// truncated lattice box.
#[derive(Clone, Debug, Serialize)]
pub struct FactorSail {
    pub bound: u64,
    pub positive: Vec<SailVertex>,
    pub negative: Vec<SailVertex>,
}

fn turn(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Vertices of the boundary of the convex hull of `pts` (all with `x > 0`)
/// that face the corner at the origin, ordered by increasing `x`.
fn corner_chain(pts: &mut [(f64, f64, usize)]) -> Vec<usize> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut hull: Vec<(f64, f64, usize)> = Vec::new();
    for &p in pts.iter() {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if turn((o.0, o.1), (a.0, a.1), (p.0, p.1)) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // the lower hull continues past the lowest vertex; keep the descending part
    let mut out = vec![hull[0].2];
    for w in hull.windows(2) {
        if w[1].1 < w[0].1 {
            out.push(w[1].2);
        } else {
            break;
        }
    }
    out
}

pub fn factor_sail(m: &Mat3Z, bound: u64) -> Result<FactorSail> {
    if bound < 2 {
        return Err(Error::Invalid("sail bound must be at least 2".into()));
    }
    let basis = spectral_basis(m)?;
    let b = bound as i64;
    let mut sources = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                if x == 0 && y == 0 && z == 0 {
                    continue;
                }
                let e = basis.coords(&[x as f64, y as f64, z as f64]);
                let rho = e[1].hypot(e[2]);
                let idx = sources.len();
                sources.push([x, y, z]);
                if e[0] > 0.0 {
                    pos.push((e[0], rho, idx));
                } else if e[0] < 0.0 {
                    neg.push((-e[0], rho, idx));
                }
            }
        }
    }
    let half = b / 2;
    let build = |chain: Vec<usize>, pts: &[(f64, f64, usize)], sign: f64| -> Vec<SailVertex> {
        let lookup = |i: usize| pts.iter().find(|p| p.2 == i).copied().unwrap();
        let small = |i: usize| sources[i].iter().all(|c| c.abs() <= half);
        (0..chain.len())
            .map(|k| {
                let p = lookup(chain[k]);
                let certified = k > 0 && k + 1 < chain.len() && small(chain[k - 1]) && small(chain[k + 1]);
                SailVertex {
                    source: Vec3Z::from_i64(sources[chain[k]]),
                    pi: [sign * p.0, p.1],
                    certified,
                }
            })
            .collect()
    };
    let mut pos_sorted = pos.clone();
    let mut neg_sorted = neg.clone();
    let pc = if pos.is_empty() { vec![] } else { corner_chain(&mut pos_sorted) };
    let nc = if neg.is_empty() { vec![] } else { corner_chain(&mut neg_sorted) };
    Ok(FactorSail { bound, positive: build(pc, &pos_sorted, 1.0), negative: build(nc, &neg_sorted, -1.0) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KleinConfig {
    pub orbit_samples: usize,
    /// Relative outward padding of candidate regions.
    pub padding: f64,
    /// Largest bounding box (in lattice cells) a candidate scan may visit.
    pub cell_budget: f64,
}

impl Default for KleinConfig {
    fn default() -> Self {
        KleinConfig { orbit_samples: 256, padding: 1e-6, cell_budget: 1e9 }
    }
}

/// Convex hull of the orbits of two points: a frustum in eigen-coordinates
/// between the circles `(x1, ρ1)` and `(x2, ρ2)`, padded outward.
#[derive(Clone, Debug)]
pub struct ConvexRegion3 {
    pub basis: SpectralBasis,
    pub ends: [(f64, f64); 2],
    /// Sampled orbit points, pushed out by `1/cos(π/N)` so that their hull
    /// contains both ellipses.
    pub cloud: Vec<V3>,
    pub padding: f64,
}

impl ConvexRegion3 {
    pub fn new(basis: &SpectralBasis, p: &V3, q: &V3, cfg: &KleinConfig) -> Self {
        let ep = basis.coords(p);
        let eq = basis.coords(q);
        let ends = [(ep[0], ep[1].hypot(ep[2])), (eq[0], eq[1].hypot(eq[2]))];
        let n = cfg.orbit_samples.max(8);
        let scale = 1.0 / (std::f64::consts::PI / n as f64).cos();
        let mut cloud = Vec::with_capacity(2 * n);
        for w in [p, q] {
            let e = basis.coords(w);
            for pt in orbit_points(basis, w, n) {
                let pe = basis.coords(&pt);
                cloud.push(basis.from_coords(&[e[0], pe[1] * scale, pe[2] * scale]));
            }
        }
        ConvexRegion3 { basis: basis.clone(), ends, cloud, padding: cfg.padding }
    }

    fn scale(&self) -> f64 {
        let [(x1, r1), (x2, r2)] = self.ends;
        x1.abs().max(x2.abs()).max(r1).max(r2)
    }

    fn x_tol(&self) -> f64 {
        self.padding * self.scale()
    }

    /// Padded radius bound at eigen-coordinate `x` (clamped to the frustum).
    fn radius_at(&self, x: f64) -> f64 {
        let [(x1, r1), (x2, r2)] = self.ends;
        let lam = if x2 != x1 { ((x - x1) / (x2 - x1)).clamp(0.0, 1.0) } else { 0.0 };
        (r1 + lam * (r2 - r1)) * (1.0 + self.padding) + self.padding * self.scale()
    }

    pub fn contains_coords(&self, e: &V3) -> bool {
        let [(x1, _), (x2, _)] = self.ends;
        let tol = self.x_tol();
        if e[0] < x1.min(x2) - tol || e[0] > x1.max(x2) + tol {
            return false;
        }
        e[1].hypot(e[2]) <= self.radius_at(e[0])
    }

    pub fn contains(&self, w: &V3) -> bool {
        self.contains_coords(&self.basis.coords(w))
    }

    /// Axis-aligned bounding box in standard coordinates.
    pub fn bbox(&self) -> [(f64, f64); 3] {
        let b = &self.basis;
        std::array::from_fn(|i| {
            let h = b.g2[i].hypot(b.g3[i]);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (x, _) in self.ends {
                let c = x * b.g1[i];
                let r = self.radius_at(x);
                lo = lo.min(c - r * h);
                hi = hi.max(c + r * h);
            }
            for pt in &self.cloud {
                lo = lo.min(pt[i]);
                hi = hi.max(pt[i]);
            }
            let pad = self.padding * (hi - lo).abs() + 1e-9;
            (lo - pad, hi + pad)
        })
    }

    /// Volume in standard coordinates.
    pub fn volume(&self) -> f64 {
        let [(x1, r1), (x2, r2)] = self.ends;
        let b = &self.basis;
        let det = dot(&b.g1, &cross(&b.g2, &b.g3)).abs();
        std::f64::consts::PI * (x2 - x1).abs() * (r1 * r1 + r1 * r2 + r2 * r2) / 3.0 * det
    }

    /// All integer points inside. The frustum sits in an ellipsoid, and the
    /// lattice points of the ellipsoid are enumerated in an LLL-reduced
    /// basis, so the cost follows the number of points rather than the
    /// bounding box, which can be huge for eccentric orbits.
    pub fn integer_points(&self, budget: f64) -> Result<Vec<[i64; 3]>> {
        let [(x1, _), (x2, _)] = self.ends;
        let tol = self.x_tol();
        let hx = (x1 - x2).abs() / 2.0 + tol;
        let xc = (x1 + x2) / 2.0;
        let rmax = self.radius_at(x1).max(self.radius_at(x2));
        // cylinder |x − xc| ≤ hx, ρ ≤ rmax lies in ((x − xc)/hx)² + (ρ/rmax)² ≤ 2
        let scale = [1.0 / hx, 1.0 / rmax, 1.0 / rmax];
        let l: [[f64; 3]; 3] = std::array::from_fn(|i| self.basis.inverse[i].map(|v| v * scale[i]));
        let target = [xc / hx, 0.0, 0.0];
        let mut out = Vec::new();
        let mut nodes = 0.0;
        lattice_ellipsoid_points(&l, &target, 2.0 * (1.0 + 1e-9), budget, &mut nodes, |q| {
            if self.contains(&q.map(|c| c as f64)) {
                out.push(q);
            }
        })?;
        Ok(out)
    }
}

/// LLL reduction (δ = 0.99) of the columns of `l`. Returns the reduced
/// vectors and their integer coordinates in the original basis.
fn lll(l: &[[f64; 3]; 3]) -> ([V3; 3], [[i64; 3]; 3]) {
    let mut b: [V3; 3] = std::array::from_fn(|j| [l[0][j], l[1][j], l[2][j]]);
    let mut u: [[i64; 3]; 3] = std::array::from_fn(|j| std::array::from_fn(|i| (i == j) as i64));
    let gso = |b: &[V3; 3]| -> ([V3; 3], [[f64; 3]; 3]) {
        let mut bs = *b;
        let mut mu = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..i {
                mu[i][j] = dot(&b[i], &bs[j]) / dot(&bs[j], &bs[j]);
                for k in 0..3 {
                    bs[i][k] -= mu[i][j] * bs[j][k];
                }
            }
        }
        (bs, mu)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < 3 && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gso(&b);
            if mu[k][j].abs() > 0.5 {
                let r = mu[k][j].round();
                let ri = r as i64;
                for t in 0..3 {
                    b[k][t] -= r * b[j][t];
                    u[k][t] -= ri * u[j][t];
                }
            }
        }
        let (bs, mu) = gso(&b);
        if dot(&bs[k], &bs[k]) >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * dot(&bs[k - 1], &bs[k - 1]) {
            k += 1;
        } else {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    (b, u)
}

/// Calls `visit` on every `q ∈ ℤ³` with `‖L q − target‖² ≤ r2`
/// (Fincke–Pohst), failing once more than `budget` nodes were visited.
fn lattice_ellipsoid_points(
    l: &[[f64; 3]; 3],
    target: &V3,
    r2: f64,
    budget: f64,
    nodes: &mut f64,
    mut visit: impl FnMut([i64; 3]),
) -> Result<()> {
    let (v, u) = lll(l);
    let mut bs = v;
    let mut mu = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..i {
            mu[i][j] = dot(&v[i], &bs[j]) / dot(&bs[j], &bs[j]);
            for k in 0..3 {
                bs[i][k] -= mu[i][j] * bs[j][k];
            }
        }
    }
    let nb: [f64; 3] = std::array::from_fn(|i| dot(&bs[i], &bs[i]));
    if nb.iter().any(|n| !(*n > 0.0) || !n.is_finite()) {
        return Err(Error::SpectrumMismatch("degenerate enumeration basis".into()));
    }
    let c: [f64; 3] = std::array::from_fn(|i| dot(target, &bs[i]) / nb[i]);
    // slack absorbs rounding in the interval ends; points are re-tested exactly by the caller
    let slack = 1e-9;
    let range = |centre: f64, rem: f64, n: f64| -> (i64, i64) {
        let h = (rem.max(0.0) / n).sqrt() + slack;
        ((centre - h).ceil() as i64, (centre + h).floor() as i64)
    };
    let mut k = [0i64; 3];
    let c2 = c[2];
    let (lo2, hi2) = range(c2, r2, nb[2]);
    if (hi2 - lo2) as f64 > budget {
        return Err(Error::RegionTooLarge { cells: (hi2 - lo2) as f64, budget });
    }
    for k2 in lo2..=hi2 {
        k[2] = k2;
        let d2 = k2 as f64 - c2;
        let rem2 = r2 - nb[2] * d2 * d2;
        let c1 = c[1] - mu[2][1] * k2 as f64;
        let (lo1, hi1) = range(c1, rem2, nb[1]);
        for k1 in lo1..=hi1 {
            k[1] = k1;
            let d1 = k1 as f64 - c1;
            let rem1 = rem2 - nb[1] * d1 * d1;
            let c0 = c[0] - mu[1][0] * k1 as f64 - mu[2][0] * k2 as f64;
            let (lo0, hi0) = range(c0, rem1, nb[0]);
            *nodes += 1.0 + (hi0 - lo0 + 1).max(0) as f64;
            if *nodes > budget {
                return Err(Error::RegionTooLarge { cells: *nodes, budget });
            }
            for k0 in lo0..=hi0 {
                k[0] = k0;
                let q: [i64; 3] = std::array::from_fn(|t| k[0] * u[0][t] + k[1] * u[1][t] + k[2] * u[2][t]);
                visit(q);
            }
        }
    }
    Ok(())
}

/// `Γ⁰(p)`: convex hull of the orbits of `p` and `M p`.
pub fn candidate_region(m: &Mat3Z, p: &Vec3Z, cfg: &KleinConfig) -> Result<ConvexRegion3> {
    let basis = spectral_basis(m)?;
    candidate_region_with(&basis, m, p, cfg)
}

pub fn candidate_region_with(basis: &SpectralBasis, m: &Mat3Z, p: &Vec3Z, cfg: &KleinConfig) -> Result<ConvexRegion3> {
    if p.is_zero() {
        return Err(Error::Invalid("candidate base point must be nonzero".into()));
    }
    Ok(ConvexRegion3::new(basis, &p.to_f64(), &m.mul_vec(p).to_f64(), cfg))
}

/// Nonzero integer points of `Γ⁰(p) ∪ Γ⁰(M p)`, sorted and deduplicated.
pub fn candidate_vectors(m: &Mat3Z, p: &Vec3Z, cfg: &KleinConfig) -> Result<Vec<Vec3Z>> {
    let basis = spectral_basis(m)?;
    candidate_vectors_with(&basis, m, p, cfg)
}

pub fn candidate_vectors_with(basis: &SpectralBasis, m: &Mat3Z, p: &Vec3Z, cfg: &KleinConfig) -> Result<Vec<Vec3Z>> {
    if !p.is_primitive() {
        return Err(Error::NotPrimitive(p.to_string()));
    }
    let mp = m.mul_vec(p);
    let mut set: BTreeSet<Vec3Z> = BTreeSet::new();
    for base in [p, &mp] {
        let region = candidate_region_with(basis, m, base, cfg)?;
        for q in region.integer_points(cfg.cell_budget)? {
            if q != [0, 0, 0] {
                set.insert(Vec3Z::from_i64(q));
            }
        }
    }
    set.insert(p.clone());
    set.insert(mp);
    set.remove(&Vec3Z(std::array::from_fn(|_| BigInt::zero())));
    Ok(set.into_iter().collect())
}
