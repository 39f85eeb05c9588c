//! Exact ς-reduction decisions: global minimisation of the MD-characteristic,
//! the ς-reduced set of a conjugacy class, integer conjugacy, bounded box
//! searches, mod-q impossibility certificates and power roots.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{charpoly_coeffs, cubic_form, md_characteristic, CubicForm, Mat3Z, Vec3Z};
use crate::hessenberg::{reduce_to_perfect, type_of};
use crate::klein::{candidate_vectors_with, spectral_basis, KleinConfig};
use crate::par::{self, Parallelism};
use crate::spectra::{classify_charpoly, SpectrumClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    KleinVoronoiMinimum,
    ModQObstruction(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionVerdict {
    Reduced(Certificate),
    Nonreduced { witness: Vec3Z, delta: BigInt },
    ProbablyReduced { bound: u64 },
    Unknown,
}

impl ReductionVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ReductionVerdict::Reduced(_) => "reduced",
            ReductionVerdict::Nonreduced { .. } => "nonreduced",
            ReductionVerdict::ProbablyReduced { .. } => "probably-reduced",
            ReductionVerdict::Unknown => "unknown",
        }
    }
}

/// A verdict together with the minimum it rests on, when one was computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: ReductionVerdict,
    pub mu: Option<BigInt>,
    pub witnesses: Vec<Vec3Z>,
}

fn vec_json(w: &Vec3Z) -> Value {
    Value::Array(w.0.iter().map(|c| json!(c.to_string().parse::<serde_json::Number>().unwrap())).collect())
}

impl Decision {
    pub fn to_json(&self) -> Value {
        let certificate = match &self.verdict {
            ReductionVerdict::Reduced(Certificate::KleinVoronoiMinimum) => json!("klein-voronoi-minimum"),
            ReductionVerdict::Reduced(Certificate::ModQObstruction(q)) => json!({ "mod-q-obstruction": q }),
            _ => Value::Null,
        };
        let mut witnesses: Vec<Value> = self.witnesses.iter().map(vec_json).collect();
        if let ReductionVerdict::Nonreduced { witness, .. } = &self.verdict {
            if !self.witnesses.contains(witness) {
                witnesses.insert(0, vec_json(witness));
            }
        }
        let mut out = json!({
            "verdict": self.verdict.name(),
            "mu": self.mu.as_ref().map(|m| m.to_string().parse::<serde_json::Number>().unwrap()),
            "witnesses": witnesses,
            "certificate": certificate,
        });
        if let ReductionVerdict::ProbablyReduced { bound } = self.verdict {
            out["bound"] = json!(bound);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionConfig {
    pub klein: KleinConfig,
    /// Box bound for RS matrices.
    pub rs_bound: u64,
    pub parallelism: Parallelism,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig { klein: KleinConfig::default(), rs_bound: 1000, parallelism: Parallelism::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSearch {
    pub bound: u64,
    pub mu: BigInt,
    /// Minimising primitive vectors, one per sign pair, in lexicographic order.
    pub witnesses: Vec<Vec3Z>,
    /// The scan stopped at the first slab reaching `μ = 1`.
    pub early_exit: bool,
}

struct SlabMin {
    mu: Option<BigInt>,
    witnesses: Vec<Vec3Z>,
}

impl SlabMin {
    fn offer(&mut self, v: BigInt, w: [i64; 3]) {
        match &self.mu {
            Some(m) if v > *m => {}
            Some(m) if v == *m => self.witnesses.push(Vec3Z::from_i64(w)),
            _ => {
                self.mu = Some(v);
                self.witnesses = vec![Vec3Z::from_i64(w)];
            }
        }
    }

    fn merge(&mut self, other: SlabMin) {
        let Some(om) = other.mu.clone() else { return };
        match &self.mu {
            Some(m) if om > *m => {}
            Some(m) if om == *m => self.witnesses.extend(other.witnesses),
            _ => *self = other,
        }
    }
}

fn gcd3(w: [i64; 3]) -> i64 {
    fn g(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            g(b, a % b)
        }
    }
    g(g(w[0], w[1]), w[2])
}

/// All `w` with canonical sign in the slab `x = const`.
fn scan_slab(form: &CubicForm, fast: Option<&crate::exact::FastCubic>, x: i64, b: i64) -> SlabMin {
    let mut best = SlabMin { mu: None, witnesses: Vec::new() };
    let ys: Box<dyn Iterator<Item = i64>> = if x == 0 { Box::new(0..=b) } else { Box::new(-b..=b) };
    for y in ys {
        let zlo = if x == 0 && y == 0 { 1 } else { -b };
        let col = fast.and_then(|f| f.column(x, y));
        for z in zlo..=b {
            let v = match col.as_ref().and_then(|c| c.eval(z)) {
                Some(v) => BigInt::from(v.abs()),
                None => form.eval(&Vec3Z::from_i64([x, y, z])).abs(),
            };
            if let Some(m) = &best.mu {
                if v > *m {
                    continue;
                }
            }
            let w = [x, y, z];
            if gcd3(w) == 1 {
                best.offer(v, w);
            }
        }
    }
    best
}

const SLAB_BATCH: usize = 16;

/// Exact minimum of `Δ_M` over nonzero integer `w` with `‖w‖∞ ≤ bound`.
///
/// With `stop_at_one` the scan returns after the first batch of slabs that
/// reaches `Δ = 1`; batches are fixed, so the result does not depend on the
/// number of workers.
pub fn box_search_min_with(m: &Mat3Z, bound: u64, par: Parallelism, stop_at_one: bool) -> Result<BoxSearch> {
    if bound < 1 {
        return Err(Error::Invalid("box bound must be at least 1".into()));
    }
    let b = i64::try_from(bound).map_err(|_| Error::Invalid("box bound too large".into()))?;
    let form = cubic_form(m);
    let fast = form.fast();
    let xs: Vec<i64> = (0..=b).collect();
    let mut total = SlabMin { mu: None, witnesses: Vec::new() };
    let mut early_exit = false;
    for (k, batch) in xs.chunks(SLAB_BATCH).enumerate() {
        let mins = par::map(batch.to_vec(), par, |x| scan_slab(&form, fast.as_ref(), x, b));
        for s in mins {
            total.merge(s);
        }
        if stop_at_one && total.mu.as_ref().is_some_and(|m| m.is_one()) && (k + 1) * SLAB_BATCH <= b as usize {
            early_exit = true;
            break;
        }
    }
    let mut witnesses = total.witnesses;
    witnesses.sort();
    Ok(BoxSearch { bound, mu: total.mu.expect("box is nonempty"), witnesses, early_exit })
}

pub fn box_search_min(m: &Mat3Z, bound: u64) -> Result<BoxSearch> {
    box_search_min_with(m, bound, Parallelism::default(), false)
}

fn require_nrs(m: &Mat3Z) -> Result<()> {
    match classify_charpoly(&charpoly_coeffs(m)) {
        SpectrumClass::NRS => Ok(()),
        SpectrumClass::ReduciblePoly => Err(Error::ReduciblePolynomial),
        other => Err(Error::SpectrumMismatch(format!("{other:?}"))),
    }
}

fn require_unimodular(m: &Mat3Z) -> Result<()> {
    let d = m.det();
    if d.is_one() {
        Ok(())
    } else {
        Err(Error::NotUnimodular(d.to_string()))
    }
}

/// Global minimum `μ` of `Δ_M` over `ℤ³ \ 0` and its minimisers among the
/// candidate vectors (primitive, canonical sign, sorted).
pub fn min_md_over_candidates(m: &Mat3Z, cfg: &KleinConfig) -> Result<(BigInt, Vec<Vec3Z>)> {
    require_unimodular(m)?;
    require_nrs(m)?;
    let basis = spectral_basis(m)?;
    let cands = candidate_vectors_with(&basis, m, &Vec3Z::unit(0), cfg)?;
    let form = cubic_form(m);
    let mut mu: Option<BigInt> = None;
    let mut argmins = BTreeSet::new();
    for w in cands {
        let v = form.eval(&w).abs();
        if v.is_zero() {
            continue;
        }
        let w = w.canonical_sign();
        match &mu {
            Some(cur) if v > *cur => {}
            Some(cur) if v == *cur => {
                if w.is_primitive() {
                    argmins.insert(w);
                }
            }
            _ => {
                argmins.clear();
                if w.is_primitive() {
                    argmins.insert(w);
                }
                mu = Some(v);
            }
        }
    }
    let mu = mu.expect("the base point is always a candidate");
    // a non-primitive minimiser k·w would give k³·Δ(w) < Δ(k·w)
    debug_assert!(!argmins.is_empty());
    Ok((mu, argmins.into_iter().collect()))
}

fn residue_values(form: &CubicForm, q: u64) -> Vec<bool> {
    let qi = q as i64;
    let c: Vec<i64> = form
        .coeffs
        .iter()
        .map(|k| (k % BigInt::from(q)).to_i64().unwrap().rem_euclid(qi))
        .collect();
    let mut seen = vec![false; q as usize];
    for x in 0..qi {
        for y in 0..qi {
            for z in 0..qi {
                let mons = [x * x * x, x * x * y, x * x * z, x * y * y, x * y * z, x * z * z, y * y * y, y * y * z, y * z * z, z * z * z];
                let v = mons.iter().zip(&c).fold(0i64, |acc, (mo, co)| (acc + (mo % qi) * co) % qi);
                seen[v as usize] = true;
            }
        }
    }
    seen
}

/// True iff no residue class of `w` mod `q` gives `F_M(w) ≡ ±c`, which
/// rules out `Δ_M(w) = c` for every integer `w`.
pub fn mod_q_obstruction(m: &Mat3Z, c: &BigInt, q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let seen = residue_values(&cubic_form(m), q);
    let qb = BigInt::from(q);
    let r1 = ((c % &qb + &qb) % &qb).to_usize().unwrap();
    let r2 = ((-c % &qb + &qb) % &qb).to_usize().unwrap();
    !seen[r1] && !seen[r2]
}

const MOD_Q_MAX: u64 = 12;

/// Smallest `q` that rules out every value `1 ≤ c < sigma` at once.
fn find_mod_q(m: &Mat3Z, sigma: &BigInt) -> Option<u64> {
    if *sigma <= BigInt::one() {
        return None;
    }
    // c ranges over 1..σ, so a residue 0 ≡ c would need q < σ and can never be excluded
    let lo = sigma.to_u64().filter(|s| *s <= MOD_Q_MAX)?.max(2);
    let form = cubic_form(m);
    (lo..=MOD_Q_MAX).find(|&q| {
        let seen = residue_values(&form, q);
        let s = sigma.to_u64().unwrap();
        (1..s).all(|c| !seen[(c % q) as usize] && !seen[((q - c % q) % q) as usize])
    })
}

fn sigma_of(m: &Mat3Z) -> Result<BigInt> {
    if !m.is_hessenberg() {
        return Err(Error::NotHessenberg(m.get(2, 0).to_string()));
    }
    let (ty, perfect) = type_of(m)?;
    if !perfect {
        return Err(Error::Invalid(format!("type {ty} is not perfect")));
    }
    ty.complexity()
}

/// Verdict with its supporting minimum. `rs_bound` is used only for RS input.
pub fn decide(m: &Mat3Z, cfg: &ReductionConfig) -> Result<Decision> {
    require_unimodular(m)?;
    let sigma = sigma_of(m)?;
    let class = classify_charpoly(&charpoly_coeffs(m));
    if class == SpectrumClass::ReduciblePoly {
        return Err(Error::ReduciblePolynomial);
    }
    if let Some(q) = find_mod_q(m, &sigma) {
        return Ok(Decision { verdict: ReductionVerdict::Reduced(Certificate::ModQObstruction(q)), mu: Some(sigma), witnesses: vec![Vec3Z::unit(0)] });
    }
    match class {
        SpectrumClass::NRS => {
            let (mu, argmins) = min_md_over_candidates(m, &cfg.klein)?;
            let verdict = if mu == sigma {
                ReductionVerdict::Reduced(Certificate::KleinVoronoiMinimum)
            } else {
                ReductionVerdict::Nonreduced { witness: argmins[0].clone(), delta: mu.clone() }
            };
            Ok(Decision { verdict, mu: Some(mu), witnesses: argmins })
        }
        _ => {
            let bs = box_search_min_with(m, cfg.rs_bound, cfg.parallelism, true)?;
            if bs.mu < sigma {
                let verdict = ReductionVerdict::Nonreduced { witness: bs.witnesses[0].clone(), delta: bs.mu.clone() };
                Ok(Decision { verdict, mu: Some(bs.mu), witnesses: bs.witnesses })
            } else {
                Ok(Decision { verdict: ReductionVerdict::ProbablyReduced { bound: cfg.rs_bound }, mu: None, witnesses: bs.witnesses })
            }
        }
    }
}

pub fn is_sigma_reduced(m: &Mat3Z, cfg: &ReductionConfig) -> Result<ReductionVerdict> {
    decide(m, cfg).map(|d| d.verdict)
}

/// The ς-reduced perfect Hessenberg matrices conjugate to `M`, each with the
/// basis that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSet {
    pub mu: BigInt,
    pub members: Vec<Mat3Z>,
    bases: Vec<Mat3Z>,
}

impl ReducedSet {
    /// Basis `B` with `B⁻¹ M B` equal to `members[i]`.
    pub fn basis(&self, i: usize) -> &Mat3Z {
        &self.bases[i]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mu": self.mu.to_string().parse::<serde_json::Number>().unwrap(),
            "reduced": self.members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub fn sigma_reduced_set(m: &Mat3Z, cfg: &KleinConfig) -> Result<ReducedSet> {
    let (mu, argmins) = min_md_over_candidates(m, cfg)?;
    let mut found: Vec<(String, Mat3Z, Mat3Z)> = Vec::new();
    for w in argmins {
        let red = reduce_to_perfect(m, &w)?;
        debug_assert_eq!(type_of(&red.matrix)?.0.complexity()?, mu);
        let key = red.matrix.to_string();
        if !found.iter().any(|(k, _, _)| *k == key) {
            found.push((key, red.matrix, red.basis));
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let (members, bases) = found.into_iter().map(|(_, a, b)| (a, b)).unzip();
    Ok(ReducedSet { mu, members, bases })
}

/// Some unimodular `X` with `M2 = X M1 X⁻¹`, if one exists.
pub fn find_conjugator(m1: &Mat3Z, m2: &Mat3Z, cfg: &KleinConfig) -> Result<Option<Mat3Z>> {
    require_unimodular(m1)?;
    require_unimodular(m2)?;
    if charpoly_coeffs(m1) != charpoly_coeffs(m2) {
        return Ok(None);
    }
    let s1 = sigma_reduced_set(m1, cfg)?;
    let s2 = sigma_reduced_set(m2, cfg)?;
    for (i, a) in s1.members.iter().enumerate() {
        if let Some(j) = s2.members.iter().position(|b| b == a) {
            let x = s2.basis(j) * &s1.basis(i).unimodular_inverse()?;
            return Ok(Some(x));
        }
    }
    Ok(None)
}

pub fn integer_conjugate(m1: &Mat3Z, m2: &Mat3Z, cfg: &KleinConfig) -> Result<bool> {
    Ok(shared_reduced(m1, m2, cfg)?.is_some_and(|s| !s.is_empty()))
}

/// Reduced matrices common to both classes, or `None` when the
/// characteristic polynomials already differ.
pub fn shared_reduced(m1: &Mat3Z, m2: &Mat3Z, cfg: &KleinConfig) -> Result<Option<Vec<Mat3Z>>> {
    require_unimodular(m1)?;
    require_unimodular(m2)?;
    require_nrs(m1)?;
    require_nrs(m2)?;
    if charpoly_coeffs(m1) != charpoly_coeffs(m2) {
        return Ok(None);
    }
    let s1 = sigma_reduced_set(m1, cfg)?;
    let s2 = sigma_reduced_set(m2, cfg)?;
    Ok(Some(s1.members.into_iter().filter(|a| s2.members.contains(a)).collect()))
}

fn round_matrix(b: &[[f64; 3]; 3]) -> Option<Mat3Z> {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let v = b[i][j].round();
            if !v.is_finite() || v.abs() > 9.0e15 || (b[i][j] - v).abs() > 1e-3 {
                return None;
            }
            out[i][j] = v as i64;
        }
    }
    Some(Mat3Z::from_i64(out))
}

/// Some integer `B` with `Bᵏ = M`, for `k ∈ {2, 3}`.
pub fn detect_power_root(m: &Mat3Z, k: u32) -> Result<Option<Mat3Z>> {
    if !(2..=3).contains(&k) {
        return Err(Error::Invalid(format!("unsupported root degree {k}")));
    }
    require_nrs(m)?;
    let basis = spectral_basis(m)?;
    let (r, c) = (basis.r, basis.c);
    let real_roots: Vec<f64> = if k == 2 { vec![r.sqrt(), -r.sqrt()] } else { vec![r.cbrt()] };
    let croot = c.powf(1.0 / k as f64);
    let a = m.to_f64();
    let a2 = (m * m).to_f64();
    for rr in &real_roots {
        for j in 0..k {
            let w = croot * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            // c0 + c1 λ + c2 λ² = root(λ) at λ = r, c, c̄
            let lam = [Complex64::new(r, 0.0), c, c.conj()];
            let rhs = [Complex64::new(*rr, 0.0), w, w.conj()];
            let Some(coef) = solve3(&lam.map(|l| [Complex64::new(1.0, 0.0), l, l * l]), &rhs) else { continue };
            let (c0, c1, c2) = (coef[0].re, coef[1].re, coef[2].re);
            let b: [[f64; 3]; 3] = std::array::from_fn(|i| {
                std::array::from_fn(|jj| c0 * if i == jj { 1.0 } else { 0.0 } + c1 * a[i][jj] + c2 * a2[i][jj])
            });
            if let Some(b) = round_matrix(&b) {
                if b.pow(k) == *m {
                    return Ok(Some(b));
                }
            }
        }
    }
    Ok(None)
}

fn solve3(a: &[[Complex64; 3]; 3], rhs: &[Complex64; 3]) -> Option<[Complex64; 3]> {
    let mut m: [[Complex64; 4]; 3] = std::array::from_fn(|i| [a[i][0], a[i][1], a[i][2], rhs[i]]);
    for col in 0..3 {
        let piv = (col..3).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))?;
        if m[piv][col].norm() == 0.0 {
            return None;
        }
        m.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    let t = m[col][k];
                    m[row][k] -= f * t;
                }
            }
        }
    }
    Some(std::array::from_fn(|i| m[i][3] / m[i][i]))
}

/// `Δ_M(w)` re-evaluated from scratch, for checking witnesses.
pub fn verify_witness(m: &Mat3Z, w: &Vec3Z) -> BigInt {
    md_characteristic(m, w)
}
