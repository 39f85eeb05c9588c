//! Family grid scans, NRS-ray scans, the census of ς-nonreduced matrices,
//! ray diagnostics, rendering and the on-disk verdict cache.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{charpoly_coeffs, cubic_form, BiPoly, Mat3Z, Rational, Vec3Z};
use crate::hessenberg::{complete_type, Family, HessenbergType, RayIndex, RaySpec};
use crate::klein::{spectral_basis, KleinConfig};
use crate::par::{self, Parallelism};
use crate::reduction::{decide, detect_power_root, Certificate, ReductionConfig, ReductionVerdict};
use crate::spectra::{classify_charpoly, delta_polynomial, SpectrumClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellClass {
    ReduciblePoly,
    NrsReduced,
    NrsReducedPower,
    NrsNonreduced,
    RsNonreduced,
    RsProbablyReduced,
    RsReducedCertified,
    Degenerate,
}

impl CellClass {
    pub fn is_nonreduced(self) -> bool {
        matches!(self, CellClass::NrsNonreduced | CellClass::RsNonreduced)
    }

    pub fn is_nrs(self) -> bool {
        matches!(self, CellClass::NrsReduced | CellClass::NrsReducedPower | CellClass::NrsNonreduced)
    }

    fn colour(self) -> &'static str {
        match self {
            CellClass::ReduciblePoly => "#000000",
            CellClass::NrsNonreduced | CellClass::RsNonreduced => "#555555",
            CellClass::NrsReducedPower => "#999999",
            CellClass::RsProbablyReduced => "#eeeeee",
            CellClass::NrsReduced | CellClass::RsReducedCertified | CellClass::Degenerate => "#ffffff",
        }
    }
}

fn big_json(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse().expect("integers are valid JSON numbers"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRecord {
    pub m: i64,
    pub n: i64,
    pub class: CellClass,
    pub sigma: BigInt,
    pub delta: BigInt,
    pub mu: Option<BigInt>,
    pub error: Option<String>,
}

impl CellRecord {
    fn to_json(&self) -> Value {
        let mut v = json!({
            "m": self.m,
            "n": self.n,
            "class": self.class,
            "sigma": big_json(&self.sigma),
            "delta": big_json(&self.delta),
            "mu": self.mu.as_ref().map(big_json),
        });
        if let Some(e) = &self.error {
            v["error"] = json!(e);
        }
        v
    }
}

/// Scan settings. Read from `key = value` text; unknown keys are errors.
#[derive(Clone, Debug, PartialEq)]
pub struct SurveyConfig {
    /// Box bound for RS cells.
    pub box_bound: u64,
    pub orbit_samples: usize,
    pub padding: f64,
    pub cell_budget: f64,
    pub cache_dir: Option<PathBuf>,
    /// 0 = all cores, 1 = sequential.
    pub workers: usize,
    /// Largest census half-width.
    pub max_window: i64,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        let k = KleinConfig::default();
        SurveyConfig {
            box_bound: 100,
            orbit_samples: k.orbit_samples,
            padding: k.padding,
            cell_budget: k.cell_budget,
            cache_dir: None,
            workers: 0,
            max_window: 1024,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("bad value for {key}: {v}")))
}

impl SurveyConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SurveyConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "box_bound" => self.box_bound = parse_value(key, v)?,
            "orbit_samples" => self.orbit_samples = parse_value(key, v)?,
            "padding" => self.padding = parse_value(key, v)?,
            "cell_budget" => self.cell_budget = parse_value(key, v)?,
            "cache_dir" => self.cache_dir = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            "workers" => self.workers = parse_value(key, v)?,
            "max_window" => self.max_window = parse_value(key, v)?,
            _ => return Err(Error::Parse(format!("unknown config key {key}"))),
        }
        Ok(())
    }

    pub fn klein(&self) -> KleinConfig {
        KleinConfig { orbit_samples: self.orbit_samples, padding: self.padding, cell_budget: self.cell_budget }
    }

    pub fn reduction(&self) -> ReductionConfig {
        ReductionConfig { klein: self.klein(), rs_bound: self.box_bound, parallelism: Parallelism::Sequential }
    }

    pub fn parallelism(&self) -> Parallelism {
        Parallelism::from_workers(self.workers)
    }

    /// Settings that can change a verdict; part of every cache key.
    fn fingerprint(&self) -> String {
        format!(
            "box_bound={};orbit_samples={};padding={:e};cell_budget={:e}",
            self.box_bound, self.orbit_samples, self.padding, self.cell_budget
        )
    }
}

/// One JSON file per verdict, named by a hash of the matrix and the settings.
/// Files are written once and never modified.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CachedVerdict {
    matrix: String,
    class: CellClass,
    mu: Option<String>,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, matrix: &str, cfg: &SurveyConfig) -> PathBuf {
        let mut h = Sha256::new();
        h.update(matrix.as_bytes());
        h.update(b"|");
        h.update(cfg.fingerprint().as_bytes());
        self.dir.join(format!("{}.json", hex::encode(h.finalize())))
    }

    fn get(&self, matrix: &str, cfg: &SurveyConfig) -> Option<(CellClass, Option<BigInt>)> {
        let text = std::fs::read_to_string(self.path(matrix, cfg)).ok()?;
        let c: CachedVerdict = serde_json::from_str(&text).ok()?;
        if c.matrix != matrix {
            return None;
        }
        let mu = match c.mu {
            Some(s) => Some(s.parse().ok()?),
            None => None,
        };
        Some((c.class, mu))
    }

    fn put(&self, matrix: &str, cfg: &SurveyConfig, class: CellClass, mu: &Option<BigInt>) -> Result<()> {
        let path = self.path(matrix, cfg);
        if path.exists() {
            return Ok(());
        }
        let rec = CachedVerdict { matrix: matrix.to_string(), class, mu: mu.as_ref().map(|m| m.to_string()) };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, serde_json::to_vec(&rec)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}

fn verdict_class(spectrum: SpectrumClass, m: &Mat3Z, verdict: &ReductionVerdict) -> Result<CellClass> {
    Ok(match (spectrum, verdict) {
        (SpectrumClass::NRS, ReductionVerdict::Reduced(_)) => {
            if detect_power_root(m, 2)?.is_some() || detect_power_root(m, 3)?.is_some() {
                CellClass::NrsReducedPower
            } else {
                CellClass::NrsReduced
            }
        }
        (SpectrumClass::NRS, ReductionVerdict::Nonreduced { .. }) => CellClass::NrsNonreduced,
        (SpectrumClass::RS, ReductionVerdict::Nonreduced { .. }) => CellClass::RsNonreduced,
        (SpectrumClass::RS, ReductionVerdict::Reduced(Certificate::ModQObstruction(_))) => CellClass::RsReducedCertified,
        (SpectrumClass::RS, _) => CellClass::RsProbablyReduced,
        _ => CellClass::Degenerate,
    })
}

fn classify_uncached(f: &Family, mat: &Mat3Z, cfg: &SurveyConfig) -> Result<(CellClass, Option<BigInt>)> {
    let spectrum = classify_charpoly(&charpoly_coeffs(mat));
    match spectrum {
        SpectrumClass::ReduciblePoly => return Ok((CellClass::ReduciblePoly, None)),
        SpectrumClass::DegenerateDiscriminant => return Ok((CellClass::Degenerate, None)),
        _ => {}
    }
    let _ = f;
    let d = decide(mat, &cfg.reduction())?;
    Ok((verdict_class(spectrum, mat, &d.verdict)?, d.mu))
}

fn cell_with_cache(f: &Family, m: i64, n: i64, cfg: &SurveyConfig, cache: Option<&Cache>) -> CellRecord {
    let mat = f.matrix_i64(m, n);
    let sigma = f.ty.complexity().unwrap_or_else(|_| BigInt::zero());
    let delta = charpoly_coeffs(&mat).discriminant();
    let text = mat.to_string();
    let hit = cache.and_then(|c| c.get(&text, cfg));
    let (class, mu, error) = match hit {
        Some((class, mu)) => (class, mu, None),
        None => match classify_uncached(f, &mat, cfg) {
            Ok((class, mu)) => {
                if let Some(c) = cache {
                    // a failed cache write only costs a recomputation later
                    let _ = c.put(&text, cfg, class, &mu);
                }
                (class, mu, None)
            }
            Err(e) => (CellClass::Degenerate, None, Some(e.to_string())),
        },
    };
    CellRecord { m, n, class, sigma, delta, mu, error }
}

/// Class of `H_Ω^v(m, n)`: spectrum first, then the reduction verdict, then
/// power detection for reduced NRS cells.
pub fn classify_cell(f: &Family, m: i64, n: i64, cfg: &SurveyConfig) -> Result<CellClass> {
    if !f.ty.is_perfect() {
        return Err(Error::Invalid(format!("type {} is not perfect", f.ty)));
    }
    classify_uncached(f, &f.matrix_i64(m, n), cfg).map(|c| c.0)
}

/// Inclusive rectangle of family coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub m: (i64, i64),
    pub n: (i64, i64),
}

impl Window {
    pub fn square(half: i64) -> Self {
        Window { m: (-half, half), n: (-half, half) }
    }

    pub fn cells(&self) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for m in self.m.0..=self.m.1 {
            for n in self.n.0..=self.n.1 {
                v.push((m, n));
            }
        }
        v
    }

    pub fn area(&self) -> u64 {
        ((self.m.1 - self.m.0 + 1).max(0) * (self.n.1 - self.n.0 + 1).max(0)) as u64
    }
}

/// `lo:hi` with both ends inclusive.
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected lo:hi, got {s}")))?;
    let lo: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad range start {a}")))?;
    let hi: i64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad range end {b}")))?;
    if lo > hi {
        return Err(Error::Parse(format!("empty range {s}")));
    }
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyGrid {
    pub family: Family,
    pub window: Window,
    /// Sorted by `(m, n)`.
    pub cells: Vec<CellRecord>,
}

impl FamilyGrid {
    pub fn count(&self, class: CellClass) -> usize {
        self.cells.iter().filter(|c| c.class == class).count()
    }

    pub fn get(&self, m: i64, n: i64) -> Option<&CellRecord> {
        self.cells.binary_search_by(|c| (c.m, c.n).cmp(&(m, n))).ok().map(|i| &self.cells[i])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": self.family.ty.to_string(),
            "v": self.family.v.to_string(),
            "window": { "m": [self.window.m.0, self.window.m.1], "n": [self.window.n.0, self.window.n.1] },
            "cells": self.cells.iter().map(CellRecord::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn scan_family(f: &Family, window: Window, cfg: &SurveyConfig) -> Result<FamilyGrid> {
    if window.area() == 0 {
        return Err(Error::Invalid("empty window".into()));
    }
    if !f.ty.is_perfect() {
        return Err(Error::Invalid(format!("type {} is not perfect", f.ty)));
    }
    let cache = match &cfg.cache_dir {
        Some(d) => Some(Cache::open(d)?),
        None => None,
    };
    let cells = par::map(window.cells(), cfg.parallelism(), |(m, n)| cell_with_cache(f, m, n, cfg, cache.as_ref()));
    Ok(FamilyGrid { family: f.clone(), window, cells })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyReport {
    #[serde(rename = "type")]
    pub ty: HessenbergType,
    pub v: Vec3Z,
    pub sigma: String,
    pub count: usize,
    /// Half-width of the last window scanned.
    pub window: i64,
    pub stabilized: bool,
    /// `(half-width, count)` for every window scanned.
    pub history: Vec<(i64, usize)>,
    pub nonreduced: Vec<(i64, i64)>,
    pub wall_seconds: f64,
    pub config: String,
}

/// NRS cells of `[−W, W]²` whose complexity exceeds the class minimum.
/// RS cells are not decided; only the spectrum is computed for them.
fn nonreduced_nrs(f: &Family, cells: Vec<(i64, i64)>, cfg: &SurveyConfig) -> Result<Vec<((i64, i64), bool)>> {
    let red = cfg.reduction();
    let out = par::map(cells, cfg.parallelism(), |(m, n)| -> Result<((i64, i64), bool)> {
        let mat = f.matrix_i64(m, n);
        if classify_charpoly(&charpoly_coeffs(&mat)) != SpectrumClass::NRS {
            return Ok(((m, n), false));
        }
        let d = decide(&mat, &red).map_err(|e| match e {
            Error::RegionTooLarge { .. } => Error::BudgetExceeded(format!("cell ({m}, {n}) of {}: {e}", f.ty)),
            e => e,
        })?;
        Ok(((m, n), matches!(d.verdict, ReductionVerdict::Nonreduced { .. })))
    });
    out.into_iter().collect()
}

/// Doubles the half-width from 16 until the count of nonreduced NRS cells is
/// unchanged across two consecutive doublings, or `max_window` is reached.
pub fn count_nonreduced_stabilized(f: &Family, cfg: &SurveyConfig) -> Result<SurveyReport> {
    if !f.ty.is_perfect() {
        return Err(Error::Invalid(format!("type {} is not perfect", f.ty)));
    }
    let start = Instant::now();
    let mut seen: HashMap<(i64, i64), bool> = HashMap::new();
    let mut history = Vec::new();
    let mut w = 16;
    let mut stabilized = false;
    loop {
        let fresh: Vec<(i64, i64)> = Window::square(w).cells().into_iter().filter(|c| !seen.contains_key(c)).collect();
        for (c, bad) in nonreduced_nrs(f, fresh, cfg)? {
            seen.insert(c, bad);
        }
        let count = seen.values().filter(|b| **b).count();
        history.push((w, count));
        let k = history.len();
        if k >= 3 && history[k - 1].1 == history[k - 2].1 && history[k - 2].1 == history[k - 3].1 {
            stabilized = true;
            break;
        }
        if w * 2 > cfg.max_window {
            break;
        }
        w *= 2;
    }
    let mut nonreduced: Vec<(i64, i64)> = seen.into_iter().filter(|(_, b)| *b).map(|(c, _)| c).collect();
    nonreduced.sort();
    Ok(SurveyReport {
        ty: f.ty.clone(),
        v: f.v.clone(),
        sigma: f.ty.complexity()?.to_string(),
        count: nonreduced.len(),
        window: w,
        stabilized,
        history,
        nonreduced,
        wall_seconds: start.elapsed().as_secs_f64(),
        config: cfg.fingerprint(),
    })
}

/// Perfect types with `1 ≤ ς ≤ max_complexity` that admit a unimodular
/// completion, ordered by complexity and then by text.
pub fn perfect_types(max_complexity: u64) -> Vec<HessenbergType> {
    let mut out = Vec::new();
    let max = max_complexity as i64;
    for a21 in 1..=max {
        for a32 in 1..=max {
            if a21 * a21 * a32 > max {
                continue;
            }
            for a11 in 0..a21 {
                for a12 in 0..a32 {
                    for a22 in 0..a32 {
                        let ty = HessenbergType::new(a11, a21, a12, a22, a32);
                        if complete_type(&ty).is_ok() {
                            out.push(ty);
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|t| (t.complexity().unwrap(), t.to_string()));
    out
}

pub fn census(max_complexity: u64, cfg: &SurveyConfig) -> Result<Vec<SurveyReport>> {
    perfect_types(max_complexity)
        .into_iter()
        .map(|ty| count_nonreduced_stabilized(&Family::canonical(ty)?, cfg))
        .collect()
}

/// True iff every integer point `t ≥ 0` of the ray is NRS. Decided exactly
/// from the univariate discriminant `δ(t)`.
pub fn is_nrs_ray(r: &RaySpec) -> Result<bool> {
    let poly = ray_delta(r);
    let deg = match poly.iter().rposition(|c| !c.is_zero()) {
        Some(d) => d,
        None => return Ok(false),
    };
    if !poly[deg].is_negative() {
        return Ok(false);
    }
    // past the Cauchy bound the leading term dominates
    let lead = poly[deg].abs();
    let bound = poly[..deg].iter().map(|c| (c.abs() / &lead).ceil()).max().unwrap_or_default() + Rational::from_integer(1.into());
    let bound = bound.to_integer().to_u64().ok_or_else(|| Error::BudgetExceeded("ray discriminant bound too large".into()))?;
    if bound > 10_000_000 {
        return Err(Error::BudgetExceeded(format!("ray discriminant bound {bound}")));
    }
    for t in 0..=bound {
        let m = r.matrix(&BigInt::from(t));
        if classify_charpoly(&charpoly_coeffs(&m)) != SpectrumClass::NRS {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coefficients of `δ` along the ray, lowest degree first.
pub fn ray_delta(r: &RaySpec) -> Vec<Rational> {
    let (dm, dn) = r.direction();
    let t = BiPoly::m();
    let lin = |b: &BigInt, d: &BigInt| &BiPoly::constant(Rational::from_integer(b.clone())) + &t.scale(&Rational::from_integer(d.clone()));
    let along = delta_polynomial(&r.family).compose(&lin(&r.base.0, &dm), &lin(&r.base.1, &dn));
    let deg = along.degree_m().unwrap_or(0);
    (0..=deg).map(|i| along.coeff(i, 0)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RayScan {
    pub cells: Vec<(u64, (BigInt, BigInt), CellClass)>,
    /// Length of the trailing run of reduced NRS cells.
    pub trailing_reduced: usize,
}

impl RayScan {
    pub fn nonreduced(&self) -> usize {
        self.cells.iter().filter(|c| c.2.is_nonreduced()).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cells": self.cells.iter().map(|(t, (m, n), c)| json!({
                "t": t, "m": big_json(m), "n": big_json(n), "class": c,
            })).collect::<Vec<_>>(),
            "nonreduced": self.nonreduced(),
            "trailing_reduced": self.trailing_reduced,
        })
    }
}

pub fn scan_ray(r: &RaySpec, t_max: u64, cfg: &SurveyConfig) -> Result<RayScan> {
    let ts: Vec<u64> = (0..=t_max).collect();
    let cells = par::map(ts, cfg.parallelism(), |t| -> Result<_> {
        let tb = BigInt::from(t);
        let mat = r.matrix(&tb);
        let spectrum = classify_charpoly(&charpoly_coeffs(&mat));
        let class = match spectrum {
            SpectrumClass::ReduciblePoly => CellClass::ReduciblePoly,
            SpectrumClass::DegenerateDiscriminant => CellClass::Degenerate,
            _ => verdict_class(spectrum, &mat, &decide(&mat, &cfg.reduction())?.verdict)?,
        };
        Ok((t, r.point(&tb), class))
    });
    let cells: Vec<_> = cells.into_iter().collect::<Result<_>>()?;
    let trailing_reduced = cells
        .iter()
        .rev()
        .take_while(|c| matches!(c.2, CellClass::NrsReduced | CellClass::NrsReducedPower))
        .count();
    Ok(RayScan { cells, trailing_reduced })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayDiagnostics {
    pub point: [i64; 2],
    pub expected_slope: String,
    /// `(t, F(x, y, 0))` at the checked parameters, signed.
    pub values: Vec<(String, String)>,
    pub affine: bool,
    pub slope_matches: bool,
    /// `(t, major/minor)` of the orbit ellipses.
    pub axis_ratios: Vec<(f64, f64)>,
    pub exponent: Option<f64>,
}

/// `(a21 x − a11 y)·a32²·y²`.
pub fn expected_md_slope(ty: &HessenbergType, x: i64, y: i64) -> BigInt {
    let (x, y) = (BigInt::from(x), BigInt::from(y));
    (&ty.a21 * &x - &ty.a11 * &y) * &ty.a32 * &ty.a32 * &y * &y
}

/// Least-squares slope of `log ratio` against `log t`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Orbit-ellipse axis ratio of the ray matrix at `t`.
pub fn axis_ratio(r: &RaySpec, t: u64) -> Result<f64> {
    let b = spectral_basis(&r.matrix(&BigInt::from(t)))?;
    let (major, minor) = b.orbit_axes();
    Ok(major / minor)
}

/// Exact MD-slope check at `(x, y, 0)` over `slope_ts`, and the axis-ratio
/// exponent fit over `ratio_ts`.
pub fn ray_diagnostics(r: &RaySpec, slope_ts: &[u64], ratio_ts: &[u64], point: (i64, i64)) -> Result<RayDiagnostics> {
    if r.index != RayIndex::One {
        return Err(Error::Invalid("diagnostics need an index-1 ray".into()));
    }
    if slope_ts.len() < 3 {
        return Err(Error::Invalid("the affine check needs three parameters".into()));
    }
    let w = Vec3Z::from_i64([point.0, point.1, 0]);
    let vals: Vec<(BigInt, BigInt)> = slope_ts
        .iter()
        .map(|&t| {
            let tb = BigInt::from(t);
            (tb.clone(), cubic_form(&r.matrix(&tb)).eval(&w))
        })
        .collect();
    let expected = expected_md_slope(&r.family.ty, point.0, point.1);
    let slopes: Vec<Rational> = vals
        .windows(2)
        .map(|p| Rational::new(&p[1].1 - &p[0].1, &p[1].0 - &p[0].0))
        .collect();
    let affine = slopes.windows(2).all(|s| s[0] == s[1]);
    let slope_matches = affine && slopes[0] == Rational::from_integer(expected.clone());
    let mut axis_ratios = Vec::new();
    for &t in ratio_ts {
        axis_ratios.push((t as f64, axis_ratio(r, t)?));
    }
    Ok(RayDiagnostics {
        point: [point.0, point.1],
        expected_slope: expected.to_string(),
        values: vals.iter().map(|(t, v)| (t.to_string(), v.to_string())).collect(),
        affine,
        slope_matches,
        exponent: fit_exponent(&axis_ratios),
        axis_ratios,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

const CELL_PX: i64 = 10;

fn grid_svg(g: &FamilyGrid) -> String {
    let w = (g.window.m.1 - g.window.m.0 + 1) * CELL_PX;
    let h = (g.window.n.1 - g.window.n.0 + 1) * CELL_PX;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let px = |m: i64| (m - g.window.m.0) * CELL_PX;
    let py = |n: i64| (g.window.n.1 - n) * CELL_PX;
    // row-major from the top row
    let mut order: Vec<&CellRecord> = g.cells.iter().collect();
    order.sort_by_key(|c| (-c.n, c.m));
    for c in &order {
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="{CELL_PX}" height="{CELL_PX}" fill="{}" stroke="#cccccc" stroke-width="0.5"/>"##,
            px(c.m),
            py(c.n),
            c.class.colour()
        );
    }
    let side = |c: &CellRecord| c.delta.signum();
    for c in &order {
        if let Some(r) = g.get(c.m + 1, c.n) {
            if side(c) * side(r) < BigInt::zero() {
                let x = px(c.m) + CELL_PX;
                let _ = writeln!(s, r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#aaaaaa" stroke-width="2"/>"##, py(c.n), py(c.n) + CELL_PX);
            }
        }
        if let Some(u) = g.get(c.m, c.n + 1) {
            if side(c) * side(u) < BigInt::zero() {
                let y = py(c.n);
                let _ = writeln!(s, r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#aaaaaa" stroke-width="2"/>"##, px(c.m), px(c.m) + CELL_PX);
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn grid_csv(g: &FamilyGrid) -> String {
    let mut s = String::from("m,n,class,sigma,delta,mu\n");
    for c in &g.cells {
        let mu = c.mu.as_ref().map(|m| m.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{:?},{},{},{}", c.m, c.n, c.class, c.sigma, c.delta, mu);
    }
    s
}

pub fn render_grid(g: &FamilyGrid, fmt: Format) -> Result<Vec<u8>> {
    Ok(match fmt {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&g.to_json())?;
            v.push(b'\n');
            v
        }
        Format::Csv => grid_csv(g).into_bytes(),
        Format::Svg => grid_svg(g).into_bytes(),
    })
}

pub fn render_reports(reports: &[SurveyReport], fmt: Format) -> Result<Vec<u8>> {
    match fmt {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(reports)?;
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => {
            let mut s = String::from("type,sigma,count,window,stabilized\n");
            for r in reports {
                let _ = writeln!(s, "\"{}\",{},{},{},{}", r.ty, r.sigma, r.count, r.window, r.stabilized);
            }
            Ok(s.into_bytes())
        }
        Format::Svg => Err(Error::UnsupportedFormat("svg for census reports".into())),
    }
}

pub fn render_sail(sail: &crate::klein::FactorSail, fmt: Format) -> Result<Vec<u8>> {
    match fmt {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(sail)?;
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => {
            let mut s = String::from("component,source,x,rho,certified\n");
            for (name, part) in [("positive", &sail.positive), ("negative", &sail.negative)] {
                for v in part {
                    let _ = writeln!(s, "{name},\"{}\",{:e},{:e},{}", v.source, v.pi[0], v.pi[1], v.certified);
                }
            }
            Ok(s.into_bytes())
        }
        Format::Svg => Err(Error::UnsupportedFormat("svg for sails".into())),
    }
}
