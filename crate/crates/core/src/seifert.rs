//! Seifert invariants, the step function `δ_t`, its partial sums `h_t`, and
//! the sign-change test for the L-space criterion.
//!
//! The manifold with invariants `(g; a, r_1/q_1, …, r_n/q_n)` is surgery on
//! fibers of the degree `a` circle bundle over a genus `g` surface, with
//! coefficients `−q_i/r_i`. Inputs are bounded by `2^31` in absolute value so
//! that every scan fits comfortably in `i128`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::IntText;
use crate::linalg::{self, AbelianGroup, IntMatrix};
use crate::par::{self, Parallelism};
use crate::plumbing::PlumbingGraph;

const INPUT_BOUND: i64 = 1 << 31;

/// Default half-width used to scale the default `ξ₀`.
pub const DEFAULT_WINDOW: i64 = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    pub genus: i64,
    pub a: i64,
    /// `(r_i, q_i)` pairs.
    pub fibers: Vec<(i64, i64)>,
}

impl SeifertData {
    pub fn new(genus: i64, a: i64, fibers: Vec<(i64, i64)>) -> Result<Self> {
        let d = SeifertData { genus, a, fibers };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let big = |x: i64| x.abs() >= INPUT_BOUND;
        if self.genus < 0 {
            return Err(Error::Contract(format!("negative genus {}", self.genus)));
        }
        if big(self.genus) || big(self.a) {
            return Err(Error::Domain("Seifert invariants out of range".into()));
        }
        for &(r, q) in &self.fibers {
            if q < 1 {
                return Err(Error::Contract(format!("fiber {r}/{q}: q must be positive")));
            }
            if r == 0 {
                return Err(Error::Contract(format!("fiber {r}/{q}: r must be nonzero")));
            }
            if r.gcd(&q) != 1 {
                return Err(Error::Contract(format!("fiber {r}/{q} is not reduced")));
            }
            if big(r) || big(q) {
                return Err(Error::Domain(format!("fiber {r}/{q} out of range")));
            }
        }
        Ok(())
    }

    /// `λ = a + Σ r_i/q_i`.
    pub fn lambda(&self) -> BigRational {
        self.fibers
            .iter()
            .fold(BigRational::from_integer(self.a.into()), |acc, &(r, q)| {
                acc + BigRational::new(r.into(), q.into())
            })
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({}; {}", self.genus, self.a)?;
        for (r, q) in &self.fibers {
            write!(f, ", {r}/{q}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct SeifertJson {
    genus: IntTextOut,
    a: IntTextOut,
    #[serde(default)]
    fibers: Vec<[IntTextOut; 2]>,
}

#[derive(Clone, Copy)]
struct IntTextOut(i64);

impl Serialize for IntTextOut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for IntTextOut {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        IntText::deserialize(d).map(|v| IntTextOut(v.0))
    }
}

impl Serialize for SeifertData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeifertJson {
            genus: IntTextOut(self.genus),
            a: IntTextOut(self.a),
            fibers: self
                .fibers
                .iter()
                .map(|&(r, q)| [IntTextOut(r), IntTextOut(q)])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeifertData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeifertJson::deserialize(d)?;
        SeifertData::new(
            raw.genus.0,
            raw.a.0,
            raw.fibers.iter().map(|[r, q]| (r.0, q.0)).collect(),
        )
        .map_err(D::Error::custom)
    }
}

/// The parameters `t, ξ₀, ξ_i` of one spin^c tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeltaParams {
    pub t: i64,
    pub xi0: i64,
    pub xi: Vec<i64>,
}

impl DeltaParams {
    pub fn new(t: i64, xi0: i64, xi: Vec<i64>) -> Self {
        DeltaParams { t, xi0, xi }
    }

    fn check(&self, data: &SeifertData) -> Result<()> {
        if self.t.abs() > data.genus {
            return Err(Error::Contract(format!(
                "|t| = {} exceeds genus {}",
                self.t.abs(),
                data.genus
            )));
        }
        if self.xi.len() != data.fibers.len() {
            return Err(Error::Contract(format!(
                "{} xi values for {} fibers",
                self.xi.len(),
                data.fibers.len()
            )));
        }
        if self.xi0.abs() >= 1 << 40 || self.xi.iter().any(|x| x.abs() >= INPUT_BOUND) {
            return Err(Error::Domain("xi parameters out of range".into()));
        }
        Ok(())
    }
}

/// `δ_t(s) = (−1)^{s+1} t + ξ₀ + a·s + Σ ⌊(ξ_i + r_i s)/q_i⌋`, floors toward −∞.
pub fn delta_t(data: &SeifertData, p: &DeltaParams, s: i64) -> i128 {
    let s = s as i128;
    let sign: i128 = if s.rem_euclid(2) == 1 { 1 } else { -1 };
    let mut v = sign * p.t as i128 + p.xi0 as i128 + data.a as i128 * s;
    for (&(r, q), &x) in data.fibers.iter().zip(&p.xi) {
        v += (x as i128 + r as i128 * s).div_euclid(q as i128);
    }
    v
}

/// Partial sums of `δ_t` normalized by `h_t(0) = 0`.
pub fn h_t(data: &SeifertData, p: &DeltaParams, s: i64) -> i128 {
    if s >= 0 {
        (0..s).map(|i| delta_t(data, p, i)).sum()
    } else {
        -(s..0).map(|i| delta_t(data, p, i)).sum::<i128>()
    }
}

/// Result of scanning `δ_t` over a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignScan {
    pub changes: usize,
    /// The linear bounds force a constant sign beyond both ends of the window.
    pub tail_certain: bool,
    /// `λ = 0`, so the tails cannot be controlled.
    pub lambda_zero: bool,
}

/// Exact affine bounds `lower(s) ≤ δ_t(s) ≤ upper(s)`, stored as the
/// constant terms; both have slope `λ`.
struct Bounds {
    lambda: BigRational,
    lower0: BigRational,
    upper0: BigRational,
}

impl Bounds {
    fn new(data: &SeifertData, p: &DeltaParams) -> Self {
        let t = BigRational::from_integer(BigInt::from(p.t.abs()));
        let xi0 = BigRational::from_integer(BigInt::from(p.xi0));
        let mut lower0 = &xi0 - &t;
        let mut upper0 = xi0 + t;
        for (&(_, q), &x) in data.fibers.iter().zip(&p.xi) {
            lower0 += BigRational::new(BigInt::from(x - q + 1), BigInt::from(q));
            upper0 += BigRational::new(BigInt::from(x), BigInt::from(q));
        }
        Bounds {
            lambda: data.lambda(),
            lower0,
            upper0,
        }
    }

    fn at(&self, c: &BigRational, s: i64) -> BigRational {
        c + &self.lambda * BigRational::from_integer(BigInt::from(s))
    }

    fn lower(&self, s: i64) -> BigRational {
        self.at(&self.lower0, s)
    }

    fn upper(&self, s: i64) -> BigRational {
        self.at(&self.upper0, s)
    }

    /// Smallest window `[lo, hi]` with strictly signed tails: `δ < 0` left of
    /// it and `δ > 0` right of it when `λ > 0`, mirrored when `λ < 0`.
    fn certain_window(&self) -> Option<(i64, i64)> {
        if self.lambda.is_zero() {
            return None;
        }
        // s ≤ lo ⇒ c + λs on the "negative" side strictly, s ≥ hi ⇒ strictly positive side
        let (neg_c, pos_c) = if self.lambda.is_positive() {
            (&self.upper0, &self.lower0)
        } else {
            (&self.lower0, &self.upper0)
        };
        let root = |c: &BigRational| -(c / &self.lambda);
        let to_i64 = |x: BigInt| i64::try_from(x).expect("window fits in i64 for bounded input");
        if self.lambda.is_positive() {
            // upper(s) < 0  ⇔ s < −upper0/λ
            let lo = to_i64((root(neg_c)).ceil().to_integer()) - 1;
            // lower(s) > 0 ⇔ s > −lower0/λ
            let hi = to_i64((root(pos_c)).floor().to_integer()) + 1;
            Some((lo, hi))
        } else {
            // lower(s) > 0 ⇔ s < −lower0/λ (λ < 0)
            let lo = to_i64((root(neg_c)).ceil().to_integer()) - 1;
            // upper(s) < 0 ⇔ s > −upper0/λ
            let hi = to_i64((root(pos_c)).floor().to_integer()) + 1;
            Some((lo, hi))
        }
    }
}

fn positive(v: i128) -> bool {
    v > 0
}

/// Counts `s ∈ [s_lo, s_hi)` where `δ_t(s)` and `δ_t(s+1)` fall on different
/// sides of the split `≤ 0 | > 0`.
pub fn sign_change_count(
    data: &SeifertData,
    p: &DeltaParams,
    s_lo: i64,
    s_hi: i64,
) -> Result<SignScan> {
    p.check(data)?;
    if s_lo >= s_hi {
        return Err(Error::Contract(format!("empty window [{s_lo}, {s_hi}]")));
    }
    let values: Vec<i128> = (s_lo..=s_hi).map(|s| delta_t(data, p, s)).collect();
    let changes = values
        .windows(2)
        .filter(|w| positive(w[0]) != positive(w[1]))
        .count();
    let b = Bounds::new(data, p);
    let zero = BigRational::zero();
    let lambda_zero = b.lambda.is_zero();
    let tail_certain = if lambda_zero {
        false
    } else if b.lambda.is_positive() {
        b.upper(s_lo) <= zero && b.lower(s_hi) > zero
    } else {
        b.lower(s_lo) > zero && b.upper(s_hi) <= zero
    };
    Ok(SignScan {
        changes,
        tail_certain,
        lambda_zero,
    })
}

/// The window on which `δ_t` can change sign at all, or an error when `λ = 0`.
pub fn certain_window(data: &SeifertData, p: &DeltaParams) -> Result<(i64, i64)> {
    p.check(data)?;
    Bounds::new(data, p)
        .certain_window()
        .ok_or_else(|| Error::Undecidable("lambda = a + sum r_i/q_i is zero".into()))
}

/// True iff `h_t` has exactly one local-minimum plateau on the integers.
///
/// Outside the certain window `h_t` is strictly monotone, so the count over
/// the window, with the virtual outer neighbours placed above the window for
/// `λ > 0` (below for `λ < 0`), is the global count.
pub fn unique_local_min(data: &SeifertData, p: &DeltaParams) -> Result<bool> {
    let (lo, hi) = certain_window(data, p)?;
    let rising_tails = data.lambda().is_positive();
    // h on [lo, hi + 1]; consecutive differences are δ(lo..=hi)
    let mut h = Vec::with_capacity((hi - lo + 2) as usize);
    let mut acc = h_t(data, p, lo);
    h.push(acc);
    for s in lo..=hi {
        acc += delta_t(data, p, s);
        h.push(acc);
    }
    Ok(count_min_plateaus(&h, rising_tails) == 1)
}

/// Number of maximal constant runs whose neighbours on both sides are larger.
/// `outer_larger` says whether the virtual points beyond the ends are larger.
fn count_min_plateaus(h: &[i128], outer_larger: bool) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < h.len() {
        let mut j = i;
        while j + 1 < h.len() && h[j + 1] == h[i] {
            j += 1;
        }
        let left = if i == 0 { outer_larger } else { h[i - 1] > h[i] };
        let right = if j + 1 == h.len() {
            outer_larger
        } else {
            h[j + 1] > h[i]
        };
        if left && right {
            count += 1;
        }
        i = j + 1;
    }
    count
}

/// `ξ₀ = −(Σ q_i + |a|·W + g + 1)`.
pub fn default_xi0(data: &SeifertData, window: i64) -> i64 {
    let sum_q: i64 = data.fibers.iter().map(|f| f.1).sum();
    -(sum_q + data.a.abs() * window + data.genus + 1)
}

/// Every `(t, ξ_1, …, ξ_n)` with `|t| ≤ g` and `0 ≤ ξ_i < q_i`, in
/// lexicographic order.
pub fn spin_tuples(data: &SeifertData) -> Vec<(i64, Vec<i64>)> {
    let mut xis: Vec<Vec<i64>> = vec![Vec::new()];
    for &(_, q) in &data.fibers {
        xis = xis
            .into_iter()
            .flat_map(|prefix| {
                (0..q).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    (-data.genus..=data.genus)
        .flat_map(|t| xis.iter().map(move |xi| (t, xi.clone())))
        .collect()
}

/// Which tuples to scan and how.
#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub xi0: Option<i64>,
    pub t: Option<i64>,
    pub xi: Option<Vec<i64>>,
    /// Fixed window `[−N, N]` for the sign count instead of the certain one.
    pub window: Option<i64>,
    pub mode: Parallelism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleVerdict {
    pub params: DeltaParams,
    pub window: (i64, i64),
    pub scan: SignScan,
    pub unique_min: bool,
}

impl TupleVerdict {
    pub fn passes(&self) -> bool {
        self.scan.changes == 1 && self.scan.tail_certain && self.unique_min
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LspaceReport {
    pub data: SeifertData,
    /// `a > 2g`.
    pub applicable: bool,
    pub xi0: i64,
    pub tuples: Vec<TupleVerdict>,
}

impl LspaceReport {
    pub fn all_pass(&self) -> bool {
        self.tuples.iter().all(TupleVerdict::passes)
    }

    pub fn verdict(&self) -> &'static str {
        match (self.applicable, self.all_pass()) {
            (false, _) => "criterion not applicable",
            (true, true) => "every tuple changes sign once",
            (true, false) => "scan failed",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let tuples: Vec<serde_json::Value> = self
            .tuples
            .iter()
            .map(|v| {
                serde_json::json!({
                    "t": v.params.t.to_string(),
                    "xi0": v.params.xi0.to_string(),
                    "xi": v.params.xi.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "window": [v.window.0.to_string(), v.window.1.to_string()],
                    "sign_changes": v.scan.changes.to_string(),
                    "tail_certain": v.scan.tail_certain,
                    "unique_local_min": v.unique_min,
                    "pass": v.passes(),
                })
            })
            .collect();
        serde_json::json!({
            "data": self.data,
            "applicable": self.applicable,
            "verdict": self.verdict(),
            "xi0": self.xi0.to_string(),
            "lambda": self.data.lambda().to_string(),
            "tuples": tuples,
            "all_pass": self.all_pass(),
        })
    }
}

/// Runs the sign-change scan over the selected spin^c tuples.
///
/// Tuples are reported even when `a ≤ 2g`; `applicable` records whether the
/// sufficiency argument covers the manifold.
pub fn lspace_check(data: &SeifertData, opts: &ScanOptions) -> Result<LspaceReport> {
    data.validate()?;
    if data.lambda().is_zero() {
        return Err(Error::Undecidable(
            "lambda = a + sum r_i/q_i is zero; the tails cannot be bounded".into(),
        ));
    }
    let xi0 = opts
        .xi0
        .unwrap_or_else(|| default_xi0(data, opts.window.unwrap_or(DEFAULT_WINDOW)));
    let tuples: Vec<(i64, Vec<i64>)> = spin_tuples(data)
        .into_iter()
        .filter(|(t, xi)| opts.t.is_none_or(|x| x == *t) && opts.xi.as_ref().is_none_or(|x| x == xi))
        .collect();
    if tuples.is_empty() {
        return Err(Error::Contract("no spin^c tuple matches the requested t / xi".into()));
    }
    let window = opts.window;
    let verdicts = par::map_ordered(tuples, opts.mode, |(t, xi)| {
        let p = DeltaParams::new(t, xi0, xi);
        let (lo, hi) = match window {
            Some(n) => (-n, n),
            None => certain_window(data, &p)?,
        };
        let scan = sign_change_count(data, &p, lo, hi.max(lo + 1))?;
        let unique_min = unique_local_min(data, &p)?;
        Ok(TupleVerdict {
            params: p,
            window: (lo, hi.max(lo + 1)),
            scan,
            unique_min,
        })
    });
    Ok(LspaceReport {
        data: data.clone(),
        applicable: data.a > 2 * data.genus,
        xi0,
        tuples: verdicts.into_iter().collect::<Result<Vec<_>>>()?,
    })
}

/// The `a > 2g` sufficiency test, double-checked by scanning every tuple.
///
/// Returns `Ok(false)` when the hypothesis fails. A failed scan under the
/// hypothesis is reported as an error since it can only mean a bug here.
pub fn osz_simple_sufficient(data: &SeifertData, mode: Parallelism) -> Result<bool> {
    data.validate()?;
    if data.a <= 2 * data.genus {
        return Ok(false);
    }
    let report = lspace_check(
        data,
        &ScanOptions {
            mode,
            ..ScanOptions::default()
        },
    )?;
    match report.tuples.iter().find(|v| !v.passes()) {
        None => Ok(true),
        Some(v) => Err(Error::Contract(format!(
            "scan failed for {data} at t = {}, xi = {:?}: {} sign changes",
            v.params.t, v.params.xi, v.scan.changes
        ))),
    }
}

/// Coefficients `[a_1, …, a_k]`, all `≤ −2`, with
/// `p/q = a_1 − 1/(a_2 − 1/(… − 1/a_k))`.
///
/// The sign of `q` is moved onto `p`; the value must then be `< −1`.
pub fn neg_continued_fraction(p: i64, q: i64) -> Result<Vec<i64>> {
    if q == 0 {
        return Err(Error::Domain(format!("{p}/0 is not a rational number")));
    }
    let (mut p, mut q) = if q < 0 {
        (-(p as i128), -(q as i128))
    } else {
        (p as i128, q as i128)
    };
    if p >= -q {
        return Err(Error::Domain(format!(
            "{p}/{q} is not below -1, so it has no expansion with entries <= -2"
        )));
    }
    let mut out = Vec::new();
    loop {
        let a = p.div_euclid(q);
        out.push(a as i64);
        let rem = p - a * q;
        if rem == 0 {
            return Ok(out);
        }
        // p/q = a − 1/x  with  x = −q/rem
        (p, q) = (-q, rem);
    }
}

/// Star-shaped plumbing with the same boundary, for genus 0.
///
/// Each fiber is first normalized to `0 ≤ r'_i < q_i` by moving
/// `⌊r_i/q_i⌋` into the central weight; fibers with `r'_i = 0` disappear.
/// Vertex 0 is the center, followed by one chain per remaining fiber, each
/// expanding `−q_i/r'_i` and starting next to the center.
pub fn seifert_to_plumbing(data: &SeifertData) -> Result<PlumbingGraph> {
    data.validate()?;
    if data.genus != 0 {
        return Err(Error::Unsupported(format!(
            "star-shaped plumbing needs genus 0, got {}",
            data.genus
        )));
    }
    let mut center = data.a;
    let mut chains = Vec::new();
    for &(r, q) in &data.fibers {
        center += r.div_euclid(q);
        let r1 = r.rem_euclid(q);
        if r1 != 0 {
            chains.push(neg_continued_fraction(-q, r1)?);
        }
    }
    let mut weights = vec![center];
    let mut edges = Vec::new();
    for chain in chains {
        let mut prev = 0;
        for w in chain {
            weights.push(w);
            let v = weights.len() - 1;
            edges.push((prev, v));
            prev = v;
        }
    }
    PlumbingGraph::new(weights, edges)
}

/// `H_1` from the fiber-surgery presentation: generators `h, c_1, …, c_n`
/// with relations `r_i h + q_i c_i = 0` and `−a h + Σ c_i = 0`, plus `2g`
/// free generators from the base surface.
pub fn surgery_homology(data: &SeifertData) -> Result<AbelianGroup> {
    data.validate()?;
    let n = data.fibers.len();
    let mut rows = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for (i, &(r, q)) in data.fibers.iter().enumerate() {
        rows[i][0] = r.into();
        rows[i][i + 1] = q.into();
    }
    rows[n][0] = (-data.a).into();
    for x in &mut rows[n][1..] {
        *x = 1.into();
    }
    let m = IntMatrix::from_rows(&rows)?;
    let mut g = linalg::cokernel_invariants(&m)?;
    g.free_rank += 2 * data.genus as usize;
    Ok(g)
}
