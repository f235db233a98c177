//! Surgeries on parallel curves in a thickened torus, their regluing map,
//! and the b₂⁺ certificate obtained from the γ pattern.
//!
//! A configuration stacks layers `T² × {t}` at increasing levels; layer `i`
//! carries `s_i` parallel copies of a curve. Surgery on all of them is the
//! same as cutting along the family and regluing by
//! `D_{C_k}^{s_k} ∘ … ∘ D_{C_1}^{s_1}`, highest level leftmost.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Inertia, IntMatrix};
use crate::mcg::{self, Sl2, Slope, TwistFactor, TwistWord};
use crate::par::{self, Parallelism};
use crate::plumbing::{self, CatalogId, PlumbingGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryLayer {
    pub level: BigRational,
    pub slope: Slope,
    pub count: u64,
}

/// Layers sorted by strictly increasing level in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryConfig {
    layers: Vec<SurgeryLayer>,
}

impl SurgeryConfig {
    pub fn new(layers: Vec<SurgeryLayer>) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        for l in &layers {
            if l.level <= zero || l.level >= one {
                return Err(Error::Contract(format!("level {} is not in (0, 1)", l.level)));
            }
            if l.count == 0 {
                return Err(Error::Contract("a layer needs at least one curve".into()));
            }
        }
        if layers.windows(2).any(|w| w[0].level >= w[1].level) {
            return Err(Error::Contract("levels must be strictly increasing".into()));
        }
        Ok(SurgeryConfig { layers })
    }

    pub fn layers(&self) -> &[SurgeryLayer] {
        &self.layers
    }

    /// Layer counts from the highest level down, i.e. in word order.
    pub fn counts_top_down(&self) -> Vec<u64> {
        self.layers.iter().rev().map(|l| l.count).collect()
    }

    /// The twist word read off top-down.
    pub fn to_word(&self) -> TwistWord {
        TwistWord::new(
            self.layers
                .iter()
                .rev()
                .map(|l| TwistFactor::new(l.slope.clone(), l.count as i64)),
        )
    }
}

/// `D_{C_k}^{s_k} ∘ … ∘ D_{C_1}^{s_1}` for layers at levels `t_1 < … < t_k`.
pub fn regluing_matrix(cfg: &SurgeryConfig) -> Sl2 {
    cfg.layers.iter().rev().fold(Sl2::identity(), |acc, l| {
        acc.mul(&mcg::twist_matrix(&l.slope).pow(l.count as i64))
    })
}

/// One layer per factor of a positive word.
///
/// The leftmost factor is applied last, so it sits highest: with `k`
/// factors, factor `i` (0-based from the left) gets level `(k − i)/(k + 1)`.
/// `levels`, when given, lists the `k` levels in ascending order and is
/// assigned from the rightmost factor up.
pub fn config_from_word(w: &TwistWord, levels: Option<&[BigRational]>) -> Result<SurgeryConfig> {
    if let Some(f) = w.factors().iter().find(|f| f.exp < 0) {
        return Err(Error::NotRealizable(format!(
            "factor along slope {} has exponent {}",
            f.slope, f.exp
        )));
    }
    let k = w.len();
    let levels: Vec<BigRational> = match levels {
        Some(l) if l.len() != k => {
            return Err(Error::Contract(format!("{} levels for {k} factors", l.len())))
        }
        Some(l) => l.to_vec(),
        None => (1..=k)
            .map(|i| BigRational::new(BigInt::from(i), BigInt::from(k + 1)))
            .collect(),
    };
    let layers = w
        .factors()
        .iter()
        .rev()
        .zip(levels)
        .map(|(f, level)| SurgeryLayer {
            level,
            slope: f.slope.clone(),
            count: f.exp as u64,
        })
        .collect();
    SurgeryConfig::new(layers)
}

/// Linking matrix of all surgery curves, one row per curve, ordered by
/// level and then by copy.
///
/// A curve `c` has framing `−1 + c_x c_y` (one less than the torus framing);
/// for curves `c` below `d` the entry is `c_x d_y`, and parallel copies on
/// one torus are pushed off in the same direction.
pub fn linking_matrix(cfg: &SurgeryConfig) -> IntMatrix {
    let handles: Vec<(usize, &Slope)> = cfg
        .layers
        .iter()
        .enumerate()
        .flat_map(|(i, l)| (0..l.count).map(move |_| (i, &l.slope)))
        .collect();
    let n = handles.len();
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for (i, &(li, c)) in handles.iter().enumerate() {
        for (j, &(lj, d)) in handles.iter().enumerate() {
            rows[i][j] = if i == j {
                c.x() * c.y() - 1
            } else if li < lj || (li == lj && i < j) {
                c.x() * d.y()
            } else {
                c.y() * d.x()
            };
        }
    }
    IntMatrix::from_rows(&rows).expect("square by construction")
}

/// Where a pattern search looked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Literal,
    /// Roles of slope 0 and slope ∞ exchanged.
    Swapped,
    /// The factor list rotated left by `offset`, adjacent equal slopes merged.
    Rotated { offset: usize, swapped: bool },
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalization::Literal => write!(f, "literal"),
            Normalization::Swapped => write!(f, "swapped"),
            Normalization::Rotated { offset, swapped } => {
                write!(f, "rotated({offset}")?;
                if *swapped {
                    write!(f, ", swapped")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PatternMode {
    /// `x^e1 y^f1 x^e2 y^f2 x^e3 y^f3`, `e ≥ 3`, `f1, f2 ≥ 1`, `f3 ≥ 2`.
    #[default]
    Strict,
    /// `x^e1 y^f1 x^e2 y^f2 x^e3 y^f3 x^e4`, `e1..e3 ≥ 3`, `f ≥ 1`, `e4 ≥ 1`.
    Relaxed,
}

/// Sequence of `congruence_slide(i, j, c)` moves on the linking matrix of
/// the canonical γ configuration, and the handles spanning the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlideScript {
    pub slides: Vec<(usize, usize, i64)>,
    pub block: Vec<usize>,
}

/// Handles of `a³ b a³ b a³ b²` by ascending level: `B1 B2 | A1 A2 A3 | B3 |
/// A4 A5 A6 | B4 | A7 A8 A9`.
const A: [usize; 9] = [2, 3, 4, 6, 7, 8, 10, 11, 12];
const B: [usize; 4] = [0, 1, 5, 9];

/// `A_k − A_{k+1}` for `k ≤ 5`, `B_k − B_{k+1}` for `k ≤ 3`, then the
/// middle difference absorbs `−(B_1 − B_2) − (B_2 − B_3)`.
pub fn canonical_slide_script() -> SlideScript {
    let mut slides = Vec::new();
    for k in 0..5 {
        slides.push((A[k + 1], A[k], -1));
    }
    for k in 0..3 {
        slides.push((B[k + 1], B[k], -1));
    }
    slides.push((B[0], A[2], -1));
    slides.push((B[1], A[2], -1));
    let mut block: Vec<usize> = A[..5].to_vec();
    block.extend_from_slice(&B[..3]);
    SlideScript { slides, block }
}

impl SlideScript {
    /// Replays the slides on `m`, checking that every step preserves
    /// inertia, and returns the principal block on `self.block`.
    pub fn replay(&self, m: &IntMatrix) -> Result<IntMatrix> {
        let start = linalg::inertia(m)?;
        let mut cur = m.clone();
        for &(i, j, c) in &self.slides {
            cur = linalg::congruence_slide(&cur, i, j, &BigInt::from(c))?;
            if linalg::inertia(&cur)? != start {
                return Err(Error::Contract(format!("slide ({i}, {j}, {c}) changed the inertia")));
            }
        }
        cur.principal_submatrix(&self.block)
    }
}

/// The γ word `a³ b a³ b a³ b²`.
pub fn gamma_word() -> TwistWord {
    TwistWord::a(3)
        .then(&TwistWord::b(1))
        .pow(3)
        .then(&TwistWord::b(1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaCertificate {
    pub found: bool,
    pub mode: PatternMode,
    pub normalization: Option<Normalization>,
    /// Half-open factor range `[start, end)` in the normalized word.
    pub positions: Option<(usize, usize)>,
    /// Exponents of the matched block, in order.
    pub exponents: Vec<i64>,
    /// The normalized word the match refers to.
    pub searched: Option<TwistWord>,
    pub plumbing: Option<PlumbingGraph>,
    pub det: Option<BigInt>,
    pub inertia: Option<Inertia>,
    pub slide_script: Option<SlideScript>,
}

impl GammaCertificate {
    fn not_found(mode: PatternMode) -> Self {
        GammaCertificate {
            found: false,
            mode,
            normalization: None,
            positions: None,
            exponents: Vec::new(),
            searched: None,
            plumbing: None,
            det: None,
            inertia: None,
            slide_script: None,
        }
    }

    /// The matched exponents are exactly `(3, 1, 3, 1, 3, 2)`.
    pub fn is_canonical(&self) -> bool {
        self.found && self.exponents == [3, 1, 3, 1, 3, 2]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = |x: &dyn ToString| x.to_string();
        serde_json::json!({
            "found": self.found,
            "pattern": match self.mode { PatternMode::Strict => "strict", PatternMode::Relaxed => "relaxed" },
            "normalization": self.normalization.map(|n| n.to_string()),
            "positions": self.positions.map(|(a, b)| [s(&a), s(&b)]),
            "exponents": self.exponents.iter().map(|e| s(e)).collect::<Vec<_>>(),
            "searched_word": self.searched.as_ref().map(|w| w.to_string()),
            "canonical": self.is_canonical(),
            "det": self.det.as_ref().map(|d| d.to_string()),
            "inertia": self.inertia.map(|i| [s(&i.n_plus), s(&i.n_zero), s(&i.n_minus)]),
            "plumbing": self.plumbing,
            "slide_script": self.slide_script.as_ref().map(|sc| {
                sc.slides.iter().map(|(i, j, c)| [s(i), s(j), s(c)]).collect::<Vec<_>>()
            }),
        })
    }
}

fn swap_roles(w: &TwistWord) -> TwistWord {
    TwistWord::new(w.factors().iter().map(|f| {
        let slope = if f.slope == Slope::zero() {
            Slope::infinity()
        } else if f.slope == Slope::infinity() {
            Slope::zero()
        } else {
            f.slope.clone()
        };
        TwistFactor::new(slope, f.exp)
    }))
}

fn rotate(w: &TwistWord, offset: usize) -> TwistWord {
    let f = w.factors();
    TwistWord::new(f[offset..].iter().chain(&f[..offset]).cloned())
}

/// First block matching the pattern with `x` = slope 0 and `y` = slope ∞.
fn find_block(w: &TwistWord, mode: PatternMode) -> Option<(usize, Vec<i64>)> {
    let f = w.factors();
    let (x, y) = (Slope::zero(), Slope::infinity());
    let mins: &[i64] = match mode {
        PatternMode::Strict => &[3, 1, 3, 1, 3, 2],
        PatternMode::Relaxed => &[3, 1, 3, 1, 3, 1, 1],
    };
    let len = mins.len();
    (0..f.len().saturating_sub(len - 1)).find_map(|start| {
        let block = &f[start..start + len];
        let ok = block.iter().enumerate().all(|(k, fac)| {
            let want = if k % 2 == 0 { &x } else { &y };
            fac.slope == *want && fac.exp >= mins[k]
        });
        ok.then(|| (start, block.iter().map(|fac| fac.exp).collect()))
    })
}

/// Searches the literal word, its role swap, then each cyclic rotation
/// (plain before swapped), and reports the first hit in that order.
pub fn gamma_pattern(w: &TwistWord, mode: PatternMode, par_mode: Parallelism) -> Result<GammaCertificate> {
    if let Some(f) = w.factors().iter().find(|f| f.exp <= 0) {
        return Err(Error::Contract(format!(
            "pattern search needs positive exponents, found {} on slope {}",
            f.exp, f.slope
        )));
    }
    let mut order = vec![Normalization::Literal, Normalization::Swapped];
    for offset in 1..w.len() {
        order.push(Normalization::Rotated { offset, swapped: false });
        order.push(Normalization::Rotated { offset, swapped: true });
    }
    let hit = par::find_first(order, par_mode, |norm| {
        let searched = match norm {
            Normalization::Literal => w.clone(),
            Normalization::Swapped => swap_roles(w),
            Normalization::Rotated { offset, swapped } => {
                let r = rotate(w, offset);
                if swapped {
                    swap_roles(&r)
                } else {
                    r
                }
            }
        };
        find_block(&searched, mode).map(|(start, exps)| (norm, start, exps, searched))
    });
    let Some((_, (norm, start, exponents, searched))) = hit else {
        return Ok(GammaCertificate::not_found(mode));
    };
    let plum = plumbing::catalog(&CatalogId::Plum)?;
    let m = plumbing::intersection_matrix(&plum);
    Ok(GammaCertificate {
        found: true,
        mode,
        normalization: Some(norm),
        positions: Some((start, start + exponents.len())),
        exponents,
        searched: Some(searched),
        det: Some(linalg::det_exact(&m)?),
        inertia: Some(linalg::inertia(&m)?),
        plumbing: Some(plum),
        slide_script: None,
    })
}

/// [`gamma_pattern`] plus the positivity check on the plumbing and, for a
/// canonical match, the slide script reducing the 13 handles to it.
pub fn b2plus_certificate(w: &TwistWord, mode: PatternMode, par_mode: Parallelism) -> Result<GammaCertificate> {
    let mut cert = gamma_pattern(w, mode, par_mode)?;
    if !cert.found {
        return Ok(cert);
    }
    let inertia = cert.inertia.expect("set on a match");
    if inertia.n_plus < 1 {
        return Err(Error::Contract("the certificate plumbing has no positive direction".into()));
    }
    if cert.is_canonical() {
        let script = canonical_slide_script();
        let cfg = config_from_word(&gamma_word(), None)?;
        let block = script.replay(&linking_matrix(&cfg))?;
        let plum = plumbing::intersection_matrix(cert.plumbing.as_ref().expect("set on a match"));
        if block != plum {
            return Err(Error::Contract("slide script does not reproduce the plumbing".into()));
        }
        cert.slide_script = Some(script);
    }
    Ok(cert)
}
