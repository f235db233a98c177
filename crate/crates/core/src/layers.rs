//! Toric layer decompositions and the slope bookkeeping of Legendrian
//! surgery on tori with linear characteristic foliation.
//!
//! Layer `i` is a `T² × I` with slopes measured in its own coordinates. The
//! gluing `φ_i` between layers `i` and `i + 1` maps coordinates on the right
//! boundary of layer `i` to those on the left boundary of layer `i + 1`, so
//! data is carried leftwards by `φ_i⁻¹`. Gluings are kept as twist words so
//! traces can print them.

use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::mcg::{self, Sl2, Slope, TwistFactor, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricLayer {
    pub name: String,
    pub left: Slope,
    pub right: Slope,
}

impl ToricLayer {
    pub fn new(name: impl Into<String>, left: Slope, right: Slope) -> Self {
        ToricLayer {
            name: name.into(),
            left,
            right,
        }
    }
}

impl fmt::Display for ToricLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.name, self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerDecomposition {
    layers: Vec<ToricLayer>,
    gluings: Vec<TwistWord>,
}

impl LayerDecomposition {
    /// Checks that each gluing carries the right slope of one layer to the
    /// left slope of the next.
    pub fn new(layers: Vec<ToricLayer>, gluings: Vec<TwistWord>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Contract("a decomposition needs a layer".into()));
        }
        if gluings.len() + 1 != layers.len() {
            return Err(Error::Contract(format!(
                "{} gluings for {} layers",
                gluings.len(),
                layers.len()
            )));
        }
        for (i, g) in gluings.iter().enumerate() {
            let image = mcg::act_on_slope(&mcg::eval_word(g), &layers[i].right);
            if image != layers[i + 1].left {
                return Err(Error::Contract(format!(
                    "gluing {i} sends {} to {}, but {} starts at {}",
                    layers[i].right,
                    image,
                    layers[i + 1].name,
                    layers[i + 1].left
                )));
            }
        }
        Ok(LayerDecomposition { layers, gluings })
    }

    /// Layers glued by the identity.
    pub fn stacked(layers: Vec<ToricLayer>) -> Result<Self> {
        let n = layers.len().saturating_sub(1);
        LayerDecomposition::new(layers, vec![TwistWord::empty(); n])
    }

    pub fn layers(&self) -> &[ToricLayer] {
        &self.layers
    }

    pub fn gluings(&self) -> &[TwistWord] {
        &self.gluings
    }

    pub fn gluing_matrix(&self, i: usize) -> Sl2 {
        mcg::eval_word(&self.gluings[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.layers.iter().position(|l| l.name == name)
    }

    /// The sub-decomposition on layers `range`, with its inner gluings.
    pub fn slice(&self, range: RangeInclusive<usize>) -> Result<Self> {
        let (i, j) = (*range.start(), *range.end());
        if i > j || j >= self.layers.len() {
            return Err(Error::Contract(format!("layer range {i}..={j} out of bounds")));
        }
        Ok(LayerDecomposition {
            layers: self.layers[i..=j].to_vec(),
            gluings: self.gluings[i..j].to_vec(),
        })
    }
}

impl fmt::Display for LayerDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.layers[0])?;
        for (g, l) in self.gluings.iter().zip(&self.layers[1..]) {
            if mcg::is_identity_word(g) {
                write!(f, " u {l}")?;
            } else {
                write!(f, " u[{g}] {l}")?;
            }
        }
        Ok(())
    }
}

/// `k` parallel Legendrian surgeries along `c` at interface `at`: the
/// gluing becomes `φ · D_c^k`.
pub fn split_and_twist(d: &LayerDecomposition, at: usize, c: &Slope, k: u32) -> Result<LayerDecomposition> {
    if at >= d.gluings.len() {
        return Err(Error::Contract(format!("no interface {at}")));
    }
    let left = &d.layers[at];
    let right = &d.layers[at + 1];
    if left.right != *c {
        return Err(Error::Contract(format!(
            "{} ends at slope {}, not {}",
            left.name, left.right, c
        )));
    }
    let image = mcg::act_on_slope(&d.gluing_matrix(at), c);
    if right.left != image {
        return Err(Error::Contract(format!(
            "{} starts at slope {}, not {}",
            right.name, right.left, image
        )));
    }
    let mut out = d.clone();
    out.gluings[at] = d.gluings[at].then(&TwistWord::new([TwistFactor::new(c.clone(), k as i64)]));
    Ok(out)
}

/// Boundary slopes of the whole stack, both in the first layer's coordinates.
pub fn outer_slopes(d: &LayerDecomposition) -> (Slope, Slope) {
    let mut right = d.layers.last().expect("nonempty").right.clone();
    for g in d.gluings.iter().rev() {
        right = mcg::act_on_slope(&mcg::eval_word(g).inverse(), &right);
    }
    (d.layers[0].left.clone(), right)
}

/// Re-expresses layers `range` in the coordinates of its first layer, so the
/// gluings inside become trivial. The accumulated map moves onto the gluing
/// just after the range, if there is one.
pub fn normalize_range(d: &LayerDecomposition, range: RangeInclusive<usize>) -> Result<LayerDecomposition> {
    let (i, j) = (*range.start(), *range.end());
    if i > j || j >= d.layers.len() {
        return Err(Error::Contract(format!("layer range {i}..={j} out of bounds")));
    }
    let mut out = d.clone();
    // acc = φ_{m−1} ⋯ φ_i, from layer i's coordinates to layer m's
    let mut acc = TwistWord::empty();
    for m in i + 1..=j {
        acc = d.gluings[m - 1].then(&acc);
        let back = mcg::eval_word(&acc).inverse();
        let l = &mut out.layers[m];
        l.left = mcg::act_on_slope(&back, &l.left);
        l.right = mcg::act_on_slope(&back, &l.right);
        out.gluings[m - 1] = TwistWord::empty();
    }
    if j < d.gluings.len() {
        out.gluings[j] = d.gluings[j].then(&acc);
    }
    Ok(out)
}

/// Trivializes every gluing; the outer slopes do not move.
pub fn normalize(d: &LayerDecomposition) -> LayerDecomposition {
    normalize_range(d, 0..=d.layers.len() - 1).expect("full range is valid")
}

/// Replaces layers `range`, which must be glued by the identity, with one
/// layer called `name`.
pub fn merge_range(d: &LayerDecomposition, range: RangeInclusive<usize>, name: &str) -> Result<LayerDecomposition> {
    let (i, j) = (*range.start(), *range.end());
    if i > j || j >= d.layers.len() {
        return Err(Error::Contract(format!("layer range {i}..={j} out of bounds")));
    }
    if let Some(g) = d.gluings[i..j].iter().find(|g| !mcg::is_identity_word(g)) {
        return Err(Error::Contract(format!("cannot merge across the gluing {g}")));
    }
    let merged = ToricLayer::new(name, d.layers[i].left.clone(), d.layers[j].right.clone());
    let mut layers = d.layers[..i].to_vec();
    layers.push(merged);
    layers.extend_from_slice(&d.layers[j + 1..]);
    let mut gluings = d.gluings[..i].to_vec();
    gluings.extend_from_slice(&d.gluings[j..]);
    Ok(LayerDecomposition { layers, gluings })
}

/// One surgery step of the Lutz-layer removal and the state it leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub curve: String,
    pub slope: Slope,
    /// Names of the two layers meeting at the surgery torus.
    pub interface: (String, String),
    /// Outer slopes of everything strictly between the collar and `N6`,
    /// before any renormalization in this step.
    pub block_slopes: (Slope, Slope),
    /// Layers created by renormalizing after the surgery.
    pub created: Vec<ToricLayer>,
    pub state: LayerDecomposition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionTrace {
    pub n: u32,
    pub initial: LayerDecomposition,
    pub steps: Vec<TraceStep>,
    /// Composite regluing word picked up on the final interface.
    pub accumulated: TwistWord,
    pub final_state: LayerDecomposition,
}

impl TorsionTrace {
    /// Outer slopes after the four `C_{3/4}`/`D_{1/2}` steps, then the two
    /// renormalized layers, in order.
    pub fn slope_sequence(&self) -> Vec<(Slope, Slope)> {
        let mut out: Vec<(Slope, Slope)> = self.steps[3..7].iter().map(|s| s.block_slopes.clone()).collect();
        for s in &self.steps[6..8] {
            out.extend(s.created.iter().map(|l| (l.left.clone(), l.right.clone())));
        }
        out
    }

    pub fn accumulated_matrix(&self) -> Sl2 {
        mcg::eval_word(&self.accumulated)
    }

    /// The surgery configuration of the same curves: one layer per torus at
    /// levels `1/7 … 6/7`.
    pub fn surgery_config(&self) -> crate::cobordism::SurgeryConfig {
        use num_rational::BigRational;
        let layers = [(Slope::zero(), 1), (Slope::infinity(), 3)]
            .iter()
            .cycle()
            .take(6)
            .enumerate()
            .map(|(i, (s, c))| crate::cobordism::SurgeryLayer {
                level: BigRational::new((i as i64 + 1).into(), 7.into()),
                slope: s.clone(),
                count: *c,
            })
            .collect();
        crate::cobordism::SurgeryConfig::new(layers).expect("valid levels")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let layer_json = |l: &ToricLayer| serde_json::json!({"name": l.name, "slopes": [l.left, l.right]});
        let state_json = |d: &LayerDecomposition| {
            serde_json::json!({
                "layers": d.layers().iter().map(layer_json).collect::<Vec<_>>(),
                "gluings": d.gluings().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            })
        };
        serde_json::json!({
            "n": self.n.to_string(),
            "initial": state_json(&self.initial),
            "steps": self.steps.iter().map(|s| serde_json::json!({
                "step": s.step.to_string(),
                "curve": s.curve,
                "slope": s.slope,
                "interface": [s.interface.0, s.interface.1],
                "block_slopes": [s.block_slopes.0, s.block_slopes.1],
                "created": s.created.iter().map(layer_json).collect::<Vec<_>>(),
                "state": state_json(&s.state),
            })).collect::<Vec<_>>(),
            "accumulated_word": self.accumulated.to_string(),
            "accumulated_matrix": self.accumulated_matrix(),
            "final": state_json(&self.final_state),
        })
    }
}

impl fmt::Display for TorsionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.initial)?;
        writeln!(f, "{:>4}  {:<8} {:<10} {:<14} state", "step", "curve", "interface", "block slopes")?;
        for s in &self.steps {
            writeln!(
                f,
                "{:>4}  {:<8} {:<10} {:<14} {}",
                s.step,
                s.curve,
                format!("{}/{}", s.interface.0, s.interface.1),
                format!("({}, {})", s.block_slopes.0, s.block_slopes.1),
                s.state
            )?;
            for l in &s.created {
                writeln!(f, "      renormalized {l}")?;
            }
        }
        writeln!(f, "accumulated gluing {} = {}", self.accumulated, self.accumulated_matrix())?;
        write!(f, "final: {}", self.final_state)
    }
}

struct Script {
    d: LayerDecomposition,
    steps: Vec<TraceStep>,
}

impl Script {
    fn idx(&self, name: &str) -> usize {
        self.d.index_of(name).expect("layer names are fixed by the script")
    }

    fn block(&self) -> (Slope, Slope) {
        let last = self.d.layers.len() - 2;
        outer_slopes(&self.d.slice(1..=last).expect("collar and N6 bracket the block"))
    }

    fn surgery(&mut self, curve: &str, left: &str, slope: Slope) -> Result<()> {
        let at = self.idx(left);
        self.d = split_and_twist(&self.d, at, &slope, 1)?;
        let step = TraceStep {
            step: self.steps.len() + 1,
            curve: curve.to_string(),
            slope,
            interface: (left.to_string(), self.d.layers[at + 1].name.clone()),
            block_slopes: self.block(),
            created: Vec::new(),
            state: self.d.clone(),
        };
        self.steps.push(step);
        Ok(())
    }

    /// Renormalizes from `from` through `to`, then merges the layers after
    /// `from` into one called `name`.
    fn absorb(&mut self, from: &str, to: &str, name: &str) -> Result<()> {
        let (i, j) = (self.idx(from), self.idx(to));
        self.d = normalize_range(&self.d, i..=j)?;
        self.d = merge_range(&self.d, i + 1..=j, name)?;
        let last = self.steps.last_mut().expect("absorb follows a surgery");
        last.created.push(self.d.layers[i + 1].clone());
        last.state = self.d.clone();
        Ok(())
    }
}

/// Replays the removal of a full-twist layer by twelve Legendrian surgeries:
/// three `D` curves on `T_1`, `C_{3/4}`, three `D` curves on `T_{1/2}`,
/// `C_{1/4}`, three on `T_0`, and `C_{−δ}`.
///
/// The collar is a thin layer to the left of `T_{−δ}` so that the last
/// surgery has an interface to act on. The result is the collar followed by
/// `N1` glued to `N6` by a map that evaluates to the identity.
pub fn reduce_torsion_script(n: u32) -> Result<TorsionTrace> {
    if n == 0 {
        return Err(Error::Contract("the twisting parameter n must be at least 1".into()));
    }
    let (zero, inf) = (Slope::zero(), Slope::infinity());
    let initial = LayerDecomposition::stacked(vec![
        ToricLayer::new("collar", zero.clone(), zero.clone()),
        ToricLayer::new("N1", zero.clone(), inf.clone()),
        ToricLayer::new("N2", inf.clone(), zero.clone()),
        ToricLayer::new("N3", zero.clone(), inf.clone()),
        ToricLayer::new("N4", inf.clone(), zero.clone()),
        ToricLayer::new("N5", zero.clone(), inf.clone()),
        ToricLayer::new("N6", inf.clone(), Slope::integer(n)),
    ])?;
    let mut s = Script {
        d: initial.clone(),
        steps: Vec::new(),
    };
    for k in 1..=3 {
        s.surgery(&format!("D{k}_1"), "N5", inf.clone())?;
    }
    s.surgery("C_3/4", "N4", zero.clone())?;
    for k in 1..=3 {
        s.surgery(&format!("D{k}_1/2"), "N3", inf.clone())?;
    }
    s.absorb("N3", "N5", "N5'")?;
    s.surgery("C_1/4", "N2", zero.clone())?;
    s.absorb("N2", "N5'", "N4'")?;
    for k in 1..=3 {
        s.surgery(&format!("D{k}_0"), "N1", inf.clone())?;
    }
    s.absorb("N1", "N4'", "N3'")?;
    s.surgery("C_-d", "collar", zero)?;
    s.absorb("collar", "N3'", "N1")?;

    let accumulated = s.d.gluings[s.d.gluings.len() - 1].clone();
    if !mcg::is_identity_word(&accumulated) {
        return Err(Error::Contract(format!(
            "accumulated gluing {accumulated} is not the identity"
        )));
    }
    Ok(TorsionTrace {
        n,
        initial,
        steps: s.steps,
        accumulated,
        final_state: s.d,
    })
}
