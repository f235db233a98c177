//! Weighted plumbing graphs of spheres and the figures' catalog.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::IntText;
use crate::linalg::{self, AbelianGroup, Inertia, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    /// A distinguished vertex (drawn as an arrow in the figures).
    arrow: Option<usize>,
}

impl PlumbingGraph {
    pub fn new(weights: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Contract("a plumbing graph needs a vertex".into()));
        }
        for &(i, j) in &edges {
            if i >= weights.len() || j >= weights.len() {
                return Err(Error::Contract(format!("edge ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::Contract(format!("self-loop at vertex {i}")));
            }
        }
        Ok(PlumbingGraph {
            weights,
            edges,
            arrow: None,
        })
    }

    pub fn with_arrow(mut self, v: usize) -> Result<Self> {
        if v >= self.weights.len() {
            return Err(Error::Contract(format!("arrow vertex {v} out of range")));
        }
        self.arrow = Some(v);
        Ok(self)
    }

    /// A path with the given weights, in order.
    pub fn chain(weights: &[i64]) -> Result<Self> {
        let edges = (1..weights.len()).map(|i| (i - 1, i)).collect();
        PlumbingGraph::new(weights.to_vec(), edges)
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn arrow(&self) -> Option<usize> {
        self.arrow
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(i, j)| i == v || j == v).count()
    }

    /// Same graph with vertex `v` given weight `w`.
    pub fn reweight(&self, v: usize, w: i64) -> Result<Self> {
        if v >= self.weights.len() {
            return Err(Error::Contract(format!("vertex {v} out of range")));
        }
        let mut g = self.clone();
        g.weights[v] = w;
        Ok(g)
    }

    /// Removes vertex `v` and its edges; later vertices shift down by one.
    /// The arrow is dropped if it pointed at `v`.
    pub fn delete_vertex(&self, v: usize) -> Result<Self> {
        let n = self.weights.len();
        if v >= n {
            return Err(Error::Contract(format!("vertex {v} out of range")));
        }
        if n == 1 {
            return Err(Error::Contract("cannot delete the only vertex".into()));
        }
        let shift = |i: usize| if i > v { i - 1 } else { i };
        let mut weights = self.weights.clone();
        weights.remove(v);
        let edges = self
            .edges
            .iter()
            .filter(|&&(i, j)| i != v && j != v)
            .map(|&(i, j)| (shift(i), shift(j)))
            .collect();
        Ok(PlumbingGraph {
            weights,
            edges,
            arrow: self.arrow.filter(|&a| a != v).map(shift),
        })
    }
}

pub fn intersection_matrix(g: &PlumbingGraph) -> IntMatrix {
    let n = g.vertex_count();
    let mut rows = vec![vec![BigInt::from(0); n]; n];
    for (i, w) in g.weights.iter().enumerate() {
        rows[i][i] = BigInt::from(*w);
    }
    for &(i, j) in &g.edges {
        rows[i][j] += 1;
        rows[j][i] += 1;
    }
    IntMatrix::from_rows(&rows).expect("square by construction")
}

/// First homology of the boundary 3-manifold.
pub fn boundary_homology(g: &PlumbingGraph) -> AbelianGroup {
    linalg::cokernel_invariants(&intersection_matrix(g)).expect("square by construction")
}

pub fn betti_signature(g: &PlumbingGraph) -> Inertia {
    linalg::inertia(&intersection_matrix(g)).expect("symmetric by construction")
}

/// Vertices with `weight > −degree`.
pub fn bad_vertex_count(g: &PlumbingGraph) -> usize {
    (0..g.vertex_count())
        .filter(|&v| g.weights[v] > -(g.degree(v) as i64))
        .count()
}

/// Graphs drawn in the figures, plus a few standard families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogId {
    /// Vertices `n1..n5, n6, n7`; arrow on `n5`.
    E6Tilde,
    /// Vertices `m1..m7, m8`; arrow on `m7`.
    E7Tilde,
    /// Vertices `p1..p8, p10`; arrow on `p8`.
    E8Tilde,
    /// Star with center `n2` and leaves `n1, n3, n4, n5`; arrow on `n3`.
    SeifParabolic,
    /// Path `m1..m5` with the path `top1..top3` hanging off `m3`.
    Plum,
    /// The H-shaped graph with weights `(−2, −2, −1, n, −1, −2, −2)`.
    VillaA(i64),
    /// `n1, n2, n3`, a chain of `n − 1` vertices, then `n6, n7, n8`; all −2,
    /// arrow on `n2`. Requires `n > 0`.
    VillaB(i64),
    /// A path of `len` vertices of weight `weight`.
    Chain(usize, i64),
    /// The D_n Dynkin graph, all −2: leaves 0 and 1 on vertex 2, then a path.
    Dtype(usize),
    /// A path with the given weights.
    LensChain(Vec<i64>),
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogId::E6Tilde => write!(f, "E6tilde"),
            CatalogId::E7Tilde => write!(f, "E7tilde"),
            CatalogId::E8Tilde => write!(f, "E8tilde"),
            CatalogId::SeifParabolic => write!(f, "SeifParabolic"),
            CatalogId::Plum => write!(f, "Plum"),
            CatalogId::VillaA(n) => write!(f, "VillaA({n})"),
            CatalogId::VillaB(n) => write!(f, "VillaB({n})"),
            CatalogId::Chain(len, w) => write!(f, "Chain({len},{w})"),
            CatalogId::Dtype(n) => write!(f, "Dtype({n})"),
            CatalogId::LensChain(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "LensChain({})", parts.join(","))
            }
        }
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    /// Names as printed by `Display`, case-insensitive, e.g. `VillaA(2)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Catalog(format!("missing ')' in {s:?}")))?;
                let args = inner
                    .split(',')
                    .map(|a| a.trim())
                    .filter(|a| !a.is_empty())
                    .map(|a| {
                        a.parse::<i64>()
                            .map_err(|_| Error::Catalog(format!("bad parameter {a:?}")))
                    })
                    .collect::<Result<Vec<i64>>>()?;
                (name.trim(), args)
            }
            None => (s, Vec::new()),
        };
        let arity = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::Catalog(format!("{name} takes {k} parameter(s)")))
            }
        };
        let count = |x: i64| -> Result<usize> {
            usize::try_from(x).map_err(|_| Error::Catalog(format!("{name}: negative count {x}")))
        };
        let id = match name.to_ascii_lowercase().as_str() {
            "e6tilde" => {
                arity(0)?;
                CatalogId::E6Tilde
            }
            "e7tilde" => {
                arity(0)?;
                CatalogId::E7Tilde
            }
            "e8tilde" => {
                arity(0)?;
                CatalogId::E8Tilde
            }
            "seifparabolic" => {
                arity(0)?;
                CatalogId::SeifParabolic
            }
            "plum" => {
                arity(0)?;
                CatalogId::Plum
            }
            "villaa" => {
                arity(1)?;
                CatalogId::VillaA(args[0])
            }
            "villab" => {
                arity(1)?;
                CatalogId::VillaB(args[0])
            }
            "chain" => {
                arity(2)?;
                CatalogId::Chain(count(args[0])?, args[1])
            }
            "dtype" => {
                arity(1)?;
                CatalogId::Dtype(count(args[0])?)
            }
            "lenschain" => CatalogId::LensChain(args),
            _ => return Err(Error::Catalog(format!("unknown catalog entry {name:?}"))),
        };
        Ok(id)
    }
}

pub fn catalog(id: &CatalogId) -> Result<PlumbingGraph> {
    let g = match id {
        CatalogId::E6Tilde => {
            PlumbingGraph::new(vec![-2; 7], vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)])?
                .with_arrow(4)?
        }
        CatalogId::E7Tilde => {
            let mut edges: Vec<_> = (1..7).map(|i| (i - 1, i)).collect();
            edges.push((3, 7));
            PlumbingGraph::new(vec![-2; 8], edges)?.with_arrow(6)?
        }
        CatalogId::E8Tilde => {
            let mut edges: Vec<_> = (1..8).map(|i| (i - 1, i)).collect();
            edges.push((2, 8));
            PlumbingGraph::new(vec![-2; 9], edges)?.with_arrow(7)?
        }
        CatalogId::SeifParabolic => {
            PlumbingGraph::new(vec![-2; 5], vec![(0, 1), (1, 2), (1, 3), (1, 4)])?.with_arrow(2)?
        }
        CatalogId::Plum => PlumbingGraph::new(
            vec![-2; 8],
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6), (6, 7)],
        )?,
        CatalogId::VillaA(n) => PlumbingGraph::new(
            vec![-2, -2, -1, *n, -1, -2, -2],
            vec![(0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6)],
        )?,
        CatalogId::VillaB(n) => {
            if *n <= 0 {
                return Err(Error::Catalog(format!("VillaB requires n > 0, got {n}")));
            }
            let inner = (*n - 1) as usize;
            let total = inner + 6;
            let n6 = 3 + inner;
            let mut edges = vec![(0, 2), (1, 2)];
            // path n3, chain..., n6
            for v in 3..=n6 {
                edges.push((v - 1, v));
            }
            edges.push((n6, n6 + 1));
            edges.push((n6, n6 + 2));
            PlumbingGraph::new(vec![-2; total], edges)?.with_arrow(1)?
        }
        CatalogId::Chain(len, w) => {
            if *len == 0 {
                return Err(Error::Catalog("Chain needs at least one vertex".into()));
            }
            PlumbingGraph::chain(&vec![*w; *len])?
        }
        CatalogId::Dtype(n) => {
            if *n < 4 {
                return Err(Error::Catalog(format!("Dtype requires n >= 4, got {n}")));
            }
            let mut edges = vec![(0, 2), (1, 2)];
            edges.extend((3..*n).map(|i| (i - 1, i)));
            PlumbingGraph::new(vec![-2; *n], edges)?
        }
        CatalogId::LensChain(c) => {
            if c.is_empty() {
                return Err(Error::Catalog("LensChain needs coefficients".into()));
            }
            PlumbingGraph::chain(c)?
        }
    };
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    #[serde(default)]
    edges: Vec<[IntTextSer; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arrow: Option<IntTextSer>,
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    weight: IntTextSer,
}

/// An integer that is written as a string and read from either form.
#[derive(Clone, Copy)]
struct IntTextSer(i64);

impl Serialize for IntTextSer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for IntTextSer {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        IntText::deserialize(d).map(|v| IntTextSer(v.0))
    }
}

impl Serialize for PlumbingGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            vertices: self
                .weights
                .iter()
                .map(|&w| VertexJson { weight: IntTextSer(w) })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| [IntTextSer(i as i64), IntTextSer(j as i64)])
                .collect(),
            arrow: self.arrow.map(|a| IntTextSer(a as i64)),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlumbingGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = GraphJson::deserialize(d)?;
        let index = |v: IntTextSer| {
            usize::try_from(v.0).map_err(|_| D::Error::custom(format!("bad vertex index {}", v.0)))
        };
        let weights = raw.vertices.iter().map(|v| v.weight.0).collect();
        let edges = raw
            .edges
            .iter()
            .map(|&[i, j]| Ok((index(i)?, index(j)?)))
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        let g = PlumbingGraph::new(weights, edges).map_err(D::Error::custom)?;
        match raw.arrow {
            Some(a) => g.with_arrow(index(a)?).map_err(D::Error::custom),
            None => Ok(g),
        }
    }
}

/// Everything `plumbing analyze` reports about a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingReport {
    pub vertices: usize,
    pub det: BigInt,
    pub inertia: Inertia,
    pub homology: AbelianGroup,
    pub bad_vertices: usize,
}

pub fn analyze(g: &PlumbingGraph) -> PlumbingReport {
    let m = intersection_matrix(g);
    PlumbingReport {
        vertices: g.vertex_count(),
        det: linalg::det_exact(&m).expect("square by construction"),
        inertia: linalg::inertia(&m).expect("symmetric by construction"),
        homology: linalg::cokernel_invariants(&m).expect("square by construction"),
        bad_vertices: bad_vertex_count(g),
    }
}

impl PlumbingReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices.to_string(),
            "det": self.det.to_string(),
            "inertia": [
                self.inertia.n_plus.to_string(),
                self.inertia.n_zero.to_string(),
                self.inertia.n_minus.to_string()
            ],
            "homology": self.homology,
            "homology_text": self.homology.to_string(),
            "bad_vertices": self.bad_vertices.to_string(),
        })
    }
}

impl fmt::Display for PlumbingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices      {}", self.vertices)?;
        writeln!(f, "det           {}", self.det)?;
        writeln!(f, "inertia       {}", self.inertia)?;
        writeln!(f, "H1(boundary)  {}", self.homology)?;
        write!(f, "bad vertices  {}", self.bad_vertices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(s: &str) -> PlumbingGraph {
        catalog(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn two_vertex_matrix() {
        let g = PlumbingGraph::chain(&[-2, -2]).unwrap();
        assert_eq!(
            intersection_matrix(&g),
            IntMatrix::from_rows(&[vec![-2, 1], vec![1, -2]]).unwrap()
        );
    }

    #[test]
    fn catalog_shapes() {
        assert_eq!(cat("Plum").vertex_count(), 8);
        assert_eq!(cat("E6tilde").vertex_count(), 7);
        assert_eq!(cat("E7tilde").vertex_count(), 8);
        assert_eq!(cat("E8tilde").vertex_count(), 9);
        let s = cat("SeifParabolic");
        assert_eq!(s.degree(1), 4);
        assert_eq!(cat("VillaA(3)").weights(), &[-2, -2, -1, 3, -1, -2, -2]);
        assert_eq!(cat("VillaB(1)").vertex_count(), 6);
        assert_eq!(cat("VillaB(4)").vertex_count(), 9);
        assert_eq!(cat("Dtype(5)").vertex_count(), 5);
        assert_eq!(cat("LensChain(-2,-3)").weights(), &[-2, -3]);
        assert!(catalog(&CatalogId::VillaB(0)).is_err());
        assert!("Nope".parse::<CatalogId>().is_err());
        assert!("Chain(3)".parse::<CatalogId>().is_err());
        for id in ["E6tilde", "VillaA(-1)", "Chain(3,-2)", "LensChain(-2,-5)"] {
            assert_eq!(id.parse::<CatalogId>().unwrap().to_string(), id);
        }
    }

    #[test]
    fn bad_vertices() {
        assert_eq!(bad_vertex_count(&cat("Chain(3,-2)")), 0);
        assert_eq!(bad_vertex_count(&PlumbingGraph::chain(&[1]).unwrap()), 1);
        assert_eq!(bad_vertex_count(&PlumbingGraph::chain(&[0]).unwrap()), 0);
        // the trivalent vertex of weight −2
        assert_eq!(bad_vertex_count(&cat("Plum")), 1);
    }

    #[test]
    fn small_homology() {
        assert!(boundary_homology(&cat("Chain(1,-1)")).is_trivial());
        assert_eq!(betti_signature(&cat("Chain(1,1)")), Inertia::new(1, 0, 0));
        assert_eq!(betti_signature(&cat("Chain(5,-2)")), Inertia::new(0, 0, 5));
    }

    #[test]
    fn editing() {
        let g = cat("E7tilde");
        let a = g.arrow().unwrap();
        assert_eq!(g.reweight(a, -1).unwrap().weights()[a], -1);
        let d = g.delete_vertex(a).unwrap();
        assert_eq!(d.vertex_count(), 7);
        assert_eq!(d.arrow(), None);
        assert_eq!(d.edges().len(), 6);
        let d = cat("SeifParabolic").delete_vertex(0).unwrap();
        assert_eq!(d.arrow(), Some(1));
        assert_eq!(d.degree(0), 3);
    }

    #[test]
    fn graph_json_round_trip() {
        let g = cat("SeifParabolic");
        let s = serde_json::to_string(&g).unwrap();
        let back: PlumbingGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let plain: PlumbingGraph =
            serde_json::from_str(r#"{"vertices":[{"weight":-2},{"weight":-2}],"edges":[[0,1]]}"#)
                .unwrap();
        assert_eq!(plain, PlumbingGraph::chain(&[-2, -2]).unwrap());
        assert!(serde_json::from_str::<PlumbingGraph>(r#"{"vertices":[{"weight":1}],"edges":[[0,0]]}"#).is_err());
        assert!(serde_json::from_str::<PlumbingGraph>(r#"{"vertices":[]}"#).is_err());
    }
}
