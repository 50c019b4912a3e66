//! Edge orientations and the signed incidence matrices `B` (edge × vertex)
//! and `C` (triangle × edge).

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Triangle};
use crate::matrix::IntMatrix;

/// A `(tail, head)` pair for every edge, indexed like the graph's edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    /// Validates `arcs` against `g`: one arc per edge, same endpoints.
    pub fn from_arcs(g: &Graph, arcs: Vec<(usize, usize)>) -> Result<Self> {
        if arcs.len() != g.m() {
            return Err(Error::BadOrientation(format!(
                "{} arcs for {} edges",
                arcs.len(),
                g.m()
            )));
        }
        for (e, (&(t, h), &(u, v))) in arcs.iter().zip(g.edges()).enumerate() {
            let ok = (t, h) == (u, v) || (t, h) == (v, u);
            if !ok {
                return Err(Error::BadOrientation(format!(
                    "arc {t}->{h} does not match edge {e} = {{{u}, {v}}}"
                )));
            }
        }
        Ok(Orientation { arcs })
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn tail(&self, e: usize) -> usize {
        self.arcs[e].0
    }

    pub fn head(&self, e: usize) -> usize {
        self.arcs[e].1
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Reverses the direction of edge `e`.
    pub fn flip(&mut self, e: usize) {
        let (t, h) = self.arcs[e];
        self.arcs[e] = (h, t);
    }

    /// An orientation with each edge direction drawn uniformly.
    pub fn random<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Self {
        let arcs = g
            .edges()
            .iter()
            .map(|&(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) })
            .collect();
        Orientation { arcs }
    }

    /// ±1 per edge: +1 where `self` and `other` agree.
    pub fn agreement(&self, other: &Orientation) -> Vec<i64> {
        self.arcs
            .iter()
            .zip(&other.arcs)
            .map(|(a, b)| if a == b { 1 } else { -1 })
            .collect()
    }
}

/// Orients each edge from its lower-labelled endpoint to the higher one.
pub fn canonical_orientation(g: &Graph) -> Orientation {
    Orientation { arcs: g.edges().to_vec() }
}

/// A triangle traversed `i → j → k → i` with `i < j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientedTriangle(pub Triangle);

impl OrientedTriangle {
    /// `+1` if the arc runs along the cyclic order, `-1` against it, `0` if
    /// it is not a side of the triangle.
    pub fn sign(&self, tail: usize, head: usize) -> i64 {
        let [i, j, k] = self.0.vertices();
        let cycle = [(i, j), (j, k), (k, i)];
        if cycle.contains(&(tail, head)) {
            1
        } else if cycle.contains(&(head, tail)) {
            -1
        } else {
            0
        }
    }
}

/// `B[e][v]`: `-1` at the tail, `+1` at the head.
pub fn build_b(g: &Graph, o: &Orientation) -> Result<IntMatrix> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    check(g, o)?;
    let mut b = IntMatrix::zeros(g.m(), g.n());
    for (e, &(t, h)) in o.arcs().iter().enumerate() {
        b[(e, t)] = -1;
        b[(e, h)] = 1;
    }
    Ok(b)
}

/// `C[△][e]`: the sign of `e` relative to the triangle's cyclic order.
/// Triangle rows follow [`Graph::enumerate_triangles`]; a triangle-free
/// graph gives a `0 × m` matrix.
pub fn build_c(g: &Graph, o: &Orientation) -> Result<IntMatrix> {
    check(g, o)?;
    let triangles = g.enumerate_triangles();
    let mut c = IntMatrix::zeros(triangles.len(), g.m());
    for (row, tri) in triangles.into_iter().enumerate() {
        let ot = OrientedTriangle(tri);
        for (u, v) in tri.edges() {
            let e = g.edge_index(u, v).expect("triangle sides are edges");
            let (t, h) = o.arcs()[e];
            c[(row, e)] = ot.sign(t, h);
        }
    }
    Ok(c)
}

fn check(g: &Graph, o: &Orientation) -> Result<()> {
    if o.len() != g.m() {
        return Err(Error::BadOrientation(format!("{} arcs for {} edges", o.len(), g.m())));
    }
    Ok(())
}
