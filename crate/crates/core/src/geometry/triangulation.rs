//! Ideal triangulations of punctured surfaces and their exchange matrices.

use serde::{Deserialize, Serialize};

use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Edges `0..num_edges`; each triangle lists its sides in clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    num_edges: usize,
    triangles: Vec<[usize; 3]>,
}

/// File form with 1-based edge labels: `{"edges": 3, "triangles": [[1,2,3],[1,2,3]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub edges: usize,
    pub triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    /// Validates 0-based triangles: no repeated side, every edge on two sides.
    pub fn new(num_edges: usize, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut count = vec![0usize; num_edges];
        for tri in &triangles {
            for (s, &e) in tri.iter().enumerate() {
                if e >= num_edges {
                    return Err(Error::IndexOutOfRange { index: e + 1, n: num_edges });
                }
                if tri[..s].contains(&e) {
                    return Err(Error::SelfFoldedEdge(e + 1));
                }
                count[e] += 1;
            }
        }
        if let Some((e, &c)) = count.iter().enumerate().find(|(_, &c)| c != 2) {
            return Err(Error::BadIncidence { edge: e + 1, count: c });
        }
        Ok(Triangulation { num_edges, triangles })
    }

    pub fn from_file(file: &TriangulationFile) -> Result<Self> {
        let tris = file
            .triangles
            .iter()
            .map(|t| {
                let mut out = [0; 3];
                for (o, &e) in out.iter_mut().zip(t) {
                    if e == 0 {
                        return Err(Error::IndexOutOfRange { index: 0, n: file.edges });
                    }
                    *o = e - 1;
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Triangulation::new(file.edges, tris)
    }

    pub fn to_file(&self) -> TriangulationFile {
        TriangulationFile {
            edges: self.num_edges,
            triangles: self.triangles.iter().map(|t| t.map(|e| e + 1)).collect(),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }
}

/// `B_Γ = Σ_t B^t`, where a triangle with clockwise sides `(a, b, c)`
/// contributes `+1` at `(a,b), (b,c), (c,a)` and `-1` at the transposes.
pub fn b_from_triangulation(tri: &Triangulation) -> Result<ExchangeMatrix> {
    let n = tri.num_edges;
    let mut b = IntMatrix::zeros(n, n);
    for t in &tri.triangles {
        for s in 0..3 {
            let (i, j) = (t[s], t[(s + 1) % 3]);
            b[(i, j)] += 1;
            b[(j, i)] -= 1;
        }
    }
    ExchangeMatrix::new(b)
}
