//! Abstract pure simplicial complexes.
//!
//! A complex is given by its top-dimensional simplices only; every lower
//! face is derived. Vertices are 0-based and every simplex is stored as a
//! strictly increasing tuple, so the first entry of a simplex is its
//! lowest-indexed vertex (the base vertex used by assembly).

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(usize),
    #[error("simplex #{index} has {found} vertices, expected {expected}")]
    WrongArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("simplex #{index} references vertex {vertex}, but there are only {num_vertices} vertices")]
    OutOfRangeVertex {
        index: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("simplex #{index} repeats vertex {vertex}")]
    DuplicateVertexInSimplex { index: usize, vertex: usize },
    #[error("vertex {0} is not contained in any top simplex")]
    IsolatedVertex(usize),
    #[error("complex has no top simplices")]
    Empty,
}

/// Faces of every dimension together with their n-stars.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceIndex {
    /// `faces_by_dim[p]` holds the sorted, deduplicated p-faces.
    pub faces_by_dim: Vec<Vec<Vec<usize>>>,
    star_n: HashMap<Vec<usize>, Vec<usize>>,
}

impl FaceIndex {
    /// Indices (into [`SimplicialComplex::simplices`]) of the top simplices
    /// containing `face`. Empty if `face` is not a face of the complex.
    pub fn star(&self, face: &[usize]) -> &[usize] {
        self.star_n.get(face).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, p: usize) -> usize {
        self.faces_by_dim.get(p).map_or(0, Vec::len)
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.faces_by_dim[1]
    }
}

/// A pure simplicial complex of dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    dimension: usize,
    num_vertices: usize,
    simplices: Vec<Vec<usize>>,
    faces: FaceIndex,
}

impl SimplicialComplex {
    /// Canonicalizes the input: each simplex is sorted, duplicates removed and
    /// the list ordered lexicographically.
    pub fn new(
        dimension: usize,
        num_vertices: usize,
        top_simplices: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        if dimension == 0 {
            return Err(ComplexError::InvalidDimension(0));
        }
        let mut set = BTreeSet::new();
        for (index, mut s) in top_simplices.into_iter().enumerate() {
            if s.len() != dimension + 1 {
                return Err(ComplexError::WrongArity {
                    index,
                    expected: dimension + 1,
                    found: s.len(),
                });
            }
            if let Some(&vertex) = s.iter().find(|&&v| v >= num_vertices) {
                return Err(ComplexError::OutOfRangeVertex {
                    index,
                    vertex,
                    num_vertices,
                });
            }
            s.sort_unstable();
            if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
                return Err(ComplexError::DuplicateVertexInSimplex {
                    index,
                    vertex: w[0],
                });
            }
            set.insert(s);
        }
        if set.is_empty() {
            return Err(ComplexError::Empty);
        }
        let simplices: Vec<Vec<usize>> = set.into_iter().collect();

        let mut used = vec![false; num_vertices];
        for s in &simplices {
            for &v in s {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(ComplexError::IsolatedVertex(v));
        }

        let faces = enumerate_faces_of(dimension, &simplices);
        Ok(Self {
            dimension,
            num_vertices,
            simplices,
            faces,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Top simplices in lexicographic order.
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn faces(&self) -> &FaceIndex {
        &self.faces
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        self.faces.edges()
    }

    /// Alternating sum of face counts.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dimension)
            .map(|p| {
                let c = self.faces.count(p) as i64;
                if p % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Applies a vertex relabeling `v -> perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, ComplexError> {
        let simplices = self
            .simplices
            .iter()
            .map(|s| s.iter().map(|&v| perm[v]).collect::<Vec<_>>());
        Self::new(self.dimension, self.num_vertices, simplices)
    }
}

/// Recomputes the face index of `complex` from its top simplices.
pub fn enumerate_faces(complex: &SimplicialComplex) -> FaceIndex {
    enumerate_faces_of(complex.dimension, &complex.simplices)
}

fn enumerate_faces_of(dimension: usize, simplices: &[Vec<usize>]) -> FaceIndex {
    let mut star_n: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); dimension + 1];
    for (si, s) in simplices.iter().enumerate() {
        // every nonempty subset, as a bitmask over the n+1 vertices
        for mask in 1u32..(1u32 << s.len()) {
            let face: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &v)| v)
                .collect();
            by_dim[face.len() - 1].insert(face.clone());
            star_n.entry(face).or_default().push(si);
        }
    }
    FaceIndex {
        faces_by_dim: by_dim.into_iter().map(|s| s.into_iter().collect()).collect(),
        star_n,
    }
}

/// A codimension-one face whose n-star does not have exactly two members.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadFacet {
    pub face: Vec<usize>,
    pub star_size: usize,
}

/// Vertex whose link is not a single cycle (surfaces only).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadVertexLink {
    pub vertex: usize,
    pub components: usize,
    pub max_degree: usize,
    pub min_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosednessReport {
    pub bad_facets: Vec<BadFacet>,
    /// `false` when the complex is not 2-dimensional.
    pub vertex_links_checked: bool,
    pub bad_vertex_links: Vec<BadVertexLink>,
}

impl ClosednessReport {
    pub fn is_closed(&self) -> bool {
        self.bad_facets.is_empty() && self.bad_vertex_links.is_empty()
    }
}

/// Combinatorial closed-pseudomanifold test: every (n-1)-face lies in exactly
/// two top simplices and, for surfaces, the link of every vertex is one cycle.
pub fn check_closed_pseudomanifold(complex: &SimplicialComplex) -> ClosednessReport {
    let n = complex.dimension();
    let faces = complex.faces();
    let bad_facets = faces.faces_by_dim[n - 1]
        .iter()
        .filter_map(|f| {
            let star_size = faces.star(f).len();
            (star_size != 2).then(|| BadFacet {
                face: f.clone(),
                star_size,
            })
        })
        .collect();

    let mut bad_vertex_links = Vec::new();
    let vertex_links_checked = n == 2;
    if vertex_links_checked {
        for v in 0..complex.num_vertices() {
            if let Some(bad) = check_vertex_link(complex, v) {
                bad_vertex_links.push(bad);
            }
        }
    }
    ClosednessReport {
        bad_facets,
        vertex_links_checked,
        bad_vertex_links,
    }
}

fn check_vertex_link(complex: &SimplicialComplex, v: usize) -> Option<BadVertexLink> {
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for &si in complex.faces().star(&[v]) {
        let opposite: Vec<usize> = complex.simplices()[si]
            .iter()
            .copied()
            .filter(|&w| w != v)
            .collect();
        adjacency.entry(opposite[0]).or_default().push(opposite[1]);
        adjacency.entry(opposite[1]).or_default().push(opposite[0]);
    }
    let max_degree = adjacency.values().map(Vec::len).max().unwrap_or(0);
    let min_degree = adjacency.values().map(Vec::len).min().unwrap_or(0);

    let mut components = 0;
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut keys: Vec<usize> = adjacency.keys().copied().collect();
    keys.sort_unstable();
    for start in keys {
        if !seen.insert(start) {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &adjacency[&u] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    let is_cycle = components == 1 && max_degree == 2 && min_degree == 2;
    (!is_cycle).then_some(BadVertexLink {
        vertex: v,
        components,
        max_degree,
        min_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra_boundary() -> SimplicialComplex {
        SimplicialComplex::new(
            2,
            4,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn single_triangle() {
        let c = SimplicialComplex::new(2, 3, vec![vec![2, 0, 1]]).unwrap();
        assert_eq!(c.simplices(), &[vec![0, 1, 2]]);
        let f = c.faces();
        assert_eq!((f.count(0), f.count(1), f.count(2)), (3, 3, 1));
        for e in f.edges() {
            assert_eq!(f.star(e).len(), 1);
        }
        let report = check_closed_pseudomanifold(&c);
        assert!(!report.is_closed());
        assert_eq!(report.bad_facets.len(), 3);
    }

    #[test]
    fn tetrahedron_boundary_is_closed() {
        let c = tetra_boundary();
        let f = c.faces();
        assert_eq!((f.count(0), f.count(1), f.count(2)), (4, 6, 4));
        assert!(f.edges().iter().all(|e| f.star(e).len() == 2));
        assert_eq!(c.euler_characteristic(), 2);
        assert!(check_closed_pseudomanifold(&c).is_closed());
    }

    #[test]
    fn malformed_input() {
        assert_eq!(
            SimplicialComplex::new(2, 3, vec![vec![0, 1, 1]]),
            Err(ComplexError::DuplicateVertexInSimplex { index: 0, vertex: 1 })
        );
        assert!(matches!(
            SimplicialComplex::new(2, 3, vec![vec![0, 1, 3]]),
            Err(ComplexError::OutOfRangeVertex { vertex: 3, .. })
        ));
        assert!(matches!(
            SimplicialComplex::new(2, 3, vec![vec![0, 1]]),
            Err(ComplexError::WrongArity { expected: 3, found: 2, .. })
        ));
        assert_eq!(
            SimplicialComplex::new(2, 4, vec![vec![0, 1, 2]]),
            Err(ComplexError::IsolatedVertex(3))
        );
        assert_eq!(
            SimplicialComplex::new(2, 0, Vec::<Vec<usize>>::new()),
            Err(ComplexError::Empty)
        );
    }

    #[test]
    fn duplicate_simplices_are_merged() {
        let c = SimplicialComplex::new(2, 3, vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        assert_eq!(c.simplices().len(), 1);
    }

    #[test]
    fn bowtie_vertex_link_is_not_a_cycle() {
        // two triangles glued along {1,2}, third touching only vertex 3
        let c = SimplicialComplex::new(2, 6, vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4, 5]])
            .unwrap();
        let report = check_closed_pseudomanifold(&c);
        assert!(!report.is_closed());
        let v3 = report
            .bad_vertex_links
            .iter()
            .find(|b| b.vertex == 3)
            .expect("vertex 3 flagged");
        // link of 3 is the disjoint edges {1,2} and {4,5}
        assert_eq!(v3.components, 2);
        assert_eq!(v3.max_degree, 1);
    }

    #[test]
    fn one_dimensional_cycle() {
        let c = SimplicialComplex::new(1, 4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]])
            .unwrap();
        let report = check_closed_pseudomanifold(&c);
        assert!(report.is_closed());
        assert!(!report.vertex_links_checked);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn enumerate_faces_is_order_independent() {
        let a = tetra_boundary();
        let b = SimplicialComplex::new(
            2,
            4,
            vec![vec![3, 2, 1], vec![0, 3, 2], vec![1, 0, 3], vec![2, 0, 1]],
        )
        .unwrap();
        assert_eq!(enumerate_faces(&a), enumerate_faces(&b));
        assert_eq!(enumerate_faces(&a), *a.faces());
    }
}
