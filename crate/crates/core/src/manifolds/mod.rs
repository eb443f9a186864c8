//! Closed model surfaces with known Laplace spectra, and triangulations of
//! them whose edge lengths are geodesic distances.

mod sphere;
mod torus;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex};
use crate::metric::MetricComplex;

pub use sphere::{generate_sphere_mesh, icosahedron, real_spherical_harmonic};
pub use torus::{generate_torus_mesh, torus_modes, TorusMode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ManifoldError {
    #[error("grid {m}x{k} is too coarse; both sides need at least 3 cells")]
    GridTooCoarse { m: usize, k: usize },
    #[error("eigenfunction ({cluster}, {member}) does not exist")]
    IndexOutOfRange { cluster: usize, member: usize },
    #[error("invalid manifold parameter: {0}")]
    InvalidParameter(String),
    #[error("point has {found} coordinates, expected {expected}")]
    WrongPointDimension { expected: usize, found: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A closed reference surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "snake_case")]
pub enum ModelManifold {
    /// Round sphere of the given radius, embedded in ℝ³ about the origin.
    Sphere { radius: f64 },
    /// ℝ²/(aℤ × bℤ) with the flat metric; points live in `[0,a) × [0,b)`.
    FlatTorus { periods: [f64; 2] },
}

/// One distinct eigenvalue and its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticCluster {
    pub eigenvalue: f64,
    pub multiplicity: usize,
}

impl ModelManifold {
    pub fn validate(&self) -> Result<(), ManifoldError> {
        let ok = match *self {
            Self::Sphere { radius } => radius > 0.0 && radius.is_finite(),
            Self::FlatTorus { periods: [a, b] } => {
                a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(ManifoldError::InvalidParameter(format!("{self:?}")))
        }
    }

    pub fn dimension(&self) -> usize {
        2
    }

    /// Number of coordinates of a point.
    pub fn point_dimension(&self) -> usize {
        match self {
            Self::Sphere { .. } => 3,
            Self::FlatTorus { .. } => 2,
        }
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            Self::Sphere { radius } => std::f64::consts::PI * radius,
            Self::FlatTorus { periods: [a, b] } => 0.5 * a.hypot(b),
        }
    }

    pub fn injectivity_radius(&self) -> f64 {
        match *self {
            Self::Sphere { radius } => std::f64::consts::PI * radius,
            Self::FlatTorus { periods: [a, b] } => 0.5 * a.min(b),
        }
    }

    /// Upper bound on the absolute sectional curvature.
    pub fn curvature_bound(&self) -> f64 {
        match *self {
            Self::Sphere { radius } => 1.0 / (radius * radius),
            Self::FlatTorus { .. } => 0.0,
        }
    }

    /// Scale-free curvature parameter `Λ` with `diameter² · |K| ≤ Λ²`.
    pub fn normalized_curvature(&self) -> f64 {
        self.diameter() * self.curvature_bound().sqrt()
    }

    pub fn geodesic_distance(&self, p: &[f64], q: &[f64]) -> f64 {
        match *self {
            Self::Sphere { radius } => {
                let dot = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
                let cross = [
                    p[1] * q[2] - p[2] * q[1],
                    p[2] * q[0] - p[0] * q[2],
                    p[0] * q[1] - p[1] * q[0],
                ];
                let sin = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
                // atan2 is accurate for nearby points, where acos loses digits
                radius * sin.atan2(dot)
            }
            Self::FlatTorus { periods: [a, b] } => {
                let mut best = f64::INFINITY;
                for sx in [-1.0, 0.0, 1.0] {
                    for sy in [-1.0, 0.0, 1.0] {
                        let dx = q[0] - p[0] + sx * a;
                        let dy = q[1] - p[1] + sy * b;
                        best = best.min(dx.hypot(dy));
                    }
                }
                best
            }
        }
    }

    /// The first `count` distinct Laplace eigenvalues with multiplicities.
    pub fn analytic_spectrum(&self, count: usize) -> Vec<AnalyticCluster> {
        match *self {
            Self::Sphere { radius } => (0..count)
                .map(|l| AnalyticCluster {
                    eigenvalue: (l * (l + 1)) as f64 / (radius * radius),
                    multiplicity: 2 * l + 1,
                })
                .collect(),
            Self::FlatTorus { periods } => torus_modes(periods, count)
                .into_iter()
                .map(|(eigenvalue, modes)| AnalyticCluster {
                    eigenvalue,
                    multiplicity: modes.iter().map(TorusMode::multiplicity).sum(),
                })
                .collect(),
        }
    }

    /// Member `member` of the `L²`-orthonormal real eigenbasis of analytic
    /// cluster `cluster`, evaluated at `point`.
    ///
    /// Sphere: real spherical harmonics, `member = m + l`. Torus: products of
    /// cosines and sines; see [`TorusMode`].
    pub fn eigenfunction(
        &self,
        cluster: usize,
        member: usize,
        point: &[f64],
    ) -> Result<f64, ManifoldError> {
        if point.len() != self.point_dimension() {
            return Err(ManifoldError::WrongPointDimension {
                expected: self.point_dimension(),
                found: point.len(),
            });
        }
        let out_of_range = ManifoldError::IndexOutOfRange { cluster, member };
        match *self {
            Self::Sphere { radius } => {
                if member > 2 * cluster {
                    return Err(out_of_range);
                }
                let m = member as i64 - cluster as i64;
                Ok(real_spherical_harmonic(cluster, m, point) / radius)
            }
            Self::FlatTorus { periods } => {
                let clusters = torus_modes(periods, cluster + 1);
                let (_, modes) = clusters.get(cluster).ok_or(out_of_range.clone())?;
                let mut rest = member;
                for mode in modes {
                    if rest < mode.multiplicity() {
                        return Ok(mode.evaluate(periods, rest, point));
                    }
                    rest -= mode.multiplicity();
                }
                Err(out_of_range)
            }
        }
    }
}

/// A triangulation of a model manifold: vertex positions on the manifold and
/// edge lengths equal to geodesic distances between them.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexedMesh {
    pub manifold: ModelManifold,
    pub metric: MetricComplex,
    pub positions: Vec<Vec<f64>>,
}

impl VertexedMesh {
    /// Sets every edge length to the geodesic distance of its endpoints.
    pub fn new(
        manifold: ModelManifold,
        complex: SimplicialComplex,
        positions: Vec<Vec<f64>>,
    ) -> Self {
        let metric = MetricComplex::from_fn(complex, |i, j| {
            manifold.geodesic_distance(&positions[i], &positions[j])
        });
        Self {
            manifold,
            metric,
            positions,
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.metric.complex()
    }

    pub fn num_vertices(&self) -> usize {
        self.positions.len()
    }

    /// Largest relative deviation between stored edge lengths and geodesic
    /// distances of the positions.
    pub fn max_edge_length_deviation(&self) -> f64 {
        self.metric
            .edge_lengths()
            .map(|(i, j, l)| {
                let d = self
                    .manifold
                    .geodesic_distance(&self.positions[i], &self.positions[j]);
                (l - d).abs() / d.abs().max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }

    /// Euclidean coordinates of the vertices of `simplex` in one chart, for
    /// flat tori: each vertex is moved to the periodic image nearest the
    /// first one. `None` on the sphere.
    pub fn flat_chart(&self, simplex: &[usize]) -> Option<Vec<Vec<f64>>> {
        let ModelManifold::FlatTorus { periods: [a, b] } = self.manifold else {
            return None;
        };
        let p0 = &self.positions[simplex[0]];
        Some(
            simplex
                .iter()
                .map(|&v| {
                    let p = &self.positions[v];
                    vec![
                        p[0] + a * ((p0[0] - p[0]) / a).round(),
                        p[1] + b * ((p0[1] - p[1]) / b).round(),
                    ]
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_distances() {
        let s = ModelManifold::Sphere { radius: 1.0 };
        assert!((s.geodesic_distance(&[0.0, 0.0, 1.0], &[0.0, 0.0, -1.0]) - PI).abs() < 1e-15);
        assert!((s.geodesic_distance(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]) - PI / 2.0).abs() < 1e-15);
        let s2 = ModelManifold::Sphere { radius: 2.0 };
        assert!((s2.geodesic_distance(&[2.0, 0.0, 0.0], &[0.0, 2.0, 0.0]) - PI).abs() < 1e-15);
    }

    #[test]
    fn torus_wraparound() {
        let t = ModelManifold::FlatTorus { periods: [2.0 * PI, 2.0 * PI] };
        let d = t.geodesic_distance(&[0.1, 0.0], &[2.0 * PI - 0.1, 0.0]);
        assert!((d - 0.2).abs() < 1e-14);
    }

    #[test]
    fn geometric_constants() {
        let s = ModelManifold::Sphere { radius: 2.0 };
        assert_eq!(s.diameter(), 2.0 * PI);
        assert_eq!(s.injectivity_radius(), 2.0 * PI);
        assert_eq!(s.curvature_bound(), 0.25);
        assert!((s.normalized_curvature() - PI).abs() < 1e-15);
        let t = ModelManifold::FlatTorus { periods: [3.0, 4.0] };
        assert_eq!(t.diameter(), 2.5);
        assert_eq!(t.injectivity_radius(), 1.5);
        assert_eq!(t.curvature_bound(), 0.0);
    }

    #[test]
    fn sphere_spectrum() {
        let s = ModelManifold::Sphere { radius: 1.0 };
        let spec: Vec<(f64, usize)> = s
            .analytic_spectrum(4)
            .iter()
            .map(|c| (c.eigenvalue, c.multiplicity))
            .collect();
        assert_eq!(spec, vec![(0.0, 1), (2.0, 3), (6.0, 5), (12.0, 7)]);
        let s2 = ModelManifold::Sphere { radius: 2.0 };
        assert_eq!(s2.analytic_spectrum(2)[1].eigenvalue, 0.5);
    }

    #[test]
    fn square_torus_spectrum() {
        let t = ModelManifold::FlatTorus { periods: [2.0 * PI, 2.0 * PI] };
        let spec: Vec<(f64, usize)> = t
            .analytic_spectrum(5)
            .iter()
            .map(|c| ((c.eigenvalue * 1e9).round() / 1e9, c.multiplicity))
            .collect();
        assert_eq!(spec, vec![(0.0, 1), (1.0, 4), (2.0, 4), (4.0, 4), (5.0, 8)]);
    }

    #[test]
    fn rectangular_torus_spectrum_matches_enumeration() {
        let t = ModelManifold::FlatTorus { periods: [2.0 * PI, 4.0 * PI] };
        // j² + k²/4 over all integer pairs, brute force
        let mut values: Vec<f64> = Vec::new();
        for j in -10i64..=10 {
            for k in -20i64..=20 {
                values.push((j * j) as f64 + (k * k) as f64 / 4.0);
            }
        }
        values.sort_by(f64::total_cmp);
        let mut brute: Vec<(f64, usize)> = Vec::new();
        for v in values {
            match brute.last_mut() {
                Some((last, count)) if *last == v => *count += 1,
                _ => brute.push((v, 1)),
            }
        }
        let spec = t.analytic_spectrum(8);
        for (c, (v, m)) in spec.iter().zip(&brute) {
            assert!((c.eigenvalue - v).abs() < 1e-12, "{c:?} vs {v}");
            assert_eq!(c.multiplicity, *m);
        }
        assert_eq!((spec[1].eigenvalue, spec[1].multiplicity), (0.25, 2));
    }

    #[test]
    fn constant_eigenfunctions() {
        let s = ModelManifold::Sphere { radius: 2.0 };
        let v = s.eigenfunction(0, 0, &[0.0, 2.0, 0.0]).unwrap();
        assert!((v - 1.0 / (4.0 * PI * 4.0).sqrt()).abs() < 1e-15);
        let t = ModelManifold::FlatTorus { periods: [3.0, 5.0] };
        let v = t.eigenfunction(0, 0, &[1.0, 2.0]).unwrap();
        assert!((v - 1.0 / 15f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zonal_harmonic_at_north_pole() {
        let s = ModelManifold::Sphere { radius: 1.0 };
        let values: Vec<f64> = (0..3)
            .map(|m| s.eigenfunction(1, m, &[0.0, 0.0, 1.0]).unwrap())
            .collect();
        assert_eq!(values.iter().filter(|v| v.abs() > 1e-15).count(), 1);
        assert!((values[1] - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn eigenfunction_index_errors() {
        let s = ModelManifold::Sphere { radius: 1.0 };
        assert_eq!(
            s.eigenfunction(1, 3, &[0.0, 0.0, 1.0]),
            Err(ManifoldError::IndexOutOfRange { cluster: 1, member: 3 })
        );
        let t = ModelManifold::FlatTorus { periods: [1.0, 1.0] };
        assert!(t.eigenfunction(1, 4, &[0.0, 0.0]).is_err());
        assert!(t.eigenfunction(1, 3, &[0.0, 0.0]).is_ok());
        assert!(matches!(
            t.eigenfunction(0, 0, &[0.0, 0.0, 0.0]),
            Err(ManifoldError::WrongPointDimension { .. })
        ));
    }
}
