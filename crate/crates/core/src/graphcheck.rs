//! Verification of matchstick-graph properties: vertex degrees, girth, unit
//! edge lengths, crossing-free drawing with positive clearance, and point
//! symmetry.
//!
//! Everything operates on an immutable [`Embedding`] and reports measured
//! values; nothing here mutates or repairs a drawing.

use crate::construct::{Embedding, SymmetrySpec};
use crate::geom::{self, Coord, SegmentRelation};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet, VecDeque};
use thiserror::Error;

/// Tolerances and structural requirements used by [`verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    /// Maximum allowed |length - 1| on unit-constrained edges (and on the
    /// closing edge once solved).
    pub unit_tol: f64,
    /// Verification fails when the minimum clearance is at or below this;
    /// distinguishes genuine contacts from floating-point fuzz.
    pub clearance_floor: f64,
    /// Degree every vertex must have.
    pub required_degree: u32,
    /// Girth the graph must have.
    pub required_girth: u32,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            unit_tol: 1e-9,
            clearance_floor: 1e-6,
            required_degree: 3,
            required_girth: 5,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("symmetry mapping is not an involution: {reason}")]
    MappingNotInvolution { reason: String },
    #[error("embedding has no point named {name}")]
    UnknownPoint { name: String },
}

/// An edge pair whose drawing relation is forbidden in a matchstick graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingViolation {
    pub edge_a: (String, String),
    pub edge_b: (String, String),
    pub relation: SegmentRelation,
}

/// Crossing violations plus the minimum clearance between non-incident
/// features. `min_clearance` is `None` when the embedding has no nonadjacent
/// vertex pairs and no vertex/non-incident-edge pairs to measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub crossings: Vec<CrossingViolation>,
    pub min_clearance: Option<f64>,
}

/// Unit-length deviations: the worst |length - 1| over unit-constrained edges
/// and the closing edge's actual length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitLengthReport {
    pub max_unit_deviation: f64,
    pub closing_length: Option<f64>,
}

/// Aggregated verification outcome. `girth` and `min_clearance` are `None`
/// when undefined (acyclic graph, nothing to measure); `symmetry_residual` is
/// `None` when the embedding carries no symmetry declaration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub degree_histogram: BTreeMap<u32, usize>,
    pub girth: Option<u32>,
    pub max_unit_deviation: f64,
    pub closing_length: Option<f64>,
    pub crossings: Vec<CrossingViolation>,
    pub min_clearance: Option<f64>,
    pub symmetry_residual: Option<f64>,
    pub passed: bool,
}

/// Degree of every vertex, in point order. Isolated vertices count 0.
pub fn vertex_degrees(e: &Embedding) -> IndexMap<String, u32> {
    let mut degrees: IndexMap<String, u32> = e.points.keys().map(|k| (k.clone(), 0)).collect();
    for (a, b) in &e.edges {
        for end in [a, b] {
            if let Some(d) = degrees.get_mut(end) {
                *d += 1;
            }
        }
    }
    degrees
}

/// Histogram degree -> number of vertices with that degree.
pub fn degrees(e: &Embedding) -> BTreeMap<u32, usize> {
    let mut histogram = BTreeMap::new();
    for (_, d) in vertex_degrees(e) {
        *histogram.entry(d).or_insert(0) += 1;
    }
    histogram
}

/// Length of the shortest cycle, or `None` for acyclic graphs.
///
/// Runs a BFS from every vertex; a non-tree adjacency from `u` to `w` closes
/// a walk of length `dist(u) + dist(w) + 1`, which never undercuts the girth,
/// and the BFS rooted on a shortest cycle measures it exactly.
pub fn girth(e: &Embedding) -> Option<u32> {
    let index: IndexMap<&str, usize> = e
        .points
        .keys()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();
    let n = index.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in &e.edges {
        let (ia, ib) = (index[a.as_str()], index[b.as_str()]);
        adj[ia].push(ib);
        adj[ib].push(ia);
    }

    let mut best: Option<u32> = None;
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for start in 0..n {
        dist.fill(u32::MAX);
        parent.fill(usize::MAX);
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if w != parent[u] {
                    let cycle = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| cycle < b) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    best
}

/// Worst |length - 1| over unit-constrained edges, plus the closing length.
pub fn unit_length_report(e: &Embedding) -> UnitLengthReport {
    let mut max_unit_deviation: f64 = 0.0;
    for (a, b) in e.unit_edges() {
        if let (Some(pa), Some(pb)) = (e.coord(a), e.coord(b)) {
            max_unit_deviation = max_unit_deviation.max((geom::distance(pa, pb) - 1.0).abs());
        }
    }
    UnitLengthReport {
        max_unit_deviation,
        closing_length: e.closing_length(),
    }
}

/// Classifies every edge pair and measures the clearance between non-incident
/// features. Edges may share endpoints (that is how a graph works); proper
/// crossings, endpoints in the interior of another edge, and collinear
/// overlaps are violations.
pub fn crossing_report(e: &Embedding) -> CrossingReport {
    let segs: Vec<(&str, &str, Coord, Coord)> = e
        .edges
        .iter()
        .filter_map(|(a, b)| Some((a.as_str(), b.as_str(), e.coord(a)?, e.coord(b)?)))
        .collect();

    let mut crossings = Vec::new();
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            let (a1, a2, pa1, pa2) = segs[i];
            let (b1, b2, pb1, pb2) = segs[j];
            let relation = geom::segment_relation(pa1, pa2, pb1, pb2);
            if relation.is_violation() {
                crossings.push(CrossingViolation {
                    edge_a: (a1.to_string(), a2.to_string()),
                    edge_b: (b1.to_string(), b2.to_string()),
                    relation,
                });
            }
        }
    }

    let adjacent: HashSet<(&str, &str)> = e
        .edges
        .iter()
        .flat_map(|(a, b)| [(a.as_str(), b.as_str()), (b.as_str(), a.as_str())])
        .collect();
    let mut min_clearance: Option<f64> = None;
    let mut note = |d: f64| {
        if min_clearance.is_none_or(|m| d < m) {
            min_clearance = Some(d);
        }
    };
    let points: Vec<(&str, Coord)> = e.points.iter().map(|(k, c)| (k.as_str(), *c)).collect();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if !adjacent.contains(&(points[i].0, points[j].0)) {
                note(geom::distance(points[i].1, points[j].1));
            }
        }
    }
    for &(name, p) in &points {
        for &(a, b, pa, pb) in &segs {
            if name != a && name != b {
                note(geom::point_segment_distance(p, pa, pb));
            }
        }
    }

    CrossingReport {
        crossings,
        min_clearance,
    }
}

/// Worst distance between the point-reflected image of a vertex and the
/// position of its mapped partner, over all vertices. Zero means the drawing
/// is exactly point-symmetric under the declared permutation.
pub fn symmetry_residual(e: &Embedding, spec: &SymmetrySpec) -> Result<f64, CheckError> {
    let anchor = |name: &str| {
        e.coord(name).ok_or(CheckError::UnknownPoint {
            name: name.to_string(),
        })
    };
    let center = anchor(&spec.anchor_a)?.midpoint(anchor(&spec.anchor_b)?);

    for (from, to) in &spec.mapping {
        let back = spec.mapping.get(to);
        if back != Some(from) {
            return Err(CheckError::MappingNotInvolution {
                reason: format!(
                    "{from} maps to {to}, but {to} maps to {}",
                    back.map_or("nothing", |s| s.as_str())
                ),
            });
        }
    }

    let mut residual: f64 = 0.0;
    for (name, &p) in &e.points {
        let Some(partner) = spec.mapping.get(name) else {
            return Err(CheckError::MappingNotInvolution {
                reason: format!("vertex {name} is not mapped"),
            });
        };
        let Some(q) = e.coord(partner) else {
            return Err(CheckError::UnknownPoint {
                name: partner.clone(),
            });
        };
        residual = residual.max(geom::distance(geom::point_reflect(p, center), q));
    }
    Ok(residual)
}

/// Runs every check and aggregates the outcome.
///
/// `passed` requires: every degree equals `required_degree`, girth equals
/// `required_girth`, all unit-constrained edges within `unit_tol` of length 1,
/// the closing edge (when present) within `unit_tol` of length 1, zero
/// crossing violations, and clearance above `clearance_floor`. The symmetry
/// residual is reported but does not gate `passed`; embeddings loaded from
/// JSON carry no symmetry declaration, and the structural checks stand alone.
pub fn verify(e: &Embedding, config: &CheckConfig) -> VerificationReport {
    let degree_histogram = degrees(e);
    let girth_value = girth(e);
    let units = unit_length_report(e);
    let report = crossing_report(e);
    let symmetry = e
        .symmetry
        .as_ref()
        .and_then(|spec| symmetry_residual(e, spec).ok());

    let degrees_ok = degree_histogram
        .keys()
        .all(|&d| d == config.required_degree);
    let girth_ok = girth_value == Some(config.required_girth);
    let units_ok = units.max_unit_deviation <= config.unit_tol;
    let closing_ok = units
        .closing_length
        .is_none_or(|len| (len - 1.0).abs() <= config.unit_tol);
    let clearance_ok = report
        .min_clearance
        .is_none_or(|c| c > config.clearance_floor);
    let passed = degrees_ok
        && girth_ok
        && units_ok
        && closing_ok
        && report.crossings.is_empty()
        && clearance_ok;

    VerificationReport {
        vertex_count: e.points.len(),
        edge_count: e.edges.len(),
        degree_histogram,
        girth: girth_value,
        max_unit_deviation: units.max_unit_deviation,
        closing_length: units.closing_length,
        crossings: report.crossings,
        min_clearance: report.min_clearance,
        symmetry_residual: symmetry,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::SymmetrySpec;

    fn embedding(points: &[(&str, f64, f64)], edges: &[(&str, &str)]) -> Embedding {
        Embedding::from_parts(
            points
                .iter()
                .map(|&(n, x, y)| (n.to_string(), Coord::new(x, y))),
            edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())),
        )
    }

    fn cycle(n: usize) -> Embedding {
        let names: Vec<String> = (1..=n).map(|i| format!("P{i}")).collect();
        let points = names.iter().enumerate().map(|(i, name)| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (name.clone(), Coord::new(t.cos(), t.sin()))
        });
        let edges = (0..n).map(|i| (names[i].clone(), names[(i + 1) % n].clone()));
        Embedding::from_parts(points, edges)
    }

    #[test]
    fn degree_histograms() {
        let single = embedding(&[("A", 0.0, 0.0), ("B", 1.0, 0.0)], &[("A", "B")]);
        assert_eq!(degrees(&single), BTreeMap::from([(1, 2)]));

        let triangle = embedding(
            &[("A", 0.0, 0.0), ("B", 1.0, 0.0), ("C", 0.5, 0.8)],
            &[("A", "B"), ("B", "C"), ("C", "A")],
        );
        assert_eq!(degrees(&triangle), BTreeMap::from([(2, 3)]));
    }

    #[test]
    fn girth_examples() {
        let k4 = embedding(
            &[
                ("A", 0.0, 0.0),
                ("B", 1.0, 0.0),
                ("C", 0.5, 1.0),
                ("D", 0.5, 0.4),
            ],
            &[
                ("A", "B"),
                ("A", "C"),
                ("A", "D"),
                ("B", "C"),
                ("B", "D"),
                ("C", "D"),
            ],
        );
        assert_eq!(girth(&k4), Some(3));
        assert_eq!(girth(&cycle(6)), Some(6));

        let path = embedding(
            &[("A", 0.0, 0.0), ("B", 1.0, 0.0), ("C", 2.0, 0.0)],
            &[("A", "B"), ("B", "C")],
        );
        assert_eq!(girth(&path), None);
    }

    #[test]
    fn unit_lengths_of_a_square() {
        let square = embedding(
            &[
                ("A", 0.0, 0.0),
                ("B", 1.0, 0.0),
                ("C", 1.0, 1.0),
                ("D", 0.0, 1.0),
            ],
            &[("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")],
        );
        let report = unit_length_report(&square);
        assert_eq!(report.max_unit_deviation, 0.0);
        assert_eq!(report.closing_length, None);
    }

    #[test]
    fn crossing_segments_are_flagged() {
        let crossed = embedding(
            &[
                ("A", 0.0, 0.0),
                ("B", 1.0, 1.0),
                ("C", 0.0, 1.0),
                ("D", 1.0, 0.0),
            ],
            &[("A", "B"), ("C", "D")],
        );
        let report = crossing_report(&crossed);
        assert_eq!(report.crossings.len(), 1);
        assert_eq!(
            report.crossings[0].relation,
            SegmentRelation::ProperCrossing
        );
    }

    #[test]
    fn clearance_measures_nearest_nonincident_feature() {
        // Third vertex hovers 0.25 above the midpoint of edge A-B.
        let e = embedding(
            &[("A", 0.0, 0.0), ("B", 1.0, 0.0), ("C", 0.5, 0.25)],
            &[("A", "B")],
        );
        let report = crossing_report(&e);
        assert!(report.crossings.is_empty());
        assert!((report.min_clearance.unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn clearance_none_for_a_lone_edge() {
        let e = embedding(&[("A", 0.0, 0.0), ("B", 1.0, 0.0)], &[("A", "B")]);
        assert_eq!(crossing_report(&e).min_clearance, None);
    }

    #[test]
    fn crossing_report_invariant_under_rigid_motion() {
        let base = cycle(5);
        let (sin, cos) = 0.7f64.sin_cos();
        let moved = Embedding::from_parts(
            base.points.iter().map(|(k, c)| {
                (
                    k.clone(),
                    Coord::new(cos * c.x - sin * c.y + 3.0, sin * c.x + cos * c.y - 2.0),
                )
            }),
            base.edges.iter().cloned(),
        );
        let a = crossing_report(&base);
        let b = crossing_report(&moved);
        assert_eq!(a.crossings.len(), b.crossings.len());
        assert!((a.min_clearance.unwrap() - b.min_clearance.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn symmetry_residual_examples() {
        let mut edge = embedding(&[("A", 0.0, 0.0), ("B", 1.0, 0.0)], &[("A", "B")]);
        let swap = SymmetrySpec {
            anchor_a: "A".into(),
            anchor_b: "B".into(),
            mapping: IndexMap::from([("A".into(), "B".into()), ("B".into(), "A".into())]),
        };
        assert_eq!(symmetry_residual(&edge, &swap).unwrap(), 0.0);

        // Identity mapping on an asymmetric triangle: residual is twice the
        // largest distance from the reflection center.
        edge = embedding(
            &[("A", 0.0, 0.0), ("B", 1.0, 0.0), ("C", 0.3, 0.7)],
            &[("A", "B")],
        );
        let identity = SymmetrySpec {
            anchor_a: "A".into(),
            anchor_b: "B".into(),
            mapping: IndexMap::from([
                ("A".into(), "A".into()),
                ("B".into(), "B".into()),
                ("C".into(), "C".into()),
            ]),
        };
        let residual = symmetry_residual(&edge, &identity).unwrap();
        assert!(residual > 1.0);
    }

    #[test]
    fn symmetry_mapping_must_be_involution() {
        let e = embedding(
            &[("A", 0.0, 0.0), ("B", 1.0, 0.0), ("C", 2.0, 0.0)],
            &[("A", "B")],
        );
        let broken = SymmetrySpec {
            anchor_a: "A".into(),
            anchor_b: "B".into(),
            mapping: IndexMap::from([
                ("A".into(), "B".into()),
                ("B".into(), "C".into()),
                ("C".into(), "A".into()),
            ]),
        };
        assert!(matches!(
            symmetry_residual(&e, &broken),
            Err(CheckError::MappingNotInvolution { .. })
        ));

        let partial = SymmetrySpec {
            anchor_a: "A".into(),
            anchor_b: "B".into(),
            mapping: IndexMap::from([("A".into(), "B".into()), ("B".into(), "A".into())]),
        };
        assert!(matches!(
            symmetry_residual(&e, &partial),
            Err(CheckError::MappingNotInvolution { .. })
        ));
    }

    #[test]
    fn verify_unit_square_fails_structure() {
        let square = embedding(
            &[
                ("A", 0.0, 0.0),
                ("B", 1.0, 0.0),
                ("C", 1.0, 1.0),
                ("D", 0.0, 1.0),
            ],
            &[("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")],
        );
        let report = verify(&square, &CheckConfig::default());
        assert_eq!(report.girth, Some(4));
        assert_eq!(report.degree_histogram, BTreeMap::from([(2, 4)]));
        assert_eq!(report.max_unit_deviation, 0.0);
        assert!(!report.passed);
    }

    #[test]
    fn verify_report_serializes_round_trip() {
        let square = cycle(4);
        let report = verify(&square, &CheckConfig::default());
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }
}
