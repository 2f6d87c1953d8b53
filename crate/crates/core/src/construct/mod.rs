//! Construction scripts: step types, script execution, JSON serialization of
//! the resulting embeddings, and the bundled 54-vertex construction.
//!
//! A script builds a drawing incrementally. Each step either places a new
//! point at unit distance from existing ones (angle-anchored or as an
//! isosceles apex over an open base), copies a whole subgraph by point
//! reflection, or declares bookkeeping such as the closing edge and the solve
//! directive. Executing a script with concrete parameter values yields an
//! [`Embedding`]: named coordinates plus an edge list.

mod parse;

pub use parse::{parse_script, ParseError};

use crate::geom::{self, Coord, GeomError, Turn, COINCIDENCE_TOL};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

/// Source text of the bundled 54-vertex construction script.
pub const GRAPH54_SCRIPT: &str = include_str!("../../assets/graph54.msc");

/// The bundled construction: a 3-regular matchstick graph of girth 5 with 54
/// vertices and 81 edges, closed by solving the free angle `mu`.
pub fn builtin_graph54() -> Construction {
    parse_script(GRAPH54_SCRIPT).expect("bundled construction script parses")
}

/// An angle argument: literal degrees or a reference to a declared parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum AngleValue {
    Degrees(f64),
    Param(String),
}

/// One step of a construction script.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// `points p q`: seeds the drawing with `p` = (0,0) and `q` = (1,0) and
    /// the unit edge between them.
    InitialPoints { p: String, q: String },
    /// `edge a b`: unit edge between two already-placed points; fails if the
    /// placed distance is not 1.
    UnitEdge { a: String, b: String },
    /// `angle_edge new from base ref r angle v turn`: places `new` at unit
    /// distance from `base` so that the angle at `base` between the rays
    /// base->new and base->r equals `angle`; adds the edge base-new.
    AngleEdge {
        new: String,
        base: String,
        reference: String,
        angle: AngleValue,
        turn: Turn,
    },
    /// `apex new on a b side`: places `new` at unit distance from both `a`
    /// and `b` (isosceles apex over the open base a-b) and adds the edges
    /// new-a and new-b. The base itself stays unconnected.
    Apex {
        new: String,
        a: String,
        b: String,
        side: Turn,
    },
    /// `copy about a b map ...`: point-reflects every mapping source through
    /// the midpoint of the anchors `a` and `b`. Fresh targets are placed;
    /// targets that already exist must coincide with the reflected image.
    /// Images of all edges internal to the source set are added.
    Copy {
        anchor_a: String,
        anchor_b: String,
        mapping: Vec<(String, String)>,
    },
    /// `closing_edge a b`: an edge of initially unknown length, driven to the
    /// target length by the solver.
    ClosingEdge { a: String, b: String },
    /// `solve param target t bracket lo hi`: names the free parameter, the
    /// length the closing edge must reach, and the search bracket in degrees.
    SolveDirective {
        param: String,
        target: f64,
        bracket: (f64, f64),
    },
}

impl Step {
    /// The orientation slot of this step, if it carries one.
    pub fn turn(&self) -> Option<Turn> {
        match self {
            Step::AngleEdge { turn, .. } => Some(*turn),
            Step::Apex { side, .. } => Some(*side),
            _ => None,
        }
    }
}

/// Default value and allowed range of a declared parameter, in degrees.
/// A parameter is free when its range has positive width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub default: f64,
    pub range: (f64, f64),
}

impl ParamSpec {
    pub fn fixed(value: f64) -> Self {
        Self {
            default: value,
            range: (value, value),
        }
    }

    pub fn is_free(&self) -> bool {
        self.range.0 < self.range.1
    }
}

/// Point-symmetry declaration: the drawing should be invariant under a
/// 180-degree rotation about the midpoint of the two anchors, with vertices
/// permuted by `mapping`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrySpec {
    pub anchor_a: String,
    pub anchor_b: String,
    /// Vertex permutation stored with both directions present, so it can be
    /// checked as an involution.
    pub mapping: IndexMap<String, String>,
}

/// Declarations attached to a construction that are not steps: the symmetry
/// of the finished drawing and named rigid-half vertex lists.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metadata {
    pub symmetry: Option<SymmetrySpec>,
    pub rigid_halves: IndexMap<String, Vec<String>>,
}

/// The free parameter named by a solve directive, with its target closing
/// length and search bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTarget {
    pub param: String,
    pub target: f64,
    pub bracket: (f64, f64),
}

/// A parsed construction script.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub steps: Vec<Step>,
    pub parameters: IndexMap<String, ParamSpec>,
    pub metadata: Metadata,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExecError {
    #[error("unknown parameter {name}")]
    UnknownParameter { name: String },
    #[error("parameter {name} = {value} outside its declared range [{lo}, {hi}]")]
    ParameterOutOfRange {
        name: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("step {step}: point {name} is not defined")]
    UndefinedPoint { step: usize, name: String },
    #[error("step {step}: point {name} is already placed")]
    DuplicatePoint { step: usize, name: String },
    #[error("step {step}: edge {a}-{b} already exists")]
    DuplicateEdge { step: usize, a: String, b: String },
    #[error("step {step}: second closing edge")]
    DuplicateClosingEdge { step: usize },
    #[error("step {step}: edge {a}-{b} has length {length}, not unit")]
    EdgeNotUnit {
        step: usize,
        a: String,
        b: String,
        length: f64,
    },
    #[error("step {step}: apex {new} infeasible, bases {a} and {b} are {separation} apart")]
    ApexInfeasible {
        step: usize,
        new: String,
        a: String,
        b: String,
        separation: f64,
    },
    #[error("step {step}: copy image of {original} misses existing point {target} by {deviation}")]
    CopyAnchorMismatch {
        step: usize,
        original: String,
        target: String,
        deviation: f64,
    },
    #[error("step {step}: {source}")]
    Geom {
        step: usize,
        #[source]
        source: GeomError,
    },
}

impl Construction {
    /// The solve directive, if the script declares one.
    pub fn solve_target(&self) -> Option<SolveTarget> {
        self.steps.iter().find_map(|s| match s {
            Step::SolveDirective {
                param,
                target,
                bracket,
            } => Some(SolveTarget {
                param: param.clone(),
                target: *target,
                bracket: *bracket,
            }),
            _ => None,
        })
    }

    /// Default value for every declared parameter, in declaration order.
    pub fn default_params(&self) -> IndexMap<String, f64> {
        self.parameters
            .iter()
            .map(|(name, spec)| (name.clone(), spec.default))
            .collect()
    }

    /// Turn values of the orientation-carrying steps (angle edges and
    /// apexes), in step order.
    pub fn turns(&self) -> Vec<Turn> {
        self.steps.iter().filter_map(Step::turn).collect()
    }

    /// Copy of this construction with the orientation-carrying steps' turns
    /// replaced, in the order of [`Construction::turns`].
    ///
    /// Panics if `turns` does not match the number of orientation slots.
    pub fn with_turns(&self, turns: &[Turn]) -> Construction {
        let mut out = self.clone();
        let mut it = turns.iter();
        for step in &mut out.steps {
            match step {
                Step::AngleEdge { turn, .. } => {
                    *turn = *it.next().expect("one turn per orientation slot")
                }
                Step::Apex { side, .. } => {
                    *side = *it.next().expect("one turn per orientation slot")
                }
                _ => {}
            }
        }
        assert!(
            it.next().is_none(),
            "turn vector longer than the orientation slot count"
        );
        out
    }

    /// Executes the script with default parameter values.
    pub fn execute_default(&self) -> Result<Embedding, ExecError> {
        self.execute_with(&[])
    }

    /// Executes the script with the given parameter overrides applied on top
    /// of the declared defaults.
    pub fn execute_with(&self, overrides: &[(&str, f64)]) -> Result<Embedding, ExecError> {
        let mut values = self.default_params();
        for (name, value) in overrides {
            match values.get_mut(*name) {
                Some(slot) => *slot = *value,
                None => {
                    return Err(ExecError::UnknownParameter {
                        name: (*name).to_string(),
                    })
                }
            }
        }
        for (name, value) in &values {
            let (lo, hi) = self.parameters[name].range;
            if *value < lo || *value > hi {
                return Err(ExecError::ParameterOutOfRange {
                    name: name.clone(),
                    value: *value,
                    lo,
                    hi,
                });
            }
        }

        let mut exec = Executor::default();
        for (idx, step) in self.steps.iter().enumerate() {
            exec.apply(idx, step, &values)?;
        }

        let free_params = values
            .into_iter()
            .filter(|(name, _)| self.parameters[name].is_free())
            .collect();
        Ok(Embedding {
            points: exec.points,
            edges: exec.edges,
            closing: exec.closing,
            params: free_params,
            symmetry: self.metadata.symmetry.clone(),
        })
    }
}

#[derive(Default)]
struct Executor {
    points: IndexMap<String, Coord>,
    edges: Vec<(String, String)>,
    edge_set: HashSet<(String, String)>,
    closing: Option<(String, String)>,
}

impl Executor {
    fn coord(&self, step: usize, name: &str) -> Result<Coord, ExecError> {
        self.points
            .get(name)
            .copied()
            .ok_or(ExecError::UndefinedPoint {
                step,
                name: name.to_string(),
            })
    }

    fn place(&mut self, step: usize, name: &str, at: Coord) -> Result<(), ExecError> {
        if self.points.contains_key(name) {
            return Err(ExecError::DuplicatePoint {
                step,
                name: name.to_string(),
            });
        }
        self.points.insert(name.to_string(), at);
        Ok(())
    }

    fn edge_key(a: &str, b: &str) -> (String, String) {
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    }

    /// Adds the edge a-b. Returns false (without adding) when the edge exists
    /// and duplicates are tolerated, as for copy images landing on existing
    /// edges.
    fn add_edge(
        &mut self,
        step: usize,
        a: &str,
        b: &str,
        skip_duplicate: bool,
    ) -> Result<bool, ExecError> {
        if !self.edge_set.insert(Self::edge_key(a, b)) {
            if skip_duplicate {
                return Ok(false);
            }
            return Err(ExecError::DuplicateEdge {
                step,
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        self.edges.push((a.to_string(), b.to_string()));
        Ok(true)
    }

    fn apply(
        &mut self,
        idx: usize,
        step: &Step,
        values: &IndexMap<String, f64>,
    ) -> Result<(), ExecError> {
        match step {
            Step::InitialPoints { p, q } => {
                self.place(idx, p, Coord::new(0.0, 0.0))?;
                self.place(idx, q, Coord::new(1.0, 0.0))?;
                self.add_edge(idx, p, q, false)?;
            }
            Step::UnitEdge { a, b } => {
                let pa = self.coord(idx, a)?;
                let pb = self.coord(idx, b)?;
                let length = geom::distance(pa, pb);
                if (length - 1.0).abs() > COINCIDENCE_TOL {
                    return Err(ExecError::EdgeNotUnit {
                        step: idx,
                        a: a.clone(),
                        b: b.clone(),
                        length,
                    });
                }
                self.add_edge(idx, a, b, false)?;
            }
            Step::AngleEdge {
                new,
                base,
                reference,
                angle,
                turn,
            } => {
                let pb = self.coord(idx, base)?;
                let pr = self.coord(idx, reference)?;
                let degrees = match angle {
                    AngleValue::Degrees(v) => *v,
                    AngleValue::Param(name) => *values
                        .get(name)
                        .ok_or_else(|| ExecError::UnknownParameter { name: name.clone() })?,
                };
                let placed = geom::place_by_angle(pb, pr, degrees, *turn)
                    .map_err(|source| ExecError::Geom { step: idx, source })?;
                self.place(idx, new, placed)?;
                self.add_edge(idx, base, new, false)?;
            }
            Step::Apex { new, a, b, side } => {
                let pa = self.coord(idx, a)?;
                let pb = self.coord(idx, b)?;
                let placed = geom::circle_circle_intersection(pa, 1.0, pb, 1.0)
                    .map(|hit| hit.pick(*side))
                    .map_err(|err| match err {
                        GeomError::NoIntersection { center_dist, .. } => {
                            ExecError::ApexInfeasible {
                                step: idx,
                                new: new.clone(),
                                a: a.clone(),
                                b: b.clone(),
                                separation: center_dist,
                            }
                        }
                        GeomError::ConcentricDegenerate => ExecError::ApexInfeasible {
                            step: idx,
                            new: new.clone(),
                            a: a.clone(),
                            b: b.clone(),
                            separation: 0.0,
                        },
                        other => ExecError::Geom {
                            step: idx,
                            source: other,
                        },
                    })?;
                self.place(idx, new, placed)?;
                self.add_edge(idx, a, new, false)?;
                self.add_edge(idx, b, new, false)?;
            }
            Step::Copy {
                anchor_a,
                anchor_b,
                mapping,
            } => {
                let ca = self.coord(idx, anchor_a)?;
                let cb = self.coord(idx, anchor_b)?;
                let center = ca.midpoint(cb);
                let mut image: IndexMap<&str, &str> = IndexMap::new();
                for (src, dst) in mapping {
                    let reflected = geom::point_reflect(self.coord(idx, src)?, center);
                    match self.points.get(dst) {
                        Some(existing) => {
                            let deviation = geom::distance(reflected, *existing);
                            if deviation > COINCIDENCE_TOL {
                                return Err(ExecError::CopyAnchorMismatch {
                                    step: idx,
                                    original: src.clone(),
                                    target: dst.clone(),
                                    deviation,
                                });
                            }
                        }
                        None => self.place(idx, dst, reflected)?,
                    }
                    image.insert(src.as_str(), dst.as_str());
                }
                let snapshot = self.edges.clone();
                for (u, v) in &snapshot {
                    if let (Some(iu), Some(iv)) = (image.get(u.as_str()), image.get(v.as_str())) {
                        let (iu, iv) = (iu.to_string(), iv.to_string());
                        self.add_edge(idx, &iu, &iv, true)?;
                    }
                }
            }
            Step::ClosingEdge { a, b } => {
                if self.closing.is_some() {
                    return Err(ExecError::DuplicateClosingEdge { step: idx });
                }
                self.coord(idx, a)?;
                self.coord(idx, b)?;
                self.add_edge(idx, a, b, false)?;
                self.closing = Some((a.clone(), b.clone()));
            }
            Step::SolveDirective { .. } => {}
        }
        Ok(())
    }
}

/// A placed drawing: named coordinates, edges in creation order, the closing
/// edge (if any), and the free parameter values that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub points: IndexMap<String, Coord>,
    /// Includes the closing edge when one is declared.
    pub edges: Vec<(String, String)>,
    pub closing: Option<(String, String)>,
    pub params: IndexMap<String, f64>,
    /// Symmetry declaration carried over from the construction. Not part of
    /// the JSON serialization.
    pub symmetry: Option<SymmetrySpec>,
}

#[derive(Debug, Error)]
pub enum EmbeddingJsonError {
    #[error("invalid embedding JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge references unknown point {0}")]
    UnknownPoint(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("closing edge {0}-{1} is not in the edge list")]
    ClosingEdgeMissing(String, String),
}

#[derive(Deserialize)]
struct EmbeddingJson {
    points: IndexMap<String, (f64, f64)>,
    edges: Vec<(String, String)>,
    #[serde(default)]
    closing: Option<(String, String)>,
    #[serde(default)]
    params: IndexMap<String, f64>,
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out
}

/// 17 significant digits: enough to reproduce any f64 bit-exactly on parse.
fn json_num(v: f64) -> String {
    format!("{v:.16e}")
}

impl Embedding {
    /// Builds an embedding directly from coordinate and edge lists, with no
    /// closing edge, parameters, or symmetry attached.
    pub fn from_parts<P, E>(points: P, edges: E) -> Self
    where
        P: IntoIterator<Item = (String, Coord)>,
        E: IntoIterator<Item = (String, String)>,
    {
        Embedding {
            points: points.into_iter().collect(),
            edges: edges.into_iter().collect(),
            closing: None,
            params: IndexMap::new(),
            symmetry: None,
        }
    }

    pub fn coord(&self, name: &str) -> Option<Coord> {
        self.points.get(name).copied()
    }

    /// True when `a`-`b` is the closing edge, in either endpoint order.
    pub fn is_closing_edge(&self, a: &str, b: &str) -> bool {
        match &self.closing {
            Some((ca, cb)) => (ca == a && cb == b) || (ca == b && cb == a),
            None => false,
        }
    }

    /// Length of the closing edge, if one is declared.
    pub fn closing_length(&self) -> Option<f64> {
        let (a, b) = self.closing.as_ref()?;
        Some(geom::distance(self.coord(a)?, self.coord(b)?))
    }

    /// All edges that must have unit length, in creation order. This is every
    /// edge except the closing edge.
    pub fn unit_edges(&self) -> impl Iterator<Item = &(String, String)> {
        self.edges
            .iter()
            .filter(|(a, b)| !self.is_closing_edge(a, b))
    }

    /// Serializes to the embedding JSON format. Coordinates and parameter
    /// values are written with 17 significant digits, so parsing the output
    /// reproduces them bit-exactly.
    pub fn to_json_string(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"points\": {");
        for (i, (name, c)) in self.points.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str(&format!(
                "    \"{}\": [{}, {}]",
                json_escape(name),
                json_num(c.x),
                json_num(c.y)
            ));
        }
        out.push_str("\n  },\n  \"edges\": [");
        for (i, (a, b)) in self.edges.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str(&format!(
                "    [\"{}\", \"{}\"]",
                json_escape(a),
                json_escape(b)
            ));
        }
        out.push_str("\n  ],\n  \"closing\": ");
        match &self.closing {
            Some((a, b)) => {
                out.push_str(&format!("[\"{}\", \"{}\"]", json_escape(a), json_escape(b)))
            }
            None => out.push_str("null"),
        }
        out.push_str(",\n  \"params\": {");
        for (i, (name, value)) in self.params.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str(&format!(
                "    \"{}\": {}",
                json_escape(name),
                json_num(*value)
            ));
        }
        out.push_str("\n  }\n}\n");
        out
    }

    /// Parses the embedding JSON format and validates its referential
    /// integrity. The symmetry declaration is not part of the format, so the
    /// result carries none.
    pub fn from_json_str(text: &str) -> Result<Self, EmbeddingJsonError> {
        let raw: EmbeddingJson = serde_json::from_str(text)?;
        let mut seen: HashSet<(String, String)> = HashSet::new();
        for (a, b) in &raw.edges {
            for end in [a, b] {
                if !raw.points.contains_key(end) {
                    return Err(EmbeddingJsonError::UnknownPoint(end.clone()));
                }
            }
            if !seen.insert(Executor::edge_key(a, b)) {
                return Err(EmbeddingJsonError::DuplicateEdge(a.clone(), b.clone()));
            }
        }
        if let Some((a, b)) = &raw.closing {
            if !seen.contains(&Executor::edge_key(a, b)) {
                return Err(EmbeddingJsonError::ClosingEdgeMissing(a.clone(), b.clone()));
            }
        }
        Ok(Embedding {
            points: raw
                .points
                .into_iter()
                .map(|(name, (x, y))| (name, Coord::new(x, y)))
                .collect(),
            edges: raw.edges,
            closing: raw.closing,
            params: raw.params,
            symmetry: None,
        })
    }
}
