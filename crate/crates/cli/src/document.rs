//! JSON documents: cellulations with angles, realizations, circle
//! configurations.

use std::collections::{BTreeMap, HashMap};

use hyperideal_core::circles::{ArcKind, CircleConfig, Color, Provenance};
use hyperideal_core::combinatorics::{build_cellulation, Cellulation};
use hyperideal_core::mink::{ip, klein_to_lift, PointClass, Plane, Vec3};
use hyperideal_core::solver::Realization;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = concat!("hyperideal ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellulationDocument {
    pub vertices: Vec<u64>,
    pub faces: Vec<Vec<u64>>,
    #[serde(default)]
    pub ideal: Vec<u64>,
    #[serde(default)]
    pub angles: BTreeMap<String, f64>,
}

/// Undirected edge key `"min-max"`.
pub fn edge_key(a: u64, b: u64) -> String {
    format!("{}-{}", a.min(b), a.max(b))
}

fn parse_key(key: &str) -> Option<(u64, u64)> {
    let (a, b) = key.split_once('-')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// A cellulation with its vertex ids; vertex indices follow ascending ids.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub sigma: Cellulation,
    pub ids: Vec<u64>,
    /// Angles indexed like `sigma.edges()`, when the document has any.
    pub angles: Option<Vec<f64>>,
}

impl Parsed {
    pub fn edge_id_key(&self, e: usize) -> String {
        let (a, b) = self.sigma.edges()[e];
        edge_key(self.ids[a], self.ids[b])
    }
}

impl CellulationDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn parse(&self) -> Result<Parsed> {
        let mut ids = self.vertices.clone();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Parse("duplicate vertex id".into()));
        }
        let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let lookup = |v: &u64| index.get(v).copied().ok_or_else(|| CliError::Parse(format!("unknown vertex id {v}")));
        let faces: Vec<Vec<usize>> =
            self.faces.iter().map(|f| f.iter().map(lookup).collect::<Result<_>>()).collect::<Result<_>>()?;
        let ideal: Vec<usize> = self.ideal.iter().map(lookup).collect::<Result<_>>()?;
        let sigma = build_cellulation(ids.len(), &faces, &ideal).map_err(|e| CliError::Parse(e.to_string()))?;
        let angles = if self.angles.is_empty() {
            None
        } else {
            let mut w = vec![f64::NAN; sigma.n_edges()];
            for (key, &value) in &self.angles {
                let (a, b) = parse_key(key).ok_or_else(|| CliError::Parse(format!("bad edge key {key:?}")))?;
                let (ia, ib) = (lookup(&a)?, lookup(&b)?);
                let e = sigma.edge(ia, ib).ok_or_else(|| CliError::Parse(format!("{key} is not an edge")))?;
                if !w[e].is_nan() {
                    return Err(CliError::Parse(format!("edge {key} given twice")));
                }
                w[e] = value;
            }
            if let Some(e) = w.iter().position(|x| x.is_nan()) {
                let (a, b) = sigma.edges()[e];
                return Err(CliError::Parse(format!("no angle for edge {}", edge_key(ids[a], ids[b]))));
            }
            Some(w)
        };
        Ok(Parsed { sigma, ids, angles })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: u64,
    /// `"ideal"` or `"hyperideal"`.
    pub class: String,
    /// Klein model coordinates.
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub vertices: Vec<u64>,
    /// Outward unit normal in de Sitter space.
    pub normal: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub iterations: usize,
    pub reduced_gradient: f64,
    pub length_mismatch: f64,
    pub shear: f64,
    pub gluing_mismatch: f64,
    pub coplanarity: f64,
    pub convexity: f64,
    pub max_angle_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationDocument {
    pub tool: String,
    pub vertices: Vec<VertexRecord>,
    pub faces: Vec<FaceRecord>,
    pub angles: BTreeMap<String, f64>,
    pub volume: f64,
    pub diagnostics: DiagnosticsRecord,
}

impl RealizationDocument {
    pub fn new(parsed: &Parsed, r: &Realization) -> Self {
        let sigma = &parsed.sigma;
        let vertices = r
            .vertices
            .iter()
            .enumerate()
            .map(|(v, p)| VertexRecord {
                id: parsed.ids[v],
                class: match p.class {
                    PointClass::Ideal => "ideal",
                    _ => "hyperideal",
                }
                .into(),
                position: [p.p.x, p.p.y, p.p.z],
            })
            .collect();
        let faces = r
            .faces
            .iter()
            .enumerate()
            .map(|(f, pl)| FaceRecord {
                vertices: sigma.face(f).iter().map(|&v| parsed.ids[v]).collect(),
                normal: [pl.n[0], pl.n[1], pl.n[2], pl.n[3]],
            })
            .collect();
        let angles = (0..sigma.n_edges()).map(|e| (parsed.edge_id_key(e), r.angles[e])).collect();
        let d = &r.diagnostics;
        RealizationDocument {
            tool: TOOL_VERSION.into(),
            vertices,
            faces,
            angles,
            volume: r.volume,
            diagnostics: DiagnosticsRecord {
                iterations: d.iterations,
                reduced_gradient: d.reduced_gradient,
                length_mismatch: d.length_mismatch,
                shear: d.shear,
                gluing_mismatch: d.gluing_mismatch,
                coplanarity: d.coplanarity,
                convexity: d.convexity,
                max_angle_error: d.max_angle_error,
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Exterior dihedral angles recomputed from the vertex coordinates and
    /// face cycles alone.
    pub fn remeasure(&self) -> Result<BTreeMap<String, f64>> {
        let pos: HashMap<u64, Vec3> =
            self.vertices.iter().map(|v| (v.id, Vec3::new(v.position[0], v.position[1], v.position[2]))).collect();
        let centroid = pos.values().fold(Vec3::zeros(), |a, p| a + p) / pos.len().max(1) as f64;
        let inside = klein_to_lift(&centroid);
        let at = |id: &u64| pos.get(id).copied().ok_or_else(|| CliError::Parse(format!("unknown vertex {id}")));
        let mut planes = Vec::with_capacity(self.faces.len());
        let mut edge_faces: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (f, face) in self.faces.iter().enumerate() {
            let k = face.vertices.len();
            if k < 3 {
                return Err(CliError::Parse(format!("face {f} has fewer than 3 vertices")));
            }
            let pick = [0, k / 3, (2 * k) / 3].map(|i| at(&face.vertices[i]).map(|p| klein_to_lift(&p)));
            let [a, b, c] = pick;
            let plane = Plane::through(&a?, &b?, &c?, &inside).map_err(|e| CliError::Parse(e.to_string()))?;
            planes.push(plane);
            for i in 0..k {
                let key = edge_key(face.vertices[i], face.vertices[(i + 1) % k]);
                edge_faces.entry(key).or_default().push(f);
            }
        }
        edge_faces
            .into_iter()
            .map(|(key, fs)| {
                if fs.len() != 2 {
                    return Err(CliError::Parse(format!("edge {key} is not shared by two faces")));
                }
                let c = ip(&planes[fs[0]].n, &planes[fs[1]].n).clamp(-1.0, 1.0);
                Ok((key, c.acos()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceRecord {
    /// `"face"` or `"vertex"`.
    pub kind: String,
    /// Face index, or vertex id.
    pub id: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleRecord {
    pub axis: [f64; 3],
    pub radius: f64,
    /// `"red"` or `"black"`.
    pub color: String,
    pub provenance: ProvenanceRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcRecord {
    pub a: usize,
    pub b: usize,
    /// `"black-black"`, `"red-black"` or `"red-red"`.
    pub kind: String,
    pub angle: f64,
    pub tangent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleConfigDocument {
    pub tool: String,
    pub circles: Vec<CircleRecord>,
    pub arcs: Vec<ArcRecord>,
}

impl CircleConfigDocument {
    pub fn new(ids: &[u64], c: &CircleConfig) -> Self {
        let circles = c
            .circles
            .iter()
            .map(|k| CircleRecord {
                axis: [k.axis.x, k.axis.y, k.axis.z],
                radius: k.radius,
                color: match k.color {
                    Color::Red => "red",
                    Color::Black => "black",
                }
                .into(),
                provenance: match k.provenance {
                    Provenance::Face(f) => ProvenanceRecord { kind: "face".into(), id: f as u64 },
                    Provenance::Vertex(v) => ProvenanceRecord { kind: "vertex".into(), id: ids[v] },
                },
            })
            .collect();
        let arcs = c
            .arcs
            .iter()
            .zip(&c.tangent)
            .map(|(a, &t)| ArcRecord {
                a: a.a,
                b: a.b,
                kind: match a.kind {
                    ArcKind::BlackBlack => "black-black",
                    ArcKind::RedBlack => "red-black",
                    ArcKind::RedRed => "red-red",
                }
                .into(),
                angle: a.angle,
                tangent: t,
            })
            .collect();
        CircleConfigDocument { tool: TOOL_VERSION.into(), circles, arcs }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}
