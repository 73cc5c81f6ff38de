//! Output rows and documents. Column order is the field order below and is
//! part of the format; bump FORMAT_VERSION on any change.

use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantRow {
    pub format_version: u32,
    /// Torus-chart angles.
    pub s: f64,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub abs_a11: f64,
    pub re_q11: f64,
    pub im_q11: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusRow {
    pub format_version: u32,
    pub curve: usize,
    /// Curve kind; τ = ±1 curves of the b = a locus read
    /// `special_ba=gamma_plus` / `special_ba=gamma_minus`.
    pub kind: String,
    pub tau: Option<f64>,
    pub sign: Option<i8>,
    pub s0: Option<f64>,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
    pub rho: f64,
    /// |ϱ_ZZ(L,L)|, |𝒫| or |Q₁₁| according to the kind.
    pub defining_residual: f64,
    pub abs_q11: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub format_version: u32,
    pub component: usize,
    pub closed: bool,
    pub vertex: usize,
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
    pub rho_residual: f64,
    pub re_s: f64,
    pub im_s: f64,
    pub dist_gamma: f64,
    pub singular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantsDoc {
    pub format_version: u32,
    pub command: String,
    pub params: Params,
    pub grid: usize,
    pub rows: Vec<InvariantRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDoc {
    pub kind: String,
    pub tau: Option<f64>,
    pub sign: Option<i8>,
    pub s0: Option<f64>,
    pub samples: Vec<LocusRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusDoc {
    pub format_version: u32,
    pub command: String,
    pub params: Params,
    pub notice: Option<String>,
    pub curves: Vec<CurveDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub closed: bool,
    pub vertices: Vec<TraceRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub format_version: u32,
    pub command: String,
    pub params: Params,
    pub components: Vec<ComponentDoc>,
}
