//! Browser bindings for the static demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON document.

use serde::Serialize;
use serde_json::json;
use twisted_h1::alcove::AlcoveContext;
use twisted_h1::lattice::{fmt_q_vec, parse_q_vec, Q};
use twisted_h1::{
    diagram_automorphism, DiagramAutomorphism, Family, H1Context, Isogeny, Method, RootDatum,
};
use wasm_bindgen::prelude::*;

fn automorphism(
    family: &str,
    rank: usize,
    isogeny: &str,
    tau_order: u32,
) -> Result<DiagramAutomorphism, String> {
    let family: Family = family
        .parse()
        .map_err(|e: twisted_h1::Error| e.to_string())?;
    let isogeny: Isogeny = isogeny
        .parse()
        .map_err(|e: twisted_h1::Error| e.to_string())?;
    let d = RootDatum::build(family, rank, isogeny).map_err(|e| e.to_string())?;
    diagram_automorphism(&d, tau_order).map_err(|e| e.to_string())
}

fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Maps invariant coordinates of a rank 2 folded datum to the plane.
struct Plane {
    /// Rows: plane images of the fundamental coweights.
    coweights: [[f64; 2]; 2],
}

impl Plane {
    fn new(ctx: &AlcoveContext) -> Result<Self, String> {
        let a = ctx.folded().cartan();
        if a.len() != 2 {
            return Err(format!(
                "the picture needs a rank 2 folded datum, got rank {}",
                a.len()
            ));
        }
        let a = [
            [a[0][0] as f64, a[0][1] as f64],
            [a[1][0] as f64, a[1][1] as f64],
        ];
        // squared lengths of the coroots, symmetric up to scale
        let len = [1.0, a[1][0] / a[0][1]];
        let g = [
            [a[0][0] * len[0] / 2.0, a[0][1] * len[1] / 2.0],
            [a[1][0] * len[0] / 2.0, a[1][1] * len[1] / 2.0],
        ];
        let c0 = [g[0][0].sqrt(), 0.0];
        let c1x = g[0][1] / c0[0];
        let c1 = [c1x, (g[1][1] - c1x * c1x).sqrt()];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let inv = [
            [a[1][1] / det, -a[0][1] / det],
            [-a[1][0] / det, a[0][0] / det],
        ];
        let coweights = [0, 1].map(|j| [0, 1].map(|d| inv[j][0] * c0[d] + inv[j][1] * c1[d]));
        Ok(Plane { coweights })
    }

    fn project(&self, ctx: &AlcoveContext, x: &[Q]) -> [f64; 2] {
        let p: Vec<f64> = ctx
            .folded()
            .folded_simple_roots()
            .iter()
            .map(|b| b.iter().zip(x).map(|(&c, v)| c as f64 * to_f64(v)).sum())
            .collect();
        [0, 1].map(|d| p[0] * self.coweights[0][d] + p[1] * self.coweights[1][d])
    }
}

#[derive(Serialize)]
struct PicturePoint {
    point: Vec<String>,
    xy: [f64; 2],
    kac: Option<Vec<i64>>,
}

pub fn h1_summary_json(
    family: &str,
    rank: usize,
    isogeny: &str,
    tau_order: u32,
    m: u64,
) -> Result<String, String> {
    let da = automorphism(family, rank, isogeny, tau_order)?;
    let set = H1Context::new(&da, m)
        .and_then(|c| c.compute(Method::Auto))
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&set).map_err(|e| e.to_string())
}

pub fn alcove_picture_json(
    family: &str,
    rank: usize,
    isogeny: &str,
    tau_order: u32,
    m: u64,
) -> Result<String, String> {
    let da = automorphism(family, rank, isogeny, tau_order)?;
    let ctx = AlcoveContext::new(&da).map_err(|e| e.to_string())?;
    let plane = Plane::new(&ctx)?;
    let labels = ctx.folded().kac_labels().to_vec();
    let mut vertices = vec![[0.0, 0.0]];
    for (j, w) in ctx.coweights().iter().enumerate() {
        let scaled: Vec<Q> = w.iter().map(|x| *x / labels[j + 1]).collect();
        vertices.push(plane.project(&ctx, &scaled));
    }
    let adjoint = da.base().isogeny() == Isogeny::Adjoint;
    let points = ctx
        .alcove_points(m)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|p| PicturePoint {
            xy: plane.project(&ctx, &p.point),
            kac: adjoint
                .then(|| ctx.alcove_to_kac(m, &p.point).map(|k| k.s).ok())
                .flatten(),
            point: fmt_q_vec(&p.point),
        })
        .collect::<Vec<_>>();
    serde_json::to_string(&json!({
        "type": da.label(),
        "kac_labels": labels,
        "coweights": ctx.coweights().iter().map(|w| w.iter().map(to_f64).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "vertices": vertices,
        "points": points,
    }))
    .map_err(|e| e.to_string())
}

pub fn reduce_point_json(
    family: &str,
    rank: usize,
    isogeny: &str,
    tau_order: u32,
    point: &str,
) -> Result<String, String> {
    let da = automorphism(family, rank, isogeny, tau_order)?;
    let ctx = AlcoveContext::new(&da).map_err(|e| e.to_string())?;
    let x = parse_q_vec(point).map_err(|e| e.to_string())?;
    let red = ctx.reduce(&x).map_err(|e| e.to_string())?;
    let plane = Plane::new(&ctx).ok();
    serde_json::to_string(&json!({
        "input": fmt_q_vec(&x),
        "point": fmt_q_vec(&red.point),
        "translation": red.translation,
        "weyl": red.weyl.rows(),
        "steps": red.steps,
        "input_xy": plane.as_ref().map(|p| p.project(&ctx, &x)),
        "xy": plane.as_ref().map(|p| p.project(&ctx, &red.point)),
    }))
    .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn h1_summary(
    family: &str,
    rank: usize,
    isogeny: &str,
    tau_order: u32,
    m: u32,
) -> Result<String, JsValue> {
    h1_summary_json(family, rank, isogeny, tau_order, u64::from(m))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn alcove_picture(
    family: &str,
    rank: usize,
    isogeny: &str,
    tau_order: u32,
    m: u32,
) -> Result<String, JsValue> {
    alcove_picture_json(family, rank, isogeny, tau_order, u64::from(m))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn reduce_point(
    family: &str,
    rank: usize,
    isogeny: &str,
    tau_order: u32,
    point: &str,
) -> Result<String, JsValue> {
    reduce_point_json(family, rank, isogeny, tau_order, point).map_err(|e| JsValue::from_str(&e))
}
