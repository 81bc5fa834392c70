//! Browser bindings: render basin tiles into an RGBA buffer and expose the
//! special-point reports for the overlay table.

use perdn_core::percurve::{pcf_json, pcf_solve_all, perd4_json, perd4_report, punctures_25, punctures_json};
use perdn_core::render::{render, RenderConfig};
use wasm_bindgen::prelude::*;

/// Render the basin picture into an RGBA byte buffer (width * height * 4).
#[wasm_bindgen]
pub fn render_tile(
    width: usize,
    height: usize,
    maxiter: u32,
    eps_attract: f64,
    offset_a: f64,
    offset_b: f64,
    span_a: f64,
    span_b: f64,
    overlays: bool,
) -> Vec<u8> {
    let cfg = RenderConfig {
        width,
        height,
        maxiter,
        eps_attract,
        offset: (offset_a, offset_b),
        span: (span_a, span_b),
        overlay_punctures: overlays,
        overlay_pcf: overlays,
    };
    let img = render(&cfg);
    let mut rgba = Vec::with_capacity(width * height * 4);
    for px in img.data.chunks(3) {
        rgba.extend_from_slice(px);
        rgba.push(255);
    }
    rgba
}

/// Exact puncture report as JSON.
#[wasm_bindgen]
pub fn punctures_report() -> String {
    match punctures_25() {
        Ok(ps) => punctures_json(&ps).to_string(),
        Err(e) => format!("{{\"error\": \"{}\"}}", e),
    }
}

/// Fully critical cycle points as JSON.
#[wasm_bindgen]
pub fn pcf_report() -> String {
    match pcf_solve_all() {
        Ok(ps) => pcf_json(&ps).to_string(),
        Err(e) => format!("{{\"error\": \"{}\"}}", e),
    }
}

/// Period-4 family summary for one degree as JSON.
#[wasm_bindgen]
pub fn genus_report(d: usize) -> String {
    match perd4_report(d) {
        Ok(r) => perd4_json(&r).to_string(),
        Err(e) => format!("{{\"error\": \"{}\"}}", e),
    }
}
