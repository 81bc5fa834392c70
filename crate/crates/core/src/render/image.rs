//! Batch renderer: per-pixel lattice point to configuration to basin
//! classification, with optional markers for the special points, written as
//! binary PPM. The per-pixel computation is pure, so the output is
//! bit-identical across runs and thread counts.

use super::classify::{classify, Classification};
use super::param::{plane_point, ParamPoint, ParamSolver};
use crate::elliptic::{periods, Lattice, WeierstrassCurve};
use crate::exactnum::Cx;
use crate::moduli::PointP1;
use crate::percurve::diagonal::diagonal_system;
use crate::percurve::dynmap::DynMap;

#[derive(Clone, Debug)]
pub struct RenderConfig {
    pub width: usize,
    pub height: usize,
    pub maxiter: u32,
    pub eps_attract: f64,
    /// offset of the parallelogram corner in lattice coordinates
    pub offset: (f64, f64),
    /// how many fundamental cells to span in each lattice direction
    pub span: (f64, f64),
    pub overlay_punctures: bool,
    pub overlay_pcf: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            width: 512,
            height: 512,
            maxiter: 200,
            eps_attract: 1e-3,
            offset: (-0.5, -0.5),
            span: (1.0, 1.0),
            overlay_punctures: true,
            overlay_pcf: true,
        }
    }
}

pub struct Image {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl Image {
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    fn put(&mut self, px: usize, py: usize, rgb: [u8; 3]) {
        if px < self.width && py < self.height {
            let i = 3 * (py * self.width + px);
            self.data[i..i + 3].copy_from_slice(&rgb);
        }
    }
}

fn palette(first_hit: u32) -> [u8; 3] {
    let h = (first_hit as f64 * 0.11).fract();
    let s = 0.85;
    let v = 0.95;
    let i = (h * 6.0).floor() as i32 % 6;
    let f = h * 6.0 - (h * 6.0).floor();
    let p = v * (1.0 - s);
    let q = v * (1.0 - f * s);
    let t = v * (1.0 - (1.0 - f) * s);
    let (r, g, b) = match i {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [(r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8]
}

pub fn family_lattice() -> Lattice {
    periods(&WeierstrassCurve::new(3, 0, 0, 1, 0)).expect("family curve is nonsingular")
}

fn pixel_u(cfg: &RenderConfig, lat: &Lattice, px: usize, py: usize) -> Cx {
    let a = cfg.offset.0 + cfg.span.0 * (px as f64 + 0.5) / cfg.width as f64;
    let b = cfg.offset.1 + cfg.span.1 * (py as f64 + 0.5) / cfg.height as f64;
    lat.omega1 * a + lat.omega2 * b
}

fn pixel_color(solver: &ParamSolver, lat: &Lattice, cfg: &RenderConfig, px: usize, py: usize) -> [u8; 3] {
    let u = pixel_u(cfg, lat, px, py);
    let Some((x, y)) = plane_point(u, lat) else {
        return [24, 24, 24];
    };
    match solver.param_point(x, y) {
        ParamPoint::Degenerate => [24, 24, 24],
        ParamPoint::Config { x3, x4, x5 } => {
            let cycle = vec![
                PointP1::Finite(Cx::new(0.0, 0.0)),
                PointP1::Finite(Cx::new(1.0, 0.0)),
                PointP1::Finite(x3),
                PointP1::Finite(x4),
                PointP1::Finite(x5),
            ];
            let Ok(f) = DynMap::from_cycle(2, cycle) else {
                return [24, 24, 24];
            };
            match classify(&f, cfg.maxiter, cfg.eps_attract) {
                Classification::NotAttracted => [0, 0, 0],
                Classification::Attracted { first_hit } => palette(first_hit),
            }
        }
    }
}

/// Plane-chart targets of the special points, for the overlay markers.
fn overlay_targets() -> (Vec<(Cx, Cx)>, Vec<(Cx, Cx)>) {
    let mut punctures = Vec::new();
    if let Ok(ps) = crate::percurve::punctures_25() {
        for p in ps {
            let x = p.plane_image[0].to_cx();
            let y = p.plane_image[1].to_cx();
            let z = p.plane_image[2].to_cx();
            if z.abs() > 1e-9 {
                punctures.push((x / z, y / z));
            } else {
                // the point at infinity of the plane model sits at the
                // lattice origin; mark it via a huge chart value sentinel
                punctures.push((Cx::new(f64::INFINITY, 0.0), Cx::new(f64::INFINITY, 0.0)));
            }
        }
    }
    let mut pcf = Vec::new();
    if let Ok(ps) = crate::percurve::pcf_solve_all() {
        for p in ps {
            let pos: Vec<(Cx, Cx)> = p
                .config
                .iter()
                .map(|q| match q {
                    PointP1::Finite(z) => (*z, Cx::new(1.0, 0.0)),
                    PointP1::Infinity => (Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)),
                })
                .collect();
            let det = |a: (Cx, Cx), b: (Cx, Cx)| a.0 * b.1 - b.0 * a.1;
            let cr = |i1: usize, i2: usize, i3: usize, i4: usize| {
                det(pos[i4 - 1], pos[i2 - 1]) * det(pos[i3 - 1], pos[i1 - 1])
                    / (det(pos[i4 - 1], pos[i1 - 1]) * det(pos[i3 - 1], pos[i2 - 1]))
            };
            pcf.push((cr(3, 4, 5, 1), cr(5, 2, 3, 4)));
        }
    }
    (punctures, pcf)
}

/// Render the basin picture over the configured parallelogram.
pub fn render(cfg: &RenderConfig) -> Image {
    let lat = family_lattice();
    let solver = ParamSolver::new(diagonal_system(2, 5).expect("system"));
    let mut img = Image {
        width: cfg.width,
        height: cfg.height,
        data: vec![0; 3 * cfg.width * cfg.height],
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let rows: Vec<Vec<u8>> = (0..cfg.height)
            .into_par_iter()
            .map(|py| {
                let solver = ParamSolver::new(diagonal_system(2, 5).expect("system"));
                let mut row = Vec::with_capacity(3 * cfg.width);
                for px in 0..cfg.width {
                    row.extend_from_slice(&pixel_color(&solver, &lat, cfg, px, py));
                }
                row
            })
            .collect();
        for (py, row) in rows.into_iter().enumerate() {
            let i = 3 * py * cfg.width;
            img.data[i..i + row.len()].copy_from_slice(&row);
        }
    }
    #[cfg(not(feature = "parallel"))]
    for py in 0..cfg.height {
        for px in 0..cfg.width {
            let c = pixel_color(&solver, &lat, cfg, px, py);
            img.put(px, py, c);
        }
    }
    let _ = &solver;

    if cfg.overlay_punctures || cfg.overlay_pcf {
        let (punctures, pcf) = overlay_targets();
        let mark = |img: &mut Image, px: usize, py: usize, rgb: [u8; 3]| {
            for dy in 0..2 {
                for dx in 0..2 {
                    img.put(px + dx, py + dy, rgb);
                }
            }
        };
        let locate = |target: (Cx, Cx)| -> Option<(usize, usize)> {
            // nearest pixel by chart distance; the point at infinity maps to
            // the lattice origin corner
            if !target.0.is_finite() {
                let a = (0.0 - cfg.offset.0) / cfg.span.0;
                let b = (0.0 - cfg.offset.1) / cfg.span.1;
                if (0.0..1.0).contains(&a) && (0.0..1.0).contains(&b) {
                    return Some((
                        (a * cfg.width as f64) as usize,
                        (b * cfg.height as f64) as usize,
                    ));
                }
                return None;
            }
            let mut best = None;
            let mut best_d = f64::INFINITY;
            let step = (cfg.width / 128).max(1);
            for py in (0..cfg.height).step_by(step) {
                for px in (0..cfg.width).step_by(step) {
                    let u = pixel_u(cfg, &lat, px, py);
                    if let Some((x, y)) = plane_point(u, &lat) {
                        let d = (x - target.0).abs() + (y - target.1).abs();
                        if d < best_d {
                            best_d = d;
                            best = Some((px, py));
                        }
                    }
                }
            }
            // refine around the coarse winner
            if let Some((cx, cy)) = best {
                let r = step * 2;
                for py in cy.saturating_sub(r)..(cy + r).min(cfg.height) {
                    for px in cx.saturating_sub(r)..(cx + r).min(cfg.width) {
                        let u = pixel_u(cfg, &lat, px, py);
                        if let Some((x, y)) = plane_point(u, &lat) {
                            let d = (x - target.0).abs() + (y - target.1).abs();
                            if d < best_d {
                                best_d = d;
                                best = Some((px, py));
                            }
                        }
                    }
                }
            }
            best.filter(|_| best_d < 0.5)
        };
        if cfg.overlay_punctures {
            for t in punctures {
                if let Some((px, py)) = locate(t) {
                    mark(&mut img, px, py, [255, 0, 0]);
                }
            }
        }
        if cfg.overlay_pcf {
            for t in pcf {
                if let Some((px, py)) = locate(t) {
                    mark(&mut img, px, py, [40, 90, 255]);
                }
            }
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_render_has_both_classes_and_is_deterministic() {
        let cfg = RenderConfig {
            width: 24,
            height: 24,
            maxiter: 60,
            eps_attract: 1e-3,
            overlay_punctures: false,
            overlay_pcf: false,
            ..Default::default()
        };
        let a = render(&cfg);
        let b = render(&cfg);
        assert_eq!(a.to_ppm(), b.to_ppm());
        let mut black = 0;
        let mut colored = 0;
        for px in a.data.chunks(3) {
            if px == [0, 0, 0] {
                black += 1;
            } else if px != [24, 24, 24] {
                colored += 1;
            }
        }
        assert!(black > 0, "no unattracted pixels");
        assert!(colored > 0, "no attracted pixels");
    }
}
