//! Command-line surface: stratum enumeration, puncture and critical-cycle
//! reports, cubic fitting, invariant verification, the genus table, and the
//! basin renderer.

use perdn_core::elliptic::{
    fit_plane_curve, periods, transformed_cubic, weierstrass_from_cubic, ECPoint, PointOrder,
    TORSION_BOUND,
};
use perdn_core::exactnum::{Field, NFElem};
use perdn_core::percurve::{
    pcf_json, pcf_solve_all, perd4_json, perd4_report, punctures_25, punctures_json, rho_degree,
    rho_degree_dropping, sample_curve,
};
use perdn_core::render::{render, RenderConfig};
use perdn_core::treecover::{enumerate_types, to_csv, to_dot};
use std::collections::BTreeMap;
use std::process::ExitCode;


/// stdout writer that stays quiet when the pipe closes early
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! out_raw {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

fn usage() -> &'static str {
    concat!(
        "usage: perdn <command> [options]\n",
        "commands:\n",
        "  enumerate --d D --n N [--dot | --csv]   boundary stratum types\n",
        "  punctures --d 2 --n 5 [--json]          exact punctures of the curve\n",
        "  pcf [--json]                            fully critical cycle points\n",
        "  fit-cubic [--samples N] [--seed S]      plane model from samples\n",
        "  verify-invariants [--json]              j, discriminant, group, orders, periods\n",
        "  genus-table --dmax D [--json]           period-4 family summary rows\n",
        "  rho-degree                              forgetful map degree check\n",
        "  samples [--count N] [--seed S]          curve sample dump as CSV\n",
        "  render --config FILE                    basin image (binary PPM)\n",
    )
}

fn parse_flags(args: &[String]) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    let mut i = 0;
    while i < args.len() {
        if let Some(name) = args[i].strip_prefix("--") {
            if i + 1 < args.len() && !args[i + 1].starts_with("--") {
                map.insert(name.to_string(), args[i + 1].clone());
                i += 2;
            } else {
                map.insert(name.to_string(), "true".to_string());
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    map
}

fn nf_str(v: &NFElem) -> String {
    format!("{:?}", v)
}

fn cmd_enumerate(flags: &BTreeMap<String, String>) -> Result<(), String> {
    let d: usize = flags.get("d").ok_or("--d required")?.parse().map_err(|_| "bad --d")?;
    let n: usize = flags.get("n").ok_or("--n required")?.parse().map_err(|_| "bad --n")?;
    let recs = enumerate_types(d, n)?;
    let passing: Vec<_> = recs.iter().filter(|r| r.passes_diagonal).cloned().collect();
    if flags.contains_key("csv") {
        out_raw!("{}", to_csv(&passing));
        return Ok(());
    }
    if flags.contains_key("dot") {
        for r in &passing {
            out_raw!("{}", to_dot(&r.ty));
        }
        return Ok(());
    }
    out!(
        "boundary types for degree {} period {}: {} valid, {} pass the stabilization filter",
        d,
        n,
        recs.len(),
        passing.len()
    );
    for (i, r) in passing.iter().enumerate() {
        out!(
            "  [{}] target {}  dim {}  strata {}",
            i,
            r.ty.tau_shape(),
            r.dimension,
            r.component_count
        );
    }
    Ok(())
}

fn cmd_punctures(flags: &BTreeMap<String, String>) -> Result<(), String> {
    let d: usize = flags.get("d").map(|s| s.parse().unwrap_or(0)).unwrap_or(2);
    let n: usize = flags.get("n").map(|s| s.parse().unwrap_or(0)).unwrap_or(5);
    if (d, n) != (2, 5) {
        return Err("exact puncture reports cover degree 2, period 5".into());
    }
    let ps = punctures_25()?;
    if flags.contains_key("json") {
        out!("{}", serde_json::to_string_pretty(&punctures_json(&ps)).unwrap());
        return Ok(());
    }
    out!("punctures of the degree-2 period-5 curve: {} points", ps.len());
    for p in &ps {
        let coords: Vec<String> = p
            .stratum_coords
            .iter()
            .map(|(k, v)| format!("{} = {}", k, nf_str(v)))
            .collect();
        out!(
            "  {}: field {}  [{} : {} : {}]  {}",
            p.stratum,
            p.field_label,
            nf_str(&p.plane_image[0]),
            nf_str(&p.plane_image[1]),
            nf_str(&p.plane_image[2]),
            coords.join(", ")
        );
    }
    Ok(())
}

fn cmd_pcf(flags: &BTreeMap<String, String>) -> Result<(), String> {
    let ps = pcf_solve_all()?;
    if flags.contains_key("json") {
        out!("{}", serde_json::to_string_pretty(&pcf_json(&ps)).unwrap());
        return Ok(());
    }
    out!("fully critical cycle points: {} (five per stratum)", ps.len());
    for p in &ps {
        out!(
            "  {}: s2 = {:.9}{:+.9}i  s3 = {:.9}{:+.9}i  residual {:.1e}",
            p.stratum, p.s2.re, p.s2.im, p.s3.re, p.s3.im, p.residual
        );
    }
    Ok(())
}

fn cmd_fit_cubic(flags: &BTreeMap<String, String>) -> Result<(), String> {
    let count: usize = flags.get("samples").map(|s| s.parse().unwrap_or(25)).unwrap_or(25);
    let seed: u64 = flags.get("seed").map(|s| s.parse().unwrap_or(1)).unwrap_or(1);
    let samples = sample_curve(count.max(20), seed)?;
    let charts: Vec<_> = samples.iter().map(perdn_core::percurve::plane_chart).collect();
    let curve = fit_plane_curve(&charts, 3).map_err(|e| e.to_string())?;
    out!("fitted plane model: {} = 0", curve.to_string_xyz());
    let ps = punctures_25()?;
    let mut exact = true;
    for p in &ps {
        if !curve.eval_nf(&p.plane_image).is_zero() {
            exact = false;
        }
    }
    out!(
        "all {} exact puncture images satisfy the model exactly: {}",
        ps.len(),
        exact
    );
    if !exact {
        return Err("puncture verification failed".into());
    }
    Ok(())
}

fn cmd_verify_invariants(flags: &BTreeMap<String, String>) -> Result<(), String> {
    let samples = sample_curve(25, 1)?;
    let charts: Vec<_> = samples.iter().map(perdn_core::percurve::plane_chart).collect();
    let curve = fit_plane_curve(&charts, 3).map_err(|e| e.to_string())?;
    out!("plane model: {} = 0", curve.to_string_xyz());
    let (w, flipped) = weierstrass_from_cubic(&curve).map_err(|e| e.to_string())?;
    let inv = w.invariants().map_err(|e| e.to_string())?;
    out!("long form read with x negated: {}", flipped);
    out!("j-invariant: {} (expect 35937/17)", inv.j);
    let t = transformed_cubic(&curve);
    let (wt, _) = weierstrass_from_cubic(&t).map_err(|e| e.to_string())?;
    let invt = wt.invariants().map_err(|e| e.to_string())?;
    out!("moved model discriminant: {} (expect magnitude 17)", invt.disc);
    let ps = punctures_25()?;
    let to_model = |img: &[NFElem; 3]| -> ECPoint {
        if img[2].is_zero() {
            ECPoint::Infinity
        } else {
            ECPoint::Affine(img[0].neg(), img[1].clone())
        }
    };
    let mut rational_pts = Vec::new();
    let mut others = Vec::new();
    for p in &ps {
        let pt = to_model(&p.plane_image);
        if p.field_label == "Q" {
            rational_pts.push((p.stratum.clone(), pt));
        } else {
            others.push((p.stratum.clone(), pt));
        }
    }
    out!("rational punctures: {}", rational_pts.len());
    for (label, pt) in &rational_pts {
        out!("  {}: order {:?}", label, pt.point_order(&w, TORSION_BOUND));
    }
    let has4 = rational_pts
        .iter()
        .any(|(_, p)| p.point_order(&w, TORSION_BOUND) == PointOrder::Order(4));
    out!("rational points form a cyclic group of order 4: {}", has4);
    for (label, pt) in &others {
        out!(
            "  {}: order {:?} (bound {})",
            label,
            pt.point_order(&w, TORSION_BOUND),
            TORSION_BOUND
        );
    }
    let lat = periods(&w).map_err(|e| e.to_string())?;
    out!(
        "periods: {:.5} real, {:.5}i imaginary (magnitudes {:.5}, {:.5})",
        lat.omega1.re,
        lat.omega2.im,
        lat.omega1.abs(),
        lat.omega2.abs()
    );
    if flags.contains_key("json") {
        let order_str = |p: &ECPoint| match p.point_order(&w, TORSION_BOUND) {
            PointOrder::Order(k) => k.to_string(),
            PointOrder::ExceedsBound => format!("exceeds {}", TORSION_BOUND),
        };
        let report = serde_json::json!({
            "plane_model": curve.to_string_xyz(),
            "j_invariant": format!("{}", inv.j),
            "transformed_discriminant": format!("{}", invt.disc),
            "rational_points": rational_pts.iter().map(|(l, p)| serde_json::json!({
                "stratum": l, "order": order_str(p),
            })).collect::<Vec<_>>(),
            "quadratic_points": others.iter().map(|(l, p)| serde_json::json!({
                "stratum": l, "order": order_str(p),
            })).collect::<Vec<_>>(),
            "periods": [lat.omega1.re, lat.omega2.im],
        });
        out!("{}", serde_json::to_string_pretty(&report).unwrap());
    }
    Ok(())
}

fn cmd_genus_table(flags: &BTreeMap<String, String>) -> Result<(), String> {
    let dmax: usize = flags.get("dmax").map(|s| s.parse().unwrap_or(6)).unwrap_or(6);
    out!("d, genus, punctures, critical-cycle points");
    for d in 2..=dmax {
        let r = perd4_report(d)?;
        out!(
            "{}, {}, {}, {}",
            d, r.genus, r.total_punctures, r.critical_cycle_points
        );
        if flags.contains_key("json") {
            out!("{}", serde_json::to_string_pretty(&perd4_json(&r)).unwrap());
        }
    }
    Ok(())
}

fn cmd_samples(flags: &BTreeMap<String, String>) -> Result<(), String> {
    let count: usize = flags.get("count").map(|s| s.parse().unwrap_or(10)).unwrap_or(10);
    let seed: u64 = flags.get("seed").map(|s| s.parse().unwrap_or(1)).unwrap_or(1);
    let samples = sample_curve(count, seed)?;
    out!("x3_re,x3_im,x4_re,x4_im,x5_re,x5_im,chart_x_re,chart_x_im,chart_y_re,chart_y_im");
    for h in &samples {
        let (x, y) = perdn_core::percurve::plane_chart(h);
        out!(
            "{},{},{},{},{},{},{},{},{},{}",
            h.x[0].re, h.x[0].im, h.x[1].re, h.x[1].im, h.x[2].re, h.x[2].im,
            x.re, x.im, y.re, y.im
        );
    }
    Ok(())
}

fn cmd_rho() -> Result<(), String> {
    let d5 = rho_degree()?;
    let d4 = rho_degree_dropping(4)?;
    out!("forgetful map degree dropping the last mark: {}", d5);
    out!("forgetful map degree dropping the fourth mark: {}", d4);
    if d5 != 2 || d4 != 2 {
        return Err("expected degree 2".into());
    }
    Ok(())
}

fn cmd_render(flags: &BTreeMap<String, String>) -> Result<(), String> {
    let mut cfg = RenderConfig::default();
    let mut out_path = "render.ppm".to_string();
    if let Some(path) = flags.get("config") {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(format!("bad config line: {}", line));
            };
            let (k, v) = (k.trim(), v.trim());
            match k {
                "width" => cfg.width = v.parse().map_err(|_| "bad width")?,
                "height" => cfg.height = v.parse().map_err(|_| "bad height")?,
                "maxiter" => cfg.maxiter = v.parse().map_err(|_| "bad maxiter")?,
                "eps_attract" => cfg.eps_attract = v.parse().map_err(|_| "bad eps_attract")?,
                "offset_a" => cfg.offset.0 = v.parse().map_err(|_| "bad offset_a")?,
                "offset_b" => cfg.offset.1 = v.parse().map_err(|_| "bad offset_b")?,
                "span_a" => cfg.span.0 = v.parse().map_err(|_| "bad span_a")?,
                "span_b" => cfg.span.1 = v.parse().map_err(|_| "bad span_b")?,
                "punctures" => cfg.overlay_punctures = v == "true",
                "pcf" => cfg.overlay_pcf = v == "true",
                "out" => out_path = v.to_string(),
                _ => return Err(format!("unknown config key: {}", k)),
            }
        }
    }
    if cfg.width == 0 || cfg.height == 0 || cfg.maxiter == 0 || cfg.eps_attract <= 0.0 {
        return Err("degenerate render configuration".into());
    }
    let img = render(&cfg);
    std::fs::write(&out_path, img.to_ppm()).map_err(|e| e.to_string())?;
    out!("wrote {} ({}x{})", out_path, cfg.width, cfg.height);
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(cmd) = args.first() else {
        eprint!("{}", usage());
        return ExitCode::FAILURE;
    };
    let flags = parse_flags(&args[1..]);
    let result = match cmd.as_str() {
        "enumerate" => cmd_enumerate(&flags),
        "punctures" => cmd_punctures(&flags),
        "pcf" => cmd_pcf(&flags),
        "fit-cubic" => cmd_fit_cubic(&flags),
        "verify-invariants" => cmd_verify_invariants(&flags),
        "genus-table" => cmd_genus_table(&flags),
        "rho-degree" => cmd_rho(),
        "samples" => cmd_samples(&flags),
        "render" => cmd_render(&flags),
        _ => {
            eprint!("{}", usage());
            return ExitCode::FAILURE;
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::FAILURE
        }
    }
}
