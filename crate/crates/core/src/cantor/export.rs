//! Orbit CSV and schematic SVG output.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use super::{exact_decimal, BlockMap, CantorPoint, HaltingRegion};
use crate::error::DynamicsError;

/// `p, f(p), ..., fⁿ(p)` under the block map.
pub fn orbit(map: &BlockMap, start: &CantorPoint, n: usize) -> Result<Vec<CantorPoint>, DynamicsError> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(start.clone());
    for _ in 0..n {
        let next = map.apply(out.last().expect("orbit is non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// `step,x,y,in_nu` with exact coordinates.
pub fn orbit_csv(points: &[CantorPoint], region: &HaltingRegion) -> String {
    let mut s = String::from("step,x,y,in_nu\n");
    for (k, p) in points.iter().enumerate() {
        let _ = writeln!(s, "{k},{},{},{}", exact_decimal(&p.x), exact_decimal(&p.y), u8::from(region.contains(p)));
    }
    s
}

const SIZE: f64 = 600.0;
const PAD: f64 = 20.0;

fn sx(v: f64) -> f64 {
    PAD + v * SIZE
}

// SVG's y axis points down
fn sy(v: f64) -> f64 {
    PAD + (1.0 - v) * SIZE
}

fn f(v: &super::Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Unit square with every block outlined, the halting region shaded and the
/// orbit drawn as a polyline.
pub fn block_svg(map: &BlockMap, region: &HaltingRegion, orbit: &[CantorPoint]) -> String {
    let full = SIZE + 2.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#
    );
    let _ = writeln!(s, r##"<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="white" stroke="#333"/>"##);
    let _ = writeln!(s, r##"<g id="nu" fill="#e8a0a0" stroke="none">"##);
    for r in &region.rects {
        let (x0, x1, y0, y1) = (f(&r.x0).max(0.0), f(&r.x1).min(1.0), f(&r.y0).max(0.0), f(&r.y1).min(1.0));
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            sx(x0),
            sy(y1),
            (x1 - x0) * SIZE,
            (y1 - y0) * SIZE
        );
    }
    s.push_str("</g>\n");
    let _ = writeln!(s, r##"<g id="blocks" fill="none" stroke="#4060a0" stroke-width="0.5">"##);
    for pc in &map.pieces {
        let b = &pc.block;
        let (x0, y0, w, h) = (f(&b.x0), f(&b.y0), f(&b.width), f(&b.height));
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            sx(x0),
            sy(y0 + h),
            w * SIZE,
            h * SIZE
        );
    }
    s.push_str("</g>\n");
    if !orbit.is_empty() {
        let pts: Vec<String> = orbit.iter().map(|p| format!("{:.3},{:.3}", sx(f(&p.x)), sy(f(&p.y)))).collect();
        let _ = writeln!(
            s,
            r##"<polyline id="orbit" fill="none" stroke="#202020" stroke-width="1" points="{}"/>"##,
            pts.join(" ")
        );
        for (k, p) in orbit.iter().enumerate() {
            let fill = if region.contains(p) { "#c02020" } else { "#202020" };
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="2.5" fill="{fill}"><title>{k}</title></circle>"#,
                sx(f(&p.x)),
                sy(f(&p.y))
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{encode_config, gs_to_block_map, halting_region};
    use crate::corpus;
    use crate::shift::tm_to_gs;

    fn bb2_orbit(n: usize) -> (BlockMap, HaltingRegion, Vec<CantorPoint>) {
        let tm = corpus::bb2();
        let c = tm_to_gs(&tm);
        let map = gs_to_block_map(&c.gs);
        let nu = halting_region(&c, &map);
        let start = encode_config(&c.encode(&tm.initial_config()), c.alphabet.len());
        let o = orbit(&map, &start, n).unwrap();
        (map, nu, o)
    }

    #[test]
    fn bb2_csv_first_enters_at_step_six() {
        let (_, nu, o) = bb2_orbit(10);
        let csv = orbit_csv(&o, &nu);
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows.len(), 11);
        let first = rows.iter().position(|r| r.ends_with(",1")).unwrap();
        assert_eq!(first, 6);
        assert!(rows[0].starts_with("0,"));
    }

    #[test]
    fn zero_steps_is_one_row() {
        let (_, nu, o) = bb2_orbit(0);
        assert_eq!(orbit_csv(&o, &nu).lines().count(), 2);
    }

    #[test]
    fn svg_has_every_block_and_the_orbit() {
        let (map, nu, o) = bb2_orbit(6);
        let svg = block_svg(&map, &nu, &o);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 7);
        assert!(svg.contains("polyline"));
        assert!(svg.matches("<rect").count() > map.pieces.len());
    }
}
