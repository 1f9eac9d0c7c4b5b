//! Picture of the chamber decomposition of the positive cone in the `(g, τ)` plane.

use std::fmt::Write as _;

use flopkit::lattice::chamber_rays;
use flopkit::lattice::LatticeClass;
use num_traits::ToPrimitive;

use crate::error::{CliError, CliResult};

const SIZE: f64 = 560.0;
const ORIGIN: (f64, f64) = (160.0, 360.0);
const RADIUS: f64 = 320.0;

/// Unit direction of a class in the `(x, y)` coefficient plane.
fn direction(x: f64, y: f64) -> (f64, f64) {
    let n = x.hypot(y);
    (x / n, y / n)
}

fn class_direction(v: &LatticeClass) -> (f64, f64) {
    direction(v.x.to_f64().unwrap_or(f64::NAN), v.y.to_f64().unwrap_or(f64::NAN))
}

fn to_canvas((u, v): (f64, f64), r: f64) -> (f64, f64) {
    (ORIGIN.0 + r * u, ORIGIN.1 - r * v)
}

fn ray_name(i: i64) -> String {
    if i >= 1 {
        format!("α{}", subscript(i))
    } else {
        format!("α{}∨", subscript(1 - i))
    }
}

/// Model whose nef cone is `Cone(ray(k), ray(k+1))`.
fn model_name(k: i64) -> String {
    match k {
        0 => "F".into(),
        k if k > 0 => format!("F{}", subscript(k)),
        k => format!("F{}∨", subscript(-k)),
    }
}

fn subscript(n: i64) -> String {
    n.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap_or(0)).unwrap_or(c)).collect()
}

/// Angles of the rays drawn for `k`, in drawing order (decreasing).
pub fn ray_angles(k: i64) -> Vec<f64> {
    chamber_rays(k)
        .iter()
        .map(|v| {
            let (u, w) = class_direction(v);
            w.atan2(u)
        })
        .collect()
}

/// SVG of the rays `ray(−k) … ray(k)`, the `2k` chambers between them and the
/// isotropic boundary of the positive cone.
pub fn emit_cone_svg(k: i64) -> CliResult<String> {
    if k < 1 {
        return Err(CliError::Usage(format!("cone picture needs k >= 1, got {k}")));
    }
    let rays: Vec<(f64, f64)> = chamber_rays(k).iter().map(class_direction).collect();
    let sqrt6 = 6f64.sqrt();
    let boundary = [direction(1.0, -(3.0 - sqrt6)), direction(-1.0, 3.0 + sqrt6)];
    let mut out = String::new();
    let w = |out: &mut String, s: String| out.push_str(&s);
    w(&mut out, format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\" font-family=\"serif\" font-size=\"13\">\n"
    ));
    w(&mut out, format!("<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"));
    for (j, pair) in rays.windows(2).enumerate() {
        let c = j as i64 - k;
        let (a, b) = (to_canvas(pair[0], RADIUS), to_canvas(pair[1], RADIUS));
        let fill = if c.rem_euclid(2) == 0 { "#c9d9ee" } else { "#eef3fa" };
        let _ = writeln!(
            out,
            "<path class=\"chamber\" data-k=\"{c}\" d=\"M {:.3} {:.3} L {:.3} {:.3} A {RADIUS} {RADIUS} 0 0 1 {:.3} {:.3} Z\" fill=\"{fill}\" stroke=\"none\"/>",
            ORIGIN.0, ORIGIN.1, a.0, a.1, b.0, b.1
        );
        let mid = direction(pair[0].0 + pair[1].0, pair[0].1 + pair[1].1);
        let (lx, ly) = to_canvas(mid, 0.72 * RADIUS);
        let _ = writeln!(
            out,
            "<text class=\"model\" x=\"{lx:.3}\" y=\"{ly:.3}\" text-anchor=\"middle\">{}</text>",
            model_name(c)
        );
    }
    for (j, d) in rays.iter().enumerate() {
        let i = j as i64 - k;
        let (x, y) = to_canvas(*d, RADIUS);
        let (tx, ty) = to_canvas(*d, RADIUS + 14.0);
        let _ = writeln!(
            out,
            "<line class=\"ray\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{x:.3}\" y2=\"{y:.3}\" stroke=\"black\" stroke-width=\"1.2\"/>",
            ORIGIN.0, ORIGIN.1
        );
        let _ = writeln!(out, "<text x=\"{tx:.3}\" y=\"{ty:.3}\" text-anchor=\"middle\">{}</text>", ray_name(i));
    }
    for d in boundary {
        let (x, y) = to_canvas(d, RADIUS + 30.0);
        let _ = writeln!(
            out,
            "<line class=\"boundary\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{x:.3}\" y2=\"{y:.3}\" stroke=\"#b03030\" stroke-dasharray=\"6 4\"/>",
            ORIGIN.0, ORIGIN.1
        );
    }
    let (gx, gy) = to_canvas((1.0, 0.0), 0.45 * RADIUS);
    let _ = writeln!(out, "<circle cx=\"{gx:.3}\" cy=\"{gy:.3}\" r=\"2.5\"/>");
    let _ = writeln!(out, "<text x=\"{:.3}\" y=\"{:.3}\">g</text>", gx + 5.0, gy - 5.0);
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn chamber_counts() {
        assert_eq!(count(&emit_cone_svg(1).unwrap(), "class=\"chamber\""), 2);
        let svg = emit_cone_svg(2).unwrap();
        assert_eq!(count(&svg, "class=\"chamber\""), 4);
        assert_eq!(count(&svg, "class=\"model\""), 4);
        assert_eq!(count(&svg, "class=\"ray\""), 5);
        assert_eq!(count(&svg, "class=\"boundary\""), 2);
    }

    #[test]
    fn first_picture_shows_f_and_its_dual_flop() {
        let svg = emit_cone_svg(1).unwrap();
        assert!(svg.contains(">F<") && svg.contains(">F₁∨<"));
    }

    #[test]
    fn rays_ordered_by_angle_inside_the_cone() {
        let a = ray_angles(6);
        assert!(a.windows(2).all(|w| w[0] > w[1]), "{a:?}");
        let sqrt6 = 6f64.sqrt();
        let lo = (-(3.0 - sqrt6)).atan2(1.0);
        let hi = (3.0 + sqrt6).atan2(-1.0);
        assert!(a[0] < hi && lo < *a.last().unwrap());
    }

    #[test]
    fn rejects_empty_range() {
        assert!(emit_cone_svg(0).is_err());
    }
}
