//! Cross-sections of a fan by an affine hyperplane `w . l = 1`.

use anyhow::{bail, Result};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use twistfan::polyhedra::{Cone, Int};
use twistfan::stability::format_rational;

use crate::document::FanDocument;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRegion {
    pub label: String,
    /// Dimension of the cone; the region has one less.
    pub dim: usize,
    /// Vertices as exact `p/q` coordinates, in boundary order for polygons.
    pub vertices: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDocument {
    pub coords: Vec<String>,
    pub weights: Vec<i64>,
    pub regions: Vec<SliceRegion>,
}

impl SliceDocument {
    /// Regions coming from full-dimensional cones.
    pub fn chambers(&self) -> impl Iterator<Item = &SliceRegion> {
        self.regions.iter().filter(move |r| r.dim == self.coords.len())
    }
}

pub fn slice(doc: &FanDocument, weights: Option<&[i64]>) -> Result<SliceDocument> {
    let n = doc.coords.len();
    if !(2..=3).contains(&n) {
        bail!("slices need 2 or 3 coordinates, the fan has {n}");
    }
    let weights: Vec<i64> = match weights {
        Some(w) if w.len() != n => bail!("expected {n} weights, got {}", w.len()),
        Some(w) if w.iter().any(|&x| x <= 0) => bail!("weights must be positive"),
        Some(w) => w.to_vec(),
        None => vec![1; n],
    };
    let w: Vec<Int> = weights.iter().map(|&x| Int::from(x)).collect();
    let mut regions = Vec::new();
    for c in &doc.cones {
        let rays: Vec<Vec<Int>> = c.rays.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        let cone = Cone::from_rays(doc.coords.clone(), &rays)?;
        if cone.dim() == 0 {
            continue;
        }
        let order = boundary_order(&cone);
        let vertices = order
            .iter()
            .map(|&i| {
                let r = &cone.rays()[i];
                let scale: Int = r.iter().zip(&w).map(|(a, b)| a * b).sum();
                r.iter().map(|x| format_rational(&BigRational::new(x.clone(), scale.clone()))).collect()
            })
            .collect();
        regions.push(SliceRegion { label: c.label.clone(), dim: cone.dim(), vertices });
    }
    Ok(SliceDocument { coords: doc.coords.clone(), weights, regions })
}

/// Ray indices of a pointed cone walked around its boundary: consecutive rays
/// share a facet. Cones of dimension at most two keep their ray order.
fn boundary_order(cone: &Cone) -> Vec<usize> {
    let k = cone.rays().len();
    if cone.dim() < 3 {
        return (0..k).collect();
    }
    let edges: Vec<(usize, usize)> = cone
        .facets()
        .iter()
        .map(|f| {
            let idx: Vec<usize> =
                f.rays().iter().map(|r| cone.rays().iter().position(|s| s == r).expect("facet ray")).collect();
            (idx[0], idx[1])
        })
        .collect();
    let mut order = vec![0];
    while order.len() < k {
        let last = *order.last().unwrap();
        let next = edges
            .iter()
            .filter_map(|&(a, b)| if a == last { Some(b) } else if b == last { Some(a) } else { None })
            .find(|v| !order.contains(v))
            .expect("facet cycle");
        order.push(next);
    }
    order
}

fn parse_rational(s: &str) -> f64 {
    match s.split_once('/') {
        Some((p, q)) => p.parse::<f64>().unwrap_or(0.0) / q.parse::<f64>().unwrap_or(1.0),
        None => s.parse().unwrap_or(0.0),
    }
}

/// Renders the slice as an SVG picture. Floating point is used only here, to
/// place the exact vertices on the page.
pub fn render_svg(slice: &SliceDocument) -> String {
    const SIZE: f64 = 440.0;
    let n = slice.coords.len();
    let corners: Vec<(f64, f64)> = if n == 3 {
        vec![(20.0, 400.0), (420.0, 400.0), (220.0, 53.59)]
    } else {
        vec![(20.0, 220.0), (420.0, 220.0)]
    };
    // Barycentric placement after rescaling by the weights, so corners are the coordinate rays.
    let place = |v: &[String]| -> (f64, f64) {
        let x: Vec<f64> = v.iter().zip(&slice.weights).map(|(s, &w)| parse_rational(s) * w as f64).collect();
        let px = x.iter().zip(&corners).map(|(t, c)| t * c.0).sum();
        let py = x.iter().zip(&corners).map(|(t, c)| t * c.1).sum();
        (px, py)
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    let palette = ["#e8eef7", "#f7ede2", "#e6f2e6", "#f5e6f0", "#fdf6d8", "#e3f1f4"];
    let mut chamber = 0;
    for r in &slice.regions {
        let pts: Vec<(f64, f64)> = r.vertices.iter().map(|v| place(v)).collect();
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        if r.dim == n && pts.len() > 2 {
            out += &format!(
                "  <polygon points=\"{}\" fill=\"{}\" stroke=\"#555\" stroke-width=\"0.5\"><title>{}</title></polygon>\n",
                path.join(" "),
                palette[chamber % palette.len()],
                escape(&r.label)
            );
            chamber += 1;
        } else if pts.len() == 2 {
            out += &format!(
                "  <polyline points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"><title>{}</title></polyline>\n",
                path.join(" "),
                escape(&r.label)
            );
        } else if pts.len() == 1 {
            out += &format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"#222\"><title>{}</title></circle>\n",
                pts[0].0,
                pts[0].1,
                escape(&r.label)
            );
        }
    }
    for (c, name) in corners.iter().zip(&slice.coords) {
        out += &format!("  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>\n", c.0, if c.1 > 200.0 { c.1 + 16.0 } else { c.1 - 6.0 }, escape(name));
    }
    out += "</svg>\n";
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Exact check that a slice vertex lies on the normalizing hyperplane.
pub fn on_hyperplane(vertex: &[String], weights: &[i64]) -> bool {
    let total = vertex.iter().zip(weights).fold(BigRational::zero(), |acc, (s, &w)| {
        let x: BigRational = s.parse().unwrap_or_else(|_| BigRational::zero());
        acc + x * BigRational::from_integer(Int::from(w))
    });
    total == BigRational::from_integer(Int::from(1))
}
