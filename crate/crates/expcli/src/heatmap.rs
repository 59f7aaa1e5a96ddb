//! SVG heatmaps of two-dimensional archives.
//!
//! Grid archives draw one rectangle per niche; CVT archives rasterize the
//! descriptor space at 256x256 and color each raster cell by its nearest
//! centroid's elite. Fitness maps linearly from dark blue (`f_min`) to
//! yellow (`f_max`); unfilled niches are gray.

use std::path::Path;

use anyhow::{bail, Result};

use qd_core::archive::nearest_centroid;
use qd_core::types::Descriptor;

use crate::persist::{write_atomic, AnyArchive, SavedArchive};

const PLOT_X: f64 = 50.0;
const PLOT_Y: f64 = 30.0;
const PLOT_SIZE: f64 = 600.0;
const LEGEND_X: f64 = 680.0;
const SVG_W: f64 = 790.0;
const SVG_H: f64 = 660.0;
const RASTER: usize = 256;
const GRAY: &str = "#808080";

/// Linear dark-blue-to-yellow scale over normalized fitness.
fn color(norm: f64) -> String {
    let t = norm.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + t * (b - a)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(0.0, 255.0), lerp(0.0, 255.0), lerp(139.0, 0.0))
}

pub fn emit_heatmap(path: &Path, saved: &SavedArchive) -> Result<()> {
    let d = saved.descriptor_bounds.len();
    if d != 2 {
        bail!("unsupported dimension: heatmaps need a 2-D descriptor space, got {d}-D");
    }
    let (f_min, f_max) = saved.fitness_bounds;
    if !f_min.is_finite() || !f_max.is_finite() || f_max <= f_min {
        bail!("fitness bounds must satisfy f_max > f_min");
    }
    let norm = |f: f64| (f - f_min) / (f_max - f_min);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\">\n<rect width=\"{SVG_W}\" height=\"{SVG_H}\" \
         fill=\"#ffffff\"/>\n"
    ));

    match &saved.archive {
        AnyArchive::Grid(archive) => {
            let bins = archive.indexer().bins();
            let (b0, b1) = (bins[0], bins[1]);
            let w = PLOT_SIZE / b0 as f64;
            let h = PLOT_SIZE / b1 as f64;
            for i0 in 0..b0 {
                for i1 in 0..b1 {
                    let niche = i0 * b1 + i1;
                    let fill = match archive.get(niche) {
                        Some(e) => color(norm(e.fitness())),
                        None => GRAY.to_string(),
                    };
                    let x = PLOT_X + i0 as f64 * w;
                    let y = PLOT_Y + (b1 - 1 - i1) as f64 * h;
                    svg.push_str(&format!(
                        "<rect class=\"niche\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" \
                         height=\"{h:.2}\" fill=\"{fill}\"/>\n"
                    ));
                }
            }
        }
        AnyArchive::Cvt(archive) => {
            let bounds = &saved.descriptor_bounds;
            let centroids = archive.indexer().centroids();
            let cell = PLOT_SIZE / RASTER as f64;
            // Row-wise runs of equal color keep the file small without
            // changing the rendered raster.
            for row in 0..RASTER {
                let y1 = bounds[1].1 - (row as f64 + 0.5) / RASTER as f64 * (bounds[1].1 - bounds[1].0);
                let mut run_start = 0usize;
                let mut run_fill: Option<String> = None;
                for col in 0..=RASTER {
                    let fill = if col < RASTER {
                        let x0 = bounds[0].0
                            + (col as f64 + 0.5) / RASTER as f64 * (bounds[0].1 - bounds[0].0);
                        let q = Descriptor::new(vec![x0, y1]);
                        let niche = nearest_centroid(&q, centroids)
                            .map_err(|e| anyhow::anyhow!("raster query failed: {e}"))?;
                        Some(match archive.get(niche) {
                            Some(e) => color(norm(e.fitness())),
                            None => GRAY.to_string(),
                        })
                    } else {
                        None
                    };
                    if fill != run_fill {
                        if let Some(f) = run_fill.take() {
                            let x = PLOT_X + run_start as f64 * cell;
                            let y = PLOT_Y + row as f64 * cell;
                            let w = (col - run_start) as f64 * cell;
                            svg.push_str(&format!(
                                "<rect class=\"cell\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" \
                                 height=\"{cell:.2}\" fill=\"{f}\"/>\n"
                            ));
                        }
                        run_start = col;
                        run_fill = fill;
                    }
                }
            }
        }
        other => bail!("unsupported archive kind `{}` for heatmaps", other.kind_name()),
    }

    // Legend: gradient bar with the numeric fitness bounds.
    let steps = 64;
    let seg = PLOT_SIZE / steps as f64;
    for s in 0..steps {
        let t = 1.0 - (s as f64 + 0.5) / steps as f64;
        let y = PLOT_Y + s as f64 * seg;
        svg.push_str(&format!(
            "<rect class=\"legend\" x=\"{LEGEND_X}\" y=\"{y:.2}\" width=\"24\" \
             height=\"{seg:.2}\" fill=\"{}\"/>\n",
            color(t)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"13\">{v:.4}</text>\n",
        x = LEGEND_X + 30.0,
        y = PLOT_Y + 10.0,
        v = f_max
    ));
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"13\">{v:.4}</text>\n",
        x = LEGEND_X + 30.0,
        y = PLOT_Y + PLOT_SIZE,
        v = f_min
    ));
    svg.push_str(&format!(
        "<rect x=\"{LEGEND_X}\" y=\"{y}\" width=\"24\" height=\"12\" fill=\"{GRAY}\"/>\n\
         <text x=\"{tx}\" y=\"{ty}\" font-family=\"monospace\" font-size=\"13\">empty</text>\n",
        y = PLOT_Y + PLOT_SIZE + 18.0,
        tx = LEGEND_X + 30.0,
        ty = PLOT_Y + PLOT_SIZE + 28.0,
    ));
    svg.push_str("</svg>\n");

    write_atomic(path, svg.as_bytes())
}
