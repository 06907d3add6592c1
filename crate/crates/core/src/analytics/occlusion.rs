//! Scatter-plot occlusion: the share of marks that overlap another mark once
//! the data is laid out in a viewport.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Linear axis scaling from the data extent onto `[0, size]`, with y growing
/// downwards. A zero-width extent maps to the middle of the axis.
pub fn to_viewport(points: &[(f64, f64)], viewport: (f64, f64)) -> Vec<(f64, f64)> {
    let extent = |sel: fn(&(f64, f64)) -> f64| {
        points
            .iter()
            .map(sel)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    };
    let (x0, x1) = extent(|p| p.0);
    let (y0, y1) = extent(|p| p.1);
    let scale = |v: f64, lo: f64, hi: f64, size: f64| {
        if hi > lo {
            (v - lo) / (hi - lo) * size
        } else {
            size / 2.0
        }
    };
    points
        .iter()
        .map(|&(x, y)| {
            (
                scale(x, x0, x1, viewport.0),
                viewport.1 - scale(y, y0, y1, viewport.1),
            )
        })
        .collect()
}

/// Fraction of marks whose center lies closer than `2 * mark_radius` to some
/// other mark's center, after [`to_viewport`] scaling.
pub fn occlusion_score(
    points: &[(f64, f64)],
    mark_radius: f64,
    viewport: (f64, f64),
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(viewport.0 > 0.0 && viewport.1 > 0.0) || !viewport.0.is_finite() || !viewport.1.is_finite()
    {
        return Err(Error::InvalidParams(format!(
            "viewport {viewport:?} must be positive"
        )));
    }
    if !(mark_radius > 0.0 && mark_radius.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "mark radius {mark_radius} must be positive"
        )));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidParams("non-finite point".into()));
    }

    let screen = to_viewport(points, viewport);
    let reach = 2.0 * mark_radius;
    let cell = |p: &(f64, f64)| ((p.0 / reach).floor() as i64, (p.1 / reach).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in screen.iter().enumerate() {
        grid.entry(cell(p)).or_default().push(i);
    }

    let occluded = screen
        .iter()
        .enumerate()
        .filter(|&(i, p)| {
            let (cx, cy) = cell(p);
            (-1..=1).any(|ox| {
                (-1..=1).any(|oy| {
                    grid.get(&(cx + ox, cy + oy)).is_some_and(|bucket| {
                        bucket.iter().any(|&j| {
                            j != i && {
                                let q = screen[j];
                                (p.0 - q.0).hypot(p.1 - q.1) < reach
                            }
                        })
                    })
                })
            })
        })
        .count();
    Ok(occluded as f64 / points.len() as f64)
}
