//! Fruchterman-Reingold force-directed placement with a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LAYOUT_SEED: u64 = 42;
pub const LAYOUT_ITERATIONS: usize = 200;

/// Places `n` vertices in a `width`×`height` box. Vertices with a `fixed`
/// position keep it and still push and pull the others. Coordinates are
/// rounded to hundredths so that serialised scenes are stable.
pub fn force_layout(
    n: usize,
    edges: &[(usize, usize)],
    fixed: &[Option<(f64, f64)>],
    width: f64,
    height: f64,
) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(LAYOUT_SEED);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let r = (rng.random::<f64>() * width, rng.random::<f64>() * height);
            fixed.get(i).copied().flatten().unwrap_or(r)
        })
        .collect();
    if n <= 1 {
        if n == 1 && fixed.first().copied().flatten().is_none() {
            pos[0] = (width / 2.0, height / 2.0);
        }
        return round(pos);
    }
    let k = (width * height / n as f64).sqrt();
    let t0 = width.max(height) / 10.0;
    for iter in 0..LAYOUT_ITERATIONS {
        let t = t0 * (1.0 - iter as f64 / LAYOUT_ITERATIONS as f64);
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let d = (dx * dx + dy * dy).sqrt().max(0.01);
                let f = k * k / d;
                let (fx, fy) = (dx / d * f, dy / d * f);
                disp[i].0 += fx;
                disp[i].1 += fy;
                disp[j].0 -= fx;
                disp[j].1 -= fy;
            }
        }
        for &(a, b) in edges {
            if a == b {
                continue;
            }
            let (dx, dy) = (pos[a].0 - pos[b].0, pos[a].1 - pos[b].1);
            let d = (dx * dx + dy * dy).sqrt().max(0.01);
            let f = d * d / k;
            let (fx, fy) = (dx / d * f, dy / d * f);
            disp[a].0 -= fx;
            disp[a].1 -= fy;
            disp[b].0 += fx;
            disp[b].1 += fy;
        }
        for i in 0..n {
            if fixed.get(i).copied().flatten().is_some() {
                continue;
            }
            let (dx, dy) = disp[i];
            let d = (dx * dx + dy * dy).sqrt();
            if d > 0.0 {
                let step = d.min(t);
                pos[i].0 = (pos[i].0 + dx / d * step).clamp(0.0, width);
                pos[i].1 = (pos[i].1 + dy / d * step).clamp(0.0, height);
            }
        }
    }
    round(pos)
}

fn round(pos: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pos.into_iter()
        .map(|(x, y)| ((x * 100.0).round() / 100.0, (y * 100.0).round() / 100.0))
        .collect()
}
