//! Node placement. Force-based layouts return raw coordinates; callers fit
//! them onto the canvas with [`fit`].

use std::collections::VecDeque;
use std::f64::consts::TAU;

use rand::Rng;

use crate::seed;

pub type Point = (f64, f64);

#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub positions: Vec<Point>,
}

const STRESS_TOLERANCE: f64 = 1e-4;
const STRESS_MAX_ITERATIONS: usize = 500;

/// All-pairs hop distances; unreachable pairs get one more than the largest
/// finite distance.
fn hop_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<f64>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for (s, row) in dist.iter_mut().enumerate() {
        row[s] = 0.0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if row[w].is_infinite() {
                    row[w] = row[u] + 1.0;
                    queue.push_back(w);
                }
            }
        }
    }
    let far = dist.iter().flatten().filter(|d| d.is_finite()).fold(0.0f64, |a, &b| a.max(b)) + 1.0;
    for d in dist.iter_mut().flatten() {
        if d.is_infinite() {
            *d = far;
        }
    }
    dist
}

fn stress(pos: &[Point], dist: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            let d = dist[i][j];
            let len = (pos[i].0 - pos[j].0).hypot(pos[i].1 - pos[j].1);
            total += (len - d).powi(2) / (d * d);
        }
    }
    total
}

fn stress_gradient(x: &[f64], dist: &[Vec<f64>]) -> Vec<f64> {
    let n = x.len() / 2;
    let mut grad = vec![0.0; x.len()];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (dx, dy) = (x[2 * i] - x[2 * j], x[2 * i + 1] - x[2 * j + 1]);
            let len = dx.hypot(dy).max(1e-9);
            let d = dist[i][j];
            let coef = 2.0 * (len - d) / (d * d * len);
            grad[2 * i] += coef * dx;
            grad[2 * i + 1] += coef * dy;
        }
    }
    grad
}

fn to_points(x: &[f64]) -> Vec<Point> {
    x.chunks(2).map(|c| (c[0], c[1])).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Stress minimisation: `sum w_ij (|p_i - p_j| - d_ij)^2` with hop distances
/// `d_ij` and `w_ij = d_ij^-2`, from a seeded random start by limited-memory
/// quasi-Newton gradient descent with a backtracking line search. Stops when
/// a step changes the energy by less than 1e-4 relatively, or after 500
/// iterations.
pub fn layout_stress(n: usize, edges: &[(usize, usize)], seed: u64) -> Layout {
    const HISTORY: usize = 7;
    if n <= 1 {
        return Layout {
            positions: vec![(0.0, 0.0); n],
        };
    }
    let dist = hop_distances(n, edges);
    let mut rng = seed::rng(seed);
    let side = (n as f64).sqrt();
    let mut x: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(0.0..side)).collect();
    let energy_of = |x: &[f64]| stress(&to_points(x), &dist);
    let mut energy = energy_of(&x);
    let mut grad = stress_gradient(&x, &dist);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    for _ in 0..STRESS_MAX_ITERATIONS {
        // two-loop recursion for the quasi-Newton direction
        let mut q = grad.clone();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|qi| *qi *= gamma);
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        if dot(&dir, &grad) >= 0.0 {
            history.clear();
            dir = grad.iter().map(|v| -v).collect();
        }
        let slope = dot(&dir, &grad);
        let mut step = 1.0;
        let mut accepted = None;
        while step > 1e-12 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let e = energy_of(&trial);
            if e <= energy + 1e-4 * step * slope {
                accepted = Some((trial, e));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, e)) = accepted else { break };
        let new_grad = stress_gradient(&trial, &dist);
        let s: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = new_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            if history.len() == HISTORY {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        let change = (energy - e) / energy.max(f64::MIN_POSITIVE);
        x = trial;
        grad = new_grad;
        energy = e;
        if change < STRESS_TOLERANCE || energy < 1e-12 {
            break;
        }
    }
    Layout { positions: to_points(&x) }
}

/// Fruchterman-Reingold with repulsion `k^2/d`, attraction `d^2/k` along
/// edges and a linearly cooling step limit, rescaled so the largest absolute
/// coordinate equals `scale`.
pub fn layout_spring(n: usize, edges: &[(usize, usize)], k: f64, iterations: usize, scale: f64, seed: u64) -> Layout {
    if n <= 1 {
        return Layout {
            positions: vec![(0.0, 0.0); n],
        };
    }
    let mut rng = seed::rng(seed);
    // start on a jittered circle sized to the natural edge length; a uniform
    // random start often leaves slow-to-unfold twists after 100 iterations
    let side = k * (n as f64).sqrt();
    let mut pos: Vec<Point> = (0..n)
        .map(|i| {
            let angle = TAU * (i as f64 + rng.gen_range(-0.1..0.1)) / n as f64;
            let radius = side / 2.0 * rng.gen_range(0.9..1.1);
            (radius * angle.cos(), radius * angle.sin())
        })
        .collect();
    let mut adjacent = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adjacent[a][b] = true;
        adjacent[b][a] = true;
    }
    let mut temperature = 0.1 * side;
    let cooling = temperature / (iterations as f64 + 1.0);
    for _ in 0..iterations {
        let mut disp = vec![(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let d = dx.hypot(dy).max(0.01);
                let attract = if adjacent[i][j] { d / k } else { 0.0 };
                // force magnitude along the unit vector: k^2/d repulsion, d^2/k attraction
                let f = (k * k / (d * d) - attract) * d;
                disp[i].0 += dx / d * f;
                disp[i].1 += dy / d * f;
            }
        }
        for (p, dsp) in pos.iter_mut().zip(&disp) {
            let len = dsp.0.hypot(dsp.1).max(0.01);
            let moved = len.min(temperature);
            p.0 += dsp.0 / len * moved;
            p.1 += dsp.1 / len * moved;
        }
        temperature -= cooling;
    }
    let (cx, cy) = (
        pos.iter().map(|p| p.0).sum::<f64>() / n as f64,
        pos.iter().map(|p| p.1).sum::<f64>() / n as f64,
    );
    let extent = pos
        .iter()
        .map(|p| (p.0 - cx).abs().max((p.1 - cy).abs()))
        .fold(0.0f64, f64::max);
    let factor = if extent > 0.0 { scale / extent } else { 0.0 };
    Layout {
        positions: pos.iter().map(|p| ((p.0 - cx) * factor, (p.1 - cy) * factor)).collect(),
    }
}

fn ring(count: usize, radius: f64) -> Vec<Point> {
    (0..count)
        .map(|i| {
            let angle = TAU * i as f64 / count as f64;
            (radius * angle.cos(), radius * angle.sin())
        })
        .collect()
}

/// Inner ring of radius 0.5 then outer ring of radius 1, each evenly spaced
/// from angle 0 in id order. Inner nodes come first in the result.
pub fn layout_shell(inner: usize, outer: usize) -> Layout {
    let mut positions = ring(inner, 0.5);
    positions.extend(ring(outer, 1.0));
    Layout { positions }
}

/// Vertices on the unit circle, hub nodes on a ring of radius 0.15 (a single
/// hub sits at the centre). Outer nodes come first.
pub fn layout_star(outer: usize, hubs: usize) -> Layout {
    let mut positions = ring(outer, 1.0);
    if hubs == 1 {
        positions.push((0.0, 0.0));
    } else {
        positions.extend(ring(hubs, 0.15));
    }
    Layout { positions }
}

/// Two evenly spaced rows directly in canvas units: top row at `0.15 h`,
/// bottom row at `0.85 h`, node `i` of `k` at `x = w (i + 1) / (k + 1)`.
pub fn layout_rows(top: usize, bottom: usize, width: f64, height: f64) -> Layout {
    let row = |count: usize, y: f64| (0..count).map(move |i| (width * (i + 1) as f64 / (count + 1) as f64, y));
    Layout {
        positions: row(top, 0.15 * height).chain(row(bottom, 0.85 * height)).collect(),
    }
}

/// Uniformly scales and centres raw coordinates into the box
/// `[x0 + margin, x0 + w - margin] x [y0 + margin, y0 + h - margin]`,
/// flipping y so that mathematical orientation is preserved on screen.
pub fn fit(layout: &Layout, x0: f64, y0: f64, w: f64, h: f64, margin: f64) -> Vec<Point> {
    let pts = &layout.positions;
    if pts.is_empty() {
        return Vec::new();
    }
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let (bw, bh) = (hi_x - lo_x, hi_y - lo_y);
    let avail = (w - 2.0 * margin, h - 2.0 * margin);
    let scale = match (bw > 1e-12, bh > 1e-12) {
        (true, true) => (avail.0 / bw).min(avail.1 / bh),
        (true, false) => avail.0 / bw,
        (false, true) => avail.1 / bh,
        (false, false) => 0.0,
    };
    let (cx, cy) = ((lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0);
    pts.iter()
        .map(|&(x, y)| (x0 + w / 2.0 + (x - cx) * scale, y0 + h / 2.0 - (y - cy) * scale))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: Point, b: Point) -> f64 {
        (a.0 - b.0).hypot(a.1 - b.1)
    }

    #[test]
    fn stress_two_nodes_reach_unit_distance() {
        let l = layout_stress(2, &[(0, 1)], 5);
        assert!((dist(l.positions[0], l.positions[1]) - 1.0).abs() < 0.01);
        assert_eq!(l, layout_stress(2, &[(0, 1)], 5));
    }

    #[test]
    fn stress_path_is_near_collinear() {
        for seed in 0..50 {
            let p = layout_stress(3, &[(0, 1), (1, 2)], seed).positions;
            let span = dist(p[0], p[2]);
            // distance of the middle node from the line through the ends
            let cross = (p[2].0 - p[0].0) * (p[1].1 - p[0].1) - (p[2].1 - p[0].1) * (p[1].0 - p[0].0);
            assert!((cross / span).abs() < 0.05 * span, "seed {seed}");
        }
    }

    #[test]
    fn spring_examples() {
        assert_eq!(layout_spring(1, &[], 2.0, 100, 3.0, 1).positions, vec![(0.0, 0.0)]);
        let cycle = [(0, 1), (1, 2), (2, 3), (3, 0)];
        for seed in 0..50 {
            let p = layout_spring(4, &cycle, 2.0, 100, 3.0, seed).positions;
            let (d02, d13) = (dist(p[0], p[2]), dist(p[1], p[3]));
            assert!((d02 - d13).abs() < 0.05 * d02.max(d13), "seed {seed}: {d02} vs {d13}");
            let extent = p.iter().map(|q| q.0.abs().max(q.1.abs())).fold(0.0, f64::max);
            assert!((extent - 3.0).abs() < 1e-9);
        }
        assert_eq!(layout_spring(4, &cycle, 2.0, 100, 3.0, 9), layout_spring(4, &cycle, 2.0, 100, 3.0, 9));
    }

    #[test]
    fn shell_and_rows() {
        let l = layout_shell(4, 0).positions;
        let expected = [(0.5, 0.0), (0.0, 0.5), (-0.5, 0.0), (0.0, -0.5)];
        for (p, e) in l.iter().zip(expected) {
            assert!(dist(*p, e) < 1e-12);
        }
        let r = layout_rows(1, 3, 1400.0, 1100.0).positions;
        assert_eq!(r[0], (700.0, 165.0));
        assert_eq!(r[1].1, 935.0);
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn fit_stays_in_bounds() {
        let l = layout_spring(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], 2.0, 100, 3.0, 3);
        for (x, y) in fit(&l, 0.0, 0.0, 1400.0, 1100.0, 80.0) {
            assert!((80.0 - 1e-9..=1320.0 + 1e-9).contains(&x) && (80.0 - 1e-9..=1020.0 + 1e-9).contains(&y));
        }
    }
}
