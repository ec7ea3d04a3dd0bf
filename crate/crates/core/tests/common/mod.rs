#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use vortexkit::geometry::dist;
use vortexkit::merging::{grow_and_merge, Ball, GrowthOptions, Seed};

/// Final ball of the explicit simulator.
#[derive(Debug, Clone)]
pub struct OracleBall {
    pub seeds: Vec<usize>,
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub balls: Vec<OracleBall>,
    pub stalled: bool,
    pub steps: u64,
}

#[derive(Clone)]
struct B {
    center: [f64; 2],
    r: f64,
    esg: f64,
    deg: i64,
    seeds: Vec<usize>,
    growing: bool,
    alive: bool,
    /// frozen sub-balls standing in for this one in the topological collection
    parts: Vec<(Vec<usize>, [f64; 2], f64)>,
}

/// Explicit time stepping with `dt = 1e-7·η/max E`: radii advance by
/// `E·dt` per step, collisions and saturations are only noticed on the step
/// grid. Runs of steps with no possible event are taken in one go.
pub fn oracle_grow(centers: &[[f64; 2]], degrees: &[i64], eta: f64) -> OracleResult {
    let mut balls: Vec<B> = centers
        .iter()
        .zip(degrees)
        .enumerate()
        .map(|(i, (&c, &d))| B {
            center: c,
            r: 0.0,
            esg: PI * d.unsigned_abs() as f64,
            deg: d,
            seeds: vec![i],
            growing: true,
            alive: true,
            parts: Vec::new(),
        })
        .collect();
    let max_e = balls.iter().map(|b| b.esg).fold(0.0, f64::max);
    let dt = 1e-7 * eta / max_e;
    let mut t = 0.0f64;
    let mut steps = 0u64;
    let mut stalled = false;

    loop {
        // merge to fixpoint, lowest index pair first
        loop {
            let live: Vec<usize> = (0..balls.len()).filter(|&i| balls[i].alive).collect();
            let mut hit = None;
            'o: for (x, &i) in live.iter().enumerate() {
                for &j in &live[x + 1..] {
                    let (a, b) = (&balls[i], &balls[j]);
                    let dx = a.center[0] - b.center[0];
                    let dy = a.center[1] - b.center[1];
                    let s = a.r + b.r;
                    if dx * dx + dy * dy <= s * s * (1.0 + 1e-12) {
                        hit = Some((i, j));
                        break 'o;
                    }
                }
            }
            let Some((i, j)) = hit else { break };
            let (a, b) = (balls[i].clone(), balls[j].clone());
            let r = a.r + b.r;
            let center = [
                (a.r * a.center[0] + b.r * b.center[0]) / r,
                (a.r * a.center[1] + b.r * b.center[1]) / r,
            ];
            let deg = a.deg + b.deg;
            let mut parts = Vec::new();
            for x in [&a, &b] {
                if x.growing {
                    parts.push((x.seeds.clone(), x.center, x.r));
                } else {
                    parts.extend(x.parts.iter().cloned());
                }
            }
            let mut seeds = a.seeds.clone();
            seeds.extend(&b.seeds);
            seeds.sort_unstable();
            balls[i].alive = false;
            balls[j].alive = false;
            balls.push(B {
                center,
                r,
                esg: PI * deg.unsigned_abs() as f64,
                deg,
                seeds,
                growing: false,
                alive: true,
                parts,
            });
        }
        // saturation
        for b in balls.iter_mut().filter(|b| b.alive && !b.growing && b.esg > 0.0) {
            if b.r <= b.esg * t * (1.0 + 1e-9) {
                b.growing = true;
                b.parts.clear();
            }
        }

        let live: Vec<usize> = (0..balls.len()).filter(|&i| balls[i].alive).collect();
        let sum: f64 = live.iter().map(|&i| balls[i].r).sum();
        let rate: f64 = live.iter().filter(|&&i| balls[i].growing).map(|&i| balls[i].esg).sum();
        let pending_saturation = live.iter().any(|&i| !balls[i].growing && balls[i].esg > 0.0);
        if rate == 0.0 && !pending_saturation {
            stalled = true;
            break;
        }
        if rate > 0.0 && sum + rate * dt >= eta {
            let last = (eta - sum) / rate;
            for &i in &live {
                if balls[i].growing {
                    balls[i].r += balls[i].esg * last;
                }
            }
            steps += 1;
            break;
        }

        // whole steps that cannot contain an event
        let mut k = f64::INFINITY;
        if rate > 0.0 {
            k = k.min(((eta - sum) / (rate * dt)).floor() - 1.0);
        }
        for (x, &i) in live.iter().enumerate() {
            for &j in &live[x + 1..] {
                let (a, b) = (&balls[i], &balls[j]);
                let v = if a.growing { a.esg } else { 0.0 } + if b.growing { b.esg } else { 0.0 };
                if v > 0.0 {
                    let dx = a.center[0] - b.center[0];
                    let dy = a.center[1] - b.center[1];
                    let gap = (dx * dx + dy * dy).sqrt() - a.r - b.r;
                    k = k.min((gap / (v * dt)).floor() - 1.0);
                }
            }
            let b = &balls[i];
            if !b.growing && b.esg > 0.0 {
                k = k.min((b.r / b.esg - t) / dt - 1.0);
            }
        }
        let k = if k.is_finite() { k.max(1.0) } else { 1.0 };
        for &i in &live {
            if balls[i].growing {
                balls[i].r += balls[i].esg * dt * k;
            }
        }
        t += dt * k;
        steps += k as u64;
    }

    let mut out = Vec::new();
    for b in balls.iter().filter(|b| b.alive) {
        if b.growing {
            out.push(OracleBall {
                seeds: b.seeds.clone(),
                center: b.center,
                radius: b.r,
            });
        } else if b.parts.is_empty() {
            // never grown: only seeds at time zero
            out.push(OracleBall {
                seeds: b.seeds.clone(),
                center: b.center,
                radius: b.r,
            });
        } else {
            for (s, c, r) in &b.parts {
                out.push(OracleBall {
                    seeds: s.clone(),
                    center: *c,
                    radius: *r,
                });
            }
        }
    }
    out.sort_by(|a, b| a.seeds.cmp(&b.seeds));
    OracleResult {
        balls: out,
        stalled,
        steps,
    }
}

/// Central-difference directional derivative.
pub fn central_difference(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (f(h) - f(-h)) / (2.0 * h)
}

/// Compares against the explicit stepper on random instances with ≤ 4 seeds.
pub fn oracle_agreement(n: usize, seed: u64) -> (usize, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut mismatched = 0;
    for _ in 0..n {
        let k = rng.gen_range(1..=4);
        let centers: Vec<[f64; 2]> = (0..k).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        let degrees: Vec<i64> = (0..k).map(|_| [-2, -1, 1, 2][rng.gen_range(0..4)]).collect();
        let eta = rng.gen_range(0.05..1.0);
        let seeds: Vec<Seed> = centers.iter().zip(&degrees).map(|(&c, &d)| Seed::new(c, d)).collect();
        let s = grow_and_merge(&seeds, eta, &GrowthOptions::default()).unwrap();
        let o = oracle_grow(&centers, &degrees, eta);
        let mut fin: Vec<&Ball> = s.balls_minus.iter().collect();
        fin.sort_by(|a, b| a.enclosed_seed_ids.cmp(&b.enclosed_seed_ids));
        if fin.len() != o.balls.len() || s.stalled != o.stalled {
            mismatched += 1;
            continue;
        }
        for (a, b) in fin.iter().zip(&o.balls) {
            let mut ids = a.enclosed_seed_ids.clone();
            ids.sort_unstable();
            if ids != b.seeds {
                mismatched += 1;
                break;
            }
            worst = worst.max((a.radius - b.radius).abs()).max(dist(a.center, b.center));
        }
    }
    (mismatched, worst)
}
