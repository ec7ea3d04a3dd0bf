//! Growth and merging of vortex balls as a discrete-event simulation.
//!
//! Balls start as points at the seeds and grow with `r = E_sg·t`. When two
//! balls of the plus collection meet they are replaced by a single frozen
//! ball; its growing constituents stay behind, frozen, in the minus
//! collection. A frozen merged ball saturates once `E_sg·t` catches up with
//! its radius, at which point it replaces its constituents in the minus
//! collection and grows again. The run stops when the radii sum to `η`.

use crate::error::{Error, Result};
use crate::geometry::{dist, Domain, Point};
use crate::scalar::LambdaEvaluator;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Absolute tolerance for intersection tests.
pub const GEOMETRY_TOL: f64 = 1e-12;
/// Relative tolerance when testing `r ≤ E_sg·t` for saturation.
const SATURATION_TOL: f64 = 1e-12;

/// Composition rule for the homotopy classes carried by the balls.
pub trait ClassRule {
    fn combine(&self, a: i64, b: i64) -> i64;
    fn esg(&self, label: i64) -> f64;
}

/// Circle targets: classes are degrees, `E_sg = π|d|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CircleClasses;

impl ClassRule for CircleClasses {
    fn combine(&self, a: i64, b: i64) -> i64 {
        a + b
    }
    fn esg(&self, label: i64) -> f64 {
        PI * label.unsigned_abs() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub center: Point,
    #[serde(rename = "degree")]
    pub class_label: i64,
    #[serde(default)]
    pub esg: Option<f64>,
}

impl Seed {
    pub fn new(center: Point, degree: i64) -> Self {
        Seed {
            center,
            class_label: degree,
            esg: None,
        }
    }

    pub fn esg_with(&self, rule: &dyn ClassRule) -> f64 {
        self.esg.unwrap_or_else(|| rule.esg(self.class_label))
    }

    fn validate(&self, idx: usize, rule: &dyn ClassRule) -> Result<()> {
        if !(self.center[0].is_finite() && self.center[1].is_finite()) {
            return Err(Error::InvalidSeed(format!("seed {idx} has a non-finite center")));
        }
        if self.class_label == 0 {
            return Err(Error::InvalidSeed(format!("seed {idx} has degree 0")));
        }
        let e = self.esg_with(rule);
        if !(e >= PI * (1.0 - 1e-15)) {
            return Err(Error::InvalidSeed(format!(
                "seed {idx} has singular energy {e} below pi"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallState {
    Growing,
    Frozen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Collection {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub id: usize,
    pub center: Point,
    pub radius: f64,
    pub enclosed_seed_ids: Vec<usize>,
    pub class_label: i64,
    pub esg: f64,
    pub state: BallState,
    pub collection: Collection,
}

impl Ball {
    pub fn contains_point(&self, p: Point) -> bool {
        dist(self.center, p) <= self.radius + GEOMETRY_TOL
    }

    pub fn intersects(&self, other: &Ball) -> bool {
        dist(self.center, other.center) <= self.radius + other.radius + GEOMETRY_TOL
    }

    /// Zero singular energy: null-homotopic, excluded from the topological
    /// collection.
    pub fn trivial(&self) -> bool {
        self.esg == 0.0
    }
}

/// The replacement ball `B((σ₁a₁+σ₂a₂)/(σ₁+σ₂), σ₁+σ₂)`.
pub fn merge_pair(b1: &Ball, b2: &Ball, new_id: usize, rule: &dyn ClassRule) -> Result<Ball> {
    if !b1.intersects(b2) {
        return Err(Error::NotIntersecting);
    }
    let s = b1.radius + b2.radius;
    let center = if s > 0.0 {
        [
            (b1.radius * b1.center[0] + b2.radius * b2.center[0]) / s,
            (b1.radius * b1.center[1] + b2.radius * b2.center[1]) / s,
        ]
    } else {
        [0.5 * (b1.center[0] + b2.center[0]), 0.5 * (b1.center[1] + b2.center[1])]
    };
    let mut seeds = b1.enclosed_seed_ids.clone();
    seeds.extend_from_slice(&b2.enclosed_seed_ids);
    seeds.sort_unstable();
    seeds.dedup();
    let label = rule.combine(b1.class_label, b2.class_label);
    Ok(Ball {
        id: new_id,
        center,
        radius: s,
        enclosed_seed_ids: seeds,
        class_label: label,
        esg: rule.esg(label),
        state: BallState::Frozen,
        collection: b1.collection,
    })
}

/// First intersecting pair in lexicographic id order.
fn first_intersecting(balls: &[Ball]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by_key(|&i| balls[i].id);
    for (x, &i) in order.iter().enumerate() {
        for &j in &order[x + 1..] {
            if balls[i].intersects(&balls[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Repeatedly merges the lowest-id intersecting pair until the collection is
/// pairwise disjoint. New balls get ids above every input id.
pub fn disjointify(balls: &[Ball], rule: &dyn ClassRule) -> Vec<Ball> {
    let mut out: Vec<Ball> = balls.to_vec();
    let mut next_id = out.iter().map(|b| b.id + 1).max().unwrap_or(0);
    while let Some((i, j)) = first_intersecting(&out) {
        let merged = merge_pair(&out[i], &out[j], next_id, rule).expect("pair intersects");
        next_id += 1;
        let (hi, lo) = (i.max(j), i.min(j));
        out.remove(hi);
        out.remove(lo);
        out.push(merged);
    }
    out.sort_by_key(|b| b.id);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Collision,
    Saturation,
    Termination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    /// Collision: the two colliding ids then the new id. Saturation: the
    /// saturating ball then the minus-balls it replaces. Termination: the
    /// final minus collection.
    pub ids: Vec<usize>,
}

/// Both collections right after an event.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub plus: Vec<Ball>,
    pub minus: Vec<Ball>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthState {
    pub t: f64,
    pub balls_plus: Vec<Ball>,
    pub balls_minus: Vec<Ball>,
    pub eta_target: f64,
    pub event_log: Vec<Event>,
    /// Set when no ball can grow any further before reaching `η` (e.g. all
    /// degrees cancelled).
    pub stalled: bool,
    #[serde(skip)]
    pub snapshots: Vec<Snapshot>,
}

impl GrowthState {
    pub fn radius_sum_minus(&self) -> f64 {
        self.balls_minus.iter().map(|b| b.radius).sum()
    }

    pub fn radius_sum_plus(&self) -> f64 {
        self.balls_plus.iter().map(|b| b.radius).sum()
    }

    pub fn total_esg(&self) -> f64 {
        self.balls_minus.iter().map(|b| b.esg).sum()
    }
}

/// Final minus-ball in the `merge-sim` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalBall {
    pub center: Point,
    pub radius: f64,
    pub esg: f64,
    /// Degrees of the enclosed seeds, in seed order.
    pub degrees: Vec<i64>,
}

/// `{"final_balls": [...], "events": [...]}` as written by `merge-sim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventsFile {
    pub final_balls: Vec<FinalBall>,
    pub events: Vec<Event>,
    pub t: f64,
    pub stalled: bool,
}

impl EventsFile {
    pub fn new(state: &GrowthState, seeds: &[Seed]) -> Self {
        let final_balls = state
            .balls_minus
            .iter()
            .map(|b| {
                let mut ids = b.enclosed_seed_ids.clone();
                ids.sort_unstable();
                FinalBall {
                    center: b.center,
                    radius: b.radius,
                    esg: b.esg,
                    degrees: ids.iter().map(|&i| seeds[i].class_label).collect(),
                }
            })
            .collect();
        EventsFile {
            final_balls,
            events: state.event_log.clone(),
            t: state.t,
            stalled: state.stalled,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GrowthOptions {
    pub sys: f64,
    pub t0: f64,
    pub domain: Option<Domain>,
    pub record_snapshots: bool,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            sys: 2.0 * PI,
            t0: 0.0,
            domain: None,
            record_snapshots: false,
        }
    }
}

#[derive(Debug, Clone)]
struct Node {
    center: Point,
    frozen_radius: f64,
    esg: f64,
    label: i64,
    seeds: Vec<usize>,
    growing: bool,
    in_plus: bool,
    in_minus: bool,
    /// For a frozen plus-ball: the minus-balls it stands for.
    members: Vec<usize>,
}

impl Node {
    fn radius(&self, t: f64) -> f64 {
        if self.growing {
            self.esg * t
        } else {
            self.frozen_radius
        }
    }

    fn rate(&self) -> f64 {
        if self.growing {
            self.esg
        } else {
            0.0
        }
    }
}

struct Sim<'a> {
    nodes: Vec<Node>,
    t: f64,
    log: Vec<Event>,
    snapshots: Vec<Snapshot>,
    record: bool,
    rule: &'a dyn ClassRule,
}

impl Sim<'_> {
    fn plus(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].in_plus).collect()
    }

    fn minus(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].in_minus).collect()
    }

    fn ball(&self, id: usize, collection: Collection) -> Ball {
        let n = &self.nodes[id];
        Ball {
            id,
            center: n.center,
            radius: n.radius(self.t),
            enclosed_seed_ids: n.seeds.clone(),
            class_label: n.label,
            esg: n.esg,
            state: if n.growing {
                BallState::Growing
            } else {
                BallState::Frozen
            },
            collection,
        }
    }

    fn snapshot(&mut self) {
        if self.record {
            let plus = self.plus().into_iter().map(|i| self.ball(i, Collection::Plus)).collect();
            let minus = self.minus().into_iter().map(|i| self.ball(i, Collection::Minus)).collect();
            self.snapshots.push(Snapshot {
                t: self.t,
                plus,
                minus,
            });
        }
    }

    fn collide(&mut self) {
        let t = self.t;
        loop {
            let plus = self.plus();
            let mut hit = None;
            'outer: for (x, &i) in plus.iter().enumerate() {
                for &j in &plus[x + 1..] {
                    let (a, b) = (&self.nodes[i], &self.nodes[j]);
                    if dist(a.center, b.center) <= a.radius(t) + b.radius(t) + GEOMETRY_TOL {
                        hit = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = hit else { break };
            let bi = self.ball(i, Collection::Plus);
            let bj = self.ball(j, Collection::Plus);
            let new_id = self.nodes.len();
            let merged = merge_pair(&bi, &bj, new_id, self.rule).expect("pair intersects");
            let mut members = Vec::new();
            for k in [i, j] {
                let n = &mut self.nodes[k];
                n.in_plus = false;
                if n.growing {
                    n.frozen_radius = n.esg * t;
                    n.growing = false;
                    members.push(k);
                } else {
                    members.append(&mut n.members);
                }
            }
            members.sort_unstable();
            self.nodes.push(Node {
                center: merged.center,
                frozen_radius: merged.radius,
                esg: merged.esg,
                label: merged.class_label,
                seeds: merged.enclosed_seed_ids,
                growing: false,
                in_plus: true,
                in_minus: false,
                members,
            });
            self.log.push(Event {
                t,
                kind: EventKind::Collision,
                ids: vec![i, j, new_id],
            });
            self.snapshot();
        }
    }

    fn saturate(&mut self) {
        let t = self.t;
        for i in self.plus() {
            let n = &self.nodes[i];
            if n.growing || n.esg == 0.0 {
                continue;
            }
            let reach = n.esg * t;
            if n.frozen_radius <= reach * (1.0 + SATURATION_TOL) {
                let members = std::mem::take(&mut self.nodes[i].members);
                for &m in &members {
                    self.nodes[m].in_minus = false;
                }
                let n = &mut self.nodes[i];
                n.growing = true;
                n.in_minus = true;
                let mut ids = vec![i];
                ids.extend(members);
                self.log.push(Event {
                    t,
                    kind: EventKind::Saturation,
                    ids,
                });
                self.snapshot();
            }
        }
    }

    fn next_collision(&self) -> f64 {
        let plus = self.plus();
        let mut best = f64::INFINITY;
        for (x, &i) in plus.iter().enumerate() {
            for &j in &plus[x + 1..] {
                let (a, b) = (&self.nodes[i], &self.nodes[j]);
                let rate = a.rate() + b.rate();
                if rate == 0.0 {
                    continue;
                }
                let gap = dist(a.center, b.center) - a.radius(self.t) - b.radius(self.t);
                best = best.min(self.t + gap.max(0.0) / rate);
            }
        }
        best
    }

    fn next_saturation(&self) -> f64 {
        self.plus()
            .into_iter()
            .map(|i| &self.nodes[i])
            .filter(|n| !n.growing && n.esg > 0.0)
            .map(|n| (n.frozen_radius / n.esg).max(self.t))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Runs the growth construction with circle classes.
pub fn grow_and_merge(seeds: &[Seed], eta: f64, options: &GrowthOptions) -> Result<GrowthState> {
    grow_and_merge_with(seeds, eta, options, &CircleClasses)
}

/// Admissible `η₀ = min{sys/(2π·t0), dist(seeds, ∂Ω)}`; infinite with no cap.
pub fn eta_limit(seeds: &[Seed], options: &GrowthOptions) -> Result<f64> {
    let mut limit = f64::INFINITY;
    if options.t0 > 0.0 {
        limit = limit.min(options.sys / (2.0 * PI * options.t0));
    }
    if let Some(domain) = &options.domain {
        for s in seeds {
            limit = limit.min(domain.boundary_distance(s.center)?);
        }
    }
    Ok(limit)
}

pub fn grow_and_merge_with(
    seeds: &[Seed],
    eta: f64,
    options: &GrowthOptions,
    rule: &dyn ClassRule,
) -> Result<GrowthState> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::range("eta", eta, "must be positive"));
    }
    for (i, s) in seeds.iter().enumerate() {
        s.validate(i, rule)?;
        for (j, q) in seeds.iter().enumerate().take(i) {
            if s.center == q.center {
                return Err(Error::DuplicateSeedCenters(j, i));
            }
        }
    }
    let limit = eta_limit(seeds, options)?;
    if eta > limit {
        return Err(Error::EtaTooLarge { eta, limit });
    }

    let mut sim = Sim {
        nodes: seeds
            .iter()
            .enumerate()
            .map(|(i, s)| Node {
                center: s.center,
                frozen_radius: 0.0,
                esg: s.esg_with(rule),
                label: s.class_label,
                seeds: vec![i],
                growing: true,
                in_plus: true,
                in_minus: true,
                members: Vec::new(),
            })
            .collect(),
        t: 0.0,
        log: Vec::new(),
        snapshots: Vec::new(),
        record: options.record_snapshots,
        rule,
    };
    sim.snapshot();

    let mut stalled = false;
    if !seeds.is_empty() {
        loop {
            let plus = sim.plus();
            let sum: f64 = plus.iter().map(|&i| sim.nodes[i].radius(sim.t)).sum();
            let growth: f64 = plus.iter().map(|&i| sim.nodes[i].rate()).sum();
            let t_end = if growth > 0.0 {
                sim.t + (eta - sum).max(0.0) / growth
            } else {
                f64::INFINITY
            };
            let t_next = sim.next_collision().min(sim.next_saturation());
            if t_end.is_infinite() && t_next.is_infinite() {
                stalled = true;
                break;
            }
            if t_end <= t_next {
                sim.t = t_end;
                break;
            }
            sim.t = t_next;
            sim.collide();
            sim.saturate();
        }
    }

    let minus_ids = sim.minus();
    sim.log.push(Event {
        t: sim.t,
        kind: EventKind::Termination,
        ids: minus_ids.clone(),
    });
    sim.snapshot();
    let balls_plus = sim.plus().into_iter().map(|i| sim.ball(i, Collection::Plus)).collect();
    let balls_minus = minus_ids.into_iter().map(|i| sim.ball(i, Collection::Minus)).collect();
    Ok(GrowthState {
        t: sim.t,
        balls_plus,
        balls_minus,
        eta_target: eta,
        event_log: sim.log,
        stalled,
        snapshots: sim.snapshots,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallCertificate {
    pub ball_id: usize,
    pub esg: f64,
    pub radius: f64,
    pub bound: f64,
    pub measured: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub balls: Vec<BallCertificate>,
    pub total_esg: f64,
    pub radius_sum: f64,
    pub bound: f64,
    pub measured: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Allowed shortfall `abs + rel·bound` before a certificate fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateSlack {
    pub abs: f64,
    pub rel: f64,
}

impl Default for CertificateSlack {
    fn default() -> Self {
        CertificateSlack { abs: 1e-6, rel: 0.0 }
    }
}

/// Compares `(ΣE_sg)·Λ(η/ΣE_sg)` against the energy measured in the final
/// balls, and the per-ball analogue `E_sg·Λ(r/E_sg)`.
pub fn lower_bound_certificate<F>(
    state: &GrowthState,
    lambda: &LambdaEvaluator,
    mut energy_of_ball: F,
    slack: CertificateSlack,
) -> Result<CertificateReport>
where
    F: FnMut(&Ball) -> Result<f64>,
{
    let allow = |bound: f64| slack.abs + slack.rel * bound.abs();
    let mut balls = Vec::with_capacity(state.balls_minus.len());
    for b in &state.balls_minus {
        let measured = energy_of_ball(b)?;
        let bound = if b.esg > 0.0 {
            lambda.annular_lower_bound(b.esg, 0.0, b.radius)?
        } else {
            0.0
        };
        balls.push(BallCertificate {
            ball_id: b.id,
            esg: b.esg,
            radius: b.radius,
            bound,
            measured,
            slack: measured - bound,
            pass: measured >= bound - allow(bound),
        });
    }
    let total_esg = state.total_esg();
    let radius_sum = state.radius_sum_minus();
    let bound = if total_esg > 0.0 && radius_sum > 0.0 {
        lambda.annular_lower_bound(total_esg, 0.0, radius_sum)?
    } else {
        0.0
    };
    let measured: f64 = balls.iter().map(|b| b.measured).sum();
    Ok(CertificateReport {
        balls,
        total_esg,
        radius_sum,
        bound,
        measured,
        slack: measured - bound,
        pass: measured >= bound - allow(bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(id: usize, c: Point, r: f64, d: i64) -> Ball {
        Ball {
            id,
            center: c,
            radius: r,
            enclosed_seed_ids: vec![id],
            class_label: d,
            esg: PI * d.unsigned_abs() as f64,
            state: BallState::Frozen,
            collection: Collection::Plus,
        }
    }

    #[test]
    fn merge_examples() {
        let m = merge_pair(&ball(0, [0.0, 0.0], 1.0, 1), &ball(1, [1.5, 0.0], 1.0, 1), 2, &CircleClasses).unwrap();
        assert_eq!(m.center, [0.75, 0.0]);
        assert_eq!(m.radius, 2.0);
        assert_eq!(m.esg, 2.0 * PI);
        let m = merge_pair(&ball(0, [0.0, 0.0], 1.0, 1), &ball(1, [0.0, 0.0], 1.0, -1), 2, &CircleClasses).unwrap();
        assert_eq!(m.center, [0.0, 0.0]);
        assert!(m.trivial());
        assert!(matches!(
            merge_pair(&ball(0, [0.0, 0.0], 1.0, 1), &ball(1, [3.0, 0.0], 1.0, 1), 2, &CircleClasses),
            Err(Error::NotIntersecting)
        ));
    }

    #[test]
    fn disjointify_chain() {
        let input = vec![
            ball(0, [0.0, 0.0], 1.0, 1),
            ball(1, [1.8, 0.0], 1.0, 1),
            ball(2, [3.6, 0.0], 1.0, 1),
        ];
        let out = disjointify(&input, &CircleClasses);
        assert_eq!(out.len(), 1);
        assert!((out[0].radius - 3.0).abs() < 1e-15);
        assert!(disjointify(&[], &CircleClasses).is_empty());
        let sep = vec![ball(0, [0.0, 0.0], 1.0, 1), ball(1, [5.0, 0.0], 1.0, 1)];
        assert_eq!(disjointify(&sep, &CircleClasses), sep);
    }

    #[test]
    fn single_seed() {
        let s = grow_and_merge(&[Seed::new([0.2, 0.1], 1)], 0.1, &GrowthOptions::default()).unwrap();
        assert_eq!(s.balls_minus.len(), 1);
        assert!((s.balls_minus[0].radius - 0.1).abs() < 1e-15);
        assert_eq!(s.balls_minus[0].center, [0.2, 0.1]);
        assert_eq!(s.event_log.len(), 1);
        assert_eq!(s.event_log[0].kind, EventKind::Termination);
    }

    #[test]
    fn two_separated_seeds() {
        let seeds = [Seed::new([-0.5, 0.0], 1), Seed::new([0.5, 0.0], 1)];
        let s = grow_and_merge(&seeds, 0.2, &GrowthOptions::default()).unwrap();
        assert_eq!(s.balls_minus.len(), 2);
        for b in &s.balls_minus {
            assert!((b.radius - 0.1).abs() < 1e-15);
        }
        assert_eq!(s.event_log.len(), 1);
    }

    #[test]
    fn close_pair_merges_and_saturates() {
        let seeds = [Seed::new([-0.05, 0.0], 1), Seed::new([0.05, 0.0], 1)];
        let s = grow_and_merge(&seeds, 0.5, &GrowthOptions::default()).unwrap();
        let kinds: Vec<EventKind> = s.event_log.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, [EventKind::Collision, EventKind::Saturation, EventKind::Termination]);
        let tc = 0.1 / (2.0 * PI);
        assert!((s.event_log[0].t - tc).abs() < 1e-15);
        assert_eq!(s.event_log[1].t, s.event_log[0].t);
        assert_eq!(s.event_log[1].ids, vec![2, 0, 1]);
        assert_eq!(s.balls_minus.len(), 1);
        let b = &s.balls_minus[0];
        assert!(b.center[0].abs() < 1e-15 && b.center[1] == 0.0);
        assert!((b.radius - 0.5).abs() < 1e-12);
        assert!((s.t - 0.5 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn cancelling_pair_stalls() {
        let seeds = [Seed::new([-0.05, 0.0], 1), Seed::new([0.05, 0.0], -1)];
        let s = grow_and_merge(&seeds, 0.5, &GrowthOptions::default()).unwrap();
        assert!(s.stalled);
        assert_eq!(s.balls_minus.len(), 2);
        assert!(s.balls_plus[0].trivial());
        assert!((s.radius_sum_minus() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let o = GrowthOptions::default();
        assert!(matches!(
            grow_and_merge(&[Seed::new([0.0, 0.0], 1), Seed::new([0.0, 0.0], 1)], 0.1, &o),
            Err(Error::DuplicateSeedCenters(0, 1))
        ));
        assert!(grow_and_merge(&[Seed::new([0.0, 0.0], 0)], 0.1, &o).is_err());
        let disk = GrowthOptions {
            domain: Some(Domain::UnitDisk),
            ..o
        };
        assert!(matches!(
            grow_and_merge(&[Seed::new([0.8, 0.0], 1)], 0.3, &disk),
            Err(Error::EtaTooLarge { .. })
        ));
    }

    #[test]
    fn empty_certificate_is_vacuous() {
        let s = grow_and_merge(&[], 0.3, &GrowthOptions::default()).unwrap();
        let l = LambdaEvaluator::circle(crate::Integrand::truncated_quadratic(10.0).unwrap()).unwrap();
        let r = lower_bound_certificate(&s, &l, |_| Ok(0.0), CertificateSlack::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn zero_energy_callback_fails() {
        let s = grow_and_merge(&[Seed::new([0.0, 0.0], 1)], 0.5, &GrowthOptions::default()).unwrap();
        let l = LambdaEvaluator::circle(crate::Integrand::truncated_quadratic(10.0).unwrap()).unwrap();
        let r = lower_bound_certificate(&s, &l, |_| Ok(0.0), CertificateSlack::default()).unwrap();
        assert!(!r.pass);
        assert!(r.bound > 0.0);
    }
}
