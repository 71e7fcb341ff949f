#![allow(dead_code)]

use rpig::core::game::{self, rng, Game, Strategy};
use rpig::core::model::{Block, CapacityLaw, OffspringLaw, Player, PrimitiveDistribution};
use rpig::core::presets::{preset, PresetId};
use rpig::core::vgf;

/// Deterministic uniforms for corpus generation.
pub struct Stream(u64);

impl Stream {
    pub fn new(seed: u64) -> Stream {
        Stream(rng::mix64(seed ^ 0xc0ff_ee00))
    }

    pub fn uniform(&mut self) -> f64 {
        self.0 = rng::mix64(self.0.wrapping_add(0x9e37_79b9_7f4a_7c15));
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: u32) -> u32 {
        (self.uniform() * f64::from(n)) as u32
    }

    fn weights(&mut self, len: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..len).map(|_| 0.05 + self.uniform()).collect();
        let total: f64 = raw.iter().sum();
        raw.iter().map(|w| w / total).collect()
    }

    fn offspring(&mut self) -> OffspringLaw {
        match self.below(3) {
            0 => OffspringLaw::PointMass(self.below(5)),
            1 => {
                let len = 1 + self.below(6) as usize;
                OffspringLaw::FinitePmf(self.weights(len))
            }
            _ => OffspringLaw::geometric(self.range(0.05, 0.9)),
        }
    }

    fn capacity(&mut self) -> CapacityLaw {
        match self.below(3) {
            0 => CapacityLaw::PointMass((self.range(0.0, 1.2) * 20.0).round() / 20.0),
            1 => {
                let a = self.range(0.0, 0.6);
                CapacityLaw::Uniform {
                    a,
                    b: a + self.range(0.1, 0.8),
                }
            }
            _ => {
                let n = 1 + self.below(4) as usize;
                let w = self.weights(n);
                let mut v = 0.0;
                CapacityLaw::FiniteDiscrete(
                    w.into_iter()
                        .map(|wi| {
                            v += self.range(0.05, 0.4);
                            (v, wi)
                        })
                        .collect(),
                )
            }
        }
    }
}

fn pmf_mean(pmf: &[f64]) -> f64 {
    pmf.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
}

/// `(label, model, k)` fuzz configurations over every preset family plus
/// random block mixtures.
pub fn corpus(size: usize) -> Vec<(String, PrimitiveDistribution, f64)> {
    let mut s = Stream::new(size as u64);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let item = match out.len() % 5 {
            0 => {
                let (l, q) = (s.range(0.3, 0.95), s.uniform());
                let k = [0.5, 1.0, 1.2][s.below(3) as usize];
                (
                    format!("geometric-escape l={l} q={q}"),
                    preset(&PresetId::GeometricEscape { l, q }),
                    k,
                )
            }
            1 => {
                let (n, q, k) = (2 + s.below(5), s.uniform(), s.range(0.0, 1.0));
                (
                    format!("nary-uniform n={n} q={q}"),
                    preset(&PresetId::NaryUniform { n, q }),
                    k,
                )
            }
            2 => {
                let offspring = s.offspring();
                let k = [0.5, 1.0][s.below(2) as usize];
                (
                    format!("classical-gw {offspring:?}"),
                    preset(&PresetId::ClassicalGw { offspring }),
                    k,
                )
            }
            3 => {
                let offspring = if s.below(2) == 0 {
                    OffspringLaw::geometric(s.range(0.05, 0.49))
                } else {
                    let pmf = s.weights(3);
                    if pmf_mean(&pmf) >= 1.0 {
                        continue;
                    }
                    OffspringLaw::FinitePmf(pmf)
                };
                let (q, k) = (s.uniform(), s.range(0.0, 1.0));
                let label = format!("finite-uniform-leaf {offspring:?} q={q}");
                (
                    label,
                    preset(&PresetId::FiniteUniformLeaf { offspring, q }),
                    k,
                )
            }
            _ => {
                let n = 1 + s.below(3) as usize;
                let w = s.weights(n);
                let blocks = w
                    .into_iter()
                    .map(|wi| {
                        let player = if s.below(2) == 0 {
                            Player::I
                        } else {
                            Player::II
                        };
                        Block::new(wi, player, s.offspring(), s.capacity(), s.capacity())
                    })
                    .collect();
                (
                    "random mixture".to_string(),
                    PrimitiveDistribution::new(blocks),
                    s.range(0.0, 1.2),
                )
            }
        };
        let (label, p, k) = item;
        out.push((label, p.expect("corpus model is valid"), k));
    }
    out
}

/// First violated vgf shape property, if any.
pub fn shape_violation(p: &PrimitiveDistribution, k: f64) -> Option<String> {
    let f = |x: f64| vgf::vgf(p, k, x);

    let grid: Vec<f64> = (0..=2048).map(|i| f(i as f64 / 2048.0)).collect();
    if let Some(i) = grid.windows(2).position(|w| w[0] > w[1] + 1e-12) {
        return Some(format!("decreasing at x = {}", i as f64 / 2048.0));
    }

    let f0 = p.prob_capacity_below(k);
    let f1 = 1.0 - p.leaf_mass_at_least(k);
    if (grid[0] - f0).abs() > 1e-12 || (grid[2048] - f1).abs() > 1e-12 {
        return Some(format!(
            "endpoints {} / {} against {f0} / {f1}",
            grid[0], grid[2048]
        ));
    }

    let d = vgf::d_param(p, k);
    if d.is_finite() {
        let h = 1e-5;
        let diff = |h: f64| (f(1.0) - f(1.0 - h)) / h;
        let slope = 2.0 * diff(h / 2.0) - diff(h);
        if (slope - d).abs() > (1e-4 * d).max(1e-6) {
            return Some(format!("slope at 1 is {slope}, d = {d}"));
        }
    }

    // Concave then convex: second differences change sign at most once,
    // from negative to positive.
    let mut last = 0i8;
    let mut changes = 0;
    for w in grid.windows(3) {
        let dd = w[0] - 2.0 * w[1] + w[2];
        let sign = if dd > 1e-9 {
            1
        } else if dd < -1e-9 {
            -1
        } else {
            0
        };
        if sign != 0 && sign != last {
            if last != 0 {
                changes += 1;
                if sign < 0 {
                    return Some("second differences turn negative after positive".into());
                }
            }
            last = sign;
        }
    }
    if changes > 1 {
        return Some(format!("{changes} inflections"));
    }

    let fp = match vgf::smallest_fixed_point(p, k, vgf::FixedPointOptions::default()) {
        Ok(fp) => fp,
        Err(e) => return Some(format!("fixed point: {e}")),
    };
    let positive = vgf::positivity(p, k).beta_positive;
    if positive != (fp.alpha < 1.0 - 1e-9) {
        return Some(format!("positivity {positive} but alpha = {}", fp.alpha));
    }
    if fp.alpha > 0.0 && fp.alpha < 1.0 {
        for i in 0..1024 {
            let x = i as f64 / 1024.0;
            let g = f(x) - x;
            if (x < fp.alpha && g < -1e-12) || (x > fp.alpha && g > 1e-12) {
                return Some(format!("f(x) - x = {g} at x = {x}, alpha = {}", fp.alpha));
            }
        }
    }
    None
}

fn all_strategies(g: &Game, owner: Player) -> Vec<Strategy> {
    let nodes: Vec<usize> = g.decision_nodes(owner).collect();
    let mut out = Vec::new();
    let mut digits = vec![1u32; nodes.len()];
    loop {
        let mut s = Strategy::new(owner);
        s.choice
            .extend(nodes.iter().copied().zip(digits.iter().copied()));
        out.push(s);
        let Some(pos) = (0..nodes.len()).find(|&i| digits[i] < g.node(nodes[i]).num_children)
        else {
            return out;
        };
        digits[pos] += 1;
        digits[..pos].iter_mut().for_each(|d| *d = 1);
    }
}

/// Max over Player I strategies of the min over Player II strategies of the
/// payoff, by enumeration.
pub fn brute_force_value(g: &Game) -> f64 {
    let replies = all_strategies(g, Player::II);
    all_strategies(g, Player::I)
        .iter()
        .map(|a| {
            replies
                .iter()
                .map(|b| game::payoff(g, a, b).unwrap())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Sampled games with at most 12 decision nodes and few strategy pairs.
pub fn small_games(count: usize) -> Vec<Game> {
    let cap = CapacityLaw::FiniteDiscrete(vec![
        (0.0, 0.2),
        (0.25, 0.2),
        (0.5, 0.2),
        (0.75, 0.2),
        (1.0, 0.2),
    ]);
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let q = 0.2 + 0.6 * (seed % 5) as f64 / 4.0;
        let off = if seed.is_multiple_of(2) {
            OffspringLaw::FinitePmf(vec![0.25, 0.25, 0.3, 0.2])
        } else {
            OffspringLaw::geometric(0.5)
        };
        let p = PrimitiveDistribution::new(vec![
            Block::new(q, Player::I, off.clone(), cap.clone(), cap.clone()),
            Block::new(1.0 - q, Player::II, off, cap.clone(), cap.clone()),
        ])
        .unwrap();
        let g = game::sample_game(&p, seed, 4, 100_000).unwrap();
        seed += 1;
        let decisions: Vec<usize> = g
            .decision_nodes(Player::I)
            .chain(g.decision_nodes(Player::II))
            .collect();
        let pairs: u64 = decisions
            .iter()
            .map(|&i| u64::from(g.node(i).num_children))
            .product();
        if decisions.len() <= 12 && pairs <= 1 << 14 {
            out.push(g);
        }
    }
    out
}
