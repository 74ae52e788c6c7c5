//! Depth-first traversal of the Cayley tree restricted to a hyperbolic
//! neighbourhood, and the covering radius of the thick part of the core.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use rayon::prelude::*;

use super::SurfaceModel;
use crate::error::{Error, Result};
use crate::hypalg::{point_distance, IdealGeodesic, Mat2};
use crate::words::{Letter, Word};

/// Distance function from an orbit point to the region being searched.
pub(crate) type DistFn<'a> = dyn Fn(Complex64) -> f64 + Sync + 'a;

/// Parameters of one neighbourhood traversal.
pub(crate) struct Search<'a> {
    pub dist: &'a DistFn<'a>,
    /// Elements `g` with `dist(g·z₀) ≤ radius` are visited.
    pub radius: f64,
    /// Nodes with `dist ≤ expand` have their children explored.
    pub expand: f64,
    /// Every prefix of a seed is explored regardless of distance.
    pub seeds: &'a [Word],
    /// Maximum number of explored nodes.
    pub budget: usize,
}

struct Ctx<'a, 'b, F> {
    s: &'a SurfaceModel,
    p: &'a Search<'b>,
    prefixes: HashSet<Vec<Letter>>,
    count: AtomicUsize,
    visit: &'a F,
}

impl<F> Ctx<'_, '_, F> {
    /// Visits a node; returns whether its children are explored.
    fn enter<T>(&self, path: &[Letter], m: &Mat2, acc: &mut T) -> Result<bool>
    where
        F: Fn(&mut T, &[Letter], &Mat2, f64),
    {
        let d = (self.p.dist)(m.apply(self.s.basepoint()));
        if d <= self.p.radius {
            (self.visit)(acc, path, m, d);
        }
        if !(d <= self.p.expand || self.prefixes.contains(path)) {
            return Ok(false);
        }
        let n = self.count.fetch_add(1, Ordering::Relaxed);
        if n > self.p.budget {
            return Err(Error::BudgetExceeded(n));
        }
        Ok(true)
    }

    /// Preorder traversal below `path`, with an explicit stack since seed
    /// words can be far longer than a worker's call stack allows.
    fn dfs<T>(&self, path: &mut Vec<Letter>, m: Mat2, acc: &mut T) -> Result<()>
    where
        F: Fn(&mut T, &[Letter], &Mat2, f64),
    {
        let letters = (2 * self.s.rank()) as Letter;
        let mut stack: Vec<(Mat2, Letter)> = Vec::new();
        if self.enter(path, &m, acc)? {
            stack.push((m, 0));
        }
        while let Some(top) = stack.last_mut() {
            let l = top.1;
            if l == letters {
                stack.pop();
                if !stack.is_empty() {
                    path.pop();
                }
                continue;
            }
            top.1 += 1;
            if path.last() == Some(&(l ^ 1)) {
                continue;
            }
            let child = top.0 * self.s.letter_matrix(l);
            path.push(l);
            if self.enter(path, &child, acc)? {
                stack.push((child, 0));
            } else {
                path.pop();
            }
        }
        Ok(())
    }
}

impl SurfaceModel {
    /// Visits every reduced word whose orbit point lies in the neighbourhood,
    /// reached through explored ancestors. Subtrees are processed in
    /// parallel; the returned accumulators come in a fixed order.
    pub(crate) fn search<T, I, F>(&self, p: &Search<'_>, init: I, visit: F) -> Result<Vec<T>>
    where
        T: Send,
        I: Fn() -> T + Sync,
        F: Fn(&mut T, &[Letter], &Mat2, f64) + Sync,
    {
        let prefixes: HashSet<Vec<Letter>> = p
            .seeds
            .iter()
            .flat_map(|w| (0..=w.len()).map(move |k| w.letters()[..k].to_vec()))
            .collect();
        let ctx = Ctx {
            s: self,
            p,
            prefixes,
            count: AtomicUsize::new(0),
            visit: &visit,
        };
        let z0 = self.basepoint();
        let mut head = init();
        let mut roots: Vec<Vec<Letter>> = Vec::new();
        let d0 = (p.dist)(z0);
        if d0 <= p.radius {
            visit(&mut head, &[], &Mat2::IDENTITY, d0);
        }
        if d0 <= p.expand || !ctx.prefixes.is_empty() {
            for l in 0..(2 * self.rank()) as Letter {
                roots.push(vec![l]);
            }
        }
        let mut tail: Vec<T> = roots
            .into_par_iter()
            .map(|mut path| {
                let mut acc = init();
                let m = self.letters_matrix(&path);
                ctx.dfs(&mut path, m, &mut acc)?;
                Ok(acc)
            })
            .collect::<Result<Vec<T>>>()?;
        let mut out = vec![head];
        out.append(&mut tail);
        Ok(out)
    }

    /// Elements with `d(z₀, g·z₀) ≤ radius`, sorted by word.
    pub fn ball(&self, radius: f64, budget: usize) -> Result<Vec<(Word, Mat2)>> {
        let z0 = self.basepoint();
        let dist = move |z: Complex64| point_distance(z, z0);
        let p = Search {
            dist: &dist,
            radius,
            expand: radius,
            seeds: &[],
            budget,
        };
        let parts = self.search(&p, Vec::new, |acc: &mut Vec<(Word, Mat2)>, w, m, _| {
            acc.push((Word::reduce(w.iter().copied()), *m))
        })?;
        let mut out: Vec<(Word, Mat2)> = parts.into_iter().flatten().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Radius `ρ` such that every point of the convex core outside the
    /// area-1 cusp regions lies within `ρ` of an orbit point of the base
    /// point. Measured by walking rays of the Dirichlet domain at the base
    /// point.
    pub fn thick_radius(&self) -> Result<f64> {
        const DIRECTIONS: usize = 720;
        const STEP: f64 = 0.02;
        let z0 = self.basepoint();
        let mut s_max = 3.0;
        loop {
            let mut elems: Vec<(f64, Mat2)> = self
                .ball(2.0 * s_max + 3.0, 10_000_000)?
                .into_iter()
                .filter(|(w, _)| !w.is_empty())
                .map(|(_, m)| (point_distance(z0, m.apply(z0)), m))
                .collect();
            elems.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut walls: Vec<Mat2> = Vec::new();
            let mut cusps: Vec<(Mat2, f64)> = Vec::new();
            for g in std::iter::once(Mat2::IDENTITY).chain(elems.iter().map(|e| e.1)) {
                for ax in &self.boundary_axes {
                    let line: IdealGeodesic = g.apply_geodesic(ax);
                    if crate::hypalg::point_geodesic_distance(z0, &line).is_ok_and(|d| d <= s_max) {
                        walls.push(line.normalizer());
                    }
                }
                for cf in &self.cusps {
                    let inv = (g * cf.frame).inverse();
                    let h = inv.apply(z0).im;
                    if h >= cf.width || (cf.width / h).ln() <= s_max {
                        cusps.push((inv, cf.width));
                    }
                }
            }
            let outside_core = |y: Complex64| {
                walls.iter().any(|t| {
                    let (a, b) = (t.apply(y).re, t.apply(z0).re);
                    a * b < 0.0
                })
            };
            let in_cusp = |y: Complex64| cusps.iter().any(|(inv, c)| inv.apply(y).im > *c);
            let key = |y: Complex64, p: Complex64| (y - p).norm_sqr() / p.im;
            let rho = (0..DIRECTIONS)
                .into_par_iter()
                .map(|k| {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / DIRECTIONS as f64;
                    let dir = Complex64::from_polar(1.0, theta);
                    let mut best: f64 = 0.0;
                    let mut s = 0.0;
                    while s <= s_max {
                        let w = dir * (s / 2.0).tanh();
                        let y = Complex64::new(z0.re, 0.0)
                            + z0.im * Complex64::i() * (1.0 + w) / (1.0 - w);
                        let own = key(y, z0);
                        let limit = 2.0 * s + 1e-9;
                        let closer = elems
                            .iter()
                            .take_while(|e| e.0 <= limit)
                            .any(|e| key(y, e.1.apply(z0)) < own * (1.0 - 1e-12));
                        if closer || outside_core(y) {
                            break;
                        }
                        if !in_cusp(y) {
                            best = s;
                        }
                        s += STEP;
                    }
                    best
                })
                .reduce(|| 0.0, f64::max);
            if rho < s_max - 2.0 * STEP {
                // sampling along and between rays underestimates by at most this
                return Ok(rho + 0.1);
            }
            if s_max > 12.0 {
                return Err(Error::UndecidedAtCutoff { cutoff: s_max });
            }
            s_max *= 2.0;
        }
    }
}
