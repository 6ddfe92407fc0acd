//! Small optimizers shared by the geometry, distance, and variance modules:
//! golden-section line search, convex minimization over the complex plane,
//! and gradient ascent on the complex unit sphere.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{vec_inner, vec_norm, vec_normalize};

/// Deterministic seed mixing (splitmix64 finalizer).
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, salt))
}

/// Standard complex Gaussian sample, variance 1 per complex entry.
pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let mut x: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        if vec_normalize(&mut x) > 1e-6 {
            return x;
        }
    }
}

/// Golden-section maximization on [a, b]; assumes a locally unimodal bump.
/// Returns (argmax, max) including the endpoints in the comparison.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        let cand = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if cand.1 > best.1 {
            best = cand;
        }
    }
    for (x, fx) in [(a, f(a)), (b, f(b))] {
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

#[derive(Clone, Debug)]
pub struct PlaneMinimum {
    pub point: Complex64,
    pub value: f64,
    /// Best value seen on the coarse seeding grid.
    pub grid_value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimize a convex f over ℂ: coarse grid over a disc, then Nelder–Mead,
/// then a compass polish that certifies a local step size below `tol`.
pub fn minimize_over_plane(
    mut f: impl FnMut(Complex64) -> f64,
    seeds: &[Complex64],
    region_center: Complex64,
    region_radius: f64,
    grid: usize,
    tol: f64,
    max_iters: usize,
) -> PlaneMinimum {
    let mut evals = 0usize;
    let radius = region_radius.max(tol);
    let mut best = (region_center, f64::INFINITY);
    let consider = |z: Complex64, fz: f64, best: &mut (Complex64, f64)| {
        if fz < best.1 {
            *best = (z, fz);
        }
    };

    let g = grid.max(3);
    for i in 0..g {
        for j in 0..g {
            let re = region_center.re + radius * (2.0 * i as f64 / (g - 1) as f64 - 1.0);
            let im = region_center.im + radius * (2.0 * j as f64 / (g - 1) as f64 - 1.0);
            let z = Complex64::new(re, im);
            let fz = f(z);
            evals += 1;
            consider(z, fz, &mut best);
        }
    }
    for &z in seeds {
        let fz = f(z);
        evals += 1;
        consider(z, fz, &mut best);
    }
    let grid_value = best.1;

    // Nelder–Mead on (re, im) from the grid winner.
    let scale = 2.0 * radius / g as f64;
    let mut simplex = [
        best.0,
        best.0 + Complex64::new(scale, 0.0),
        best.0 + Complex64::new(0.0, scale),
    ];
    let mut values = [best.1, f(simplex[1]), f(simplex[2])];
    evals += 2;
    let mut iters = 0usize;
    while iters < max_iters && evals < max_iters * 4 {
        iters += 1;
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
        let (lo, mid, hi) = (order[0], order[1], order[2]);
        let spread = values[hi] - values[lo];
        let size = (simplex[lo] - simplex[hi]).norm() + (simplex[lo] - simplex[mid]).norm();
        if spread <= tol * 0.1 && size <= tol.max(1e-14) {
            break;
        }
        let centroid = (simplex[lo] + simplex[mid]) * 0.5;
        let reflect = centroid + (centroid - simplex[hi]);
        let fr = f(reflect);
        evals += 1;
        if fr < values[lo] {
            let expand = centroid + (centroid - simplex[hi]) * 2.0;
            let fe = f(expand);
            evals += 1;
            if fe < fr {
                simplex[hi] = expand;
                values[hi] = fe;
            } else {
                simplex[hi] = reflect;
                values[hi] = fr;
            }
        } else if fr < values[mid] {
            simplex[hi] = reflect;
            values[hi] = fr;
        } else {
            let contract = centroid + (simplex[hi] - centroid) * 0.5;
            let fc = f(contract);
            evals += 1;
            if fc < values[hi] {
                simplex[hi] = contract;
                values[hi] = fc;
            } else {
                for k in 0..3 {
                    if k != lo {
                        simplex[k] = simplex[lo] + (simplex[k] - simplex[lo]) * 0.5;
                        values[k] = f(simplex[k]);
                        evals += 1;
                    }
                }
            }
        }
    }
    for k in 0..3 {
        consider(simplex[k], values[k], &mut best);
    }

    // Compass polish: robust against the kinks a max-eigenvalue objective has.
    let mut step = (scale * 0.5).max(tol * 16.0);
    let floor = (tol * 1e-3).max(1e-15 * (1.0 + radius));
    let mut polish_iters = 0usize;
    while step > floor && polish_iters < max_iters {
        polish_iters += 1;
        let mut improved = false;
        for (dx, dy) in [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (0.7071, 0.7071),
            (0.7071, -0.7071),
            (-0.7071, 0.7071),
            (-0.7071, -0.7071),
        ] {
            let z = best.0 + Complex64::new(dx * step, dy * step);
            let fz = f(z);
            evals += 1;
            if fz < best.1 {
                best = (z, fz);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    PlaneMinimum {
        point: best.0,
        value: best.1,
        grid_value,
        evals,
        converged: step <= floor.max(tol),
    }
}

#[derive(Clone, Debug)]
pub struct SphereMaximum {
    pub vector: Vec<Complex64>,
    pub value: f64,
    pub converged: bool,
    pub restarts_converged: usize,
}

/// Project onto the tangent space of the unit sphere at x (real manifold).
fn tangent_project(x: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let along = vec_inner(g, x).re;
    g.iter().zip(x).map(|(gi, xi)| gi - xi * along).collect()
}

/// Riemannian gradient ascent with backtracking over seeded restarts.
///
/// `objective` returns (value, Euclidean gradient w.r.t. conj(x)); the value
/// must be real. Deterministic for a fixed seed: restarts run in index order
/// and ties keep the earlier restart.
pub fn maximize_on_sphere(
    mut objective: impl FnMut(&[Complex64]) -> (f64, Vec<Complex64>),
    n: usize,
    deterministic_seeds: &[Vec<Complex64>],
    restarts: usize,
    seed: u64,
    max_iters: usize,
    grad_tol: f64,
) -> SphereMaximum {
    let mut best: Option<(Vec<Complex64>, f64)> = None;
    let mut restarts_converged = 0usize;
    let total = deterministic_seeds.len() + restarts;
    for r in 0..total {
        let mut x = if r < deterministic_seeds.len() {
            let mut v = deterministic_seeds[r].clone();
            if vec_normalize(&mut v) == 0.0 {
                continue;
            }
            v
        } else {
            let mut rng = rng_for(seed, 0x5f3759df ^ r as u64);
            random_unit_vector(n, &mut rng)
        };
        let (mut fx, mut gx) = objective(&x);
        let mut step = 0.5;
        let mut converged = false;
        let retract = |x: &[Complex64], dir: &[Complex64], t: f64| {
            let mut cand: Vec<Complex64> =
                x.iter().zip(dir).map(|(xi, gi)| xi + gi * t).collect();
            vec_normalize(&mut cand);
            cand
        };
        for _ in 0..max_iters {
            let rg = tangent_project(&x, &gx);
            let gnorm = vec_norm(&rg);
            if gnorm <= grad_tol * (1.0 + fx.abs()) {
                converged = true;
                break;
            }
            // Find an improving step by halving, then bracket the 1D peak:
            // shrink while t/2 is better, expand while 2t is better.
            let mut t = step;
            let mut found: Option<(Vec<Complex64>, f64, Vec<Complex64>)> = None;
            for _ in 0..60 {
                let cand = retract(&x, &rg, t);
                let (fc, gc) = objective(&cand);
                if fc > fx {
                    found = Some((cand, fc, gc));
                    break;
                }
                t *= 0.5;
                if t * gnorm < 1e-17 * (1.0 + fx.abs()) {
                    break;
                }
            }
            let Some((mut cx, mut cf, mut cg)) = found else {
                // No ascent at any resolvable step size: stationary.
                converged = true;
                break;
            };
            loop {
                let th = t * 0.5;
                if th * gnorm < 1e-17 * (1.0 + fx.abs()) {
                    break;
                }
                let cand = retract(&x, &rg, th);
                let (fc, gc) = objective(&cand);
                if fc > cf {
                    cx = cand;
                    cf = fc;
                    cg = gc;
                    t = th;
                } else {
                    break;
                }
            }
            for _ in 0..12 {
                let t2 = t * 2.0;
                let cand = retract(&x, &rg, t2);
                let (fc, gc) = objective(&cand);
                if fc > cf {
                    cx = cand;
                    cf = fc;
                    cg = gc;
                    t = t2;
                } else {
                    break;
                }
            }
            x = cx;
            fx = cf;
            gx = cg;
            step = t;
        }
        if converged {
            restarts_converged += 1;
        }
        match &best {
            Some((_, bv)) if *bv >= fx => {}
            _ => best = Some((x, fx)),
        }
    }
    let (vector, value) = best.expect("at least one restart");
    SphereMaximum {
        vector,
        value,
        converged: restarts_converged > 0,
        restarts_converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_cosine_peak() {
        let (x, v) = golden_max(|t| (t - 0.3).cos(), -1.0, 1.5, 80);
        // Position resolution is ~sqrt(eps) on a flat peak; the value is exact.
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn plane_min_quadratic() {
        let target = Complex64::new(0.4, -0.7);
        let res = minimize_over_plane(
            |z| (z - target).norm_sqr(),
            &[],
            Complex64::new(0.0, 0.0),
            2.0,
            9,
            1e-12,
            2000,
        );
        assert!((res.point - target).norm() < 1e-6);
        assert!(res.value < 1e-12);
        assert!(res.converged);
    }

    #[test]
    fn plane_min_kinked() {
        // max(|re−1|, |im+2|): kinked convex, minimum value 0 at 1−2i.
        let res = minimize_over_plane(
            |z| (z.re - 1.0).abs().max((z.im + 2.0).abs()),
            &[Complex64::new(0.9, -1.9)],
            Complex64::new(0.0, 0.0),
            3.0,
            9,
            1e-12,
            4000,
        );
        assert!(res.value < 1e-10, "value {}", res.value);
    }

    #[test]
    fn sphere_ascent_rayleigh_quotient() {
        // Maximize x†diag(1,2,5)x on the sphere: max is 5 at e3.
        let diag = [1.0, 2.0, 5.0];
        let obj = |x: &[Complex64]| {
            let value: f64 = x.iter().zip(&diag).map(|(xi, d)| d * xi.norm_sqr()).sum();
            let grad: Vec<Complex64> = x.iter().zip(&diag).map(|(xi, d)| xi * *d).collect();
            (value, grad)
        };
        let res = maximize_on_sphere(obj, 3, &[], 4, 7, 500, 1e-10);
        assert!((res.value - 5.0).abs() < 1e-8, "value {}", res.value);
        assert!(res.converged);
    }

    #[test]
    fn seed_mixing_is_deterministic() {
        assert_eq!(mix_seed(42, 1), mix_seed(42, 1));
        assert_ne!(mix_seed(42, 1), mix_seed(42, 2));
    }
}
