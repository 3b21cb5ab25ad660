//! One-dimensional quadrature helpers and compensated summation.

use num_complex::Complex64;
use std::sync::OnceLock;

/// Neumaier-compensated accumulator for real sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Pairwise (tree) sum; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Newton iteration on P_n from the Chebyshev-like initial guesses.
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_p(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_p(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = NeumaierSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s.add(w * f(c + h * x));
        }
        s.value() * h
    }

    pub fn integrate_c<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = ComplexSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s.add(f(c + h * x) * *w);
        }
        s.value() * h
    }
}

fn legendre_p(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached rule; only the sizes used in the crate are memoized.
pub fn gauss(n: usize) -> &'static GaussRule {
    static G10: OnceLock<GaussRule> = OnceLock::new();
    static G20: OnceLock<GaussRule> = OnceLock::new();
    static G32: OnceLock<GaussRule> = OnceLock::new();
    static G64: OnceLock<GaussRule> = OnceLock::new();
    match n {
        10 => G10.get_or_init(|| GaussRule::legendre(10)),
        20 => G20.get_or_init(|| GaussRule::legendre(20)),
        32 => G32.get_or_init(|| GaussRule::legendre(32)),
        64 => G64.get_or_init(|| GaussRule::legendre(64)),
        _ => panic!("no cached Gauss rule of size {n}"),
    }
}

/// Outcome of an adaptive 1D integration.
#[derive(Debug, Clone, Copy)]
pub struct Quad1 {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Interval budget for the adaptive 1D rules.
pub const MAX_INTERVALS: usize = 4000;

struct Piece<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

// Global adaptive refinement: always bisect the piece with the largest error
// estimate, where the estimate compares a 20-point rule with its two halves.
fn global_adaptive<T, R>(rule: R, a: f64, b: f64, abs_tol: f64, rel_tol: f64, norm: fn(T) -> f64) -> (T, f64, usize)
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
    R: Fn(f64, f64) -> T,
{
    let split = |a: f64, b: f64, whole: T| -> [Piece<T>; 2] {
        let m = 0.5 * (a + b);
        let l = rule(a, m);
        let r = rule(m, b);
        let e = norm(l + r - whole) * 0.5;
        [Piece { a, b: m, value: l, err: e }, Piece { a: m, b, value: r, err: e }]
    };
    let whole = rule(a, b);
    let mut pieces: Vec<Piece<T>> = split(a, b, whole).into();
    loop {
        let total_err: f64 = pieces.iter().map(|p| p.err).sum();
        let mut total = pieces[0].value;
        for p in &pieces[1..] {
            total = total + p.value;
        }
        let tol = abs_tol.max(rel_tol * norm(total));
        if total_err <= tol || pieces.len() >= MAX_INTERVALS {
            // Re-sum in positional order for a result independent of refinement history.
            pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
            let mut total = pieces[0].value;
            for p in &pieces[1..] {
                total = total + p.value;
            }
            return (total, total_err, pieces.len());
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("non-empty");
        let p = pieces.swap_remove(worst);
        if p.b - p.a <= 1e-14 * (p.a.abs() + p.b.abs()) {
            // Cannot bisect further; keep the estimate but stop refining it.
            pieces.push(Piece { err: 0.0, ..p });
            continue;
        }
        pieces.extend(split(p.a, p.b, p.value));
    }
}

/// Adaptive integration of a real function over [a, b].
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quad1 {
    let g = gauss(20);
    let (value, error, intervals) = global_adaptive(|x, y| g.integrate(x, y, f), a, b, abs_tol, rel_tol, |v: f64| v.abs());
    Quad1 { value, error, intervals }
}

/// Complex variant of [`adaptive`], returning (value, error estimate).
pub fn adaptive_c<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (Complex64, f64) {
    let g = gauss(20);
    let (value, error, _) = global_adaptive(|x, y| g.integrate_c(x, y, f), a, b, abs_tol, rel_tol, |v: Complex64| v.norm());
    (value, error)
}
