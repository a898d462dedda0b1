//! L2-regularized logistic regression trained by a trust-region Newton
//! method, with one-vs-rest multiclass on top.
//!
//! The binary objective is
//!
//! ```text
//! f(w) = wᵀw / 2 + C Σᵢ log(1 + exp(−yᵢ wᵀxᵢ)),   yᵢ ∈ {−1, +1}, C > 0
//! ```
//!
//! with gradient `w + C Σ (σ(yᵢwᵀxᵢ) − 1) yᵢ xᵢ` and Hessian `I + C XᵀDX`,
//! `Dᵢᵢ = σᵢ(1 − σᵢ)`, applied matrix-free. Each outer iteration solves the
//! Newton system approximately by conjugate gradients restricted to a trust
//! region (steps stop at the boundary; CG stops at relative residual 0.1),
//! then accepts the step and adapts the radius from the ratio of actual to
//! predicted reduction (accept above 1e-4; shrink by 0.25 below 0.25; grow
//! by 2.5 above 0.75 when the step hit the boundary).
//!
//! Training always starts from w = 0 and the objective is strictly convex,
//! so results are deterministic and independent of anything but the data.
//! Multiclass reduction is one-vs-rest with a shared penalty; a constant-1
//! bias column is appended and regularized like every other weight, keeping
//! the objective exactly in the form above.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path as FsPath;

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("training data is empty")]
    EmptyProblem,
    #[error("binary labels must be -1 or +1, found {0}")]
    BadBinaryLabel(f64),
    #[error("feature matrix contains a non-finite value")]
    NonFiniteFeature,
    #[error("penalty C must be positive, got {0}")]
    BadPenalty(f64),
    #[error("row {row} has {got} features, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("training data must contain at least 2 classes, found {0}")]
    TooFewClasses(usize),
    #[error("input has dimension {got}, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A binary classification problem: dense feature rows, ±1 labels, and the
/// penalty `C`.
#[derive(Debug, Clone)]
pub struct BinaryProblem {
    x: Vec<f64>,
    n: usize,
    d: usize,
    y: Vec<f64>,
    c: f64,
}

impl BinaryProblem {
    pub fn new(rows: &[Vec<f64>], y: &[f64], c: f64) -> Result<Self, LearnError> {
        if rows.is_empty() || rows.len() != y.len() {
            return Err(LearnError::EmptyProblem);
        }
        if !(c > 0.0) {
            return Err(LearnError::BadPenalty(c));
        }
        let d = rows[0].len();
        let mut x = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(LearnError::RaggedRow { row: i, expected: d, got: row.len() });
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(LearnError::NonFiniteFeature);
                }
                x.push(v);
            }
        }
        for &label in y {
            if label != 1.0 && label != -1.0 {
                return Err(LearnError::BadBinaryLabel(label));
            }
        }
        Ok(Self { x, n: rows.len(), d, y: y.to_vec(), c })
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn penalty(&self) -> f64 {
        self.c
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }

    /// `X w` for all rows.
    fn margins(&self, w: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// `log(1 + exp(z))` without overflow for large `|z|`.
fn log1p_exp(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `1 / (1 + exp(-m))` without overflow.
fn sigmoid(m: f64) -> f64 {
    if m >= 0.0 {
        1.0 / (1.0 + (-m).exp())
    } else {
        let e = m.exp();
        e / (1.0 + e)
    }
}

/// The regularized objective `f(w)`.
pub fn objective(problem: &BinaryProblem, w: &[f64]) -> f64 {
    assert_eq!(w.len(), problem.d, "weight vector has the problem's dimension");
    let reg: f64 = w.iter().map(|v| v * v).sum::<f64>() / 2.0;
    let loss: f64 = problem
        .margins(w)
        .iter()
        .zip(&problem.y)
        .map(|(&z, &y)| log1p_exp(-y * z))
        .sum();
    reg + problem.c * loss
}

/// The gradient `w + C Σ (σ(yᵢwᵀxᵢ) − 1) yᵢ xᵢ`.
pub fn gradient(problem: &BinaryProblem, w: &[f64]) -> Vec<f64> {
    assert_eq!(w.len(), problem.d);
    let mut g = w.to_vec();
    for (i, (&z, &y)) in problem.margins(w).iter().zip(&problem.y).enumerate() {
        let coef = problem.c * (sigmoid(y * z) - 1.0) * y;
        for (gj, &xj) in g.iter_mut().zip(problem.row(i)) {
            *gj += coef * xj;
        }
    }
    g
}

/// The Hessian-vector product `(I + C XᵀDX) v` at `w`, without forming `H`.
pub fn hessian_vec(problem: &BinaryProblem, w: &[f64], v: &[f64]) -> Vec<f64> {
    assert_eq!(w.len(), problem.d);
    assert_eq!(v.len(), problem.d);
    let diag: Vec<f64> = problem
        .margins(w)
        .iter()
        .zip(&problem.y)
        .map(|(&z, &y)| {
            let s = sigmoid(y * z);
            s * (1.0 - s)
        })
        .collect();
    hessian_vec_with_diag(problem, &diag, v)
}

fn hessian_vec_with_diag(problem: &BinaryProblem, diag: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for i in 0..problem.n {
        let xi = problem.row(i);
        let xv: f64 = xi.iter().zip(v).map(|(a, b)| a * b).sum();
        let coef = problem.c * diag[i] * xv;
        for (oj, &xj) in out.iter_mut().zip(xi) {
            *oj += coef * xj;
        }
    }
    out
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Outcome metadata of one binary training run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingInfo {
    pub iterations: u32,
    pub final_grad_norm: f64,
    pub converged: bool,
}

/// Trains from `w = 0` until `‖∇f‖ ≤ tolerance · ‖∇f(0)‖` or `max_iter`.
pub fn train_binary(
    problem: &BinaryProblem,
    tolerance: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, TrainingInfo), LearnError> {
    train_binary_from(problem, tolerance, max_iter, &vec![0.0; problem.d])
}

/// Trains from an explicit starting point (the minimizer is unique, so any
/// start converges to the same weights; the default zero start keeps runs
/// reproducible).
pub fn train_binary_from(
    problem: &BinaryProblem,
    tolerance: f64,
    max_iter: usize,
    init: &[f64],
) -> Result<(Vec<f64>, TrainingInfo), LearnError> {
    if !(tolerance > 0.0) {
        return Err(LearnError::BadTolerance(tolerance));
    }
    if init.len() != problem.d {
        return Err(LearnError::DimensionMismatch { expected: problem.d, got: init.len() });
    }

    const ETA0: f64 = 1e-4;
    const ETA1: f64 = 0.25;
    const ETA2: f64 = 0.75;
    const SHRINK: f64 = 0.25;
    const GROW: f64 = 2.5;

    let mut w = init.to_vec();
    let mut f = objective(problem, &w);
    let mut g = gradient(problem, &w);
    let gnorm0 = norm(&gradient(problem, &vec![0.0; problem.d]));
    let stop = tolerance * if gnorm0 > 0.0 { gnorm0 } else { 1.0 };
    let mut delta = norm(&g).max(1e-12);
    let mut iterations = 0u32;

    while iterations < max_iter as u32 {
        let gnorm = norm(&g);
        if gnorm <= stop {
            break;
        }
        iterations += 1;

        // Curvature weights at the current point, reused by every CG step.
        let diag: Vec<f64> = problem
            .margins(&w)
            .iter()
            .zip(&problem.y)
            .map(|(&z, &y)| {
                let s = sigmoid(y * z);
                s * (1.0 - s)
            })
            .collect();

        let (s, hit_boundary) = cg_steihaug(problem, &diag, &g, delta);
        let snorm = norm(&s);

        let hs = hessian_vec_with_diag(problem, &diag, &s);
        let predicted = -(dot(&g, &s) + 0.5 * dot(&s, &hs));
        let mut trial = w.clone();
        for (t, sv) in trial.iter_mut().zip(&s) {
            *t += sv;
        }
        let f_trial = objective(problem, &trial);
        let actual = f - f_trial;
        let rho = if predicted > 0.0 { actual / predicted } else { -1.0 };

        if rho > ETA0 {
            w = trial;
            assert!(f_trial <= f, "accepted trust-region steps never increase the objective");
            f = f_trial;
            g = gradient(problem, &w);
        }
        if rho < ETA1 {
            delta = SHRINK * delta.min(snorm);
        } else if rho > ETA2 && hit_boundary {
            delta *= GROW;
        }
        if delta < 1e-300 {
            break;
        }
    }

    let final_grad_norm = norm(&g);
    let converged = final_grad_norm <= stop;
    Ok((w, TrainingInfo { iterations, final_grad_norm, converged }))
}

/// Approximately solves `H s = −g` by conjugate gradients, truncated at the
/// trust-region boundary `‖s‖ = delta`; returns the step and whether it hit
/// the boundary. CG stops at relative residual 0.1.
fn cg_steihaug(
    problem: &BinaryProblem,
    diag: &[f64],
    g: &[f64],
    delta: f64,
) -> (Vec<f64>, bool) {
    let d = g.len();
    let mut s = vec![0.0; d];
    let mut r: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let stop = 0.1 * norm(g);

    for _ in 0..(10 * d.max(10)) {
        if rr.sqrt() <= stop {
            return (s, false);
        }
        let hp = hessian_vec_with_diag(problem, diag, &p);
        let php = dot(&p, &hp);
        // H = I + C XᵀDX is positive definite, so pᵀHp > 0 whenever p ≠ 0.
        if php <= 0.0 {
            return (s, false);
        }
        let alpha = rr / php;
        let mut s_next = s.clone();
        for (sv, pv) in s_next.iter_mut().zip(&p) {
            *sv += alpha * pv;
        }
        if norm(&s_next) >= delta {
            // Step to the boundary along p: ‖s + τp‖ = delta, τ ≥ 0.
            let ss = dot(&s, &s);
            let sp = dot(&s, &p);
            let pp = dot(&p, &p);
            let disc = (sp * sp + pp * (delta * delta - ss)).max(0.0);
            let tau = (-sp + disc.sqrt()) / pp;
            for (sv, pv) in s.iter_mut().zip(&p) {
                *sv += tau * pv;
            }
            return (s, true);
        }
        s = s_next;
        for (rv, hv) in r.iter_mut().zip(&hp) {
            *rv -= alpha * hv;
        }
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        for (pv, rv) in p.iter_mut().zip(&r) {
            *pv = rv + beta * *pv;
        }
        rr = rr_next;
    }
    (s, false)
}

/// One-vs-rest multiclass linear model with per-class bias.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    classes: Vec<u8>,
    dim: usize,
    c: f64,
    iterations: Vec<u32>,
    /// Final gradient norms per class; informational, not serialized.
    grad_norms: Vec<f64>,
    /// Per class: `dim + 1` weights, bias last.
    weights: Vec<Vec<f64>>,
}

/// Options shared by every per-class training in [`train_multiclass`].
#[derive(Debug, Clone, Copy)]
pub struct TrainOptions {
    pub c: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self { c: 1.0, tolerance: 1e-4, max_iter: 100 }
    }
}

/// Trains one binary model per class label present (that class against the
/// rest), all sharing `options`.
pub fn train_multiclass(
    rows: &[Vec<f64>],
    labels: &[u8],
    options: &TrainOptions,
) -> Result<LinearModel, LearnError> {
    if rows.is_empty() || rows.len() != labels.len() {
        return Err(LearnError::EmptyProblem);
    }
    let mut classes: Vec<u8> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(LearnError::TooFewClasses(classes.len()));
    }
    let dim = rows[0].len();
    let with_bias: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut row = r.clone();
            row.push(1.0);
            row
        })
        .collect();

    let trained: Vec<Result<(Vec<f64>, TrainingInfo), LearnError>> = classes
        .par_iter()
        .map(|&class| {
            let y: Vec<f64> =
                labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
            let problem = BinaryProblem::new(&with_bias, &y, options.c)?;
            train_binary(&problem, options.tolerance, options.max_iter)
        })
        .collect();

    let mut weights = Vec::with_capacity(classes.len());
    let mut iterations = Vec::with_capacity(classes.len());
    let mut grad_norms = Vec::with_capacity(classes.len());
    for result in trained {
        let (w, info) = result?;
        weights.push(w);
        iterations.push(info.iterations);
        grad_norms.push(info.final_grad_norm);
    }
    Ok(LinearModel { classes, dim, c: options.c, iterations, grad_norms, weights })
}

impl LinearModel {
    pub fn classes(&self) -> &[u8] {
        &self.classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn penalty(&self) -> f64 {
        self.c
    }

    pub fn iterations(&self) -> &[u32] {
        &self.iterations
    }

    pub fn final_grad_norms(&self) -> &[f64] {
        &self.grad_norms
    }

    pub fn class_weights(&self, class: u8) -> Option<&[f64]> {
        let idx = self.classes.iter().position(|&c| c == class)?;
        Some(&self.weights[idx])
    }

    /// Per-class scores `wᵀ[x; 1]`, in class order.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>, LearnError> {
        if x.len() != self.dim {
            return Err(LearnError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self
            .weights
            .iter()
            .map(|w| {
                let bias = w[self.dim];
                x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() + bias
            })
            .collect())
    }

    /// The class with the highest score; ties break toward the smaller
    /// class label.
    pub fn predict(&self, x: &[f64]) -> Result<(u8, Vec<f64>), LearnError> {
        let scores = self.scores(x)?;
        let mut best = 0;
        for (j, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = j;
            }
        }
        Ok((self.classes[best], scores))
    }

    /// Writes the model as text: a `classes` / `dim` / `C` / `iterations`
    /// header, then one line of `dim + 1` weights per class, printed with 17
    /// significant digits so loading reproduces them bit-exactly.
    pub fn save<W: Write>(&self, mut w: W) -> Result<(), LearnError> {
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
        writeln!(w, "classes\t{}", join(&mut self.classes.iter().map(|c| c.to_string())))?;
        writeln!(w, "dim\t{}", self.dim)?;
        writeln!(w, "C\t{}", self.c)?;
        writeln!(w, "iterations\t{}", join(&mut self.iterations.iter().map(|i| i.to_string())))?;
        for weights in &self.weights {
            let line = join(&mut weights.iter().map(|v| format!("{v:.16e}")));
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn save_to_path<P: AsRef<FsPath>>(&self, path: P) -> Result<(), LearnError> {
        let file = File::create(path)?;
        let mut w = BufWriter::new(file);
        self.save(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load<R: BufRead>(r: R) -> Result<Self, LearnError> {
        let mut lines = r.lines().enumerate();
        let mut header = |name: &str| -> Result<(usize, String), LearnError> {
            let (lineno, line) = lines
                .next()
                .ok_or(LearnError::Parse { line: 0, message: "unexpected end of file".into() })?;
            let line = line?;
            let lineno = lineno + 1;
            let value = line
                .strip_prefix(name)
                .and_then(|rest| rest.strip_prefix('\t'))
                .ok_or_else(|| LearnError::Parse {
                    line: lineno,
                    message: format!("expected `{name}` header"),
                })?;
            Ok((lineno, value.to_string()))
        };

        let (line_no, classes_text) = header("classes")?;
        let classes: Vec<u8> = classes_text
            .split(' ')
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| LearnError::Parse { line: line_no, message: "bad class list".into() })?;
        let (line_no, dim_text) = header("dim")?;
        let dim: usize = dim_text
            .parse()
            .map_err(|_| LearnError::Parse { line: line_no, message: "bad dimension".into() })?;
        let (line_no, c_text) = header("C")?;
        let c: f64 = c_text
            .parse()
            .map_err(|_| LearnError::Parse { line: line_no, message: "bad penalty".into() })?;
        let (line_no, iter_text) = header("iterations")?;
        let iterations: Vec<u32> = iter_text
            .split(' ')
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| LearnError::Parse { line: line_no, message: "bad iteration list".into() })?;

        let mut weights = Vec::with_capacity(classes.len());
        for (lineno, line) in lines {
            let line = line?;
            let lineno = lineno + 1;
            if line.trim().is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split(' ')
                .map(|t| t.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| LearnError::Parse { line: lineno, message: "bad weight".into() })?;
            if row.len() != dim + 1 {
                return Err(LearnError::Parse {
                    line: lineno,
                    message: format!("expected {} weights, got {}", dim + 1, row.len()),
                });
            }
            weights.push(row);
        }
        if weights.len() != classes.len() {
            return Err(LearnError::Parse {
                line: 0,
                message: format!("expected {} weight rows, got {}", classes.len(), weights.len()),
            });
        }
        let grad_norms = Vec::new();
        Ok(Self { classes, dim, c, iterations, grad_norms, weights })
    }

    pub fn load_from_path<P: AsRef<FsPath>>(path: P) -> Result<Self, LearnError> {
        let file = File::open(path)?;
        Self::load(BufReader::new(file))
    }
}
