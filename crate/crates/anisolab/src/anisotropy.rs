//! Pointwise Finsler-metric toolkit: the anisotropy density a(x,p), its
//! p-derivatives, the induced metric phi0 = sqrt(2a), the dual metric, and
//! sampled validity/constant estimation.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geom::{Mat2, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Finite-difference step for user-supplied densities (curvature-safe scale).
fn fd_step(p: Vec2) -> f64 {
    1e-6 * (1.0 + p.norm())
}

type UserDensity = Arc<dyn Fn(Vec2, Vec2) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    /// a = |p|^2 / 2
    Euclidean,
    /// a = p.Ap / 2 for a constant SPD matrix A
    Ellipsoidal(Mat2),
    /// a = gamma(theta)^2 |p|^2 / 2 with gamma = 1 + delta cos(4 theta)
    Fourfold(f64),
    /// closed-form unavailable; derivatives by central differences
    User(UserDensity),
}

#[derive(Clone)]
enum Weight {
    One,
    Expr(Arc<Expr>),
    Fn(Arc<dyn Fn(Vec2) -> f64 + Send + Sync>),
}

/// Human-readable preset tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetTag {
    Euclidean,
    Ellipsoidal,
    Fourfold,
    User,
}

/// The pair (a(x,p), m(x)) with derivative access.
#[derive(Clone)]
pub struct AnisotropyField {
    kind: Kind,
    weight: Weight,
    pub dim: usize,
}

/// Sampled metric constants; `sampled` marks them non-certified.
#[derive(Clone, Copy, Debug)]
pub struct MetricConstants {
    pub lambda0: f64,
    pub lambda0_big: f64,
    pub lambda2: f64,
    pub lambda2_big: f64,
    pub beta_mono: f64,
    pub cl: f64,
    pub sampled: bool,
}

impl AnisotropyField {
    pub fn euclidean() -> AnisotropyField {
        AnisotropyField {
            kind: Kind::Euclidean,
            weight: Weight::One,
            dim: 2,
        }
    }

    /// a(x,p) = p.Ap/2 for a constant symmetric positive definite A.
    pub fn ellipsoidal(a: Mat2) -> Result<AnisotropyField> {
        if !a.is_positive_definite() {
            return Err(Error::ConvexityViolation(
                "ellipsoidal matrix is not positive definite".into(),
            ));
        }
        Ok(AnisotropyField {
            kind: Kind::Ellipsoidal(a),
            weight: Weight::One,
            dim: 2,
        })
    }

    /// Smooth four-fold anisotropy gamma(theta) = 1 + delta cos(4 theta).
    /// Strict convexity requires delta < 1/15.
    pub fn fourfold(delta: f64) -> Result<AnisotropyField> {
        if !(delta >= 0.0) || delta >= 1.0 / 15.0 {
            return Err(Error::ConvexityViolation(format!(
                "fourfold delta = {delta} outside [0, 1/15)"
            )));
        }
        Ok(AnisotropyField {
            kind: Kind::Fourfold(delta),
            weight: Weight::One,
            dim: 2,
        })
    }

    /// User density; only a(x,p) is supplied, derivatives are numerical.
    /// No convexity check at construction; `estimate_constants` reports
    /// violations.
    pub fn user(f: impl Fn(Vec2, Vec2) -> f64 + Send + Sync + 'static) -> AnisotropyField {
        AnisotropyField {
            kind: Kind::User(Arc::new(f)),
            weight: Weight::One,
            dim: 2,
        }
    }

    pub fn with_weight_expr(mut self, m: Expr) -> AnisotropyField {
        self.weight = Weight::Expr(Arc::new(m));
        self
    }

    pub fn with_weight_fn(
        mut self,
        m: impl Fn(Vec2) -> f64 + Send + Sync + 'static,
    ) -> AnisotropyField {
        self.weight = Weight::Fn(Arc::new(m));
        self
    }

    pub fn tag(&self) -> PresetTag {
        match self.kind {
            Kind::Euclidean => PresetTag::Euclidean,
            Kind::Ellipsoidal(_) => PresetTag::Ellipsoidal,
            Kind::Fourfold(_) => PresetTag::Fourfold,
            Kind::User(_) => PresetTag::User,
        }
    }

    /// Whether a(x,p) actually depends on x (presets do not; user may).
    pub fn a_is_x_independent(&self) -> bool {
        !matches!(self.kind, Kind::User(_))
    }

    /// The weight m(x).
    pub fn m(&self, x: Vec2) -> f64 {
        match &self.weight {
            Weight::One => 1.0,
            Weight::Expr(e) => e.eval_xy(x.x, x.y),
            Weight::Fn(f) => f(x),
        }
    }

    pub fn m_is_one(&self) -> bool {
        matches!(self.weight, Weight::One)
    }

    /// grad log m by central differences (zero for the unit weight).
    pub fn grad_log_m(&self, x: Vec2) -> Vec2 {
        if self.m_is_one() {
            return Vec2::ZERO;
        }
        let s = 1e-6;
        let dx = (self.m(Vec2::new(x.x + s, x.y)).ln() - self.m(Vec2::new(x.x - s, x.y)).ln())
            / (2.0 * s);
        let dy = (self.m(Vec2::new(x.x, x.y + s)).ln() - self.m(Vec2::new(x.x, x.y - s)).ln())
            / (2.0 * s);
        Vec2::new(dx, dy)
    }

    /// a(x,p); exactly 0 at p = 0.
    pub fn eval_a(&self, x: Vec2, p: Vec2) -> Result<f64> {
        if !p.is_finite() || !x.is_finite() {
            return Err(Error::InvalidInput("non-finite input to eval_a".into()));
        }
        Ok(self.a_raw(x, p))
    }

    #[inline]
    fn a_raw(&self, x: Vec2, p: Vec2) -> f64 {
        if p.x == 0.0 && p.y == 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Euclidean => 0.5 * p.norm_sq(),
            Kind::Ellipsoidal(a) => 0.5 * a.quad_form(p),
            Kind::Fourfold(delta) => {
                let gamma = 1.0 + delta * (4.0 * p.y.atan2(p.x)).cos();
                0.5 * gamma * gamma * p.norm_sq()
            }
            Kind::User(f) => f(x, p),
        }
    }

    /// a_p(x,p); the zero covector at p = 0.
    pub fn eval_ap(&self, x: Vec2, p: Vec2) -> Result<Vec2> {
        if !p.is_finite() || !x.is_finite() {
            return Err(Error::InvalidInput("non-finite input to eval_ap".into()));
        }
        Ok(self.ap_raw(x, p))
    }

    #[inline]
    pub(crate) fn ap_raw(&self, x: Vec2, p: Vec2) -> Vec2 {
        if p.x == 0.0 && p.y == 0.0 {
            return Vec2::ZERO;
        }
        match &self.kind {
            Kind::Euclidean => p,
            Kind::Ellipsoidal(a) => a.apply(p),
            Kind::Fourfold(delta) => {
                let theta = p.y.atan2(p.x);
                let gamma = 1.0 + delta * (4.0 * theta).cos();
                let dgamma = -4.0 * delta * (4.0 * theta).sin();
                // a_p = gamma^2 p + gamma gamma' (-p2, p1)
                p * (gamma * gamma) + p.perp() * (gamma * dgamma)
            }
            Kind::User(f) => {
                let s = fd_step(p);
                let ax = (f(x, Vec2::new(p.x + s, p.y)) - f(x, Vec2::new(p.x - s, p.y)))
                    / (2.0 * s);
                let ay = (f(x, Vec2::new(p.x, p.y + s)) - f(x, Vec2::new(p.x, p.y - s)))
                    / (2.0 * s);
                Vec2::new(ax, ay)
            }
        }
    }

    /// a_pp(x,p); undefined (singular) at p = 0.
    pub fn eval_app(&self, x: Vec2, p: Vec2) -> Result<Mat2> {
        if !p.is_finite() || !x.is_finite() {
            return Err(Error::InvalidInput("non-finite input to eval_app".into()));
        }
        if p.x == 0.0 && p.y == 0.0 {
            return Err(Error::SingularDirection("a_pp"));
        }
        Ok(match &self.kind {
            Kind::Euclidean => Mat2::IDENTITY,
            Kind::Ellipsoidal(a) => *a,
            Kind::Fourfold(delta) => {
                let theta = p.y.atan2(p.x);
                let c4 = (4.0 * theta).cos();
                let s4 = (4.0 * theta).sin();
                let gamma = 1.0 + delta * c4;
                let dg = -4.0 * delta * s4;
                let ddg = -16.0 * delta * c4;
                let r = p.norm();
                let e = p / r;
                let ep = e.perp();
                // In the (e, e_perp) frame:
                //   [ gamma^2            gamma gamma'                 ]
                //   [ gamma gamma'       gamma^2 + gamma'^2 + g g''   ]
                let m_ee = gamma * gamma;
                let m_eq = gamma * dg;
                let m_qq = gamma * gamma + dg * dg + gamma * ddg;
                Mat2 {
                    xx: m_ee * e.x * e.x + 2.0 * m_eq * e.x * ep.x + m_qq * ep.x * ep.x,
                    xy: m_ee * e.x * e.y + m_eq * (e.x * ep.y + e.y * ep.x) + m_qq * ep.x * ep.y,
                    yy: m_ee * e.y * e.y + 2.0 * m_eq * e.y * ep.y + m_qq * ep.y * ep.y,
                }
            }
            Kind::User(f) => {
                let s = fd_step(p);
                let at = |dx: f64, dy: f64| f(x, Vec2::new(p.x + dx, p.y + dy));
                let xx = (at(s, 0.0) - 2.0 * at(0.0, 0.0) + at(-s, 0.0)) / (s * s);
                let yy = (at(0.0, s) - 2.0 * at(0.0, 0.0) + at(0.0, -s)) / (s * s);
                let xy = (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4.0 * s * s);
                Mat2 { xx, xy, yy }
            }
        })
    }

    /// phi0(x,p) = sqrt(2 a(x,p)); the metric acting on gradients.
    pub fn phi0(&self, x: Vec2, p: Vec2) -> Result<f64> {
        Ok((2.0 * self.eval_a(x, p)?).max(0.0).sqrt())
    }

    #[inline]
    pub(crate) fn phi0_raw(&self, x: Vec2, p: Vec2) -> f64 {
        (2.0 * self.a_raw(x, p)).max(0.0).sqrt()
    }

    /// phi0_p(x,p) = a_p(x,p) / phi0(x,p); singular at p = 0.
    pub fn phi0_grad(&self, x: Vec2, p: Vec2) -> Result<Vec2> {
        if p.x == 0.0 && p.y == 0.0 {
            return Err(Error::SingularDirection("phi0_grad"));
        }
        let phi0 = self.phi0(x, p)?;
        Ok(self.eval_ap(x, p)? / phi0)
    }

    /// The map T0: identical to a_p including the zero convention.
    pub fn t0(&self, x: Vec2, p: Vec2) -> Result<Vec2> {
        self.eval_ap(x, p)
    }

    /// Dual metric phi(x,xi) = sup { xi . p : phi0(x,p) <= 1 }, the metric
    /// acting on velocities/paths. Angle scan plus golden-section refinement.
    pub fn dual_metric(&self, x: Vec2, xi: Vec2) -> Result<f64> {
        if !xi.is_finite() || !x.is_finite() {
            return Err(Error::InvalidInput("non-finite input to dual_metric".into()));
        }
        if xi.x == 0.0 && xi.y == 0.0 {
            return Ok(0.0);
        }
        let objective = |theta: f64| -> f64 {
            let w = Vec2::angle(theta);
            xi.dot(w) / self.phi0_raw(x, w)
        };
        const N: usize = 256;
        let mut best_k = 0;
        let mut best = f64::NEG_INFINITY;
        for k in 0..N {
            let v = objective(2.0 * std::f64::consts::PI * k as f64 / N as f64);
            if v > best {
                best = v;
                best_k = k;
            }
        }
        let step = 2.0 * std::f64::consts::PI / N as f64;
        let mut lo = (best_k as f64 - 1.0) * step;
        let mut hi = (best_k as f64 + 1.0) * step;
        // golden-section: phi0 strictly convex makes the restricted sup well-behaved
        let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        let mut m1 = hi - inv_phi * (hi - lo);
        let mut m2 = lo + inv_phi * (hi - lo);
        let mut f1 = objective(m1);
        let mut f2 = objective(m2);
        for _ in 0..80 {
            if f1 < f2 {
                lo = m1;
                m1 = m2;
                f1 = f2;
                m2 = lo + inv_phi * (hi - lo);
                f2 = objective(m2);
            } else {
                hi = m2;
                m2 = m1;
                f2 = f1;
                m1 = hi - inv_phi * (hi - lo);
                f1 = objective(m1);
            }
        }
        Ok(best.max(f1).max(f2))
    }

    /// Sampled estimation of the metric constants. `sample_count >= 64`.
    pub fn estimate_constants(&self, sample_count: usize) -> Result<MetricConstants> {
        if sample_count < 64 {
            return Err(Error::InvalidInput(format!(
                "sample_count = {sample_count} < 64"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a_15);
        let n_angles = sample_count.next_multiple_of(4);
        let sample_x = |rng: &mut ChaCha8Rng| -> Vec2 {
            // presets are x-independent; user fields are probed on [0,1]^2
            Vec2::new(rng.gen::<f64>(), rng.gen::<f64>())
        };

        // lambda0 / Lambda0: extremize 2 a(x,p) over |p| = 1
        let mut min2a = f64::INFINITY;
        let mut max2a = f64::NEG_INFINITY;
        for k in 0..n_angles {
            let p = Vec2::angle(2.0 * std::f64::consts::PI * k as f64 / n_angles as f64);
            let x = sample_x(&mut rng);
            let v = 2.0 * self.a_raw(x, p);
            min2a = min2a.min(v);
            max2a = max2a.max(v);
        }
        if min2a <= 0.0 {
            return Err(Error::ConvexityViolation(format!(
                "sampled a(x,p) <= 0 on the unit sphere (min 2a = {min2a:.3e})"
            )));
        }
        let lambda0 = min2a.sqrt();
        let lambda0_big = max2a.sqrt();

        // lambda2 / Lambda2: extremize a_pp(x,p) q . q over unit q
        let mut lambda2 = f64::INFINITY;
        let mut lambda2_big = f64::NEG_INFINITY;
        for k in 0..n_angles {
            let p = Vec2::angle(2.0 * std::f64::consts::PI * k as f64 / n_angles as f64);
            let x = sample_x(&mut rng);
            let app = self.eval_app(x, p)?;
            let (lo, hi) = app.eigenvalues();
            lambda2 = lambda2.min(lo);
            lambda2_big = lambda2_big.max(hi);
        }
        if lambda2 <= 0.0 {
            return Err(Error::ConvexityViolation(format!(
                "sampled a_pp indefinite (min eigenvalue {lambda2:.3e})"
            )));
        }

        // beta_mono: sampled pair minimum of the strong-monotonicity ratio,
        // floored at min(lambda2, lambda0^2).
        let mut beta_raw = f64::INFINITY;
        for _ in 0..sample_count {
            let x = sample_x(&mut rng);
            let p1 = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let p2 = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let d = p2 - p1;
            if d.norm_sq() < 1e-20 {
                continue;
            }
            let num = (self.ap_raw(x, p2) - self.ap_raw(x, p1)).dot(d);
            beta_raw = beta_raw.min(num / d.norm_sq());
        }
        if beta_raw <= 0.0 {
            return Err(Error::ConvexityViolation(format!(
                "sampled strong-monotonicity constant {beta_raw:.3e} <= 0"
            )));
        }
        // The sampled pair minimum over-estimates the true infimum; the
        // Lemma 4.3 proof certifies min(lambda2, lambda0^2), so keep the
        // smaller of the two.
        let beta_mono = beta_raw.min(lambda2.min(lambda0 * lambda0));

        let cl = self.sample_cl(&mut rng, sample_count)?;

        Ok(MetricConstants {
            lambda0,
            lambda0_big,
            lambda2,
            lambda2_big,
            beta_mono,
            cl,
            sampled: true,
        })
    }

    /// Sampled constant of the anisotropic-Laplacian bound
    /// |Delta_phi u| <= CL (|grad u| + |D^2 u|).
    fn sample_cl(&self, rng: &mut ChaCha8Rng, sample_count: usize) -> Result<f64> {
        let mut cl: f64 = 0.0;
        let sx = 1e-5;
        for k in 0..sample_count {
            let p = Vec2::angle(2.0 * std::f64::consts::PI * k as f64 / sample_count as f64);
            let x = Vec2::new(rng.gen::<f64>(), rng.gen::<f64>());
            // sum_j |d^2 a / dx_j dp_j| at (x,p), by differencing a_p in x
            let apx = (self.ap_raw(Vec2::new(x.x + sx, x.y), p)
                - self.ap_raw(Vec2::new(x.x - sx, x.y), p))
                / (2.0 * sx);
            let apy = (self.ap_raw(Vec2::new(x.x, x.y + sx), p)
                - self.ap_raw(Vec2::new(x.x, x.y - sx), p))
                / (2.0 * sx);
            let grad_term = apx.x.abs() + apy.y.abs()
                + self.grad_log_m(x).norm() * self.ap_raw(x, p).norm();
            let app = self.eval_app(x, p)?;
            let hess_term = app.xx.abs() + 2.0 * app.xy.abs() + app.yy.abs();
            cl = cl.max(grad_term).max(hess_term);
        }
        Ok(cl.max(1e-12))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn eval_a_examples() {
        let eu = AnisotropyField::euclidean();
        close(
            eu.eval_a(Vec2::ZERO, Vec2::new(3.0, 4.0)).unwrap(),
            12.5,
            1e-15,
        );
        let el = AnisotropyField::ellipsoidal(Mat2::diag(4.0, 1.0)).unwrap();
        close(
            el.eval_a(Vec2::ZERO, Vec2::new(1.0, 1.0)).unwrap(),
            2.5,
            1e-15,
        );
        for f in [
            AnisotropyField::euclidean(),
            AnisotropyField::fourfold(0.05).unwrap(),
        ] {
            assert_eq!(f.eval_a(Vec2::ZERO, Vec2::ZERO).unwrap(), 0.0);
        }
        assert!(eu
            .eval_a(Vec2::ZERO, Vec2::new(f64::NAN, 0.0))
            .is_err());
    }

    #[test]
    fn eval_ap_examples() {
        let eu = AnisotropyField::euclidean();
        let p = Vec2::new(3.0, 4.0);
        assert_eq!(eu.eval_ap(Vec2::ZERO, p).unwrap(), p);

        // finite-difference oracle for the ellipsoidal preset
        let el = AnisotropyField::ellipsoidal(Mat2::diag(4.0, 1.0)).unwrap();
        let q = Vec2::new(1.0, 1.0);
        let got = el.eval_ap(Vec2::ZERO, q).unwrap();
        let s = 1e-6;
        let fd = Vec2::new(
            (el.eval_a(Vec2::ZERO, Vec2::new(q.x + s, q.y)).unwrap()
                - el.eval_a(Vec2::ZERO, Vec2::new(q.x - s, q.y)).unwrap())
                / (2.0 * s),
            (el.eval_a(Vec2::ZERO, Vec2::new(q.x, q.y + s)).unwrap()
                - el.eval_a(Vec2::ZERO, Vec2::new(q.x, q.y - s)).unwrap())
                / (2.0 * s),
        );
        close(got.x, 4.0, 1e-12);
        close(got.y, 1.0, 1e-12);
        close(got.x, fd.x, 1e-8);
        close(got.y, fd.y, 1e-8);

        assert_eq!(el.eval_ap(Vec2::ZERO, Vec2::ZERO).unwrap(), Vec2::ZERO);
    }

    #[test]
    fn eval_app_examples() {
        let el = AnisotropyField::ellipsoidal(Mat2::diag(4.0, 1.0)).unwrap();
        let m = el.eval_app(Vec2::ZERO, Vec2::new(0.3, -0.7)).unwrap();
        assert_eq!(m, Mat2::diag(4.0, 1.0));

        let eu = AnisotropyField::euclidean();
        assert_eq!(
            eu.eval_app(Vec2::ZERO, Vec2::new(1.0, 2.0)).unwrap(),
            Mat2::IDENTITY
        );
        assert!(matches!(
            eu.eval_app(Vec2::ZERO, Vec2::ZERO),
            Err(Error::SingularDirection(_))
        ));

        // fourfold: compare with finite-difference Hessian and check
        // positive definiteness over sampled directions
        let ff = AnisotropyField::fourfold(0.05).unwrap();
        let p = Vec2::new(1.0, 0.0);
        let m = ff.eval_app(Vec2::ZERO, p).unwrap();
        let s = 1e-5;
        let a = |dx: f64, dy: f64| ff.a_raw(Vec2::ZERO, Vec2::new(p.x + dx, p.y + dy));
        let fd_xx = (a(s, 0.0) - 2.0 * a(0.0, 0.0) + a(-s, 0.0)) / (s * s);
        let fd_yy = (a(0.0, s) - 2.0 * a(0.0, 0.0) + a(0.0, -s)) / (s * s);
        let fd_xy = (a(s, s) - a(s, -s) - a(-s, s) + a(-s, -s)) / (4.0 * s * s);
        close(m.xx, fd_xx, 1e-4);
        close(m.yy, fd_yy, 1e-4);
        close(m.xy, fd_xy, 1e-4);
        for k in 0..64 {
            let v = Vec2::angle(2.0 * std::f64::consts::PI * k as f64 / 64.0);
            assert!(m.quad_form(v) > 0.0);
        }
    }

    #[test]
    fn phi0_and_gradient() {
        let el = AnisotropyField::ellipsoidal(Mat2::diag(4.0, 1.0)).unwrap();
        close(el.phi0(Vec2::ZERO, Vec2::new(1.0, 0.0)).unwrap(), 2.0, 1e-14);
        let eu = AnisotropyField::euclidean();
        close(eu.phi0(Vec2::ZERO, Vec2::new(3.0, 4.0)).unwrap(), 5.0, 1e-14);
        let g = eu.phi0_grad(Vec2::ZERO, Vec2::new(3.0, 4.0)).unwrap();
        close(g.x, 0.6, 1e-14);
        close(g.y, 0.8, 1e-14);
        assert!(matches!(
            eu.phi0_grad(Vec2::ZERO, Vec2::ZERO),
            Err(Error::SingularDirection(_))
        ));
    }

    #[test]
    fn dual_metric_examples() {
        let eu = AnisotropyField::euclidean();
        close(
            eu.dual_metric(Vec2::ZERO, Vec2::new(3.0, 4.0)).unwrap(),
            5.0,
            1e-9,
        );
        assert_eq!(eu.dual_metric(Vec2::ZERO, Vec2::ZERO).unwrap(), 0.0);

        // ellipsoidal dual has closed form sqrt(xi . A^-1 xi); also brute-force
        // the sup over 4096 directions as an independent oracle
        let a = Mat2::diag(4.0, 1.0);
        let el = AnisotropyField::ellipsoidal(a).unwrap();
        let xi = Vec2::new(2.0, 0.0);
        let got = el.dual_metric(Vec2::ZERO, xi).unwrap();
        close(got, 1.0, 1e-9);
        let mut brute = f64::NEG_INFINITY;
        for k in 0..4096 {
            let w = Vec2::angle(2.0 * std::f64::consts::PI * k as f64 / 4096.0);
            brute = brute.max(xi.dot(w) / el.phi0_raw(Vec2::ZERO, w));
        }
        close(got, brute, 1e-5);
        let closed = (xi.x * xi.x / 4.0 + xi.y * xi.y).sqrt();
        close(got, closed, 1e-9);
    }

    #[test]
    fn t0_matches_ap_with_zero_convention() {
        let el = AnisotropyField::ellipsoidal(Mat2::diag(4.0, 1.0)).unwrap();
        let p = Vec2::new(0.0, 3.0);
        assert_eq!(
            el.t0(Vec2::ZERO, p).unwrap(),
            el.eval_ap(Vec2::ZERO, p).unwrap()
        );
        assert_eq!(el.t0(Vec2::ZERO, Vec2::ZERO).unwrap(), Vec2::ZERO);
        let eu = AnisotropyField::euclidean();
        assert_eq!(
            eu.t0(Vec2::ZERO, Vec2::new(1.0, 2.0)).unwrap(),
            Vec2::new(1.0, 2.0)
        );
    }

    #[test]
    fn estimate_constants_euclidean_exact() {
        let eu = AnisotropyField::euclidean();
        let c = eu.estimate_constants(256).unwrap();
        close(c.lambda0, 1.0, 1e-12);
        close(c.lambda0_big, 1.0, 1e-12);
        close(c.beta_mono, 1.0, 1e-12);
        assert!(c.sampled);
    }

    #[test]
    fn estimate_constants_ellipsoidal() {
        let el = AnisotropyField::ellipsoidal(Mat2::diag(4.0, 1.0)).unwrap();
        let c = el.estimate_constants(512).unwrap();
        close(c.lambda2, 1.0, 1e-10);
        close(c.lambda2_big, 4.0, 1e-10);
        close(c.beta_mono, 1.0, 1e-10);
        close(c.lambda0, 1.0, 1e-10);
        close(c.lambda0_big, 2.0, 1e-10);
    }

    #[test]
    fn estimate_constants_rejects_nonconvex_fourfold() {
        // delta = 0.2 >= 1/15: construction refuses it directly...
        assert!(AnisotropyField::fourfold(0.2).is_err());
        // ...and a user field with the same formula is caught by sampling.
        let bad = AnisotropyField::user(|_, p: Vec2| {
            if p.x == 0.0 && p.y == 0.0 {
                return 0.0;
            }
            let gamma = 1.0 + 0.2 * (4.0 * p.y.atan2(p.x)).cos();
            0.5 * gamma * gamma * p.norm_sq()
        });
        assert!(matches!(
            bad.estimate_constants(512),
            Err(Error::ConvexityViolation(_))
        ));
    }

    #[test]
    fn estimate_constants_requires_samples() {
        let eu = AnisotropyField::euclidean();
        assert!(eu.estimate_constants(32).is_err());
    }
}
