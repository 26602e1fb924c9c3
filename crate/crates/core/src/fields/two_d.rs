use super::{FieldEval, ProblemParams};
use crate::jet::{Jet1, Jet2};

type J2 = Jet2<1>;
type J1 = Jet1<1>;

/// Shear field `(H x2, -A - B x2^2 / 2)` with `B = H'` and `A = -B h^2 / 8`.
fn eval_shear(hc: J2, h: J2, y: f64) -> FieldEval<2> {
    let b: J1 = hc.d(0);
    let a: J1 = (b * (h.lower() * h.lower())).scale(-0.125);
    let y2 = y * y;
    FieldEval {
        u: [hc.v * y, 0.125 * b.v * (h.v - 2.0 * y) * (h.v + 2.0 * y)],
        p: 0.0,
        grad_u: [[hc.g[0] * y, hc.v], [-a.g[0] - 0.5 * b.g[0] * y2, -b.v * y]],
    }
}

/// Squeeze coefficients `(A1, B1)` of `(-A1 - 3 B1 x2^2, A1' x2 + B1' x2^3)`.
pub(crate) fn squeeze_coefficients(k: usize, p: &ProblemParams, x1: f64) -> (J2, J2) {
    let h = p.profile.gap_jet_2d(x1);
    let hinv = h.recip();
    let hinv3 = hinv.powi(3);
    let y = J2::var(0, x1);
    match k {
        2 => {
            let u2 = p.velocity[1];
            ((y * hinv).scale(1.5 * u2), (y * hinv3).scale(-2.0 * u2))
        }
        4 => {
            let w = p.omega[0];
            let q = y * y;
            ((q * hinv).scale(0.75 * w), (q * hinv3).scale(-w))
        }
        _ => unreachable!("subflow {k} is not of squeeze type"),
    }
}

fn eval_squeeze(a1: J2, b1: J2, h: f64, mu: f64, y: f64) -> FieldEval<2> {
    let a2 = a1.d(0);
    let b2 = b1.d(0);
    let y2 = y * y;
    let y3 = y2 * y;
    // B1 = -4 A1 / (3 h^2) for both squeeze modes.
    let wall = (1.0 - 2.0 * y / h) * (1.0 + 2.0 * y / h);
    FieldEval {
        u: [-a1.v * wall, y * (a2.v + b2.v * y2)],
        p: mu * (-a2.v + 3.0 * b2.v * y2),
        grad_u: [
            [-a1.g[0] - 3.0 * b1.g[0] * y2, -6.0 * b1.v * y],
            [a2.g[0] * y + b2.g[0] * y3, a2.v + 3.0 * b2.v * y2],
        ],
    }
}

/// `u0 = (U1 + w0 (R - f/2), U2 + w0 x1) / 2`.
fn eval_rigid(p: &ProblemParams, x1: f64) -> FieldEval<2> {
    let h = p.profile.gap_jet_2d(x1);
    let f = h.v - p.profile.eps;
    let w = p.omega[0];
    let u = p.velocity;
    FieldEval {
        u: [
            0.5 * (u[0] + w * (p.profile.big_r - 0.5 * f)),
            0.5 * (u[1] + w * x1),
        ],
        p: 0.0,
        grad_u: [[-0.25 * w * h.g[0], 0.0], [0.5 * w, 0.0]],
    }
}

/// Field without the nested-integral pressure term.
pub(crate) fn eval_regular(k: usize, p: &ProblemParams, x: [f64; 2]) -> FieldEval<2> {
    let h = p.profile.gap_jet_2d(x[0]);
    match k {
        0 => eval_rigid(p, x[0]),
        1 => {
            let c = p.velocity[0] + p.omega[0] * p.profile.big_r;
            eval_shear(h.recip().scale(c), h, x[1])
        }
        3 => {
            let q = h.recip().scale(0.5 * p.profile.eps) - 0.5;
            eval_shear(q.scale(p.omega[0]), h, x[1])
        }
        2 | 4 => {
            let (a1, b1) = squeeze_coefficients(k, p, x[0]);
            eval_squeeze(a1, b1, h.v, p.mu, x[1])
        }
        _ => unreachable!("subflow {k} out of range in 2D"),
    }
}
