use super::{FieldEval, ProblemParams};
use crate::jet::{Jet1, Jet2};

type J2 = Jet2<2>;
type J1 = Jet1<2>;

/// Coefficients of a shear-type field `(H1 x3, H2 x3, -A - B x3^2 / 2)`.
pub(crate) struct Shear {
    pub h1: J2,
    pub h2: J2,
}

/// Coefficients of a squeeze-type field
/// `(-A1 - 3 B1 x3^2, -A2 - 3 B2 x3^2, A3 x3 + B3 x3^3)`.
#[derive(Clone, Copy)]
pub(crate) struct Squeeze {
    pub a1: J2,
    pub a2: J2,
    pub b1: J2,
    pub b2: J2,
}

impl Squeeze {
    pub fn a3(&self) -> J1 {
        self.a1.d(0) + self.a2.d(1)
    }

    pub fn b3(&self) -> J1 {
        self.b1.d(0) + self.b2.d(1)
    }
}

pub(crate) fn shear_coefficients(k: usize, p: &ProblemParams, x1: f64, x2: f64) -> Shear {
    let h = p.profile.gap_jet_3d(x1, x2);
    let hinv = h.recip();
    let zero = J2::constant(0.0);
    let (u, w) = (p.velocity, p.omega);
    let eps = p.profile.eps;
    let big_r = p.profile.big_r;
    match k {
        1 => Shear {
            h1: hinv.scale(u[0] - w[1] * big_r),
            h2: zero,
        },
        2 => Shear {
            h1: zero,
            h2: hinv.scale(u[1] + w[0] * big_r),
        },
        4 => {
            let y1 = J2::var(0, x1);
            let y2 = J2::var(1, x2);
            Shear {
                h1: (y2 * hinv).scale(-w[2]),
                h2: (y1 * hinv).scale(w[2]),
            }
        }
        5 => {
            let q = hinv.scale(0.5 * eps);
            Shear {
                h1: (q - 0.5).scale(-w[1]),
                h2: (q - 0.5).scale(w[0]),
            }
        }
        _ => unreachable!("subflow {k} is not of shear type"),
    }
}

pub(crate) fn squeeze_coefficients(k: usize, p: &ProblemParams, x1: f64, x2: f64) -> Squeeze {
    let h = p.profile.gap_jet_3d(x1, x2);
    let hinv = h.recip();
    let hinv3 = hinv.powi(3);
    let y1 = J2::var(0, x1);
    let y2 = J2::var(1, x2);
    let (u, w) = (p.velocity, p.omega);
    match k {
        3 => Squeeze {
            a1: (y1 * hinv).scale(0.75 * u[2]),
            a2: (y2 * hinv).scale(0.75 * u[2]),
            b1: (y1 * hinv3).scale(-u[2]),
            b2: (y2 * hinv3).scale(-u[2]),
        },
        6 => {
            let q1 = y1 * y1;
            let q2 = y2 * y2;
            Squeeze {
                a1: (q1 * hinv).scale(-0.75 * w[1]),
                a2: (q2 * hinv).scale(0.75 * w[0]),
                b1: (q1 * hinv3).scale(w[1]),
                b2: (q2 * hinv3).scale(-w[0]),
            }
        }
        _ => unreachable!("subflow {k} is not of squeeze type"),
    }
}

pub(crate) fn eval_shear(s: &Shear, h: J2, x3: f64) -> FieldEval<3> {
    let b: J1 = s.h1.d(0) + s.h2.d(1);
    let a: J1 = (b * (h.lower() * h.lower())).scale(-0.125);
    let z2 = x3 * x3;
    // -A - B x3^2 / 2 = B (h - 2 x3)(h + 2 x3) / 8
    let u = [
        s.h1.v * x3,
        s.h2.v * x3,
        0.125 * b.v * (h.v - 2.0 * x3) * (h.v + 2.0 * x3),
    ];
    let grad_u = [
        [s.h1.g[0] * x3, s.h1.g[1] * x3, s.h1.v],
        [s.h2.g[0] * x3, s.h2.g[1] * x3, s.h2.v],
        [
            -a.g[0] - 0.5 * b.g[0] * z2,
            -a.g[1] - 0.5 * b.g[1] * z2,
            -b.v * x3,
        ],
    ];
    FieldEval { u, p: 0.0, grad_u }
}

/// Squeeze field with the pressure part `mu (-A3 + 3 B3 x3^2)`; the nested
/// integrals are added by the caller.
pub(crate) fn eval_squeeze(s: &Squeeze, h: f64, mu: f64, x3: f64) -> FieldEval<3> {
    let a3 = s.a3();
    let b3 = s.b3();
    let z2 = x3 * x3;
    let z3 = z2 * x3;
    // Every squeeze mode has B = -4 A / (3 h^2), so the horizontal
    // components factor as -A (1 - 2 x3 / h)(1 + 2 x3 / h).
    let wall = (1.0 - 2.0 * x3 / h) * (1.0 + 2.0 * x3 / h);
    let u = [-s.a1.v * wall, -s.a2.v * wall, x3 * (a3.v + b3.v * z2)];
    let grad_u = [
        [
            -s.a1.g[0] - 3.0 * s.b1.g[0] * z2,
            -s.a1.g[1] - 3.0 * s.b1.g[1] * z2,
            -6.0 * s.b1.v * x3,
        ],
        [
            -s.a2.g[0] - 3.0 * s.b2.g[0] * z2,
            -s.a2.g[1] - 3.0 * s.b2.g[1] * z2,
            -6.0 * s.b2.v * x3,
        ],
        [
            a3.g[0] * x3 + b3.g[0] * z3,
            a3.g[1] * x3 + b3.g[1] * z3,
            a3.v + 3.0 * b3.v * z2,
        ],
    ];
    FieldEval {
        u,
        p: mu * (-a3.v + 3.0 * b3.v * z2),
        grad_u,
    }
}

/// `u0 = U/2 + (omega x nu)/2` with `nu = (x1, x2, f/2 - R)`.
pub(crate) fn eval_rigid(p: &ProblemParams, x1: f64, x2: f64) -> FieldEval<3> {
    let h = p.profile.gap_jet_3d(x1, x2);
    let g = (h.v - p.profile.eps) * 0.5 - p.profile.big_r;
    let dg = [0.5 * h.g[0], 0.5 * h.g[1]];
    let (u, w) = (p.velocity, p.omega);
    let nu = [x1, x2, g];
    let cross = [
        w[1] * nu[2] - w[2] * nu[1],
        w[2] * nu[0] - w[0] * nu[2],
        w[0] * nu[1] - w[1] * nu[0],
    ];
    let grad_u = [
        [0.5 * w[1] * dg[0], 0.5 * (w[1] * dg[1] - w[2]), 0.0],
        [0.5 * (w[2] - w[0] * dg[0]), -0.5 * w[0] * dg[1], 0.0],
        [-0.5 * w[1], 0.5 * w[0], 0.0],
    ];
    FieldEval {
        u: [
            0.5 * (u[0] + cross[0]),
            0.5 * (u[1] + cross[1]),
            0.5 * (u[2] + cross[2]),
        ],
        p: 0.0,
        grad_u,
    }
}

/// Field without the nested-integral pressure terms.
pub(crate) fn eval_regular(k: usize, p: &ProblemParams, x: [f64; 3]) -> FieldEval<3> {
    match k {
        0 => eval_rigid(p, x[0], x[1]),
        3 | 6 => eval_squeeze(
            &squeeze_coefficients(k, p, x[0], x[1]),
            p.profile.gap_jet_3d(x[0], x[1]).v,
            p.mu,
            x[2],
        ),
        _ => eval_shear(
            &shear_coefficients(k, p, x[0], x[1]),
            p.profile.gap_jet_3d(x[0], x[1]),
            x[2],
        ),
    }
}
