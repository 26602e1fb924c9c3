//! Truncated multivariate Taylor arithmetic.
//!
//! [`Jet2`] carries a value, gradient and Hessian with respect to `N`
//! independent variables; [`Jet1`] carries value and gradient. Field
//! coefficients such as `A = -B h^2 / 8` are built from the gap jet so that
//! their derivatives come out exact to roundoff.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1<const N: usize> {
    pub v: f64,
    pub g: [f64; N],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2<const N: usize> {
    pub v: f64,
    pub g: [f64; N],
    pub h: [[f64; N]; N],
}

impl<const N: usize> Jet1<N> {
    pub fn constant(v: f64) -> Self {
        Self { v, g: [0.0; N] }
    }

    pub fn var(i: usize, v: f64) -> Self {
        let mut g = [0.0; N];
        g[i] = 1.0;
        Self { v, g }
    }

    /// Applies a scalar function given its value and first derivative at `self.v`.
    pub fn chain(self, f0: f64, f1: f64) -> Self {
        let mut g = [0.0; N];
        for i in 0..N {
            g[i] = f1 * self.g[i];
        }
        Self { v: f0, g }
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r)
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(1.0);
        }
        self.chain(self.v.powi(n), n as f64 * self.v.powi(n - 1))
    }

    pub fn scale(self, c: f64) -> Self {
        let mut g = self.g;
        g.iter_mut().for_each(|x| *x *= c);
        Self { v: self.v * c, g }
    }
}

impl<const N: usize> Jet2<N> {
    pub fn constant(v: f64) -> Self {
        Self {
            v,
            g: [0.0; N],
            h: [[0.0; N]; N],
        }
    }

    pub fn var(i: usize, v: f64) -> Self {
        let mut out = Self::constant(v);
        out.g[i] = 1.0;
        out
    }

    /// Applies a scalar function given value, first and second derivative at `self.v`.
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..N {
            out.g[i] = f1 * self.g[i];
            for j in 0..N {
                out.h[i][j] = f1 * self.h[i][j] + f2 * self.g[i] * self.g[j];
            }
        }
        out
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => self,
            _ => {
                let nf = n as f64;
                self.chain(
                    self.v.powi(n),
                    nf * self.v.powi(n - 1),
                    nf * (nf - 1.0) * self.v.powi(n - 2),
                )
            }
        }
    }

    pub fn scale(self, c: f64) -> Self {
        let mut out = self;
        out.v *= c;
        for i in 0..N {
            out.g[i] *= c;
            for j in 0..N {
                out.h[i][j] *= c;
            }
        }
        out
    }

    /// Drops the Hessian.
    pub fn lower(self) -> Jet1<N> {
        Jet1 {
            v: self.v,
            g: self.g,
        }
    }

    /// Partial derivative with respect to variable `i`, as a first-order jet.
    pub fn d(self, i: usize) -> Jet1<N> {
        Jet1 {
            v: self.g[i],
            g: self.h[i],
        }
    }

    pub fn laplacian(&self) -> f64 {
        (0..N).map(|i| self.h[i][i]).sum()
    }
}

macro_rules! impl_jet_ops {
    ($jet:ident, $mul:expr) => {
        impl<const N: usize> Add for $jet<N> {
            type Output = Self;
            fn add(self, o: Self) -> Self {
                let mut out = self;
                out.v += o.v;
                for i in 0..N {
                    out.g[i] += o.g[i];
                }
                add_hessian(&mut out, &o);
                out
            }
        }

        impl<const N: usize> Sub for $jet<N> {
            type Output = Self;
            fn sub(self, o: Self) -> Self {
                self + (-o)
            }
        }

        impl<const N: usize> Neg for $jet<N> {
            type Output = Self;
            fn neg(self) -> Self {
                self.scale(-1.0)
            }
        }

        impl<const N: usize> Mul for $jet<N> {
            type Output = Self;
            fn mul(self, o: Self) -> Self {
                $mul(self, o)
            }
        }

        impl<const N: usize> Div for $jet<N> {
            type Output = Self;
            #[allow(clippy::suspicious_arithmetic_impl)]
            fn div(self, o: Self) -> Self {
                self * o.recip()
            }
        }

        impl<const N: usize> Add<f64> for $jet<N> {
            type Output = Self;
            fn add(self, c: f64) -> Self {
                let mut out = self;
                out.v += c;
                out
            }
        }

        impl<const N: usize> Sub<f64> for $jet<N> {
            type Output = Self;
            fn sub(self, c: f64) -> Self {
                self + (-c)
            }
        }

        impl<const N: usize> Mul<f64> for $jet<N> {
            type Output = Self;
            fn mul(self, c: f64) -> Self {
                self.scale(c)
            }
        }

        impl<const N: usize> Mul<$jet<N>> for f64 {
            type Output = $jet<N>;
            fn mul(self, j: $jet<N>) -> $jet<N> {
                j.scale(self)
            }
        }
    };
}

trait AddHessian {
    fn add_h(&mut self, o: &Self);
}

impl<const N: usize> AddHessian for Jet1<N> {
    fn add_h(&mut self, _o: &Self) {}
}

impl<const N: usize> AddHessian for Jet2<N> {
    fn add_h(&mut self, o: &Self) {
        for i in 0..N {
            for j in 0..N {
                self.h[i][j] += o.h[i][j];
            }
        }
    }
}

fn add_hessian<T: AddHessian>(a: &mut T, b: &T) {
    a.add_h(b);
}

fn mul1<const N: usize>(a: Jet1<N>, b: Jet1<N>) -> Jet1<N> {
    let mut g = [0.0; N];
    for i in 0..N {
        g[i] = a.g[i] * b.v + a.v * b.g[i];
    }
    Jet1 { v: a.v * b.v, g }
}

fn mul2<const N: usize>(a: Jet2<N>, b: Jet2<N>) -> Jet2<N> {
    let mut out = Jet2::constant(a.v * b.v);
    for i in 0..N {
        out.g[i] = a.g[i] * b.v + a.v * b.g[i];
        for j in 0..N {
            out.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[i][j];
        }
    }
    out
}

impl_jet_ops!(Jet1, mul1);
impl_jet_ops!(Jet2, mul2);
