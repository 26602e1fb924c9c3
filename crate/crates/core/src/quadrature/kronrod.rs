//! 21-point Gauss–Kronrod rule with its embedded 10-point Gauss rule.

/// Kronrod abscissae on [0, 1], descending; odd indices are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525255000,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

pub const NODES: usize = 21;

/// Evaluation of one panel for a vector-valued integrand.
#[derive(Clone, Copy, Debug)]
pub struct Panel<const K: usize> {
    pub a: f64,
    pub b: f64,
    pub value: [f64; K],
    pub error: [f64; K],
    /// Kronrod estimate of the integral of the absolute integrand.
    pub abs: [f64; K],
}

impl<const K: usize> Panel<K> {
    /// Error above the roundoff floor of component `k`.
    pub fn excess(&self, k: usize) -> f64 {
        (self.error[k] - FLOOR * f64::EPSILON * self.abs[k]).max(0.0)
    }
}

/// Roundoff floor in units of machine epsilon times the absolute integral.
pub const FLOOR: f64 = 50.0;

/// Applies the rule on [a, b]. The integrand returns the value and a
/// magnitude proxy used to bound roundoff (usually the absolute value).
pub fn apply<const K: usize, E>(
    f: &mut impl FnMut(f64) -> Result<([f64; K], [f64; K]), E>,
    a: f64,
    b: f64,
) -> Result<Panel<K>, E> {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let mut rk = [0.0; K];
    let mut rg = [0.0; K];
    let mut ra = [0.0; K];
    let (fc, ac) = f(c)?;
    for k in 0..K {
        rk[k] = WGK[10] * fc[k];
        ra[k] = WGK[10] * ac[k].abs();
    }
    for j in 0..10 {
        let dx = hl * XGK[j];
        let (f1, a1) = f(c - dx)?;
        let (f2, a2) = f(c + dx)?;
        for k in 0..K {
            rk[k] += WGK[j] * (f1[k] + f2[k]);
            ra[k] += WGK[j] * (a1[k].abs() + a2[k].abs());
            if j % 2 == 1 {
                rg[k] += WG[j / 2] * (f1[k] + f2[k]);
            }
        }
    }
    let mut value = [0.0; K];
    let mut error = [0.0; K];
    let mut abs = [0.0; K];
    for k in 0..K {
        value[k] = rk[k] * hl;
        abs[k] = ra[k] * hl.abs();
        let floor = FLOOR * f64::EPSILON * abs[k];
        error[k] = ((rk[k] - rg[k]) * hl).abs().max(floor);
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_normalised() {
        let sk: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let sg: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((sk - 2.0).abs() < 1e-14);
        assert!((sg - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        let mut f = |x: f64| Ok::<_, ()>(([x.powi(30)], [x.powi(30).abs()]));
        let p = apply(&mut f, 0.0, 1.0).unwrap();
        assert!((p.value[0] - 1.0 / 31.0).abs() < 1e-14);
    }
}
