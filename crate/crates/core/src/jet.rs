//! Truncated Taylor arithmetic for exact higher derivatives of expression trees.
//!
//! Internally a jet stores normalized Taylor coefficients `c_k = f^(k)(x) / k!`;
//! the public [`Jet`] exposes plain derivatives.

use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Vars};

/// Largest supported derivative order. Factorial growth of the Taylor
/// coefficients degrades accuracy beyond this.
pub const MAX_ORDER: usize = 16;

/// Derivative tuple `(f(x), f'(x), ..., f^(order)(x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    values: Vec<f64>,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivative(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// `max_{k <= order} |f^(k)(x)|`.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

/// Normalized Taylor coefficients of a function at a point.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Taylor {
    c: Vec<f64>,
}

impl Taylor {
    fn constant(v: f64, order: usize) -> Taylor {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Taylor { c }
    }

    fn variable(v: f64, order: usize) -> Taylor {
        let mut t = Taylor::constant(v, order);
        if order >= 1 {
            t.c[1] = 1.0;
        }
        t
    }

    fn len(&self) -> usize {
        self.c.len()
    }

    fn add(&self, o: &Taylor) -> Taylor {
        Taylor { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    fn sub(&self, o: &Taylor) -> Taylor {
        Taylor { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    fn neg(&self) -> Taylor {
        Taylor { c: self.c.iter().map(|a| -a).collect() }
    }

    fn scale(&self, s: f64) -> Taylor {
        Taylor { c: self.c.iter().map(|a| a * s).collect() }
    }

    fn mul(&self, o: &Taylor) -> Taylor {
        let n = self.len();
        let mut c = vec![0.0; n];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = (0..=k).map(|j| self.c[j] * o.c[k - j]).sum();
        }
        Taylor { c }
    }

    fn div(&self, o: &Taylor) -> Result<Taylor> {
        let b0 = o.c[0];
        if b0 == 0.0 {
            return Err(Error::Evaluation("division by a vanishing jet".into()));
        }
        let n = self.len();
        let mut c = vec![0.0; n];
        for k in 0..n {
            let acc: f64 = (1..=k).map(|j| o.c[j] * c[k - j]).sum();
            c[k] = (self.c[k] - acc) / b0;
        }
        Ok(Taylor { c })
    }

    fn exp(&self) -> Taylor {
        let n = self.len();
        let mut e = vec![0.0; n];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let acc: f64 = (1..=k).map(|j| j as f64 * self.c[j] * e[k - j]).sum();
            e[k] = acc / k as f64;
        }
        Taylor { c: e }
    }

    fn ln(&self) -> Result<Taylor> {
        let a0 = self.c[0];
        if a0 <= 0.0 {
            return Err(Error::Evaluation(format!("log of non-positive value {a0}")));
        }
        let n = self.len();
        let mut l = vec![0.0; n];
        l[0] = a0.ln();
        for k in 1..n {
            let acc: f64 = (1..k).map(|j| j as f64 * l[j] * self.c[k - j]).sum();
            l[k] = (self.c[k] - acc / k as f64) / a0;
        }
        Ok(Taylor { c: l })
    }

    fn sin_cos(&self) -> (Taylor, Taylor) {
        let n = self.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 1..n {
            let mut acc_s = 0.0;
            let mut acc_c = 0.0;
            for j in 1..=k {
                acc_s += j as f64 * self.c[j] * c[k - j];
                acc_c += j as f64 * self.c[j] * s[k - j];
            }
            s[k] = acc_s / k as f64;
            c[k] = -acc_c / k as f64;
        }
        (Taylor { c: s }, Taylor { c })
    }

    fn powi(&self, k: i64) -> Result<Taylor> {
        if k < 0 {
            let positive = self.powi(-k)?;
            return Taylor::constant(1.0, self.len() - 1).div(&positive);
        }
        let mut result = Taylor::constant(1.0, self.len() - 1);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    fn powf(&self, p: f64) -> Result<Taylor> {
        if p.fract() == 0.0 && p.abs() <= 64.0 {
            return self.powi(p as i64);
        }
        let a0 = self.c[0];
        if a0 <= 0.0 {
            return Err(Error::Evaluation(format!(
                "fractional power {p} of non-positive value {a0}"
            )));
        }
        let n = self.len();
        let mut y = vec![0.0; n];
        y[0] = a0.powf(p);
        for k in 1..n {
            let acc: f64 = (1..=k)
                .map(|j| (p * j as f64 - (k - j) as f64) * self.c[j] * y[k - j])
                .sum();
            y[k] = acc / (k as f64 * a0);
        }
        Ok(Taylor { c: y })
    }

    fn into_jet(self) -> Jet {
        let mut factorial = 1.0;
        let values = self
            .c
            .into_iter()
            .enumerate()
            .map(|(k, ck)| {
                if k > 0 {
                    factorial *= k as f64;
                }
                ck * factorial
            })
            .collect();
        Jet { values }
    }
}

pub(crate) fn taylor(expr: &Expr, vars: &Vars, order: usize) -> Result<Taylor> {
    Ok(match expr {
        Expr::Const(c) => Taylor::constant(*c, order),
        Expr::Var(crate::expr::Var::X) => Taylor::variable(vars.get(crate::expr::Var::X)?, order),
        Expr::Var(v) => Taylor::constant(vars.get(*v)?, order),
        Expr::Neg(a) => taylor(a, vars, order)?.neg(),
        Expr::Add(a, b) => taylor(a, vars, order)?.add(&taylor(b, vars, order)?),
        Expr::Sub(a, b) => taylor(a, vars, order)?.sub(&taylor(b, vars, order)?),
        Expr::Mul(a, b) => {
            // constants on either side are common in mollifier expressions
            match (&**a, &**b) {
                (Expr::Const(c), other) | (other, Expr::Const(c)) => {
                    taylor(other, vars, order)?.scale(*c)
                }
                _ => taylor(a, vars, order)?.mul(&taylor(b, vars, order)?),
            }
        }
        Expr::Div(a, b) => match &**b {
            Expr::Const(c) if *c != 0.0 => taylor(a, vars, order)?.scale(1.0 / c),
            _ => taylor(a, vars, order)?.div(&taylor(b, vars, order)?)?,
        },
        Expr::Pow(a, k) => taylor(a, vars, order)?.powf(*k)?,
        Expr::PowExpr(a, b) => {
            let base = taylor(a, vars, order)?;
            taylor(b, vars, order)?.mul(&base.ln()?).exp()
        }
        Expr::Call(f, a) => {
            let u = taylor(a, vars, order)?;
            match f {
                Func::Exp => u.exp(),
                Func::Log => u.ln()?,
                Func::Sin => u.sin_cos().0,
                Func::Cos => u.sin_cos().1,
                Func::Sqrt => u.powf(0.5)?,
                Func::Bump => {
                    if u.c[0].abs() < 1.0 {
                        Taylor::constant(1.0, order).sub(&u.mul(&u)).powi(4)?
                    } else {
                        Taylor::constant(0.0, order)
                    }
                }
                Func::Ind => Taylor::constant(if u.c[0].abs() < 1.0 { 1.0 } else { 0.0 }, order),
            }
        }
    })
}

/// Exact derivatives of `f` at `x` up to `order`, with the index symbol bound to `n`.
pub fn jet_eval(f: &Expr, x: f64, n: Option<f64>, order: usize) -> Result<Jet> {
    if order > MAX_ORDER {
        return Err(Error::Capability(format!(
            "jet order {order} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    let vars = Vars::x(x).with_n(n);
    let t = taylor(f, &vars, order)?;
    if t.c.iter().any(|v| v.is_nan()) {
        return Err(Error::Evaluation(format!("jet of `{f}` at x = {x} is not a number")));
    }
    Ok(t.into_jet())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_at_zero_has_unit_derivatives() {
        let j = jet_eval(&Expr::parse("exp(x)").unwrap(), 0.0, None, 3).unwrap();
        assert_eq!(j.values(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn square_at_two() {
        let j = jet_eval(&Expr::parse("x^2").unwrap(), 2.0, None, 2).unwrap();
        assert_eq!(j.values(), &[4.0, 4.0, 2.0]);
    }

    #[test]
    fn gaussian_delta_at_origin() {
        let f = Expr::parse("n*exp(-(n*x)^2)/sqrt(pi)").unwrap();
        let j = jet_eval(&f, 0.0, Some(5.0), 1).unwrap();
        assert_relative_eq!(j.derivative(0), 2.820947917738781, max_relative = 1e-14);
        assert_eq!(j.derivative(1), 0.0);
    }

    #[test]
    fn sin_and_log_higher_orders() {
        let j = jet_eval(&Expr::parse("sin(x)").unwrap(), 0.3, None, 4).unwrap();
        let s = 0.3f64.sin();
        let c = 0.3f64.cos();
        for (got, want) in j.values().iter().zip([s, c, -s, -c, s]) {
            assert_relative_eq!(*got, want, epsilon = 1e-14);
        }
        let j = jet_eval(&Expr::parse("log(x)").unwrap(), 2.0, None, 3).unwrap();
        for (got, want) in j.values().iter().zip([2f64.ln(), 0.5, -0.25, 0.25]) {
            assert_relative_eq!(*got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn fractional_and_general_powers() {
        let j = jet_eval(&Expr::parse("x^1.5").unwrap(), 4.0, None, 2).unwrap();
        assert_relative_eq!(j.derivative(0), 8.0, epsilon = 1e-12);
        assert_relative_eq!(j.derivative(1), 3.0, epsilon = 1e-12);
        assert_relative_eq!(j.derivative(2), 0.375, epsilon = 1e-12);
        let j = jet_eval(&Expr::parse("2^x").unwrap(), 1.0, None, 2).unwrap();
        let l = 2f64.ln();
        assert_relative_eq!(j.derivative(2), 2.0 * l * l, epsilon = 1e-12);
    }

    #[test]
    fn order_cap_and_domain_errors() {
        let e = Expr::parse("x").unwrap();
        assert!(matches!(jet_eval(&e, 0.0, None, 17), Err(Error::Capability(_))));
        assert!(jet_eval(&Expr::parse("1/x").unwrap(), 0.0, None, 1).is_err());
        assert!(jet_eval(&Expr::parse("log(x)").unwrap(), -1.0, None, 1).is_err());
        assert!(jet_eval(&Expr::parse("n*x").unwrap(), 1.0, None, 1).is_err());
    }

    #[test]
    fn bump_jet_matches_polynomial_inside_support() {
        let j = jet_eval(&Expr::parse("bump(x)").unwrap(), 0.5, None, 2).unwrap();
        // (1-x^2)^4: value, -8x(1-x^2)^3, -8(1-x^2)^3 + 48x^2(1-x^2)^2
        let q: f64 = 0.75;
        assert_relative_eq!(j.derivative(0), q.powi(4), epsilon = 1e-14);
        assert_relative_eq!(j.derivative(1), -4.0 * q.powi(3), epsilon = 1e-14);
        assert_relative_eq!(j.derivative(2), -8.0 * q.powi(3) + 12.0 * q * q, epsilon = 1e-13);
        let outside = jet_eval(&Expr::parse("bump(x)").unwrap(), 1.2, None, 2).unwrap();
        assert_eq!(outside.max_abs(), 0.0);
    }
}
