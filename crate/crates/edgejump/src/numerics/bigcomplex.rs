use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::{Assign, Float};

/// Complex number with two MPFR mantissas of equal precision.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self { re: Float::with_val(prec, 1), im: Float::new(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        Self::from_f64(z.re, z.im, prec)
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Same value rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut s = Float::with_val(p, self.re.square_ref());
        s += Float::with_val(p, self.im.square_ref());
        s
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Cheap magnitude proxy |re| + |im|, used for pivot selection.
    pub fn l1(&self) -> Float {
        let p = self.prec();
        let mut s = Float::with_val(p, self.re.abs_ref());
        s += Float::with_val(p, self.im.abs_ref());
        s
    }

    pub fn scale(&self, r: &Float) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * r), im: Float::with_val(p, &self.im * r) }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re / &n), im: -Float::with_val(p, &self.im / &n) }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// e^{z}.
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self { re: Float::with_val(p, &m * &c), im: Float::with_val(p, &m * &s) }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        Self { re: r.ln(), im: Float::with_val(p, self.im.atan2_ref(&self.re)) }
    }

    /// e^{iπ z}.
    pub fn exp_i_pi(&self) -> Self {
        let p = self.prec();
        let pi = Float::with_val(p, rug::float::Constant::Pi);
        let arg = BigComplex {
            re: -Float::with_val(p, &self.im * &pi),
            im: Float::with_val(p, &self.re * &pi),
        };
        arg.exp()
    }

    /// self −= a·b without allocating the product.
    pub fn sub_mul_assign(&mut self, a: &Self, b: &Self, tmp: &mut Float) {
        tmp.assign(&a.re * &b.re);
        self.re -= &*tmp;
        tmp.assign(&a.im * &b.im);
        self.re += &*tmp;
        tmp.assign(&a.re * &b.im);
        self.im -= &*tmp;
        tmp.assign(&a.im * &b.re);
        self.im -= &*tmp;
    }

    /// self += a·b without allocating the product.
    pub fn add_mul_assign(&mut self, a: &Self, b: &Self, tmp: &mut Float) {
        tmp.assign(&a.re * &b.re);
        self.re += &*tmp;
        tmp.assign(&a.im * &b.im);
        self.re -= &*tmp;
        tmp.assign(&a.re * &b.im);
        self.im += &*tmp;
        tmp.assign(&a.im * &b.re);
        self.im += &*tmp;
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let re = format!("{:.*}", digits, self.re);
        let im = format!("{:.*}", digits, self.im);
        if self.im.is_sign_negative() {
            write!(f, "{re} - {}i", im.trim_start_matches('-'))
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= &self.im * &o.im;
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += &self.im * &o.re;
        BigComplex { re, im }
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        let n = o.norm_sqr();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re += &self.im * &o.im;
        let mut im = Float::with_val(p, &self.im * &o.re);
        im -= &self.re * &o.im;
        re /= &n;
        im /= &n;
        BigComplex { re, im }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                (&self).$m(&o)
            }
        }
        impl $tr<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &BigComplex) -> BigComplex {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}
