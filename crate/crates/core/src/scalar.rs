//! Complex scalars and compensated accumulation.

use num_complex::Complex64;

pub type Scalar = Complex64;

pub const ONE: Scalar = Complex64::new(1.0, 0.0);
pub const ZERO: Scalar = Complex64::new(0.0, 0.0);

/// Neumaier-compensated sum of complex values, real and imaginary parts tracked separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    re_err: f64,
    im: f64,
    im_err: f64,
}

fn neumaier(sum: &mut f64, err: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *err += (*sum - t) + x;
    } else {
        *err += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Scalar) {
        neumaier(&mut self.re, &mut self.re_err, z.re);
        neumaier(&mut self.im, &mut self.im_err, z.im);
    }

    pub fn value(&self) -> Scalar {
        Complex64::new(self.re + self.re_err, self.im + self.im_err)
    }
}

impl std::iter::FromIterator<Scalar> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Parses a quantum-dimension style number: an integer, a rational `p/q`, or a decimal.
pub fn parse_real(text: &str) -> Option<f64> {
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().ok()?;
        let q: f64 = q.trim().parse().ok()?;
        if q == 0.0 {
            return None;
        }
        return Some(p / q);
    }
    s.parse().ok()
}
