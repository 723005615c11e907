//! Dyadic fixed-point numerics for the positivity check.
//!
//! Gram entries are roots of unity `e^{2πir}` with exact rational `r`; the
//! eigenvalue bound needs real arithmetic at a pinned precision (≥ 60 bits,
//! more than an `f64` mantissa carries). Numbers here are `BigInt` mantissas
//! at a fixed binary scale: `m` stands for `m·2^{−prec}`. `π` comes from a
//! Machin sum, sine and cosine from Taylor series after exact quadrant
//! reduction, and the smallest eigenvalue of a symmetric matrix from cyclic
//! Jacobi rotations.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::rat::{fract, Rat};

/// Fixed-point context: values are `BigInt` mantissas scaled by `2^{−prec}`.
#[derive(Clone, Copy, Debug)]
pub struct Fixed {
    pub prec: u32,
}

impl Fixed {
    pub fn new(prec: u32) -> Self {
        assert!(prec >= 8, "precision below 8 bits is meaningless here");
        Self { prec }
    }

    pub fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    pub fn one(&self) -> BigInt {
        BigInt::one() << self.prec
    }

    pub fn from_rat(&self, x: &Rat) -> BigInt {
        // round to nearest
        let scaled = x * Rat::from(BigInt::one() << (self.prec + 1));
        let floor = scaled.floor().to_integer();
        (floor + 1) >> 1
    }

    pub fn to_rat(&self, m: &BigInt) -> Rat {
        Rat::new(m.clone(), BigInt::one() << self.prec)
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        shift_round(&(a * b), self.prec)
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        assert!(!b.is_zero(), "fixed-point division by zero");
        let num = (a << (self.prec + 1)) / b;
        let adjusted = if num.is_negative() { num - 1 } else { num + 1 };
        adjusted >> 1
    }

    /// `√a` for `a ≥ 0`, by integer square root of `a·2^prec`.
    pub fn sqrt(&self, a: &BigInt) -> BigInt {
        assert!(!a.is_negative(), "fixed-point sqrt of a negative value");
        (a << self.prec).sqrt()
    }

    /// π at the working precision (Machin: π/4 = 4·atan(1/5) − atan(1/239)).
    pub fn pi(&self) -> BigInt {
        let guard = self.prec + 16;
        let pi4 = 4 * atan_inv_int(5, guard) - atan_inv_int(239, guard);
        shift_round(&(pi4 * 4), 16)
    }

    /// `(cos 2πr, sin 2πr)` for an exact rational number of turns.
    pub fn cos_sin_turns(&self, r: &Rat) -> (BigInt, BigInt) {
        let guard = self.prec + 16;
        let ctx = Fixed::new(guard);
        let r = fract(r); // r ∈ [0, 1)
                          // quadrant reduction: r = q/4 + t/8 with t ∈ [0, 2) eighth-turns
        let four_r = &r * Rat::from(BigInt::from(4));
        let q: u32 = (four_r.floor().to_integer() % BigInt::from(4u8))
            .try_into()
            .expect("quadrant in 0..4");
        let t = (&r - Rat::new(q.into(), 4.into())) * Rat::from(BigInt::from(8));
        // fold t > 1 onto [0, 1] by the co-function identity
        let (t, swap) = if t > Rat::one() {
            (Rat::from(BigInt::from(2)) - &t, true)
        } else {
            (t, false)
        };
        // angle θ = t·(π/4) ∈ [0, π/4]
        let theta = ctx.mul(&ctx.from_rat(&(t / Rat::from(BigInt::from(4)))), &ctx.pi());
        let (mut c, mut s) = taylor_cos_sin(&ctx, &theta);
        if swap {
            std::mem::swap(&mut c, &mut s);
        }
        let (c, s) = match q {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            3 => (s, -c),
            _ => unreachable!(),
        };
        (shift_round(&c, 16), shift_round(&s, 16))
    }

    /// Smallest eigenvalue of a symmetric matrix of fixed-point mantissas,
    /// by cyclic Jacobi rotations at guarded precision.
    pub fn min_eigenvalue_symmetric(&self, mat: &[Vec<BigInt>]) -> BigInt {
        let n = mat.len();
        assert!(n > 0, "empty matrix");
        for row in mat {
            assert_eq!(row.len(), n, "matrix must be square");
        }
        let guard = self.prec + 16;
        let ctx = Fixed::new(guard);
        let mut a: Vec<Vec<BigInt>> = mat
            .iter()
            .map(|row| row.iter().map(|v| v << 16u32).collect())
            .collect();
        // stop once the off-diagonal mass is below one unit at prec scale
        let threshold = BigInt::one() << 16;
        for _sweep in 0..60 {
            let mut off = BigInt::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[p][q].abs();
                }
            }
            if off < threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[p][q].is_zero() {
                        continue;
                    }
                    jacobi_rotate(&ctx, &mut a, p, q);
                }
            }
        }
        let mut min = a[0][0].clone();
        for (i, row) in a.iter().enumerate() {
            if row[i] < min {
                min = row[i].clone();
            }
        }
        shift_round(&min, 16)
    }
}

fn shift_round(v: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return v.clone();
    }
    let half = BigInt::one() << (bits - 1);
    let adjusted = if v.is_negative() { v - half } else { v + half };
    adjusted >> bits
}

/// `atan(1/x)` as an integer mantissa at `prec` bits, by the alternating
/// series `Σ (−1)^k / ((2k+1) x^{2k+1})`.
fn atan_inv_int(x: i64, prec: u32) -> BigInt {
    let one = BigInt::one() << prec;
    let x = BigInt::from(x);
    let xx = &x * &x;
    let mut power = &one / &x;
    let mut acc = power.clone();
    let mut k = 1u64;
    loop {
        power /= &xx;
        if power.is_zero() {
            break;
        }
        let contrib = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            acc -= contrib;
        } else {
            acc += contrib;
        }
        k += 1;
    }
    acc
}

/// Taylor cosine and sine, accurate for `|θ| ≤ π/4`.
fn taylor_cos_sin(ctx: &Fixed, theta: &BigInt) -> (BigInt, BigInt) {
    let mut cos = ctx.one();
    let mut sin = theta.clone();
    let theta2 = ctx.mul(theta, theta);
    let mut cos_term = ctx.one();
    let mut sin_term = theta.clone();
    let mut k = 1u64;
    loop {
        cos_term = ctx.mul(&cos_term, &theta2) / BigInt::from((2 * k - 1) * (2 * k));
        sin_term = ctx.mul(&sin_term, &theta2) / BigInt::from((2 * k) * (2 * k + 1));
        if cos_term.is_zero() && sin_term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            cos -= &cos_term;
            sin -= &sin_term;
        } else {
            cos += &cos_term;
            sin += &sin_term;
        }
        k += 1;
    }
    (cos, sin)
}

/// One Jacobi rotation zeroing `a[p][q]`.
fn jacobi_rotate(ctx: &Fixed, a: &mut [Vec<BigInt>], p: usize, q: usize) {
    let n = a.len();
    let apq = a[p][q].clone();
    let diff = &a[q][q] - &a[p][p];
    // t = sign(τ)/(|τ| + √(1+τ²)) with τ = diff/(2·a_pq)
    let tau = ctx.div(&diff, &(&apq * 2));
    let root = ctx.sqrt(&(ctx.one() + ctx.mul(&tau, &tau)));
    let t_abs = ctx.div(&ctx.one(), &(tau.abs() + root));
    let t = if tau.is_negative() { -t_abs } else { t_abs };
    let c = ctx.div(&ctx.one(), &ctx.sqrt(&(ctx.one() + ctx.mul(&t, &t))));
    let s = ctx.mul(&t, &c);

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k][p].clone();
        let akq = a[k][q].clone();
        let new_kp = ctx.mul(&c, &akp) - ctx.mul(&s, &akq);
        let new_kq = ctx.mul(&s, &akp) + ctx.mul(&c, &akq);
        a[k][p] = new_kp.clone();
        a[p][k] = new_kp;
        a[k][q] = new_kq.clone();
        a[q][k] = new_kq;
    }
    let t_apq = ctx.mul(&t, &apq);
    let app = a[p][p].clone();
    let aqq = a[q][q].clone();
    a[p][p] = &app - &t_apq;
    a[q][q] = &aqq + &t_apq;
    a[p][q] = BigInt::zero();
    a[q][p] = BigInt::zero();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn close(ctx: &Fixed, a: &BigInt, x: f64, slack_bits: u32) {
        let approx = ctx.to_rat(a);
        let diff = (approx.clone() - Rat::from_float(x).unwrap()).abs();
        let tol = Rat::new(1.into(), BigInt::one() << (ctx.prec - slack_bits));
        assert!(
            diff < tol,
            "value {approx} not within 2^-{} of {x}",
            ctx.prec - slack_bits
        );
    }

    #[test]
    fn pi_to_sixty_bits() {
        let ctx = Fixed::new(64);
        close(&ctx, &ctx.pi(), std::f64::consts::PI, 12);
        let pi = ctx.to_rat(&ctx.pi());
        let lo = Rat::new(31415926535897932u64.into(), 10u64.pow(16).into());
        let hi = Rat::new(31415926535897933u64.into(), 10u64.pow(16).into());
        assert!(pi > lo && pi < hi);
    }

    #[test]
    fn trig_exact_points() {
        let ctx = Fixed::new(80);
        let (c, s) = ctx.cos_sin_turns(&rat(0, 1));
        assert_eq!(c, ctx.one());
        assert_eq!(s, ctx.zero());
        let (c, s) = ctx.cos_sin_turns(&rat(1, 4));
        assert!(c.abs() <= BigInt::from(2));
        assert!((s.clone() - ctx.one()).abs() <= BigInt::from(2));
        let (c, s) = ctx.cos_sin_turns(&rat(1, 2));
        assert!((c.clone() + ctx.one()).abs() <= BigInt::from(2));
        assert!(s.abs() <= BigInt::from(2));
        // cos(2π/3) = −1/2 exactly; sin(2π/3)² = 3/4
        let tol = Rat::new(1.into(), BigInt::one() << 70);
        let (c, s) = ctx.cos_sin_turns(&rat(1, 3));
        assert!((ctx.to_rat(&c) - rat(-1, 2)).abs() < tol);
        assert!((ctx.to_rat(&s).pow(2) - rat(3, 4)).abs() < tol);
        // eighth turn: cos = sin, both squaring to 1/2
        let (c, s) = ctx.cos_sin_turns(&rat(1, 8));
        assert!((&c - &s).abs() <= BigInt::from(2));
        assert!((ctx.to_rat(&c).pow(2) - rat(1, 2)).abs() < tol);
        // generic phase stays on the unit circle
        let (c, s) = ctx.cos_sin_turns(&rat(3, 7));
        let norm = ctx.to_rat(&c).pow(2) + ctx.to_rat(&s).pow(2);
        assert!(
            (norm - Rat::from_integer(1.into())).abs() < Rat::new(1.into(), BigInt::one() << 60)
        );
    }

    #[test]
    fn eigenvalues_of_small_symmetric_matrices() {
        let ctx = Fixed::new(64);
        // [[1,2],[2,1]]: eigenvalues 3 and −1
        let m = vec![
            vec![ctx.one(), ctx.one() * 2],
            vec![ctx.one() * 2, ctx.one()],
        ];
        close(&ctx, &ctx.min_eigenvalue_symmetric(&m), -1.0, 12);
        let id = vec![vec![ctx.one(), ctx.zero()], vec![ctx.zero(), ctx.one()]];
        close(&ctx, &ctx.min_eigenvalue_symmetric(&id), 1.0, 12);
        // all-ones 3×3: eigenvalues {3, 0, 0}
        let ones = vec![vec![ctx.one(); 3]; 3];
        close(&ctx, &ctx.min_eigenvalue_symmetric(&ones), 0.0, 12);
    }
}
