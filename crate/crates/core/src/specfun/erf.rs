//! Error function and its complement.
//!
//! Rational approximations from the FreeBSD `s_erf.c` family (Sun
//! Microsystems, freely redistributable). Coefficients are carried in `f64`
//! and converted to the working scalar; the `exp(-x^2)` factor is split with
//! a fused multiply-add so the large-argument branch keeps full precision
//! without bit tricks.

#![allow(clippy::excessive_precision)]

use crate::scalar::{lit, Real};

const ERX: f64 = 8.45062911510467529297e-01;
const EFX: f64 = 1.28379167095512586316e-01;

// erf on [0, 0.84375]
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 6] = [
    1.0,
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];

// erf on [0.84375, 1.25]
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 7] = [
    1.0,
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];

// erfc on [1.25, 1/0.35]
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 9] = [
    1.0,
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];

// erfc on [1/0.35, 28]
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 8] = [
    1.0,
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

#[inline]
fn horner<T: Real>(coeffs: &[f64], x: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * x + lit(c))
}

/// `erfc(x)` for `x >= 1.25`; underflows to zero past 28.
fn erfc_tail<T: Real>(x: T) -> T {
    if x >= lit(28.0) {
        return T::zero();
    }
    let s = T::one() / (x * x);
    let ratio = if x < lit(1.0 / 0.35) {
        horner(&RA, s) / horner(&SA, s)
    } else {
        horner(&RB, s) / horner(&SB, s)
    };
    // x^2 = hi + lo exactly
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    (-hi).exp() * (ratio - lo - lit(0.5625)).exp() / x
}

/// Error function.
pub fn erf<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let magnitude = if ax < lit(0.84375) {
        if ax < lit(3.7252902984619140625e-9) {
            ax + lit::<T>(EFX) * ax
        } else {
            let z = ax * ax;
            ax + ax * (horner(&PP, z) / horner(&QQ, z))
        }
    } else if ax < lit(1.25) {
        let s = ax - T::one();
        lit::<T>(ERX) + horner(&PA, s) / horner(&QA, s)
    } else if ax >= lit(6.0) {
        T::one()
    } else {
        T::one() - erfc_tail(ax)
    };
    if x.is_sign_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Complementary error function `1 - erf(x)`, accurate in the upper tail.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let two = lit::<T>(2.0);
    let ax = x.abs();
    let negative = x.is_sign_negative();
    if ax < lit(0.84375) {
        let z = ax * ax;
        let y = horner(&PP, z) / horner(&QQ, z);
        let signed = if negative { -ax } else { ax };
        if ax < lit(0.25) || negative {
            return T::one() - (signed + signed * y);
        }
        return lit::<T>(0.5) - (ax * y + (ax - lit(0.5)));
    }
    if ax < lit(1.25) {
        let s = ax - T::one();
        let d = horner(&PA, s) / horner(&QA, s);
        return if negative {
            T::one() + lit::<T>(ERX) + d
        } else {
            T::one() - lit::<T>(ERX) - d
        };
    }
    let tail = erfc_tail(ax);
    if negative {
        two - tail
    } else {
        tail
    }
}
