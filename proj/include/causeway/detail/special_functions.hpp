#pragma once

#include <cmath>
#include <limits>

#include "causeway/error.hpp"

// Self-contained evaluations of erf/erfc, the standard normal CDF and its
// inverse. Rational approximations: W. J. Cody's erf/erfc (SPECFUN) and
// Wichura's PPND16 (AS 241), both good to ~1e-15 in double precision.
// Keeping these in-tree pins test results to the same bits on every platform.

namespace causeway::detail {

inline double erfc_cody(double x);

inline double erf_cody(double x) {
    constexpr double a[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                             3.77485237685302021e02, 3.20937758913846947e03,
                             1.85777706184603153e-1};
    constexpr double b[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                             1.28261652607737228e03, 2.84423683343917062e03};
    const double ax = std::fabs(x);
    if (ax > 0.46875) return 1.0 - erfc_cody(x);
    const double y = x * x;
    double xnum = a[4] * y;
    double xden = y;
    for (int i = 0; i < 3; ++i) {
        xnum = (xnum + a[i]) * y;
        xden = (xden + b[i]) * y;
    }
    return x * (xnum + a[3]) / (xden + b[3]);
}

inline double erfc_cody(double x) {
    constexpr double c[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                             6.61191906371416295e01, 2.98635138197400131e02,
                             8.81952221241769090e02, 1.71204761263407058e03,
                             2.05107837782607147e03, 1.23033935479799725e03,
                             2.15311535474403846e-8};
    constexpr double d[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                             5.37181101862009858e02, 1.62138957456669019e03,
                             3.29079923573345963e03, 4.36261909014324716e03,
                             3.43936767414372164e03, 1.23033935480374942e03};
    constexpr double p[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                             1.25781726111229246e-1, 1.60837851487422766e-2,
                             6.58749161529837803e-4, 1.63153871373020978e-2};
    constexpr double q[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                             5.27905102951428412e-1, 6.05183413124413191e-2,
                             2.33520497626869185e-3};
    constexpr double inv_sqrt_pi = 5.6418958354775628695e-1;

    const double ax = std::fabs(x);
    if (ax <= 0.46875) return 1.0 - erf_cody(x);

    double result;
    if (ax <= 4.0) {
        double xnum = c[8] * ax;
        double xden = ax;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * ax;
            xden = (xden + d[i]) * ax;
        }
        result = (xnum + c[7]) / (xden + d[7]);
    } else {
        if (ax >= 26.543) {
            result = 0.0;
        } else {
            const double y = 1.0 / (ax * ax);
            double xnum = p[5] * y;
            double xden = y;
            for (int i = 0; i < 4; ++i) {
                xnum = (xnum + p[i]) * y;
                xden = (xden + q[i]) * y;
            }
            result = y * (xnum + p[4]) / (xden + q[4]);
            result = (inv_sqrt_pi - result) / ax;
        }
    }
    // exp(-x^2) split to preserve accuracy for large x
    const double ysq = std::trunc(ax * 16.0) / 16.0;
    const double del = (ax - ysq) * (ax + ysq);
    result *= std::exp(-ysq * ysq) * std::exp(-del);

    return x < 0.0 ? 2.0 - result : result;
}

// P(N(0,1) <= x)
inline double normal_cdf(double x) { return 0.5 * erfc_cody(-x / std::sqrt(2.0)); }

// Two-sided tail probability 2*(1 - Phi(|t|)) = erfc(|t|/sqrt(2)).
inline double two_sided_normal_p(double t) { return erfc_cody(std::fabs(t) / std::sqrt(2.0)); }

// Inverse of the standard normal CDF (Wichura, algorithm AS 241, PPND16).
inline double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw ValidationError("normal_quantile: p must be in (0,1)");

    constexpr double a[8] = {3.3871328727963666080e0,  1.3314166789178437745e+2,
                             1.9715909503065514427e+3, 1.3731693765509461125e+4,
                             4.5921953931549871457e+4, 6.7265770927008700853e+4,
                             3.3430575583588128105e+4, 2.5090809287301226727e+3};
    constexpr double b[8] = {1.0,
                             4.2313330701600911252e+1,
                             6.8718700749205790830e+2,
                             5.3941960214247511077e+3,
                             2.1213794301586595867e+4,
                             3.9307895800092710610e+4,
                             2.8729085735721942674e+4,
                             5.2264952788528545610e+3};
    constexpr double c[8] = {1.42343711074968357734e0,   4.63033784615654529590e0,
                             5.76949722146069140550e0,   3.64784832476320460504e0,
                             1.27045825245236838258e0,   2.41780725177450611770e-1,
                             2.27238449892691845833e-2,  7.74545014278341407640e-4};
    constexpr double d[8] = {1.0,
                             2.05319162663775882187e0,
                             1.67638483018380384940e0,
                             6.89767334985100004550e-1,
                             1.48103976427480074590e-1,
                             1.51986665636164571966e-2,
                             5.47593808499534494600e-4,
                             1.05075007164441684324e-9};
    constexpr double e[8] = {6.65790464350110377720e0,   5.46378491116411436990e0,
                             1.78482653991729133580e0,   2.96560571828504891230e-1,
                             2.65321895265761230930e-2,  1.24266094738807843860e-3,
                             2.71155556874348757815e-5,  2.01033439929228813265e-7};
    constexpr double f[8] = {1.0,
                             5.99832206555887937690e-1,
                             1.36929880922735805310e-1,
                             1.48753612908506148525e-2,
                             7.86869131145613259100e-4,
                             1.84631831751005468180e-5,
                             1.42151175831644588870e-7,
                             2.04426310338993978564e-15};

    auto rational = [](const double (&num)[8], const double (&den)[8], double r) {
        double n = num[7];
        double m = den[7];
        for (int i = 6; i >= 0; --i) {
            n = n * r + num[i];
            m = m * r + den[i];
        }
        return n / m;
    };

    const double q = prob - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * rational(a, b, r);
    }
    double r = q < 0.0 ? prob : 1.0 - prob;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        value = rational(c, d, r - 1.6);
    } else {
        value = rational(e, f, r - 5.0);
    }
    return q < 0.0 ? -value : value;
}

}  // namespace causeway::detail
