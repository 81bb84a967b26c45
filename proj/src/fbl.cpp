#include "rsmec/fbl.hpp"

#include <cmath>
#include <stdexcept>

namespace rsmec {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// erfc after W. J. Cody, "Rational Chebyshev approximation for the error
// function" (the SPECFUN coefficients). Three regimes: small |x| via the
// erf rational form, mid range and far tail via scaled erfc forms with
// the split-exponential trick to keep exp(-x^2) accurate.
double erfc_cody(double x) {
    static const double a[5] = {3.16112374387056560e0, 1.13864154151050156e2,
                                3.77485237685302021e2, 3.20937758913846947e3,
                                1.85777706184603153e-1};
    static const double b[4] = {2.36012909523441209e1, 2.44024637934444173e2,
                                1.28261652607737228e3, 2.84423683343917062e3};
    static const double c[9] = {5.64188496988670089e-1, 8.88314979438837594e0,
                                6.61191906371416295e1,  2.98635138197400131e2,
                                8.81952221241769090e2,  1.71204761263407058e3,
                                2.05107837782607147e3,  1.23033935479799725e3,
                                2.15311535474403846e-8};
    static const double d[8] = {1.57449261107098347e1, 1.17693950891312499e2,
                                5.37181101862009858e2, 1.62138957456669019e3,
                                3.29079923573345963e3, 4.36261909014324716e3,
                                3.43936767414372164e3, 1.23033935480374942e3};
    static const double p[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                                1.25781726111229246e-1, 1.60837851487422766e-2,
                                6.58749161529837803e-4, 1.63153871373020978e-2};
    static const double q[5] = {2.56852019228982242e0, 1.87295284992346047e0,
                                5.27905102951428412e-1, 6.05183413124413191e-2,
                                2.33520497626869185e-3};
    const double y = std::fabs(x);

    if (y <= 0.46875) {
        const double z = y * y;
        double xnum = a[4] * z;
        double xden = z;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + a[i]) * z;
            xden = (xden + b[i]) * z;
        }
        const double erf = x * (xnum + a[3]) / (xden + b[3]);
        return 1.0 - erf;
    }

    double result;
    if (y <= 4.0) {
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        result = (xnum + c[7]) / (xden + d[7]);
    } else if (y < 26.6) {
        const double z = 1.0 / (y * y);
        double xnum = p[5] * z;
        double xden = z;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + p[i]) * z;
            xden = (xden + q[i]) * z;
        }
        double r = z * (xnum + p[4]) / (xden + q[4]);
        result = (5.6418958354775628695e-1 - r) / y;
    } else {
        result = 0.0;  // underflows in double anyway
    }

    if (result != 0.0) {
        const double ysq = std::trunc(y * 16.0) / 16.0;
        const double del = (y - ysq) * (y + ysq);
        result *= std::exp(-ysq * ysq) * std::exp(-del);
    }
    return x < 0.0 ? 2.0 - result : result;
}

double gauss_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

}  // namespace

double q_function(double x) {
    if (std::isnan(x)) throw std::domain_error("q_function: x is NaN");
    if (x > 40.0) return 0.0;
    if (x < -40.0) return 1.0;
    return 0.5 * erfc_cody(x * kInvSqrt2);
}

double q_inverse(double prob) {
    if (!(prob > 0.0 && prob < 1.0))
        throw std::domain_error("q_inverse: probability must lie in (0,1)");
    if (prob == 0.5) return 0.0;
    if (prob > 0.5) return -q_inverse(1.0 - prob);

    // prob < 0.5 so the root is in (0, 40). Bisection narrows the bracket,
    // Newton polishes inside it.
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > prob)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 60; ++i) {
        const double pdf = gauss_pdf(x);
        if (pdf <= 0.0) break;
        const double step = (q_function(x) - prob) / pdf;
        double next = x + step;
        if (next <= lo || next >= hi) next = 0.5 * (lo + hi);  // safeguard
        if (q_function(next) > prob)
            lo = next;
        else
            hi = next;
        const double moved = std::fabs(next - x);
        x = next;
        if (moved <= 1e-14 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

double dispersion(double gamma) {
    if (!(gamma >= 0.0)) throw std::domain_error("dispersion: gamma must be >= 0");
    const double s = 1.0 + gamma;
    return 1.0 - 1.0 / (s * s);
}

double fbl_rate(const FblPoint& p, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("fbl_rate: epsilon must lie in (0,1)");
    if (!(p.gamma > 0.0)) throw std::domain_error("fbl_rate: gamma must be > 0");
    if (p.blocklength < 1) throw std::domain_error("fbl_rate: blocklength must be >= 1");
    const double v = dispersion(p.gamma);
    const double penalty = std::sqrt(v / static_cast<double>(p.blocklength));
    return std::log2(1.0 + p.gamma) - penalty * q_inverse(epsilon);
}

double f_margin(const FblPoint& p) {
    if (!(p.gamma > 0.0))
        throw std::domain_error("f_margin: singular at gamma = 0");
    if (p.blocklength < 1) throw std::domain_error("f_margin: blocklength must be >= 1");
    const double n = static_cast<double>(p.blocklength);
    const double v = dispersion(p.gamma);
    return (std::log2(1.0 + p.gamma) - p.bits / n) / std::sqrt(v / n);
}

double error_probability(const FblPoint& p) {
    if (!(p.gamma >= 0.0)) throw std::domain_error("error_probability: gamma must be >= 0");
    if (p.gamma == 0.0) return 1.0;
    return q_function(f_margin(p));
}

double chernoff_bound(const FblPoint& p) {
    if (!(p.gamma >= 0.0)) throw std::domain_error("chernoff_bound: gamma must be >= 0");
    if (p.gamma == 0.0) return 1.0;
    const double f = f_margin(p);
    return std::exp(-0.5 * f * f);
}

}  // namespace rsmec
