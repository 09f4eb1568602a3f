#pragma once

#include <cmath>
#include <stdexcept>

namespace recommerce {

/// Bisection for an increasing function with f(lo) < 0 < f(hi). Stops when the
/// bracket is narrower than tol (absolute, in x) and returns its midpoint.
template <class F>
double bisect_increasing(F&& f, double lo, double hi, double tol)
{
    if (!(lo < hi))
        throw std::invalid_argument("bisect_increasing: empty bracket");
    if (!(tol > 0.0))
        throw std::invalid_argument("bisect_increasing: tolerance must be positive");

    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo >= 0.0 || f_hi <= 0.0)
        throw std::domain_error("bisect_increasing: root not bracketed");

    // 2^-200 of any finite bracket is far below double resolution.
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double f_mid = f(mid);
        if (f_mid == 0.0)
            return mid;
        if (f_mid < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace recommerce
