#include "rlchoice/numeric.hpp"

#include <algorithm>
#include <sstream>

#include "rlchoice/errors.hpp"

namespace rlchoice::numeric {

double log_sum_exp(std::span<const double> values) noexcept {
    double top = -std::numeric_limits<double>::infinity();
    for (double v : values) top = std::max(top, v);
    if (!std::isfinite(top)) return top;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - top);
    return top + std::log(acc);
}

namespace {

double checked(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (std::isnan(v)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "root function is NaN at " << x;
        throw SolverError(msg.str());
    }
    return v;
}

}  // namespace

double bisect(const std::function<double(double)>& f, double lo, double hi,
              const BisectOptions& options) {
    if (lo > hi) std::swap(lo, hi);
    double flo = checked(f, lo);
    double fhi = checked(f, hi);
    for (int n = 0; (flo > 0.0) == (fhi > 0.0) && flo != 0.0 && fhi != 0.0; ++n) {
        if (n == options.max_expansions) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "no sign change found after " << n << " bracket doublings (last bracket [" << lo
                << ", " << hi << "])";
            throw SolverError(msg.str());
        }
        const double center = 0.5 * (lo + hi);
        const double half = hi > lo ? hi - lo : 1.0;
        lo = center - half;
        hi = center + half;
        flo = checked(f, lo);
        fhi = checked(f, hi);
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;

    for (int it = 0; it < options.max_iterations && hi - lo > options.tolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fmid = checked(f, mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace rlchoice::numeric
