#include "upconv/root_finding.hpp"

#include "upconv/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

namespace upconv {

double find_unique_root(const std::function<double(double)>& f, Range bracket,
                        const SolverOptions& options, std::string_view variable) {
    if (!(bracket.lo < bracket.hi) || !std::isfinite(bracket.lo) || !std::isfinite(bracket.hi)) {
        throw DomainError("bracket for " + std::string(variable) + " must satisfy lo < hi");
    }
    const int n = std::max(options.scan_intervals, 1);

    std::vector<double> xs(n + 1);
    std::vector<double> fs(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = i == n ? bracket.hi : bracket.lo + bracket.width() * i / n;
        fs[i] = f(xs[i]);
    }

    std::vector<std::pair<double, double>> crossings;
    std::vector<double> exact_roots;
    for (int i = 0; i <= n; ++i) {
        if (fs[i] == 0.0) {
            exact_roots.push_back(xs[i]);
            continue;
        }
        if (i < n && fs[i + 1] != 0.0 && std::signbit(fs[i]) != std::signbit(fs[i + 1])) {
            crossings.emplace_back(xs[i], xs[i + 1]);
        }
    }
    for (double r : exact_roots) crossings.emplace_back(r, r);

    if (crossings.empty()) {
        std::ostringstream os;
        os << "no phase-matched " << variable << " in range [" << bracket.lo << ", " << bracket.hi << "]";
        throw SolverError(SolverError::Kind::NoRoot, os.str());
    }
    if (crossings.size() > 1) {
        std::ostringstream os;
        os << "ambiguous bracket for " << variable << ": " << crossings.size() << " sign changes in";
        for (const auto& [a, b] : crossings) os << " [" << a << ", " << b << "]";
        throw SolverError(SolverError::Kind::Ambiguous, os.str(), crossings);
    }

    auto [a, b] = crossings.front();
    if (a == b) return a;

    const double fa = f(a);
    const double fb = f(b);
    std::uintmax_t iterations = static_cast<std::uintmax_t>(options.max_iterations);
    const auto tol = [&](double lo, double hi) {
        return std::abs(hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) ||
               std::abs(f(0.5 * (lo + hi))) < 0.01 * options.residual_tol;
    };
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iterations);

    const double flo = f(lo);
    const double fhi = f(hi);
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    double best = mid;
    double best_residual = std::abs(fmid);
    if (std::abs(flo) < best_residual) { best = lo; best_residual = std::abs(flo); }
    if (std::abs(fhi) < best_residual) { best = hi; best_residual = std::abs(fhi); }

    if (!(best_residual < options.residual_tol)) {
        std::ostringstream os;
        os << "root search for " << variable << " stalled with residual " << best_residual;
        throw SolverError(SolverError::Kind::NotConverged, os.str());
    }
    return best;
}

}  // namespace upconv
