#pragma once

#include "upconv/dispersion.hpp"

#include <functional>
#include <string_view>

namespace upconv {

struct SolverOptions {
    /// Residual the returned root must meet, in the units of the objective.
    double residual_tol = 1e-10;
    /// Uniform samples used to locate sign changes inside the bracket.
    int scan_intervals = 64;
    int max_iterations = 200;
};

/// Finds the single root of `f` inside `bracket`.
///
/// The bracket is scanned on a uniform grid first. No sign change raises
/// SolverError::NoRoot, more than one raises SolverError::Ambiguous with the
/// offending sub-brackets attached. The unique sub-bracket is then refined with
/// TOMS 748 (secant/inverse-quadratic steps safeguarded by bisection).
double find_unique_root(const std::function<double(double)>& f, Range bracket,
                        const SolverOptions& options = {}, std::string_view variable = "x");

}  // namespace upconv
