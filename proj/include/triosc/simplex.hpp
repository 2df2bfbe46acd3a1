#pragma once

// Derivative-free Nelder-Mead simplex descent. The objectives in this
// project are smooth trigonometric polynomials in three angles, cheap to
// evaluate, so a simplex beats hand-derived gradients.

#include <functional>
#include <vector>

namespace triosc {

struct NelderMeadOptions {
    int max_iters = 400;
    double diameter_tol = 1e-12;  // stop when the simplex collapses below this
    double fval_tol = 0.0;        // stop when the best value drops below this
    double initial_step = 0.25;   // per-coordinate offset of the start simplex
};

struct NelderMeadResult {
    std::vector<double> x;
    double fval = 0.0;
    int iterations = 0;
    bool converged = false;  // a stop criterion fired before the budget ran out
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace triosc
