#include "triosc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace triosc {

namespace {

std::vector<double> combine(const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * (b[i] - a[i]);
    return r;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> xs(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += opts.initial_step;
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    std::vector<std::size_t> order(n + 1);
    NelderMeadResult result;

    for (result.iterations = 0; result.iterations < opts.max_iters; ++result.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });

        const std::size_t best = order[0], second_worst = order[n - 1], worst = order[n];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                diameter = std::max(diameter, std::abs(xs[i][k] - xs[best][k]));
        if (fs[best] <= opts.fval_tol || diameter < opts.diameter_tol) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += xs[i][k];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        const std::vector<double> reflected = combine(centroid, -alpha, xs[worst]);
        const double f_reflected = f(reflected);

        if (f_reflected < fs[best]) {
            const std::vector<double> expanded = combine(centroid, -gamma, xs[worst]);
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                xs[worst] = expanded;
                fs[worst] = f_expanded;
            } else {
                xs[worst] = reflected;
                fs[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < fs[second_worst]) {
            xs[worst] = reflected;
            fs[worst] = f_reflected;
            continue;
        }

        if (f_reflected < fs[worst]) {
            // Outside contraction, toward the reflected point.
            const std::vector<double> contracted = combine(centroid, rho, reflected);
            const double f_contracted = f(contracted);
            if (f_contracted <= f_reflected) {
                xs[worst] = contracted;
                fs[worst] = f_contracted;
                continue;
            }
        } else {
            const std::vector<double> contracted = combine(centroid, rho, xs[worst]);
            const double f_contracted = f(contracted);
            if (f_contracted < fs[worst]) {
                xs[worst] = contracted;
                fs[worst] = f_contracted;
                continue;
            }
        }

        // Shrink everything toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            xs[i] = combine(xs[best], sigma, xs[i]);
            fs[i] = f(xs[i]);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fs[i] < fs[best]) best = i;
    result.x = xs[best];
    result.fval = fs[best];
    return result;
}

}  // namespace triosc
