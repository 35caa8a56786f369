// quadrature.hpp - globally adaptive Gauss-Kronrod (7/15) over a panel list.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace ddf {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    double aux = 0.0;  // integral of the second integrand component
    std::size_t evaluations = 0;
    bool converged = false;
};

// f returns {primary, secondary}; refinement is driven by the primary component only.
// Stops when total error <= max(rel_tol*|value|, abs_tol) or the evaluation budget runs out.
// Panels are refined in a fixed order, so results are deterministic.
using Integrand2 = std::function<std::array<double, 2>(double)>;

QuadResult integrate_gk(const Integrand2& f, const std::vector<double>& breakpoints, double rel_tol,
                        double abs_tol, std::size_t max_evals = 4000000);

QuadResult integrate_gk(const std::function<double(double)>& f, const std::vector<double>& breakpoints,
                        double rel_tol, double abs_tol, std::size_t max_evals = 4000000);

}  // namespace ddf
