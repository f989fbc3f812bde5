#include "msc/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace msc {

GradCheckResult grad_check(const std::function<double(std::span<const double>)>& fn, std::span<const double> inputs,
                           std::span<const double> analytic, double eps) {
  if (inputs.size() != analytic.size()) throw std::invalid_argument("grad_check: gradient size mismatch");
  std::vector<double> x(inputs.begin(), inputs.end());
  GradCheckResult result;
  result.max_relative_error = -1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const double plus = fn(x);
    x[i] = saved - eps;
    const double minus = fn(x);
    x[i] = saved;
    const double numeric = (plus - minus) / (2.0 * eps);
    const double a = analytic[i];
    const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
    if (rel > result.max_relative_error) result = GradCheckResult{rel, i, a, numeric};
  }
  result.max_relative_error = std::max(result.max_relative_error, 0.0);
  return result;
}

}  // namespace msc
