#pragma once

#include <functional>
#include <span>

namespace msc {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;  // at worst_index
  double numeric = 0.0;
};

// Central differences (f(x + eps e_i) - f(x - eps e_i)) / 2 eps for every coordinate,
// compared with `analytic` using |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult grad_check(const std::function<double(std::span<const double>)>& fn, std::span<const double> inputs,
                           std::span<const double> analytic, double eps = 1e-3);

}  // namespace msc
