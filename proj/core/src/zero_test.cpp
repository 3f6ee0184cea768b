#include "dpass/zero_test.hpp"

#include <cmath>
#include <random>

#include "dpass/error.hpp"

namespace dpass {

ZeroVerdict zero_test(const Expr& e, const ZeroTestOptions& options) {
  if (e.is_zero_literal()) return {true, false};
  if (e.as_rational()) return {false, false};
  AtomSet atoms = depends_on(e);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> dist(options.low, options.high);
  EvalOptions eval_options{options.pole_epsilon};
  int regular = 0;
  int budget = options.samples * options.attempts_per_sample;
  while (regular < options.samples && budget-- > 0) {
    Assignment point;
    for (const auto& a : atoms) point.emplace(a, dist(rng));
    double value = 0;
    try {
      value = eval(e, point, eval_options);
    } catch (const PoleError&) {
      continue;
    }
    if (!std::isfinite(value)) continue;
    if (std::abs(value) >= options.epsilon) return {false, false};
    ++regular;
  }
  if (regular == 0) throw IndeterminateError("zero test: every sample point hit a pole");
  return {true, true};
}

bool is_zero(const Expr& e, const ZeroTestOptions& options) { return zero_test(e, options).zero; }

}  // namespace dpass
