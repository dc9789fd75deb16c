#pragma once

#include <cstdint>
#include <span>

namespace backbone {

// Regularized incomplete gamma functions, P(a,x) + Q(a,x) = 1, a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// P(X >= observed) for X ~ Poisson(lambda). observed = 0 gives 1.
double poisson_survival(std::int64_t observed, double lambda);

// P(X >= observed) for X a sum of independent Bernoulli(p_k) trials.
// Exact up to floating-point rounding; throws if any p is outside [0,1].
double poisson_binomial_survival(std::int64_t observed, std::span<const double> probs);

}  // namespace backbone
