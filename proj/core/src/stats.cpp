#include "backbone/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace backbone {

namespace {

constexpr int kMaxGammaIter = 500;
constexpr double kGammaEps = 1e-16;

// series expansion of P(a,x), reliable for x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < kMaxGammaIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kGammaEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), reliable for x >= a + 1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxGammaIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kGammaEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_p: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_q: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double poisson_survival(std::int64_t observed, double lambda) {
    if (observed <= 0) return 1.0;
    if (lambda < 0) throw std::invalid_argument("poisson_survival: lambda must be nonnegative");
    if (lambda == 0.0) return 0.0;
    // P(X >= k) = P(k, lambda) with P the lower regularized incomplete gamma
    return gamma_p(static_cast<double>(observed), lambda);
}

namespace {

double convolution_tail(std::int64_t observed, const std::vector<double>& probs) {
    const size_t n = probs.size();
    std::vector<double> dist(n + 1, 0.0);
    dist[0] = 1.0;
    size_t filled = 0;
    for (double p : probs) {
        ++filled;
        for (size_t j = filled; j >= 1; --j) {
            dist[j] = dist[j] * (1.0 - p) + dist[j - 1] * p;
        }
        dist[0] *= (1.0 - p);
    }
    double tail = 0.0;
    for (size_t j = n; j + 1 > static_cast<size_t>(observed); --j) {
        tail += dist[j];  // summed smallest-first
    }
    return std::min(1.0, tail);
}

// P(X < observed) tracking only the states below the cut
double below_mass(std::int64_t observed, const std::vector<double>& probs) {
    const size_t cap = static_cast<size_t>(observed);  // states 0..cap-1
    std::vector<double> dist(cap, 0.0);
    dist[0] = 1.0;
    size_t filled = 0;
    for (double p : probs) {
        ++filled;
        size_t hi = std::min(filled, cap - 1);
        for (size_t j = hi; j >= 1; --j) {
            dist[j] = dist[j] * (1.0 - p) + dist[j - 1] * p;
        }
        dist[0] *= (1.0 - p);
    }
    double below = 0.0;
    for (size_t j = cap; j >= 1; --j) below += dist[j - 1];
    return below;
}

}  // namespace

double poisson_binomial_survival(std::int64_t observed, std::span<const double> probs) {
    std::vector<double> p;
    p.reserve(probs.size());
    for (double v : probs) {
        if (v < -1e-12 || v > 1.0 + 1e-12) {
            throw std::invalid_argument("poisson_binomial_survival: probability outside [0,1]");
        }
        v = std::clamp(v, 0.0, 1.0);
        if (v > 0.0) p.push_back(v);
    }
    const std::int64_t n = static_cast<std::int64_t>(p.size());
    if (observed <= 0) return 1.0;
    if (observed > n) return 0.0;

    if (n <= 2048) return convolution_tail(observed, p);
    double s = 1.0 - below_mass(observed, p);
    if (s >= 1e-9) return std::min(1.0, s);
    // cancellation regime: redo with the full distribution when affordable
    if (n <= 8192) return convolution_tail(observed, p);
    return std::clamp(s, std::numeric_limits<double>::min(), 1.0);
}

}  // namespace backbone
