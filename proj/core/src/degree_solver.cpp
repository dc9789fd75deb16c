#include "backbone/degree_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace backbone {

FitNonConvergence::FitNonConvergence(double residual_, int iterations_)
    : std::runtime_error("degree system did not converge: residual " + std::to_string(residual_) +
                         " after " + std::to_string(iterations_) + " iterations"),
      residual(residual_),
      iterations(iterations_) {}

double DegreeSystemFit::probability(int left, int right) const {
    double x = left_fitness[static_cast<size_t>(left)];
    double y = right_fitness[static_cast<size_t>(right)];
    bool x_pinned = std::isinf(x);
    bool y_pinned = std::isinf(y);
    if (x_pinned && y_pinned) return 1.0;
    if (x_pinned) {
        if (y == 0.0) {
            return left_round[static_cast<size_t>(left)] <= right_round[static_cast<size_t>(right)]
                       ? 1.0
                       : 0.0;
        }
        return 1.0;
    }
    if (y_pinned) {
        if (x == 0.0) {
            return right_round[static_cast<size_t>(right)] <= left_round[static_cast<size_t>(left)]
                       ? 1.0
                       : 0.0;
        }
        return 1.0;
    }
    if (x == 0.0 || y == 0.0) return 0.0;
    double xy = x * y;
    return xy / (1.0 + xy);
}

namespace {

struct DegreeClass {
    double target = 0;  // reduced degree shared by the class
    double count = 0;   // nodes in the class
    double fitness = 0;
};

// One Gauss-Seidel sweep of x_c <- d_c / sum_s n_s y_s / (1 + x_c y_s),
// blended in log space by omega.
void sweep(std::vector<DegreeClass>& own, const std::vector<DegreeClass>& other, double omega) {
    for (auto& c : own) {
        double denom = 0;
        for (const auto& o : other) {
            denom += o.count * o.fitness / (1.0 + c.fitness * o.fitness);
        }
        double candidate = c.target / denom;
        c.fitness = omega == 1.0 ? candidate
                                 : std::exp((1.0 - omega) * std::log(c.fitness) +
                                            omega * std::log(candidate));
    }
}

double max_relative_error(const std::vector<DegreeClass>& own,
                          const std::vector<DegreeClass>& other) {
    double worst = 0;
    for (const auto& c : own) {
        double expected = 0;
        for (const auto& o : other) {
            double xy = c.fitness * o.fitness;
            expected += o.count * xy / (1.0 + xy);
        }
        worst = std::max(worst, std::abs(expected - c.target) / std::max(c.target, 1.0));
    }
    return worst;
}

}  // namespace

DegreeSystemFit solve_degree_system(const std::vector<int>& left_degrees,
                                    const std::vector<int>& right_degrees, double tol,
                                    int max_iter) {
    if (tol <= 0) throw std::invalid_argument("solve_degree_system: tol must be positive");
    const std::int64_t sum_left = std::accumulate(left_degrees.begin(), left_degrees.end(), std::int64_t{0});
    const std::int64_t sum_right =
        std::accumulate(right_degrees.begin(), right_degrees.end(), std::int64_t{0});
    if (sum_left != sum_right) {
        throw std::invalid_argument("degree sequences disagree on the edge count");
    }

    const int nl = static_cast<int>(left_degrees.size());
    const int nr = static_cast<int>(right_degrees.size());
    DegreeSystemFit fit;
    fit.left_fitness.assign(static_cast<size_t>(nl), 0.0);
    fit.right_fitness.assign(static_cast<size_t>(nr), 0.0);
    fit.left_round.assign(static_cast<size_t>(nl), -1);
    fit.right_round.assign(static_cast<size_t>(nr), -1);

    // Peel forced nodes: degree-zero first, then nodes linked to the whole
    // remaining opposite layer, until only the strict interior is left.
    std::vector<char> left_active(static_cast<size_t>(nl), 1), right_active(static_cast<size_t>(nr), 1);
    std::vector<std::int64_t> left_reduced(left_degrees.begin(), left_degrees.end());
    std::vector<std::int64_t> right_reduced(right_degrees.begin(), right_degrees.end());
    int n_left_active = nl, n_right_active = nr;

    for (int i = 0; i < nl; ++i) {
        if (left_degrees[static_cast<size_t>(i)] == 0) {
            left_active[static_cast<size_t>(i)] = 0;
            fit.left_round[static_cast<size_t>(i)] = 0;
            --n_left_active;
        }
    }
    for (int a = 0; a < nr; ++a) {
        if (right_degrees[static_cast<size_t>(a)] == 0) {
            right_active[static_cast<size_t>(a)] = 0;
            fit.right_round[static_cast<size_t>(a)] = 0;
            --n_right_active;
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    for (int round = 1;; ++round) {
        bool changed = false;
        std::vector<int> pin_left, pin_right;
        for (int i = 0; i < nl; ++i) {
            if (left_active[static_cast<size_t>(i)] && left_reduced[static_cast<size_t>(i)] > 0 &&
                left_reduced[static_cast<size_t>(i)] == n_right_active) {
                pin_left.push_back(i);
            }
        }
        for (int a = 0; a < nr; ++a) {
            if (right_active[static_cast<size_t>(a)] && right_reduced[static_cast<size_t>(a)] > 0 &&
                right_reduced[static_cast<size_t>(a)] == n_left_active) {
                pin_right.push_back(a);
            }
        }
        // pinning both sides at once double-counts the pinned-pinned links
        for (int i : pin_left) {
            left_active[static_cast<size_t>(i)] = 0;
            fit.left_fitness[static_cast<size_t>(i)] = inf;
            fit.left_round[static_cast<size_t>(i)] = round;
            --n_left_active;
            ++fit.pinned;
            changed = true;
            for (int a = 0; a < nr; ++a) {
                if (right_active[static_cast<size_t>(a)]) --right_reduced[static_cast<size_t>(a)];
            }
        }
        for (int a : pin_right) {
            if (!right_active[static_cast<size_t>(a)]) continue;
            // re-check: pinning lefts above may have already satisfied it
            if (right_reduced[static_cast<size_t>(a)] != n_left_active &&
                right_reduced[static_cast<size_t>(a)] != 0) {
                continue;
            }
            if (right_reduced[static_cast<size_t>(a)] == 0) continue;  // handled by the zero pass below
            right_active[static_cast<size_t>(a)] = 0;
            fit.right_fitness[static_cast<size_t>(a)] = inf;
            fit.right_round[static_cast<size_t>(a)] = round;
            --n_right_active;
            ++fit.pinned;
            changed = true;
            for (int i = 0; i < nl; ++i) {
                if (left_active[static_cast<size_t>(i)]) --left_reduced[static_cast<size_t>(i)];
            }
        }
        for (int i = 0; i < nl; ++i) {
            if (left_active[static_cast<size_t>(i)] && left_reduced[static_cast<size_t>(i)] == 0) {
                left_active[static_cast<size_t>(i)] = 0;
                fit.left_round[static_cast<size_t>(i)] = round;
                --n_left_active;
                changed = true;
            }
        }
        for (int a = 0; a < nr; ++a) {
            if (right_active[static_cast<size_t>(a)] && right_reduced[static_cast<size_t>(a)] == 0) {
                right_active[static_cast<size_t>(a)] = 0;
                fit.right_round[static_cast<size_t>(a)] = round;
                --n_right_active;
                changed = true;
            }
        }
        if (!changed) break;
    }

    if (n_left_active == 0 || n_right_active == 0) {
        fit.residual = 0.0;
        return fit;
    }

    // distinct reduced degrees share one unknown
    std::map<std::int64_t, double> left_counts, right_counts;
    for (int i = 0; i < nl; ++i) {
        if (left_active[static_cast<size_t>(i)]) left_counts[left_reduced[static_cast<size_t>(i)]] += 1;
    }
    for (int a = 0; a < nr; ++a) {
        if (right_active[static_cast<size_t>(a)]) right_counts[right_reduced[static_cast<size_t>(a)]] += 1;
    }
    std::vector<DegreeClass> lc, rc;
    double m_interior = 0;
    for (auto [d, c] : left_counts) {
        m_interior += static_cast<double>(d) * c;
        lc.push_back({static_cast<double>(d), c, 0.0});
    }
    for (auto [d, c] : right_counts) rc.push_back({static_cast<double>(d), c, 0.0});
    const double root_m = std::sqrt(m_interior);
    for (auto& c : lc) c.fitness = c.target / root_m;
    for (auto& c : rc) c.fitness = c.target / root_m;

    double omega = 1.0;
    double prev_residual = std::numeric_limits<double>::infinity();
    double residual = prev_residual;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        sweep(lc, rc, omega);
        sweep(rc, lc, omega);
        residual = std::max(max_relative_error(lc, rc), max_relative_error(rc, lc));
        if (residual <= tol) break;
        if (residual > prev_residual) {
            omega = std::max(0.125, omega * 0.5);
        } else if (omega < 1.0) {
            omega = std::min(1.0, omega * 1.4);
        }
        prev_residual = residual;
    }
    if (residual > tol) throw FitNonConvergence(residual, iter);

    std::map<std::int64_t, double> left_fit, right_fit;
    for (const auto& c : lc) left_fit[static_cast<std::int64_t>(c.target)] = c.fitness;
    for (const auto& c : rc) right_fit[static_cast<std::int64_t>(c.target)] = c.fitness;
    for (int i = 0; i < nl; ++i) {
        if (left_active[static_cast<size_t>(i)]) {
            fit.left_fitness[static_cast<size_t>(i)] = left_fit[left_reduced[static_cast<size_t>(i)]];
        }
    }
    for (int a = 0; a < nr; ++a) {
        if (right_active[static_cast<size_t>(a)]) {
            fit.right_fitness[static_cast<size_t>(a)] = right_fit[right_reduced[static_cast<size_t>(a)]];
        }
    }
    fit.residual = residual;
    fit.iterations = iter + 1;
    return fit;
}

}  // namespace backbone
