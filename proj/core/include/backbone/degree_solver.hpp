#pragma once

#include <stdexcept>
#include <vector>

namespace backbone {

class FitNonConvergence : public std::runtime_error {
public:
    FitNonConvergence(double residual, int iterations);
    double residual;
    int iterations;
};

/// Solution of the bipartite likelihood system
///   sum_a x_i y_a / (1 + x_i y_a) = k_i,   sum_i x_i y_a / (1 + x_i y_a) = k_a.
///
/// Nodes are classified before solving: zero-degree nodes take fitness 0,
/// nodes whose links are forced (degree equal to the whole opposite active
/// set) are pinned at probability 1, and the remaining interior system is
/// solved numerically over distinct degree classes. `round` records the
/// peeling step at which a node left the interior (-1 for interior nodes);
/// it disambiguates probabilities between pinned and saturated-zero nodes.
struct DegreeSystemFit {
    std::vector<double> left_fitness;   // +inf for pinned, 0 for zero-degree
    std::vector<double> right_fitness;
    std::vector<int> left_round;
    std::vector<int> right_round;
    double residual = 0.0;
    int iterations = 0;
    int pinned = 0;

    double probability(int left, int right) const;
};

DegreeSystemFit solve_degree_system(const std::vector<int>& left_degrees,
                                    const std::vector<int>& right_degrees, double tol,
                                    int max_iter);

}  // namespace backbone
