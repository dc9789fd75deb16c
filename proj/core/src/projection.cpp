#include "backbone/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "backbone/csv.hpp"
#include "backbone/parallel.hpp"

namespace backbone {

namespace {

std::int64_t pair_key(int a, int b) {
    return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double floor_positive(double p) {
    if (p <= 0.0) return std::numeric_limits<double>::min();
    return std::min(p, 1.0);
}

}  // namespace

FdrResult fdr_select(const std::vector<double>& p_values, double alpha, std::int64_t n_tests) {
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("fdr_select: alpha must be in (0,1)");
    if (p_values.empty()) throw std::invalid_argument("fdr_select: empty p-value sequence");
    if (n_tests <= 0) n_tests = static_cast<std::int64_t>(p_values.size());
    if (n_tests < static_cast<std::int64_t>(p_values.size())) {
        throw std::invalid_argument("fdr_select: n_tests smaller than the sequence");
    }
    std::vector<size_t> order(p_values.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return p_values[x] < p_values[y]; });

    FdrResult out;
    out.alpha = alpha;
    out.n_tests = n_tests;
    std::int64_t best = 0;
    for (std::int64_t i = static_cast<std::int64_t>(order.size()); i >= 1; --i) {
        double threshold = static_cast<double>(i) * alpha / static_cast<double>(n_tests);
        if (p_values[order[static_cast<size_t>(i - 1)]] <= threshold) {
            best = i;
            break;
        }
    }
    out.threshold_rank = best;
    if (best > 0) {
        out.threshold_p = p_values[order[static_cast<size_t>(best - 1)]];
        out.rejected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best));
        std::sort(out.rejected.begin(), out.rejected.end());
    }
    return out;
}

FdrResult bonferroni_select(const std::vector<double>& p_values, double alpha,
                            std::int64_t n_tests) {
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw std::invalid_argument("bonferroni_select: alpha must be in (0,1)");
    }
    if (p_values.empty()) throw std::invalid_argument("bonferroni_select: empty p-value sequence");
    if (n_tests <= 0) n_tests = static_cast<std::int64_t>(p_values.size());
    FdrResult out;
    out.alpha = alpha;
    out.n_tests = n_tests;
    double cut = alpha / static_cast<double>(n_tests);
    for (size_t i = 0; i < p_values.size(); ++i) {
        if (p_values[i] <= cut) out.rejected.push_back(i);
    }
    out.threshold_rank = static_cast<std::int64_t>(out.rejected.size());
    out.threshold_p = cut;
    return out;
}

std::vector<PairStatistic> observed_vmotifs_undirected(const BipartiteGraph& g) {
    std::unordered_map<std::int64_t, std::int64_t> counts;
    for (int a = 0; a < g.n_right(); ++a) {
        const auto& nbrs = g.neighbors_of_right(a);  // sorted ascending
        for (size_t x = 0; x < nbrs.size(); ++x) {
            for (size_t y = x + 1; y < nbrs.size(); ++y) {
                ++counts[pair_key(nbrs[x], nbrs[y])];
            }
        }
    }
    std::vector<PairStatistic> out;
    out.reserve(counts.size());
    for (auto [key, c] : counts) {
        PairStatistic s;
        s.a = static_cast<int>(key >> 32);
        s.b = static_cast<int>(key & 0xffffffff);
        s.observed = c;
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const PairStatistic& x, const PairStatistic& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    return out;
}

double pair_lambda_undirected(const BicmFit& fit, int i, int j) {
    if (fit.mode == BicmMode::chung_lu) {
        double ki = fit.left_degrees[static_cast<size_t>(i)];
        double kj = fit.left_degrees[static_cast<size_t>(j)];
        double m = static_cast<double>(fit.m);
        return ki * kj * fit.sum_right_degree_sq() / (m * m);
    }
    double sum = 0;
    for (int a = 0; a < fit.n_right(); ++a) {
        sum += fit.link_probability(i, a) * fit.link_probability(j, a);
    }
    return sum;
}

std::vector<double> pair_probs_undirected(const BicmFit& fit, int i, int j) {
    std::vector<double> probs(static_cast<size_t>(fit.n_right()));
    for (int a = 0; a < fit.n_right(); ++a) {
        probs[static_cast<size_t>(a)] = fit.link_probability(i, a) * fit.link_probability(j, a);
    }
    return probs;
}

namespace {

NullMode pick_mode_undirected(const BipartiteGraph& g, const BicmFit& fit) {
    if (g.n_right() <= 5000) return NullMode::exact_pb;
    // largest per-motif probability comes from the highest-degree endpoints
    int imax = static_cast<int>(std::max_element(fit.left_degrees.begin(), fit.left_degrees.end()) -
                                fit.left_degrees.begin());
    int amax = static_cast<int>(std::max_element(fit.right_degrees.begin(), fit.right_degrees.end()) -
                                fit.right_degrees.begin());
    double pmax = fit.link_probability(imax, amax);
    return pmax * pmax > 0.1 ? NullMode::exact_pb : NullMode::poisson;
}

FdrResult select_pairs(std::vector<PairStatistic>& stats, const ProjectionOptions& opt,
                       std::int64_t all_pairs) {
    std::vector<double> pvals;
    pvals.reserve(stats.size());
    for (const auto& s : stats) pvals.push_back(s.p_value);
    std::int64_t n_tests = opt.counting == FdrCounting::all_pairs
                               ? all_pairs
                               : static_cast<std::int64_t>(pvals.size());
    return opt.bonferroni ? bonferroni_select(pvals, opt.alpha, n_tests)
                          : fdr_select(pvals, opt.alpha, n_tests);
}

ValidatedProjection assemble(const StringIndex& left_ids, std::vector<PairStatistic> stats,
                             FdrResult fdr, bool directed, NullMode mode_used) {
    ValidatedProjection out;
    out.directed = directed;
    out.mode_used = mode_used;
    out.fdr = std::move(fdr);

    std::vector<char> used(static_cast<size_t>(left_ids.size()), 0);
    for (size_t idx : out.fdr.rejected) {
        used[static_cast<size_t>(stats[idx].a)] = 1;
        used[static_cast<size_t>(stats[idx].b)] = 1;
    }
    StringIndex nodes;
    std::vector<int> remap(static_cast<size_t>(left_ids.size()), -1);
    for (int i = 0; i < left_ids.size(); ++i) {
        if (used[static_cast<size_t>(i)]) {
            remap[static_cast<size_t>(i)] = nodes.add(left_ids.name(i));
        } else {
            out.isolated.push_back(left_ids.name(i));
        }
    }
    out.graph = DirectedGraph(std::move(nodes));
    for (size_t idx : out.fdr.rejected) {
        const PairStatistic& s = stats[idx];
        GraphEdge e;
        e.source = remap[static_cast<size_t>(s.a)];
        e.target = remap[static_cast<size_t>(s.b)];
        e.observed = s.observed;
        e.lambda = s.lambda;
        e.p_value = s.p_value;
        out.graph.add_edge(e);
    }
    out.self_loops = out.graph.self_loop_count();
    out.tested = std::move(stats);
    return out;
}

}  // namespace

ValidatedProjection validate_undirected(const BipartiteGraph& g, const BicmFit& fit,
                                        const ProjectionOptions& opt) {
    if (fit.n_left() != g.n_left() || fit.n_right() != g.n_right()) {
        throw std::invalid_argument("validate_undirected: fit does not match the graph");
    }
    std::vector<PairStatistic> stats = observed_vmotifs_undirected(g);
    NullMode mode = opt.null_mode == NullMode::auto_select ? pick_mode_undirected(g, fit)
                                                           : opt.null_mode;
    parallel_for(stats.size(), opt.threads, [&](size_t idx) {
        PairStatistic& s = stats[idx];
        if (mode == NullMode::exact_pb) {
            std::vector<double> probs = pair_probs_undirected(fit, s.a, s.b);
            s.lambda = std::accumulate(probs.begin(), probs.end(), 0.0);
            s.p_value = floor_positive(poisson_binomial_survival(s.observed, probs));
        } else {
            s.lambda = pair_lambda_undirected(fit, s.a, s.b);
            s.p_value = floor_positive(poisson_survival(s.observed, s.lambda));
        }
    });
    if (stats.empty()) {
        ValidatedProjection out;
        out.directed = false;
        out.mode_used = mode;
        for (const auto& name : g.left_ids().names()) out.isolated.push_back(name);
        return out;
    }
    std::int64_t nl = g.n_left();
    FdrResult fdr = select_pairs(stats, opt, nl * (nl - 1) / 2);
    return assemble(g.left_ids(), std::move(stats), std::move(fdr), false, mode);
}

ValidatedProjection validate_directed(const DirectedBipartiteGraph& g, const BidcmFit& fit,
                                      const ProjectionOptions& opt) {
    if (fit.n_users() != g.n_users() || fit.n_posts != g.n_posts()) {
        throw std::invalid_argument("validate_directed: fit does not match the graph");
    }
    std::unordered_map<std::int64_t, std::int64_t> counts;
    for (int p = 0; p < g.n_posts(); ++p) {
        int author = g.author_of(p);
        for (int v : g.retweeters_of(p)) {
            ++counts[pair_key(author, v)];
        }
    }
    std::vector<PairStatistic> stats;
    stats.reserve(counts.size());
    for (auto [key, c] : counts) {
        PairStatistic s;
        s.a = static_cast<int>(key >> 32);
        s.b = static_cast<int>(key & 0xffffffff);
        s.observed = c;
        stats.push_back(s);
    }
    std::sort(stats.begin(), stats.end(), [](const PairStatistic& x, const PairStatistic& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });

    NullMode mode = opt.null_mode;
    if (mode == NullMode::auto_select) {
        mode = (fit.mode == BidcmMode::exact && g.n_posts() <= 5000) ? NullMode::exact_pb
                                                                     : NullMode::poisson;
    }
    if (mode == NullMode::exact_pb && fit.mode != BidcmMode::exact) {
        throw std::invalid_argument("exact Poisson-binomial validation needs an exact-mode fit");
    }
    parallel_for(stats.size(), opt.threads, [&](size_t idx) {
        PairStatistic& s = stats[idx];
        s.lambda = directed_lambda(fit, s.a, s.b);
        if (mode == NullMode::exact_pb) {
            double q_author = fit.authorship_probability(s.a);
            std::vector<double> probs(static_cast<size_t>(fit.n_posts));
            for (int p = 0; p < fit.n_posts; ++p) {
                probs[static_cast<size_t>(p)] = q_author * fit.retweet_probability(s.b, p);
            }
            s.p_value = floor_positive(poisson_binomial_survival(s.observed, probs));
        } else {
            s.p_value = floor_positive(poisson_survival(s.observed, s.lambda));
        }
    });
    if (stats.empty()) {
        ValidatedProjection out;
        out.directed = true;
        out.mode_used = mode;
        for (const auto& name : g.user_ids().names()) out.isolated.push_back(name);
        return out;
    }
    std::int64_t nu = g.n_users();
    FdrResult fdr = select_pairs(stats, opt, nu * nu);
    return assemble(g.user_ids(), std::move(stats), std::move(fdr), true, mode);
}

void write_validated_csv(const std::string& path, const ValidatedProjection& proj) {
    CsvTable t;
    t.header = {"source", "target", "observed", "lambda", "p_value"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : proj.graph.edges()) {
        rows.push_back({proj.graph.node_ids().name(e.source), proj.graph.node_ids().name(e.target),
                        std::to_string(e.observed), format_double(e.lambda),
                        format_double(e.p_value)});
    }
    std::sort(rows.begin(), rows.end());
    t.rows = std::move(rows);
    write_csv(path, t);
}

void write_isolated_csv(const std::string& path, const ValidatedProjection& proj) {
    CsvTable t;
    t.header = {"node_id"};
    std::vector<std::string> ids = proj.isolated;
    std::sort(ids.begin(), ids.end());
    for (auto& id : ids) t.rows.push_back({std::move(id)});
    write_csv(path, t);
}

DirectedGraph read_validated_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    int cs = t.column("source"), ct = t.column("target");
    int co = t.column("observed"), cl = t.column("lambda"), cp = t.column("p_value");
    if (cs < 0 || ct < 0) throw std::runtime_error(path + ": expected source,target columns");
    StringIndex nodes;
    for (const auto& row : t.rows) {
        nodes.add(row.at(static_cast<size_t>(cs)));
        nodes.add(row.at(static_cast<size_t>(ct)));
    }
    DirectedGraph g(std::move(nodes));
    for (const auto& row : t.rows) {
        GraphEdge e;
        e.source = g.node_ids().find(row.at(static_cast<size_t>(cs)));
        e.target = g.node_ids().find(row.at(static_cast<size_t>(ct)));
        if (co >= 0) e.observed = std::stoll(row.at(static_cast<size_t>(co)));
        if (cl >= 0) e.lambda = std::stod(row.at(static_cast<size_t>(cl)));
        if (cp >= 0) e.p_value = std::stod(row.at(static_cast<size_t>(cp)));
        g.add_edge(e);
    }
    return g;
}

}  // namespace backbone
