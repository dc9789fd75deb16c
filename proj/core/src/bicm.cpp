#include "backbone/bicm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace backbone {

double BicmFit::link_probability(int i, int a) const {
    if (mode == BicmMode::exact) {
        return system.probability(i, a);
    }
    double p = static_cast<double>(left_degrees[static_cast<size_t>(i)]) *
               static_cast<double>(right_degrees[static_cast<size_t>(a)]) / static_cast<double>(m);
    return std::min(1.0, p);
}

double BicmFit::sum_right_degree_sq() const {
    double s = 0;
    for (int d : right_degrees) s += static_cast<double>(d) * static_cast<double>(d);
    return s;
}

BicmFit fit_bicm(const BipartiteGraph& g, double tol, int max_iter) {
    if (g.edge_count() == 0) throw std::invalid_argument("fit_bicm: graph has no edges");
    BicmFit fit;
    fit.mode = BicmMode::exact;
    fit.left_degrees = g.left_degrees();
    fit.right_degrees = g.right_degrees();
    fit.m = g.edge_count();
    fit.system = solve_degree_system(fit.left_degrees, fit.right_degrees, tol, max_iter);
    fit.residual = fit.system.residual;
    fit.iterations = fit.system.iterations;
    return fit;
}

BicmFit fit_chung_lu(const BipartiteGraph& g) {
    if (g.edge_count() == 0) throw std::invalid_argument("fit_chung_lu: graph has no edges");
    BicmFit fit;
    fit.mode = BicmMode::chung_lu;
    fit.left_degrees = g.left_degrees();
    fit.right_degrees = g.right_degrees();
    fit.m = g.edge_count();
    // diagnostic count of pairs whose closed-form probability exceeds 1
    std::vector<int> rd = fit.right_degrees;
    std::sort(rd.begin(), rd.end());
    for (int d : fit.left_degrees) {
        if (d == 0) continue;
        // right degrees e with d*e > m
        double cutoff = static_cast<double>(fit.m) / static_cast<double>(d);
        auto it = std::upper_bound(rd.begin(), rd.end(), static_cast<int>(cutoff));
        fit.clamped_pairs += rd.end() - it;
    }
    return fit;
}

BicmFit fit_bicm_mode(const BipartiteGraph& g, BicmMode mode, double tol, int max_iter) {
    return mode == BicmMode::exact ? fit_bicm(g, tol, max_iter) : fit_chung_lu(g);
}

void save_bicm_json(const std::string& path, const BicmFit& fit, const BipartiteGraph& g) {
    nlohmann::ordered_json j;
    j["mode"] = fit.mode == BicmMode::exact ? "exact" : "chung_lu";
    j["m"] = fit.m;
    j["residual"] = fit.residual;
    j["iterations"] = fit.iterations;
    j["pinned"] = fit.system.pinned;
    j["clamped_pairs"] = fit.clamped_pairs;
    j["left_ids"] = g.left_ids().names();
    j["right_ids"] = g.right_ids().names();
    j["left_degrees"] = fit.left_degrees;
    j["right_degrees"] = fit.right_degrees;
    if (fit.mode == BicmMode::exact) {
        auto encode = [](const std::vector<double>& fitness) {
            std::vector<double> out;
            out.reserve(fitness.size());
            for (double v : fitness) out.push_back(std::isinf(v) ? -1.0 : v);
            return out;
        };
        j["left_fitness"] = encode(fit.system.left_fitness);
        j["right_fitness"] = encode(fit.system.right_fitness);
        j["left_round"] = fit.system.left_round;
        j["right_round"] = fit.system.right_round;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write fit file: " + path);
    out << j.dump(2) << '\n';
}

BicmFit load_bicm_json(const std::string& path, std::vector<std::string>* left_ids,
                       std::vector<std::string>* right_ids) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fit file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    BicmFit fit;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "exact") fit.mode = BicmMode::exact;
    else if (mode == "chung_lu") fit.mode = BicmMode::chung_lu;
    else throw std::runtime_error(path + ": unknown fit mode '" + mode + "'");
    fit.m = j.at("m").get<std::int64_t>();
    fit.residual = j.at("residual").get<double>();
    fit.iterations = j.at("iterations").get<int>();
    fit.clamped_pairs = j.value("clamped_pairs", std::int64_t{0});
    fit.left_degrees = j.at("left_degrees").get<std::vector<int>>();
    fit.right_degrees = j.at("right_degrees").get<std::vector<int>>();
    if (fit.mode == BicmMode::exact) {
        auto decode = [](std::vector<double> v) {
            for (double& x : v) {
                if (x == -1.0) x = std::numeric_limits<double>::infinity();
            }
            return v;
        };
        fit.system.left_fitness = decode(j.at("left_fitness").get<std::vector<double>>());
        fit.system.right_fitness = decode(j.at("right_fitness").get<std::vector<double>>());
        fit.system.left_round = j.at("left_round").get<std::vector<int>>();
        fit.system.right_round = j.at("right_round").get<std::vector<int>>();
        fit.system.pinned = j.value("pinned", 0);
        fit.system.residual = fit.residual;
    }
    if (left_ids) *left_ids = j.at("left_ids").get<std::vector<std::string>>();
    if (right_ids) *right_ids = j.at("right_ids").get<std::vector<std::string>>();
    return fit;
}

}  // namespace backbone
