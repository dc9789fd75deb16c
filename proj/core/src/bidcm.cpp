#include "backbone/bidcm.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace backbone {

double BidcmFit::authorship_probability(int user) const {
    if (n_posts == 0) return 0.0;
    return static_cast<double>(user_out[static_cast<size_t>(user)]) / static_cast<double>(n_posts);
}

double BidcmFit::retweet_probability(int user, int post) const {
    if (mode != BidcmMode::exact) {
        throw std::logic_error("retweet_probability requires an exact-mode fit");
    }
    return retweet_system.probability(user, post);
}

BidcmFit fit_bidcm(const DirectedBipartiteGraph& g, BidcmMode mode, double tol, int max_iter) {
    BidcmFit fit;
    fit.mode = mode;
    DirectedDegrees d = g.degrees();
    fit.user_out = std::move(d.user_out);
    fit.user_in = std::move(d.user_in);
    fit.post_out = std::move(d.post_out);
    fit.n_posts = g.n_posts();
    if (mode == BidcmMode::exact) {
        fit.retweet_system = solve_degree_system(fit.user_in, fit.post_out, tol, max_iter);
        fit.residual = fit.retweet_system.residual;
        fit.iterations = fit.retweet_system.iterations;
    }
    return fit;
}

double directed_lambda(const BidcmFit& fit, int author, int retweeter) {
    if (fit.n_posts == 0) return 0.0;
    return static_cast<double>(fit.user_out[static_cast<size_t>(author)]) *
           static_cast<double>(fit.user_in[static_cast<size_t>(retweeter)]) /
           static_cast<double>(fit.n_posts);
}

void save_bidcm_json(const std::string& path, const BidcmFit& fit,
                     const DirectedBipartiteGraph& g) {
    nlohmann::ordered_json j;
    j["mode"] = fit.mode == BidcmMode::exact ? "exact" : "lambda";
    j["n_posts"] = fit.n_posts;
    j["residual"] = fit.residual;
    j["iterations"] = fit.iterations;
    j["user_ids"] = g.user_ids().names();
    j["post_ids"] = g.post_ids().names();
    j["user_out"] = fit.user_out;
    j["user_in"] = fit.user_in;
    j["post_out"] = fit.post_out;
    if (fit.mode == BidcmMode::exact) {
        auto encode = [](const std::vector<double>& fitness) {
            std::vector<double> out;
            out.reserve(fitness.size());
            for (double v : fitness) out.push_back(std::isinf(v) ? -1.0 : v);
            return out;
        };
        j["retweet_user_fitness"] = encode(fit.retweet_system.left_fitness);
        j["retweet_post_fitness"] = encode(fit.retweet_system.right_fitness);
        j["retweet_user_round"] = fit.retweet_system.left_round;
        j["retweet_post_round"] = fit.retweet_system.right_round;
        j["pinned"] = fit.retweet_system.pinned;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write fit file: " + path);
    out << j.dump(2) << '\n';
}

BidcmFit load_bidcm_json(const std::string& path, std::vector<std::string>* user_ids,
                         std::vector<std::string>* post_ids) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fit file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    BidcmFit fit;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "exact") fit.mode = BidcmMode::exact;
    else if (mode == "lambda") fit.mode = BidcmMode::lambda_only;
    else throw std::runtime_error(path + ": unknown fit mode '" + mode + "'");
    fit.n_posts = j.at("n_posts").get<int>();
    fit.residual = j.at("residual").get<double>();
    fit.iterations = j.at("iterations").get<int>();
    fit.user_out = j.at("user_out").get<std::vector<int>>();
    fit.user_in = j.at("user_in").get<std::vector<int>>();
    fit.post_out = j.at("post_out").get<std::vector<int>>();
    if (fit.mode == BidcmMode::exact) {
        auto decode = [](std::vector<double> v) {
            for (double& x : v) {
                if (x == -1.0) x = std::numeric_limits<double>::infinity();
            }
            return v;
        };
        fit.retweet_system.left_fitness = decode(j.at("retweet_user_fitness").get<std::vector<double>>());
        fit.retweet_system.right_fitness = decode(j.at("retweet_post_fitness").get<std::vector<double>>());
        fit.retweet_system.left_round = j.at("retweet_user_round").get<std::vector<int>>();
        fit.retweet_system.right_round = j.at("retweet_post_round").get<std::vector<int>>();
        fit.retweet_system.pinned = j.value("pinned", 0);
        fit.retweet_system.residual = fit.residual;
    }
    if (user_ids) *user_ids = j.at("user_ids").get<std::vector<std::string>>();
    if (post_ids) *post_ids = j.at("post_ids").get<std::vector<std::string>>();
    return fit;
}

}  // namespace backbone
