#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ncm {

namespace detail {

json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

double number_from(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

namespace {

const char* kind_name(FiltrationKind k) {
    switch (k) {
    case FiltrationKind::tensor: return "tensor";
    case FiltrationKind::dyadic: return "dyadic";
    case FiltrationKind::paley_walsh: return "paley_walsh";
    case FiltrationKind::chain: return "chain";
    case FiltrationKind::constant: return "constant";
    }
    return "tensor";
}

} // namespace

json descriptor_json(const FiltrationDescriptor& d) {
    json j;
    j["kind"] = kind_name(d.kind);
    if (d.kind == FiltrationKind::tensor) j["dims"] = d.dims;
    else j["depth"] = d.depth;
    if (d.kind == FiltrationKind::paley_walsh) j["matrix_dim"] = d.matrix_dim;
    j["normalize"] = d.normalize;
    return j;
}

FiltrationDescriptor descriptor_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const bool normalize = j.value("normalize", false);
    if (kind == "tensor") return FiltrationDescriptor::tensor(j.at("dims").get<std::vector<int>>(), normalize);
    if (kind == "dyadic") return FiltrationDescriptor::dyadic(j.at("depth").get<int>(), normalize);
    if (kind == "paley_walsh")
        return FiltrationDescriptor::paley_walsh(j.at("depth").get<int>(), j.at("matrix_dim").get<int>(), normalize);
    throw ParseError("unknown filtration kind '" + kind + "'");
}

json config_json(const ExperimentConfig& c) {
    json j;
    j["suite"] = c.suite;
    if (c.master_seed) j["seed"] = *c.master_seed;
    j["trials"] = c.trial_count;
    json fs = json::array();
    for (const auto& f : c.filtrations) {
        if (f.random_tensor) {
            fs.push_back({{"kind", "random_tensor"}, {"max_total_dim", f.max_total_dim}, {"max_depth", f.max_depth}});
        } else {
            fs.push_back(descriptor_json(f.descriptor));
        }
    }
    j["filtrations"] = fs;
    json modes = json::array();
    for (auto m : c.multiplier_modes) modes.push_back(to_string(m));
    j["multipliers"] = modes;
    j["p_values"] = c.p_values;
    j["lambda_factors"] = c.lambda_factors;
    j["alpha_grid"] = c.alpha_grid;
    j["beta_grid"] = c.beta_grid;
    j["scales"] = c.scales;
    j["lemma1_trials"] = c.lemma1_trials;
    j["max_terms"] = c.max_terms;
    j["search_budget"] = c.search_budget;
    j["restarts"] = c.restarts;
    j["descent_iterations"] = c.descent.iterations;
    j["descent_random_moves"] = c.descent.random_moves;
    j["dimension_cap"] = c.dimension_cap;
    j["tolerances"] = c.tolerances;
    j["umd"] = {{"dims", c.umd.dims},       {"p", c.umd.p},
                {"depth", c.umd.depth},     {"budget", c.umd.budget},
                {"schatten_q", c.umd.schatten_q}, {"algebra_norm", c.umd.algebra_norm}};
    return j;
}

} // namespace detail

using detail::json;

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> names{"weak11",     "transform_p", "subquasi",  "sub_super",
                                                "stein",      "khintchine",  "bg",        "llogl",
                                                "cuculescu",  "lemma",       "krickeberg", "l2",
                                                "split_constant", "umd"};
    return names;
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config: top level must be an object");

    ExperimentConfig c;
    try {
        c.suite = j.value("suite", std::string{});
        if (j.contains("seed")) c.master_seed = j.at("seed").get<std::uint64_t>();
        const auto trials = j.value("trials", 0LL);
        if (trials < 0) throw DomainError("config: trials must be >= 0");
        c.trial_count = static_cast<std::size_t>(trials);
        if (j.contains("filtrations")) {
            for (const auto& f : j.at("filtrations")) {
                FiltrationSource src;
                if (f.at("kind").get<std::string>() == "random_tensor") {
                    src.random_tensor = true;
                    src.max_total_dim = f.value("max_total_dim", 16);
                    src.max_depth = f.value("max_depth", 4);
                } else {
                    src.descriptor = detail::descriptor_from_json(f);
                }
                c.filtrations.push_back(src);
            }
        }
        if (j.contains("multipliers")) {
            c.multiplier_modes.clear();
            for (const auto& m : j.at("multipliers")) {
                const auto s = m.get<std::string>();
                if (s == "signs") c.multiplier_modes.push_back(MultiplierMode::signs);
                else if (s == "operators") c.multiplier_modes.push_back(MultiplierMode::operators);
                else throw ParseError("config: unknown multiplier mode '" + s + "'");
            }
        }
        auto vec = [&](const char* key, std::vector<double>& out) {
            if (j.contains(key)) out = j.at(key).get<std::vector<double>>();
        };
        vec("p_values", c.p_values);
        vec("lambda_factors", c.lambda_factors);
        vec("alpha_grid", c.alpha_grid);
        vec("beta_grid", c.beta_grid);
        vec("scales", c.scales);
        c.lemma1_trials = j.value("lemma1_trials", c.lemma1_trials);
        c.max_terms = j.value("max_terms", c.max_terms);
        c.search_budget = j.value("search_budget", c.search_budget);
        c.restarts = j.value("restarts", c.restarts);
        c.descent.iterations = j.value("descent_iterations", c.descent.iterations);
        c.descent.random_moves = j.value("descent_random_moves", c.descent.random_moves);
        c.dimension_cap = j.value("dimension_cap", c.dimension_cap);
        if (j.contains("tolerances")) c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
        if (j.contains("umd")) {
            const auto& u = j.at("umd");
            if (u.contains("dims")) c.umd.dims = u.at("dims").get<std::vector<int>>();
            c.umd.p = u.value("p", c.umd.p);
            c.umd.depth = u.value("depth", c.umd.depth);
            c.umd.budget = u.value("budget", c.umd.budget);
            c.umd.schatten_q = u.value("schatten_q", c.umd.schatten_q);
            c.umd.algebra_norm = u.value("algebra_norm", c.umd.algebra_norm);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) { return detail::config_json(c).dump(2); }

namespace {

long total_dimension(const FiltrationDescriptor& d) {
    switch (d.kind) {
    case FiltrationKind::tensor: {
        long t = 1;
        for (int k : d.dims) {
            if (k < 1) throw DomainError("config: tensor dims must be >= 1");
            t *= k;
            if (t > (1L << 30)) break;
        }
        return t;
    }
    case FiltrationKind::dyadic:
    case FiltrationKind::paley_walsh:
        if (d.depth < 1 || d.depth > 20) throw DomainError("config: depth must lie in [1, 20]");
        if (d.matrix_dim < 1) throw DomainError("config: matrix_dim must be >= 1");
        return (1L << d.depth) * (d.kind == FiltrationKind::dyadic ? 1 : d.matrix_dim);
    default: throw DomainError("config: unsupported filtration kind");
    }
}

void require_all(const std::vector<double>& v, bool (*ok)(double), const char* what) {
    for (double x : v)
        if (!ok(x)) throw DomainError(std::string("config: invalid value in ") + what);
}

} // namespace

void validate_config(const ExperimentConfig& c) {
    const auto& names = known_suites();
    if (std::find(names.begin(), names.end(), c.suite) == names.end())
        throw DomainError("config: unknown suite '" + c.suite + "'");
    if (!c.master_seed) throw DomainError("config: a seed is required");
    if (c.dimension_cap < 1) throw DomainError("config: dimension_cap must be >= 1");
    for (const auto& f : c.filtrations) {
        if (f.random_tensor) {
            if (f.max_total_dim < 1 || f.max_depth < 1 || f.max_total_dim > c.dimension_cap)
                throw DomainError("config: bad random_tensor limits");
        } else if (total_dimension(f.descriptor) > c.dimension_cap) {
            throw DomainError("config: filtration " + f.descriptor.label() + " exceeds the dimension cap");
        }
    }
    if (c.multiplier_modes.empty()) throw DomainError("config: at least one multiplier mode is required");
    require_all(c.lambda_factors, [](double x) { return x > 0.0 && std::isfinite(x); }, "lambda_factors");
    require_all(c.scales, [](double x) { return x > 0.0 && std::isfinite(x); }, "scales");
    require_all(c.alpha_grid, [](double x) { return x > 0.0 && x < 1.0; }, "alpha_grid");
    require_all(c.beta_grid, [](double x) { return x > 0.0 && x < 1.0; }, "beta_grid");
    if (c.suite == "transform_p" || c.suite == "bg")
        require_all(c.p_values, [](double x) { return x > 1.0 && std::isfinite(x); }, "p_values");
    if (c.suite == "subquasi") require_all(c.p_values, [](double x) { return x > 0.0 && x < 1.0; }, "p_values");
    if (c.suite == "khintchine" || c.suite == "stein")
        require_all(c.p_values, [](double x) { return x >= 1.0 && std::isfinite(x); }, "p_values");
    if (c.max_terms < 1 || c.max_terms > 14) throw DomainError("config: max_terms must lie in [1, 14]");
    if (c.search_budget < 0 || c.restarts < 1) throw DomainError("config: search budget/restarts invalid");
    if (c.descent.iterations < 0 || c.descent.random_moves < 0) throw DomainError("config: descent budget invalid");
    for (const auto& [name, tol] : c.tolerances)
        if (!(tol >= 0.0)) throw DomainError("config: tolerance for " + name + " must be >= 0");
    if (c.suite == "umd") {
        if (c.umd.dims.empty() || c.umd.depth < 1 || c.umd.budget < 0 || !(c.umd.p >= 1.0) || !(c.umd.schatten_q >= 1.0))
            throw DomainError("config: invalid umd settings");
        for (int n : c.umd.dims)
            if (n < 1 || (1L << std::min(c.umd.depth, 20)) * n > c.dimension_cap)
                throw DomainError("config: umd dimension exceeds the cap");
    }
}

} // namespace ncm
