// ncmart: run inequality suites, estimate constants, probe UMD and replay witnesses.
//
// Exit codes: 0 all asserted verdicts hold, 1 a violation (witness written), 2 usage error.

#include "ncmart/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ncm::ParseError("cannot write " + path.string());
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void print_summary(const ncm::Report& r) {
    std::printf("suite %s  trials %zu  wall %.2fs\n", r.config.suite.c_str(), r.trials.size(), r.wall_time_seconds);
    for (const auto& a : r.aggregates) {
        std::printf("  %-24s %s %zu/%zu  max %s  mean %s\n", a.name.c_str(), a.asserted ? "asserted" : "report  ",
                    a.passed, a.count, fmt(a.max_ratio).c_str(), fmt(a.mean_ratio).c_str());
    }
    for (const auto& [k, v] : r.values) std::printf("  %-24s %s\n", k.c_str(), fmt(v).c_str());
    for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
}

// Named constants accepted by `estimate`; anything else is taken as a verdict name.
std::pair<std::string, std::string> constant_target(const std::string& name, const std::string& suite) {
    if (name == "weak11") return {"weak11", "weak_type"};
    if (name == "stein_weak") return {"stein", "stein_weak"};
    if (name == "sub_super") return {"sub_super", "sub_super_transform"};
    if (name == "split_constant" || name == "umd") return {name, name};
    return {suite, name};
}

struct VerifyArgs {
    std::string suite;
    std::string config;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    std::string out = ".";
};

int run_verify(const VerifyArgs& a) {
    ncm::ExperimentConfig c = a.config.empty() ? ncm::ExperimentConfig{} : ncm::load_config(a.config);
    if (!a.suite.empty()) c.suite = a.suite;
    if (a.seed) c.master_seed = a.seed;
    const ncm::Report r = ncm::run_suite(c, a.jobs);

    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_file(dir / "report.json", ncm::report_to_json(r));
    write_file(dir / "trials.csv", ncm::report_to_csv(r));
    print_summary(r);
    if (!r.all_hold) {
        const fs::path w = dir / "witness.json";
        if (r.first_failure) ncm::save_witness(*r.first_failure, w.string());
        std::fprintf(stderr, "violation: %s (witness: %s)\n",
                     r.first_failure ? r.first_failure->verdict.c_str() : r.config.suite.c_str(), w.c_str());
        return kViolation;
    }
    return kPass;
}

int run_estimate(const std::string& name, const std::string& config_path, unsigned jobs, const std::string& out) {
    ncm::ExperimentConfig c = ncm::load_config(config_path);
    const auto [suite, verdict] = constant_target(name, c.suite);
    c.suite = suite;
    json j;
    if (suite == "split_constant" || suite == "umd") {
        const auto r = ncm::run_suite(c, jobs);
        print_summary(r);
        j = json::parse(ncm::report_to_json(r));
    } else {
        const auto e = ncm::estimate_constant(c, verdict, jobs);
        std::printf("%s: empirical lower bound %s over %zu evaluations", e.name.c_str(),
                    fmt(e.empirical_lower_bound).c_str(), e.trials);
        if (e.reference) std::printf("  (reference %s = %s)", e.reference_tag.c_str(), fmt(*e.reference).c_str());
        std::printf("\n");
        j["name"] = e.name;
        j["empirical_lower_bound"] = e.empirical_lower_bound;
        j["evaluations"] = e.trials;
        j["reference"] = e.reference ? json(*e.reference) : json(nullptr);
        j["reference_tag"] = e.reference_tag;
        if (e.best_witness) {
            const fs::path w = fs::path(out) / ("witness_" + e.name + ".json");
            fs::create_directories(out);
            ncm::save_witness(*e.best_witness, w.string());
            j["witness"] = w.string();
        }
    }
    fs::create_directories(out);
    write_file(fs::path(out) / "estimate.json", j.dump(2));
    return kPass;
}

int run_umd(int n, double p, int depth, int budget, std::uint64_t seed, double schatten, bool algebra_norm) {
    ncm::UmdOptions opt;
    opt.seed = seed;
    opt.schatten_q = schatten;
    opt.norm = algebra_norm ? ncm::UmdNorm::algebra_lp : ncm::UmdNorm::bochner;
    const auto e = ncm::umd_lower_bound(n, p, depth, budget, opt);
    json j{{"n", e.n},
           {"p", e.p},
           {"depth", e.depth},
           {"budget", e.budget},
           {"estimate", e.estimate},
           {"evaluations", e.evaluations},
           {"best_signs", e.best_signs}};
    std::cout << j.dump(2) << '\n';
    return kPass;
}

int run_replay(const std::string& path) {
    const ncm::Witness w = ncm::load_witness(path);
    const auto r = ncm::replay_witness(w);
    std::printf("%s/%s trial %zu: recorded %.17g recomputed %.17g %s, %s\n", w.suite.c_str(), w.verdict.c_str(),
                w.trial, r.recorded, r.recomputed, r.matches ? "match" : "MISMATCH",
                r.holds ? "holds" : "violated");
    if (!r.matches) return kUsage;
    return r.holds ? kPass : kViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for noncommutative martingale inequalities"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ncm::library_version());

    VerifyArgs va;
    std::uint64_t seed = 0;
    auto* verify = app.add_subcommand("verify", "run a property suite and write report.json / trials.csv");
    verify->add_option("--suite", va.suite, "suite name (overrides the config)");
    verify->add_option("--config", va.config, "config JSON")->check(CLI::ExistingFile);
    auto* seed_opt = verify->add_option("--seed", seed, "master seed (overrides the config)");
    verify->add_option("--jobs", va.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
    verify->add_option("--out", va.out, "output directory");

    std::string constant, est_config, est_out = ".";
    unsigned est_jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* estimate = app.add_subcommand("estimate", "search for large ratios of one inequality");
    estimate->add_option("--constant", constant, "weak11, stein_weak, sub_super, split_constant, umd or a verdict name")
        ->required();
    estimate->add_option("--config", est_config, "config JSON")->required()->check(CLI::ExistingFile);
    estimate->add_option("--jobs", est_jobs, "worker threads")->check(CLI::Range(1u, 1024u));
    estimate->add_option("--out", est_out, "output directory");

    int n = 1, depth = 3, budget = 5000;
    double p = 2.0, schatten = 1.0;
    std::uint64_t umd_seed = ncm::UmdOptions{}.seed;
    bool algebra_norm = false;
    auto* umd = app.add_subcommand("umd", "lower bound for the UMD constant of S^q_n by search");
    umd->add_option("--n", n, "matrix size")->required()->check(CLI::PositiveNumber);
    umd->add_option("--p", p, "exponent")->required()->check(CLI::Range(1.0, 1e6));
    umd->add_option("--depth", depth, "dyadic depth")->required()->check(CLI::Range(1, 12));
    umd->add_option("--budget", budget, "objective evaluations")->required()->check(CLI::NonNegativeNumber);
    umd->add_option("--seed", umd_seed, "search seed");
    umd->add_option("--schatten", schatten, "Schatten exponent of the block norm")->check(CLI::Range(1.0, 1e6));
    umd->add_flag("--algebra-norm", algebra_norm, "use the L^p norm of the whole algebra");

    std::string witness;
    auto* replay = app.add_subcommand("replay", "re-evaluate a serialized witness");
    replay->add_option("--witness", witness, "witness JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (*verify) {
            if (*seed_opt) va.seed = seed;
            return run_verify(va);
        }
        if (*estimate) return run_estimate(constant, est_config, est_jobs, est_out);
        if (*umd) return run_umd(n, p, depth, budget, umd_seed, schatten, algebra_norm);
        if (*replay) return run_replay(witness);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
