// suites.cpp: instance generation, evaluation, parallel execution and replay

#include "ncmart/suites.hpp"

#include "ncmart/generators.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace ncm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
    return v.empty() ? fallback : v;
}

std::vector<double> p_values_for(const ExperimentConfig& c) {
    if (!c.p_values.empty()) return c.p_values;
    if (c.suite == "transform_p" || c.suite == "bg") return {1.5, 3.0, 4.0};
    if (c.suite == "subquasi") return {0.5};
    if (c.suite == "khintchine") return {1.0, 2.0, 4.0};
    if (c.suite == "stein") return {2.0, 4.0};
    return {};
}

bool uses_positive_terminal(const std::string& suite) {
    return suite == "weak11" || suite == "cuculescu" || suite == "lemma" || suite == "sub_super";
}

bool uses_terminal(const std::string& suite) {
    return uses_positive_terminal(suite) || suite == "transform_p" || suite == "subquasi" || suite == "bg" ||
           suite == "llogl" || suite == "l2" || suite == "krickeberg" || suite == "umd";
}

// Tolerance overrides from the config take precedence over the defaults of each check.
void finalize(InequalityVerdict& v, const ExperimentConfig& c) {
    const auto it = c.tolerances.find(v.name);
    if (it == c.tolerances.end()) return;
    v = make_verdict(v.name, v.lhs, v.rhs, v.ratio, v.asserted, it->second);
}

InequalityVerdict defect(std::string name, double value, double tol) {
    return make_verdict(std::move(name), value, 0.0, value, true, tol);
}

MultiplierSequence multipliers_of(const Instance& in, const FiltrationPtr& filt) {
    if (in.mode == MultiplierMode::signs) {
        if (in.signs.empty()) return MultiplierSequence::signs(filt, std::vector<int>(filt->depth(), 1));
        return MultiplierSequence::signs(filt, in.signs);
    }
    return MultiplierSequence::operators(filt, in.multipliers);
}

UmdOptions umd_options(const ExperimentConfig& c) {
    UmdOptions o;
    o.norm = c.umd.algebra_norm ? UmdNorm::algebra_lp : UmdNorm::bochner;
    o.schatten_q = c.umd.schatten_q;
    o.seed = stream_key(c.master_seed.value_or(0), 0xffffffffULL);
    return o;
}

FiltrationDescriptor pick_filtration(const ExperimentConfig& c, std::size_t trial, CounterRng& rng) {
    if (c.filtrations.empty()) return random_tensor_descriptor(rng, 16, 4);
    const auto& src = c.filtrations[trial % c.filtrations.size()];
    if (src.random_tensor) return random_tensor_descriptor(rng, src.max_total_dim, src.max_depth);
    return src.descriptor;
}

std::vector<Element> random_tuple(const AlgebraSpec& spec, std::size_t n, CounterRng& rng) {
    std::vector<Element> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        // log-normal magnitudes make the tuples less isotropic than plain Gaussians
        const double s = std::exp(0.75 * rng.normal());
        out.push_back(s * random_gaussian_element(spec, rng));
    }
    return out;
}

} // namespace

FiltrationPtr cached_filtration(const FiltrationDescriptor& d, int dimension_cap) {
    static std::mutex mu;
    static std::map<std::string, FiltrationPtr> cache;
    const std::string key = d.label() + "#" + std::to_string(dimension_cap);
    {
        std::lock_guard<std::mutex> lock(mu);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    FiltrationPtr f = Filtration::build(d, dimension_cap);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, std::move(f)).first->second;
}

Instance generate_instance(const ExperimentConfig& c, std::size_t trial) {
    CounterRng rng(c.master_seed.value_or(0), trial);
    Instance in;
    in.filtration = pick_filtration(c, trial, rng);
    const FiltrationPtr filt = cached_filtration(in.filtration, c.dimension_cap);
    const AlgebraSpec& spec = filt->spec();
    const std::string& suite = c.suite;
    in.p_values = p_values_for(c);

    std::optional<Martingale> x;
    if (suite == "krickeberg") {
        in.self_adjoint = rng.sign() > 0;
        x = random_martingale(filt, rng, in.self_adjoint);
    } else if (uses_positive_terminal(suite)) {
        x = random_positive_martingale(filt, rng);
    } else if (uses_terminal(suite)) {
        x = random_martingale(filt, rng, false);
    }
    if (x) in.terminal = x->terminal();

    const bool operator_suite = suite == "weak11" || suite == "lemma" || suite == "cuculescu";
    in.mode = operator_suite ? c.multiplier_modes[rng.below(c.multiplier_modes.size())] : MultiplierMode::signs;
    const auto xi = random_multiplier(filt, rng, in.mode);
    if (in.mode == MultiplierMode::signs) in.signs = xi.sign_values();
    else in.multipliers = xi.entries();

    if (suite == "cuculescu" || suite == "lemma" || suite == "sub_super") {
        const double top = operator_norm(x->terminal());
        for (double f : c.lambda_factors) in.lambdas.push_back(f * top);
    }
    if (suite == "lemma" && trial < c.lemma1_trials) {
        in.alphas = or_default(c.alpha_grid, {0.1, 0.3, 0.5, 0.7, 0.9});
        in.betas = or_default(c.beta_grid, {0.1, 0.3, 0.5, 0.7, 0.9});
    }
    if (suite == "llogl") in.scales = or_default(c.scales, {0.25, 1.0, 4.0});

    if (suite == "sub_super") {
        // even trials: the Cuculescu-truncated supermartingale; odd trials: squares of a
        // self-adjoint martingale, a submartingale by the Kadison–Schwarz inequality.
        std::vector<Element> s;
        if (trial % 2 == 0) {
            const double lambda = in.lambdas[rng.below(in.lambdas.size())];
            const auto cuc = cuculescu(*x, lambda);
            for (std::size_t k = 0; k < x->length(); ++k) {
                const Element& q = cuc.projections[k];
                s.push_back((q * x->level(k) * q).real_part());
            }
        } else {
            const auto y = random_martingale(filt, rng, true);
            for (const auto& level : y.levels()) s.push_back((level * level).real_part());
        }
        // exact in exact arithmetic; the projection only removes rounding residue
        for (std::size_t k = 0; k < s.size(); ++k) s[k] = filt->expectation(k, s[k]);
        in.sequence = std::move(s);
        in.terminal.reset();
        in.lambdas.clear();
    } else if (suite == "stein" || suite == "l2") {
        in.sequence = random_tuple(spec, filt->depth(), rng);
    } else if (suite == "khintchine") {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.below(c.max_terms));
        in.sequence = random_tuple(spec, n, rng);
    }
    return in;
}

std::vector<InequalityVerdict> evaluate_instance(const std::string& suite, const Instance& in,
                                                 const ExperimentConfig& c) {
    const FiltrationPtr filt = cached_filtration(in.filtration, c.dimension_cap);
    std::optional<Martingale> x;
    if (in.terminal) x = Martingale::from_terminal(filt, *in.terminal);
    auto need_x = [&]() -> const Martingale& {
        if (!x) throw DomainError("evaluate_instance: suite '" + suite + "' needs a terminal value");
        return *x;
    };
    std::vector<InequalityVerdict> out;

    if (suite == "weak11") {
        out.push_back(check_weak_type(need_x(), multipliers_of(in, filt)));
    } else if (suite == "transform_p") {
        const auto xi = multipliers_of(in, filt);
        for (double p : in.p_values) out.push_back(check_transform_p(need_x(), xi, p));
    } else if (suite == "subquasi") {
        const auto xi = multipliers_of(in, filt);
        for (double p : in.p_values) out.push_back(check_subquasi_p(need_x(), xi, p));
    } else if (suite == "llogl") {
        const auto xi = multipliers_of(in, filt);
        for (double t : in.scales) {
            const auto xt = Martingale::from_terminal(filt, t * need_x().terminal());
            const auto r = check_llogl(xt, xi, c.descent);
            auto v1 = make_verdict("llogl_r1", r.transform_l1, kInf, r.r1, false);
            auto v2 = make_verdict("llogl_r2", r.hardy1_upper, kInf, r.r2, false);
            v1.tags["scale"] = v2.tags["scale"] = t;
            out.push_back(v1);
            out.push_back(v2);
        }
    } else if (suite == "bg") {
        for (double p : in.p_values) {
            const auto r = check_bg(need_x(), p, c.descent);
            auto a = make_verdict("bg_alpha", r.hardy.value, kInf, r.alpha_ratio, false);
            auto b = make_verdict("bg_beta", r.norm_p, kInf, r.beta_ratio, false);
            a.tags["p"] = b.tags["p"] = p;
            a.tags["hardy_upper_bound"] = b.tags["hardy_upper_bound"] = r.hardy.upper_bound ? 1.0 : 0.0;
            out.push_back(a);
            out.push_back(b);
        }
    } else if (suite == "cuculescu") {
        for (double lambda : in.lambdas) {
            const auto r = cuculescu(need_x(), lambda);
            const auto& cert = r.certificate;
            std::vector<InequalityVerdict> vs{
                defect("cuculescu_membership", cert.membership, 1e-8),
                defect("cuculescu_commutation", cert.commutation, 1e-8 * cert.scale),
                defect("cuculescu_lambda_bound", cert.lambda_excess, 1e-8 * cert.scale),
                defect("cuculescu_monotone", cert.monotonicity, 1e-8),
                defect("cuculescu_projection", cert.projection, 1e-9),
                make_verdict("cuculescu_trace", r.tau_one_minus_q, r.trace_bound,
                             r.trace_bound > 0 ? r.tau_one_minus_q / r.trace_bound : 0.0, true)};
            for (auto& v : vs) {
                v.tags["lambda"] = lambda;
                out.push_back(v);
            }
        }
    } else if (suite == "lemma") {
        const auto xi = multipliers_of(in, filt);
        for (double lambda : in.lambdas) {
            const auto ch = truncated_chain(need_x(), xi, lambda);
            const double scale = ch.cuculescu.certificate.scale;
            const bool super = ch.doob.sense == SequenceClass::supermartingale || ch.doob.sense == SequenceClass::martingale;
            std::vector<InequalityVerdict> vs{
                defect("doob_supermartingale", super ? 0.0 : 1.0, 0.0),
                defect("doob_martingale", ch.doob.martingale_defect, 1e-8 * scale),
                defect("doob_recombination", ch.doob.recombination, 1e-8 * scale),
                defect("doob_predictable", ch.doob.predictability, 1e-8 * scale),
                defect("doob_monotone", ch.doob.monotonicity, 1e-8 * scale),
                make_verdict("energy", ch.energy, ch.energy_bound,
                             ch.energy_bound > 0 ? ch.energy / ch.energy_bound : 0.0, true),
                make_verdict("y_dominates_z", ch.z_norm, ch.y_norm, ch.y_norm > 0 ? ch.z_norm / ch.y_norm : 0.0, true),
                make_verdict("removal", ch.removal, ch.removal_bound,
                             ch.removal_bound > 0 ? ch.removal / ch.removal_bound : 0.0, true)};
            for (double a : in.alphas) {
                for (double b : in.betas) {
                    const auto l = lemma1_bound(need_x(), xi, ch.cuculescu, a, b);
                    auto v = make_verdict("lemma1", l.lhs, l.rhs, l.rhs > 0 ? l.lhs / l.rhs : 0.0, true);
                    v.tags["alpha"] = a;
                    v.tags["beta"] = b;
                    vs.push_back(v);
                }
            }
            for (auto& v : vs) {
                v.tags["lambda"] = lambda;
                out.push_back(v);
            }
        }
    } else if (suite == "krickeberg") {
        const auto& m = need_x();
        const auto k = krickeberg_decompose(m);
        double recomb = 0.0;
        double negativity = 0.0;
        double scale = 1.0;
        for (std::size_t n = 0; n < m.length(); ++n) {
            recomb = std::max(recomb, hs_norm(k.recombine(n) - m.level(n)));
            scale = std::max(scale, operator_norm(m.level(n)));
            for (const auto* part : {&k.positive_real, &k.negative_real, &k.positive_imag, &k.negative_imag})
                negativity = std::max(negativity, -hermitian_eig(part->level(n)).min_eigenvalue());
        }
        out.push_back(defect("krickeberg_recombination", recomb, 1e-9 * std::max(1.0, hs_norm(m.terminal()))));
        out.push_back(defect("krickeberg_positive", std::max(negativity, 0.0), 1e-9 * scale));
        if (in.self_adjoint) {
            double sup_l1 = 0.0;
            for (const auto& level : m.levels()) sup_l1 = std::max(sup_l1, lp_norm(level, 1.0));
            const double parts = (trace(k.positive_real.level(0)) + trace(k.negative_real.level(0))).real();
            out.push_back(defect("krickeberg_l1", std::abs(sup_l1 - parts), 1e-9));
        }
    } else if (suite == "l2") {
        const auto& m = need_x();
        const auto xi = multipliers_of(in, filt);
        const double x2 = lp_norm(m.terminal(), 2.0);
        out.push_back(defect("l2_isometry", std::abs(lp_norm(transform(m, xi), 2.0) - x2), 1e-9));
        out.push_back(defect("hardy_l2", std::abs(hardy_norm(m, 2.0).value - x2), 1e-9));
        out.push_back(defect("square_function_l2", std::abs(lp_norm(square_functions(m, m.length()).column, 2.0) - x2), 1e-9));
        out.push_back(check_stein(in.sequence, *filt, SteinMode::lp, 2.0));
    } else if (suite == "sub_super") {
        const AdaptedSequence s(filt, in.sequence);
        const auto r = check_sub_super_transform(s, multipliers_of(in, filt));
        out.push_back(r.transform);
        out.push_back(r.predictable_bound);
        out.push_back(r.sandwich);
    } else if (suite == "stein") {
        out.push_back(check_stein(in.sequence, *filt, SteinMode::weak));
        for (double p : in.p_values) out.push_back(check_stein(in.sequence, *filt, SteinMode::lp, p));
    } else if (suite == "khintchine") {
        for (double p : in.p_values) {
            const auto r = khintchine_average(in.sequence, p, c.descent);
            out.push_back(r.verdict);
            if (p == 2.0) {
                auto v = defect("khintchine_l2", std::abs(r.average * r.average - r.square_sum),
                                1e-9 * std::max(1.0, r.square_sum));
                v.tags["p"] = p;
                out.push_back(v);
            }
        }
    } else if (suite == "umd") {
        for (double p : in.p_values) {
            const double r = umd_ratio(need_x(), p, umd_options(c));
            auto v = make_verdict("umd_ratio", r, kInf, r, false);
            v.tags["p"] = p;
            out.push_back(v);
        }
    } else {
        throw DomainError("evaluate_instance: unknown suite '" + suite + "'");
    }
    for (auto& v : out) finalize(v, c);
    return out;
}

namespace {

struct TrialSlot {
    Instance instance;
    TrialRecord record;
};

std::optional<double> reference_for(const std::string& verdict) {
    if (verdict == "weak_type") return reference_split_constant();
    if (verdict == "stein_weak") return stein_weak_reference(reference_split_constant());
    if (verdict == "sub_super_transform") return sub_super_reference(reference_split_constant());
    return std::nullopt;
}

std::string reference_tag_for(const std::string& verdict) {
    if (verdict == "weak_type") return "C_ref = 26 + 8*sqrt(3)";
    if (verdict == "stein_weak") return "2 + 2*C_ref";
    if (verdict == "sub_super_transform") return "6*C_ref + 4 (derived)";
    return "";
}

Witness make_witness(const ExperimentConfig& c, const TrialSlot& slot, std::size_t index) {
    Witness w;
    w.suite = c.suite;
    w.trial = slot.record.trial;
    w.seed = slot.record.seed;
    w.verdict_index = index;
    const auto& v = slot.record.verdicts[index];
    w.verdict = v.name;
    w.ratio = v.ratio;
    w.lhs = v.lhs;
    w.rhs = v.rhs;
    w.instance = slot.instance;
    w.config = c;
    return w;
}

void run_special(const ExperimentConfig& c, Report& r) {
    if (c.suite == "split_constant") {
        const auto s = optimize_split_constant();
        r.values["alpha"] = s.alpha;
        r.values["beta"] = s.beta;
        r.values["value"] = s.value;
        r.values["grid_alpha"] = s.grid_alpha;
        r.values["grid_beta"] = s.grid_beta;
        r.values["grid_value"] = s.grid_value;
        r.values["reference_value"] = reference_split_constant();
        r.values["published_closed_form"] = published_split_constant();
        r.values["discrepancy"] = reference_split_constant() - published_split_constant();
        r.notes.push_back("The infimum of 24/(a*b^2) + 2/(1-a) over (0,1)^2 is (sqrt(24)+sqrt(2))^2 = 26 + 8*sqrt(3), "
                          "approached as b -> 1. The closed form 14*sqrt(3)/3 + 28 printed in the literature for the "
                          "same expression evaluates lower and is not attained; weak-type checks use 26 + 8*sqrt(3).");
        auto v = make_verdict("split_constant", std::abs(s.value - reference_split_constant()), 0.0, s.value, true, 1e-3);
        r.all_hold = v.holds;
        ConstantEstimate e;
        e.name = "split_constant";
        e.empirical_lower_bound = s.value;
        e.reference = reference_split_constant();
        e.reference_tag = "(sqrt(24)+sqrt(2))^2";
        r.estimates.push_back(e);
        return;
    }
    // umd
    const UmdOptions opt = umd_options(c);
    double k_fit = 0.0;
    for (int n : c.umd.dims) {
        const auto est = umd_lower_bound(n, c.umd.p, c.umd.depth, c.umd.budget, opt, c.dimension_cap);
        const std::string key = "umd_n" + std::to_string(n);
        r.values[key] = est.estimate;
        k_fit = std::max(k_fit, est.estimate / std::log(n + 1.0));
        ConstantEstimate e;
        e.name = "umd(" + std::to_string(n) + "," + std::to_string(c.umd.p) + ")";
        e.empirical_lower_bound = est.estimate;
        e.trials = static_cast<std::size_t>(est.evaluations);
        Witness w;
        w.suite = "umd";
        w.verdict = "umd_ratio";
        w.ratio = est.estimate;
        w.lhs = est.estimate;
        w.rhs = kInf;
        w.instance.filtration = est.filtration;
        w.instance.terminal = est.best_terminal;
        w.instance.signs = est.best_signs;
        w.instance.p_values = {c.umd.p};
        w.config = c;
        e.best_witness = w;
        r.estimates.push_back(e);
    }
    r.values["umd_logfit_K"] = k_fit;
    r.notes.push_back("umd_logfit_K = max_n est(n)/log(n+1): the smallest K with est(n) <= K log(n+1) on the probed n.");
}

} // namespace

Report run_suite(const ExperimentConfig& c, unsigned jobs) {
    validate_config(c);
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.config = c;
    r.version = library_version();

    if (c.suite == "split_constant" || c.suite == "umd") {
        run_special(c, r);
        r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    }

    const std::size_t n = c.trial_count;
    std::vector<TrialSlot> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                TrialSlot& s = slots[i];
                s.instance = generate_instance(c, i);
                s.record.trial = i;
                s.record.seed = stream_key(*c.master_seed, i);
                s.record.filtration = s.instance.filtration.label();
                s.record.verdicts = evaluate_instance(c.suite, s.instance, c);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    // reduction in trial order
    std::map<std::string, std::size_t> agg_index;
    std::vector<std::pair<std::size_t, std::size_t>> argmax;  // (trial, verdict index) per aggregate
    std::vector<double> sums;
    for (const auto& s : slots) {
        r.trials.push_back(s.record);
        for (std::size_t vi = 0; vi < s.record.verdicts.size(); ++vi) {
            const auto& v = s.record.verdicts[vi];
            auto [it, inserted] = agg_index.emplace(v.name, r.aggregates.size());
            if (inserted) {
                Aggregate a;
                a.name = v.name;
                a.max_ratio = -kInf;
                r.aggregates.push_back(a);
                argmax.emplace_back(s.record.trial, vi);
                sums.push_back(0.0);
            }
            Aggregate& a = r.aggregates[it->second];
            ++a.count;
            a.asserted = a.asserted || v.asserted;
            if (v.holds) ++a.passed;
            sums[it->second] += v.ratio;
            if (v.ratio > a.max_ratio) {
                a.max_ratio = v.ratio;
                argmax[it->second] = {s.record.trial, vi};
            }
            if (v.asserted && !v.holds) {
                r.all_hold = false;
                if (!r.first_failure) r.first_failure = make_witness(c, s, vi);
            }
        }
    }
    for (std::size_t i = 0; i < r.aggregates.size(); ++i) {
        auto& a = r.aggregates[i];
        a.mean_ratio = a.count ? sums[i] / static_cast<double>(a.count) : 0.0;
        ConstantEstimate e;
        e.name = a.name;
        e.empirical_lower_bound = a.max_ratio;
        e.trials = a.count;
        e.best_witness = make_witness(c, slots[argmax[i].first], argmax[i].second);
        e.reference = reference_for(a.name);
        e.reference_tag = reference_tag_for(a.name);
        r.estimates.push_back(e);
    }
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

ConstantEstimate estimate_constant(const ExperimentConfig& c, const std::string& verdict_name, unsigned jobs) {
    if (!uses_terminal(c.suite) || c.suite == "umd" || c.suite == "krickeberg")
        throw DomainError("estimate_constant: suite '" + c.suite + "' has no searchable terminal value");
    const Report base = run_suite(c, jobs);
    const auto found = std::find_if(base.estimates.begin(), base.estimates.end(),
                                    [&](const ConstantEstimate& e) { return e.name == verdict_name; });
    if (found == base.estimates.end())
        throw DomainError("estimate_constant: suite '" + c.suite + "' has no verdict '" + verdict_name + "'");
    ConstantEstimate best = *found;
    if (c.search_budget <= 0 || !best.best_witness) return best;

    // Climb from the best random trials; each keeps its filtration and multipliers.
    std::vector<std::pair<double, std::size_t>> ranked;
    for (const auto& t : base.trials)
        for (std::size_t vi = 0; vi < t.verdicts.size(); ++vi)
            if (t.verdicts[vi].name == verdict_name) ranked.emplace_back(-t.verdicts[vi].ratio, t.trial * 4096 + vi);
    std::sort(ranked.begin(), ranked.end());
    const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(c.restarts), ranked.size());
    const bool positive = uses_positive_terminal(c.suite);

    for (std::size_t s = 0; s < starts; ++s) {
        const std::size_t trial = ranked[s].second / 4096;
        const std::size_t vi = ranked[s].second % 4096;
        Instance inst = generate_instance(c, trial);
        const FiltrationPtr filt = cached_filtration(inst.filtration, c.dimension_cap);
        const AlgebraSpec& spec = filt->spec();
        auto terminal_of = [&](const Element& g) {
            return positive ? (g.adjoint() * g + Element::scalar(spec, 1e-6)).real_part() : g;
        };
        auto objective = [&](const Element& g) {
            Instance probe = inst;
            probe.terminal = terminal_of(g);
            const auto vs = evaluate_instance(c.suite, probe, c);
            return vs.at(vi).ratio;
        };
        const Element start = positive ? spectral_map(*inst.terminal, [](double v) { return std::sqrt(std::max(v, 0.0)); })
                                       : *inst.terminal;
        HillClimbOptions hc;
        hc.budget = std::max(1, c.search_budget / static_cast<int>(starts));
        hc.restarts = 1;
        hc.seed = stream_key(*c.master_seed, 0x5ea7c4ULL + s);
        const auto climbed = hill_climb(spec, objective, [&](CounterRng&) { return start; }, hc);
        if (climbed.best > best.empirical_lower_bound) {
            inst.terminal = terminal_of(climbed.best_point);
            const auto vs = evaluate_instance(c.suite, inst, c);
            Witness w;
            w.suite = c.suite;
            w.trial = trial;
            w.seed = stream_key(*c.master_seed, trial);
            w.verdict_index = vi;
            w.verdict = verdict_name;
            w.ratio = vs.at(vi).ratio;
            w.lhs = vs.at(vi).lhs;
            w.rhs = vs.at(vi).rhs;
            w.instance = inst;
            w.config = c;
            best.empirical_lower_bound = w.ratio;
            best.best_witness = w;
        }
        best.trials += static_cast<std::size_t>(climbed.evaluations);
    }
    return best;
}

ReplayResult replay_witness(const Witness& w, const ExperimentConfig& fallback) {
    const ExperimentConfig& c = w.config ? *w.config : fallback;
    const auto vs = evaluate_instance(w.suite, w.instance, c);
    if (w.verdict_index >= vs.size() || vs[w.verdict_index].name != w.verdict)
        throw ParseError("replay: witness does not match the verdicts of suite '" + w.suite + "'");
    const auto& v = vs[w.verdict_index];
    ReplayResult r;
    r.recorded = w.ratio;
    r.recomputed = v.ratio;
    r.holds = v.holds || !v.asserted;
    r.matches = std::abs(r.recomputed - r.recorded) <= 1e-9 * std::max(1.0, std::abs(r.recorded));
    return r;
}

} // namespace ncm
