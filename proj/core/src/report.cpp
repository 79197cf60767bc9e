#include "json_io.hpp"

#include "ncmart/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#ifndef NCMART_VERSION
#define NCMART_VERSION "unknown"
#endif

namespace ncm {

using detail::json;
using detail::number;

std::string library_version() { return NCMART_VERSION; }

namespace {

json verdict_json(const InequalityVerdict& v) {
    return {{"name", v.name},          {"lhs", number(v.lhs)},       {"rhs", number(v.rhs)},
            {"ratio", number(v.ratio)}, {"tolerance", v.tolerance}, {"asserted", v.asserted},
            {"holds", v.holds},        {"tags", v.tags}};
}

std::string g17(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string tag_or_empty(const InequalityVerdict& v, const char* key) {
    const auto it = v.tags.find(key);
    return it == v.tags.end() ? std::string{} : g17(it->second);
}

} // namespace

std::string report_to_json(const Report& r, bool include_wall_time) {
    json j;
    j["tool"] = "ncmart";
    j["version"] = r.version;
    j["config"] = detail::config_json(r.config);
    json trials = json::array();
    for (const auto& t : r.trials) {
        json vs = json::array();
        for (const auto& v : t.verdicts) vs.push_back(verdict_json(v));
        trials.push_back({{"trial", t.trial}, {"seed", t.seed}, {"filtration", t.filtration}, {"verdicts", vs}});
    }
    j["trials"] = trials;
    json aggs = json::array();
    for (const auto& a : r.aggregates) {
        aggs.push_back({{"name", a.name},
                        {"count", a.count},
                        {"asserted", a.asserted},
                        {"passed", a.passed},
                        {"max_ratio", number(a.max_ratio)},
                        {"mean_ratio", number(a.mean_ratio)}});
    }
    j["aggregates"] = aggs;
    json ests = json::array();
    for (const auto& e : r.estimates) {
        json o{{"name", e.name}, {"empirical_lower_bound", number(e.empirical_lower_bound)}, {"trials", e.trials}};
        o["reference"] = e.reference ? number(*e.reference) : json(nullptr);
        o["reference_tag"] = e.reference_tag;
        o["best_witness"] = e.best_witness ? detail::witness_json(*e.best_witness) : json(nullptr);
        ests.push_back(o);
    }
    j["estimates"] = ests;
    json values = json::object();
    for (const auto& [k, v] : r.values) values[k] = number(v);
    j["values"] = values;
    j["notes"] = r.notes;
    j["all_hold"] = r.all_hold;
    j["first_failure"] = r.first_failure ? detail::witness_json(*r.first_failure) : json(nullptr);
    if (include_wall_time) j["wall_time_seconds"] = r.wall_time_seconds;
    return j.dump(2);
}

std::string report_to_csv(const Report& r) {
    std::ostringstream os;
    os << "suite,trial,verdict,p,lambda,lhs,rhs,ratio,holds\n";
    for (const auto& t : r.trials) {
        for (const auto& v : t.verdicts) {
            os << r.config.suite << ',' << t.trial << ',' << v.name << ',' << tag_or_empty(v, "p") << ','
               << tag_or_empty(v, "lambda") << ',' << g17(v.lhs) << ',' << g17(v.rhs) << ',' << g17(v.ratio) << ','
               << (v.holds ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

} // namespace ncm
