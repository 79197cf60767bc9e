#include "json_io.hpp"

#include "ncmart/matrix_io.hpp"
#include "ncmart/report.hpp"

#include <fstream>
#include <sstream>

namespace ncm {

using detail::json;

namespace {

json elements_json(const std::vector<Element>& v) {
    json a = json::array();
    for (const auto& e : v) a.push_back(to_text(e));
    return a;
}

std::vector<Element> elements_from(const json& a) {
    std::vector<Element> out;
    for (const auto& t : a) out.push_back(from_text(t.get<std::string>()));
    return out;
}

json instance_json(const Instance& in) {
    json j;
    j["filtration"] = detail::descriptor_json(in.filtration);
    j["terminal"] = in.terminal ? json(to_text(*in.terminal)) : json(nullptr);
    j["sequence"] = elements_json(in.sequence);
    j["mode"] = to_string(in.mode);
    j["signs"] = in.signs;
    j["multipliers"] = elements_json(in.multipliers);
    j["p_values"] = in.p_values;
    j["lambdas"] = in.lambdas;
    j["alphas"] = in.alphas;
    j["betas"] = in.betas;
    j["scales"] = in.scales;
    j["self_adjoint"] = in.self_adjoint;
    return j;
}

Instance instance_from(const json& j) {
    Instance in;
    in.filtration = detail::descriptor_from_json(j.at("filtration"));
    if (!j.at("terminal").is_null()) in.terminal = from_text(j.at("terminal").get<std::string>());
    in.sequence = elements_from(j.at("sequence"));
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "signs") in.mode = MultiplierMode::signs;
    else if (mode == "operators") in.mode = MultiplierMode::operators;
    else throw ParseError("witness: unknown multiplier mode");
    in.signs = j.at("signs").get<std::vector<int>>();
    in.multipliers = elements_from(j.at("multipliers"));
    in.p_values = j.at("p_values").get<std::vector<double>>();
    in.lambdas = j.at("lambdas").get<std::vector<double>>();
    in.alphas = j.at("alphas").get<std::vector<double>>();
    in.betas = j.at("betas").get<std::vector<double>>();
    in.scales = j.at("scales").get<std::vector<double>>();
    in.self_adjoint = j.at("self_adjoint").get<bool>();
    return in;
}

} // namespace

namespace detail {

json witness_json(const Witness& w) {
    json j;
    j["suite"] = w.suite;
    j["trial"] = w.trial;
    j["seed"] = w.seed;
    j["verdict_index"] = w.verdict_index;
    j["verdict"] = w.verdict;
    j["ratio"] = number(w.ratio);
    j["lhs"] = number(w.lhs);
    j["rhs"] = number(w.rhs);
    j["instance"] = instance_json(w.instance);
    j["config"] = w.config ? config_json(*w.config) : json(nullptr);
    return j;
}

} // namespace detail

std::string witness_to_json(const Witness& w) { return detail::witness_json(w).dump(2); }

Witness witness_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        Witness w;
        w.suite = j.at("suite").get<std::string>();
        w.trial = j.at("trial").get<std::size_t>();
        w.seed = j.at("seed").get<std::uint64_t>();
        w.verdict_index = j.at("verdict_index").get<std::size_t>();
        w.verdict = j.at("verdict").get<std::string>();
        w.ratio = detail::number_from(j.at("ratio"));
        w.lhs = detail::number_from(j.at("lhs"));
        w.rhs = detail::number_from(j.at("rhs"));
        w.instance = instance_from(j.at("instance"));
        if (j.contains("config") && !j.at("config").is_null()) w.config = parse_config(j.at("config").dump());
        return w;
    } catch (const json::exception& e) {
        throw ParseError(std::string("witness: ") + e.what());
    }
}

void save_witness(const Witness& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("witness: cannot write " + path);
    out << witness_to_json(w) << '\n';
}

Witness load_witness(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("witness: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return witness_from_json(ss.str());
}

} // namespace ncm
