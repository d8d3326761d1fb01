#include "heis/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace heis {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config [" + where + "]: " + what);
}

double to_double(const std::string& where, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) bad(where, "not a number: '" + v + "'");
    return d;
}

template <class Int>
Int to_int(const std::string& where, const std::string& v) {
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) bad(where, "not an integer: '" + v + "'");
    return out;
}

using Setter = void (*)(ExperimentConfig&, const std::string&, const std::string&);

// section -> key -> setter
const std::map<std::string, std::map<std::string, Setter>>& setters() {
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"exponents",
         {
             {"n", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.exponents.n = to_int<int>(w, v); }},
             {"lambda", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.exponents.lambda = to_double(w, v); }},
             {"p", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.exponents.p = to_double(w, v); }},
             {"q", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.exponents.q = to_double(w, v); }},
             {"alpha", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.exponents.alpha = to_double(w, v); }},
             {"beta", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.exponents.beta = to_double(w, v); }},
             {"gamma", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.exponents.gamma = to_double(w, v); }},
         }},
        {"quadrature",
         {
             {"k_min", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.quadrature.k_min = to_int<int>(w, v); }},
             {"k_max", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.quadrature.k_max = to_int<int>(w, v); }},
             {"samples_per_shell",
              [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.quadrature.samples_per_shell = to_int<std::int64_t>(w, v); }},
             {"seed", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.quadrature.seed = to_int<std::uint64_t>(w, v); }},
             {"relative_tolerance",
              [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.quadrature.relative_tolerance = to_double(w, v); }},
             {"threads", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.quadrature.threads = to_int<int>(w, v); }},
         }},
        {"norms",
         {
             {"j_min", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.norms.j_min = to_int<int>(w, v); }},
             {"j_max", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.norms.j_max = to_int<int>(w, v); }},
             {"samples_per_stratum",
              [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.norms.samples_per_stratum = to_int<std::int64_t>(w, v); }},
             {"seed", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.norms.seed = to_int<std::uint64_t>(w, v); }},
             {"threshold_start",
              [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.norms.threshold_start = to_double(w, v); }},
             {"threshold_count",
              [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.norms.threshold_count = to_int<int>(w, v); }},
             {"threads", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.norms.threads = to_int<int>(w, v); }},
         }},
        {"family",
         {
             {"N", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.family.N = to_double(w, v); }},
             {"M", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.family.M = to_double(w, v); }},
             {"s", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.family.s = to_double(w, v); }},
             {"epsilon", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.family.epsilon = to_double(w, v); }},
             {"inner_samples",
              [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.family.inner_samples = to_int<int>(w, v); }},
             {"min_factor", [](ExperimentConfig& c, const std::string& w, const std::string& v) { c.family.min_factor = to_double(w, v); }},
         }},
        {"functions",
         {
             {"f", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.f_text = v; }},
             {"g", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.g_text = v; }},
         }},
    };
    return table;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const ExperimentConfig& base) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg = base;
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        auto sec = table.find(section);
        if (sec == table.end()) {
            if (body.empty() && !body.data().empty()) bad(section, "key outside any section");
            bad(section, "unknown section");
        }
        for (const auto& [key, leaf] : body) {
            auto it = sec->second.find(key);
            if (it == sec->second.end()) bad(section, "unknown key '" + key + "'");
            if (!leaf.empty()) bad(section, "nested key '" + key + "'");
            it->second(cfg, section, leaf.data());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

std::string config_to_text(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "[exponents]\n"
      << "n = " << c.exponents.n << "\n"
      << "lambda = " << num(c.exponents.lambda) << "\n"
      << "p = " << num(c.exponents.p) << "\n"
      << "q = " << num(c.exponents.q) << "\n"
      << "alpha = " << num(c.exponents.alpha) << "\n"
      << "beta = " << num(c.exponents.beta) << "\n"
      << "gamma = " << num(c.exponents.gamma) << "\n\n";
    o << "[quadrature]\n"
      << "k_min = " << c.quadrature.k_min << "\n"
      << "k_max = " << c.quadrature.k_max << "\n"
      << "samples_per_shell = " << c.quadrature.samples_per_shell << "\n"
      << "seed = " << c.quadrature.seed << "\n"
      << "relative_tolerance = " << num(c.quadrature.relative_tolerance) << "\n"
      << "threads = " << c.quadrature.threads << "\n\n";
    o << "[norms]\n"
      << "j_min = " << c.norms.j_min << "\n"
      << "j_max = " << c.norms.j_max << "\n"
      << "samples_per_stratum = " << c.norms.samples_per_stratum << "\n"
      << "seed = " << c.norms.seed << "\n"
      << "threshold_start = " << num(c.norms.threshold_start) << "\n"
      << "threshold_count = " << c.norms.threshold_count << "\n"
      << "threads = " << c.norms.threads << "\n\n";
    o << "[family]\n"
      << "N = " << num(c.family.N) << "\n"
      << "M = " << num(c.family.M) << "\n"
      << "s = " << num(c.family.s) << "\n"
      << "epsilon = " << num(c.family.epsilon) << "\n"
      << "inner_samples = " << c.family.inner_samples << "\n"
      << "min_factor = " << num(c.family.min_factor) << "\n";
    if (c.f_text || c.g_text) {
        o << "\n[functions]\n";
        if (c.f_text) o << "f = " << *c.f_text << "\n";
        if (c.g_text) o << "g = " << *c.g_text << "\n";
    }
    return o.str();
}

}  // namespace heis
