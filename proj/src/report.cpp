#include "heis/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace heis {

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct LongWriter {
    std::ostream& os;
    explicit LongWriter(std::ostream& o) : os(o) { os << "quantity,index,value,std_error\n"; }
    void row(const char* q, const std::string& index, double value, double err) {
        os << q << ',' << index << ',' << csv_number(value) << ',' << csv_number(err) << '\n';
    }
    void row(const char* q, const std::string& index, const EstimateWithError& e) { row(q, index, e.value, e.std_error); }
};

void strata_rows(LongWriter& w, const char* q, const NormEstimate& est) {
    for (const auto& s : est.strata) w.row(q, std::to_string(s.j), s.integral);
}

}  // namespace

void write_boundedness_csv(std::ostream& os, const BoundednessReport& rep) {
    LongWriter w(os);
    w.row("r", "", rep.r, 0.0);
    w.row("output_norm", "", rep.output_norm);
    w.row("f_norm", "", rep.f_norm);
    w.row("g_norm", "", rep.g_norm);
    w.row("ratio", "", rep.ratio);
    w.row("degenerate", "", rep.degenerate ? 1.0 : 0.0, 0.0);
    for (const auto& sp : rep.scale_sweep) w.row("scale_ratio", csv_number(sp.s), sp.ratio);
    if (!rep.scale_sweep.empty()) w.row("scale_stable", "", rep.scale_stable ? 1.0 : 0.0, 0.0);
    w.row("output_low_tail", "", rep.output_norm.low_tail(), 0.0);
    w.row("output_high_tail", "", rep.output_norm.high_tail(), 0.0);
    strata_rows(w, "output_stratum", rep.output_norm);
    strata_rows(w, "f_stratum", rep.f_norm);
    strata_rows(w, "g_stratum", rep.g_norm);
}

void write_endpoint_csv(std::ostream& os, const EndpointReport& rep) {
    LongWriter w(os);
    w.row("r", "", rep.r, 0.0);
    w.row("weak_norm", "", rep.weak);
    for (std::size_t i = 0; i < rep.weak.thresholds.size(); ++i) {
        const std::string t = csv_number(rep.weak.thresholds[i]);
        w.row("measure", t, rep.weak.measures[i]);
        w.row("profile", t, rep.weak.profile[i]);
    }
    w.row("profile_spread", "", rep.profile_spread, 0.0);
    for (std::size_t i = 0; i < rep.shells.size(); ++i) w.row("shell_norm", std::to_string(rep.shells[i]), rep.shell_norms[i]);
    w.row("shell_spread", "", rep.shell_spread, 0.0);
}

void write_divergence_csv(std::ostream& os, const DivergenceReport& rep) {
    os << "family,truncation,numerator,numerator_error,denominator,denominator_error,ratio,ratio_error,"
          "growth_factor,slope,slope_error,diverging\n";
    for (std::size_t i = 0; i < rep.steps.size(); ++i) {
        const auto& s = rep.steps[i];
        os << family_name(rep.family) << ',' << csv_number(s.truncation) << ',' << csv_number(s.numerator.value) << ','
           << csv_number(s.numerator.std_error) << ',' << csv_number(s.denominator.value) << ','
           << csv_number(s.denominator.std_error) << ',' << csv_number(s.ratio.value) << ','
           << csv_number(s.ratio.std_error) << ',';
        if (i > 0) os << csv_number(rep.growth_factors[i - 1]);
        os << ',' << csv_number(rep.slope) << ',' << csv_number(rep.slope_error) << ',' << (rep.diverging ? 1 : 0)
           << '\n';
    }
}

void write_tiling_csv(std::ostream& os, const TilingReport& rep) {
    os << "n,half_width,samples,seed,coverage_failures,consistency_failures,containment_failures,max_overlap,"
          "min_overlap\n";
    os << rep.n << ',' << csv_number(rep.half_width) << ',' << rep.samples << ',' << rep.seed << ','
       << rep.coverage_failures << ',' << rep.consistency_failures << ',' << rep.containment_failures << ','
       << rep.max_overlap << ',' << rep.min_overlap << '\n';
}

void write_point_csv(std::ostream& os, const PointEvaluation& ev) {
    os << "op,n,at,value,std_error,samples_used\n";
    os << ev.op << ',' << ev.at.n() << ',';
    for (int c = 0; c < ev.at.dim(); ++c) os << (c ? " " : "") << csv_number(ev.at.coord(c));
    os << ',' << csv_number(ev.estimate.value) << ',' << csv_number(ev.estimate.std_error) << ','
       << ev.estimate.samples_used << '\n';
}

std::string metadata_text(const Metadata& meta, bool with_timestamp) {
    std::ostringstream o;
    o << "[run]\ncommand = " << meta.command << "\n";
    if (with_timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        o << "timestamp = " << buf << "\n";
    }
    o << "\n[results]\n";
    for (const auto& [k, v] : meta.results) o << k << " = " << v << "\n";
    if (!meta.config_text.empty()) o << "\n" << meta.config_text;
    return o.str();
}

}  // namespace heis
