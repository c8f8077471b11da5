#include "stpete/report_io.hpp"

#include <ostream>

#include <json.hpp>

namespace stpete {

namespace {

std::string num17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::uniform: return "uniform";
    case ErrorKind::weighted: return "weighted";
    case ErrorKind::local: return "local";
    case ErrorKind::local_weighted: return "local_weighted";
    }
    return "?";
}

std::string mode_name(ApproxMode m)
{
    switch (m) {
    case ApproxMode::full: return "full";
    case ApproxMode::simplified: return "simplified";
    case ApproxMode::simplified_tilde: return "simplified_tilde";
    }
    return "?";
}

void write_rate_csv(std::ostream& os, const RateReport& rep)
{
    os << "n,gamma_n,delta,normalized,cert\n";
    for (const auto& r : rep.rows) {
        os << r.m.n << ',' << num17(r.m.gamma_n) << ',' << num17(r.m.value)
           << ',' << num17(r.normalized) << ',' << num17(r.m.value_error_bound)
           << '\n';
    }
}

void write_rate_json(std::ostream& os, const RateReport& rep)
{
    nlohmann::json j;
    j["params"] = {{"alpha", rep.gp.alpha},
                   {"p", rep.gp.p},
                   {"q", rep.gp.q},
                   {"r", rep.gp.r}};
    if (rep.gp.lattice_span)
        j["params"]["lattice_span"] = *rep.gp.lattice_span;
    j["ell"] = rep.ell;
    j["kind"] = kind_name(rep.kind);
    j["mode"] = mode_name(rep.mode);
    j["normalizer"] = {{"rate_exponent", rep.normalizer.rate_exponent},
                       {"log_power", rep.normalizer.log_power}};
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        j["rows"].push_back({{"n", r.m.n},
                             {"gamma_n", r.m.gamma_n},
                             {"value", r.m.value},
                             {"cert", r.m.value_error_bound},
                             {"normalized", r.normalized},
                             {"argmax_x", r.m.argmax_x},
                             {"flagged", r.flagged},
                             {"inconclusive", r.m.inconclusive},
                             {"envelope_mode", r.m.envelope_mode},
                             {"beyond_window_mass", r.m.beyond_window_mass}});
    }
    j["summary"] = {{"max_norm", rep.max_norm},
                    {"median_norm", rep.median_norm},
                    {"max_over_median", rep.max_over_median},
                    {"spearman", rep.spearman},
                    {"window_x_hi", rep.window_x_hi},
                    {"note", rep.note}};
    os << j.dump(2) << "\n";
}

} // namespace stpete
