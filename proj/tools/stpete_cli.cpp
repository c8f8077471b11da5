#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stpete/curve.hpp"
#include "stpete/report_io.hpp"

using namespace stpete;

namespace {

std::string num17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::int64_t> parse_ns(const std::string& spec, bool powers_only)
{
    // "4:2048:x2" -> geometric grid (plus off-power points unless powers_only);
    // or a plain comma list "4,8,12"
    if (spec.find(':') != std::string::npos) {
        std::int64_t lo, hi;
        char c1, c2, x;
        std::istringstream is(spec);
        if (!(is >> lo >> c1 >> hi >> c2 >> x) || c1 != ':' || c2 != ':')
            throw param_error("bad --ns spec: " + spec);
        return default_n_grid(lo, hi, !powers_only);
    }
    std::vector<std::int64_t> ns;
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) ns.push_back(std::stoll(tok));
    std::sort(ns.begin(), ns.end());
    return ns;
}

std::ostream& open_out(std::ofstream& file, const std::string& path)
{
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);  // LF line endings
    if (!file) throw param_error("cannot open output file " + path);
    return file;
}

// --config FILE holds key=value lines; command-line flags override it, so the
// file's options are injected right after the subcommand token.
std::vector<std::string> inject_config(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string cfg_path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) cfg_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) cfg_path = args[i].substr(9);
    }
    if (cfg_path.empty()) return args;
    std::ifstream f(cfg_path);
    if (!f) throw param_error("cannot read config file " + cfg_path);
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (!k.empty()) extra.push_back("--" + k + "=" + v);
    }
    if (args.empty()) return args;
    std::vector<std::string> out;
    out.push_back(args[0]);  // subcommand
    for (const auto& e : extra) out.push_back(e);
    for (size_t i = 1; i < args.size(); ++i) out.push_back(args[i]);
    return out;
}

ErrorKind parse_kind(const std::string& s)
{
    if (s == "uniform") return ErrorKind::uniform;
    if (s == "weighted") return ErrorKind::weighted;
    if (s == "local") return ErrorKind::local;
    if (s == "local_weighted") return ErrorKind::local_weighted;
    throw param_error("unknown kind " + s);
}

ApproxMode parse_mode(const std::string& s)
{
    if (s == "full") return ApproxMode::full;
    if (s == "simplified") return ApproxMode::simplified;
    if (s == "simplified_tilde") return ApproxMode::simplified_tilde;
    throw param_error("unknown mode " + s);
}

nlohmann::json poly_json(int k, int j, const MomentPolynomial& p)
{
    return {{"k", k}, {"j", j}, {"poly", p.str()}};
}

int cmd_coeffs(int order, int ell, const std::string& alpha_case,
               const std::string& json_path)
{
    AlphaCase ac = alpha_case == "alpha1" ? AlphaCase::alpha1 : AlphaCase::general;
    DTable d(order, ac);
    nlohmann::json out;
    out["d"] = nlohmann::json::array();
    for (int k = 0; k <= order; ++k)
        for (int j = 0; k + j <= order; ++j)
            out["d"].push_back(poly_json(k, j, d.at(k, j)));

    out["w"] = nlohmann::json::array();
    ExpansionTermTable terms = expansion_terms(ac, ell);
    DTable dw(ell + 2, ac);
    for (int k = 0; k <= 2 * ell; ++k)
        for (int j = -(k / 2); j <= ell - k; ++j)
            for (int m = std::max(1, -j); m <= k + j; ++m) {
                MomentPolynomial w = w_coefficient(m, k, j, dw);
                if (w.is_zero()) continue;
                out["w"].push_back({{"m", m}, {"k", k}, {"j", j}, {"poly", w.str()}});
            }

    out["terms"] = nlohmann::json::array();
    for (const auto& t : terms.terms) {
        out["terms"].push_back({{"k", t.k},
                                {"y_power", t.y_power},
                                {"n_exp_k", t.k_over_alpha},
                                {"n_exp_j", t.j_plain},
                                {"log_power", t.log_power},
                                {"poly", t.coefficient.str()}});
    }
    std::ofstream file;
    std::ostream& os = open_out(file, json_path);
    os << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"merging asymptotic expansions for generalized St. Petersburg games"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::string config_path;
    app.add_option("--config", config_path, "key=value defaults file (CLI overrides)");

    // coeffs
    auto* coeffs = app.add_subcommand("coeffs", "print d/w coefficient tables as JSON");
    int co_order = 4, co_ell = 2;
    std::string co_case = "general", co_json;
    coeffs->add_option("--order", co_order, "max total order of the d table");
    coeffs->add_option("--ell", co_ell, "expansion length for the term table");
    coeffs->add_option("--alpha-case", co_case, "general | alpha1");
    coeffs->add_option("--json", co_json, "output path (default stdout)");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate transforms or curves as CSV");
    std::string ev_what, ev_curve, ev_out;
    double ev_alpha = 0.5, ev_p = 0.5, ev_gamma = 1.0, ev_tol = 1e-9;
    std::int64_t ev_n = 0;
    int ev_k = 0, ev_j = 0, ev_order = 2, ev_ell = 0, ev_points = 101;
    double ev_from = 0.0, ev_to = 10.0;
    eval->add_option("--what", ev_what, "y | gkj | R1k");
    eval->add_option("--curve", ev_curve, "cdf | pdf");
    eval->add_option("--alpha", ev_alpha, "tail exponent in (0,2)");
    eval->add_option("--p", ev_p, "success probability in (0,1)");
    eval->add_option("--gamma", ev_gamma, "position parameter in (q,1]");
    eval->add_option("--n", ev_n, "game count (sets gamma_n; required for R1k)");
    eval->add_option("--k", ev_k, "transform index k");
    eval->add_option("--j", ev_j, "transform index j");
    eval->add_option("--order-k", ev_order, "series order k for R1k");
    eval->add_option("--ell", ev_ell, "expansion length for curves");
    eval->add_option("--from", ev_from, "grid start");
    eval->add_option("--to", ev_to, "grid end");
    eval->add_option("--points", ev_points, "grid size");
    eval->add_option("--tol", ev_tol, "target tolerance");
    eval->add_option("--out", ev_out, "output CSV path (default stdout)");

    // pmf
    auto* pmf = app.add_subcommand("pmf", "exact oracle pmf of S_n as CSV");
    double pm_alpha = 1.0, pm_p = 0.5, pm_budget = 1e-9, pm_xhi = 0;
    std::int64_t pm_n = 2;
    std::string pm_out, pm_json;
    pmf->add_option("--alpha", pm_alpha, "tail exponent");
    pmf->add_option("--p", pm_p, "success probability");
    pmf->add_option("--n", pm_n, "game count");
    pmf->add_option("--tail-budget", pm_budget, "total pruning budget");
    pmf->add_option("--x-hi", pm_xhi, "standardized window cap (0 = none)");
    pmf->add_option("--out", pm_out, "CSV path (default stdout)");
    pmf->add_option("--json", pm_json, "sidecar JSON path");

    // rate-study / local-study
    auto add_study = [&](CLI::App* sub, std::string& kind, std::string& mode,
                         double& alpha, double& p, int& ell, std::string& ns,
                         double& tol, double& budget, double& xhi,
                         bool& powers_only, bool& strict, std::string& out,
                         std::string& json) {
        sub->add_option("--alpha", alpha, "tail exponent")->required();
        sub->add_option("--p", p, "success probability")->required();
        sub->add_option("--ell", ell, "expansion length (rate index)");
        sub->add_option("--ns", ns, "n grid: lo:hi:x2 or comma list")->required();
        sub->add_option("--kind", kind, "error kind");
        sub->add_option("--mode", mode, "full | simplified | simplified_tilde");
        sub->add_option("--tol", tol, "quadrature tolerance");
        sub->add_option("--tail-budget", budget, "oracle pruning budget");
        sub->add_option("--x-hi", xhi, "standardized window");
        sub->add_flag("--powers-only", powers_only, "no off-power n points");
        sub->add_flag("--strict", strict, "exit 3 on inconclusive rows");
        sub->add_option("--out", out, "CSV path");
        sub->add_option("--json", json, "JSON report path");
    };

    auto* rs = app.add_subcommand("rate-study", "uniform/weighted rate study across n");
    std::string rs_kind = "uniform", rs_mode = "full", rs_ns, rs_out, rs_json;
    double rs_alpha = 0, rs_p = 0, rs_tol = 1e-7, rs_budget = 1e-11, rs_xhi = 48;
    int rs_ell = 1;
    bool rs_pow = false, rs_strict = false;
    add_study(rs, rs_kind, rs_mode, rs_alpha, rs_p, rs_ell, rs_ns, rs_tol,
              rs_budget, rs_xhi, rs_pow, rs_strict, rs_out, rs_json);

    auto* ls = app.add_subcommand("local-study", "local rate study across n");
    std::string ls_kind = "local", ls_mode = "full", ls_ns, ls_out, ls_json;
    double ls_alpha = 0, ls_p = 0, ls_tol = 1e-7, ls_budget = 1e-11, ls_xhi = 16;
    int ls_ell = 1;
    bool ls_pow = false, ls_strict = false, ls_weighted = false;
    add_study(ls, ls_kind, ls_mode, ls_alpha, ls_p, ls_ell, ls_ns, ls_tol,
              ls_budget, ls_xhi, ls_pow, ls_strict, ls_out, ls_json);
    ls->add_flag("--weighted", ls_weighted, "use the (1+|x|)-weighted local error");

    for (auto* opt : app.get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    for (auto* sub : app.get_subcommands({})) {}

    std::vector<std::string> args;
    try {
        args = inject_config(argc, argv);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::vector<const char*> cargv;
    cargv.push_back(argv[0]);
    for (const auto& a : args) cargv.push_back(a.c_str());
    try {
        app.parse((int)cargv.size(), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 64;
    }

    try {
        if (*coeffs) return cmd_coeffs(co_order, co_ell, co_case, co_json);

        if (*eval) {
            GameParams gp = make_game_params(ev_alpha, ev_p);
            double gamma = ev_n > 0 ? position_parameter(gp, ev_n) : ev_gamma;
            std::ofstream file;
            std::ostream& os = open_out(file, ev_out);
            if (!ev_curve.empty()) {
                GameInstance gi = make_instance(gp, ev_n > 0 ? ev_n : 1);
                ExpansionTermTable table =
                    approx_table(gp, std::max(1, ev_ell + 1), ApproxMode::full);
                CurveApprox curve(gp, gamma, {numeric_terms(table, gi)}, ev_tol,
                                  std::numeric_limits<double>::quiet_NaN(),
                                  std::max(std::abs(ev_from), std::abs(ev_to)));
                os << "x,value,error_bound\n";
                for (int i = 0; i < ev_points; ++i) {
                    double x = ev_from + (ev_to - ev_from) * i /
                                             std::max(1, ev_points - 1);
                    CurveApprox::Value v = ev_curve == "pdf" ? curve.density(x)
                                                             : curve.cdf(x);
                    os << num17(x) << ',' << num17(v.value) << ','
                       << num17(v.error_bound) << "\n";
                }
                return 0;
            }
            os << "t,re,im,certified_error\n";
            ExponentEvaluator ev(gp, gamma, ev_tol,
                                 std::max(std::abs(ev_from), std::abs(ev_to)) + 1);
            for (int i = 0; i < ev_points; ++i) {
                double t = ev_from + (ev_to - ev_from) * i / std::max(1, ev_points - 1);
                complex_t v;
                double cert = ev.tail_bound();
                if (ev_what == "y") v = ev.y(t);
                else if (ev_what == "gkj") v = ev.transform_g_kj(ev_k, ev_j, t);
                else if (ev_what == "R1k") {
                    if (ev_n < 1) throw param_error("R1k needs --n");
                    R1kResult r = remainder_R1k(gp, ev_n, ev_order, t);
                    v = r.value;
                    cert = r.tail_bound;
                } else {
                    throw param_error("--what must be y, gkj or R1k");
                }
                os << num17(t) << ',' << num17(v.real()) << ',' << num17(v.imag())
                   << ',' << num17(cert) << "\n";
            }
            return 0;
        }

        if (*pmf) {
            GameParams gp = make_game_params(pm_alpha, pm_p);
            SupportWindow w;
            if (pm_xhi > 0) w.x_hi = pm_xhi;
            LatticePMF P = pmf_sum(gp, pm_n, pm_budget, w);
            std::ofstream file;
            std::ostream& os = open_out(file, pm_out);
            os << "s,prob\n";
            for (size_t i = 0; i < P.probs.size(); ++i) {
                if (P.probs[i] == 0) continue;
                double s = P.unit * (double)(P.min_index + (std::int64_t)i);
                os << num17(s) << ',' << num17(P.probs[i]) << "\n";
            }
            if (!pm_json.empty()) {
                nlohmann::json j = {{"tail_mass", P.tail_mass},
                                    {"span", P.unit},
                                    {"min_index", P.min_index},
                                    {"window_mass", P.window_mass},
                                    {"fp_slack", P.fp_slack}};
                std::ofstream jf(pm_json, std::ios::binary);
                jf << j.dump(2) << "\n";
            }
            return 0;
        }

        const bool is_rs = (bool)*rs;
        if (is_rs || *ls) {
            double alpha = is_rs ? rs_alpha : ls_alpha;
            double p = is_rs ? rs_p : ls_p;
            int ell = is_rs ? rs_ell : ls_ell;
            std::string kind_s = is_rs ? rs_kind : (ls_weighted ? "local_weighted" : ls_kind);
            GameParams gp = make_game_params(alpha, p);
            MeasureOptions opts;
            opts.tol = is_rs ? rs_tol : ls_tol;
            opts.tail_budget = is_rs ? rs_budget : ls_budget;
            opts.x_hi = is_rs ? rs_xhi : ls_xhi;
            opts.mode = parse_mode(is_rs ? rs_mode : ls_mode);
            std::vector<std::int64_t> ns =
                parse_ns(is_rs ? rs_ns : ls_ns, is_rs ? rs_pow : ls_pow);
            RateReport rep = rate_study(gp, ns, ell, parse_kind(kind_s), opts);

            const std::string& out = is_rs ? rs_out : ls_out;
            const std::string& jsonp = is_rs ? rs_json : ls_json;
            std::ofstream file;
            std::ostream& os = open_out(file, out);
            write_rate_csv(os, rep);
            if (!jsonp.empty()) {
                std::ofstream jf(jsonp, std::ios::binary);
                write_rate_json(jf, rep);
            }
            bool strict = is_rs ? rs_strict : ls_strict;
            if (strict)
                for (const auto& row : rep.rows)
                    if (row.m.inconclusive) return 3;
            return 0;
        }
    } catch (const param_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const singular_moment_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
