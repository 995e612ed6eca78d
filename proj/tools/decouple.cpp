// decouple: exact sharp decoupling exponents for elliptic and hyperbolic
// paraboloids, plus numerical verification of the predicted power-law
// scalings (Weyl-sum moments and extremizer ratio fits).
//
// Subcommands:
//   exponent           sharp exponent and extremizer breakdown at one (p,q)
//   diagram            region/exponent grid over the (1/p,1/q) square
//   verify-moments     L^p moment scaling of the quadratic Weyl sum
//   verify-extremizer  ratio-series slope checks for one test-function family
//
// Computed samples are cached in an append-only CSV (override the default
// path with --cache or the DECOUPLE_CACHE environment variable; --cache ""
// disables caching, --force recomputes and appends fresh rows).  Reports are
// JSON (schema_version 1) and are byte-identical across reruns of the same
// configuration.  Exit code 0 iff every verdict passes.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decoupling/cache.hpp"
#include "decoupling/exponents.hpp"
#include "decoupling/fit.hpp"
#include "decoupling/harness.hpp"
#include "decoupling/report.hpp"
#include "decoupling/weyl.hpp"

namespace dc = decoupling;
using dc::json;

namespace {

std::vector<int> parse_ladder(const std::string& text) {
    std::vector<int> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        out.push_back(std::stoi(cur));
        cur.clear();
    };
    for (char c : text) {
        if (c == ',') flush();
        else cur.push_back(c);
    }
    flush();
    if (out.empty()) throw dc::invalid_spec_error("empty M ladder");
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 1) throw dc::invalid_spec_error("ladder entries must be >= 1");
        if (i > 0 && out[i] <= out[i - 1])
            throw dc::invalid_spec_error("ladder must be strictly increasing");
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

dc::SignVector signs_or_elliptic(const std::string& signs, int d) {
    if (signs.empty()) return dc::SignVector(static_cast<std::size_t>(d - 1), 1);
    return dc::parse_signs(signs);
}

// moment grids: exact bandwidth for even p, oversampling >= 4 otherwise
dc::GridSpec moment_grid(const dc::Lp& p, int oversample_override) {
    if (oversample_override > 0)
        return dc::GridSpec{oversample_override, oversample_override};
    int automatic;
    if (!p.is_inf() && p.rational().is_integer() && p.rational().num() % 2 == 0) {
        auto k = (p.rational().num() + 3) / 4;
        automatic = std::max<std::int64_t>(2, k);
    } else {
        automatic = 4;
    }
    return dc::GridSpec{automatic, automatic};
}

struct CacheSession {
    dc::CacheFile file;
    bool force = false;

    template <class Compute>
    double remember(dc::CacheRecord probe, Compute&& compute) {
        if (file.enabled() && !force) {
            if (auto hit = file.lookup(probe)) return hit->value;
        }
        probe.value = compute();
        file.append(probe);
        return probe.value;
    }
};

double cached_moment(CacheSession& cache, int M, const dc::Lp& p, const dc::GridSpec& grid) {
    dc::CacheRecord probe;
    probe.kind = "moment";
    probe.d = 2;
    probe.M = M;
    probe.set_p(p);
    return cache.remember(probe, [&] {
        return dc::moment_2d(dc::WeylSumSpec::make(M), p, grid).value;
    });
}

double cached_ratio(CacheSession& cache, dc::Family family, const dc::ParaboloidSpec& spec,
                    int M, const dc::Lp& p, const dc::Lp& q, const dc::HarnessConfig& cfg) {
    dc::CacheRecord probe;
    probe.kind = dc::family_name(family);
    probe.d = spec.d;
    probe.signs = spec.signs_str();
    probe.M = M;
    probe.set_p(p);
    probe.set_q(q);
    return cache.remember(probe, [&] {
        return dc::compute_ratio(family, spec, M, p, q, cfg).ratio;
    });
}

double cached_dirichlet_factor(CacheSession& cache, int M, const dc::Lp& p,
                               const dc::HarnessConfig& cfg) {
    dc::CacheRecord probe;
    probe.kind = "dirichlet";
    probe.d = 1;
    probe.M = M;
    probe.set_p(p);
    return cache.remember(probe, [&] {
        int s_row = std::max(cfg.ox, (int)((p.rational().num() + 4 * p.rational().den() - 1) /
                                           (4 * p.rational().den())));
        return dc::detail::ipow(static_cast<double>(M), 3) * M *
               dc::dirichlet_moment(M, p, s_row);
    });
}

void emit(const json& report, const std::string& format) {
    if (format == "csv") return;  // csv emission handled by the commands
    std::cout << report.dump(2) << "\n";
}

int finish(const json& report, const std::string& format) {
    emit(report, format);
    return dc::all_verdicts_pass(report) ? 0 : 1;
}

int run_exponent(int d, const std::string& signs, const std::string& p_text,
                 const std::string& q_text) {
    auto spec = dc::ParaboloidSpec::make(d, signs_or_elliptic(signs, d));
    auto p = dc::Lp::parse(p_text);
    auto q = dc::Lp::parse(q_text);
    auto pt = dc::DiagramPoint::from_pq(p, q);
    auto breakdown = dc::sharp_exponent(spec, pt);

    json config{{"d", d}, {"signs", spec.signs_str()}, {"p", p.str()}, {"q", q.str()}};
    json report = dc::make_report("exponent", config);
    json result = dc::breakdown_json(breakdown);
    result["rp"] = pt.rp.str();
    result["rq"] = pt.rq.str();
    json ubs = json::array();
    for (const auto& ub : dc::reference_upper_bounds(spec, pt))
        ubs.push_back({{"source", ub.source}, {"exponent", ub.exponent.str()}});
    result["upper_bounds"] = std::move(ubs);
    report["results"].push_back(std::move(result));
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_diagram(int d, const std::string& signs, int bound, const std::string& format) {
    auto spec = dc::ParaboloidSpec::make(d, signs_or_elliptic(signs, d));
    if (bound < 2) throw dc::invalid_spec_error("grid denominator bound must be >= 2");

    std::vector<dc::Rational> ticks;
    for (int k = 0; 2 * k <= bound; ++k) ticks.emplace_back(k, bound);

    if (format == "csv") {
        std::cout << "rp,rq,region,sharp\n";
        for (const auto& rp : ticks)
            for (const auto& rq : ticks) {
                auto b = dc::sharp_exponent(spec, dc::DiagramPoint(rp, rq));
                std::cout << rp.str() << ',' << rq.str() << ',' << b.region.str() << ','
                          << b.sharp.str() << "\n";
            }
        return 0;
    }

    json config{{"d", d}, {"signs", spec.signs_str()}, {"bound", bound}};
    json report = dc::make_report("diagram", config);
    for (const auto& rp : ticks)
        for (const auto& rq : ticks) {
            auto b = dc::sharp_exponent(spec, dc::DiagramPoint(rp, rq));
            report["results"].push_back({{"rp", rp.str()},
                                         {"rq", rq.str()},
                                         {"region", b.region.str()},
                                         {"sharp", b.sharp.str()}});
        }
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_verify_moments(const std::string& ladder_text, const std::string& p_text,
                       int oversample, double tol_override, CacheSession& cache,
                       const std::string& format) {
    auto ladder = parse_ladder(ladder_text);
    std::vector<dc::Lp> ps;
    for (const auto& s : split_list(p_text, ','))
        if (!s.empty()) ps.push_back(dc::Lp::parse(s));
    if (ps.empty()) throw dc::invalid_spec_error("no p values given");

    json config{{"ladder", ladder}, {"p", json::array()}, {"oversample", oversample},
                {"tol", tol_override}};
    for (const auto& p : ps) config["p"].push_back(p.str());
    json report = dc::make_report("verify-moments", config);

    for (const auto& p : ps) {
        if (p.is_inf()) throw dc::invalid_spec_error("moment fits need finite p");
        dc::GridSpec grid = moment_grid(p, oversample);
        dc::ScalingSeries series;
        series.label = "moment p=" + p.str();
        json points = json::array();
        for (int M : ladder) {
            double value = cached_moment(cache, M, p, grid);
            series.points.emplace_back(M, value);
            points.push_back({{"M", M}, {"value", value}});
        }
        // predicted slope of ||f||_p vs M: 1/2 up to p=6, then 1 - 3/p
        dc::Rational predicted = p.rational() <= dc::Rational(6)
                                     ? dc::Rational(1, 2)
                                     : dc::Rational(1) - dc::Rational(3) / p.rational();
        double tol = tol_override > 0.0 ? tol_override
                     : p.rational() == dc::Rational(2) ? 1e-6
                     : p.rational() <= dc::Rational(6) ? 0.03
                                                       : 0.05;
        auto fit = dc::compare(dc::fit_exponent(series), predicted, tol);
        json result;
        result["p"] = p.str();
        result["points"] = std::move(points);
        result["fit"] = dc::fit_json(fit);
        result["predicted"] = predicted.str();
        report["results"].push_back(std::move(result));
        dc::add_verdict(report, "moment-slope p=" + p.str(), fit.verdict == dc::Verdict::Pass);

        if (format == "csv")
            for (std::size_t i = 0; i < ladder.size(); ++i)
                std::cout << "moment," << ladder[i] << ',' << p.str() << ','
                          << series.points[i].second << "\n";
    }

    // exact oracles on the ladder
    {
        bool ok2 = true;
        dc::GridSpec g2{2, 2};
        for (int M : ladder) {
            double v = cached_moment(cache, M, dc::Lp::parse("2"), g2);
            if (std::abs(v * v - M) > 1e-10 * M) ok2 = false;
        }
        dc::add_verdict(report, "second-moment-oracle", ok2);

        bool ok4 = true;
        dc::GridSpec g4{2, 2};
        for (int M : ladder) {
            if (M > 64) continue;  // enumeration cap
            double v = cached_moment(cache, M, dc::Lp::parse("4"), g4);
            double expected = static_cast<double>(dc::fourth_moment_count(M));
            if (std::abs(std::pow(v, 4.0) - expected) > 1e-8 * expected) ok4 = false;
        }
        dc::add_verdict(report, "fourth-moment-oracle", ok4);
    }

    // sixth-moment log growth
    {
        dc::GridSpec g6{2, 2};
        std::vector<std::pair<double, double>> table;
        json rows = json::array();
        for (int M : ladder) {
            double v = cached_moment(cache, M, dc::Lp::parse("6"), g6);
            double ratio = std::pow(v, 6.0) / (static_cast<double>(M) * M * M);
            table.emplace_back(M, ratio);
            rows.push_back({{"M", M}, {"ratio", ratio}});
        }
        bool increasing = true;
        for (std::size_t i = 1; i < table.size(); ++i)
            if (table[i].second <= table[i - 1].second) increasing = false;
        auto [a, b] = dc::log_growth_fit(table);
        json result;
        result["sixth_moment_table"] = std::move(rows);
        result["log_fit"] = {{"intercept", a}, {"slope", b}};
        report["results"].push_back(std::move(result));
        dc::add_verdict(report, "sixth-moment-monotone", increasing);
        dc::add_verdict(report, "sixth-moment-log-slope-positive", b > 0.0);
    }

    return finish(report, format);
}

int run_verify_extremizer(const std::string& kind, int d, const std::string& signs,
                          const std::string& pq_text, const std::string& ladder_text,
                          double tol, double cap_slack, int oversample,
                          CacheSession& cache, const std::string& format) {
    auto ladder = parse_ladder(ladder_text);
    dc::HarnessConfig cfg;
    if (oversample > 0) {
        cfg.ox = oversample;
        cfg.oy = oversample;
    }

    std::vector<std::pair<dc::Lp, dc::Lp>> pqs;
    for (const auto& item : split_list(pq_text, ',')) {
        if (item.empty()) continue;
        auto parts = split_list(item, ':');
        if (parts.size() != 2)
            throw dc::invalid_spec_error("bad p:q item '" + item + "'");
        pqs.emplace_back(dc::Lp::parse(parts[0]), dc::Lp::parse(parts[1]));
    }
    if (pqs.empty()) throw dc::invalid_spec_error("no p:q pairs given");

    json config{{"kind", kind},   {"d", d},     {"signs", signs},
                {"pq", pq_text},  {"ladder", ladder}, {"tol", tol},
                {"cap_slack", cap_slack}, {"oversample", oversample}};
    json report = dc::make_report("verify-extremizer", config);

    if (kind == "dirichlet") {
        // 1D Dirichlet factor: J(delta) ~ delta^{-(p+3)/2}; abscissa delta^{-1}
        for (const auto& [p, q] : pqs) {
            (void)q;
            if (p.is_inf()) throw dc::invalid_spec_error("dirichlet factor needs finite p");
            dc::ScalingSeries series;
            series.label = "dirichlet p=" + p.str();
            json points = json::array();
            for (int M : ladder) {
                double v = cached_dirichlet_factor(cache, M, p, cfg);
                series.points.emplace_back(static_cast<double>(M) * M, v);
                points.push_back({{"M", M}, {"value", v}});
            }
            dc::Rational predicted = (p.rational() + dc::Rational(3)) / dc::Rational(2);
            auto fit = dc::compare(dc::fit_exponent(series), predicted, tol);
            json result;
            result["p"] = p.str();
            result["points"] = std::move(points);
            result["fit"] = dc::fit_json(fit);
            result["delta_exponent"] = -fit.slope;
            result["predicted_delta_exponent"] = "-" + predicted.str();
            report["results"].push_back(std::move(result));
            dc::add_verdict(report, "dirichlet-factor p=" + p.str(),
                            fit.verdict == dc::Verdict::Pass);
        }
        return finish(report, format);
    }

    dc::Family family = dc::parse_family(kind);
    auto spec = dc::ParaboloidSpec::make(d, signs_or_elliptic(signs, d));

    for (const auto& [p, q] : pqs) {
        dc::ScalingSeries series;
        series.label = kind + " p=" + p.str() + " q=" + q.str();
        json points = json::array();
        for (int M : ladder) {
            double r = cached_ratio(cache, family, spec, M, p, q, cfg);
            series.points.emplace_back(spec.caps(M), r);
            points.push_back({{"M", M}, {"N", spec.caps(M)}, {"ratio", r}});
            if (format == "csv")
                std::cout << kind << ',' << spec.d << ',' << spec.signs_str() << ',' << M
                          << ',' << p.str() << ',' << q.str() << ',' << r << "\n";
        }
        auto fit = dc::fit_exponent(series);
        dc::Rational predicted = dc::predicted_lower_exponent(family, spec, p, q);
        dc::Rational sharp = dc::sharp_exponent_at(spec, p, q);
        auto check = dc::one_sided_check(fit, predicted, sharp, tol, cap_slack);

        json result;
        result["p"] = p.str();
        result["q"] = q.str();
        result["points"] = std::move(points);
        result["fit"] = dc::fit_json(fit);
        result["predicted"] = predicted.str();
        result["sharp"] = sharp.str();
        result["lower_ok"] = check.lower_ok();
        result["upper_ok"] = check.upper_ok();
        report["results"].push_back(std::move(result));
        dc::add_verdict(report, kind + " p=" + p.str() + " q=" + q.str(), check.ok());
    }
    return finish(report, format);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp decoupling exponents and scaling verification"};
    app.require_subcommand(1);
    app.fallthrough();  // let --cache/--force/--format appear after the subcommand

    std::string cache_path = "decouple-cache.csv";
    if (const char* env = std::getenv("DECOUPLE_CACHE")) cache_path = env;
    bool force = false;
    std::string format = "json";
    app.add_option("--cache", cache_path, "cache CSV path; empty string disables")
        ->capture_default_str();
    app.add_flag("--force", force, "recompute even when cached");
    app.add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    int d = 2;
    std::string signs;
    std::string p_text = "2", q_text = "2";

    auto* exp_cmd = app.add_subcommand("exponent", "sharp exponent at one (p,q)");
    exp_cmd->add_option("-d", d, "dimension >= 2")->required();
    exp_cmd->add_option("-v,--signs", signs, "sign pattern, e.g. '+-' (default elliptic)");
    exp_cmd->add_option("-p", p_text, "p as 'num/den', integer, or 'inf'")->required();
    exp_cmd->add_option("-q", q_text, "q as 'num/den', integer, or 'inf'")->required();

    int bound = 8;
    auto* diag_cmd = app.add_subcommand("diagram", "exponent grid over the diagram");
    diag_cmd->add_option("-d", d, "dimension >= 2")->required();
    diag_cmd->add_option("-v,--signs", signs, "sign pattern (default elliptic)");
    diag_cmd->add_option("--bound", bound, "grid denominator")->capture_default_str();

    std::string ladder_text = "8,16,32,64";
    std::string mp_text = "2,4,10";
    int oversample = 0;
    double tol = 0.0;
    auto* vm_cmd = app.add_subcommand("verify-moments", "Weyl-sum moment scalings");
    vm_cmd->add_option("--ladder", ladder_text, "comma-separated M values")
        ->capture_default_str();
    vm_cmd->add_option("--p", mp_text, "comma-separated p values")->capture_default_str();
    vm_cmd->add_option("--oversample", oversample, "override grid oversampling (0 = auto)");
    vm_cmd->add_option("--tol", tol, "override slope tolerance (0 = per-p default)");

    std::string kind = "expsum";
    std::string pq_text = "2:2";
    double ve_tol = 0.1, cap_slack = 0.15;
    auto* ve_cmd = app.add_subcommand("verify-extremizer", "extremizer ratio slope checks");
    ve_cmd->add_option("--kind", kind, "constant | expsum | hyperplane | dirichlet")
        ->check(CLI::IsMember({"constant", "expsum", "hyperplane", "dirichlet"}))
        ->capture_default_str();
    ve_cmd->add_option("-d", d, "dimension >= 2");
    ve_cmd->add_option("-v,--signs", signs, "sign pattern (default elliptic)");
    ve_cmd->add_option("--pq", pq_text, "comma-separated p:q pairs, e.g. 'inf:2,4:4'")
        ->capture_default_str();
    ve_cmd->add_option("--ladder", ladder_text, "comma-separated M values")
        ->capture_default_str();
    ve_cmd->add_option("--tol", ve_tol, "one-sided slope tolerance")->capture_default_str();
    ve_cmd->add_option("--cap", cap_slack, "upper sanity slack above the sharp exponent")
        ->capture_default_str();
    ve_cmd->add_option("--oversample", oversample, "override oversampling (0 = default)");

    CLI11_PARSE(app, argc, argv);

    try {
        CacheSession cache{dc::CacheFile(cache_path), force};
        if (app.got_subcommand(exp_cmd)) return run_exponent(d, signs, p_text, q_text);
        if (app.got_subcommand(diag_cmd)) return run_diagram(d, signs, bound, format);
        if (app.got_subcommand(vm_cmd))
            return run_verify_moments(ladder_text, mp_text, oversample, tol, cache, format);
        return run_verify_extremizer(kind, d, signs, pq_text, ladder_text, ve_tol, cap_slack,
                                     oversample, cache, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
