#pragma once

// Reproducible scenario runner behind the `qbm` CLI: a flat key = value
// configuration, deterministic sweeps over (tau, x, theta_T, regime, gamma)
// grids, CSV emission with fixed schema and shortest round-trip float
// formatting, and a summary pass (extrema, derivative sign changes,
// gain-window measures) consumed by the acceptance suite.
//
// Curve datasets use the fixed header
//     quantity,x,theta_T,regime,gamma,tau,value
// sorted by (quantity, x, theta_T, regime, gamma, tau). The Wigner figure
// needs phase-space coordinates and writes its own schema
//     quantity,gamma,tau,q,p,value
// sorted by (gamma, tau, q, p). Identical configs produce byte-identical
// files regardless of worker count.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qbm/channel.hpp"
#include "qbm/coeffs.hpp"
#include "qbm/errors.hpp"
#include "qbm/metrology.hpp"

namespace qbm {

enum class Figure { Quantifiers, Thermometry, WitnessQfi, WitnessVsN, GammaQfi, Wigner };

inline const char* to_string(Figure f) {
    switch (f) {
        case Figure::Quantifiers: return "Quantifiers";
        case Figure::Thermometry: return "Thermometry";
        case Figure::WitnessQfi: return "WitnessQfi";
        case Figure::WitnessVsN: return "WitnessVsN";
        case Figure::GammaQfi: return "GammaQfi";
        default: return "Wigner";
    }
}

/// Full sweep description. Defaults reproduce the desk-scale figure data.
struct ScenarioConfig {
    Figure figure = Figure::Quantifiers;
    double tau_start = 0.0;
    double tau_stop = 5.0;
    int tau_count = 201;
    std::vector<double> x_list = {0.15, 5.0};
    std::vector<double> theta_T_list = {1000.0, 10.0};
    std::vector<Regime> regime_list = {Regime::HighT, Regime::LowT};
    std::vector<double> gamma_list = {0.0, 1.0, 2.0};
    double alpha = 0.1;
    FdSpec fd;
    QuadSpec quad;
    AccuracySpec accuracy;
    std::string output_path = "qbm_out.csv";
    int workers = 0;  ///< 0: QBM_WORKERS env var, else hardware concurrency
    // Wigner figure extras
    double wigner_q_min = -4.5, wigner_q_max = 4.5;
    int wigner_q_count = 121;
    double wigner_p_min = -4.5, wigner_p_max = 4.5;
    int wigner_p_count = 121;
    std::vector<double> wigner_tau_list = {0.0, 2.5, 5.0};

    std::vector<double> tau_grid() const {
        std::vector<double> g(tau_count);
        for (int i = 0; i < tau_count; ++i)
            g[i] = tau_start + (tau_stop - tau_start) * i / (tau_count - 1);
        return g;
    }

    void validate() const {
        std::string bad;
        if (tau_count < 2) bad += " tau_count < 2;";
        if (!(tau_stop > tau_start)) bad += " tau_stop <= tau_start;";
        if (!(tau_start >= 0.0)) bad += " tau_start < 0;";
        if (x_list.empty()) bad += " x_list empty;";
        if (theta_T_list.empty()) bad += " theta_T_list empty;";
        if (regime_list.empty()) bad += " regime_list empty;";
        if (gamma_list.empty()) bad += " gamma_list empty;";
        if (!(alpha > 0.0)) bad += " alpha <= 0;";
        for (double x : x_list)
            if (!(x > 0.0)) { bad += " x_list has non-positive entry;"; break; }
        for (double t : theta_T_list)
            if (!(t > 0.0)) { bad += " theta_T_list has non-positive entry;"; break; }
        if (figure == Figure::Wigner) {
            if (wigner_q_count < 2 || wigner_p_count < 2) bad += " wigner grid count < 2;";
            if (!(wigner_q_max > wigner_q_min) || !(wigner_p_max > wigner_p_min))
                bad += " wigner axis bounds reversed;";
            if (wigner_tau_list.empty()) bad += " wigner_tau_list empty;";
            for (double t : wigner_tau_list)
                if (!(t >= 0.0)) { bad += " wigner_tau_list has negative entry;"; break; }
        }
        if (!bad.empty()) throw ValidationError("ScenarioConfig invalid:" + bad);
        fd.validate();
        quad.validate();
        accuracy.validate();
    }
};

/// One emitted sample of a figure curve.
struct CurvePoint {
    std::string quantity;  // "N", "mu", "T2_F_T", "F_x", "F_gamma"
    double x = 0.0;
    double theta_T = 0.0;
    std::string regime;
    double gamma = 0.0;
    double tau = 0.0;
    double value = 0.0;
};

/// One emitted Wigner sample.
struct WignerPoint {
    double gamma = 0.0;
    double tau = 0.0;
    double q = 0.0;
    double p = 0.0;
    double value = 0.0;
};

struct Dataset {
    Figure figure = Figure::Quantifiers;
    std::vector<CurvePoint> points;
    std::vector<WignerPoint> wigner_points;
    int physicality_warnings = 0;
};

inline constexpr const char* kCurveHeader = "quantity,x,theta_T,regime,gamma,tau,value";
inline constexpr const char* kWignerHeader = "quantity,gamma,tau,q,p,value";

// ------------------------------------------------------------------ formatting

namespace scenario_detail {

/// Shortest representation that round-trips; locale-independent.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& s, const std::string& ctx) {
    const std::string t = trim(s);
    double v;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ParseError(ctx + ": cannot parse number '" + t + "'");
    return v;
}

inline long parse_int(const std::string& s, const std::string& ctx) {
    const std::string t = trim(s);
    long v;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ParseError(ctx + ": cannot parse integer '" + t + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& ctx) {
    std::vector<double> out;
    for (const auto& item : split(s, ','))
        if (!trim(item).empty()) out.push_back(parse_double(item, ctx));
    if (out.empty()) throw ParseError(ctx + ": empty list");
    return out;
}

inline Regime parse_regime(const std::string& s, const std::string& ctx) {
    const std::string t = trim(s);
    if (t == "HighT") return Regime::HighT;
    if (t == "LowT") return Regime::LowT;
    throw ParseError(ctx + ": unknown regime '" + t + "' (expected HighT or LowT)");
}

inline Figure parse_figure(const std::string& s, const std::string& ctx) {
    const std::string t = trim(s);
    for (Figure f : {Figure::Quantifiers, Figure::Thermometry, Figure::WitnessQfi,
                     Figure::WitnessVsN, Figure::GammaQfi, Figure::Wigner})
        if (t == to_string(f)) return f;
    throw ParseError(ctx + ": unknown figure '" + t + "'");
}

template <typename T, typename F>
std::string join_list(const std::vector<T>& v, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out;
}

}  // namespace scenario_detail

// ------------------------------------------------------------------ config IO

/// Parse the flat `key = value` config grammar (# comments, comma lists).
inline ScenarioConfig parse_config(const std::string& text) {
    using namespace scenario_detail;
    ScenarioConfig cfg;
    std::map<std::string, bool> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        const std::string ctx = "line " + std::to_string(lineno);
        if (eq == std::string::npos) throw ParseError(ctx + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(ctx + ": empty key");
        if (seen[key]) throw ParseError(ctx + ": duplicate key '" + key + "'");
        seen[key] = true;
        const std::string kctx = ctx + " (" + key + ")";

        if (key == "figure") cfg.figure = parse_figure(value, kctx);
        else if (key == "tau_start") cfg.tau_start = parse_double(value, kctx);
        else if (key == "tau_stop") cfg.tau_stop = parse_double(value, kctx);
        else if (key == "tau_count") cfg.tau_count = static_cast<int>(parse_int(value, kctx));
        else if (key == "x_list") cfg.x_list = parse_double_list(value, kctx);
        else if (key == "theta_T_list") cfg.theta_T_list = parse_double_list(value, kctx);
        else if (key == "regime_list") {
            cfg.regime_list.clear();
            for (const auto& item : split(value, ','))
                if (!trim(item).empty()) cfg.regime_list.push_back(parse_regime(item, kctx));
        }
        else if (key == "gamma_list") cfg.gamma_list = parse_double_list(value, kctx);
        else if (key == "alpha") cfg.alpha = parse_double(value, kctx);
        else if (key == "fd_rel_step") cfg.fd.rel_step = parse_double(value, kctx);
        else if (key == "fd_min_step") cfg.fd.min_step = parse_double(value, kctx);
        else if (key == "quad_rel_tol") cfg.quad.rel_tol = parse_double(value, kctx);
        else if (key == "quad_abs_tol") cfg.quad.abs_tol = parse_double(value, kctx);
        else if (key == "quad_max_intervals")
            cfg.quad.max_intervals = static_cast<int>(parse_int(value, kctx));
        else if (key == "omega_max") cfg.quad.omega_max = parse_double(value, kctx);
        else if (key == "specfun_rel_tol") cfg.accuracy.rel_tol = parse_double(value, kctx);
        else if (key == "specfun_max_terms")
            cfg.accuracy.max_terms = static_cast<int>(parse_int(value, kctx));
        else if (key == "specfun_switch_radius")
            cfg.accuracy.switch_radius = parse_double(value, kctx);
        else if (key == "output_path") cfg.output_path = value;
        else if (key == "workers") cfg.workers = static_cast<int>(parse_int(value, kctx));
        else if (key == "wigner_q_min") cfg.wigner_q_min = parse_double(value, kctx);
        else if (key == "wigner_q_max") cfg.wigner_q_max = parse_double(value, kctx);
        else if (key == "wigner_q_count")
            cfg.wigner_q_count = static_cast<int>(parse_int(value, kctx));
        else if (key == "wigner_p_min") cfg.wigner_p_min = parse_double(value, kctx);
        else if (key == "wigner_p_max") cfg.wigner_p_max = parse_double(value, kctx);
        else if (key == "wigner_p_count")
            cfg.wigner_p_count = static_cast<int>(parse_int(value, kctx));
        else if (key == "wigner_tau_list") cfg.wigner_tau_list = parse_double_list(value, kctx);
        else throw ParseError(kctx + ": unknown key");
    }
    cfg.validate();
    return cfg;
}

/// Canonical emission; parse(serialize(cfg)) reproduces cfg exactly.
inline std::string serialize_config(const ScenarioConfig& cfg) {
    using namespace scenario_detail;
    auto fd = [](double v) { return format_double(v); };
    std::string out;
    out += std::string("figure = ") + to_string(cfg.figure) + "\n";
    out += "tau_start = " + fd(cfg.tau_start) + "\n";
    out += "tau_stop = " + fd(cfg.tau_stop) + "\n";
    out += "tau_count = " + std::to_string(cfg.tau_count) + "\n";
    out += "x_list = " + join_list(cfg.x_list, fd) + "\n";
    out += "theta_T_list = " + join_list(cfg.theta_T_list, fd) + "\n";
    out += "regime_list = " +
           join_list(cfg.regime_list, [](Regime r) { return std::string(to_string(r)); }) + "\n";
    out += "gamma_list = " + join_list(cfg.gamma_list, fd) + "\n";
    out += "alpha = " + fd(cfg.alpha) + "\n";
    out += "fd_rel_step = " + fd(cfg.fd.rel_step) + "\n";
    out += "fd_min_step = " + fd(cfg.fd.min_step) + "\n";
    out += "quad_rel_tol = " + fd(cfg.quad.rel_tol) + "\n";
    out += "quad_abs_tol = " + fd(cfg.quad.abs_tol) + "\n";
    out += "quad_max_intervals = " + std::to_string(cfg.quad.max_intervals) + "\n";
    out += "omega_max = " + fd(cfg.quad.omega_max) + "\n";
    out += "specfun_rel_tol = " + fd(cfg.accuracy.rel_tol) + "\n";
    out += "specfun_max_terms = " + std::to_string(cfg.accuracy.max_terms) + "\n";
    out += "specfun_switch_radius = " + fd(cfg.accuracy.switch_radius) + "\n";
    out += "output_path = " + cfg.output_path + "\n";
    out += "workers = " + std::to_string(cfg.workers) + "\n";
    if (cfg.figure == Figure::Wigner) {
        out += "wigner_q_min = " + fd(cfg.wigner_q_min) + "\n";
        out += "wigner_q_max = " + fd(cfg.wigner_q_max) + "\n";
        out += "wigner_q_count = " + std::to_string(cfg.wigner_q_count) + "\n";
        out += "wigner_p_min = " + fd(cfg.wigner_p_min) + "\n";
        out += "wigner_p_max = " + fd(cfg.wigner_p_max) + "\n";
        out += "wigner_p_count = " + std::to_string(cfg.wigner_p_count) + "\n";
        out += "wigner_tau_list = " + join_list(cfg.wigner_tau_list, fd) + "\n";
    }
    return out;
}

// ------------------------------------------------------------------ sweep

namespace scenario_detail {

struct CurveJob {
    std::string quantity;
    double x;
    double theta_T;
    Regime regime;
    double gamma;  // 0 for gamma-independent quantities
};

inline BathSpec bath_for(const ScenarioConfig& cfg, const CurveJob& j) {
    BathSpec b;
    b.s = 1.0;
    b.x = j.x;
    b.alpha = cfg.alpha;
    b.theta_T = j.theta_T;
    b.regime = j.regime;
    return b;
}

inline std::vector<CurvePoint> run_curve(const ScenarioConfig& cfg, const CurveJob& job,
                                         int* warning_count) {
    const auto taus = cfg.tau_grid();
    const BathSpec bath = bath_for(cfg, job);
    std::vector<CurvePoint> out;
    out.reserve(taus.size());
    auto push = [&](double tau, double value) {
        out.push_back({job.quantity, job.x, job.theta_T, to_string(job.regime), job.gamma, tau,
                       value});
    };

    if (job.quantity == "N") {
        for (double t : taus) {
            // N(0) is emitted as its tau -> 0+ limit, which is 0 in both regimes
            push(t, t == 0.0 ? 0.0 : nonmarkovianity(t, bath, cfg.accuracy).n_value);
        }
    } else if (job.quantity == "mu") {
        EvolutionGrid grid(bath, taus, cfg.accuracy);
        const GaussianState s0 = initial_correlated_state(ProbeSpec{job.gamma});
        WarningList warnings;
        for (std::size_t i = 0; i < taus.size(); ++i)
            push(taus[i], purity(grid.evolve_at(i, s0, &warnings)));
        if (warning_count) *warning_count += static_cast<int>(warnings.size());
    } else {
        EstimationTarget target;
        if (job.quantity == "T2_F_T") target = EstimationTarget::Temperature;
        else if (job.quantity == "F_x") target = EstimationTarget::WitnessX;
        else target = EstimationTarget::CorrelationGamma;
        auto curve = qfi_curve(target, ProbeSpec{job.gamma}, bath, taus, cfg.fd, cfg.accuracy);
        const double scale =
            (job.quantity == "T2_F_T") ? job.theta_T * job.theta_T : 1.0;
        for (std::size_t i = 0; i < taus.size(); ++i) push(taus[i], scale * curve[i].f_value);
    }
    return out;
}

inline bool curve_point_less(const CurvePoint& a, const CurvePoint& b) {
    if (a.quantity != b.quantity) return a.quantity < b.quantity;
    if (a.x != b.x) return a.x < b.x;
    if (a.theta_T != b.theta_T) return a.theta_T < b.theta_T;
    if (a.regime != b.regime) return a.regime < b.regime;
    if (a.gamma != b.gamma) return a.gamma < b.gamma;
    return a.tau < b.tau;
}

inline int resolve_workers(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("QBM_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace scenario_detail

/// Execute a scenario. Deterministic for a fixed config: each curve is an
/// independent job, results are assembled in sorted order regardless of the
/// worker count.
inline Dataset run_scenario(const ScenarioConfig& cfg) {
    using namespace scenario_detail;
    cfg.validate();
    Dataset ds;
    ds.figure = cfg.figure;

    if (cfg.figure == Figure::Wigner) {
        // first (x, theta_T, regime) combination drives the channel
        const CurveJob base{"W", cfg.x_list.front(), cfg.theta_T_list.front(),
                            cfg.regime_list.front(), 0.0};
        const BathSpec bath = bath_for(cfg, base);
        std::vector<double> q(cfg.wigner_q_count), p(cfg.wigner_p_count);
        for (int i = 0; i < cfg.wigner_q_count; ++i)
            q[i] = cfg.wigner_q_min +
                   (cfg.wigner_q_max - cfg.wigner_q_min) * i / (cfg.wigner_q_count - 1);
        for (int i = 0; i < cfg.wigner_p_count; ++i)
            p[i] = cfg.wigner_p_min +
                   (cfg.wigner_p_max - cfg.wigner_p_min) * i / (cfg.wigner_p_count - 1);
        std::vector<double> taus = cfg.wigner_tau_list;
        std::sort(taus.begin(), taus.end());
        taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

        for (double g : cfg.gamma_list) {
            const GaussianState s0 = initial_correlated_state(ProbeSpec{g});
            WarningList warnings;
            for (double t : taus) {
                GaussianState st =
                    t == 0.0 ? s0 : evolve(s0, t, bath, cfg.quad, &warnings);
                WignerGrid wg = wigner_grid(st, q, p);
                for (std::size_t iq = 0; iq < q.size(); ++iq)
                    for (std::size_t ip = 0; ip < p.size(); ++ip)
                        ds.wigner_points.push_back({g, t, q[iq], p[ip], wg.at(iq, ip)});
            }
            ds.physicality_warnings += static_cast<int>(warnings.size());
        }
        return ds;
    }

    // build the job list (sorted construction; output re-sorted anyway)
    std::vector<CurveJob> jobs;
    auto add_per_gamma = [&](const std::string& qty) {
        for (double x : cfg.x_list)
            for (double th : cfg.theta_T_list)
                for (Regime r : cfg.regime_list)
                    for (double g : cfg.gamma_list) jobs.push_back({qty, x, th, r, g});
    };
    auto add_channel_only = [&](const std::string& qty) {
        for (double x : cfg.x_list)
            for (double th : cfg.theta_T_list)
                for (Regime r : cfg.regime_list) jobs.push_back({qty, x, th, r, 0.0});
    };
    switch (cfg.figure) {
        case Figure::Quantifiers:
            add_channel_only("N");
            add_per_gamma("mu");
            break;
        case Figure::Thermometry: add_per_gamma("T2_F_T"); break;
        case Figure::WitnessQfi: add_per_gamma("F_x"); break;
        case Figure::WitnessVsN:
            add_channel_only("N");
            add_per_gamma("F_x");
            break;
        case Figure::GammaQfi: add_per_gamma("F_gamma"); break;
        case Figure::Wigner: break;  // handled above
    }

    const int workers = std::min<int>(resolve_workers(cfg.workers),
                                      static_cast<int>(jobs.size()) > 0 ? jobs.size() : 1);
    std::vector<std::vector<CurvePoint>> results(jobs.size());
    std::vector<int> warning_counts(jobs.size(), 0);
    std::vector<std::string> job_errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker_fn = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            try {
                results[i] = run_curve(cfg, jobs[i], &warning_counts[i]);
            } catch (const std::exception& e) {
                job_errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker_fn);
    worker_fn();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!job_errors[i].empty())
            throw Error("run_scenario: curve (" + jobs[i].quantity + ", x=" +
                        scenario_detail::format_double(jobs[i].x) + ", theta_T=" +
                        scenario_detail::format_double(jobs[i].theta_T) + ", " +
                        to_string(jobs[i].regime) + ", gamma=" +
                        scenario_detail::format_double(jobs[i].gamma) + ") failed: " +
                        job_errors[i]);
        for (auto& pt : results[i]) ds.points.push_back(std::move(pt));
        ds.physicality_warnings += warning_counts[i];
    }
    std::sort(ds.points.begin(), ds.points.end(), scenario_detail::curve_point_less);
    return ds;
}

/// Render a dataset as CSV (fixed float formatting, trailing newline).
inline std::string to_csv(const Dataset& ds) {
    using scenario_detail::format_double;
    std::string out;
    if (ds.figure == Figure::Wigner) {
        out += kWignerHeader;
        out += "\n";
        for (const auto& w : ds.wigner_points) {
            out += "W,";
            out += format_double(w.gamma) + "," + format_double(w.tau) + "," +
                   format_double(w.q) + "," + format_double(w.p) + "," +
                   format_double(w.value) + "\n";
        }
        return out;
    }
    out += kCurveHeader;
    out += "\n";
    for (const auto& c : ds.points) {
        out += c.quantity + "," + format_double(c.x) + "," + format_double(c.theta_T) + "," +
               c.regime + "," + format_double(c.gamma) + "," + format_double(c.tau) + "," +
               format_double(c.value) + "\n";
    }
    return out;
}

/// Parse a curve CSV produced by to_csv.
inline Dataset parse_csv(const std::string& text) {
    using namespace scenario_detail;
    Dataset ds;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("parse_csv: empty input");
    if (trim(line) != kCurveHeader)
        throw SchemaError("parse_csv: unexpected header '" + trim(line) + "'");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 7)
            throw SchemaError("parse_csv: line " + std::to_string(lineno) + ": expected 7 fields");
        const std::string ctx = "parse_csv: line " + std::to_string(lineno);
        CurvePoint c;
        try {
            c.quantity = trim(f[0]);
            c.x = parse_double(f[1], ctx);
            c.theta_T = parse_double(f[2], ctx);
            c.regime = trim(f[3]);
            c.gamma = parse_double(f[4], ctx);
            c.tau = parse_double(f[5], ctx);
            c.value = parse_double(f[6], ctx);
        } catch (const ParseError& e) {
            throw SchemaError(e.what());
        }
        if (!std::isfinite(c.value)) throw SchemaError(ctx + ": non-finite value");
        ds.points.push_back(std::move(c));
    }
    return ds;
}

// ------------------------------------------------------------------ summary

/// Per-curve summary statistics plus gain-window measures.
struct Summary {
    std::vector<std::pair<std::string, std::string>> entries;

    std::string text() const {
        std::string out;
        for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
        return out;
    }
    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
};

/// Count sign changes of the successive-difference derivative, ignoring
/// differences below `dead_band` (absolute).
inline int sign_change_count(const std::vector<double>& values, double dead_band) {
    int changes = 0;
    int prev_sign = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        if (std::abs(d) <= dead_band) continue;
        const int s = d > 0 ? 1 : -1;
        if (prev_sign != 0 && s != prev_sign) ++changes;
        prev_sign = s;
    }
    return changes;
}

inline Summary summarize(const Dataset& ds) {
    using scenario_detail::format_double;
    struct Key {
        std::string quantity;
        double x, theta_T;
        std::string regime;
        double gamma;
        bool operator<(const Key& o) const {
            if (quantity != o.quantity) return quantity < o.quantity;
            if (x != o.x) return x < o.x;
            if (theta_T != o.theta_T) return theta_T < o.theta_T;
            if (regime != o.regime) return regime < o.regime;
            return gamma < o.gamma;
        }
    };
    std::map<Key, std::vector<std::pair<double, double>>> curves;  // tau -> value
    for (const auto& c : ds.points)
        curves[{c.quantity, c.x, c.theta_T, c.regime, c.gamma}].push_back({c.tau, c.value});

    Summary s;
    auto curve_tag = [&](const Key& k) {
        return k.quantity + ".x" + format_double(k.x) + ".th" + format_double(k.theta_T) + "." +
               k.regime + ".g" + format_double(k.gamma);
    };
    for (auto& [key, pts] : curves) {
        std::sort(pts.begin(), pts.end());
        std::vector<double> vals;
        vals.reserve(pts.size());
        for (auto& [t, v] : pts) vals.push_back(v);
        double vmin = vals[0], vmax = vals[0], tmin = pts[0].first, tmax = pts[0].first;
        for (auto& [t, v] : pts) {
            if (v < vmin) { vmin = v; tmin = t; }
            if (v > vmax) { vmax = v; tmax = t; }
        }
        const std::string tag = curve_tag(key);
        s.entries.push_back({tag + ".n", std::to_string(pts.size())});
        s.entries.push_back({tag + ".min", format_double(vmin)});
        s.entries.push_back({tag + ".tau_at_min", format_double(tmin)});
        s.entries.push_back({tag + ".max", format_double(vmax)});
        s.entries.push_back({tag + ".tau_at_max", format_double(tmax)});
        s.entries.push_back({tag + ".final", format_double(vals.back())});
        const double dead = 1e-14 * std::max(1.0, std::abs(vmax));
        s.entries.push_back(
            {tag + ".sign_changes", std::to_string(sign_change_count(vals, dead))});

        // gain window against the gamma = 0 reference of the same curve family
        if (key.gamma != 0.0 && key.quantity != "N" && key.quantity != "mu") {
            Key ref = key;
            ref.gamma = 0.0;
            auto it = curves.find(ref);
            if (it != curves.end() && it->second.size() == pts.size()) {
                auto& refpts = it->second;
                std::sort(refpts.begin(), refpts.end());
                double window = 0.0, gain_max = 0.0;
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    const double refv = refpts[i].second;
                    if (std::abs(refv) < 1e-30) continue;
                    const double ratio = pts[i].second / refv;
                    gain_max = std::max(gain_max, ratio);
                    if (ratio > 1.0) window += pts[i].first - pts[i - 1].first;
                }
                s.entries.push_back({tag + ".gain_max", format_double(gain_max)});
                s.entries.push_back({tag + ".gain_window", format_double(window)});
            }
        }
    }
    return s;
}

}  // namespace qbm
