#pragma once

/// Experiment configs, runners, artifact emission and the summary report.
///
/// Configs are strict key=value text: unknown keys are rejected, parameter
/// constraints are checked before anything runs, and every experiment writes
/// a CSV artifact whose comment header carries one machine-readable summary
/// line per asserted claim. The report subcommand aggregates those lines.

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lhh/ends.hpp"
#include "lhh/kernels.hpp"
#include "lhh/regions.hpp"
#include "lhh/special.hpp"

namespace lhh {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string kind;
    std::map<std::string, std::string> kv;

    static ExperimentConfig parse(std::istream& is) {
        ExperimentConfig cfg;
        std::string line;
        while (std::getline(is, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw ConfigError("config: expected key = value, got '" + line + "'");
                continue;
            }
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("config: empty key");
            if (cfg.kv.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
            cfg.kv[key] = val;
        }
        const auto it = cfg.kv.find("experiment");
        if (it == cfg.kv.end()) throw ConfigError("config: missing key 'experiment'");
        cfg.kind = it->second;
        cfg.kv.erase("experiment");
        return cfg;
    }

    std::string get(const std::string& key, std::optional<std::string> fallback = {}) const {
        const auto it = kv.find(key);
        if (it != kv.end()) return it->second;
        if (fallback) return *fallback;
        throw ConfigError("config: missing key '" + key + "'");
    }
    double get_double(const std::string& key, std::optional<double> fallback = {}) const {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            if (fallback) return *fallback;
            throw ConfigError("config: missing key '" + key + "'");
        }
        try {
            return std::stod(it->second);
        } catch (...) {
            throw ConfigError("config: key '" + key + "' is not a number: " + it->second);
        }
    }
    void require_known(const std::set<std::string>& known) const {
        for (const auto& [k, v] : kv) {
            (void)v;
            if (!known.count(k)) throw ConfigError("config: unknown key '" + k + "'");
        }
    }
};

inline double tolerance_override(double fallback) {
    if (const char* env = std::getenv("LHH_TOL")) {
        try {
            return std::stod(env);
        } catch (...) {
        }
    }
    return fallback;
}

struct ExperimentOutcome {
    bool pass = true;
    std::vector<std::string> artifacts;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ConfigError("expected a comma-separated list, got '" + s + "'");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

inline void summary_line(std::ostream& os, const std::string& experiment,
                         const std::string& claim, double measured, double tolerance,
                         bool pass) {
    os << "# summary: " << experiment << "," << claim << "," << measured << "," << tolerance
       << "," << (pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// region export (CSV lattice + optional SVG)
// ---------------------------------------------------------------------------

inline BoundednessRegion region_from_config(const ExperimentConfig& cfg) {
    const std::string type = cfg.get("type");
    if (type == "T3" || type == "T4") {
        const auto ends = detail::parse_int_list(cfg.get("ends"));
        return composite_region(ends, type == "T3" ? CompositeKind::T3 : CompositeKind::T4);
    }
    const Rational d1 = parse_rational(cfg.get("d1"));
    const Rational d2 = parse_rational(cfg.get("d2"));
    const Rational alpha = parse_rational(cfg.get("alpha"));
    const Rational beta = parse_rational(cfg.get("beta"));
    if (type == "D") return region_D(d1, d2, alpha, beta);
    if (type == "F") return region_F(d1, d2, alpha, beta);
    throw ConfigError("region: type must be D, F, T3 or T4");
}

inline void emit_region_csv(const BoundednessRegion& r, std::ostream& os, std::int64_t den = 60) {
    os.precision(17);
    os << "# region " << r.provenance << "\n";
    detail::summary_line(os, "region", "lattice-export", 0.0, 0.0, true);
    os << "u,v,inside\n";
    for (std::int64_t i = 0; i <= den; ++i) {
        for (std::int64_t j = 0; j <= den; ++j) {
            const RegionPoint p{Rational(i, den), Rational(j, den)};
            os << p.u.to_double() << "," << p.v.to_double() << ","
               << (contains(r, p) ? 1 : 0) << "\n";
        }
    }
}

inline void emit_region_svg(const BoundednessRegion& r, std::ostream& os) {
    const auto verts = vertex_set(r);
    const double W = 420.0, pad = 40.0, S = W - 2 * pad;
    auto X = [&](const Rational& u) { return pad + u.to_double() * S; };
    auto Y = [&](const Rational& v) { return W - pad - v.to_double() * S; };
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << W << "'>\n";
    os << "<rect x='" << pad << "' y='" << pad << "' width='" << S << "' height='" << S
       << "' fill='none' stroke='black'/>\n";
    if (verts.size() >= 3) {
        os << "<polygon points='";
        for (const auto& p : verts) os << X(p.u) << "," << Y(p.v) << " ";
        os << "' fill='lightsteelblue' fill-opacity='0.6' stroke='none'/>\n";
        for (std::size_t i = 0; i < verts.size(); ++i) {
            const auto& a = verts[i];
            const auto& b = verts[(i + 1) % verts.size()];
            const RegionPoint mid{(a.u + b.u) / Rational(2), (a.v + b.v) / Rational(2)};
            const bool closed_edge = contains(r, mid);
            os << "<line x1='" << X(a.u) << "' y1='" << Y(a.v) << "' x2='" << X(b.u) << "' y2='"
               << Y(b.v) << "' stroke='" << (closed_edge ? "steelblue" : "crimson")
               << "' stroke-width='2'" << (closed_edge ? "" : " stroke-dasharray='6,4'")
               << "/>\n";
        }
    }
    os << "<text x='" << pad << "' y='" << pad - 10 << "' font-size='13'>" << r.provenance
       << " (dashed edges excluded)</text>\n";
    os << "</svg>\n";
}

inline ExperimentOutcome run_region_experiment(const ExperimentConfig& cfg) {
    cfg.require_known({"type", "ends", "d1", "d2", "alpha", "beta", "out", "svg", "step"});
    const auto region = region_from_config(cfg);
    ExperimentOutcome out;
    const std::string path = cfg.get("out", std::string("region.csv"));
    std::ofstream os(path);
    if (!os) throw ConfigError("region: cannot open output file " + path);
    emit_region_csv(region, os, static_cast<std::int64_t>(cfg.get_double("step", 60)));
    out.artifacts.push_back(path);
    if (cfg.kv.count("svg")) {
        std::ofstream svg(cfg.get("svg"));
        if (!svg) throw ConfigError("region: cannot open svg file");
        emit_region_svg(region, svg);
        out.artifacts.push_back(cfg.get("svg"));
    }
    return out;
}

// ---------------------------------------------------------------------------
// divergence probe
// ---------------------------------------------------------------------------

inline CounterexampleSpec spec_from_config(const ExperimentConfig& cfg, double d1) {
    CounterexampleSpec spec;
    const std::string fam = cfg.get("family");
    if (fam == "lemma313a")
        spec.kind = CounterexampleSpec::Kind::lemma313a;
    else if (fam == "lemma313b")
        spec.kind = CounterexampleSpec::Kind::lemma313b;
    else if (fam == "prop44")
        spec.kind = CounterexampleSpec::Kind::prop44;
    else
        throw ConfigError("probe: family must be lemma313a, lemma313b or prop44");
    spec.p = cfg.get_double("p", 2.0);
    spec.beta = cfg.get_double("beta", spec.beta);
    spec.delta = cfg.get_double("delta", spec.delta);
    spec.cells_per_decade =
        static_cast<std::size_t>(cfg.get_double("cells_per_decade", 64));
    try {
        spec.validate(d1);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("probe: ") + e.what());
    }
    return spec;
}

inline ExperimentOutcome run_probe_experiment(const ExperimentConfig& cfg) {
    cfg.require_known({"family", "quantity", "p", "beta", "delta", "d1", "d2", "alpha",
                       "beta_k", "x", "q", "n_i", "T", "out", "cells_per_decade", "expect"});
    StudyConfig sc;
    const std::string quantity = cfg.get("quantity", std::string("pairing"));
    if (quantity == "pairing")
        sc.quantity = StudyConfig::Quantity::pairing;
    else if (quantity == "r1_point")
        sc.quantity = StudyConfig::Quantity::r1_point;
    else if (quantity == "r1_norm")
        sc.quantity = StudyConfig::Quantity::r1_norm;
    else
        throw ConfigError("probe: quantity must be pairing, r1_point or r1_norm");
    sc.d1 = cfg.get_double("d1", 3);
    sc.d2 = cfg.get_double("d2", 3);
    sc.alpha = cfg.get_double("alpha", 2);
    sc.beta = cfg.get_double("beta_k", 2);
    sc.x = cfg.get_double("x", 1.0);
    sc.q = cfg.get_double("q", 1.0);
    sc.n_i = static_cast<int>(cfg.get_double("n_i", 3));
    const double d1_for_family =
        (sc.quantity == StudyConfig::Quantity::pairing) ? sc.n_i : sc.d1;
    const CounterexampleSpec spec = spec_from_config(cfg, d1_for_family);
    const auto T_list = detail::parse_list(cfg.get("T", std::string("1e3,1e6,1e8")));
    const auto rows = divergence_study(sc, spec, T_list);

    const std::string expect = cfg.get("expect", std::string("growth"));
    bool pass = true;
    double measured = 0.0;
    const double tol = tolerance_override(0.05);
    if (expect == "growth") {
        for (std::size_t i = 1; i < rows.size(); ++i)
            pass = pass && rows[i].ratio > rows[i - 1].ratio;
        measured = rows.back().ratio / rows.front().ratio;
    } else if (expect == "plateau") {
        measured = std::fabs(rows.back().ratio - rows[rows.size() - 2].ratio) /
                   rows[rows.size() - 2].ratio;
        pass = measured <= tol;
    } else {
        throw ConfigError("probe: expect must be growth or plateau");
    }

    ExperimentOutcome out;
    out.pass = pass;
    const std::string path = cfg.get("out", std::string("probe.csv"));
    std::ofstream os(path);
    if (!os) throw ConfigError("probe: cannot open output file " + path);
    os.precision(17);
    os << "# probe family=" << cfg.get("family") << " quantity=" << quantity << "\n";
    detail::summary_line(os, "probe", cfg.get("family") + "-" + expect, measured, tol, pass);
    os << "T,input_norm,output,ratio\n";
    for (const auto& r : rows)
        os << r.T << "," << r.input_norm << "," << r.output << "," << r.ratio << "\n";
    out.artifacts.push_back(path);
    return out;
}

// ---------------------------------------------------------------------------
// endpoint ratio experiment
// ---------------------------------------------------------------------------

inline ExperimentOutcome run_endpoint_experiment(const ExperimentConfig& cfg) {
    cfg.require_known({"ends", "N", "p", "q", "op", "corpus", "k_max", "out", "source_end"});
    const auto ends = detail::parse_int_list(cfg.get("ends"));
    int N = static_cast<int>(cfg.get_double("N", 0));
    if (N == 0) N = *std::max_element(ends.begin(), ends.end()) + 2;
    EndsModel m(ends, N);
    const LorentzIndex idx(cfg.get_double("p", m.n_star()), cfg.get_double("q", 1.0));
    const std::string op = cfg.get("op", std::string("s"));
    const EndpointOperator eop =
        (op == "t3") ? EndpointOperator::t3_bound : EndpointOperator::s_bound;
    const auto corpus = standard_corpus(m, static_cast<int>(cfg.get_double("k_max", 10)));
    const auto src = static_cast<std::size_t>(cfg.get_double("source_end", 0));
    const auto coarse = endpoint_ratio(m, eop, corpus, idx, src, 64);
    const auto fine = endpoint_ratio(m, eop, corpus, idx, src, 128);
    const double tol = tolerance_override(0.05);
    const double drift = std::fabs(fine.sup_ratio - coarse.sup_ratio) / coarse.sup_ratio;
    ExperimentOutcome out;
    out.pass = std::isfinite(coarse.sup_ratio) && drift <= tol;

    const std::string path = cfg.get("out", std::string("endpoint.csv"));
    std::ofstream os(path);
    if (!os) throw ConfigError("endpoint: cannot open output file " + path);
    os.precision(17);
    os << "# endpoint op=" << op << "\n";
    detail::summary_line(os, "endpoint", "sup-ratio-refinement-drift", drift, tol, out.pass);
    os << "member,ratio_cpd64,ratio_cpd128\n";
    for (std::size_t i = 0; i < coarse.ratios.size(); ++i)
        os << i << "," << coarse.ratios[i] << "," << fine.ratios[i] << "\n";
    out.artifacts.push_back(path);
    return out;
}

// ---------------------------------------------------------------------------
// operator norm probe
// ---------------------------------------------------------------------------

inline HomogeneousKernel kernel_from_string(const std::string& s, double p, double d1,
                                            double d2) {
    // "hom:hilbert" -> 1/(x+y); "hom:addpow" -> (x+y)^{-n} with the degree
    // demanded by (p, d1, d2)
    const double n = d2 / p + d1 / conjugate_exponent(p);
    const auto cells = static_cast<std::size_t>(16 * 1024);
    if (s == "hom:hilbert") {
        if (std::fabs(n - 1.0) > 1e-12)
            throw ConfigError("hom:hilbert requires d2/p + d1/p' = 1");
        return HomogeneousKernel::sample(-1.0, LogGrid(1e-8, 1e8, cells),
                                         [](double t) { return 1.0 / (t + 1.0); }, 0.0, -1.0);
    }
    if (s == "hom:addpow") {
        return HomogeneousKernel::sample(-n, LogGrid(1e-8, 1e8, cells),
                                         [n](double t) { return std::pow(t + 1.0, -n); }, 0.0,
                                         -n);
    }
    throw ConfigError("unknown homogeneous kernel spec '" + s + "'");
}

inline PiecewisePowerKernel pp_kernel_from_string(const std::string& s) {
    // "pp:a=2,b=2,a2=3,b2=1"
    if (s.rfind("pp:", 0) != 0) throw ConfigError("piecewise kernel spec must start with pp:");
    std::map<std::string, double> vals;
    std::stringstream ss(s.substr(3));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError("bad kernel token '" + tok + "'");
        vals[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    }
    for (const char* k : {"a", "b", "a2", "b2"})
        if (!vals.count(k)) throw ConfigError(std::string("kernel spec missing ") + k);
    try {
        return PiecewisePowerKernel(vals["a"], vals["b"], vals["a2"], vals["b2"]);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("kernel spec invalid: ") + e.what());
    }
}

inline ExperimentOutcome run_norm_probe_experiment(const ExperimentConfig& cfg) {
    cfg.require_known({"kernel", "p", "d1", "d2", "eps", "T", "out"});
    const double p = cfg.get_double("p", 2.0);
    const double d1 = cfg.get_double("d1", 1.0), d2 = cfg.get_double("d2", 1.0);
    const auto K = kernel_from_string(cfg.get("kernel", std::string("hom:hilbert")), p, d1, d2);
    const auto eps = detail::parse_list(cfg.get("eps", std::string("0.5,0.1,0.02")));
    const auto [est, rows] = norm_probe(K, p, d1, d2, eps, cfg.get_double("T", 1e4));
    const double tol = tolerance_override(1e-9);
    ExperimentOutcome out;
    out.pass = est.empirical_lower <= est.analytic_upper * (1.0 + tol);
    const std::string path = cfg.get("out", std::string("norm_probe.csv"));
    std::ofstream os(path);
    if (!os) throw ConfigError("norm-probe: cannot open output file " + path);
    os.precision(17);
    os << "# norm-probe kernel=" << cfg.get("kernel", std::string("hom:hilbert"))
       << " analytic_upper=" << est.analytic_upper << " witness=" << est.witness << "\n";
    detail::summary_line(os, "norm-probe", "empirical<=analytic",
                         est.empirical_lower / est.analytic_upper, 1.0 + tol, out.pass);
    os << "eps,ratio\n";
    for (const auto& r : rows) os << r.eps << "," << r.ratio << "\n";
    out.artifacts.push_back(path);
    return out;
}

// ---------------------------------------------------------------------------
// resolvent grid export
// ---------------------------------------------------------------------------

inline ExperimentOutcome run_resolvent_experiment(const ExperimentConfig& cfg) {
    cfg.require_known({"ni", "N", "k", "c", "r_min", "r_max", "points", "out"});
    ResolventQuery q;
    q.n_i = static_cast<int>(cfg.get_double("ni", 3));
    q.N = static_cast<int>(cfg.get_double("N", 5));
    q.k = cfg.get_double("k", 0.1);
    q.c = cfg.get_double("c", 1.0);
    const double r_min = cfg.get_double("r_min", 0.01), r_max = cfg.get_double("r_max", 50.0);
    const auto npts = static_cast<std::size_t>(cfg.get_double("points", 100));
    const double tol = tolerance_override(1e-5);
    ExperimentOutcome out;
    const std::string path = cfg.get("out", std::string("resolvent.csv"));
    std::ofstream os(path);
    if (!os) throw ConfigError("resolvent: cannot open output file " + path);
    os.precision(17);
    double worst = 0.0;
    std::ostringstream body;
    body.precision(17);
    body << "r,closed_form,quadrature,rel_diff\n";
    for (std::size_t i = 0; i < npts; ++i) {
        q.r = r_min * std::pow(r_max / r_min, static_cast<double>(i) /
                                                  static_cast<double>(npts - 1));
        try {
            q.validate();
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("resolvent: ") + e.what());
        }
        const double closed = resolvent_bound_eval(q);
        const double quad = resolvent_bound_quadrature(q);
        const double rel = std::fabs(closed - quad) / closed;
        worst = std::max(worst, rel);
        body << q.r << "," << closed << "," << quad << "," << rel << "\n";
    }
    out.pass = worst <= tol;
    os << "# resolvent ni=" << q.n_i << " N=" << q.N << " k=" << q.k << "\n";
    detail::summary_line(os, "resolvent", "closed-vs-quadrature", worst, tol, out.pass);
    os << body.str();
    out.artifacts.push_back(path);
    return out;
}

inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind == "region") return run_region_experiment(cfg);
    if (cfg.kind == "probe") return run_probe_experiment(cfg);
    if (cfg.kind == "endpoint") return run_endpoint_experiment(cfg);
    if (cfg.kind == "norm-probe") return run_norm_probe_experiment(cfg);
    if (cfg.kind == "resolvent") return run_resolvent_experiment(cfg);
    throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
}

// ---------------------------------------------------------------------------
// report: aggregate summary lines from artifact files
// ---------------------------------------------------------------------------

struct ReportRow {
    std::string experiment, claim;
    double measured = 0.0, tolerance = 0.0;
    bool pass = true;
};

inline std::vector<ReportRow> collect_report(const std::vector<std::string>& files) {
    std::vector<ReportRow> rows;
    for (const auto& path : files) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("report: missing artifact " + path);
        std::string line;
        while (std::getline(is, line)) {
            const std::string tag = "# summary: ";
            if (line.rfind(tag, 0) != 0) continue;
            std::stringstream ss(line.substr(tag.size()));
            ReportRow row;
            std::string measured, tol, status;
            std::getline(ss, row.experiment, ',');
            std::getline(ss, row.claim, ',');
            std::getline(ss, measured, ',');
            std::getline(ss, tol, ',');
            std::getline(ss, status, ',');
            row.measured = std::stod(measured);
            row.tolerance = std::stod(tol);
            row.pass = (status == "PASS");
            rows.push_back(row);
        }
    }
    return rows;
}

inline bool emit_report(const std::vector<std::string>& files, std::ostream& os) {
    const auto rows = collect_report(files);
    os.precision(17);
    os << "experiment,claim,measured,tolerance,status\n";
    bool all_pass = true;
    for (const auto& r : rows) {
        os << r.experiment << "," << r.claim << "," << r.measured << "," << r.tolerance << ","
           << (r.pass ? "PASS" : "FAIL") << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass;
}

}  // namespace lhh
