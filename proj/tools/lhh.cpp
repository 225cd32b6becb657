// lhh: Lorentz norms, Hardy-Hilbert operators, boundedness regions and the
// manifold-with-ends divergence experiments, from the command line.
//
// Exit codes: 0 all assertions hold, 1 an asserted inequality failed,
// 2 configuration or usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "lhh/ends.hpp"
#include "lhh/experiments.hpp"
#include "lhh/kernels.hpp"
#include "lhh/lorentz.hpp"
#include "lhh/regions.hpp"
#include "lhh/special.hpp"

namespace {

lhh::PowerMeasure parse_measure(const std::string& s) {
    // "d=3,lo=1"
    double d = 1.0, lo = 1.0;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw lhh::ConfigError("measure: bad token '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const double val = std::stod(tok.substr(eq + 1));
        if (key == "d")
            d = val;
        else if (key == "lo")
            lo = val;
        else
            throw lhh::ConfigError("measure: unknown key '" + key + "'");
    }
    return lhh::PowerMeasure(d, lo);
}

double parse_exponent(const std::string& s) {
    if (s == "inf" || s == "infinity") return lhh::kInf;
    return std::stod(s);
}

lhh::GridFunction load_function(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw lhh::ConfigError("cannot open function file " + path);
    return lhh::read_csv(is);
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw lhh::ConfigError("cannot open output file " + path);
    return file;
}

void print_value(double v) {
    if (std::isinf(v)) {
        std::cout << "inf\n";
    } else {
        std::cout.precision(17);
        std::cout << v << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lorentz-space and Hardy-Hilbert-type operator toolkit"};
    app.require_subcommand(1);

    std::string func_path, measure_str = "d=1,lo=1", p_str = "2", q_str = "2", out_path;

    // lorentz-norm
    auto* norm_cmd = app.add_subcommand("lorentz-norm", "Lorentz quasi-norm of a grid function");
    norm_cmd->add_option("--func", func_path, "function CSV")->required();
    norm_cmd->add_option("--measure", measure_str, "measure, e.g. d=3,lo=1");
    norm_cmd->add_option("--p", p_str, "primary exponent");
    norm_cmd->add_option("--q", q_str, "secondary exponent (or inf)");

    // rearrange
    auto* rearr_cmd = app.add_subcommand("rearrange", "decreasing rearrangement as CSV");
    rearr_cmd->add_option("--func", func_path, "function CSV")->required();
    rearr_cmd->add_option("--measure", measure_str, "measure, e.g. d=3,lo=1");
    rearr_cmd->add_option("--out", out_path, "output path (default stdout)");

    // op apply / op norm-probe
    auto* op_cmd = app.add_subcommand("op", "kernel operators");
    std::string kernel_str = "pp:a=2,b=2,a2=3,b2=1", part_str = "r1", eps_str = "0.1,0.01";
    double op_d1 = 3.0, op_d2 = 3.0, op_p = 2.0, op_T = 1e4;
    auto* apply_cmd = op_cmd->add_subcommand("apply", "apply a kernel operator");
    apply_cmd->add_option("--kernel", kernel_str, "pp:a=..,b=..,a2=..,b2=.. or hom:hilbert");
    apply_cmd->add_option("--d1", op_d1, "source dimension");
    apply_cmd->add_option("--d2", op_d2, "target dimension");
    apply_cmd->add_option("--p", op_p, "exponent pinning a homogeneous kernel degree");
    apply_cmd->add_option("--part", part_str, "r1 | r2 | full (piecewise kernels)");
    apply_cmd->add_option("--func", func_path, "function CSV")->required();
    apply_cmd->add_option("--out", out_path, "output path (default stdout)");
    auto* probe_cmd = op_cmd->add_subcommand("norm-probe", "extremal-family norm probe");
    probe_cmd->add_option("--kernel", kernel_str, "hom:hilbert or hom:addpow");
    probe_cmd->add_option("--p", op_p, "exponent");
    probe_cmd->add_option("--d1", op_d1, "source dimension");
    probe_cmd->add_option("--d2", op_d2, "target dimension");
    std::string family_str = "extremal";
    probe_cmd->add_option("--family", family_str, "test family (extremal)");
    probe_cmd->add_option("--eps-list", eps_str, "comma list of eps values");
    probe_cmd->add_option("--T", op_T, "truncation");
    probe_cmd->add_option("--out", out_path, "output path (default stdout)");

    // region
    auto* region_cmd = app.add_subcommand("region", "exact (1/p,1/q) boundedness regions");
    std::string rtype = "D", ends_str = "3,3", emit_str = "csv";
    std::string rd1 = "3", rd2 = "3", ralpha = "2", rbeta = "2";
    region_cmd->add_option("--type", rtype, "D | F | T3 | T4");
    region_cmd->add_option("--d1", rd1, "rational d1");
    region_cmd->add_option("--d2", rd2, "rational d2");
    region_cmd->add_option("--alpha", ralpha, "rational alpha");
    region_cmd->add_option("--beta", rbeta, "rational beta");
    region_cmd->add_option("--ends", ends_str, "end dimensions for T3/T4");
    region_cmd->add_option("--emit", emit_str, "csv | svg | vertices");
    region_cmd->add_option("--out", out_path, "output path (default stdout)");

    // special
    auto* special_cmd = app.add_subcommand("special", "Bessel and resolvent kernels");
    double nu = 0.5, sr = 1.0, sk = 0.1, sc = 1.0;
    int sni = 3, sN = 5;
    std::string rgrid_str = "0.01:50:100";
    auto* bessel_cmd = special_cmd->add_subcommand("bessel", "modified Bessel K");
    bessel_cmd->add_option("--nu", nu, "order");
    bessel_cmd->add_option("--r", sr, "argument");
    auto* resolvent_cmd = special_cmd->add_subcommand("resolvent", "resolvent kernel bound");
    resolvent_cmd->add_option("--ni", sni, "end dimension");
    resolvent_cmd->add_option("--N", sN, "topological dimension");
    resolvent_cmd->add_option("--k", sk, "spectral parameter");
    resolvent_cmd->add_option("--c", sc, "envelope rate");
    resolvent_cmd->add_option("--r-grid", rgrid_str, "r_min:r_max:points");
    resolvent_cmd->add_option("--emit", emit_str, "csv");
    resolvent_cmd->add_option("--out", out_path, "output path (default resolvent.csv)");

    // ends
    auto* ends_cmd = app.add_subcommand("ends", "manifold-with-ends experiments");
    std::string ends_op = "t3", exp_str = "prop44", T_str = "1e3,1e6,1e8", idx_str = "3,1";
    std::string corpus_str = "standard";
    double ep = 2.0, ebeta = 0.6, edelta = 1.0;
    auto* eprobe_cmd = ends_cmd->add_subcommand("probe", "divergence/plateau study");
    eprobe_cmd->add_option("--ends", ends_str, "end dimensions");
    eprobe_cmd->add_option("--op", ends_op, "t3 (pairing), r1-point, r1-norm");
    eprobe_cmd->add_option("--experiment", exp_str, "lemma313a | lemma313b | prop44");
    eprobe_cmd->add_option("--p", ep, "input exponent");
    eprobe_cmd->add_option("--beta", ebeta, "family beta");
    eprobe_cmd->add_option("--delta", edelta, "family delta");
    eprobe_cmd->add_option("--q", q_str, "output norm exponent for r1-norm");
    eprobe_cmd->add_option("--T", T_str, "truncation ladder");
    eprobe_cmd->add_option("--emit", emit_str, "csv");
    eprobe_cmd->add_option("--out", out_path, "output path (default stdout)");
    auto* eend_cmd = ends_cmd->add_subcommand("endpoint", "endpoint ratio over a corpus");
    eend_cmd->add_option("--ends", ends_str, "end dimensions");
    eend_cmd->add_option("--idx", idx_str, "Lorentz index p,q");
    eend_cmd->add_option("--corpus", corpus_str, "standard");
    eend_cmd->add_option("--op", ends_op, "s | t3");
    eend_cmd->add_option("--out", out_path, "output path (default stdout)");

    // run + report
    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "key=value config file")->required();
    auto* report_cmd = app.add_subcommand("report", "summarize experiment artifacts");
    std::vector<std::string> artifact_paths;
    report_cmd->add_option("files", artifact_paths, "artifact CSV files");
    report_cmd->add_option("--out", out_path, "summary path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (norm_cmd->parsed()) {
            const auto f = load_function(func_path);
            const auto mu = parse_measure(measure_str);
            const lhh::LorentzIndex idx(parse_exponent(p_str), parse_exponent(q_str));
            print_value(lhh::lorentz_norm(f, mu, idx));
            return 0;
        }
        if (rearr_cmd->parsed()) {
            const auto f = load_function(func_path);
            const auto mu = parse_measure(measure_str);
            const auto r = lhh::decreasing_rearrangement(f, mu);
            std::ofstream file;
            auto& os = open_out(file, out_path);
            os.precision(17);
            os << "# rearranged steps=" << r.step_values().size()
               << (r.has_pieces() ? " (plus analytic tail pieces)" : "") << "\n";
            os << "t_start,value\n";
            double t_prev = 0.0;
            for (std::size_t j = 0; j < r.step_values().size(); ++j) {
                os << t_prev << "," << r.step_values()[j] << "\n";
                t_prev = r.step_breakpoints()[j];
            }
            os << t_prev << "," << 0.0 << "\n";
            return 0;
        }
        if (apply_cmd->parsed()) {
            const auto f = load_function(func_path);
            std::ofstream file;
            auto& os = open_out(file, out_path);
            if (kernel_str.rfind("pp:", 0) == 0) {
                const auto K = lhh::pp_kernel_from_string(kernel_str);
                const lhh::KernelPart part = part_str == "r1"   ? lhh::KernelPart::R1
                                             : part_str == "r2" ? lhh::KernelPart::R2
                                                                : lhh::KernelPart::full;
                lhh::LogGrid out_grid(1.0, 8.0 * f.grid.x_max(),
                                      static_cast<std::size_t>(
                                          64 * std::log10(8.0 * f.grid.x_max())));
                lhh::write_csv(lhh::piecewise_apply(K, f, op_d1, part, out_grid), os);
            } else {
                const auto K = lhh::kernel_from_string(kernel_str, op_p, op_d1, op_d2);
                lhh::LogGrid out_grid(f.grid.x_min() / 8.0, 8.0 * f.grid.x_max(),
                                      static_cast<std::size_t>(
                                          64 * std::log10(64.0 * f.grid.x_max() /
                                                          f.grid.x_min())));
                lhh::write_csv(lhh::hh_apply(K, f, op_d1, out_grid), os);
            }
            return 0;
        }
        if (probe_cmd->parsed()) {
            if (family_str != "extremal")
                throw lhh::ConfigError("norm-probe: only the extremal family is available");
            const auto K = lhh::kernel_from_string(kernel_str, op_p, op_d1, op_d2);
            const auto eps = lhh::detail::parse_list(eps_str);
            const auto [est, rows] = lhh::norm_probe(K, op_p, op_d1, op_d2, eps, op_T);
            std::ofstream file;
            auto& os = open_out(file, out_path);
            os.precision(17);
            os << "# norm-probe analytic_upper=" << est.analytic_upper
               << " empirical_lower=" << est.empirical_lower << " witness=" << est.witness
               << "\n";
            os << "eps,ratio\n";
            for (const auto& row : rows) os << row.eps << "," << row.ratio << "\n";
            return est.empirical_lower <= est.analytic_upper * (1.0 + 1e-9) ? 0 : 1;
        }
        if (region_cmd->parsed()) {
            lhh::ExperimentConfig cfg;
            cfg.kind = "region";
            cfg.kv["type"] = rtype;
            if (rtype == "T3" || rtype == "T4") {
                cfg.kv["ends"] = ends_str;
            } else {
                cfg.kv["d1"] = rd1;
                cfg.kv["d2"] = rd2;
                cfg.kv["alpha"] = ralpha;
                cfg.kv["beta"] = rbeta;
            }
            const auto region = lhh::region_from_config(cfg);
            std::ofstream file;
            auto& os = open_out(file, out_path);
            if (emit_str == "svg") {
                lhh::emit_region_svg(region, os);
            } else if (emit_str == "vertices") {
                for (const auto& v : lhh::vertex_set(region))
                    os << "(" << v.u.str() << ", " << v.v.str() << ")\n";
            } else {
                lhh::emit_region_csv(region, os);
            }
            return 0;
        }
        if (bessel_cmd->parsed()) {
            print_value(lhh::bessel_K(nu, sr));
            return 0;
        }
        if (resolvent_cmd->parsed()) {
            lhh::ExperimentConfig cfg;
            cfg.kind = "resolvent";
            cfg.kv["ni"] = std::to_string(sni);
            cfg.kv["N"] = std::to_string(sN);
            cfg.kv["k"] = std::to_string(sk);
            cfg.kv["c"] = std::to_string(sc);
            std::stringstream ss(rgrid_str);
            std::string a, b, c;
            std::getline(ss, a, ':');
            std::getline(ss, b, ':');
            std::getline(ss, c, ':');
            cfg.kv["r_min"] = a;
            cfg.kv["r_max"] = b;
            cfg.kv["points"] = c;
            cfg.kv["out"] = out_path.empty() ? "resolvent.csv" : out_path;
            const auto outcome = lhh::run_experiment(cfg);
            std::cout << "wrote " << outcome.artifacts.front() << "\n";
            return outcome.pass ? 0 : 1;
        }
        if (eprobe_cmd->parsed()) {
            lhh::ExperimentConfig cfg;
            cfg.kind = "probe";
            cfg.kv["family"] = exp_str;
            cfg.kv["quantity"] = (ends_op == "r1-point")  ? "r1_point"
                                 : (ends_op == "r1-norm") ? "r1_norm"
                                                          : "pairing";
            cfg.kv["p"] = std::to_string(ep);
            cfg.kv["beta"] = std::to_string(ebeta);
            cfg.kv["delta"] = std::to_string(edelta);
            cfg.kv["q"] = q_str;
            cfg.kv["T"] = T_str;
            const auto ends = lhh::detail::parse_int_list(ends_str);
            cfg.kv["n_i"] = std::to_string(ends.front());
            cfg.kv["expect"] = (exp_str == "lemma313b") ? "plateau" : "growth";
            cfg.kv["out"] = out_path.empty() ? "probe.csv" : out_path;
            const auto outcome = lhh::run_experiment(cfg);
            std::cout << "wrote " << outcome.artifacts.front() << "\n";
            return outcome.pass ? 0 : 1;
        }
        if (eend_cmd->parsed()) {
            if (corpus_str != "standard")
                throw lhh::ConfigError("endpoint: only the standard corpus is available");
            lhh::ExperimentConfig cfg;
            cfg.kind = "endpoint";
            cfg.kv["ends"] = ends_str;
            const auto idx = lhh::detail::parse_list(idx_str);
            if (idx.size() != 2) throw lhh::ConfigError("endpoint: --idx expects p,q");
            cfg.kv["p"] = std::to_string(idx[0]);
            cfg.kv["q"] = std::to_string(idx[1]);
            cfg.kv["op"] = ends_op == "t3" ? "t3" : "s";
            cfg.kv["out"] = out_path.empty() ? "endpoint.csv" : out_path;
            const auto outcome = lhh::run_experiment(cfg);
            std::cout << "wrote " << outcome.artifacts.front() << "\n";
            return outcome.pass ? 0 : 1;
        }
        if (run_cmd->parsed()) {
            std::ifstream is(config_path);
            if (!is) throw lhh::ConfigError("cannot open config " + config_path);
            const auto cfg = lhh::ExperimentConfig::parse(is);
            const auto outcome = lhh::run_experiment(cfg);
            for (const auto& a : outcome.artifacts) std::cout << "wrote " << a << "\n";
            if (!outcome.pass) std::cerr << "assertion failed; see artifact summary lines\n";
            return outcome.pass ? 0 : 1;
        }
        if (report_cmd->parsed()) {
            std::ofstream file;
            auto& os = open_out(file, out_path);
            return lhh::emit_report(artifact_paths, os) ? 0 : 1;
        }
    } catch (const lhh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lhh::DivergenceError& e) {
        std::cerr << "divergent: " << e.what() << " (sign " << e.sign << ")\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
