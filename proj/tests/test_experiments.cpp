#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lhh/experiments.hpp"

using namespace lhh;

namespace {

ExperimentConfig parse_config(const std::string& text) {
    std::stringstream ss(text);
    return ExperimentConfig::parse(ss);
}

std::string temp_path(const std::string& name) {
    return std::string("lhh_test_") + name;
}

}  // namespace

TEST_CASE("config parsing is strict") {
    REQUIRE_THROWS_AS(parse_config("type = D\n"), ConfigError);         // missing experiment
    REQUIRE_THROWS_AS(parse_config("experiment = region\nbogus\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config("experiment = region\na=1\na=2\n"), ConfigError);
    const auto cfg = parse_config("experiment = region\ntype = D\n# comment\nd1 = 3\n");
    REQUIRE(cfg.kind == "region");
    REQUIRE(cfg.get("type") == "D");
    REQUIRE(cfg.get_double("d1") == 3.0);
    REQUIRE_THROWS_AS(cfg.get("missing"), ConfigError);
    REQUIRE_THROWS_AS(cfg.require_known({"type"}), ConfigError);
}

TEST_CASE("region experiment writes the lattice CSV with the contract header") {
    const std::string path = temp_path("region.csv");
    auto cfg = parse_config("experiment = region\ntype = D\nd1 = 3\nd2 = 3\nalpha = 2\n"
                            "beta = 2\nout = " +
                            path + "\n");
    const auto outcome = run_experiment(cfg);
    REQUIRE(outcome.pass);
    std::ifstream is(path);
    REQUIRE(is.good());
    std::string line;
    bool saw_header = false;
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line == "u,v,inside") saw_header = true;
        if (saw_header && line.find(',') != std::string::npos && line[0] != '#' &&
            line != "u,v,inside")
            ++rows;
    }
    REQUIRE(saw_header);
    REQUIRE(rows == 61 * 61);
    std::remove(path.c_str());
}

TEST_CASE("region experiment emits SVG with dashed open boundaries") {
    const std::string path = temp_path("region2.csv");
    const std::string svg = temp_path("region.svg");
    auto cfg = parse_config("experiment = region\ntype = T3\nends = 3,3\nout = " + path +
                            "\nsvg = " + svg + "\n");
    const auto outcome = run_experiment(cfg);
    REQUIRE(outcome.artifacts.size() == 2);
    std::ifstream is(svg);
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string body = buf.str();
    REQUIRE(body.find("<polygon") != std::string::npos);
    REQUIRE(body.find("stroke-dasharray") != std::string::npos);  // open edges present
    std::remove(path.c_str());
    std::remove(svg.c_str());
}

TEST_CASE("malformed config fails with a message naming the constraint") {
    // beta > d1 violates the lemma313a family hypothesis
    auto cfg = parse_config(
        "experiment = probe\nfamily = lemma313a\nquantity = r1_point\nd1 = 3\nbeta = 4\n");
    try {
        run_experiment(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(std::string(e.what()).find("beta") != std::string::npos);
    }
    auto cfg2 = parse_config("experiment = probe\nfamily = prop44\nmystery = 1\n");
    REQUIRE_THROWS_AS(run_experiment(cfg2), ConfigError);
}

TEST_CASE("prop44 probe writes a monotone ratio column and passes") {
    const std::string path = temp_path("prop44.csv");
    auto cfg = parse_config(
        "experiment = probe\nfamily = prop44\nquantity = pairing\np = 2\nbeta = 0.6\n"
        "n_i = 3\nT = 1e3,1e6,1e8\nexpect = growth\nout = " +
        path + "\n");
    const auto outcome = run_experiment(cfg);
    REQUIRE(outcome.pass);
    std::ifstream is(path);
    std::string line;
    std::vector<double> ratios;
    bool in_body = false;
    while (std::getline(is, line)) {
        if (line == "T,input_norm,output,ratio") {
            in_body = true;
            continue;
        }
        if (!in_body || line.empty() || line[0] == '#') continue;
        const auto last_comma = line.rfind(',');
        ratios.push_back(std::stod(line.substr(last_comma + 1)));
    }
    REQUIRE(ratios.size() == 3);
    REQUIRE(ratios[0] < ratios[1]);
    REQUIRE(ratios[1] < ratios[2]);
    std::remove(path.c_str());
}

TEST_CASE("report aggregates summary lines and propagates failure") {
    const std::string a = temp_path("a.csv"), b = temp_path("b.csv");
    {
        std::ofstream os(a);
        os << "# summary: probe,claim-one,1.5,2.0,PASS\n1,2\n";
    }
    {
        std::ofstream os(b);
        os << "# summary: endpoint,claim-two,0.9,0.05,FAIL\n3,4\n";
    }
    std::stringstream out;
    const bool ok = emit_report({a, b}, out);
    REQUIRE_FALSE(ok);
    const std::string body = out.str();
    REQUIRE(body.find("claim-one") != std::string::npos);
    REQUIRE(body.find("FAIL") != std::string::npos);
    // empty list: header only
    std::stringstream empty_out;
    REQUIRE(emit_report({}, empty_out));
    REQUIRE(empty_out.str() == "experiment,claim,measured,tolerance,status\n");
    REQUIRE_THROWS(collect_report({"no_such_file.csv"}));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("reproducibility: identical config gives byte-identical artifacts") {
    const std::string p1 = temp_path("rep1.csv"), p2 = temp_path("rep2.csv");
    for (const auto& p : {p1, p2}) {
        auto cfg = parse_config("experiment = region\ntype = F\nd1 = 3\nd2 = 3\nalpha = 3\n"
                                "beta = 1\nout = " +
                                p + "\n");
        run_experiment(cfg);
    }
    std::ifstream f1(p1), f2(p2);
    std::stringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    REQUIRE(b1.str() == b2.str());
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("LHH_TOL overrides experiment tolerances") {
    REQUIRE(tolerance_override(0.05) == 0.05);
    setenv("LHH_TOL", "0.125", 1);
    REQUIRE(tolerance_override(0.05) == 0.125);
    unsetenv("LHH_TOL");
    REQUIRE(tolerance_override(0.05) == 0.05);
}

TEST_CASE("kernel spec parsing") {
    const auto K = pp_kernel_from_string("pp:a=2,b=2,a2=3,b2=1");
    REQUIRE(K.alpha == 2.0);
    REQUIRE(K.betap == 1.0);
    REQUIRE_THROWS_AS(pp_kernel_from_string("pp:a=2,b=2,a2=3"), ConfigError);
    REQUIRE_THROWS_AS(pp_kernel_from_string("pp:a=2,b=2,a2=3,b2=9"), ConfigError);
    REQUIRE_THROWS_AS(kernel_from_string("hom:unknown", 2, 1, 1), ConfigError);
    REQUIRE_THROWS_AS(kernel_from_string("hom:hilbert", 2, 1, 3), ConfigError);
}
