#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rantor/runner.hpp"

using namespace rantor;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("rantor_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* kBaseConfig = R"({
  "version": 1,
  "matrices": [[[2, 1], [1, 1]], [[1, 1], [1, 2]]],
  "probs": [0.5, 0.5],
  "cones": "auto",
  "beta": 1.0,
  "observables": {
    "f": {"depth": 0, "modes": [{"q": [-2, 3], "re": 1.0}]},
    "g": {"depth": 0, "modes": [{"q": [1, 0], "re": 1.0}]}
  },
  "n_max": 12,
  "omega_samples": 6,
  "sweep_radius": 12,
  "seed": 321,
  "spectrum": {"steps": 1500, "trials": 8},
  "lemma2": {"eps_factors": [0.05], "samples": 3, "radius": 10},
  "product_length": 8
})";

}  // namespace

TEST_CASE("config parsing reports field paths") {
    CHECK_THROWS_WITH_AS(parse_config_string("{"), doctest::Contains("JSON parse failure"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_config_string("{\"version\": 2}"),
                         doctest::Contains("/version"), Error);
    CHECK_THROWS_WITH_AS(
        parse_config_string("{\"version\": 1, \"matrices\": [[[1,1],[0,1]]]}"),
        doctest::Contains("/matrices"), Error);

    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["probs"] = {0.5, 0.6};
    CHECK_THROWS_WITH_AS(parse_config_string(j.dump()), doctest::Contains("/probs"), Error);

    j = nlohmann::json::parse(kBaseConfig);
    j["observables"]["f"]["modes"][0]["q"] = {1};
    CHECK_THROWS_WITH_AS(parse_config_string(j.dump()),
                         doctest::Contains("/observables/f/modes/0/q"), Error);
}

TEST_CASE("build_family surfaces validation failures as config errors") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["matrices"][0] = {{1, 1}, {0, 1}};
    RunConfig cfg = parse_config_string(j.dump());
    CHECK_THROWS_WITH_AS(build_family(cfg), doctest::Contains("NotHyperbolic"), Error);
}

TEST_CASE("analyze writes the certified constants") {
    RunConfig cfg = parse_config_string(kBaseConfig);
    fs::path out = fresh_dir("analyze");
    RunOutcome rc = run_analyze(cfg, out.string());
    CHECK(rc.exit_code == kExitOk);

    nlohmann::json j = nlohmann::json::parse(slurp(out / "analyze.json"));
    CHECK(j["constants"]["lambdaE_sq"] == "2");
    CHECK(j["constants"]["lambdaC_inv_sq"] == "2");
    CHECK(j["constants"]["lambda_sq"] == "1/2");
    CHECK(j["constants"]["M"] == 0);
    CHECK(j["constants"]["C_const"] == 1.0);
    CHECK(j["constants"]["K"] == "unbounded");
    CHECK(j["theorem2"]["pass"] == true);
    double chi = j["spectrum"]["chi"];
    CHECK(chi >= 0.3466);
    CHECK(chi <= 0.9625);
}

TEST_CASE("invalid matrices exit 1; impossible auto cones exit 3") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["matrices"][0] = {{1, 1}, {0, 1}};
    RunConfig shear = parse_config_string(j.dump());
    fs::path out = fresh_dir("exit1");
    RunOutcome rc = run_analyze(shear, out.string());
    CHECK(rc.exit_code == kExitConfig);
    CHECK(rc.message.find("NotHyperbolic") != std::string::npos);

    j = nlohmann::json::parse(kBaseConfig);
    j["matrices"][1] = {{1, -1}, {-1, 2}};  // A^-1: mixed signs, no quadrant shortcut
    RunConfig inv = parse_config_string(j.dump());
    out = fresh_dir("exit3");
    rc = run_analyze(inv, out.string());
    CHECK(rc.exit_code == kExitConeFailure);
}

TEST_CASE("explicit cones flow through analyze") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["cones"] = {{"expansion", {{1, 0}, {0, 1}}}, {"contraction", {{2, -1}, {1, -2}}}};
    RunConfig cfg = parse_config_string(j.dump());
    fs::path out = fresh_dir("explicit");
    RunOutcome rc = run_analyze(cfg, out.string());
    CHECK(rc.exit_code == kExitOk);
    nlohmann::json a = nlohmann::json::parse(slurp(out / "analyze.json"));
    CHECK(a["constants"]["M"] == 1);
    CHECK(a["constants"]["lambdaC_inv_sq"] == "5");
    CHECK(a["constants"]["K"] != "unbounded");
}

TEST_CASE("correlate emits the single-mode series with its envelope") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["words"] = nlohmann::json::array();
    std::vector<int> all_a(14, 0);
    j["words"].push_back(all_a);
    RunConfig cfg = parse_config_string(j.dump());
    fs::path out = fresh_dir("correlate");
    RunOutcome rc = run_correlate(cfg, out.string());
    CHECK(rc.exit_code == kExitOk);

    std::string csv = slurp(out / "correlations.csv");
    CHECK(csv.find("omega_id,n,re,im,abs,envelope,envelope_lyapunov,quadrature_re,quadrature_im\n") == 0);
    CHECK(csv.find("\r") == std::string::npos);  // LF endings
    CHECK(csv.find("0,2,1,0,1,5.4083269131959844") != std::string::npos);

    nlohmann::json s = nlohmann::json::parse(slurp(out / "correlate.json"));
    CHECK(s["envelopeViolations"] == 0);
    CHECK(s["maxAbs"] == 1.0);
}

TEST_CASE("point-mass sampling and the explicit word agree byte for byte") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["probs"] = {1.0, 0.0};
    j["omega_samples"] = 3;
    RunConfig sampled = parse_config_string(j.dump());
    fs::path out1 = fresh_dir("pmass1");
    CHECK(run_correlate(sampled, out1.string()).exit_code == kExitOk);

    j["words"] = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) j["words"].push_back(std::vector<int>(14, 0));
    RunConfig explicit_cfg = parse_config_string(j.dump());
    fs::path out2 = fresh_dir("pmass2");
    CHECK(run_correlate(explicit_cfg, out2.string()).exit_code == kExitOk);

    CHECK(slurp(out1 / "correlations.csv") == slurp(out2 / "correlations.csv"));
}

TEST_CASE("reruns with one seed are byte-identical; different seeds differ") {
    RunConfig cfg = parse_config_string(kBaseConfig);
    fs::path out1 = fresh_dir("seed1");
    fs::path out2 = fresh_dir("seed2");
    fs::path out3 = fresh_dir("seed3");
    CHECK(run_correlate(cfg, out1.string()).exit_code == kExitOk);
    CHECK(run_correlate(cfg, out2.string()).exit_code == kExitOk);
    CHECK(slurp(out1 / "correlations.csv") == slurp(out2 / "correlations.csv"));
    CHECK(slurp(out1 / "correlate.json") == slurp(out2 / "correlate.json"));

    cfg.seed = 999;
    CHECK(run_correlate(cfg, out3.string()).exit_code == kExitOk);
    CHECK(slurp(out1 / "correlations.csv") != slurp(out3 / "correlations.csv"));
}

TEST_CASE("verify passes cleanly and the corrupted self-test exits 2") {
    RunConfig cfg = parse_config_string(kBaseConfig);
    fs::path out = fresh_dir("verify");
    RunOutcome rc = run_verify(cfg, out.string());
    CHECK(rc.exit_code == kExitOk);
    nlohmann::json j = nlohmann::json::parse(slurp(out / "verify.json"));
    CHECK(j["pass"] == true);
    CHECK(j["lemma1"]["violations"] == 0);
    CHECK(j["tildeRatesMatch"] == true);
    CHECK(j["lemma2"][0]["value"] > 0.0);
    CHECK(slurp(out / "violations.csv") == "source,omega_id,q,n,bound,detail\n");

    cfg.self_test_corrupt = true;
    fs::path outc = fresh_dir("verifyc");
    RunOutcome rcc = run_verify(cfg, outc.string());
    CHECK(rcc.exit_code == kExitViolation);
    nlohmann::json jc = nlohmann::json::parse(slurp(outc / "verify.json"));
    CHECK(jc["lemma1"]["violations"] > 0);
}

TEST_CASE("dense observable pairs get per-word decay fits") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["observables"]["f"]["modes"] = nlohmann::json::array();
    j["observables"]["g"]["modes"] = nlohmann::json::array();
    for (int qx = -2; qx <= 2; ++qx) {
        for (int qy = -2; qy <= 2; ++qy) {
            double w = 1.0 / (1 + std::abs(qx) + std::abs(qy));
            j["observables"]["f"]["modes"].push_back({{"q", {qx, qy}}, {"re", w}});
            j["observables"]["g"]["modes"].push_back({{"q", {qx, qy}}, {"re", 0.5 * w}});
        }
    }
    RunConfig cfg = parse_config_string(j.dump());
    fs::path out = fresh_dir("fits");
    REQUIRE(run_correlate(cfg, out.string()).exit_code == kExitOk);
    nlohmann::json s = nlohmann::json::parse(slurp(out / "correlate.json"));
    REQUIRE(!s["decayFits"].empty());
    for (const auto& fit : s["decayFits"]) {
        CHECK(fit["rate"].get<double>() < 0.0);  // decaying
        CHECK(fit["usable"].get<int>() >= 2);
    }
}

TEST_CASE("diophantine run writes both the tail and global minima") {
    RunConfig cfg = parse_config_string(kBaseConfig);
    fs::path out = fresh_dir("dio");
    CHECK(run_diophantine(cfg, out.string()).exit_code == kExitOk);
    nlohmann::json j = nlohmann::json::parse(slurp(out / "diophantine.json"));
    double v = j["value"];
    CHECK(v >= 0.44);
    CHECK(v <= 0.45);
    double g = j["valueGlobal"];
    CHECK(g == doctest::Approx(0.3819660112501051).epsilon(1e-9));
}

TEST_CASE("entrywise-negative families use the same quadrant shortcut") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["matrices"] = {{{-2, -1}, {-1, -1}}, {{-1, -1}, {-1, -2}}};
    RunConfig cfg = parse_config_string(j.dump());
    fs::path out = fresh_dir("negative");
    CHECK(run_analyze(cfg, out.string()).exit_code == kExitOk);
    nlohmann::json a = nlohmann::json::parse(slurp(out / "analyze.json"));
    CHECK(a["constants"]["lambdaE_sq"] == "2");
}

TEST_CASE("three-member families run end to end") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["matrices"] = {{{2, 1}, {1, 1}}, {{1, 1}, {1, 2}}, {{3, 2}, {1, 1}}};
    j["probs"] = {0.3, 0.3, 0.4};
    j["product_length"] = 6;
    RunConfig cfg = parse_config_string(j.dump());
    fs::path out = fresh_dir("triple");
    CHECK(run_analyze(cfg, out.string()).exit_code == kExitOk);
    CHECK(run_verify(cfg, out.string()).exit_code == kExitOk);
    nlohmann::json v = nlohmann::json::parse(slurp(out / "verify.json"));
    CHECK(v["productHyperbolicity"]["checks"] == 729);  // 3^6 words
    CHECK(run_correlate(cfg, out.string()).exit_code == kExitOk);
}

TEST_CASE("cylinder-dependent observables flow through the config") {
    nlohmann::json j = nlohmann::json::parse(kBaseConfig);
    j["observables"]["f"] = {{"depth", 1},
                             {"modes",
                              {{{"q", {-2, 3}}, {"re", 1.0}, {"config", {0}}},
                               {{"q", {-2, 3}}, {"re", 2.0}, {"config", {1}}}}}};
    j["words"] = nlohmann::json::array();
    j["words"].push_back(std::vector<int>(15, 0));
    RunConfig cfg = parse_config_string(j.dump());
    fs::path out = fresh_dir("cylinder");
    CHECK(run_correlate(cfg, out.string()).exit_code == kExitOk);
    // the all-A word reads configuration 0, so the n = 2 hit keeps weight 1
    std::string csv = slurp(out / "correlations.csv");
    CHECK(csv.find("0,2,1,0,1,") != std::string::npos);

    // a config list longer than the depth is rejected with its path
    j["observables"]["f"]["modes"][0]["config"] = {0, 1};
    CHECK_THROWS_WITH_AS(parse_config_string(j.dump()),
                         doctest::Contains("/observables/f/modes/0/config"), Error);
}

TEST_CASE("fmt17 renders round-trippable decimals") {
    CHECK(fmt17(1.0) == "1");
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(5.4083269131959844) == "5.4083269131959844");
}
