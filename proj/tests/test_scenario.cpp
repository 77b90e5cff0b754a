#include <doctest.h>

#include <cmath>
#include <numbers>

#include "epiq/errors.hpp"
#include "epiq/heatmap.hpp"
#include "epiq/scenario.hpp"

using namespace epiq;
using nlohmann::json;

namespace {
constexpr double kPi = std::numbers::pi;
const std::string kScenarioDir = SCENARIO_DIR;
} // namespace

TEST_CASE("minimal household scenario resolves to the resonant 1+1 model") {
    const ScenarioConfig cfg =
        load_scenario(kScenarioDir + "/household_minimal.json");
    const ResolvedScenario rs = resolve_scenario(cfg);
    CHECK(rs.model.n_index == 1);
    CHECK(rs.model.n_susceptible == 1);
    CHECK(rs.model.gamma[0][0] == doctest::Approx(kPi));
    CHECK(rs.model.alpha == doctest::Approx(kPi));
    CHECK(rs.model.n_qubits() == 4);
}

TEST_CASE("omicron_typical resolves to the 10-qubit community model") {
    const ScenarioConfig cfg =
        load_scenario(kScenarioDir + "/omicron_typical.json");
    const ResolvedScenario rs = resolve_scenario(cfg);
    CHECK(rs.model.n_index == 1);
    CHECK(rs.model.n_susceptible == 4);
    CHECK(rs.model.n_qubits() == 10);
    CHECK(rs.model.alpha == doctest::Approx(kPi));
    CHECK(rs.model.gamma[0][0] == doctest::Approx(kPi)); // household
    for (double g : rs.model.gamma[0]) {
        CHECK(g > 0.0);
        CHECK(g <= kPi);
    }
    CHECK(rs.site_ids == std::vector<int>{1, 2, 3, 4});
    CHECK(rs.excluded_ids.empty());
}

TEST_CASE("validation errors carry field paths") {
    json j = {{"sites",
               {{{"kind", "index_patient"}, {"position", {0, 0}}},
                {{"kind", "household"},
                 {"position", {0, 0}},
                 {"population", 2}}}},
              {"virus", {{"sar", 1.2}}}};
    try {
        parse_scenario(j);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("virus.sar") != std::string::npos);
    }

    json no_index = {{"sites",
                      {{{"kind", "household"},
                        {"position", {0, 0}},
                        {"population", 2}}}}};
    CHECK_THROWS_AS(parse_scenario(no_index), ValidationError);

    json bad_pop = {{"sites",
                     {{{"kind", "index_patient"}, {"position", {0, 0}}},
                      {{"kind", "community"},
                       {"rect", {0, 0, 10, 10}},
                       {"population", -5}}}}};
    try {
        parse_scenario(bad_pop);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("population") != std::string::npos);
    }
}

TEST_CASE("scenario JSON round trip is identity on resolved configs") {
    const ScenarioConfig cfg =
        load_scenario(kScenarioDir + "/omicron_typical.json");
    const ScenarioConfig cfg2 = parse_scenario(scenario_to_json(cfg));
    const ResolvedScenario a = resolve_scenario(cfg);
    const ResolvedScenario b = resolve_scenario(cfg2);
    CHECK(a.model.gamma == b.model.gamma);
    CHECK(a.model.lambda == b.model.lambda);
    CHECK(a.model.alpha == b.model.alpha);
    CHECK(a.model.populations == b.model.populations);
    CHECK(a.site_ids == b.site_ids);
    CHECK(scenario_to_json(cfg) == scenario_to_json(cfg2));
}

TEST_CASE("overlapping community rectangles only warn") {
    json j = {{"sites",
               {{{"kind", "index_patient"}, {"position", {0, 0}}},
                {{"kind", "community"},
                 {"rect", {-10, -10, 50, 50}},
                 {"population", 10}},
                {{"kind", "community"},
                 {"rect", {0, 0, 60, 60}},
                 {"population", 10}}}},
              {"model", {{"sigma", 65}}}};
    const ResolvedScenario rs = resolve_scenario(parse_scenario(j));
    CHECK(!rs.warnings.empty());
    CHECK(rs.model.n_susceptible == 2);
}

TEST_CASE("two-patient scenario uses alpha = pi/2") {
    const ScenarioConfig cfg = load_scenario(kScenarioDir + "/two_patient.json");
    const ResolvedScenario rs = resolve_scenario(cfg);
    CHECK(rs.model.n_index == 2);
    CHECK(rs.model.alpha == doctest::Approx(kPi / 2));
    CHECK(rs.model.n_qubits() == 10);
}

TEST_CASE("manifest captures the resolved parameters") {
    const ResolvedScenario rs = resolve_scenario(
        load_scenario(kScenarioDir + "/omicron_typical.json"));
    const json m = run_manifest(rs);
    CHECK(m.at("resolved").at("n_qubits") == 10);
    CHECK(m.at("resolved").at("gamma").size() == 1);
    CHECK(m.at("resolved").at("gamma")[0].size() == 4);
    CHECK(m.at("seed") == 1);
}

TEST_CASE("heatmap SVG contains ramp-coloured sites and a legend") {
    const ScenarioConfig cfg =
        load_scenario(kScenarioDir + "/omicron_typical.json");
    const std::string svg =
        heatmap_svg(cfg.sites, {{1, 1.0}, {2, 0.0}, {3, 0.5}}, "day 4");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("rgb(255,0,0)") != std::string::npos);   // p = 1
    CHECK(svg.find("rgb(255,255,255)") != std::string::npos); // p = 0 / legend
    CHECK(svg.find("rgb(255,128,128)") != std::string::npos); // p = 0.5
    CHECK(svg.find("linearGradient") != std::string::npos);
    CHECK(svg.find("fill=\"red\"") != std::string::npos); // index patient dot
}
