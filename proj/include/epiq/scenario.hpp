#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epiq/calibration.hpp"
#include "epiq/evolution.hpp"
#include "epiq/geometry.hpp"
#include "epiq/model.hpp"

namespace epiq {

enum class Engine { quantum, markov, rk4 };

struct ModelOverrides {
    double lambda = 0.201;
    bool alpha_auto = true;
    double alpha = 0.0;           // used when alpha_auto is false
    std::optional<double> sigma;  // metres; enables geometric couplings
    double delta_t = 1.0;
    double trotter_dt = 0.01;
    bool resonant_household = false;
    std::optional<std::vector<std::vector<double>>> gamma; // explicit override
};

struct RunSettings {
    int days = 7;
    RunMode mode = RunMode::density;
    std::int64_t shots = 4096;
    std::uint64_t seed = 1;
    Engine engine = Engine::quantum;
};

struct ScenarioConfig {
    std::vector<Site> sites;
    VirusInputs virus;
    ModelOverrides model;
    RunSettings run;
};

ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

// Scenario with couplings resolved to a concrete EpidemicModel. site_ids maps
// every model susceptible column back to the scenario Site id; excluded_ids
// lists susceptible sites dropped for having all couplings below 1e-6.
struct ResolvedScenario {
    ScenarioConfig config;
    EpidemicModel model;
    std::vector<int> site_ids;
    std::vector<int> excluded_ids;
    std::vector<std::string> warnings;
};

ResolvedScenario resolve_scenario(const ScenarioConfig& cfg);

// Manifest with every resolved parameter needed to reproduce a run.
nlohmann::json run_manifest(const ResolvedScenario& rs);

} // namespace epiq
