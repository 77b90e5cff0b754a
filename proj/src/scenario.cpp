#include "epiq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "epiq/errors.hpp"

namespace epiq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError("scenario: `" + path + "` " + what);
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "must be a number");
    return j.get<double>();
}

std::string kind_name(SiteKind k) {
    switch (k) {
        case SiteKind::index_patient: return "index_patient";
        case SiteKind::household: return "household";
        case SiteKind::community: return "community";
    }
    return "?";
}

Site parse_site(const json& j, std::size_t idx) {
    const std::string path = "sites[" + std::to_string(idx) + "]";
    if (!j.is_object()) fail(path, "must be an object");
    Site s;
    s.id = j.contains("id") ? j.at("id").get<int>() : static_cast<int>(idx);
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    const std::string kind =
        j.contains("kind") ? j.at("kind").get<std::string>() : "";
    if (kind == "index_patient")
        s.kind = SiteKind::index_patient;
    else if (kind == "household")
        s.kind = SiteKind::household;
    else if (kind == "community")
        s.kind = SiteKind::community;
    else
        fail(path + ".kind", "must be index_patient, household or community");

    if (j.contains("rect")) {
        const json& r = j.at("rect");
        if (!r.is_array() || r.size() != 4)
            fail(path + ".rect", "must be [x1, y1, x2, y2]");
        s.rect = {require_number(r[0], path + ".rect[0]"),
                  require_number(r[1], path + ".rect[1]"),
                  require_number(r[2], path + ".rect[2]"),
                  require_number(r[3], path + ".rect[3]")};
        if (s.rect.x1 >= s.rect.x2 || s.rect.y1 >= s.rect.y2)
            fail(path + ".rect", "needs x1 < x2 and y1 < y2");
        s.has_rect = true;
        s.position = {(s.rect.x1 + s.rect.x2) / 2, (s.rect.y1 + s.rect.y2) / 2};
    } else if (j.contains("position")) {
        const json& p = j.at("position");
        if (!p.is_array() || p.size() != 2)
            fail(path + ".position", "must be [x, y]");
        s.position = {require_number(p[0], path + ".position[0]"),
                      require_number(p[1], path + ".position[1]")};
    } else {
        fail(path, "needs either `position` or `rect`");
    }
    if (s.kind == SiteKind::community && !s.has_rect)
        fail(path, "community sites need a rect");
    if (s.kind != SiteKind::community && s.has_rect)
        fail(path, kind_name(s.kind) + " sites use `position`, not `rect`");

    if (s.kind != SiteKind::index_patient) {
        if (!j.contains("population"))
            fail(path + ".population", "is required for susceptible sites");
        s.population = require_number(j.at("population"), path + ".population");
        if (s.population <= 0.0)
            fail(path + ".population", "must be positive");
    }
    return s;
}

} // namespace

ScenarioConfig parse_scenario(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("scenario: root must be an object");
    ScenarioConfig cfg;

    if (!j.contains("sites") || !j.at("sites").is_array() ||
        j.at("sites").empty())
        fail("sites", "must be a non-empty array");
    std::set<int> ids;
    for (std::size_t k = 0; k < j.at("sites").size(); ++k) {
        Site s = parse_site(j.at("sites")[k], k);
        if (!ids.insert(s.id).second)
            fail("sites[" + std::to_string(k) + "].id", "is duplicated");
        cfg.sites.push_back(std::move(s));
    }
    const bool has_index = std::any_of(
        cfg.sites.begin(), cfg.sites.end(),
        [](const Site& s) { return s.kind == SiteKind::index_patient; });
    if (!has_index) fail("sites", "needs at least one index_patient");

    if (j.contains("virus")) {
        const json& v = j.at("virus");
        if (v.contains("sar")) {
            cfg.virus.sar = require_number(v.at("sar"), "virus.sar");
            if (cfg.virus.sar <= 0.0 || cfg.virus.sar >= 1.0)
                fail("virus.sar", "must lie in (0, 1)");
        }
        if (v.contains("sar_horizon")) {
            cfg.virus.sar_horizon = v.at("sar_horizon").get<int>();
            if (cfg.virus.sar_horizon < 1)
                fail("virus.sar_horizon", "must be a positive integer");
        }
        if (v.contains("r0")) {
            cfg.virus.r0 = require_number(v.at("r0"), "virus.r0");
            if (cfg.virus.r0 <= 0.0) fail("virus.r0", "must be positive");
        }
        if (v.contains("incubation")) {
            cfg.virus.incubation = v.at("incubation").get<int>();
            if (cfg.virus.incubation < 1)
                fail("virus.incubation", "must be a positive integer");
        }
    }

    if (j.contains("model")) {
        const json& m = j.at("model");
        if (m.contains("lambda")) {
            cfg.model.lambda = require_number(m.at("lambda"), "model.lambda");
            if (cfg.model.lambda < 0.0) fail("model.lambda", "must be >= 0");
        }
        if (m.contains("alpha")) {
            if (m.at("alpha").is_string()) {
                if (m.at("alpha").get<std::string>() != "auto")
                    fail("model.alpha", "must be a number or \"auto\"");
                cfg.model.alpha_auto = true;
            } else {
                cfg.model.alpha_auto = false;
                cfg.model.alpha = require_number(m.at("alpha"), "model.alpha");
                if (cfg.model.alpha <= 0.0) fail("model.alpha", "must be positive");
            }
        }
        if (m.contains("sigma")) {
            const double s = require_number(m.at("sigma"), "model.sigma");
            if (s <= 0.0) fail("model.sigma", "must be positive");
            cfg.model.sigma = s;
        }
        if (m.contains("delta_t")) {
            cfg.model.delta_t = require_number(m.at("delta_t"), "model.delta_t");
            if (cfg.model.delta_t <= 0.0) fail("model.delta_t", "must be positive");
        }
        if (m.contains("trotter_dt")) {
            cfg.model.trotter_dt =
                require_number(m.at("trotter_dt"), "model.trotter_dt");
            if (cfg.model.trotter_dt <= 0.0)
                fail("model.trotter_dt", "must be positive");
        }
        if (m.contains("resonant_household"))
            cfg.model.resonant_household =
                m.at("resonant_household").get<bool>();
        if (m.contains("gamma")) {
            const json& g = m.at("gamma");
            if (!g.is_array()) fail("model.gamma", "must be a matrix");
            std::vector<std::vector<double>> mat;
            for (std::size_t r = 0; r < g.size(); ++r) {
                if (!g[r].is_array())
                    fail("model.gamma[" + std::to_string(r) + "]",
                         "must be an array");
                std::vector<double> row;
                for (std::size_t c = 0; c < g[r].size(); ++c)
                    row.push_back(require_number(
                        g[r][c], "model.gamma[" + std::to_string(r) + "][" +
                                     std::to_string(c) + "]"));
                mat.push_back(std::move(row));
            }
            cfg.model.gamma = std::move(mat);
        }
    }

    if (j.contains("run")) {
        const json& r = j.at("run");
        if (r.contains("days")) {
            cfg.run.days = r.at("days").get<int>();
            if (cfg.run.days < 1) fail("run.days", "must be a positive integer");
        }
        if (r.contains("mode")) {
            const std::string mode = r.at("mode").get<std::string>();
            if (mode == "density")
                cfg.run.mode = RunMode::density;
            else if (mode == "shots")
                cfg.run.mode = RunMode::shots;
            else
                fail("run.mode", "must be density or shots");
        }
        if (r.contains("shots")) {
            cfg.run.shots = r.at("shots").get<std::int64_t>();
            if (cfg.run.shots < 1) fail("run.shots", "must be positive");
        }
        if (r.contains("seed"))
            cfg.run.seed = r.at("seed").get<std::uint64_t>();
        if (r.contains("engine")) {
            const std::string e = r.at("engine").get<std::string>();
            if (e == "quantum")
                cfg.run.engine = Engine::quantum;
            else if (e == "markov")
                cfg.run.engine = Engine::markov;
            else if (e == "rk4")
                cfg.run.engine = Engine::rk4;
            else
                fail("run.engine", "must be quantum, markov or rk4");
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("scenario: cannot open `" + path + "`");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario: `" + path + "` is not valid JSON: " +
                              e.what());
    }
    return parse_scenario(j);
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    for (const Site& s : cfg.sites) {
        json sj;
        sj["id"] = s.id;
        sj["kind"] = kind_name(s.kind);
        if (!s.name.empty()) sj["name"] = s.name;
        if (s.has_rect)
            sj["rect"] = {s.rect.x1, s.rect.y1, s.rect.x2, s.rect.y2};
        else
            sj["position"] = {s.position.x, s.position.y};
        if (s.kind != SiteKind::index_patient) sj["population"] = s.population;
        j["sites"].push_back(sj);
    }
    j["virus"] = {{"sar", cfg.virus.sar},
                  {"sar_horizon", cfg.virus.sar_horizon},
                  {"r0", cfg.virus.r0},
                  {"incubation", cfg.virus.incubation}};
    json m;
    m["lambda"] = cfg.model.lambda;
    if (cfg.model.alpha_auto)
        m["alpha"] = "auto";
    else
        m["alpha"] = cfg.model.alpha;
    if (cfg.model.sigma) m["sigma"] = *cfg.model.sigma;
    m["delta_t"] = cfg.model.delta_t;
    m["trotter_dt"] = cfg.model.trotter_dt;
    m["resonant_household"] = cfg.model.resonant_household;
    if (cfg.model.gamma) m["gamma"] = *cfg.model.gamma;
    j["model"] = m;
    j["run"] = {
        {"days", cfg.run.days},
        {"mode", cfg.run.mode == RunMode::density ? "density" : "shots"},
        {"shots", cfg.run.shots},
        {"seed", cfg.run.seed},
        {"engine", cfg.run.engine == Engine::quantum  ? "quantum"
                   : cfg.run.engine == Engine::markov ? "markov"
                                                      : "rk4"}};
    return j;
}

ResolvedScenario resolve_scenario(const ScenarioConfig& cfg) {
    ResolvedScenario rs;
    rs.config = cfg;

    std::vector<const Site*> patients, susceptible;
    for (const Site& s : cfg.sites)
        if (s.kind == SiteKind::index_patient)
            patients.push_back(&s);
        else
            susceptible.push_back(&s);
    if (susceptible.empty())
        throw ValidationError("scenario: needs at least one susceptible site");

    // Warn on overlapping community rectangles (double-counts population).
    for (std::size_t a = 0; a < susceptible.size(); ++a)
        for (std::size_t b = a + 1; b < susceptible.size(); ++b) {
            const Site *sa = susceptible[a], *sb = susceptible[b];
            if (!sa->has_rect || !sb->has_rect) continue;
            if (sa->rect.x1 < sb->rect.x2 && sb->rect.x1 < sa->rect.x2 &&
                sa->rect.y1 < sb->rect.y2 && sb->rect.y1 < sa->rect.y2)
                rs.warnings.push_back("community rectangles of sites " +
                                      std::to_string(sa->id) + " and " +
                                      std::to_string(sb->id) + " overlap");
        }

    SimSettings settings;
    settings.delta_t = cfg.model.delta_t;
    settings.trotter_dt = cfg.model.trotter_dt;

    if (cfg.model.gamma) {
        const auto& g = *cfg.model.gamma;
        if (g.size() != patients.size())
            throw ValidationError(
                "scenario: model.gamma must have one row per index patient");
        for (const auto& row : g)
            if (row.size() != susceptible.size())
                throw ValidationError(
                    "scenario: model.gamma must have one column per "
                    "susceptible site");
        rs.model.n_index = static_cast<int>(patients.size());
        rs.model.n_susceptible = static_cast<int>(susceptible.size());
        rs.model.gamma = g;
        for (const Site* s : susceptible) {
            rs.model.populations.push_back(s->population);
            rs.site_ids.push_back(s->id);
        }
    } else if (cfg.model.sigma) {
        std::vector<int> kept;
        rs.model = model_from_layout(cfg.sites, *cfg.model.sigma,
                                     cfg.model.lambda, settings, &kept);
        std::set<int> kept_set(kept.begin(), kept.end());
        for (std::size_t k = 0; k < susceptible.size(); ++k) {
            if (kept_set.count(static_cast<int>(k)))
                rs.site_ids.push_back(susceptible[k]->id);
            else
                rs.excluded_ids.push_back(susceptible[k]->id);
        }
        if (!rs.excluded_ids.empty())
            rs.warnings.push_back(
                std::to_string(rs.excluded_ids.size()) +
                " susceptible site(s) excluded (all couplings < 1e-6)");
    } else if (cfg.model.resonant_household) {
        for (const Site* s : susceptible)
            if (s->kind != SiteKind::household)
                throw ValidationError(
                    "scenario: resonant_household without model.sigma "
                    "supports household sites only (site " +
                    std::to_string(s->id) + " is a community)");
        rs.model.n_index = static_cast<int>(patients.size());
        rs.model.n_susceptible = static_cast<int>(susceptible.size());
        const double g_res =
            auto_alpha(1, cfg.model.delta_t); // resonance of the k=1 branch
        rs.model.gamma.assign(rs.model.n_index,
                              std::vector<double>(rs.model.n_susceptible, g_res));
        for (const Site* s : susceptible) {
            rs.model.populations.push_back(s->population);
            rs.site_ids.push_back(s->id);
        }
    } else {
        throw ValidationError(
            "scenario: needs model.sigma, model.gamma, or "
            "model.resonant_household to resolve couplings");
    }

    rs.model.lambda = cfg.model.lambda;
    rs.model.alpha = cfg.model.alpha_auto
                         ? auto_alpha(rs.model.n_index, cfg.model.delta_t)
                         : cfg.model.alpha;
    rs.model.delta_t = cfg.model.delta_t;
    rs.model.trotter_dt = cfg.model.trotter_dt;
    rs.model.validate();
    return rs;
}

nlohmann::json run_manifest(const ResolvedScenario& rs) {
    json j;
    j["config"] = scenario_to_json(rs.config);
    j["resolved"] = {{"n_index", rs.model.n_index},
                     {"n_susceptible", rs.model.n_susceptible},
                     {"n_qubits", rs.model.n_qubits()},
                     {"gamma", rs.model.gamma},
                     {"lambda", rs.model.lambda},
                     {"alpha", rs.model.alpha},
                     {"delta_t", rs.model.delta_t},
                     {"trotter_dt", rs.model.trotter_dt},
                     {"populations", rs.model.populations},
                     {"site_ids", rs.site_ids},
                     {"excluded_site_ids", rs.excluded_ids}};
    j["warnings"] = rs.warnings;
    j["seed"] = rs.config.run.seed;
    j["version"] = "1.0.0";
    return j;
}

} // namespace epiq
