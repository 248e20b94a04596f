#include "garchtrack/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace garchtrack {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("config: unknown key '" + path + key + "'");
        }
    }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError("config: missing required key '" + path + key + "'");
    }
    return *it;
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError("config: '" + where + "' must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) {
        throw ConfigError("config: '" + where + "' must be an integer");
    }
    return v.get<int>();
}

double number_or(const json& obj, const std::string& path, const std::string& key,
                 double fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_number(*it, path + key);
}

int int_or(const json& obj, const std::string& path, const std::string& key,
           int fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_int(*it, path + key);
}

Vec6 as_vec6(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 6) {
        throw ConfigError("config: '" + where + "' must be an array of 6 numbers");
    }
    Vec6 out;
    for (int i = 0; i < 6; ++i) out(i) = as_number(v[static_cast<std::size_t>(i)], where);
    return out;
}

Scenario parse_scenario(const json& obj) {
    const std::string path = "scenario.";
    const std::string id = require(obj, path, "id").get<std::string>();
    Scenario scn = scenario_by_id(id);

    std::set<std::string> allowed{"id", "n_steps", "T", "sigma2_pos", "sigma2_vel"};
    if (id == "1a" || id == "1b") {
        allowed.insert({"ux", "uy", "ux_samples", "uy_samples"});
    } else if (id == "2") {
        allowed.insert({"student_t_dof", "noise_scale", "init_mean", "init_std"});
    } else if (id == "3") {
        allowed.insert({"amplitude", "period_s", "phase_x", "phase_y",
                        "plateau_value", "plateau_start_s", "plateau_end_s"});
    }
    check_keys(obj, path, allowed);

    scn.n_steps = int_or(obj, path, "n_steps", scn.n_steps);
    scn.T = number_or(obj, path, "T", scn.T);
    scn.meas.sigma2_pos = number_or(obj, path, "sigma2_pos", scn.meas.sigma2_pos);
    scn.meas.sigma2_vel = number_or(obj, path, "sigma2_vel", scn.meas.sigma2_vel);

    if (id == "1a" || id == "1b") {
        const auto interval = [&](const std::string& key, PiecewiseStep& step) {
            const auto it = obj.find(key);
            if (it == obj.end()) return;
            if (!it->is_array() || it->size() != 2) {
                throw ConfigError("config: '" + path + key +
                                  "' must be [first_sample, last_sample]");
            }
            step.first_sample = as_int((*it)[0], path + key);
            step.last_sample = as_int((*it)[1], path + key);
        };
        scn.accel_x.steps[0].value = number_or(obj, path, "ux", scn.accel_x.steps[0].value);
        scn.accel_y.steps[0].value = number_or(obj, path, "uy", scn.accel_y.steps[0].value);
        interval("ux_samples", scn.accel_x.steps[0]);
        interval("uy_samples", scn.accel_y.steps[0]);
    } else if (id == "2") {
        scn.process_noise.dof =
            number_or(obj, path, "student_t_dof", scn.process_noise.dof);
        scn.process_noise.scale =
            number_or(obj, path, "noise_scale", scn.process_noise.scale);
        if (const auto it = obj.find("init_mean"); it != obj.end()) {
            scn.init.mean = as_vec6(*it, path + "init_mean");
        }
        if (const auto it = obj.find("init_std"); it != obj.end()) {
            scn.init.std = as_vec6(*it, path + "init_std");
        }
    } else if (id == "3") {
        for (AxisProfile* axis : {&scn.accel_x, &scn.accel_y}) {
            SinusoidRegime& s = axis->sinusoid;
            s.amplitude = number_or(obj, path, "amplitude", s.amplitude);
            s.period_s = number_or(obj, path, "period_s", s.period_s);
            s.plateau_value = number_or(obj, path, "plateau_value", s.plateau_value);
            s.plateau_start_s =
                number_or(obj, path, "plateau_start_s", s.plateau_start_s);
            s.plateau_end_s = number_or(obj, path, "plateau_end_s", s.plateau_end_s);
        }
        scn.accel_x.sinusoid.phase =
            number_or(obj, path, "phase_x", scn.accel_x.sinusoid.phase);
        scn.accel_y.sinusoid.phase =
            number_or(obj, path, "phase_y", scn.accel_y.sinusoid.phase);
    }
    scn.require_valid();
    return scn;
}

GarchParams parse_garch(const json& obj, const std::string& path) {
    check_keys(obj, path + ".", {"alpha0", "alpha1", "beta1"});
    GarchParams params{as_number(require(obj, path + ".", "alpha0"), path + ".alpha0"),
                       as_number(require(obj, path + ".", "alpha1"), path + ".alpha1"),
                       as_number(require(obj, path + ".", "beta1"), path + ".beta1")};
    params.require_valid();
    return params;
}

PriorSpread parse_spread(const json& obj, const std::string& path) {
    check_keys(obj, path + ".", {"pos", "vel", "acc"});
    PriorSpread spread;
    spread.pos = number_or(obj, path + ".", "pos", spread.pos);
    spread.vel = number_or(obj, path + ".", "vel", spread.vel);
    spread.acc = number_or(obj, path + ".", "acc", spread.acc);
    return spread;
}

Resampler parse_resampler(const json& obj, const std::string& path) {
    const auto it = obj.find("resampler");
    if (it == obj.end()) return Resampler::multinomial;
    const std::string name = it->get<std::string>();
    if (name == "multinomial") return Resampler::multinomial;
    if (name == "systematic") return Resampler::systematic;
    throw ConfigError("config: '" + path +
                      "resampler' must be multinomial or systematic");
}

FilterSection parse_filter(const std::string& id, const json& obj) {
    const std::string path = "filters." + id + ".";
    if (id == "pf_garch") {
        check_keys(obj, path,
                   {"n_s", "mu", "garch_x", "garch_y", "h0", "prior_spread",
                    "resampler", "ess_fraction"});
        PfGarchSection s;
        s.n_s = int_or(obj, path, "n_s", s.n_s);
        s.mu = number_or(obj, path, "mu", s.mu);
        s.garch_x = parse_garch(require(obj, path, "garch_x"), path + "garch_x");
        s.garch_y = parse_garch(require(obj, path, "garch_y"), path + "garch_y");
        s.h0 = number_or(obj, path, "h0", s.h0);
        if (const auto it = obj.find("prior_spread"); it != obj.end()) {
            s.prior_spread = parse_spread(*it, path + "prior_spread");
        }
        s.resampler = parse_resampler(obj, path);
        s.ess_fraction = number_or(obj, path, "ess_fraction", s.ess_fraction);
        return s;
    }
    if (id == "pf") {
        check_keys(obj, path,
                   {"n_s", "mu", "sigma2", "prior_spread", "resampler",
                    "ess_fraction"});
        PfPlainSection s;
        s.n_s = int_or(obj, path, "n_s", s.n_s);
        s.mu = number_or(obj, path, "mu", s.mu);
        s.sigma2 = number_or(obj, path, "sigma2", s.sigma2);
        if (const auto it = obj.find("prior_spread"); it != obj.end()) {
            s.prior_spread = parse_spread(*it, path + "prior_spread");
        }
        s.resampler = parse_resampler(obj, path);
        s.ess_fraction = number_or(obj, path, "ess_fraction", s.ess_fraction);
        return s;
    }
    if (id == "imm") {
        check_keys(obj, path,
                   {"p_ij", "sigma_cv", "sigma_ca", "init_probs", "p0_accel_var"});
        ImmSection s;
        if (const auto it = obj.find("p_ij"); it != obj.end()) {
            if (!it->is_array() || it->size() != 2) {
                throw ConfigError("config: '" + path + "p_ij' must be a 2x2 matrix");
            }
            for (int r = 0; r < 2; ++r) {
                const json& row = (*it)[static_cast<std::size_t>(r)];
                if (!row.is_array() || row.size() != 2) {
                    throw ConfigError("config: '" + path + "p_ij' must be a 2x2 matrix");
                }
                for (int c = 0; c < 2; ++c) {
                    s.p_ij(r, c) = as_number(row[static_cast<std::size_t>(c)],
                                             path + "p_ij");
                }
            }
        }
        s.sigma_cv = number_or(obj, path, "sigma_cv", s.sigma_cv);
        s.sigma_ca = number_or(obj, path, "sigma_ca", s.sigma_ca);
        if (const auto it = obj.find("init_probs"); it != obj.end()) {
            if (!it->is_array() || it->size() != 2) {
                throw ConfigError("config: '" + path + "init_probs' must have 2 entries");
            }
            s.init_probs << as_number((*it)[0], path + "init_probs"),
                as_number((*it)[1], path + "init_probs");
        }
        s.p0_accel_var = number_or(obj, path, "p0_accel_var", s.p0_accel_var);
        return s;
    }
    throw ConfigError("config: unknown filter id '" + id +
                      "' (expected pf_garch, pf or imm)");
}

}  // namespace

Config parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config: invalid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(doc, "", {"scenario", "filters", "bench", "output"});

    Config cfg;
    cfg.scenario = parse_scenario(require(doc, "", "scenario"));

    if (const auto it = doc.find("filters"); it != doc.end()) {
        if (!it->is_object()) throw ConfigError("config: 'filters' must be an object");
        for (const auto& [id, section] : it->items()) {
            cfg.filters.emplace(id, parse_filter(id, section));
        }
    }

    if (const auto it = doc.find("bench"); it != doc.end()) {
        const std::string path = "bench.";
        check_keys(*it, path, {"n_runs", "base_seed", "ns_list", "filters", "burn_in"});
        cfg.bench.n_runs = int_or(*it, path, "n_runs", cfg.bench.n_runs);
        if (const auto seed = it->find("base_seed"); seed != it->end()) {
            if (!seed->is_number_integer() && !seed->is_number_unsigned()) {
                throw ConfigError("config: 'bench.base_seed' must be an integer");
            }
            cfg.bench.base_seed = seed->get<std::uint64_t>();
        }
        if (const auto ns = it->find("ns_list"); ns != it->end()) {
            if (!ns->is_array() || ns->empty()) {
                throw ConfigError("config: 'bench.ns_list' must be a non-empty array");
            }
            cfg.bench.ns_list.clear();
            for (const json& v : *ns) cfg.bench.ns_list.push_back(as_int(v, path + "ns_list"));
        }
        if (const auto f = it->find("filters"); f != it->end()) {
            if (!f->is_array()) {
                throw ConfigError("config: 'bench.filters' must be an array");
            }
            cfg.bench.filters.clear();
            for (const json& v : *f) cfg.bench.filters.push_back(v.get<std::string>());
        }
        cfg.bench.burn_in = int_or(*it, path, "burn_in", cfg.bench.burn_in);
    }
    if (cfg.bench.filters.empty()) {
        for (const auto& [id, section] : cfg.filters) cfg.bench.filters.push_back(id);
    }
    for (const std::string& id : cfg.bench.filters) {
        if (!cfg.filters.contains(id)) {
            throw ConfigError("config: bench references undefined filter '" + id + "'");
        }
    }

    if (const auto it = doc.find("output"); it != doc.end()) {
        check_keys(*it, "output.", {"directory", "formats"});
        if (const auto dir = it->find("directory"); dir != it->end()) {
            cfg.output.directory = dir->get<std::string>();
        }
        if (const auto fmts = it->find("formats"); fmts != it->end()) {
            if (!fmts->is_array()) {
                throw ConfigError("config: 'output.formats' must be an array");
            }
            cfg.output.formats.clear();
            for (const json& v : *fmts) {
                const std::string f = v.get<std::string>();
                if (f != "csv" && f != "table" && f != "svg") {
                    throw ConfigError("config: unknown output format '" + f + "'");
                }
                cfg.output.formats.push_back(f);
            }
        }
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

namespace {

PfGarchConfig bind_pf_garch(const PfGarchSection& s, const Scenario& scn) {
    PfGarchConfig cfg;
    cfg.n_s = s.n_s;
    cfg.garch_x = s.garch_x;
    cfg.garch_y = s.garch_y;
    cfg.trans = build_phi(scn.T, s.mu);
    cfg.meas = scn.meas;
    cfg.prior_spread = s.prior_spread;
    cfg.h0 = s.h0;
    cfg.resampler = s.resampler;
    cfg.ess_fraction = s.ess_fraction;
    return cfg;
}

PfPlainConfig bind_pf_plain(const PfPlainSection& s, const Scenario& scn) {
    PfPlainConfig cfg;
    cfg.n_s = s.n_s;
    cfg.sigma2 = s.sigma2;
    cfg.trans = build_phi(scn.T, s.mu);
    cfg.meas = scn.meas;
    cfg.prior_spread = s.prior_spread;
    cfg.resampler = s.resampler;
    cfg.ess_fraction = s.ess_fraction;
    return cfg;
}

ImmConfig bind_imm(const ImmSection& s, const Scenario& scn) {
    ImmConfig cfg;
    cfg.p_ij = s.p_ij;
    cfg.sigma_cv = s.sigma_cv;
    cfg.sigma_ca = s.sigma_ca;
    cfg.meas = scn.meas;
    cfg.T = scn.T;
    cfg.init_probs = s.init_probs;
    cfg.p0_accel_var = s.p0_accel_var;
    return cfg;
}

const FilterSection& find_section(const Config& cfg, const std::string& id) {
    const auto it = cfg.filters.find(id);
    if (it == cfg.filters.end()) {
        throw ConfigError("config: filter '" + id + "' is not defined");
    }
    return it->second;
}

}  // namespace

FilterFactory make_filter_factory(const Config& cfg, const std::string& filter_id) {
    const FilterSection& section = find_section(cfg, filter_id);
    const Scenario scn = cfg.scenario;
    if (const auto* s = std::get_if<PfGarchSection>(&section)) {
        const PfGarchConfig bound = bind_pf_garch(*s, scn);
        return [bound](std::uint64_t seed) {
            return std::make_unique<PfGarchFilter>(bound, seed);
        };
    }
    if (const auto* s = std::get_if<PfPlainSection>(&section)) {
        const PfPlainConfig bound = bind_pf_plain(*s, scn);
        return [bound](std::uint64_t seed) {
            return std::make_unique<PlainPfFilter>(bound, seed);
        };
    }
    const ImmConfig bound = bind_imm(std::get<ImmSection>(section), scn);
    return [bound](std::uint64_t seed) {
        return std::make_unique<ImmFilter>(bound, seed);
    };
}

std::function<std::unique_ptr<TrackingFilter>(int, std::uint64_t)>
make_sized_filter_factory(const Config& cfg, const std::string& filter_id) {
    const FilterSection& section = find_section(cfg, filter_id);
    const Scenario scn = cfg.scenario;
    if (const auto* s = std::get_if<PfGarchSection>(&section)) {
        const PfGarchSection base = *s;
        return [base, scn](int n_s, std::uint64_t seed) {
            PfGarchConfig bound = bind_pf_garch(base, scn);
            bound.n_s = n_s;
            return std::make_unique<PfGarchFilter>(bound, seed);
        };
    }
    if (const auto* s = std::get_if<PfPlainSection>(&section)) {
        const PfPlainSection base = *s;
        return [base, scn](int n_s, std::uint64_t seed) {
            PfPlainConfig bound = bind_pf_plain(base, scn);
            bound.n_s = n_s;
            return std::make_unique<PlainPfFilter>(bound, seed);
        };
    }
    throw ConfigError("config: filter '" + filter_id +
                      "' has no particle count to sweep");
}

}  // namespace garchtrack
