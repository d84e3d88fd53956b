#ifndef DHROM_CONFIG_HPP
#define DHROM_CONFIG_HPP

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dhrom/fom.hpp"
#include "dhrom/network.hpp"
#include "dhrom/presets.hpp"
#include "dhrom/profile.hpp"

namespace dhrom {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Named catalogue of pipes, profiles and networks: built-in presets plus
// whatever a JSON document adds or overrides. Units are fixed SI with
// temperatures in C; a units header in the file is checked, not converted.
struct ProjectConfig {
    std::map<std::string, PipeConfig> pipes;
    std::map<std::string, InputProfile> profiles;
    std::map<std::string, NetworkTopology> networks;

    static ProjectConfig with_presets() {
        ProjectConfig cfg;
        cfg.pipes["dn25"] = presets::dn25();
        cfg.pipes["dn40"] = presets::dn40(100.0);
        cfg.pipes["rig"] = presets::lab_rig();
        cfg.pipes["system2"] = presets::system2();
        cfg.profiles["unit-step"] = InputProfile::constant(1.0);
        cfg.profiles["zero"] = InputProfile::constant(0.0);
        cfg.profiles["daily-supply"] = presets::daily_supply();
        cfg.profiles["scenario2-setpoint"] = presets::scenario2_setpoint();
        cfg.networks["system1"] = presets::system1();
        return cfg;
    }

    const PipeConfig& pipe(const std::string& name) const { return find(pipes, name, "pipe"); }
    const InputProfile& profile(const std::string& name) const {
        return find(profiles, name, "profile");
    }
    const NetworkTopology& network(const std::string& name) const {
        return find(networks, name, "network");
    }

   private:
    template <class Map>
    static const typename Map::mapped_type& find(const Map& map, const std::string& name,
                                                 const char* what) {
        auto it = map.find(name);
        if (it != map.end()) return it->second;
        std::string msg = std::string("unknown ") + what + " '" + name + "'; available:";
        for (const auto& [key, value] : map) msg += " " + key;
        throw ConfigError(msg);
    }
};

namespace detail {

inline LayerProps parse_layer(const nlohmann::json& j) {
    return LayerProps{j.at("density").get<double>(), j.at("heat_capacity").get<double>(),
                      j.at("conductivity").get<double>()};
}

inline PipeConfig parse_pipe(const nlohmann::json& j, const ProjectConfig& cfg) {
    PipeConfig pipe =
        j.contains("base") ? cfg.pipe(j.at("base").get<std::string>()) : presets::dn25();
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        if (g.contains("length")) pipe.geometry.length = g.at("length").get<double>();
        if (g.contains("r_w")) pipe.geometry.r_w = g.at("r_w").get<double>();
        if (g.contains("r_s")) pipe.geometry.r_s = g.at("r_s").get<double>();
        if (g.contains("r_i")) pipe.geometry.r_i = g.at("r_i").get<double>();
        if (g.contains("r_c")) pipe.geometry.r_c = g.at("r_c").get<double>();
        if (g.contains("depth")) pipe.geometry.depth = g.at("depth").get<double>();
        if (g.contains("roughness")) pipe.geometry.roughness = g.at("roughness").get<double>();
    }
    if (j.contains("fluid")) {
        const auto& f = j.at("fluid");
        pipe.fluid = FluidProps{f.at("density").get<double>(), f.at("heat_capacity").get<double>(),
                                f.at("conductivity").get<double>(),
                                f.at("viscosity").get<double>()};
    }
    if (j.contains("steel")) pipe.steel = parse_layer(j.at("steel"));
    if (j.contains("insulation")) pipe.insulation = parse_layer(j.at("insulation"));
    if (j.contains("casing")) pipe.casing = parse_layer(j.at("casing"));
    if (j.contains("soil_conductivity"))
        pipe.soil_conductivity = j.at("soil_conductivity").get<double>();
    if (j.contains("field_count")) pipe.field_count = j.at("field_count").get<int>();
    if (j.contains("external_film")) pipe.external_film = j.at("external_film").get<double>();
    if (j.contains("velocity")) pipe.velocity = j.at("velocity").get<double>();
    if (j.contains("mass_flux")) pipe.set_mass_flux(j.at("mass_flux").get<double>());
    pipe.validate();
    return pipe;
}

inline InputProfile parse_profile(const nlohmann::json& j) {
    const std::string mode = j.value("mode", "step");
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j.at("points"))
        pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    if (mode == "step") return InputProfile::steps(std::move(pts));
    if (mode == "linear") return InputProfile::linear(std::move(pts));
    throw ConfigError("profile mode must be 'step' or 'linear', got '" + mode + "'");
}

inline NetworkTopology parse_network(const nlohmann::json& j, const ProjectConfig& cfg) {
    NetworkTopology top;
    for (const auto& e : j.at("edges")) {
        PipeEdge edge;
        edge.name = e.at("name").get<std::string>();
        edge.upstream = e.at("upstream").get<std::string>();
        edge.downstream = e.at("downstream").get<std::string>();
        edge.pipe = parse_pipe(e.at("pipe"), cfg);
        top.edges.push_back(std::move(edge));
    }
    top.validate();
    return top;
}

}  // namespace detail

inline ProjectConfig parse_config(const nlohmann::json& doc) {
    ProjectConfig cfg = ProjectConfig::with_presets();
    try {
        if (doc.contains("units")) {
            const auto& u = doc.at("units");
            if (u.value("time", "s") != "s" || u.value("temperature", "C") != "C" ||
                u.value("length", "m") != "m")
                throw ConfigError("units must be {time: s, temperature: C, length: m}");
        }
        if (doc.contains("pipes"))
            for (const auto& [name, body] : doc.at("pipes").items())
                cfg.pipes[name] = detail::parse_pipe(body, cfg);
        if (doc.contains("profiles"))
            for (const auto& [name, body] : doc.at("profiles").items())
                cfg.profiles[name] = detail::parse_profile(body);
        if (doc.contains("networks"))
            for (const auto& [name, body] : doc.at("networks").items())
                cfg.networks[name] = detail::parse_network(body, cfg);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config value: ") + e.what());
    }
    return cfg;
}

inline ProjectConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("cannot parse '") + path + "': " + e.what());
    }
    return parse_config(doc);
}

}  // namespace dhrom

#endif
