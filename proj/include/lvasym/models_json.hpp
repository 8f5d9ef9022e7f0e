#pragma once

// JSON form of a model: {"kind":"cev","sigma":0.3,"alpha":0.6667,"r":0.1}
// Keys are lowercase; unknown keys are rejected.

#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lvasym/models.hpp"

namespace lvasym {

/// Malformed configuration input (bad JSON shape, unknown key, missing field).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double json_number(const nlohmann::json& j, const char* key, bool required, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (required) throw ConfigError(std::string("model: missing required key \"") + key + "\"");
        return fallback;
    }
    if (!it->is_number()) throw ConfigError(std::string("model: key \"") + key + "\" must be a number");
    return it->get<double>();
}

}  // namespace detail

inline Model model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("model: expected a JSON object");
    auto kind_it = j.find("kind");
    if (kind_it == j.end() || !kind_it->is_string()) throw ConfigError("model: missing string key \"kind\"");
    const std::string kind = kind_it->get<std::string>();

    std::set<std::string> allowed;
    if (kind == "bsm") {
        allowed = {"kind", "sigma", "r"};
    } else if (kind == "tdbsm") {
        allowed = {"kind", "sigma", "sigma_dot0", "r"};
    } else if (kind == "cev") {
        allowed = {"kind", "sigma", "alpha", "r"};
    } else {
        throw ConfigError("model: unknown kind \"" + kind + "\" (expected bsm, tdbsm or cev)");
    }
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) throw ConfigError("model: unknown key \"" + item.key() + "\" for kind " + kind);
    }

    const double sigma = detail::json_number(j, "sigma", true, 0.0);
    const double r = detail::json_number(j, "r", false, 0.0);
    try {
        if (kind == "bsm") return Model::bsm(sigma, r);
        if (kind == "tdbsm") return Model::time_dependent_bsm(sigma, detail::json_number(j, "sigma_dot0", false, 0.0), r);
        return Model::cev(sigma, detail::json_number(j, "alpha", true, 1.0), r);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

inline nlohmann::json model_to_json(const Model& m) {
    nlohmann::json j;
    j["kind"] = to_string(m.kind());
    switch (m.kind()) {
        case ModelKind::BSM:
            j["sigma"] = m.sigma();
            j["r"] = m.r();
            break;
        case ModelKind::TimeDependentBSM:
            j["sigma"] = m.sigma();
            j["sigma_dot0"] = m.sigma_dot0();
            j["r"] = m.r();
            break;
        case ModelKind::CEV:
            j["sigma"] = m.sigma();
            j["alpha"] = m.alpha();
            j["r"] = m.r();
            break;
        case ModelKind::Custom:
            throw ConfigError("custom models cannot be serialized");
    }
    return j;
}

}  // namespace lvasym
