#pragma once

// RateSpec <-> JSON tree {kind, params, children}, plus the short "name:args"
// form used on the command line.

#include <sstream>
#include <string>

#include <json.hpp>

#include "rate_algebra.hpp"

namespace tauber {

inline nlohmann::json to_json(const RateSpec& r)
{
    nlohmann::json j;
    j["kind"] = kind_name(r.kind);
    j["params"] = r.params;
    j["children"] = nlohmann::json::array();
    for (const auto& c : r.children) j["children"].push_back(to_json(c));
    return j;
}

inline RateSpec rate_from_json(const nlohmann::json& j)
{
    require(j.is_object() && j.contains("kind"), "rate spec: object with 'kind' expected");
    RateSpec r;
    r.kind = kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("params")) r.params = j.at("params").get<std::vector<double>>();
    if (j.contains("children"))
        for (const auto& c : j.at("children")) r.children.push_back(rate_from_json(c));
    validate(r, false);
    return r;
}

// const:c | pow:a | pow1:a (1 v s^a) | logpow:a | exp:c,a | dexp:c,a | flat | JSON text
inline RateSpec parse_rate(const std::string& text)
{
    if (!text.empty() && text.front() == '{') return rate_from_json(nlohmann::json::parse(text));
    std::string name = text, rest;
    if (auto p = text.find(':'); p != std::string::npos) name = text.substr(0, p), rest = text.substr(p + 1);
    std::vector<double> a;
    std::stringstream ss(rest);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            a.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw validation_error("bad number '" + tok + "' in rate '" + text + "'");
        }
    }
    auto need = [&](std::size_t n) {
        require(a.size() == n, "rate '" + text + "': expected " + std::to_string(n) + " argument(s)");
    };
    RateSpec r;
    if (name == "const") need(1), r = rate::constant(a[0]);
    else if (name == "pow") need(1), r = rate::power(a[0]);
    else if (name == "pow1") need(1), r = rate::max1_power(a[0]);
    else if (name == "logpow") need(1), r = rate::log_power(a[0]);
    else if (name == "exp") need(2), r = rate::exp(a[0], a[1]);
    else if (name == "dexp") need(2), r = rate::double_exp(a[0], a[1]);
    else if (name == "flat") need(0), r = rate::flat_preset();
    else throw validation_error("unknown rate shorthand '" + name + "'");
    validate(r);
    return r;
}

inline RateSpec rate_from_config(const nlohmann::json& j)
{
    if (j.is_string()) return parse_rate(j.get<std::string>());
    return rate_from_json(j);
}

}  // namespace tauber
