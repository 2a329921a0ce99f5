#include "fracpicard/problem_config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fracpicard {
namespace {

using nlohmann::json;

double number_field(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) {
        throw ConfigError(std::string("config: '") + key + "' must be a number");
    }
    return v.get<double>();
}

std::vector<double> number_array(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_array()) {
        throw ConfigError(std::string("config: '") + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_number()) {
            throw ConfigError(std::string("config: '") + key + "' must contain only numbers");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

std::string string_field(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (!v.is_string()) {
        throw ConfigError(std::string("config: '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

ProblemSpec parse_problem_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config: top level must be an object");
    }

    static const std::set<std::string> kKnown = {"alpha",   "derivative_orders", "initial_values",
                                                 "horizon", "gamma",             "rhs",
                                                 "exact"};
    static const std::set<std::string> kRequired = {"alpha", "derivative_orders", "initial_values",
                                                    "horizon", "rhs"};
    for (const auto& [key, value] : doc.items()) {
        if (!kKnown.contains(key)) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    for (const auto& key : kRequired) {
        if (!doc.contains(key)) {
            throw ConfigError("config: missing required key '" + key + "'");
        }
    }

    ProblemSpec spec;
    spec.alpha = number_field(doc, "alpha");
    spec.derivative_orders = number_array(doc, "derivative_orders");
    spec.initial_values = number_array(doc, "initial_values");
    spec.horizon = number_field(doc, "horizon");
    if (doc.contains("gamma")) spec.gamma = number_field(doc, "gamma");
    spec.rhs = string_field(doc, "rhs");
    if (doc.contains("exact")) spec.exact = string_field(doc, "exact");
    return spec;
}

ProblemSpec load_problem_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_config(buf.str());
}

}  // namespace fracpicard
