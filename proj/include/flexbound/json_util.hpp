#pragma once

#include <cmath>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "flexbound/errors.hpp"

namespace flexbound {

/// Ratios may be +infinity, which JSON cannot carry as a number; infinite
/// values are emitted as the string "inf".
inline nlohmann::json json_ratio(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

/// Rejects unknown keys so config typos fail loudly.
inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(context + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace flexbound
