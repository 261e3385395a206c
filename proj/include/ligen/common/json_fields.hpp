#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ligen/common/errors.hpp"

namespace ligen {

using Json = nlohmann::json;

// Typed field access that reports the dotted path of the offending field.
template <typename T>
T json_get(const Json& obj, std::string_view key, const std::string& path) {
  const std::string where = path.empty() ? std::string(key) : path + "." + std::string(key);
  if (!obj.is_object()) throw ConfigError("field '" + path + "': expected an object");
  auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ConfigError("field '" + where + "': missing");
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("field '" + where + "': wrong type (" + std::string(it->type_name()) + ")");
  }
}

template <typename T>
T json_get_or(const Json& obj, std::string_view key, T fallback, const std::string& path) {
  if (!obj.is_object()) throw ConfigError("field '" + path + "': expected an object");
  if (!obj.contains(std::string(key))) return fallback;
  return json_get<T>(obj, key, path);
}

inline void json_reject_unknown(const Json& obj, std::initializer_list<std::string_view> known,
                                const std::string& path) {
  if (!obj.is_object()) throw ConfigError("field '" + path + "': expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) throw ConfigError("field '" + (path.empty() ? key : path + "." + key) + "': unknown key");
  }
}

// Parses text, turning syntax errors into ParseError with the line number.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace ligen
