#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace adual {

/// A checked claim with the values it was decided on.
struct CheckReport {
  std::string claim;
  std::vector<std::pair<std::string, std::string>> values;
  bool pass = false;

  CheckReport& add(std::string key, std::string value) {
    values.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  CheckReport& add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }
  template <class T>
    requires std::is_arithmetic_v<T>
  CheckReport& add(std::string key, T value) {
    return add(std::move(key), std::to_string(value));
  }

  /// "claim: ...", one "  key = value" line per value, then "verdict: PASS|FAIL".
  std::string render() const {
    std::string s = "claim: " + claim + "\n";
    for (const auto& [k, v] : values) s += "  " + k + " = " + v + "\n";
    s += std::string("verdict: ") + (pass ? "PASS" : "FAIL") + "\n";
    return s;
  }
};

}  // namespace adual
