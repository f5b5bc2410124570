#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "circlelab/coefficients.hpp"
#include "json.hpp"

namespace circlelab::cli {

using json = nlohmann::ordered_json;

inline constexpr int kCsvVersion = 1;

/// Shortest decimal that parses back to the same double.
std::string num(double x);

struct Artifact {
  std::string name;
  std::variant<json, std::string> body;  // JSON document or CSV rows (header first)
};

struct Outcome {
  std::vector<Artifact> artifacts;
  int exit_code = 0;
};

struct Context {
  unsigned workers = 1;
  std::uint64_t seed = 20261014;
  std::string cache;
};

/// Options of one command together with how to echo their resolved values.
class OptionSet {
 public:
  explicit OptionSet(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* add(const std::string& name, T& var, const std::string& desc) {
    items_.emplace_back(name, [&var] { return to_json(var); });
    return app_->add_option("--" + name, var, desc);
  }
  CLI::Option* flag(const std::string& name, bool& var, const std::string& desc) {
    items_.emplace_back(name, [&var] { return json(var); });
    return app_->add_flag("--" + name, var, desc);
  }

  json echo() const {
    json out = json::object();
    for (const auto& [name, get] : items_) out[name] = get();
    return out;
  }
  CLI::App* app() const noexcept { return app_; }

 private:
  static json to_json(double v) { return json(v); }
  static json to_json(int v) { return json(v); }
  static json to_json(unsigned v) { return json(v); }
  static json to_json(std::int64_t v) { return json(v); }
  static json to_json(std::uint64_t v) { return json(v); }
  static json to_json(const std::string& v) { return json(v); }
  template <typename T>
  static json to_json(const std::vector<T>& v) {
    json arr = json::array();
    for (const auto& x : v) arr.push_back(to_json(x));
    return arr;
  }

  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<json()>>> items_;
};

struct Command {
  std::string path;  // e.g. "verify weil"
  CLI::App* app = nullptr;
  std::shared_ptr<OptionSet> options;
  std::function<Outcome(const Context&)> run;
};

/// Table of the requested backend with limit ≥ n; reuses and refreshes the
/// binary cache when `ctx.cache` is set.
coeffs::CoefficientTable acquire_table(const Context& ctx, coeffs::Backend backend, std::uint64_t n,
                                       std::optional<coeffs::TwoDimLimits> block = {});

void register_verify(CLI::App* verify, std::vector<Command>& commands);

/// One pass/fail check inside a verify report.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<", "<=", "==", ">="
  bool passed = false;
};

json check_json(const Check& c);
Check make_check(std::string name, double value, std::string relation, double limit);

}  // namespace circlelab::cli
