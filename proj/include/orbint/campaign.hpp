#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "orbint/orbital.hpp"

namespace orbint {

inline constexpr const char* kConfigSchema = "orbint.config/1";

struct Config {
  std::vector<std::int64_t> primes{3};
  std::vector<int> models{1};
  int r_max = 1;
  UnitSample units;
  std::uint64_t budget = 1000000000ULL;
  std::string json_out;
  std::string csv_out;
  std::uint64_t seed = 1;
  bool timing = false;
  bool brute_force = false;

  static Config from_json(const std::string& text);
  nlohmann::ordered_json to_json() const;
  OrbitalOptions orbital_options() const { return OrbitalOptions{budget, brute_force}; }
};

enum ExitCode : int { kOk = 0, kUnequal = 2, kBudget = 3, kInput = 4 };

struct CommandResult {
  int exit_code = kOk;
  nlohmann::ordered_json report;
  std::string csv;                // verify-fl only
  std::string constructed;        // transfer only: the constructed function as JSON
  std::vector<std::string> lines; // human-readable summary
};

CommandResult cmd_verify_fl(const Config& config);
// model 0 infers the model from the dimension of phi and the presence of phi'.
CommandResult cmd_germ(const Config& config, const std::string& phi_text, const std::optional<std::string>& phiprime_text,
                       int model, int r_probe);
CommandResult cmd_kloosterman(std::int64_t p, int r, std::int64_t unit);
CommandResult cmd_transfer(const Config& config, const std::string& target_text, int model, bool kuznetsov);

}  // namespace orbint
