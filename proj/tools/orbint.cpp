#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "orbint/campaign.hpp"
#include "orbint/errors.hpp"

using namespace orbint;

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  auto slash = path.find_last_of('/');
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

int finish(const CommandResult& res, const std::string& report_path) {
  for (const auto& l : res.lines) std::cerr << l << "\n";
  std::string text = res.report.dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << text;
  } else if (!write_file(report_path, text)) {
    std::cerr << "error: cannot write " << report_path << "\n";
    return kInput;
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact p-adic orbital integrals and fundamental-lemma checks"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand.
  app.fallthrough();

  std::string config_path, out_path;
  std::uint64_t budget = 0, seed = 0;
  app.add_option("--config", config_path, "JSON config (schema orbint.config/1)");
  app.add_option("--out", out_path, "Report (or constructed function) output path");
  app.add_option("--budget", budget, "Enumeration budget in points");
  app.add_option("--seed", seed, "Seed recorded in the config");

  auto* verify = app.add_subcommand("verify-fl", "Check the fundamental lemma on unit test data");
  std::vector<int> models;
  std::vector<std::int64_t> primes;
  int r_max = -1;
  bool brute = false;
  verify->add_option("--models", models, "Model ids")->delimiter(',');
  verify->add_option("--primes", primes, "Primes")->delimiter(',');
  verify->add_option("--r-max", r_max, "Largest valuation of a");
  verify->add_flag("--brute-force", brute, "Enumerate instead of using exponential sums");

  auto* germ = app.add_subcommand("germ", "Check membership of I(a, phi) in the germ space");
  std::string phi_path, phiprime_path;
  int germ_model = 0, r_probe = 4;
  germ->add_option("--phi", phi_path, "phi as CellFunction JSON")->required();
  germ->add_option("--phiprime", phiprime_path, "phi' as CellFunction JSON (family B)");
  germ->add_option("--model", germ_model, "Model id (inferred when omitted)");
  germ->add_option("--r-probe", r_probe, "First probe valuation");

  auto* kl = app.add_subcommand("kloosterman", "Integral of psi((x + 1/x)/a) over the units");
  std::int64_t kp = 3, ku = 1;
  int kr = 1;
  kl->add_option("--p", kp, "Prime")->required();
  kl->add_option("--r", kr, "Valuation of a")->required();
  kl->add_option("--unit", ku, "Unit part of a");

  auto* transfer = app.add_subcommand("transfer", "Construct phi (or f') realizing a step function");
  std::string target_path, report_path;
  int transfer_model = 1;
  bool kuznetsov = false;
  transfer->add_option("--target", target_path, "Step function JSON")->required();
  transfer->add_option("--model", transfer_model, "Model id");
  transfer->add_flag("--kuznetsov", kuznetsov, "Construct f' on SL2 instead of phi");
  transfer->add_option("--report", report_path, "Round-trip report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInput;
  }

  Config config;
  try {
    if (!config_path.empty()) {
      auto text = slurp(config_path);
      if (!text) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return kInput;
      }
      config = Config::from_json(*text);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  if (budget) config.budget = budget;
  if (seed) config.seed = seed;

  try {
    if (*verify) {
      if (!models.empty() || verify->count("--models")) config.models = models;
      if (!primes.empty()) config.primes = primes;
      if (r_max >= 0) config.r_max = r_max;
      if (brute) config.brute_force = true;
      if (!out_path.empty()) {
        config.json_out = out_path;
        config.csv_out = replace_extension(out_path, ".csv");
      }
      CommandResult res = cmd_verify_fl(config);
      if (!config.csv_out.empty() && !write_file(config.csv_out, res.csv)) {
        std::cerr << "error: cannot write " << config.csv_out << "\n";
        return kInput;
      }
      return finish(res, config.json_out);
    }
    if (*germ) {
      auto phi = slurp(phi_path);
      if (!phi) {
        std::cerr << "error: cannot read " << phi_path << "\n";
        return kInput;
      }
      std::optional<std::string> php;
      if (!phiprime_path.empty()) {
        php = slurp(phiprime_path);
        if (!php) {
          std::cerr << "error: cannot read " << phiprime_path << "\n";
          return kInput;
        }
      }
      return finish(cmd_germ(config, *phi, php, germ_model, r_probe), out_path);
    }
    if (*kl) return finish(cmd_kloosterman(kp, kr, ku), out_path);
    if (*transfer) {
      auto target = slurp(target_path);
      if (!target) {
        std::cerr << "error: cannot read " << target_path << "\n";
        return kInput;
      }
      CommandResult res = cmd_transfer(config, *target, transfer_model, kuznetsov);
      if (!out_path.empty() && !res.constructed.empty() && !write_file(out_path, res.constructed)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kInput;
      }
      if (out_path.empty() && report_path.empty()) {
        for (const auto& l : res.lines) std::cerr << l << "\n";
        std::cout << (res.constructed.empty() ? res.report.dump(2) + "\n" : res.constructed);
        return res.exit_code;
      }
      return finish(res, report_path);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
