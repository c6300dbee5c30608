#include "orbint/campaign.hpp"

#include <set>

#include "orbint/errors.hpp"
#include "orbint/report.hpp"
#include "orbint/transfer.hpp"

namespace orbint {

namespace {

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

CommandResult failure(int code, const std::string& command, const std::string& message) {
  CommandResult res;
  res.exit_code = code;
  res.report = report_envelope(command);
  res.report["error"] = message;
  res.lines.push_back("error: " + message);
  return res;
}

int infer_model(int dim, bool with_phiprime) {
  switch (dim) {
    case 10: return 1;
    case 8: return with_phiprime ? 6 : 2;
    case 16: return with_phiprime ? 5 : 3;
    case 28: return 4;
    default: throw ParseError("no model has dim J = " + std::to_string(dim - 1));
  }
}

}  // namespace

Config Config::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::set<std::string> known{"schema", "primes", "models", "r_max", "units", "budget",
                                           "outputs", "seed", "timing", "brute_force"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ParseError("config: unknown key \"" + k + "\"");
  if (j.value("schema", std::string()) != kConfigSchema)
    throw ParseError(std::string("config: schema must be \"") + kConfigSchema + "\"");
  Config c;
  try {
    if (j.contains("primes")) c.primes = j.at("primes").get<std::vector<std::int64_t>>();
    if (j.contains("models")) c.models = j.at("models").get<std::vector<int>>();
    if (j.contains("r_max")) c.r_max = j.at("r_max").get<int>();
    if (j.contains("units")) {
      const auto& u = j.at("units");
      if (u.is_string() && u.get<std::string>() == "all") {
        c.units = UnitSample{};
      } else if (u.is_object() && u.contains("first_k")) {
        c.units.all = false;
        c.units.first_k = u.at("first_k").get<int>();
        if (c.units.first_k < 1) throw ParseError("config: first_k must be positive");
      } else {
        throw ParseError("config: units must be \"all\" or {\"first_k\": k}");
      }
    }
    if (j.contains("budget")) c.budget = j.at("budget").get<std::uint64_t>();
    if (j.contains("outputs")) {
      const auto& o = j.at("outputs");
      c.json_out = o.value("json", std::string());
      c.csv_out = o.value("csv", std::string());
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
    if (j.contains("brute_force")) c.brute_force = j.at("brute_force").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  for (auto p : c.primes)
    if (!is_prime(p)) throw ParseError("config: " + std::to_string(p) + " is not a prime");
  for (int m : c.models)
    if (m < 1 || m > 6) throw ParseError("config: model ids run from 1 to 6");
  if (c.r_max < 0) throw ParseError("config: r_max must be >= 0");
  return c;
}

nlohmann::ordered_json Config::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kConfigSchema;
  j["primes"] = primes;
  j["models"] = models;
  j["r_max"] = r_max;
  if (units.all)
    j["units"] = "all";
  else
    j["units"] = {{"first_k", units.first_k}};
  j["budget"] = budget;
  j["outputs"] = {{"json", json_out}, {"csv", csv_out}};
  j["seed"] = seed;
  j["timing"] = timing;
  j["brute_force"] = brute_force;
  return j;
}

CommandResult cmd_verify_fl(const Config& config) {
  CommandResult res;
  res.report = report_envelope("verify-fl");
  res.report["config"] = config.to_json();
  res.report["reports"] = nlohmann::ordered_json::array();
  std::vector<OrbitalReport> all;
  std::size_t unequal = 0;
  for (int id : config.models) {
    ModelSpec model = ModelSpec::get(id);
    for (std::int64_t p : config.primes) {
      std::vector<OrbitalReport> reps;
      try {
        reps = verify_fl(model, p, config.r_max, config.units, config.orbital_options());
      } catch (const OddPrimeRequired& e) {
        res.exit_code = kBudget;
        res.lines.push_back("model " + std::to_string(id) + ", p " + std::to_string(p) + ": " + e.what());
        continue;
      } catch (const BudgetExceeded& e) {
        res.exit_code = kBudget;
        res.lines.push_back("model " + std::to_string(id) + ", p " + std::to_string(p) + ": " + e.what());
        continue;
      }
      for (const auto& r : reps) {
        res.report["reports"].push_back(orbital_report_json(r, config.timing));
        if (!r.equal) {
          ++unequal;
          res.lines.push_back("unequal: model " + std::to_string(r.model) + ", p " + std::to_string(r.p) + ", r " +
                              std::to_string(r.r) + ", u " + std::to_string(r.u) + " (" + r.kind + "): " +
                              r.left.to_string() + " vs " + r.right.to_string());
        }
        all.push_back(r);
      }
    }
  }
  if (unequal > 0 && res.exit_code == kOk) res.exit_code = kUnequal;
  res.report["summary"] = {{"total", all.size()}, {"equal", all.size() - unequal}, {"unequal", unequal}};
  res.csv = orbital_reports_csv(all, config.timing);
  res.lines.push_back(std::to_string(all.size()) + " comparisons, " + std::to_string(unequal) + " unequal");
  return res;
}

CommandResult cmd_germ(const Config& config, const std::string& phi_text,
                       const std::optional<std::string>& phiprime_text, int model, int r_probe) {
  CellFunction phi, phiprime;
  try {
    phi = CellFunction::from_json(phi_text);
    if (phiprime_text) phiprime = CellFunction::from_json(*phiprime_text);
    if (model == 0) model = infer_model(phi.dim(), phiprime_text.has_value());
  } catch (const ParseError& e) {
    return failure(kInput, "germ", e.what());
  }
  if (model < 1 || model > 6) return failure(kInput, "germ", "model ids run from 1 to 6");
  ModelSpec spec = ModelSpec::get(model);
  if (phi.dim() != spec.n + 1)
    return failure(kInput, "germ", "phi has dimension " + std::to_string(phi.dim()) + ", model " +
                                       std::to_string(model) + " needs " + std::to_string(spec.n + 1));
  if (spec.family == Family::B && (!phiprime_text || phiprime.dim() != spec.y_dim))
    return failure(kInput, "germ", "model " + std::to_string(model) + " needs phi' of dimension " +
                                       std::to_string(spec.y_dim));
  GermOptions opt;
  opt.r_probe = r_probe;
  opt.orbital = config.orbital_options();
  CommandResult res;
  res.report = report_envelope("germ");
  res.report["model"] = model;
  res.report["p"] = phi.prime();
  try {
    GermResult g = check_germ_membership(spec, phi, spec.family == Family::B ? &phiprime : nullptr, opt);
    res.report["germ"] = {{"c_plus", value_json(g.germ.c_plus)},
                          {"c_minus", value_json(g.germ.c_minus)},
                          {"m", g.germ.m},
                          {"r0", g.germ.r0}};
    res.report["verdict"] = "member";
    res.report["retries"] = g.retries;
    res.report["probes"] = nlohmann::ordered_json::array();
    for (const auto& pr : g.probes)
      res.report["probes"].push_back({{"v", pr.v}, {"u", pr.u}, {"left", value_json(pr.left)},
                                      {"right", value_json(pr.right)}, {"equal", pr.equal}});
    res.lines.push_back("c+ = " + g.germ.c_plus.to_string() + ", c- = " + g.germ.c_minus.to_string() + ", m = " +
                        std::to_string(g.germ.m) + ", r0 = " + std::to_string(g.germ.r0) + ": member");
  } catch (const Mismatch& e) {
    res.exit_code = kUnequal;
    res.report["verdict"] = "mismatch";
    res.report["error"] = e.what();
    res.lines.push_back(e.what());
  } catch (const OddPrimeRequired& e) {
    return failure(kBudget, "germ", e.what());
  } catch (const BudgetExceeded& e) {
    return failure(kBudget, "germ", e.what());
  }
  return res;
}

CommandResult cmd_kloosterman(std::int64_t p, int r, std::int64_t unit) {
  if (!is_prime(p)) return failure(kInput, "kloosterman", std::to_string(p) + " is not a prime");
  if (r < 1) return failure(kInput, "kloosterman", "r must be >= 1");
  if (unit % p == 0) return failure(kInput, "kloosterman", "unit must be prime to p");
  CycValue v = kloosterman(p, r, unit);
  ComplexApprox z = to_complex(v, 20);
  CommandResult res;
  res.report = report_envelope("kloosterman");
  res.report["p"] = p;
  res.report["r"] = r;
  res.report["unit"] = unit;
  res.report["value"] = value_json(v);
  res.lines.push_back("Kl(" + std::to_string(p) + "^" + std::to_string(r) + " * " + std::to_string(unit) +
                      ") = " + v.to_string() + " ~ " + z.real_text + " + " + z.imag_text + "i");
  return res;
}

CommandResult cmd_transfer(const Config& config, const std::string& target_text, int model, bool kuznetsov) {
  StepFunction target;
  try {
    target = StepFunction::from_json(target_text);
  } catch (const ParseError& e) {
    return failure(kInput, "transfer", e.what());
  } catch (const NotInDomain& e) {
    return failure(kInput, "transfer", e.what());
  }
  if (!kuznetsov && (model < 1 || model > 6)) return failure(kInput, "transfer", "model ids run from 1 to 6");
  TransferOptions opt;
  opt.orbital = config.orbital_options();
  TransferResult t;
  try {
    t = kuznetsov ? build_fprime_from_step(target, opt) : build_phi_from_step(target, ModelSpec::get(model), opt);
  } catch (const OddPrimeRequired& e) {
    return failure(kBudget, "transfer", e.what());
  } catch (const BudgetExceeded& e) {
    return failure(kBudget, "transfer", e.what());
  } catch (const CellShrinkFailed& e) {
    return failure(kUnequal, "transfer", e.what());
  }
  CommandResult res;
  res.report = report_envelope("transfer");
  res.report["side"] = kuznetsov ? "kuznetsov" : "jordan";
  if (!kuznetsov) res.report["model"] = model;
  res.report["function"] = nlohmann::ordered_json::parse(t.function.to_json());
  if (t.phiprime) res.report["phiprime"] = nlohmann::ordered_json::parse(t.phiprime->to_json());
  res.report["probes"] = nlohmann::ordered_json::array();
  for (const auto& pr : t.probes)
    res.report["probes"].push_back({{"a", pr.a.to_string()}, {"expected", to_string(pr.expected)},
                                    {"got", value_json(pr.got)}, {"equal", pr.equal}});
  bool exact = t.exact();
  res.report["verdict"] = exact ? "exact" : "inexact";
  res.constructed = t.function.to_json();
  res.exit_code = exact ? kOk : kUnequal;
  std::size_t bad = 0;
  for (const auto& pr : t.probes)
    if (!pr.equal) {
      ++bad;
      res.lines.push_back("probe a = " + pr.a.to_string() + ": expected " + to_string(pr.expected) + ", got " +
                          pr.got.to_string());
    }
  res.lines.push_back(std::to_string(t.probes.size()) + " probes, " + std::to_string(bad) + " failed");
  return res;
}

}  // namespace orbint
