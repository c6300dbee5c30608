#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbint/measure.hpp"
#include "orbint/orbital.hpp"

namespace orbint {

// Locally constant function on F^x: one-dimensional cells avoiding 0.
class StepFunction {
 public:
  StepFunction() = default;
  // Band taken from the cells.
  explicit StepFunction(CellFunction f);
  StepFunction(CellFunction f, int r_min, int r_max);
  static StepFunction zero(std::int64_t p);

  const CellFunction& function() const { return f_; }
  std::int64_t prime() const { return f_.prime(); }
  int r_min() const { return r_min_; }
  int r_max() const { return r_max_; }
  bool is_zero() const { return f_.is_zero(); }
  Rational operator()(const PAdic& a) const;

  std::string to_json() const;
  static StepFunction from_json(const std::string& text);

 private:
  void validate() const;
  CellFunction f_;
  int r_min_ = 0;
  int r_max_ = 0;
};

struct GermData {
  CycValue c_plus;
  CycValue c_minus;
  int m = 1;
  int r0 = 0;
};

// Smallest m with |p^m| < |2|.
int germ_level(std::int64_t p);

// Integral of psi((x + 1/x)/a) over sign + p^m O.
CycValue germ_piece(const PAdic& a, int sign, int m);
CycValue germ_reference(const PAdic& a, const GermData& germ);

struct GermOptions {
  int r_probe = 4;
  int unit_level = 1;  // probe units run over unit_reps(p, unit_level)
  OrbitalOptions orbital;
};

struct GermProbe {
  int v = 0;
  std::int64_t u = 1;
  CycValue left;   // |a|^{(1-n)/2} I(a)
  CycValue right;  // germ_reference(a)
  bool equal = false;
};

struct GermResult {
  GermData germ;
  bool member = false;
  int retries = 0;
  std::vector<GermProbe> probes;
};

// phiprime is required for family B and ignored for family A. Throws Mismatch on failure.
GermResult check_germ_membership(const ModelSpec& model, const CellFunction& phi, const CellFunction* phiprime,
                                 const GermOptions& options = {});

struct TransferOptions {
  int max_depth = 12;
  OrbitalOptions orbital;
};

struct TransferProbe {
  PAdic a;
  Rational expected;
  CycValue got;
  bool equal = false;
};

struct TransferResult {
  CellFunction function;                 // phi on F + J, or f' in Bruhat coordinates
  std::optional<CellFunction> phiprime;  // family B only
  std::vector<TransferProbe> probes;
  bool exact() const;
};

// Sub-cell centers of every support cell plus points at valuations r_min - 1 .. r_max + 1.
std::vector<PAdic> probe_grid(const StepFunction& target);

TransferResult build_phi_from_step(const StepFunction& target, const ModelSpec& model,
                                   const TransferOptions& options = {});
TransferResult build_fprime_from_step(const StepFunction& target, const TransferOptions& options = {});

}  // namespace orbint
