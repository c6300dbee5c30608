#include "orbint/report.hpp"

#include <sstream>

namespace orbint {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::ordered_json value_json(const CycValue& v) {
  nlohmann::ordered_json j;
  j["order"] = pow_int(v.prime(), v.order_exponent());
  j["coefficients"] = nlohmann::ordered_json::array();
  for (const auto& c : v.coefficients()) j["coefficients"].push_back(to_string(c));
  ComplexApprox z = to_complex(v, 20);
  j["decimal"] = {{"re", z.real_text}, {"im", z.imag_text}};
  return j;
}

nlohmann::ordered_json report_envelope(const std::string& command) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  return j;
}

nlohmann::ordered_json orbital_report_json(const OrbitalReport& r, bool timing) {
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["p"] = r.p;
  j["r"] = r.r;
  j["u"] = r.u;
  j["kind"] = r.kind;
  j["left"] = value_json(r.left);
  j["right"] = value_json(r.right);
  j["scale"] = to_string(r.scale);
  j["four"] = to_string(r.four);
  j["verdict"] = r.equal ? "equal" : "unequal";
  j["points"] = r.points;
  if (timing) j["millis"] = r.millis;
  return j;
}

std::string orbital_reports_csv(const std::vector<OrbitalReport>& reports, bool timing) {
  std::ostringstream os;
  os << "model,p,r,u,side_left,side_right,scale,verdict,points,millis\n";
  for (const auto& r : reports) {
    os << r.model << ',' << r.p << ',' << r.r << ',' << r.u << ',' << csv_field(r.left.to_string()) << ','
       << csv_field(r.right.to_string()) << ',' << csv_field(to_string(r.scale)) << ','
       << (r.equal ? "equal" : "unequal") << ',' << r.points << ',';
    if (timing) os << r.millis;
    os << '\n';
  }
  return os.str();
}

}  // namespace orbint
