#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "orbint/cyclotomic.hpp"
#include "orbint/orbital.hpp"

namespace orbint {

inline constexpr const char* kReportSchema = "orbint.report/1";

// {order, coefficients, decimal}; coefficients in the basis 1, zeta, ... of the given order.
nlohmann::ordered_json value_json(const CycValue& v);
nlohmann::ordered_json report_envelope(const std::string& command);
nlohmann::ordered_json orbital_report_json(const OrbitalReport& r, bool timing);

std::string orbital_reports_csv(const std::vector<OrbitalReport>& reports, bool timing);

}  // namespace orbint
