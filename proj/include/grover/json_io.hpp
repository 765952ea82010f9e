#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "grover/experiments.hpp"

namespace grover {

using Json = nlohmann::ordered_json;

Json to_json(const DiscrepancyReport& report);
Json to_json(const CalibrationResult& calibration);
Json to_json(const ScalingFit& fit);
Json to_json(const std::vector<AlphaRow>& rows);
Json to_json(const ConsistencyTable& table);
Json to_json(const FeasibilityResult& result);

Json scenario_summary(const ScenarioResult& result);

// t,theta,tau,P0,P_m,P_u,P_eperp,P_eperp_exact,P_m_numeric
void write_analytic_csv(std::ostream& out, const ScenarioResult& result);

}  // namespace grover
