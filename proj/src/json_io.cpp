#include "grover/json_io.hpp"

#include <ostream>

#include "grover/detail/csv.hpp"

namespace grover {

namespace {

const char* design_name(const PairDesign& design) {
  if (std::holds_alternative<LocalAdiabatic>(design)) return "local_adiabatic";
  if (std::holds_alternative<TailoredScheme>(design)) return "tailored";
  return "explicit";
}

}  // namespace

Json to_json(const DiscrepancyReport& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["tau_max"] = r.tau_max;
  j["samples"] = r.samples;
  j["survival"] = {{"gap_vs_exact", r.survival_gap},
                   {"limit", r.survival_limit},
                   {"ok", r.survival_ok()},
                   {"gap_vs_two_level", r.survival_gap_two_level},
                   {"lambda_closed_form", r.lambda_closed_form},
                   {"lambda_two_level", r.lambda_two_level}};
  j["excited"] = {{"gap_vs_exact", r.excited_gap},
                  {"limit", r.excited_limit},
                  {"ok", r.excited_ok()},
                  {"max_printed", r.excited_max_printed},
                  {"max_exact", r.excited_max_exact},
                  {"max_two_level", r.excited_max_two_level},
                  {"prose_bound", r.excited_prose_bound}};
  j["closure"] = {{"gap_printed", r.closure_gap_printed}, {"gap_exact", r.closure_gap_exact}};
  return j;
}

Json to_json(const CalibrationResult& c) {
  return Json{{"omega0T", c.omega0T},
              {"achieved_fidelity", c.achieved_fidelity},
              {"iterations", c.iterations},
              {"bracket", {c.bracket[0], c.bracket[1]}},
              {"non_monotone", c.non_monotone},
              {"n_steps", c.n_steps}};
}

Json to_json(const ScalingFit& fit) {
  Json points = Json::array();
  for (const auto& p : fit.points) {
    Json q{{"f", p.f}, {"ln_inv_f", p.x}, {"ln_omega0T", p.y}, {"censored", p.censored}};
    if (!p.censored) q["calibration"] = to_json(p.calibration);
    points.push_back(std::move(q));
  }
  return Json{{"beta", fit.beta},
              {"intercept", fit.intercept},
              {"residual_rms", fit.residual},
              {"monotone", fit.monotone},
              {"censored", fit.censored},
              {"lower_bound_valid", fit.lower_bound_valid},
              {"warnings", fit.warnings},
              {"points", std::move(points)}};
}

Json to_json(const std::vector<AlphaRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(Json{{"alpha", r.alpha}, {"fit", to_json(r.fit)}});
  return out;
}

Json to_json(const ConsistencyTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json j{{"N", r.n_atoms},
           {"M", r.n_marked},
           {"pm_effective3", r.pm_effective},
           {"pm_collective5", r.pm_collective},
           {"delta_effective3", r.delta_effective},
           {"max_partition_correction", r.max_correction}};
    if (r.pm_register) {
      j["pm_full_register"] = *r.pm_register;
      j["delta_full_register"] = *r.delta_register;
    }
    rows.push_back(std::move(j));
  }
  return Json{{"G", table.cavity_coupling}, {"rows", std::move(rows)}, {"warnings", table.warnings}};
}

Json to_json(const FeasibilityResult& r) {
  return Json{{"ratio", r.ratio}, {"threshold", r.threshold}, {"pass", r.pass}};
}

Json scenario_summary(const ScenarioResult& result) {
  const ScenarioConfig& c = result.config;
  const SearchProblem& p = c.problem;
  Json j;
  j["name"] = c.name;
  j["tier"] = to_string(c.tier);
  j["rwa"] = c.rwa;
  j["problem"] = {{"N", p.n_atoms()},
                  {"M", p.n_marked()},
                  {"f", p.fraction()},
                  {"G", p.cavity_coupling()},
                  {"delta", p.detuning()}};
  Json pulses{{"design", design_name(result.pair.design())}, {"omega0T", result.omega0T}};
  if (const auto* la = std::get_if<LocalAdiabatic>(&result.pair.design())) {
    pulses["epsilon"] = la->epsilon;
    pulses["effective_epsilon"] = la->effective_epsilon;
  } else if (const auto* ts = std::get_if<TailoredScheme>(&result.pair.design())) {
    pulses["alpha"] = ts->plateau;
  }
  pulses["t_start"] = result.pair.t_start();
  pulses["t_end"] = result.pair.t_end();
  j["pulses"] = std::move(pulses);
  j["grid"] = {{"n_steps", c.n_steps}, {"sample_stride", c.sample_stride}};
  if (result.calibration) j["calibration"] = to_json(*result.calibration);

  Json fin;
  const PopulationSeries& s = result.populations;
  for (std::size_t k = 0; k < s.columns.size(); ++k) fin[s.columns[k]] = s.data[k].back();
  fin["norm"] = s.norms.back();
  j["final"] = std::move(fin);
  j["norm_drift"] = result.trajectory.norm_drift;

  if (result.comparison) {
    const ScenarioComparison& cmp = *result.comparison;
    j["analytic_comparison"] = {{"max_pm_gap", cmp.max_pm_gap},
                                {"final_pm_gap", cmp.final_pm_gap},
                                {"final_pm_analytic", cmp.final_pm_analytic},
                                {"min_p0_numeric", cmp.min_p0_numeric},
                                {"max_pe_numeric", cmp.max_pe_numeric},
                                {"discrepancy", to_json(cmp.report)}};
  }
  return j;
}

void write_analytic_csv(std::ostream& out, const ScenarioResult& result) {
  if (!result.comparison) return;
  const ScenarioComparison& cmp = *result.comparison;
  out << "t,theta,tau,P0,P_m,P_u,P_eperp,P_eperp_exact,P_m_numeric\n";
  const auto& pm = result.populations.column("P_m");
  for (std::size_t s = 0; s < cmp.analytic.size(); ++s) {
    const AnalyticPopulations& a = cmp.analytic[s];
    const double row[] = {result.populations.times[s], cmp.theta[s], cmp.tau[s], a.p0, a.pm,
                          a.pu, a.pe, a.pe_exact, pm[s]};
    detail::write_row(out, row, 9);
  }
}

}  // namespace grover
