#include "curvdisk/io.hpp"

#include <fstream>
#include <stdexcept>

namespace curvdisk {

Json to_json(const GridSpec& g) {
  return Json{{"n_theta", g.n_theta},
              {"n_r", g.n_r},
              {"r_map", to_string(g.r_map)}};
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  g.n_theta = j.at("n_theta").get<int>();
  g.n_r = j.at("n_r").get<int>();
  g.r_map = radial_map_from_string(j.at("r_map").get<std::string>());
  validate_spec(g);
  return g;
}

Json to_json(const DiskField& f) {
  std::vector<double> vals;
  vals.reserve(f.values.size());
  for (int i = 0; i < f.values.rows(); ++i)
    for (int j = 0; j < f.values.cols(); ++j) vals.push_back(f.values(i, j));
  return Json{{"grid", to_json(f.grid)}, {"values", vals}};
}

DiskField field_from_json(const Json& j) {
  DiskField f;
  f.grid = grid_from_json(j.at("grid"));
  const auto& vals = j.at("values");
  if (static_cast<int>(vals.size()) != f.grid.n_r * f.grid.n_theta)
    throw std::invalid_argument("field values size mismatch");
  f.values.resize(f.grid.n_r, f.grid.n_theta);
  int idx = 0;
  for (int i = 0; i < f.grid.n_r; ++i)
    for (int jj = 0; jj < f.grid.n_theta; ++jj)
      f.values(i, jj) = vals[idx++].get<double>();
  return f;
}

Json to_json(const BoundaryFunction& g) {
  std::vector<std::vector<double>> coeffs;
  for (int k = 0; k < g.coeffs.size(); ++k)
    coeffs.push_back({g.coeffs(k).real(), g.coeffs(k).imag()});
  return Json{{"n_theta", g.n_theta}, {"coeffs", coeffs}};
}

BoundaryFunction boundary_from_json(const Json& j) {
  BoundaryFunction g;
  g.n_theta = j.at("n_theta").get<int>();
  const auto& coeffs = j.at("coeffs");
  if (static_cast<int>(coeffs.size()) != g.n_theta / 2 + 1)
    throw std::invalid_argument("boundary coeffs size mismatch");
  g.coeffs.resize(coeffs.size());
  for (size_t k = 0; k < coeffs.size(); ++k)
    g.coeffs(k) = std::complex<double>(coeffs[k][0].get<double>(),
                                       coeffs[k][1].get<double>());
  return g;
}

Json to_json(const BubbleParams& p) {
  return Json{{"a", {p.a(0), p.a(1)}}, {"phi", p.phi}, {"k", p.k}, {"hh", p.hh}};
}

BubbleParams bubble_params_from_json(const Json& j) {
  BubbleParams p;
  p.a = Eigen::Vector2d(j.at("a")[0].get<double>(), j.at("a")[1].get<double>());
  p.phi = j.at("phi").get<double>();
  p.k = j.at("k").get<double>();
  p.hh = j.at("hh").get<double>();
  return p;
}

Json to_json(const EnergyBreakdown& e) {
  return Json{{"total", e.total},
              {"dirichlet", e.dirichlet},
              {"interior_linear", e.interior_linear},
              {"interior_exp", e.interior_exp},
              {"boundary_linear", e.boundary_linear},
              {"boundary_exp", e.boundary_exp}};
}

Json to_json(const ConstraintState& s) {
  return Json{{"A", s.A}, {"B", {s.B(0), s.B(1)}},
              {"chi", {s.chi(0), s.chi(1), s.chi(2)}}};
}

Json to_json(const HypothesisReport& r) {
  Json cps = Json::array();
  for (const auto& cp : r.phi_critical_points)
    cps.push_back(Json{{"theta", cp.theta},
                       {"dnu_phi", cp.dnu_phi},
                       {"dtau_phi", cp.dtau_phi}});
  Json dee = Json::array();
  for (const auto& c : r.dee_crossings)
    dee.push_back(Json{{"theta", c.theta}, {"dtau_dee", c.dtau_dee}});
  return Json{{"a", r.a},
              {"b_minus", r.b_minus},
              {"b_plus", r.b_plus},
              {"thm21_i", r.thm21_i},
              {"thm21_ii", r.thm21_ii},
              {"thm21_iii", r.thm21_iii},
              {"thm22_i", r.thm22_i},
              {"thm22_ii", r.thm22_ii},
              {"nonexistence", r.nonexistence},
              {"phi_critical_points", cps},
              {"degenerate_constant", r.degenerate_constant},
              {"partial", r.partial},
              {"dee_crossings", dee},
              {"min_h", r.min_h},
              {"max_sqrt_absK_boundary", r.max_sqrt_absK_boundary},
              {"max_sqrt_absK_disk", r.max_sqrt_absK_disk}};
}

Json to_json(const SolveReport& r, bool embed_field) {
  Json j{{"converged", r.converged},
         {"newton_iters", r.newton_iters},
         {"final_residual", r.final_residual},
         {"identity_residuals", r.identity_residuals},
         {"morse_index", r.morse_index},
         {"near_zero_modes", r.near_zero_modes},
         {"eps", r.eps},
         {"reason", r.reason},
         {"blowup_watch", r.blowup_watch},
         {"sup_u", r.sup_u},
         {"interior_mass", r.interior_mass},
         {"boundary_mass", r.boundary_mass},
         {"resolution_warning", r.resolution_warning},
         {"residual_history", r.residual_history}};
  std::vector<double> mult(r.multipliers.data(),
                           r.multipliers.data() + r.multipliers.size());
  j["multipliers"] = mult;
  if (embed_field) j["u"] = to_json(r.u);
  return j;
}

Json to_json(const ContinuationTrace& t) {
  Json reports = Json::array();
  for (const auto& r : t.reports) reports.push_back(to_json(r, false));
  Json masses = Json::array();
  for (const auto& m : t.mass_trace)
    masses.push_back(Json{{"area", m.first}, {"length", m.second}});
  return Json{{"eps_schedule", t.eps_schedule},
              {"reports", reports},
              {"sup_u_trace", t.sup_u_trace},
              {"mass_trace", masses},
              {"completed", t.completed}};
}

Json to_json(const IdentityResiduals& r) {
  return Json{{"gauss_bonnet", r.gauss_bonnet},
              {"kazdan_warner", r.kazdan_warner},
              {"pohozaev", r.pohozaev}};
}

Json to_json(const BlowupFit& f, bool embed_field) {
  Json j{{"a_fit", {f.a_fit(0), f.a_fit(1)}},
         {"phi_hat", f.phi_hat},
         {"k_hat", f.k_hat},
         {"h_hat", f.h_hat},
         {"psi_sup", f.psi_sup},
         {"interior_mass", f.interior_mass},
         {"boundary_mass", f.boundary_mass},
         {"nearest_boundary_point", {f.p(0), f.p(1)}},
         {"dtau_phi_at_p", f.dtau_phi_at_p},
         {"dnu_phi_at_p", f.dnu_phi_at_p},
         {"beyond_resolution", f.beyond_resolution}};
  if (embed_field) j["psi"] = to_json(f.psi);
  return j;
}

Json to_json(const LocalizationVerdict& v) {
  return Json{{"tangential_ok", v.tangential_ok},
              {"normal_ok", v.normal_ok},
              {"degenerate", v.degenerate},
              {"consistent", v.consistent},
              {"dtau_phi", v.dtau_phi},
              {"dnu_phi", v.dnu_phi},
              {"dtau_scale", v.dtau_scale},
              {"interpretation", v.interpretation}};
}

Json to_json(const DegreeReport& d) {
  return Json{{"degree", d.degree},
              {"min_chi_norm", d.min_chi_norm},
              {"min_homotopy_norm", d.min_homotopy_norm},
              {"refinement", d.refinement},
              {"admissible", d.admissible}};
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);  // LF endings on all platforms
  if (!out) throw std::runtime_error("cannot open " + path.string());
  for (size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << Json(row[i]).dump();  // shortest-roundtrip doubles
    }
    out << "\n";
  }
}

void write_csv_rows(const std::filesystem::path& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  for (size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

std::string format_double(double v) { return Json(v).dump(); }

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace curvdisk
