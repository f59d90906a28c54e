#include "qwalk/io.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace qwalk {

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;  // 64 chars always suffice for the shortest form
  return std::string(buf.data(), ptr);
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

ojson complex_json(cplx v) { return ojson::array({v.real(), v.imag()}); }

ojson matrix_json(const Eigen::MatrixXcd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string component_label(const WalkSpec& spec, const SiteKey& site,
                            int index) {
  static const char* kChirality[4] = {"L", "R", "D", "U"};
  static const char* kChannel[4] = {"own_l", "own_d", "other_r", "other_u"};
  if (spec.has_origin() && site == origin_key()) {
    if (spec.model == Model::ReducedStar) {
      if (spec.origin_dim() == 4) return kChannel[index];
      return std::string(index < 4 ? "h." : "v.") + kChannel[index % 4];
    }
    const int k = spec.k;
    return (index < k ? "h" : "v") + std::to_string(index % k);
  }
  if (spec.site_dim() == 4) return kChirality[index];
  return std::string(kChannel[index / 4]) + "." + kChirality[index % 4];
}

void write_distribution_csv(std::ostream& out, const DistributionTable& table) {
  csv_row(out, {"copy", "x", "y", "probability"});
  for (const auto& [site, p] : table)
    csv_row(out, {std::to_string(site.copy), std::to_string(site.x),
                  std::to_string(site.y), format_double(p)});
}

ojson distribution_json(const DistributionTable& table) {
  ojson rows = ojson::array();
  for (const auto& [site, p] : table)
    rows.push_back(ojson{{"copy", site.copy},
                         {"x", site.x},
                         {"y", site.y},
                         {"probability", p}});
  return rows;
}

void write_snapshot_jsonl(std::ostream& out, const WalkSpec& spec,
                          const StateVector& s) {
  for (const auto& [site, block] : s.amp)
    for (Eigen::Index i = 0; i < block.size(); ++i) {
      const ojson line{{"copy", site.copy},
                       {"x", site.x},
                       {"y", site.y},
                       {"label", component_label(spec, site, int(i))},
                       {"re", block[i].real()},
                       {"im", block[i].imag()}};
      out << line.dump() << '\n';
    }
}

void write_event_csv(std::ostream& out, const EventTable& table) {
  csv_row(out, {"t", "r", "x", "y", "p"});
  for (const EventRecord& rec : table)
    csv_row(out, {std::to_string(rec.t), std::to_string(rec.site.copy),
                  std::to_string(rec.site.x), std::to_string(rec.site.y),
                  format_double(rec.p)});
}

ojson event_json(const EventTable& table) {
  ojson rows = ojson::array();
  for (const EventRecord& rec : table)
    rows.push_back(ojson{{"t", rec.t},
                         {"r", rec.site.copy},
                         {"x", rec.site.x},
                         {"y", rec.site.y},
                         {"p", rec.p}});
  return rows;
}

ojson genfunc_comparison_json(const GenfuncComparison& c) {
  return ojson{{"site", ojson{{"copy", c.site.copy},
                              {"x", c.site.x},
                              {"y", c.site.y}}},
               {"t", c.t},
               {"simulator", complex_json(c.simulator)},
               {"closed_form", complex_json(c.closed_form)},
               {"abs_diff", std::abs(c.simulator - c.closed_form)},
               {"assumption_flags", c.assumption_flags}};
}

ojson finding_json(const Finding& f) {
  return ojson{{"quantity", f.quantity},
               {"printed_formula_value", f.printed_formula_value},
               {"simulated_value", f.simulated_value},
               {"assumption_flags", f.assumption_flags},
               {"tolerance_class", f.tolerance_class}};
}

ojson findings_json(const std::vector<Finding>& fs) {
  ojson rows = ojson::array();
  for (const Finding& f : fs) rows.push_back(finding_json(f));
  return rows;
}

ojson scalars_json(const GenfuncScalars& s) {
  return ojson{{"lambda", complex_json(s.lambda)},
               {"mu", complex_json(s.mu)},
               {"v", complex_json(s.v)},
               {"delta_plus", complex_json(s.delta_plus)},
               {"delta_minus", complex_json(s.delta_minus)},
               {"w_plus_sq", complex_json(s.w_plus_sq)},
               {"w_minus_sq", complex_json(s.w_minus_sq)},
               {"r0", s.r0},
               {"r1", s.r1},
               {"flags", s.flags}};
}

ojson origin_return_json(const OriginReturnReport& r) {
  return ojson{{"value", matrix_json(r.value)},
               {"ratio_spectral_radius", r.ratio_spectral_radius},
               {"printed_bound", r.printed_bound},
               {"flags", r.flags}};
}

ojson fourier_json(const FourierAlphaReport& r) {
  return ojson{{"value", complex_json(r.value)},
               {"phi1", complex_json(r.phi1)},
               {"phi2", complex_json(r.phi2)},
               {"v_plus", complex_json(r.v_plus)},
               {"v_minus", complex_json(r.v_minus)},
               {"gamma", complex_json(r.gamma)},
               {"sqrt_v", complex_json(r.sqrt_v)},
               {"flags", r.flags}};
}

ojson window_json(const WindowAverage& w) {
  return ojson{{"t0", w.t0},
               {"t1", w.t1},
               {"mean", w.mean},
               {"even_mean", w.even_mean},
               {"odd_mean", w.odd_mean}};
}

ojson theorem1_json(const Theorem1Value& v) {
  return ojson{{"value", v.value},
               {"l_m", v.l_m},
               {"l_p", v.l_p},
               {"l_c", v.l_c},
               {"parity_zero", v.parity_zero},
               {"boundary", v.boundary},
               {"flags", v.flags}};
}

ojson theorem2_mass_json(const Theorem2Mass& m) {
  return ojson{{"point_mass", m.point_mass},
               {"continuous_mass", m.continuous_mass},
               {"total", m.total}};
}

ojson empirical_json(const EmpiricalStats& st) {
  return ojson{{"t", st.t},
               {"r", st.r},
               {"total_mass", st.total_mass},
               {"origin_mass", st.origin_mass},
               {"off_origin_mass", st.off_origin_mass},
               {"max_rescaled_coord", st.max_rescaled_coord},
               {"kolmogorov_x", st.kolmogorov_x},
               {"kolmogorov_y", st.kolmogorov_y}};
}

void write_density_csv(std::ostream& out, const Theorem2Params& p, int r,
                       int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("grid_points must be >= 1");
  csv_row(out, {"x", "f_H", "C_d", "rho_w"});
  for (int i = 0; i < grid_points; ++i) {
    const double x = double(i) / grid_points;
    const double fh = f_h_density(x, p.modulus_a);
    const double cd = c_d_weight(p, r, x);
    csv_row(out, {format_double(x), format_double(fh), format_double(cd),
                  format_double(cd * fh)});
  }
}

void write_histogram_csv(std::ostream& out, const EmpiricalStats& st) {
  csv_row(out, {"axis", "position", "mass"});
  for (const auto& [pos, mass] : st.marginal_x)
    csv_row(out, {"x", format_double(pos), format_double(mass)});
  for (const auto& [pos, mass] : st.marginal_y)
    csv_row(out, {"y", format_double(pos), format_double(mass)});
}

}  // namespace qwalk
