#pragma once
// Artifact writers shared by the CLI and the golden-file tests: RFC-4180 CSV,
// stable-key-order JSON, and a single float-to-text routine so identical runs
// emit identical bytes.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwalk/genfunc.hpp"
#include "qwalk/limit_laws.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

using ojson = nlohmann::ordered_json;

// shortest decimal text that parses back to the same double
std::string format_double(double v);

// RFC-4180: wrap the field in quotes when it holds a comma, a quote, or a
// line break; embedded quotes are doubled
std::string csv_field(const std::string& raw);
void csv_row(std::ostream& out, const std::vector<std::string>& fields);

ojson complex_json(cplx v);                    // [re, im]
ojson matrix_json(const Eigen::MatrixXcd& m);  // rows of [re, im] pairs

// name of one component of a stored amplitude block: chirality letters for
// lattice blocks, channel names for the 16-dim walk, h/v copy slots at the
// shared origin
std::string component_label(const WalkSpec& spec, const SiteKey& site,
                            int index);

void write_distribution_csv(std::ostream& out, const DistributionTable& table);
ojson distribution_json(const DistributionTable& table);

// one object per line: {copy,x,y,label,re,im}
void write_snapshot_jsonl(std::ostream& out, const WalkSpec& spec,
                          const StateVector& s);

struct EventRecord {
  long t{0};
  SiteKey site;
  double p{0.0};
};
using EventTable = std::vector<EventRecord>;

void write_event_csv(std::ostream& out, const EventTable& table);
ojson event_json(const EventTable& table);

struct GenfuncComparison {
  SiteKey site;
  long t{0};
  cplx simulator;
  cplx closed_form;
  std::vector<std::string> assumption_flags;
};
ojson genfunc_comparison_json(const GenfuncComparison& c);

struct Finding {
  std::string quantity;
  double printed_formula_value{0.0};
  double simulated_value{0.0};
  std::vector<std::string> assumption_flags;
  std::string tolerance_class;
};
ojson finding_json(const Finding& f);
ojson findings_json(const std::vector<Finding>& fs);

ojson scalars_json(const GenfuncScalars& s);
ojson origin_return_json(const OriginReturnReport& r);
ojson fourier_json(const FourierAlphaReport& r);
ojson window_json(const WindowAverage& w);
ojson theorem1_json(const Theorem1Value& v);
ojson theorem2_mass_json(const Theorem2Mass& m);
ojson empirical_json(const EmpiricalStats& st);

// x, f_H, C_d, rho_w on the uniform grid i/grid_points, i = 0..grid_points-1;
// rho_w is the one-axis continuous profile C_d(x) f_H(x)
void write_density_csv(std::ostream& out, const Theorem2Params& p, int r,
                       int grid_points);

// axis,position,mass rows for both rescaled marginals
void write_histogram_csv(std::ostream& out, const EmpiricalStats& st);

}  // namespace qwalk
