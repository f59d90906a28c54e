#include <cmath>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "qwalk/io.hpp"

using namespace qwalk;

TEST_CASE("float text is shortest and round-trips") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
  CHECK(format_double(-2.0) == "-2");

  const double values[] = {0.07106422267085517,
                           M_PI,
                           1e300,
                           -4.9406564584124654e-324,
                           0.9999999999999999,
                           123456789.123456789,
                           1e-5};
  for (double v : values) {
    const std::string text = format_double(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(std::signbit(std::strtod(format_double(-0.0).c_str(), nullptr)));
}

TEST_CASE("csv quoting follows rfc 4180") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("") == "");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("a\"b") == "\"a\"\"b\"");
  CHECK(csv_field("a\nb") == "\"a\nb\"");

  std::ostringstream out;
  csv_row(out, {"a", "b,c", "d"});
  CHECK(out.str() == "a,\"b,c\",d\n");
}

TEST_CASE("distribution tables serialize in site order") {
  DistributionTable table;
  table[SiteKey{0, 1, 0}] = 0.25;
  table[SiteKey{-1, 0, 0}] = 0.5;
  table[SiteKey{0, 0, 1}] = 0.25;

  std::ostringstream out;
  write_distribution_csv(out, table);
  CHECK(out.str() ==
        "copy,x,y,probability\n"
        "-1,0,0,0.5\n"
        "0,1,0,0.25\n"
        "0,0,1,0.25\n");

  const ojson rows = distribution_json(table);
  CHECK(rows.size() == 3);
  CHECK(rows[0]["copy"] == -1);
  CHECK(rows[2]["y"] == 1);
  CHECK(rows.dump() ==
        R"([{"copy":-1,"x":0,"y":0,"probability":0.5},)"
        R"({"copy":0,"x":1,"y":0,"probability":0.25},)"
        R"({"copy":0,"x":0,"y":1,"probability":0.25}])");

  // identical input, identical bytes
  std::ostringstream again;
  write_distribution_csv(again, table);
  CHECK(again.str() == out.str());
}

TEST_CASE("snapshot lines carry component labels") {
  Eigen::VectorXcd psi(2);
  psi << cplx{1.0, 0.0}, cplx{0.0, 0.0};
  const WalkSpec lit =
      build_walk(Model::Joined, 2, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(2), Mode::Literal,
                 Boundary::Slide, psi);

  StateVector s;
  s.add(origin_key(), 0, cplx{1.0, 0.0}, lit.origin_dim());
  s.add(SiteKey{0, 1, 0}, 1, cplx{0.0, 0.5}, lit.site_dim());

  std::ostringstream out;
  write_snapshot_jsonl(out, lit, s);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> got;
  while (std::getline(lines, line)) got.push_back(line);
  REQUIRE(got.size() == 6);  // 2 origin slots + 4 chirality slots
  CHECK(got[0] ==
        R"({"copy":-1,"x":0,"y":0,"label":"h0","re":1.0,"im":0.0})");
  CHECK(got[1] ==
        R"({"copy":-1,"x":0,"y":0,"label":"h1","re":0.0,"im":0.0})");
  CHECK(got[3] ==
        R"({"copy":0,"x":1,"y":0,"label":"R","re":0.0,"im":0.5})");

  // unitarized origin doubles into h/v halves
  const WalkSpec uni =
      build_walk(Model::Joined, 2, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(2), Mode::Unitarized,
                 Boundary::Slide, psi);
  CHECK(component_label(uni, origin_key(), 0) == "h0");
  CHECK(component_label(uni, origin_key(), 3) == "v1");

  // channel walk labels
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(16);
  e1[1] = 1.0;
  const WalkSpec rs =
      build_walk(Model::ReducedStar, 3, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(3), Mode::Literal,
                 Boundary::Slide, e1);
  CHECK(component_label(rs, SiteKey{0, 2, 1}, 6) == "own_d.D");
  CHECK(component_label(rs, origin_key(), 2) == "other_r");
  const WalkSpec rsu =
      build_walk(Model::ReducedStar, 3, CoinParams::hadamard(),
                 ReducedCoinParams::defaults(3), Mode::Unitarized,
                 Boundary::Slide, e1);
  CHECK(component_label(rsu, origin_key(), 5) == "v.own_d");
}

TEST_CASE("event tables and findings serialize with fixed keys") {
  EventTable table;
  table.push_back(EventRecord{3, SiteKey{0, 0, 0}, 0.125});
  table.push_back(EventRecord{4, SiteKey{1, 2, 0}, 0.0625});

  std::ostringstream out;
  write_event_csv(out, table);
  CHECK(out.str() ==
        "t,r,x,y,p\n"
        "3,0,0,0,0.125\n"
        "4,1,2,0,0.0625\n");
  CHECK(event_json(table).dump() ==
        R"([{"t":3,"r":0,"x":0,"y":0,"p":0.125},)"
        R"({"t":4,"r":1,"x":2,"y":0,"p":0.0625}])");

  Finding f;
  f.quantity = "origin return";
  f.printed_formula_value = 0.25;
  f.simulated_value = 0.2500001;
  f.assumption_flags = {"eta_pm"};
  f.tolerance_class = "informational";
  const ojson fj = finding_json(f);
  CHECK(fj.dump() ==
        R"({"quantity":"origin return","printed_formula_value":0.25,)"
        R"("simulated_value":0.2500001,"assumption_flags":["eta_pm"],)"
        R"("tolerance_class":"informational"})");
  CHECK(findings_json({f, f}).size() == 2);

  GenfuncComparison c;
  c.site = SiteKey{0, 1, 1};
  c.t = 5;
  c.simulator = cplx{0.5, 0.25};
  c.closed_form = cplx{0.5, 0.0};
  const ojson cj = genfunc_comparison_json(c);
  CHECK(cj["abs_diff"] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cj["site"]["x"] == 1);
  CHECK(cj["simulator"][1] == 0.25);
}

TEST_CASE("matrix and report serializers") {
  Eigen::MatrixXcd m(2, 2);
  m << cplx{1.0, 0.0}, cplx{0.0, -1.0}, cplx{0.5, 0.5}, cplx{0.0, 0.0};
  const ojson mj = matrix_json(m);
  CHECK(mj.dump() == "[[[1.0,0.0],[0.0,-1.0]],[[0.5,0.5],[0.0,0.0]]]");

  const GenfuncScalars sc = genfunc_scalars(CoinParams::hadamard(), 0.1);
  const ojson sj = scalars_json(sc);
  CHECK(sj["lambda"][0] == doctest::Approx(0.07106422267085517));
  CHECK(sj["r1"] == doctest::Approx(0.5));

  const std::vector<double> series{0.0, 0.1, 0.2, 0.3};
  const ojson wj = window_json(window_average(series, 1, 3));
  CHECK(wj["mean"] == doctest::Approx(0.2));
  CHECK(wj["t0"] == 1);
}

TEST_CASE("density and histogram artifacts") {
  const CoinParams had = CoinParams::hadamard();
  Eigen::VectorXcd psi(2);
  psi << cplx{1.0, 0.0}, cplx{0.0, 0.0};
  const Theorem2Params p =
      theorem2_params(had, ReducedCoinParams::defaults(2), psi);

  std::ostringstream out;
  write_density_csv(out, p, 0, 4);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> got;
  while (std::getline(lines, line)) got.push_back(line);
  REQUIRE(got.size() == 5);
  CHECK(got[0] == "x,f_H,C_d,rho_w");
  // spot-check against the same scalar routines and the same float text
  const double x = 0.5;
  const double fh = f_h_density(x, p.modulus_a);
  const double cd = c_d_weight(p, 0, x);
  CHECK(got[3] == "0.5," + format_double(fh) + "," + format_double(cd) + "," +
                      format_double(cd * fh));
  CHECK_THROWS_AS(write_density_csv(out, p, 0, 0), std::invalid_argument);

  EmpiricalStats st;
  st.marginal_x = {{0.25, 0.5}, {0.75, 0.125}};
  st.marginal_y = {{0.5, 0.625}};
  std::ostringstream hout;
  write_histogram_csv(hout, st);
  CHECK(hout.str() ==
        "axis,position,mass\n"
        "x,0.25,0.5\n"
        "x,0.75,0.125\n"
        "y,0.5,0.625\n");
}
