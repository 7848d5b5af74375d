// Command-line front end for the cubic birth-and-death library.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubic_bdp/cubic_bdp.hpp"

using namespace cubic_bdp;
using json = nlohmann::ordered_json;

namespace {

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::string family = "p1";
  double c = 1.0;
  double mu0 = 0.0;
  std::string z = "1+1i";
  long nmax = -1;  // command specific default when negative
  double tol = kDefaultQuadTol;
  std::string out;
  std::string format = "csv";

  // command specific
  std::string element = "all";
  double xmax = 1e5;
  long count = 0;
  std::string mode = "combo";
  double tau = 0.0;
  std::string times = "0.0001,0.001,0.01,0.1";
  long states = 3;
  long trunc = 0;
};

Family family_of(const RunConfig& cfg) { return family_from_string(cfg.family); }

json to_json(complex v) { return json::array({v.real(), v.imag()}); }

json schedule_json(const RateSchedule& s) {
  return {{"family", std::string(to_string(s.family()))}, {"c", s.c()}, {"mu0", s.mu0()}};
}

std::vector<Element> elements_of(const RunConfig& cfg) {
  if (cfg.element == "all") {
    return {kAllElements.begin(), kAllElements.end()};
  }
  try {
    return {element_from_string(cfg.element)};
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& v : parse_complex_list(text)) {
    if (v.imag() != 0.0) {
      throw usage_error("expected real values in '" + text + "'");
    }
    out.push_back(v.real());
  }
  return out;
}

void validate(const RunConfig& cfg) {
  if (cfg.family != "p1" && cfg.family != "p2") {
    throw usage_error("--family must be p1 or p2");
  }
  if (!(cfg.c > 0.0)) {
    throw usage_error("--c must be positive");
  }
  if (!(cfg.mu0 >= 0.0)) {
    throw usage_error("--mu0 must be non-negative");
  }
  if (cfg.format != "csv" && cfg.format != "json") {
    throw usage_error("--format must be csv or json");
  }
  if (!(cfg.tol >= kMinQuadTol)) {
    throw usage_error("--tol must be at least 1e-13");
  }
  if (cfg.mode != "d" && cfg.mode != "combo") {
    throw usage_error("--mode must be d or combo");
  }
}

// ---------------------------------------------------------------------------

void cmd_rates(const RunConfig& cfg, std::ostream& os) {
  const RateSchedule s(family_of(cfg), cfg.c, cfg.mu0);
  const long nmax = cfg.nmax < 0 ? 10 : cfg.nmax;
  const auto dual_ok = s.is_pure();
  if (cfg.format == "csv") {
    CsvWriter w(os, {"n", "lambda", "mu", "pi"});
    for (long n = 0; n <= nmax; ++n) {
      w.cell(n).cell(s.lambda(n)).cell(s.mu(n)).cell(pi_n(s, n)).end_row();
    }
    return;
  }
  json j;
  j["schedule"] = schedule_json(s);
  json rows = json::array();
  for (long n = 0; n <= nmax; ++n) {
    rows.push_back({{"n", n}, {"lambda", s.lambda(n)}, {"mu", s.mu(n)}, {"pi", pi_n(s, n)}});
  }
  j["rates"] = rows;
  const auto st = stieltjes_check(s, 100000);
  j["stieltjes"] = {{"N", 100000},
                    {"sum_pi", st.sum_pi},
                    {"sum_recip", st.sum_recip},
                    {"slope_pi", st.slope_pi},
                    {"slope_recip", st.slope_recip}};
  if (dual_ok) {
    j["kmg_dual"] = schedule_json(kmg_dual(s));
  }
  os << j.dump(2) << '\n';
}

void cmd_polys(const RunConfig& cfg, std::ostream& os) {
  const RateSchedule s(family_of(cfg), cfg.c, cfg.mu0);
  const long nmax = cfg.nmax < 0 ? 12 : cfg.nmax;
  const auto zs = parse_complex_list(cfg.z);
  if (cfg.format == "csv") {
    CsvWriter w(os, {"z_re", "z_im", "n", "re", "im"});
    for (complex z : zs) {
      const auto p = eval_poly_sequence(s, z, nmax);
      for (std::size_t n = 0; n < p.values.size(); ++n) {
        w.cell(z).cell(static_cast<long>(n)).cell(p.values[n]).end_row();
      }
    }
    return;
  }
  json j;
  j["schedule"] = schedule_json(s);
  json res = json::array();
  for (complex z : zs) {
    const auto p = eval_poly_sequence(s, z, nmax);
    json vals = json::array();
    for (complex v : p.values) {
      vals.push_back(to_json(v));
    }
    json item = {{"z", to_json(z)}, {"values", vals}, {"overflow", p.overflow}};
    if (z != complex(0.0) || s.is_pure()) {
      if (std::abs(z) >= 1e-12) {
        item["relation_error"] = check_relation(s, z, std::min(nmax, 15L));
      }
    }
    res.push_back(item);
  }
  j["results"] = res;
  os << j.dump(2) << '\n';
}

void cmd_genfun(const RunConfig& cfg, std::ostream& os) {
  const auto zs = parse_complex_list(cfg.z);
  const long order = cfg.nmax < 0 ? kDefaultSeriesTerms : cfg.nmax;
  const double c = cfg.c, mu0 = cfg.mu0;
  struct Row {
    complex z, f, g;
    double ode1, ode2;
  };
  std::vector<Row> rows(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) {
    const complex z = zs[i];
    rows[i].z = z;
    rows[i].f = cal_F(z, c, mu0, cfg.tol);
    rows[i].g = cal_G(z, c, mu0, cfg.tol);
    const bool seeded = mu0 == 0.0 || std::abs(z) >= 1e-12;
    rows[i].ode1 = seeded && z != complex(0.0) ? ode_residual(Family::P1, z, c, mu0, order) : 0.0;
    rows[i].ode2 = seeded && z != complex(0.0) ? ode_residual(Family::P2, z, c, mu0, order) : 0.0;
  });
  if (cfg.format == "csv") {
    CsvWriter w(os, {"z_re", "z_im", "F_re", "F_im", "G_re", "G_im", "ode_p1", "ode_p2"});
    for (const auto& r : rows) {
      w.cell(r.z).cell(r.f).cell(r.g).cell(r.ode1).cell(r.ode2).end_row();
    }
    return;
  }
  json j;
  j["c"] = c;
  j["mu0"] = mu0;
  json res = json::array();
  for (const auto& r : rows) {
    json item = {{"z", to_json(r.z)}, {"F", to_json(r.f)}, {"G", to_json(r.g)},
                 {"ode_residual_p1", r.ode1}, {"ode_residual_p2", r.ode2}};
    if (mu0 > 0.0 && c > 1.0) {
      item["F_complement"] = to_json(cal_F_complement(r.z, c, mu0, cfg.tol));
    }
    if (mu0 > 0.0 && c > 1.0 / 3.0) {
      item["G_complement"] = to_json(cal_G_complement(r.z, c, mu0, cfg.tol));
    }
    res.push_back(item);
  }
  j["results"] = res;
  os << j.dump(2) << '\n';
}

void cmd_matrix(const RunConfig& cfg, std::ostream& os) {
  const NevanlinnaMatrix m(family_of(cfg), cfg.c);
  const auto zs = parse_complex_list(cfg.z);
  std::vector<MatrixValues> vals(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) { vals[i] = m.evaluate_all(zs[i], cfg.tol); });
  if (cfg.format == "csv") {
    CsvWriter w(os, {"z_re", "z_im", "element", "re", "im"});
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const auto plain = m.to_plain(vals[i]);
      w.cell(zs[i]).cell("A_mod").cell(vals[i].A).end_row();
      w.cell(zs[i]).cell("B_mod").cell(vals[i].B).end_row();
      w.cell(zs[i]).cell("C").cell(vals[i].C).end_row();
      w.cell(zs[i]).cell("D").cell(vals[i].D).end_row();
      w.cell(zs[i]).cell("A").cell(plain.A).end_row();
      w.cell(zs[i]).cell("B").cell(plain.B).end_row();
    }
    return;
  }
  json j;
  j["family"] = cfg.family;
  j["c"] = cfg.c;
  j["alpha"] = m.alpha();
  json res = json::array();
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const auto plain = m.to_plain(vals[i]);
    res.push_back({{"z", to_json(zs[i])},
                   {"A_mod", to_json(vals[i].A)},
                   {"B_mod", to_json(vals[i].B)},
                   {"C", to_json(vals[i].C)},
                   {"D", to_json(vals[i].D)},
                   {"A", to_json(plain.A)},
                   {"B", to_json(plain.B)},
                   {"determinant", to_json(vals[i].determinant())}});
  }
  j["results"] = res;
  os << j.dump(2) << '\n';
}

void cmd_coeffs(const RunConfig& cfg, std::ostream& os) {
  const NevanlinnaMatrix m(family_of(cfg), cfg.c);
  const long nmax = cfg.nmax < 0 ? 200 : cfg.nmax;
  const auto elems = elements_of(cfg);
  std::vector<std::vector<ScaledCoefficient>> xi(elems.size());
  parallel_for(elems.size(), [&](std::size_t i) { xi[i] = m.coefficients(elems[i], nmax); });
  if (cfg.format == "csv") {
    CsvWriter w(os, {"element", "n", "sign", "log_abs"});
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t n = 0; n < xi[i].size(); ++n) {
        w.cell(std::string(to_string(elems[i]))).cell(static_cast<long>(n)).cell(xi[i][n].sign);
        w.cell(xi[i][n].log_magnitude).end_row();
      }
    }
    return;
  }
  json j;
  j["family"] = cfg.family;
  j["c"] = cfg.c;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    json arr = json::array();
    for (const auto& x : xi[i]) {
      arr.push_back({{"sign", x.sign},
                     {"log_abs", std::isfinite(x.log_magnitude) ? json(x.log_magnitude) : json(nullptr)}});
    }
    j["coefficients"][std::string(to_string(elems[i]))] = arr;
  }
  os << j.dump(2) << '\n';
}

void cmd_growth(const RunConfig& cfg, std::ostream& os) {
  const NevanlinnaMatrix m(family_of(cfg), cfg.c);
  const long nmax = cfg.nmax < 0 ? 2000 : cfg.nmax;
  const auto elems = elements_of(cfg);
  const auto phis = default_phi_grid();
  const auto ladder = default_r_ladder();
  std::vector<GrowthReport> reports;
  for (Element e : elems) {
    reports.push_back(growth_report(m, e, nmax, phis, ladder));
  }
  if (cfg.format == "csv") {
    CsvWriter w(os, {"element", "order", "type", "phi", "indicator", "reference"});
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const auto& [phi, h] : reports[i].indicator_samples) {
        w.cell(std::string(to_string(elems[i]))).cell(reports[i].order_estimate);
        w.cell(reports[i].type_estimate).cell(phi).cell(h).cell(indicator_reference(phi)).end_row();
      }
    }
    return;
  }
  json j;
  j["family"] = cfg.family;
  j["c"] = cfg.c;
  j["theta0"] = theta0();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    json samples = json::array();
    for (const auto& [phi, h] : reports[i].indicator_samples) {
      samples.push_back({{"phi", phi}, {"h", h}, {"reference", indicator_reference(phi)}});
    }
    j["elements"][std::string(to_string(elems[i]))] = {{"order_estimate", reports[i].order_estimate},
                                                       {"type_estimate", reports[i].type_estimate},
                                                       {"indicator", samples}};
  }
  os << j.dump(2) << '\n';
}

DiscreteMeasure measure_of(const RunConfig& cfg, const NevanlinnaMatrix& m) {
  const ZeroMode mode = cfg.mode == "d" ? ZeroMode::D : ZeroMode::Combination;
  return n_extremal_measure(m, mode, cfg.tau, cfg.xmax, static_cast<std::size_t>(cfg.count));
}

void cmd_spectrum(const RunConfig& cfg, std::ostream& os) {
  const NevanlinnaMatrix m(family_of(cfg), cfg.c);
  const auto mu = measure_of(cfg, m);
  std::vector<double> positive;
  for (double x : mu.points) {
    if (x > 0.0) {
      positive.push_back(x);
    }
  }
  const bool fit_ok = positive.size() >= 4;
  const CubicFit fit = fit_ok ? cubic_coefficient_fit(positive) : CubicFit{0, 0, 0, 0};
  if (cfg.format == "csv") {
    CsvWriter w(os, {"k", "x", "rho"});
    for (std::size_t k = 0; k < mu.size(); ++k) {
      w.cell(static_cast<long>(k)).cell(mu.points[k]).cell(mu.weights[k]).end_row();
    }
    if (fit_ok) {
      std::cerr << "cubic_coefficient," << format_real(fit.cubic_coefficient) << ",reference,"
                << format_real(fit.reference) << '\n';
    }
    return;
  }
  json j;
  j["family"] = cfg.family;
  j["c"] = cfg.c;
  j["mode"] = cfg.mode;
  j["tau"] = cfg.tau;
  json pts = json::array();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    pts.push_back({{"k", k}, {"x", mu.points[k]}, {"rho", mu.weights[k]}, {"rho_error", mu.weight_errors[k]}});
  }
  j["points"] = pts;
  j["total_mass"] = mu.total_mass();
  if (fit_ok) {
    j["cubic_fit"] = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"cubic_coefficient", fit.cubic_coefficient},
                      {"reference", fit.reference}};
  }
  os << j.dump(2) << '\n';
}

void cmd_transition(const RunConfig& cfg, std::ostream& os) {
  const NevanlinnaMatrix m(family_of(cfg), cfg.c);
  const RateSchedule s(family_of(cfg), cfg.c);
  const auto mu = measure_of(cfg, m);
  const auto ts = parse_real_list(cfg.times);
  struct Row {
    long m, n;
    double t, p, generator;
  };
  std::vector<Row> rows;
  for (double t : ts) {
    std::vector<GeneratorRow> gen;
    if (cfg.trunc > 0) {
      for (long a = 0; a <= cfg.states; ++a) {
        gen.push_back(generator_row(s, a, t, cfg.trunc));
      }
    }
    for (long a = 0; a <= cfg.states; ++a) {
      for (long b = 0; b <= cfg.states; ++b) {
        double gv = std::nan("");
        if (cfg.trunc > 0) {
          const auto& g = gen[static_cast<std::size_t>(a)];
          if (g.lost_mass <= 1e-8) {
            gv = g.values[static_cast<std::size_t>(b)];
          }
        }
        rows.push_back({a, b, t, transition_probability({a, b, t}, mu, s), gv});
      }
    }
  }
  if (cfg.format == "csv") {
    CsvWriter w(os, {"m", "n", "t", "P", "generator"});
    for (const auto& r : rows) {
      w.cell(r.m).cell(r.n).cell(r.t).cell(r.p).cell(r.generator).end_row();
    }
    return;
  }
  json j;
  j["family"] = cfg.family;
  j["c"] = cfg.c;
  j["mode"] = cfg.mode;
  j["tau"] = cfg.tau;
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"m", r.m}, {"n", r.n}, {"t", r.t}, {"P", r.p},
                   {"generator", std::isnan(r.generator) ? json(nullptr) : json(r.generator)}});
  }
  j["transitions"] = arr;
  os << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

class Suite {
 public:
  void at_most(const std::string& name, const std::function<double()>& f, double tol) {
    double v;
    try {
      v = f();
    } catch (const std::exception& e) {
      std::cerr << "check " << name << " failed: " << e.what() << '\n';
      v = std::numeric_limits<double>::infinity();
    }
    results_.push_back({name, v, tol, v <= tol});
  }
  const std::vector<CheckResult>& results() const { return results_; }

 private:
  std::vector<CheckResult> results_;
};

double rel(complex a, complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<CheckResult> run_verify(const RunConfig& cfg) {
  const Family fam = family_of(cfg);
  const double c = cfg.c;
  const RateSchedule s(fam, c);
  const NevanlinnaMatrix m(fam, c);
  const std::vector<complex> zs{{0.5, 0.0}, {-3.0, 1.0}, {4.0, -3.0}, {10.0, 5.0}, {-20.0, 0.0}, {2.0, 24.0}};
  Suite suite;

  suite.at_most("theta0_quadrature", [] {
    const double q = integrate_value(SingularWeight(0.0, -2.0 / 3.0), [](const QuadraturePoint&) { return 1.0; });
    const double g = std::pow(gamma_fn(1.0 / 3.0), 3) / (2.0 * std::numbers::pi * std::sqrt(3.0));
    return std::abs(q - g) / g;
  }, 1e-10);
  suite.at_most("sigma_series_vs_closed", [] {
    double worst = 0.0;
    for (double r : {0.5, 3.0, 10.0, 20.0}) {
      for (double a : {0.0, 1.0, 2.0, 3.0}) {
        const complex u = std::polar(r, a);
        for (int l = 0; l < 3; ++l) {
          const complex ref = sigma_closed(l, u);
          worst = std::max(worst, std::abs(sigma_series(l, u) - ref) / std::max(std::abs(ref), 1.0));
        }
      }
    }
    return worst;
  }, 1e-10);
  suite.at_most("triplet_relation", [&] {
    double worst = 0.0;
    for (double mu0 : {0.0, 3.0}) {
      for (complex z : {complex(1, 2), complex(-5, 0), complex(0.3, -0.7)}) {
        worst = std::max(worst, check_relation(RateSchedule(fam, c, mu0), z, 12));
      }
    }
    return worst;
  }, 1e-8);
  suite.at_most("ode_residual", [&] {
    double worst = 0.0;
    for (double mu0 : {0.0, 7.0}) {
      for (complex z : {complex(1, 0), complex(2, 1), complex(-4, 3)}) {
        worst = std::max(worst, ode_residual(fam, z, c, mu0, kDefaultSeriesTerms));
      }
    }
    return worst;
  }, 1e-10);
  suite.at_most("genfun_vs_series", [&] {
    const complex z(1.0, 1.0);
    const auto ref = accelerated_poly_sum(s, z);
    const complex v = fam == Family::P1 ? cal_F(z, c, 0.0) : cal_G(z, c, 0.0);
    return rel(v, ref.value);
  }, 1e-6);
  suite.at_most("normalization", [&] {
    const auto v = m.evaluate_all(0.0);
    return std::max({std::abs(v.C - 1.0), std::abs(v.B + 1.0), std::abs(v.D)});
  }, 1e-10);
  suite.at_most("determinant", [&] {
    double worst = 0.0;
    for (complex z : zs) {
      worst = std::max(worst, std::abs(m.determinant(z) - 1.0));
    }
    return worst;
  }, 1e-6);
  suite.at_most("assembly_vs_integrals", [&] {
    double worst = 0.0;
    for (complex z : {complex(0.5, 0), complex(-3, 1), complex(4, -3)}) {
      for (Element e : kAllElements) {
        worst = std::max(worst, rel(assembled_element(fam, c, e, z), m.evaluate(e, z)));
      }
    }
    return worst;
  }, 1e-7);
  suite.at_most("coefficients_vs_quadrature", [&] {
    double worst = 0.0;
    for (Element e : kAllElements) {
      const auto xi = m.coefficients(e, 400);
      for (complex z : {complex(5, 0), complex(-7, 7), complex(0, 10)}) {
        worst = std::max(worst, rel(coefficient_series_value(xi, z), m.evaluate(e, z)));
      }
    }
    return worst;
  }, 1e-6);
  suite.at_most("alpha_vs_A0", [&] { return std::abs(m.alpha() * m.evaluate(Element::A, 0.0) + 1.0); }, 1e-8);
  for (Element e : kAllElements) {
    const auto xi = m.coefficients(e, 2000);
    const std::string tag = std::string(to_string(e));
    suite.at_most("order_" + tag, [&] { return std::abs(order_estimate(xi) * 3.0 - 1.0); }, 0.01);
    suite.at_most("type_" + tag, [&] { return std::abs(type_estimate(xi, 1.0 / 3.0) / theta0() - 1.0); }, 0.02);
  }
  suite.at_most("indicator_D", [&] {
    double worst = 0.0;
    for (double phi : default_phi_grid()) {
      if (std::abs(phi - std::numbers::pi / 2) < 0.1 || std::abs(phi - 1.5 * std::numbers::pi) < 0.1) {
        continue;
      }
      const auto est = indicator_estimate(m, Element::D, phi, default_r_ladder());
      worst = std::max(worst, std::abs(est.estimate - indicator_reference(phi)) / theta0());
    }
    return worst;
  }, 0.02);
  suite.at_most("stieltjes_slopes", [&] {
    const auto st = stieltjes_check(s, 100000);
    const double pi_ref = fam == Family::P1 ? -4.0 / 3.0 : -5.0 / 3.0;
    const double rc_ref = fam == Family::P1 ? -5.0 / 3.0 : -4.0 / 3.0;
    return std::max(std::abs(st.slope_pi - pi_ref), std::abs(st.slope_recip - rc_ref));
  }, 0.05);
  const auto measure = std::make_shared<DiscreteMeasure>();
  suite.at_most("mass_point_spacing", [&] {
    *measure = n_extremal_measure(m, ZeroMode::D, 0.0, 1e7, 30);
    double worst = 0.0;
    for (std::size_t k = 11; k < measure->size(); ++k) {
      const double d = std::cbrt(measure->points[k]) - std::cbrt(measure->points[k - 1]);
      worst = std::max(worst, std::abs(d / mass_point_spacing() - 1.0));
    }
    return worst;
  }, 0.05);
  suite.at_most("discrete_orthogonality", [&] {
    double worst = 0.0;
    for (long a = 0; a <= 5; ++a) {
      for (long b = 0; b <= 5; ++b) {
        const double p = transition_probability({a, b, 0.0}, *measure, s) * std::sqrt(pi_n(s, a) / pi_n(s, b));
        worst = std::max(worst, std::abs(p - (a == b ? 1.0 : 0.0)));
      }
    }
    return worst;
  }, 1e-4);
  suite.at_most("total_mass", [&] { return std::abs(measure->total_mass() - 1.0); }, 1e-6);
  suite.at_most("generator_cross_check", [&] {
    return generator_cross_check(0, 0, 1e-4, 300, s, *measure).difference;
  }, 1e-6);
  suite.at_most("kolmogorov_residual", [&] {
    double worst = 0.0;
    for (long n = 0; n <= 3; ++n) {
      worst = std::max(worst, kolmogorov_residual(0, n, 0.01, *measure, s));
    }
    return worst;
  }, 1e-5);
  return suite.results();
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
  const auto results = run_verify(cfg);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
  }
  if (cfg.format == "csv") {
    CsvWriter w(os, {"check", "value", "tolerance", "pass"});
    for (const auto& r : results) {
      w.cell(r.name).cell(r.value).cell(r.tolerance).cell(r.pass ? "PASS" : "FAIL").end_row();
    }
  } else {
    json j;
    j["family"] = cfg.family;
    j["c"] = cfg.c;
    json arr = json::array();
    for (const auto& r : results) {
      arr.push_back({{"check", r.name},
                     {"value", std::isfinite(r.value) ? json(r.value) : json(nullptr)},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass}});
    }
    j["checks"] = arr;
    j["all_pass"] = all;
    os << j.dump(2) << '\n';
  }
  if (!all) {
    for (const auto& r : results) {
      if (!r.pass) {
        std::cerr << "FAILED: " << r.name << " (" << format_real(r.value) << " > " << format_real(r.tolerance)
                  << ")\n";
      }
    }
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic birth-and-death processes: polynomials, generating functions, Nevanlinna matrices"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "process family")->check(CLI::IsMember({"p1", "p2"}));
    sub->add_option("--c", cfg.c, "parameter c > 0");
    sub->add_option("--mu0", cfg.mu0, "death rate at state 0");
    sub->add_option("--z", cfg.z, "comma separated complex values a+bi");
    sub->add_option("--nmax", cfg.nmax, "number of terms / highest index");
    sub->add_option("--tol", cfg.tol, "quadrature tolerance");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto measure_opts = [&cfg](CLI::App* sub) {
    sub->add_option("--xmax", cfg.xmax, "largest mass point");
    sub->add_option("--count", cfg.count, "stop after this many mass points (0 = all)");
    sub->add_option("--mode", cfg.mode, "d: zeros of D; combo: zeros of B~ + tau D")
        ->check(CLI::IsMember({"d", "combo"}));
    sub->add_option("--tau", cfg.tau, "real parameter of B~ + tau D");
  };

  std::map<std::string, std::function<int(std::ostream&)>> handlers{
      {"rates", [&](std::ostream& os) { cmd_rates(cfg, os); return 0; }},
      {"polys", [&](std::ostream& os) { cmd_polys(cfg, os); return 0; }},
      {"genfun", [&](std::ostream& os) { cmd_genfun(cfg, os); return 0; }},
      {"matrix", [&](std::ostream& os) { cmd_matrix(cfg, os); return 0; }},
      {"coeffs", [&](std::ostream& os) { cmd_coeffs(cfg, os); return 0; }},
      {"growth", [&](std::ostream& os) { cmd_growth(cfg, os); return 0; }},
      {"spectrum", [&](std::ostream& os) { cmd_spectrum(cfg, os); return 0; }},
      {"transition", [&](std::ostream& os) { cmd_transition(cfg, os); return 0; }},
      {"verify", [&](std::ostream& os) { return cmd_verify(cfg, os); }},
  };
  const std::vector<std::pair<std::string, std::string>> descriptions{
      {"rates", "birth/death rates, pi_n, Stieltjes sums, dual schedule"},
      {"polys", "F_n(z) by the three-term recurrence"},
      {"genfun", "generating functions cal F and cal G"},
      {"matrix", "modified and plain Nevanlinna matrix"},
      {"coeffs", "Taylor coefficients of the matrix elements"},
      {"growth", "order, type and indicator estimates"},
      {"spectrum", "N-extremal mass points and weights"},
      {"transition", "transition probabilities P_{m,n}(t)"},
      {"verify", "full check suite"},
  };
  for (const auto& [name, text] : descriptions) {
    auto* sub = app.add_subcommand(name, text);
    common(sub);
    if (name == "coeffs" || name == "growth") {
      sub->add_option("--element", cfg.element, "A, B, C, D or all");
    }
    if (name == "spectrum" || name == "transition") {
      measure_opts(sub);
    }
    if (name == "transition") {
      sub->add_option("--t", cfg.times, "comma separated times");
      sub->add_option("--states", cfg.states, "largest state m, n");
      sub->add_option("--trunc", cfg.trunc, "truncated generator size for the cross-check column (0 = off)");
    }
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    validate(cfg);
    std::ostringstream buffer;
    const int rc = handlers.at(cfg.command)(buffer);
    if (cfg.out.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) {
        std::cerr << "cannot write " << cfg.out << '\n';
        return 1;
      }
      f << buffer.str();
    }
    return rc;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure in " << cfg.command << ": " << e.what() << '\n';
    return 1;
  }
}
