#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzyds/ds2.hpp"
#include "fuzzyds/ds4.hpp"
#include "fuzzyds/expr.hpp"
#include "fuzzyds/matrix_io.hpp"

namespace fuzzyds::cli {

using nlohmann::json;

// exit codes: 0 ok/pass, 2 config validation, 3 I/O, 4 verify fail,
// 5 expression parse/eval
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_io = 3;
inline constexpr int exit_verify_failed = 4;
inline constexpr int exit_expr = 5;

class CliError : public std::runtime_error {
public:
  CliError(int code, const std::string &msg)
      : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }

private:
  int code_;
};

struct RunConfig {
  std::string model; // "ds2" | "ds4"
  std::optional<double> r, rho, nu, s, epsilon, h_inv;
  std::optional<int> M, l_max;
  std::optional<int> nodes_per_unit, theta_count, n_chi, n_theta, n_phi;
  std::optional<std::string> out_dir, from_dir, spectrum_path, report_path;
  std::optional<std::string> f_src, f_im_src;
  std::vector<double> r_list;
  bool x0_killing = false;
};

// --config file values fill fields the command line left unset
inline void merge_config_file(RunConfig &cfg, const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw CliError(exit_io, "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error &e) {
    throw CliError(exit_io,
                   "malformed config '" + path + "': " + std::string(e.what()));
  }
  const auto fill_d = [&](const char *key, std::optional<double> &slot) {
    if (!slot && j.contains(key))
      slot = j.at(key).get<double>();
  };
  const auto fill_i = [&](const char *key, std::optional<int> &slot) {
    if (!slot && j.contains(key))
      slot = j.at(key).get<int>();
  };
  const auto fill_s = [&](const char *key, std::optional<std::string> &slot) {
    if (!slot && j.contains(key))
      slot = j.at(key).get<std::string>();
  };
  if (cfg.model.empty() && j.contains("model"))
    cfg.model = j.at("model").get<std::string>();
  fill_d("r", cfg.r);
  fill_d("rho", cfg.rho);
  fill_d("nu", cfg.nu);
  fill_d("s", cfg.s);
  fill_d("epsilon", cfg.epsilon);
  fill_d("Hinv", cfg.h_inv);
  fill_i("M", cfg.M);
  fill_i("L_max", cfg.l_max);
  fill_i("nodes_per_unit", cfg.nodes_per_unit);
  fill_i("theta_count", cfg.theta_count);
  fill_i("n_chi", cfg.n_chi);
  fill_i("n_theta", cfg.n_theta);
  fill_i("n_phi", cfg.n_phi);
  fill_s("out", cfg.out_dir);
  fill_s("from", cfg.from_dir);
  fill_s("spectrum", cfg.spectrum_path);
  fill_s("report", cfg.report_path);
  fill_s("f", cfg.f_src);
  fill_s("f_im", cfg.f_im_src);
  if (cfg.r_list.empty() && j.contains("r_list"))
    cfg.r_list = j.at("r_list").get<std::vector<double>>();
  if (j.contains("x0_convention"))
    cfg.x0_killing = (j.at("x0_convention").get<std::string>() == "killing");
}

namespace detail {

inline double require(const std::optional<double> &v, const char *flag) {
  if (!v)
    throw CliError(exit_config,
                   std::string("missing required parameter --") + flag);
  return *v;
}

inline ds2::Params ds2_params(const RunConfig &cfg) {
  const double r = require(cfg.r, "r");
  const double rho = require(cfg.rho, "rho");
  if (cfg.h_inv)
    throw CliError(exit_config,
                   "--Hinv is not a free parameter for ds2; it is derived as "
                   "r*rho");
  try {
    return ds2::Params(r, rho, cfg.epsilon.value_or(0.1), cfg.M.value_or(20));
  } catch (const std::invalid_argument &e) {
    throw CliError(exit_config, e.what());
  }
}

inline ds4::Params ds4_params(const RunConfig &cfg) {
  const double nu = require(cfg.nu, "nu");
  const double s = require(cfg.s, "s");
  if (cfg.r && cfg.h_inv)
    throw CliError(exit_config,
                   "give either --r or --Hinv for ds4, not both (H^{-1} = "
                   "r s sqrt(nu^2+1/4))");
  double r;
  if (cfg.r) {
    r = *cfg.r;
  } else {
    const double h = cfg.h_inv.value_or(1.0);
    if (!(h > 0.0) || !(s > 0.0) || !(nu > 0.0))
      throw CliError(exit_config, "ds4 parameters must be positive");
    r = h / (s * std::sqrt(nu * nu + 0.25));
  }
  try {
    return ds4::Params(r, nu, s, cfg.epsilon.value_or(0.1));
  } catch (const std::invalid_argument &e) {
    throw CliError(exit_config, e.what());
  }
}

inline ds2::GridOptions ds2_grid_options(const RunConfig &cfg) {
  ds2::GridOptions opt;
  if (cfg.nodes_per_unit)
    opt.nodes_per_unit = *cfg.nodes_per_unit;
  if (cfg.theta_count)
    opt.theta_count = *cfg.theta_count;
  return opt;
}

inline ds4::GridOptions ds4_grid_options(const RunConfig &cfg) {
  ds4::GridOptions opt;
  if (cfg.nodes_per_unit)
    opt.nodes_per_unit = *cfg.nodes_per_unit;
  if (cfg.n_chi)
    opt.n_chi = *cfg.n_chi;
  if (cfg.n_theta)
    opt.n_theta = *cfg.n_theta;
  if (cfg.n_phi)
    opt.n_phi = *cfg.n_phi;
  return opt;
}

inline json ds2_meta(const ds2::Params &p, const std::string &op,
                     bool killing) {
  return json{{"model", "ds2"},
              {"r", p.r},
              {"rho", p.rho},
              {"epsilon", p.epsilon},
              {"M", p.M},
              {"Hinv", p.h_inv()},
              {"x0_convention", killing ? "killing" : "cs"},
              {"operator", op}};
}

inline json ds2_labels(const ds2::Params &p) {
  json labels = json::array();
  for (int m = -p.M; m <= p.M; ++m)
    labels.push_back(m);
  return labels;
}

inline json ds4_labels(const ds4::BasisProvider &provider) {
  json labels = json::array();
  for (int i = 0; i < provider.count(); ++i) {
    const auto lab = provider.label(i);
    labels.push_back(json::array({lab.L, lab.l, lab.m, lab.sigma}));
  }
  return labels;
}

inline void write_report(const RunConfig &cfg, const json &report,
                         std::ostream &out) {
  out << report.dump(2) << '\n';
  if (cfg.report_path) {
    std::ofstream f(*cfg.report_path);
    if (!f)
      throw CliError(exit_io,
                     "cannot open report file '" + *cfg.report_path + "'");
    f << report.dump(2) << '\n';
  }
}

} // namespace detail

// {"spectrum": [{"label": [L, l, m, sigma], "tau": value}, ...]}
inline ds4::SpectrumTable load_spectrum_table(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw CliError(exit_io, "cannot open spectrum table '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error &e) {
    throw CliError(exit_io, "malformed spectrum table '" + path +
                                "': " + std::string(e.what()));
  }
  if (!j.contains("spectrum") || !j.at("spectrum").is_array())
    throw CliError(exit_io,
                   "spectrum table must contain a \"spectrum\" array");
  ds4::SpectrumTable table;
  for (const auto &entry : j.at("spectrum")) {
    const auto &lab = entry.at("label");
    if (!lab.is_array() || lab.size() != 4)
      throw CliError(exit_io, "spectrum labels must be [L, l, m, sigma]");
    table.set({lab.at(0).get<int>(), lab.at(1).get<int>(), lab.at(2).get<int>(),
               lab.at(3).get<int>()},
              entry.at("tau").get<double>());
  }
  return table;
}

inline std::shared_ptr<const ds4::BasisProvider>
make_provider(const RunConfig &cfg, const ds4::Params &p) {
  const int l_max = cfg.l_max.value_or(2);
  if (l_max < 0)
    throw CliError(exit_config, "--L-max must be >= 0");
  if (cfg.spectrum_path) {
    const auto table = load_spectrum_table(*cfg.spectrum_path);
    return ds4::model_provider(p, l_max, &table);
  }
  return ds4::model_provider(p, l_max);
}

inline int run_build(const RunConfig &cfg, std::ostream &out) {
  if (!cfg.out_dir)
    throw CliError(exit_config, "build needs --out <directory>");
  std::error_code ec;
  std::filesystem::create_directories(*cfg.out_dir, ec);
  if (ec)
    throw CliError(exit_io, "cannot create output directory '" + *cfg.out_dir +
                                "': " + ec.message());
  const std::filesystem::path dir(*cfg.out_dir);

  if (cfg.model == "ds2") {
    const ds2::Params p = detail::ds2_params(cfg);
    const auto conv = cfg.x0_killing ? ds2::X0Convention::killing_generator
                                     : ds2::X0Convention::cs_quantization;
    const auto ops = ds2::analytic_operators(p, conv);
    const json labels = detail::ds2_labels(p);
    io::save_matrix(dir / "x0.json", ops.x0, labels,
                    detail::ds2_meta(p, "x0", cfg.x0_killing));
    io::save_matrix(dir / "x1.json", ops.x1, labels,
                    detail::ds2_meta(p, "x1", cfg.x0_killing));
    io::save_matrix(dir / "x2.json", ops.x2, labels,
                    detail::ds2_meta(p, "x2", cfg.x0_killing));
    out << json{{"model", "ds2"},
                {"r", p.r},
                {"rho", p.rho},
                {"epsilon", p.epsilon},
                {"M", p.M},
                {"Hinv", p.h_inv()},
                {"dim", p.dim()},
                {"files", {"x0.json", "x1.json", "x2.json"}}}
               .dump(2)
        << '\n';
    return exit_ok;
  }
  if (cfg.model == "ds4") {
    const ds4::Params p = detail::ds4_params(cfg);
    const auto provider = make_provider(cfg, p);
    // fuzzy time operator r W^0 in its eigenbasis: r diag(tau_i)
    ComplexMatrix x0(provider->count());
    for (int i = 0; i < provider->count(); ++i)
      x0(i, i) = p.r * provider->tau_center(i);
    json meta{{"model", "ds4"},      {"r", p.r},
              {"nu", p.nu},          {"s", p.s},
              {"epsilon", p.epsilon},{"L_max", cfg.l_max.value_or(2)},
              {"Hinv", p.h_inv()},   {"operator", "x0"}};
    io::save_matrix(dir / "x0.json", x0, detail::ds4_labels(*provider), meta);
    out << json{{"model", "ds4"},
                {"r", p.r},
                {"nu", p.nu},
                {"s", p.s},
                {"epsilon", p.epsilon},
                {"L_max", cfg.l_max.value_or(2)},
                {"Hinv", p.h_inv()},
                {"dim", provider->count()},
                {"files", {"x0.json"}}}
               .dump(2)
        << '\n';
    return exit_ok;
  }
  throw CliError(exit_config, "unknown or missing --model (ds2 | ds4)");
}

namespace detail {

struct Ds2VerifyInput {
  ds2::Params params;
  ComplexMatrix x0, x1, x2;
};

inline Ds2VerifyInput ds2_verify_input(const RunConfig &cfg) {
  if (cfg.from_dir) {
    const std::filesystem::path dir(*cfg.from_dir);
    io::MatrixFile f0, f1, f2;
    try {
      f0 = io::load_matrix(dir / "x0.json");
      f1 = io::load_matrix(dir / "x1.json");
      f2 = io::load_matrix(dir / "x2.json");
    } catch (const std::runtime_error &e) {
      throw CliError(exit_io, e.what());
    }
    const json &meta = f0.meta;
    if (!meta.contains("r") || !meta.contains("rho") ||
        !meta.contains("epsilon") || !meta.contains("M"))
      throw CliError(exit_io,
                     "matrix meta lacks the ds2 parameters (r, rho, epsilon, M)");
    ds2::Params p(meta.at("r").get<double>(), meta.at("rho").get<double>(),
                  meta.at("epsilon").get<double>(), meta.at("M").get<int>());
    if (f0.matrix.dim() != p.dim() || f1.matrix.dim() != p.dim() ||
        f2.matrix.dim() != p.dim())
      throw CliError(exit_io, "matrix dimension does not match meta M");
    return {p, std::move(f0.matrix), std::move(f1.matrix),
            std::move(f2.matrix)};
  }
  const ds2::Params p = ds2_params(cfg);
  auto ops = ds2::analytic_operators(p);
  return {p, std::move(ops.x0), std::move(ops.x1), std::move(ops.x2)};
}

} // namespace detail

inline int run_verify(const RunConfig &cfg, std::ostream &out) {
  constexpr double algebraic_tol = 1e-12;
  constexpr double quadrature_tol = 1e-8;

  if (cfg.model == "ds2" || (cfg.model.empty() && cfg.from_dir)) {
    const auto in = detail::ds2_verify_input(cfg);
    const ds2::Params &p = in.params;
    if (p.M < 3)
      throw CliError(exit_config,
                     "verify needs M >= 3 for a nonempty interior block");
    const int margin = 2;
    const cdouble i_r{0.0, p.r};
    const cdouble i_r_eps{0.0, p.r * std::exp(-0.5 * p.epsilon)};
    const double d01 =
        interior_norm(commutator(in.x0, in.x1) - i_r * in.x2, margin);
    const double d02 =
        interior_norm(commutator(in.x0, in.x2) + i_r * in.x1, margin);
    const double d12 =
        interior_norm(commutator(in.x1, in.x2) + i_r_eps * in.x0, margin);
    const double d12_expected =
        interior_norm(commutator(in.x1, in.x2) - i_r * in.x0, margin);

    const auto cas = matmul(in.x0, in.x0) - matmul(in.x1, in.x1) -
                     matmul(in.x2, in.x2);
    double cas_offdiag = 0.0, cas_formula = 0.0, cas_epsilon = 0.0;
    for (int i = margin; i < cas.dim() - margin; ++i) {
      for (int j = margin; j < cas.dim() - margin; ++j)
        if (i != j)
          cas_offdiag = std::max(cas_offdiag, std::abs(cas(i, j)));
      const int m = i - p.M;
      cas_formula = std::max(
          cas_formula,
          std::abs(cas(i, i) - ds2::casimir_interior_formula(p, m)));
      cas_epsilon = std::max(cas_epsilon,
                             std::abs(cas(i, i) - ds2::casimir_target(p)));
    }

    const double identity_defect =
        identity_resolution_defect(ds2::basis(p),
                                   ds2::default_grid(p, detail::ds2_grid_options(cfg)));

    json violated = json::array();
    if (d01 > algebraic_tol)
      violated.push_back("[x0,x1] = i r x2");
    if (d02 > algebraic_tol)
      violated.push_back("[x0,x2] = -i r x1");
    if (d12 > algebraic_tol)
      violated.push_back("[x1,x2] = -i r e^{-eps/2} x0");
    if (cas_offdiag > algebraic_tol || cas_formula > algebraic_tol)
      violated.push_back("ambient Casimir diagonal");
    if (identity_defect > quadrature_tol)
      violated.push_back("resolution of identity");

    json warnings = json::array();
    if (identity_defect > 1e-6)
      warnings.push_back("identity resolution defect above 1e-6; the grids "
                         "look under-resolved");

    const bool pass = violated.empty();
    const json report{
        {"model", "ds2"},
        {"params",
         {{"r", p.r},
          {"rho", p.rho},
          {"epsilon", p.epsilon},
          {"M", p.M},
          {"Hinv", p.h_inv()}}},
        {"commutator_defects",
         {{"x0_x1", d01},
          {"x0_x2", d02},
          {"x1_x2_cs", d12},
          {"x1_x2_expected_rule", d12_expected}}},
        {"casimir_interior_deviation", std::max(cas_offdiag, cas_formula)},
        {"casimir",
         {{"offdiag_defect", cas_offdiag},
          {"formula_defect", cas_formula},
          {"epsilon_deviation", cas_epsilon},
          {"target", ds2::casimir_target(p)}}},
        {"identity_defect", identity_defect},
        {"thresholds",
         {{"algebraic", algebraic_tol}, {"quadrature", quadrature_tol}}},
        {"violated", violated},
        {"warnings", warnings},
        {"verdict", pass ? "pass" : "fail"}};
    detail::write_report(cfg, report, out);
    return pass ? exit_ok : exit_verify_failed;
  }

  if (cfg.model == "ds4") {
    const ds4::Params p = detail::ds4_params(cfg);
    const auto provider = make_provider(cfg, p);
    const auto opt = detail::ds4_grid_options(cfg);
    const auto s3grid = s3_product_grid(opt.n_chi, opt.n_theta, opt.n_phi);
    const auto grid = s3grid.with_time(tau_window_grid(
        int(std::ceil(provider->max_abs_center())), p.epsilon,
        opt.nodes_per_unit));

    const auto consistency = ds4::provider_consistency(p, *provider, s3grid);
    const auto one = ds4::quantize4(p, provider, expr::parse("1"), grid);
    const double one_defect =
        max_abs_diff(one, ComplexMatrix::identity(one.dim()));
    const auto atau = ds4::quantize4(p, provider, expr::parse("tau"), grid);
    ComplexMatrix diag_tau(provider->count());
    for (int i = 0; i < provider->count(); ++i)
      diag_tau(i, i) = provider->tau_center(i);
    const double tau_defect = max_abs_diff(atau, diag_tau);

    json violated = json::array();
    if (consistency.orthonormality_defect > quadrature_tol)
      violated.push_back("provider orthonormality");
    if (one_defect > quadrature_tol)
      violated.push_back("quantize(1) = identity");
    if (tau_defect > quadrature_tol)
      violated.push_back("quantize(tau) = diag(tau_i)");
    json warnings = json::array();
    if (consistency.orthonormality_defect > 1e-6)
      warnings.push_back("orthonormality defect above 1e-6; the S^3 grid "
                         "looks under-resolved");
    const bool pass = violated.empty();
    const json report{
        {"model", "ds4"},
        {"params",
         {{"r", p.r},
          {"nu", p.nu},
          {"s", p.s},
          {"epsilon", p.epsilon},
          {"L_max", cfg.l_max.value_or(2)},
          {"Hinv", p.h_inv()}}},
        {"orthonormality_defect", consistency.orthonormality_defect},
        {"quantize_one_defect", one_defect},
        {"quantize_tau_defect", tau_defect},
        {"casimir_constant", consistency.casimir_constant},
        {"fuzzy_radius_sq", consistency.fuzzy_radius_sq},
        {"Hinv_sq", consistency.h_inv_sq},
        {"relation_residual", consistency.relation_residual},
        {"spectrum_symmetric", consistency.spectrum_symmetric},
        {"thresholds", {{"quadrature", quadrature_tol}}},
        {"violated", violated},
        {"warnings", warnings},
        {"verdict", pass ? "pass" : "fail"}};
    detail::write_report(cfg, report, out);
    return pass ? exit_ok : exit_verify_failed;
  }
  throw CliError(exit_config, "unknown or missing --model (ds2 | ds4)");
}

inline int run_quantize(const RunConfig &cfg, std::ostream &out) {
  if (!cfg.f_src)
    throw CliError(exit_config, "quantize needs --f <expression>");
  if (!cfg.out_dir)
    throw CliError(exit_config, "quantize needs --out <directory>");
  std::error_code ec;
  std::filesystem::create_directories(*cfg.out_dir, ec);
  if (ec)
    throw CliError(exit_io, "cannot create output directory '" + *cfg.out_dir +
                                "': " + ec.message());
  const std::filesystem::path dir(*cfg.out_dir);

  const expr::Expr f_re = expr::parse(*cfg.f_src);
  std::optional<expr::Expr> f_im;
  if (cfg.f_im_src)
    f_im = expr::parse(*cfg.f_im_src);

  ComplexMatrix q(1);
  json labels;
  json meta;
  if (cfg.model == "ds2") {
    const ds2::Params p = detail::ds2_params(cfg);
    const auto opt = detail::ds2_grid_options(cfg);
    q = ds2::quantize_expr(p, f_re, opt);
    if (f_im)
      q += cdouble(0.0, 1.0) * ds2::quantize_expr(p, *f_im, opt);
    labels = detail::ds2_labels(p);
    meta = detail::ds2_meta(p, "quantize:" + *cfg.f_src, false);
  } else if (cfg.model == "ds4") {
    const ds4::Params p = detail::ds4_params(cfg);
    const auto provider = make_provider(cfg, p);
    const auto grid =
        ds4::default_grid(p, *provider, detail::ds4_grid_options(cfg));
    q = ds4::quantize4(p, provider, f_re, grid);
    if (f_im)
      q += cdouble(0.0, 1.0) * ds4::quantize4(p, provider, *f_im, grid);
    labels = detail::ds4_labels(*provider);
    meta = json{{"model", "ds4"},       {"r", p.r},
                {"nu", p.nu},           {"s", p.s},
                {"epsilon", p.epsilon}, {"L_max", cfg.l_max.value_or(2)},
                {"Hinv", p.h_inv()},    {"operator", "quantize:" + *cfg.f_src}};
  } else {
    throw CliError(exit_config, "unknown or missing --model (ds2 | ds4)");
  }

  io::save_matrix(dir / "Af.json", q, labels, meta);

  // band summary: observed from entries, predicted from the trig degree
  int observed_band = 0;
  for (int i = 0; i < q.dim(); ++i)
    for (int j = 0; j < q.dim(); ++j)
      if (std::abs(q(i, j)) > 1e-10)
        observed_band = std::max(observed_band, std::abs(i - j));
  json band{{"observed", observed_band}};
  auto deg = expr::trig_degree(f_re);
  if (f_im) {
    const auto deg_im = expr::trig_degree(*f_im);
    deg = (deg && deg_im) ? std::optional<int>(std::max(*deg, *deg_im))
                          : std::nullopt;
  }
  if (deg)
    band["predicted"] = *deg;
  else
    band["predicted"] = nullptr;

  const json report{{"file", (dir / "Af.json").string()},
                    {"dim", q.dim()},
                    {"self_adjoint_defect", hermiticity_defect(q)},
                    {"band", band}};
  out << report.dump(2) << '\n';
  return exit_ok;
}

inline int run_limit_scan(const RunConfig &cfg, std::ostream &out) {
  if (cfg.r_list.empty())
    throw CliError(exit_config, "limit-scan needs a nonempty --r-list");
  const double h_inv = cfg.h_inv.value_or(1.0);

  if (cfg.model == "ds2" || cfg.model.empty()) {
    const double epsilon = cfg.epsilon.value_or(0.1);
    const int M = cfg.M.value_or(10);
    ds2::LimitScanReport rep;
    try {
      rep = ds2::classical_limit_scan(h_inv, cfg.r_list, epsilon, M);
    } catch (const std::invalid_argument &e) {
      throw CliError(exit_config, e.what());
    }
    json points = json::array();
    for (const auto &pt : rep.points)
      points.push_back({{"r", pt.r},
                        {"rho", pt.rho},
                        {"norms",
                         {{"x0_x1", pt.norm_x0_x1},
                          {"x0_x2", pt.norm_x0_x2},
                          {"x1_x2", pt.norm_x1_x2}}}});
    const auto slope_or_null = [](const std::optional<double> &v) {
      return v ? json(*v) : json(nullptr);
    };
    const json report{{"model", "ds2"},
                      {"Hinv", h_inv},
                      {"epsilon", epsilon},
                      {"M", M},
                      {"points", points},
                      {"slopes",
                       {{"x0_x1", slope_or_null(rep.slope_x0_x1)},
                        {"x0_x2", slope_or_null(rep.slope_x0_x2)},
                        {"x1_x2", slope_or_null(rep.slope_x1_x2)}}}};
    detail::write_report(cfg, report, out);
    return exit_ok;
  }

  if (cfg.model == "ds4") {
    const double s = detail::require(cfg.s, "s");
    json points = json::array();
    for (const double r : cfg.r_list) {
      if (!(r > 0.0))
        throw CliError(exit_config, "limit-scan r values must be > 0");
      const double ratio = h_inv / (r * s);
      if (ratio * ratio <= 0.25)
        throw CliError(exit_config,
                       "no principal-series nu on the constrained path for r=" +
                           std::to_string(r));
      const double nu = std::sqrt(ratio * ratio - 0.25);
      const ds4::Params p(r, nu, s, cfg.epsilon.value_or(0.1));
      points.push_back(
          {{"r", r},
           {"nu", nu},
           {"relation_residual", p.h_inv() - h_inv},
           {"casimir_constant", p.casimir_constant()},
           {"fuzzy_radius_sq", p.r * p.r * p.casimir_constant()}});
    }
    const json report{
        {"model", "ds4"}, {"Hinv", h_inv}, {"s", s}, {"points", points}};
    detail::write_report(cfg, report, out);
    return exit_ok;
  }
  throw CliError(exit_config, "unknown or missing --model (ds2 | ds4)");
}

// maps exceptions from the run_* functions to exit codes; messages go to err
template <class Fn> int guarded(Fn &&fn, std::ostream &err) {
  try {
    return fn();
  } catch (const CliError &e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const expr::ParseError &e) {
    err << "expression error: " << e.what() << '\n';
    return exit_expr;
  } catch (const expr::EvalError &e) {
    err << "expression error: " << e.what() << '\n';
    return exit_expr;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::domain_error &e) {
    err << "error: " << e.what() << '\n';
    return exit_expr;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  }
}

} // namespace fuzzyds::cli
