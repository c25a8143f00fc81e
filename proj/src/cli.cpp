#include "knot/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "knot/bilinear.hpp"
#include "knot/critical_flow.hpp"
#include "knot/energy.hpp"
#include "knot/generators.hpp"
#include "knot/io.hpp"
#include "knot/spectral.hpp"
#include "knot/special_functions.hpp"
#include "knot/verify.hpp"

namespace knot {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Plain key=value lines; '#' starts a comment. Underscores in keys are read as dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::istringstream in(read_text(path));
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw ParameterError(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParameterError(what + ": cannot parse '" + item + "'");
    }
  }
  if (v.empty()) throw ParameterError(what + ": empty list");
  return v;
}

// Writes to the file when a path is given, otherwise to the stream.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_text(path, text);
}

std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  for (double v : values) {
    if (!s.empty()) s += ",";
    s += format_double(v);
  }
  return s + "\n";
}

Json quad_json(const EnergyQuadSpec& q) {
  Json j;
  j["grid_size"] = q.grid_size;
  j["inner_rule"] = q.inner_rule == InnerRule::Graded ? "graded" : "uniform";
  j["grading_exponent"] = q.grading_exponent;
  j["min_offset"] = q.min_offset;
  j["panels"] = q.panels;
  j["nodes_per_panel"] = q.nodes_per_panel;
  return j;
}

Json decay_json(const DecayDiagnostics& d) {
  Json j;
  j["verdict"] = to_string(d.verdict);
  j["decay_rate"] = d.decay_rate;
  j["fit_quality"] = d.fit_quality;
  j["power_fit_quality"] = d.power_fit_quality;
  j["fitted_modes"] = d.fitted_modes;
  j["trial_radius"] = d.trial_radius;
  j["factorial_sup"] = d.factorial_sup;
  j["factorial_ratios"] = d.factorial_ratios;
  return j;
}

struct Common {
  double alpha = 2.5;
  int modes = 64;
  int grid = 512;
  std::string config;
};

void add_alpha(CLI::App* sub, Common& c) { sub->add_option("--alpha", c.alpha, "energy exponent, 2 < alpha < 3"); }
void add_resolution(CLI::App* sub, Common& c) {
  sub->add_option("--modes", c.modes, "Fourier modes N of curves");
  sub->add_option("--grid", c.grid, "grid size m of sampled fields");
}

TruncationLadder ladder_from(const std::string& text) {
  TruncationLadder l;
  if (!text.empty()) l.eps_values = parse_list(text, "--eps-ladder");
  l.validate();
  return l;
}

}  // namespace

int run_command(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral numerics for O'Hara knot energies", "knotenergy"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Common c;

  // energy
  CLI::App* energy = app.add_subcommand("energy", "energy of a curve with its quadrature error estimate");
  std::string curve_path;
  bool as_json = false;
  EnergyQuadSpec quad;
  add_alpha(energy, c);
  energy->add_option("--curve", curve_path, "curve JSON")->required();
  energy->add_option("--quad-grid", quad.grid_size, "outer trapezoid points");
  energy->add_option("--quad-panels", quad.panels, "graded panels in the offset variable");
  energy->add_option("--quad-nodes", quad.nodes_per_panel, "Gauss nodes per panel");
  energy->add_option("--quad-grading", quad.grading_exponent, "grading exponent of the panels");
  energy->add_option("--quad-min-offset", quad.min_offset, "offset below which the weighted core rule is used");
  energy->add_flag("--json", as_json, "print {value, error_estimate, quad_spec}");

  // grad
  CLI::App* grad = app.add_subcommand("grad", "first variation and its Q/R1/R2 decomposition");
  std::string ladder_text, route = "direct", out_dir;
  add_alpha(grad, c);
  add_resolution(grad, c);
  grad->add_option("--curve", curve_path, "curve JSON")->required();
  grad->add_option("--eps-ladder", ladder_text, "comma-separated decreasing truncation parameters");
  grad->add_option("--route", route, "direct | decomposed | spectral")
      ->check(CLI::IsMember({"direct", "decomposed", "spectral"}));
  grad->add_option("--out", out_dir, "directory for gradient.csv and report.json (default: report to stdout)");

  // spectrum
  CLI::App* spectrum = app.add_subcommand("spectrum", "coefficient magnitudes, Sobolev norms and decay diagnostics");
  double sobolev = -1.0, beta = 0.5;
  bool decay = false;
  spectrum->add_option("--curve", curve_path, "curve JSON")->required();
  spectrum->add_option("--sobolev", sobolev, "report the H^s norm for this s");
  spectrum->add_flag("--decay", decay, "run the spectral decay diagnostics");
  spectrum->add_option("--beta", beta, "Sobolev offset of the factorial ratios (0 < beta < 1)");
  spectrum->add_option("--out", out_dir, "directory for spectrum.csv and diagnostics.json");

  // bilinear
  CLI::App* bilinear = app.add_subcommand("bilinear", "truncated bilinear singular integral of two scalar spectra");
  BilinearSpec bspec;
  std::string f_path, g_path, broute = "both";
  bilinear->add_option("--s1", bspec.s1, "shift of the first factor");
  bilinear->add_option("--s2", bspec.s2, "shift of the second factor");
  bilinear->add_option("--beta", bspec.beta, "kernel exponent, 0 < beta < 1");
  bilinear->add_option("--eps", bspec.eps, "truncation, 0 < eps <= 1/2");
  bilinear->add_option("--f", f_path, "first factor (coefficient JSON with dim 1)")->required();
  bilinear->add_option("--g", g_path, "second factor (coefficient JSON with dim 1)")->required();
  bilinear->add_option("--route", broute, "real | fourier | both")->check(CLI::IsMember({"real", "fourier", "both"}));
  add_resolution(bilinear, c);
  bilinear->add_option("--out", out_dir, "directory for bilinear.csv and agreement.json");

  // special
  CLI::App* special = app.add_subcommand("special", "special functions of the Fourier symbol");
  double sx = kPi, sbeta = 0.5;
  int sk = 1;
  add_alpha(special, c);
  special->add_option("--beta", sbeta, "exponent of Si_beta, 0 < beta < 1");
  special->add_option("--x", sx, "argument of Si_beta");
  special->add_option("--k", sk, "index of lambda_k, q_k and the symbol")->check(CLI::NonNegativeNumber);

  // flow
  CLI::App* flow = app.add_subcommand("flow", "fixed-length descent to a critical point");
  FlowConfig fc;
  std::string init_path;
  bool plain = false, no_length_correction = false;
  add_alpha(flow, c);
  add_resolution(flow, c);
  flow->add_option("--init", init_path, "initial curve JSON (reparametrized to unit speed if uncertified)")->required();
  flow->add_option("--tol", fc.residual_tol, "target residual ||H + lambda acc||");
  flow->add_option("--max-steps", fc.max_steps, "step limit");
  flow->add_option("--step-size", fc.step_size, "initial step");
  flow->add_option("--backtracking", fc.backtracking, "step reduction factor in (0,1)");
  flow->add_option("--eps-ladder", ladder_text, "comma-separated decreasing truncation parameters");
  flow->add_flag("--plain", plain, "plain L2 gradient instead of the preconditioned direction");
  flow->add_flag("--no-length-correction", no_length_correction, "reject length drift instead of rescaling");
  flow->add_option("--out", out_dir, "output directory")->required();

  // verify
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite and write its report");
  std::string suite, alpha_list, report_path;
  VerifyOptions vo;
  std::vector<std::string> suites{"all"};
  for (const auto& s : verification_suites()) suites.push_back(s);
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suites));
  verify->add_option("--alpha", alpha_list, "comma-separated exponents (default 2.25,2.5,2.75)");
  verify->add_option("--seed", vo.seed, "random seed");
  add_resolution(verify, c);
  verify->add_option("--out", report_path, "report file (default: stdout)");

  // gen
  CLI::App* gen = app.add_subcommand("gen", "synthesize a test curve");
  std::string kind, gen_path;
  int dim = 3, mode = 3, max_mode = 8;
  std::uint64_t seed = 7;
  double amplitude = 0.05, minor_ratio = 0.3;
  gen->add_option("kind", kind, "circle | perturbed | bumped | trefoil")
      ->required()
      ->check(CLI::IsMember({"circle", "perturbed", "bumped", "trefoil"}));
  gen->add_option("--dim", dim, "ambient dimension")->check(CLI::Range(2, 16));
  gen->add_option("--seed", seed, "seed of the perturbation");
  gen->add_option("--amplitude", amplitude, "perturbation size");
  gen->add_option("--mode", mode, "mode of the bump");
  gen->add_option("--max-mode", max_mode, "highest perturbed mode");
  gen->add_option("--minor-ratio", minor_ratio, "tube ratio of the trefoil");
  add_resolution(gen, c);
  gen->add_option("--out", gen_path, "curve file (default: stdout)");

  for (CLI::App* sub : app.get_subcommands({})) sub->add_option("--config", c.config, "key=value defaults file");

  // Config values are inserted right after the subcommand name, so that later command-line flags override them.
  std::vector<std::string> args = args_in;
  try {
    auto sub_it = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.starts_with("-"); });
    std::string cfg;
    for (size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
      else if (args[i].starts_with("--config=")) cfg = args[i].substr(9);
    }
    if (!cfg.empty() && sub_it != args.end()) {
      CLI::App* sub = nullptr;
      for (CLI::App* s : app.get_subcommands({}))
        if (s->get_name() == *sub_it) sub = s;
      if (sub) {
        std::vector<std::string> injected;
        for (const auto& [key, value] : read_config(cfg))
          if (key != "config" && sub->get_option_no_throw("--" + key)) injected.push_back("--" + key + "=" + value);
        args.insert(sub_it + 1, injected.begin(), injected.end());
      }
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*energy) {
      const ClosedCurve curve = load_curve(curve_path);
      const EnergyValue e = curve.certified() ? ohara_energy(curve, c.alpha, quad) : ohara_energy_general(curve, c.alpha, quad);
      if (as_json) {
        Json j;
        j["alpha"] = c.alpha;
        j["value"] = e.value;
        j["error_estimate"] = e.error_estimate;
        j["quad_spec"] = quad_json(quad);
        out << dump_json(j);
      } else {
        out << format_double(e.value) << " " << format_double(e.error_estimate) << "\n";
      }
      return kExitOk;
    }

    if (*grad) {
      const ClosedCurve curve = load_curve(curve_path);
      const GradientReport r = gradient_report(curve, c.alpha, ladder_from(ladder_text), c.grid);
      FieldSamples field = r.h_field;
      if (route != "direct") {
        const FieldSamples q = route == "spectral" ? synthesize(apply_q_multiplier(curve.spectrum(), c.alpha), c.grid)
                                                   : r.q_field;
        field = project_normal(curve, FieldSamples(c.alpha * q.values + 2.0 * c.alpha * r.r1_field.values -
                                                   2.0 * r.r2_field.values));
      }
      Json j;
      j["alpha"] = c.alpha;
      j["route"] = route;
      j["grid"] = c.grid;
      j["eps_used"] = r.eps_used;
      j["extrapolated"] = r.extrapolated;
      j["converged"] = r.converged;
      j["extrapolation_residual"] = r.extrapolation_residual;
      j["decomposition_residual"] = r.decomposition_residual;
      j["h_l2"] = l2_norm(field);
      j["route_difference_l2"] = l2_norm(FieldSamples(field.values - r.h_field.values));
      j["multiplier"] = solve_multiplier(curve, field);
      if (out_dir.empty()) {
        out << dump_json(j);
      } else {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "gradient.csv", field_to_csv(field));
        write_text(fs::path(out_dir) / "q.csv", field_to_csv(r.q_field));
        write_text(fs::path(out_dir) / "r1.csv", field_to_csv(r.r1_field));
        write_text(fs::path(out_dir) / "r2.csv", field_to_csv(r.r2_field));
        write_text(fs::path(out_dir) / "h_tilde.csv", field_to_csv(r.h_tilde_field));
        write_text(fs::path(out_dir) / "report.json", dump_json(j));
      }
      return kExitOk;
    }

    if (*spectrum) {
      const ClosedCurve curve = load_curve(curve_path);
      std::string csv = "k,abs\n";
      for (int k = 0; k <= curve.modes(); ++k)
        csv += std::to_string(k) + "," + format_double(curve.coeffs().col(k + curve.modes()).norm()) + "\n";
      Json j;
      j["dim"] = curve.dim();
      j["modes"] = curve.modes();
      j["certified"] = curve.certified();
      if (sobolev >= 0.0) {
        j["sobolev_s"] = sobolev;
        j["sobolev_norm"] = sobolev_norm(curve.spectrum(), sobolev);
      }
      if (decay) j["decay"] = decay_json(decay_diagnostics(curve, beta));
      if (out_dir.empty()) {
        out << csv;
        if (sobolev >= 0.0 || decay) err << dump_json(j);
      } else {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "spectrum.csv", csv);
        write_text(fs::path(out_dir) / "diagnostics.json", dump_json(j));
      }
      return kExitOk;
    }

    if (*bilinear) {
      bspec.validate();
      const Spectrum f = load_spectrum(f_path), g = load_spectrum(g_path);
      if (f.dim() != 1 || g.dim() != 1) throw ParameterError("bilinear: factors must be scalar (dim 1)");
      const int width = f.modes() + g.modes();
      Spectrum four, real;
      if (broute != "real") four = bilinear_fourier(f, g, bspec).resized(width);
      if (broute != "fourier") {
        if (f.reality_defect() > 1e-12 || g.reality_defect() > 1e-12)
          throw ParameterError("bilinear: the quadrature route needs real factors (Hermitian coefficients)");
        if (c.grid < 2 * width + 1) throw ParameterError("bilinear: grid too small for the product bandwidth");
        real = analyze(bilinear_real(f, g, bspec, c.grid), width);
      }
      std::string csv = "k";
      if (broute != "real") csv += ",fourier_re,fourier_im";
      if (broute != "fourier") csv += ",real_re,real_im";
      csv += "\n";
      double diff = 0.0;
      for (int k = -width; k <= width; ++k) {
        csv += std::to_string(k);
        if (broute != "real") csv += "," + format_double(four(0, k).real()) + "," + format_double(four(0, k).imag());
        if (broute != "fourier") csv += "," + format_double(real(0, k).real()) + "," + format_double(real(0, k).imag());
        csv += "\n";
        if (broute == "both") diff = std::max(diff, std::abs(four(0, k) - real(0, k)));
      }
      Json j;
      j["route"] = broute;
      j["support_bound"] = width;
      if (broute == "both") j["max_coefficient_difference"] = diff;
      if (out_dir.empty()) {
        out << csv;
        err << dump_json(j);
      } else {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "bilinear.csv", csv);
        write_text(fs::path(out_dir) / "agreement.json", dump_json(j));
      }
      return kExitOk;
    }

    if (*special) {
      AlphaParams::checked(c.alpha);
      Json j;
      j["alpha"] = c.alpha;
      j["beta"] = sbeta;
      j["x"] = sx;
      j["k"] = sk;
      j["si_beta"] = si_beta(sx, sbeta);
      j["si_beta_max"] = si_beta_max(sbeta);
      j["si_beta_limit"] = si_beta_limit(sbeta);
      j["lambda_k"] = lambda_k(sk, c.alpha);
      j["lambda_infinity"] = lambda_infinity(c.alpha);
      j["q_k"] = q_k(sk, c.alpha);
      j["q_infinity"] = q_infinity(c.alpha);
      j["q_symbol"] = q_symbol(sk, c.alpha);
      j["circle_energy"] = circle_energy(c.alpha);
      out << dump_json(j);
      return kExitOk;
    }

    if (*flow) {
      fc.alpha = c.alpha;
      fc.modes = c.modes;
      fc.grid = c.grid;
      fc.ladder = ladder_from(ladder_text);
      fc.preconditioned = !plain;
      fc.length_correction = !no_length_correction;
      fc.validate();
      ClosedCurve init = load_curve(init_path);
      if (!init.certified()) init = reparametrize_unit_speed(init, fc.modes, fc.unit_speed_tol);
      const FlowResult r = run_flow(init, fc);

      fs::create_directories(out_dir);
      std::string csv = "step,energy,residual,lambda,length_drift,step_size\n";
      for (const auto& row : r.trajectory)
        csv += std::to_string(row.step) + "," +
               csv_row({row.energy, row.residual, row.lambda, row.length_drift, row.step_size});
      write_text(fs::path(out_dir) / "trajectory.csv", csv);
      save_curve(fs::path(out_dir) / "terminal_curve.json", r.state.curve);
      Json j;
      j["alpha"] = fc.alpha;
      j["converged"] = r.converged;
      j["aborted"] = r.aborted;
      j["message"] = r.message;
      j["steps"] = r.state.step_count;
      j["energy"] = r.state.energy;
      j["lambda"] = r.state.lambda;
      j["residual"] = r.state.residual;
      j["circle_energy"] = circle_energy(fc.alpha);
      j["hausdorff_to_circle"] = hausdorff_to_best_circle(r.state.curve);
      j["decay"] = decay_json(decay_diagnostics(r.state.curve, fc.alpha - 2.0));
      write_text(fs::path(out_dir) / "diagnostics.json", dump_json(j));
      out << r.message << " after " << r.state.step_count << " steps, residual " << format_double(r.state.residual)
          << "\n";
      return r.converged ? kExitOk : kExitNumerical;
    }

    if (*verify) {
      if (!alpha_list.empty()) vo.alphas = parse_list(alpha_list, "--alpha");
      vo.modes = c.modes;
      vo.grid = c.grid;
      const VerificationReport r = run_suite(suite, vo);
      emit(report_path, dump_json(report_to_json(r)), out);
      if (!r.passed()) {
        err << r.failures() << " of " << r.cases.size() << " cases failed\n";
        return kExitVerification;
      }
      return kExitOk;
    }

    if (*gen) {
      if (kind == "trefoil" && dim != 3) throw ParameterError("gen: the trefoil is generated in three dimensions");
      ClosedCurve curve;
      if (kind == "circle") curve = make_circle(dim);
      else if (kind == "perturbed") curve = make_perturbed_circle(seed, amplitude, max_mode, c.modes, dim);
      else if (kind == "bumped") curve = make_bumped_circle(mode, amplitude, c.modes, dim);
      else curve = make_trefoil(c.modes, minor_ratio);
      emit(gen_path, dump_json(curve_to_json(curve)), out);
      return kExitOk;
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace knot
