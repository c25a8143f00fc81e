#include "knot/verify.hpp"

#include <cmath>
#include <random>

#include "knot/bilinear.hpp"
#include "knot/critical_flow.hpp"
#include "knot/energy.hpp"
#include "knot/generators.hpp"
#include "knot/spectral.hpp"
#include "knot/special_functions.hpp"

namespace knot {

void VerificationReport::add(std::string id, std::string quantity, double tolerance, double measured) {
  cases.push_back({std::move(id), std::move(quantity), tolerance, measured, std::isfinite(measured) && measured <= tolerance});
}

bool VerificationReport::passed() const { return failures() == 0; }

int VerificationReport::failures() const {
  int n = 0;
  for (const auto& c : cases) n += c.pass ? 0 : 1;
  return n;
}

Json report_to_json(const VerificationReport& report) {
  Json j;
  j["suite"] = report.suite;
  j["seed"] = report.seed;
  j["environment"] = report.environment;
  j["passed"] = report.passed();
  j["failures"] = report.failures();
  Json cases = Json::array();
  for (const auto& c : report.cases) {
    Json e;
    e["id"] = c.id;
    e["quantity"] = c.quantity;
    e["tolerance"] = c.tolerance;
    e["measured"] = c.measured;
    e["pass"] = c.pass;
    cases.push_back(std::move(e));
  }
  j["cases"] = std::move(cases);
  return j;
}

std::string environment_string() {
  return "knotenergy 1.0.0; Eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
         "." + std::to_string(EIGEN_MINOR_VERSION) + "; double precision; single-threaded";
}

const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> names{"multiplier", "decomposition", "firstvar", "bilinear", "leibniz", "cor42"};
  return names;
}

namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()(double a = 0.0, double b = 1.0) { return a + (b - a) * ((gen_() >> 11) * 0x1.0p-53); }

 private:
  std::mt19937_64 gen_;
};

std::string alpha_tag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "alpha=%.4g", alpha);
  return buf;
}

Spectrum random_scalar(Uniform& u, int n) {
  Spectrum s(1, n);
  s(0, 0) = u(-1, 1);
  for (int k = 1; k <= n; ++k) {
    const double re = u(-1, 1);
    s(0, k) = Complex(re, u(-1, 1));
    s(0, -k) = std::conj(s(0, k));
  }
  return s;
}

double relative_l2(const FieldSamples& a, const FieldSamples& b) {
  return l2_norm(FieldSamples(a.values - b.values)) / l2_norm(b);
}

void multiplier_suite(const VerifyOptions& o, VerificationReport& r) {
  const auto curves = verification_curves(o);
  for (double alpha : o.alphas)
    for (const auto& c : curves) {
      const auto fields = truncated_fields(c.curve, alpha, o.ladder.eps_values, o.grid, o.ladder.nodes_per_panel);
      std::vector<FieldSamples> q;
      for (const auto& f : fields) q.push_back(f.q);
      const FieldSamples quad = extrapolate_eps(q, o.ladder.eps_values, alpha, o.ladder.extrapolation_order).field;
      const FieldSamples symbol = synthesize(apply_q_multiplier(c.curve.spectrum(), alpha), o.grid);
      r.add("multiplier/" + c.name + "/" + alpha_tag(alpha), "relative L2 distance, extrapolated Q vs Fourier multiplier",
            2e-3, relative_l2(quad, symbol));
    }
}

void decomposition_suite(const VerifyOptions& o, VerificationReport& r) {
  const auto curves = verification_curves(o);
  for (double alpha : o.alphas)
    for (const auto& c : curves) {
      const auto fields = truncated_fields(c.curve, alpha, {1e-2, 1e-3}, o.grid, o.ladder.nodes_per_panel);
      for (const auto& f : fields) {
        const Eigen::MatrixXd res = alpha * f.q.values + 2.0 * alpha * f.r1.values - 2.0 * f.r2.values - f.h_tilde.values;
        char eps[32];
        std::snprintf(eps, sizeof eps, "eps=%.0e", f.eps);
        r.add("decomposition/" + c.name + "/" + alpha_tag(alpha) + "/" + eps, "sup |αQ + 2αR1 - 2R2 - H~|", 1e-9,
              res.cwiseAbs().maxCoeff());
      }
    }
}

void firstvar_suite(const VerifyOptions& o, VerificationReport& r) {
  const auto curves = verification_curves(o);
  Uniform u(o.seed ^ 0x9e3779b97f4a7c15ULL);
  for (double alpha : o.alphas) {
    {
      const ClosedCurve circle = make_circle(3);
      const FieldSamples h = gradient_report(circle, alpha, o.ladder, o.grid).h_field;
      const double lambda = solve_multiplier(circle, h);
      const FieldSamples acc = sample(derivative(circle, 2), o.grid);
      r.add("firstvar/circle-critical/" + alpha_tag(alpha), "L2 norm of H + λγ'' on the circle", 1e-5,
            l2_norm(FieldSamples(h.values + lambda * acc.values)));
    }
    for (const auto& c : curves) {
      const FieldSamples grad = gradient_report(c.curve, alpha, o.ladder, o.grid).h_field;
      for (int dir = 0; dir < 3; ++dir) {
        Spectrum raw(3, 3);
        for (int d = 0; d < 3; ++d)
          for (int k = 1; k <= 3; ++k) {
            const double re = u(-1, 1);
            raw(d, k) = Complex(re, u(-1, 1)) / double(k);
            raw(d, -k) = std::conj(raw(d, k));
          }
        const FieldSamples normal = project_normal(c.curve, synthesize(raw, o.grid));
        // Unit L2 norm, so the difference steps measure the displacement directly.
        const ClosedCurve h = curve_from_samples(normal.values / l2_norm(normal), c.curve.modes() + 16);
        const double pairing = l2_inner(grad, sample(h, o.grid));
        const GateauxResult fd = gateaux_fd(c.curve, h, alpha, {2e-3, 1e-3, 5e-4});
        r.add("firstvar/" + c.name + "/" + alpha_tag(alpha) + "/dir" + std::to_string(dir),
              "relative difference, Richardson finite difference vs ∫<H,h>", 1e-3,
              std::abs(fd.value - pairing) / std::abs(pairing));
      }
    }
  }
}

void bilinear_suite(const VerifyOptions& o, VerificationReport& r) {
  Uniform u(o.seed ^ 0x5851f42d4c957f2dULL);
  for (int trial = 0; trial < 20; ++trial) {
    const int nf = 1 + static_cast<int>(u() * 8), ng = 1 + static_cast<int>(u() * 8);
    const Spectrum f = random_scalar(u, nf), g = random_scalar(u, ng);
    BilinearSpec spec;
    spec.s1 = u();
    spec.s2 = u();
    spec.beta = u(0.05, 0.95);
    spec.eps = std::pow(10.0, u(-4.0, -1.0));
    const Spectrum four = bilinear_fourier(f, g, spec);
    const int wide = 2 * (nf + ng) + 8;
    const Spectrum real = analyze(bilinear_real(f, g, spec, 4 * wide), wide);
    double diff = 0.0, leak = 0.0;
    for (int k = -wide; k <= wide; ++k) {
      const Complex a = std::abs(k) <= four.modes() ? four(0, k) : Complex(0.0);
      if (std::abs(k) <= nf + ng) diff = std::max(diff, std::abs(a - real(0, k)));
      else leak = std::max(leak, std::abs(real(0, k)));
    }
    const std::string id = "bilinear/trial" + std::to_string(trial);
    r.add(id + "/coefficients", "max |coefficient difference|, quadrature vs Fourier route", 1e-8, diff);
    r.add(id + "/support", "modes of the Fourier route beyond n_f + n_g", 0.0, double(four.modes() - (nf + ng)));
    r.add(id + "/leakage", "max |coefficient| of the quadrature route beyond n_f + n_g", 1e-8, leak);
  }
}

void leibniz_suite(const VerifyOptions& o, VerificationReport& r) {
  const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4};
  for (double alpha : o.alphas) {
    Uniform u(o.seed ^ 0xda942042e4dd58b5ULL);
    double slope_excess = -std::numeric_limits<double>::infinity(), max_ratio = 0.0, increment = 0.0;
    int undefined = 0;
    for (int pair = 0; pair < 100; ++pair) {
      const Spectrum f = random_scalar(u, 1 + static_cast<int>(u() * 8));
      const Spectrum g = random_scalar(u, 1 + static_cast<int>(u() * 8));
      BilinearSpec spec;
      spec.s1 = u();
      spec.s2 = u();
      spec.beta = alpha - 2.0;
      const LeibnizTable t = leibniz_probe(f, g, 1.0, spec, grid);
      if (!t.defined) {
        ++undefined;
        continue;
      }
      slope_excess = std::max(slope_excess, t.slope - 2.0 * t.slope_stderr);
      max_ratio = std::max(max_ratio, t.max_ratio);
      // Successive changes of the ratio must shrink as ε decreases (Cauchy behaviour, hence a finite limit).
      const double early = std::abs(t.rows[1].ratio - t.rows[0].ratio);
      const double late = std::abs(t.rows[3].ratio - t.rows[2].ratio);
      increment = std::max(increment, late / std::max(early, 1e-300));
    }
    const std::string id = "leibniz/" + alpha_tag(alpha);
    r.add(id + "/slope", "max over pairs of (slope of ratio vs log ε) - 2σ", 0.0, slope_excess);
    r.add(id + "/finite", "max ratio ‖H^ε(f,g)‖_{H^1} / (‖f‖_{H^{1+β}} ‖g‖_{H^{1+β}})", 1e6, max_ratio);
    r.add(id + "/cauchy", "max over pairs of |r(1e-4) - r(1e-3)| / |r(1e-2) - r(1e-1)|", 1.0, increment);
    r.add(id + "/undefined", "pairs with a vanishing norm", 0.0, undefined);
  }
}

void cor42_suite(const VerifyOptions& o, VerificationReport& r) {
  Uniform u(o.seed ^ 0x2545f4914f6cdd1dULL);
  for (int i = 0; i < 50; ++i) {
    const int l = i % 3;
    const double m = (i / 3) % 2;
    const double alpha = o.alphas[i % o.alphas.size()];
    const std::uint64_t curve_seed = static_cast<std::uint64_t>(u() * 0x1.0p53);
    const ClosedCurve c = make_random_curve(curve_seed, 3, 2 + static_cast<int>(u() * 30));
    const Cor42Result res = cor42_check(c, alpha, l, m);
    r.add("cor42/case" + std::to_string(i) + "/l=" + std::to_string(l) + "/m=" + std::to_string(int(m)) + "/" + alpha_tag(alpha),
          "‖∂^{l+3}γ‖_{H^{m+α-2}} / (C~ ‖∂^l Qγ‖_{H^m})", 1.0 + 1e-12, res.lhs / (res.constant * res.rhs));
  }
}

}  // namespace

std::vector<NamedCurve> verification_curves(const VerifyOptions& o) {
  std::vector<NamedCurve> out;
  out.push_back({"circle", make_circle(3)});
  for (int i = 0; i < 3; ++i) {
    const std::uint64_t s = o.seed + static_cast<std::uint64_t>(i);
    out.push_back({"perturbed-" + std::to_string(s), make_perturbed_circle(s, 0.05, 8, o.modes)});
  }
  out.push_back({"trefoil", make_trefoil(o.modes)});
  return out;
}

VerificationReport run_suite(const std::string& name, const VerifyOptions& options) {
  if (options.alphas.empty()) throw ParameterError("verify: need at least one α");
  for (double a : options.alphas) AlphaParams::checked(a);
  options.ladder.validate();
  if (options.grid < 4 * options.modes) throw ParameterError("verify: grid must be at least 4 * modes");
  VerificationReport r;
  r.suite = name;
  r.seed = options.seed;
  r.environment = environment_string();
  auto run = [&](const std::string& s) {
    if (s == "multiplier") multiplier_suite(options, r);
    else if (s == "decomposition") decomposition_suite(options, r);
    else if (s == "firstvar") firstvar_suite(options, r);
    else if (s == "bilinear") bilinear_suite(options, r);
    else if (s == "leibniz") leibniz_suite(options, r);
    else if (s == "cor42") cor42_suite(options, r);
    else throw ParameterError("verify: unknown suite '" + s + "'");
  };
  if (name == "all")
    for (const auto& s : verification_suites()) run(s);
  else
    run(name);
  return r;
}

}  // namespace knot
