#include "ptqm/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptqm/acceptability.hpp"
#include "ptqm/antilinear.hpp"
#include "ptqm/evolution.hpp"
#include "ptqm/hermitize.hpp"
#include "ptqm/io.hpp"
#include "ptqm/linalg.hpp"
#include "ptqm/ptsym.hpp"

namespace ptqm::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

// Encode non-finite reals as strings so the JSON stays lossless.
Json json_real(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

/// Collects inputs, outputs, config, and stage timings for the manifest
/// written alongside every subcommand's results.
class RunContext {
 public:
  RunContext(std::string command, fs::path out_dir)
      : command_(std::move(command)), out_dir_(std::move(out_dir)), t0_(Clock::now()), stage_t0_(t0_) {
    fs::create_directories(out_dir_);
  }

  const fs::path& out_dir() const { return out_dir_; }

  ComplexMatrix load_matrix(const fs::path& path) {
    ComplexMatrix m = io::load_matrix(path);
    note_input(path);
    return m;
  }
  ComplexVector load_vector(const fs::path& path) {
    ComplexVector v = io::load_vector(path);
    note_input(path);
    return v;
  }
  void note_input(const fs::path& path) {
    inputs_[path.string()] = {{"digest", io::digest_file(path)},
                              {"bytes", fs::file_size(path)}};
  }

  fs::path out_file(const std::string& name) {
    outputs_.push_back(name);
    return out_dir_ / name;
  }

  void set_config(Json config) { config_ = std::move(config); }

  void stage(const std::string& name) {
    const auto now = Clock::now();
    timings_[name] = std::chrono::duration<double>(now - stage_t0_).count();
    stage_t0_ = now;
  }

  void write_manifest() {
    timings_["total"] = std::chrono::duration<double>(Clock::now() - t0_).count();
    Json manifest;
    manifest["command"] = command_;
    manifest["inputs"] = inputs_;
    manifest["config"] = config_;
    manifest["outputs"] = outputs_;
    manifest["timings"] = timings_;
    io::write_file(out_dir_ / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::string command_;
  fs::path out_dir_;
  Json inputs_ = Json::object();
  Json config_ = Json::object();
  Json timings_ = Json::object();
  std::vector<std::string> outputs_;
  Clock::time_point t0_;
  Clock::time_point stage_t0_;
};

Json report_to_json(const AcceptabilityReport& report) {
  Json j;
  j["verdict"] = report.verdict();
  j["real_spectrum"] = report.real_spectrum;
  j["max_imag"] = json_real(report.max_imag);
  j["diagonalizable"] = report.diagonalizable;
  j["eigvec_cond"] = json_real(report.eigvec_cond);
  j["pseudo_hermitian"] = report.pseudo_hermitian;
  j["probability_conserving"] = report.probability_conserving;
  j["metric"] = report.metric ? io::matrix_to_json(report.metric->c()) : Json(nullptr);
  j["reasons"] = report.reasons;
  return j;
}

/// Reproduction assertions: prints one verdict line each, counts failures.
class Checker {
 public:
  void check(bool ok, const std::string& name, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!ok && !detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    if (!ok) ++failures_;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

double entrywise_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int run_check_pt(const fs::path& h_path, const fs::path& p_path, double tol,
                 const fs::path& out_dir) {
  RunContext ctx("check-pt", out_dir);
  const ComplexMatrix h = ctx.load_matrix(h_path);
  const ComplexMatrix pm = ctx.load_matrix(p_path);
  ctx.set_config({{"tol", tol}});
  ctx.stage("load");

  ParityOperator parity(pm, tol);
  const double resid = pt_residual(h, parity);
  const double hnorm = h.frobenius_norm();
  const double rel = hnorm > 0.0 ? resid / hnorm : 0.0;
  const bool ok = rel <= tol;
  ctx.stage("compute");

  Json out;
  out["satisfies"] = ok;
  out["residual"] = json_real(rel);
  io::write_file(ctx.out_file("check_pt.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  ctx.stage("write");
  ctx.write_manifest();
  return ok ? 0 : 2;
}

int run_accept(const fs::path& h_path, const AcceptConfig& config, const fs::path& out_dir) {
  RunContext ctx("accept", out_dir);
  const ComplexMatrix h = ctx.load_matrix(h_path);
  ctx.set_config({{"tol", config.tol},
                  {"cond_cap", config.cond_cap},
                  {"conservation_tol", config.conservation_tol},
                  {"t_max", config.t_max},
                  {"t_points", config.t_points},
                  {"n_states", config.n_states},
                  {"seed", config.seed}});
  ctx.stage("load");

  const AcceptabilityReport report = accept(h, config);
  ctx.stage("compute");

  const Json out = report_to_json(report);
  io::write_file(ctx.out_file("accept_report.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  ctx.stage("write");
  ctx.write_manifest();
  return report.accepted ? 0 : 2;
}

int run_hermitize(const fs::path& h_path, const AcceptConfig& config, const fs::path& out_dir) {
  RunContext ctx("hermitize", out_dir);
  const ComplexMatrix h = ctx.load_matrix(h_path);
  ctx.set_config({{"tol", config.tol}, {"cond_cap", config.cond_cap}, {"seed", config.seed}});
  ctx.stage("load");

  const AcceptabilityReport report = accept(h, config);
  if (!report.accepted) {
    const Json out = report_to_json(report);
    io::write_file(ctx.out_file("accept_report.json"), out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    ctx.stage("write");
    ctx.write_manifest();
    return 2;
  }
  const EquivalencePair pair = hermitize(h, config);
  const double hnorm = h.frobenius_norm();
  const double reconstruction =
      (pair.basis.b() * pair.h_herm * pair.basis.b_inv() - h).frobenius_norm() /
      (hnorm > 0.0 ? hnorm : 1.0);
  const ComplexMatrix sct =
      adjoint(pair.basis.b()) * pair.metric.c() * pair.basis.b();
  const double metric_identity =
      (sct - ComplexMatrix::identity(h.dim())).frobenius_norm();
  ctx.stage("compute");

  Json out;
  out["h_herm"] = io::matrix_to_json(pair.h_herm);
  out["b"] = io::matrix_to_json(pair.basis.b());
  out["b_inv"] = io::matrix_to_json(pair.basis.b_inv());
  out["metric"] = io::matrix_to_json(pair.metric.c());
  out["residuals"] = {{"reconstruction", json_real(reconstruction)},
                      {"metric_identity", json_real(metric_identity)}};
  io::write_file(ctx.out_file("hermitize.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  ctx.stage("write");
  ctx.write_manifest();
  return 0;
}

int run_transform(const fs::path& h_path, const fs::path& b_path, const fs::path& out_dir) {
  RunContext ctx("transform", out_dir);
  const ComplexMatrix h = ctx.load_matrix(h_path);
  const ComplexMatrix bm = ctx.load_matrix(b_path);
  ctx.stage("load");

  const BasisChange basis(bm);
  auto [h_prime, metric] = to_nonorthogonal(h, basis);
  ctx.stage("compute");

  Json out;
  out["h_prime"] = io::matrix_to_json(h_prime);
  out["metric"] = io::matrix_to_json(metric.c());
  io::write_file(ctx.out_file("transform.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  ctx.stage("write");
  ctx.write_manifest();
  return 0;
}

int run_evolve(const fs::path& h_path, const fs::path& c_path, const fs::path& psi_path, double t,
               double hbar, const fs::path& out_dir) {
  RunContext ctx("evolve", out_dir);
  const ComplexMatrix h = ctx.load_matrix(h_path);
  const ComplexMatrix cm = ctx.load_matrix(c_path);
  const ComplexVector psi0 = ctx.load_vector(psi_path);
  ctx.set_config({{"t", t}, {"hbar", hbar}});
  ctx.stage("load");

  const MetricOperator metric(cm);
  const ComplexVector psit = evolve(h, psi0, t, hbar);
  const double n0 = physical_overlap(metric, psi0, psi0).real();
  const double nt = physical_overlap(metric, psit, psit).real();
  ctx.stage("compute");

  Json out = io::vector_to_json(psit);
  io::write_file(ctx.out_file("state.json"), out.dump(2) + "\n");
  Json note;
  note["physical_norm_initial"] = json_real(n0);
  note["physical_norm_final"] = json_real(nt);
  std::cout << out.dump(2) << "\n" << note.dump(2) << "\n";
  ctx.stage("write");
  ctx.write_manifest();
  return 0;
}

std::vector<double> parse_alpha_range(const std::string& text) {
  // "a0:a1:n" inclusive linear grid.
  const size_t c1 = text.find(':');
  const size_t c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw Error("brach: --alphas expects a0:a1:n, got \"" + text + "\"");
  }
  double a0 = 0.0, a1 = 0.0;
  long n = 0;
  try {
    a0 = std::stod(text.substr(0, c1));
    a1 = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    n = std::stol(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw Error("brach: --alphas expects a0:a1:n, got \"" + text + "\"");
  }
  if (n < 1) throw Error("brach: --alphas count must be at least 1");
  std::vector<double> grid(static_cast<size_t>(n));
  for (long k = 0; k < n; ++k) {
    grid[static_cast<size_t>(k)] = (n == 1) ? a0 : a0 + (a1 - a0) * k / (n - 1);
  }
  return grid;
}

int run_brach(double epsilon, const std::string& alphas, double hbar, int jobs, double t_max,
              int grid_points, const fs::path& out_dir) {
  RunContext ctx("brach", out_dir);
  const std::vector<double> grid = parse_alpha_range(alphas);

  EvolutionConfig config;
  config.hbar = hbar;
  config.t_max = t_max > 0.0 ? t_max : 2.0 * std::numbers::pi * hbar / epsilon;
  config.grid_points = grid_points;
  ctx.set_config({{"epsilon", epsilon},
                  {"alphas", alphas},
                  {"hbar", hbar},
                  {"jobs", jobs},
                  {"t_max", config.t_max},
                  {"grid_points", config.grid_points},
                  {"root_polish_tol", config.root_polish_tol}});
  ctx.stage("load");

  std::vector<BrachRecord> records(grid.size());
  if (jobs <= 1 || grid.size() < 2) {
    records = brach_sweep(epsilon, grid, config);
  } else {
    // Records are independent; workers take strided slices and the merge is
    // by index, so the output does not depend on scheduling.
    const int workers = std::min<int>(jobs, static_cast<int>(grid.size()));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (size_t i = static_cast<size_t>(w); i < grid.size(); i += static_cast<size_t>(workers)) {
            const double alpha = grid[i];
            records[i] = brach_sweep(epsilon, std::span<const double>(&alpha, 1), config)[0];
          }
        } catch (...) {
          errors[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  ctx.stage("compute");

  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const BrachRecord& r : records) {
    rows.push_back({r.alpha, r.tau_numeric, r.tau_formula, r.hermitian_bound, r.gap, r.basis_cond});
  }
  io::write_csv(ctx.out_file("brach.csv"),
                {"alpha", "tau_numeric", "tau_formula", "hermitian_bound", "gap", "basis_cond"},
                rows);
  std::cout << "wrote " << records.size() << " records to "
            << (ctx.out_dir() / "brach.csv").string() << "\n";
  ctx.stage("write");
  ctx.write_manifest();
  return 0;
}

int run_demo_shifted_osc(int n_max, const fs::path& out_dir) {
  RunContext ctx("demo shifted-osc", out_dir);
  ctx.set_config({{"n_max", n_max}});
  ctx.stage("load");

  const ComplexMatrix h = shifted_oscillator(n_max);
  const Eigensystem es = eig(h);
  const int levels = (n_max + 7) / 8;  // truncation corrupts the top; report the low part
  double max_err = 0.0, max_imag = 0.0;
  Json values = Json::array();
  for (int k = 0; k < levels; ++k) {
    const Complex lambda = es.values[static_cast<size_t>(k)];
    values.push_back(Json::array({lambda.real(), lambda.imag()}));
    max_err = std::max(max_err, std::abs(lambda - Complex(k + 1.0, 0.0)));
    max_imag = std::max(max_imag, std::abs(lambda.imag()));
  }
  ctx.stage("compute");

  Json out;
  out["n_max"] = n_max;
  out["levels"] = levels;
  out["eigenvalues"] = values;
  out["residuals"] = {{"max_abs_error", json_real(max_err)}, {"max_imag", json_real(max_imag)}};
  io::write_file(ctx.out_file("shifted_osc.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  ctx.stage("write");
  ctx.write_manifest();
  return 0;
}

// ---------------------------------------------------------------------------
// Reproduction suites
// ---------------------------------------------------------------------------

int repro_counterexample(RunContext& ctx, Checker& check) {
  auto [parity, h] = jordan_counterexample();

  check.check(satisfies_pt(h, parity, 1e-12), "counterexample: consistency condition holds");

  const Eigensystem es = eig(h);
  bool eigs_one = true;
  for (Complex lambda : es.values) eigs_one = eigs_one && std::abs(lambda - 1.0) <= 1e-12;
  check.check(eigs_one, "counterexample: single eigenvalue 1");

  // Lone eigendirection: every computed eigenvector lies along (1, 0). The
  // kernel of (H - I) confirms it independently: (H - I) e1 = 0.
  bool span_e1 = true;
  for (int j = 0; j < 2; ++j) span_e1 = span_e1 && std::norm(es.vectors(0, j)) >= 1.0 - 1e-12;
  const ComplexMatrix shifted = h - ComplexMatrix::identity(2);
  const ComplexVector ker = shifted * std::span<const Complex>(ComplexVector{1.0, 0.0});
  span_e1 = span_e1 && norm2(ker) == 0.0;
  check.check(span_e1, "counterexample: eigenspace is span{(1,0)}");

  const double svcond = cond(es.vectors);
  check.check(!(svcond <= 1e8), "counterexample: eigenvector matrix numerically rank 1",
              "cond = " + std::to_string(svcond));

  const AcceptabilityReport report = accept(h);
  const bool rejected_right =
      !report.accepted && report.reasons.size() == 1 && report.reasons[0] == "not diagonalizable";
  check.check(rejected_right, "counterexample: rejected as not diagonalizable");

  // Naive norm is not conserved: drift well beyond 1% by t = 5.
  const ComplexVector psi0 = {0.0, 1.0};
  const ComplexVector psi5 = evolve(h, psi0, 5.0);
  const double drift = std::abs(norm2(psi5) - norm2(psi0)) / norm2(psi0);
  check.check(drift > 0.01, "counterexample: naive norm drifts under evolution",
              "drift = " + std::to_string(drift));

  io::save_matrix(ctx.out_file("counterexample_p.json"), parity.p());
  io::save_matrix(ctx.out_file("counterexample_h.json"), h);
  io::write_file(ctx.out_file("counterexample_report.json"),
                 report_to_json(report).dump(2) + "\n");
  return check.failures();
}

int repro_spin_half(RunContext& ctx, Checker& check, double alpha, double epsilon) {
  const double s2 = std::sin(2.0 * alpha);
  const double c2 = std::cos(2.0 * alpha);
  const Complex i(0.0, 1.0);

  const ComplexMatrix h = spin_half(epsilon);
  const BasisChange basis = alpha_basis(alpha);
  auto [h_prime, metric] = to_nonorthogonal(h, basis);

  const ComplexMatrix h_prime_ref(
      2, {-i * s2 * epsilon / c2, Complex(-epsilon / c2, 0.0), Complex(-epsilon / c2, 0.0),
          i * s2 * epsilon / c2});
  check.check(entrywise_distance(h_prime, h_prime_ref) <= 1e-10,
              "spin-half: transformed Hamiltonian matches the closed form");

  const ComplexMatrix c_ref(2, {Complex(1.0 / (c2 * c2), 0.0), -i * s2 / (c2 * c2),
                                i * s2 / (c2 * c2), Complex(1.0 / (c2 * c2), 0.0)});
  check.check(entrywise_distance(metric.c(), c_ref) <= 1e-10,
              "spin-half: metric B^H B matches the closed form");

  const MetricOperator built = build_metric(h_prime);
  const double scale = built.c()(0, 0).real() / c_ref(0, 0).real();
  ComplexMatrix scaled_ref = c_ref;
  scaled_ref *= Complex(scale, 0.0);
  check.check(scale > 0.0 && entrywise_distance(built.c(), scaled_ref) <= 1e-10 * scale,
              "spin-half: built metric matches up to positive scale",
              "scale = " + std::to_string(scale));

  const Eigensystem es = eig(h_prime);
  const bool spectrum_ok = std::abs(es.values[0] - Complex(-epsilon, 0.0)) <= 1e-10 &&
                           std::abs(es.values[1] - Complex(epsilon, 0.0)) <= 1e-10;
  check.check(spectrum_ok, "spin-half: eigenvalues unchanged by the basis change");

  EvolutionConfig config;
  config.t_max = 2.0 * std::numbers::pi / epsilon;
  const ComplexVector e1 = {1.0, 0.0};
  const ComplexVector e2 = {0.0, 1.0};
  const auto tau = first_passage_time(h_prime, metric, e1, e2, config);
  const double tau_ref = tau_formula(epsilon, alpha);
  check.check(tau && std::abs(*tau - tau_ref) <= 1e-8 / epsilon,
              "spin-half: first passage time matches (hbar/eps) atan(1/tan 2a)",
              tau ? "tau = " + std::to_string(*tau) : "not found");

  // Back-transformed basis vectors, up to a global phase.
  const ComplexVector e1_back = transform_state(e1, basis, TransformDirection::kBackward);
  const ComplexVector e2_back = transform_state(e2, basis, TransformDirection::kBackward);
  const ComplexVector e1_ref = {Complex(-std::cos(alpha) / c2, 0.0), i * std::sin(alpha) / c2};
  const ComplexVector e2_ref = {i * std::sin(alpha) / c2, Complex(std::cos(alpha) / c2, 0.0)};
  const auto matches_up_to_phase = [](const ComplexVector& v, const ComplexVector& ref) {
    const double vn = norm2(v), rn = norm2(ref);
    const double cos2 = std::norm(dot(v, ref)) / (vn * vn * rn * rn);
    return cos2 >= 1.0 - 1e-10 && std::abs(vn - rn) <= 1e-10 * rn;
  };
  check.check(matches_up_to_phase(e1_back, e1_ref),
              "spin-half: back-transformed e1 matches up to phase");
  check.check(matches_up_to_phase(e2_back, e2_ref),
              "spin-half: back-transformed e2 matches up to phase");

  io::save_matrix(ctx.out_file("spin_half_hprime.json"), h_prime);
  io::save_matrix(ctx.out_file("spin_half_metric.json"), metric.c());
  Json summary;
  summary["alpha"] = alpha;
  summary["epsilon"] = epsilon;
  summary["tau_numeric"] = tau ? json_real(*tau) : Json(nullptr);
  summary["tau_formula"] = json_real(tau_ref);
  summary["hermitian_bound"] = json_real(hermitian_bound(2.0 * epsilon));
  io::write_file(ctx.out_file("spin_half_summary.json"), summary.dump(2) + "\n");
  return check.failures();
}

int repro_antilinear(RunContext& ctx, Checker& check, std::uint64_t seed) {
  // Pure conjugation in one dimension pair: A = identity on (i, 1).
  const AntilinearOperator conj2{ComplexMatrix::identity(2)};
  const ComplexVector flipped = apply(conj2, ComplexVector{Complex(0.0, 1.0), 1.0});
  check.check(std::abs(flipped[0] - Complex(0.0, -1.0)) <= 1e-15 &&
                  std::abs(flipped[1] - Complex(1.0, 0.0)) <= 1e-15,
              "antilinear: pure conjugation maps (i,1) to (-i,1)");

  const ComplexMatrix h = ComplexMatrix::diagonal(
      std::span<const Complex>(ComplexVector{1.0, Complex(0.0, 1.0), Complex(0.0, -1.0)}));
  const AntilinearOperator a{
      ComplexMatrix(3, {1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0})};

  check.check(is_involution(a, 1e-12), "antilinear: operator squares to the identity");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ComplexVector v(3);
  for (Complex& z : v) z = Complex(unif(rng), unif(rng));
  const ComplexVector av = apply(a, v);
  const bool swaps = std::abs(av[0] - std::conj(v[0])) <= 1e-15 &&
                     std::abs(av[1] - std::conj(v[2])) <= 1e-15 &&
                     std::abs(av[2] - std::conj(v[1])) <= 1e-15;
  check.check(swaps, "antilinear: action is (a,b,c) -> (a*,c*,b*)");

  const ComplexVector aav = apply(a, av);
  double round_trip = 0.0;
  for (size_t k = 0; k < 3; ++k) round_trip = std::max(round_trip, std::abs(aav[k] - v[k]));
  check.check(round_trip <= 1e-12, "antilinear: applying twice is the identity");

  check.check(commutes_with(h, a, 1e-12), "antilinear: operators commute");
  const double raw_comm = (h * a.m - a.m * h).frobenius_norm();
  check.check(raw_comm > 0.5, "antilinear: raw matrices do not commute",
              "||[H,M]|| = " + std::to_string(raw_comm));

  const SharedSpectrumReport report = shared_spectrum(h, a, 1e-8);
  int shared = 0;
  bool shared_is_one = false;
  for (const SharedRecord& r : report.records) {
    if (r.is_shared) {
      ++shared;
      shared_is_one = std::abs(r.eigenvalue - Complex(1.0, 0.0)) <= 1e-12;
    }
  }
  check.check(shared == 1 && shared_is_one && !report.unbroken,
              "antilinear: exactly one shared eigenvector, eigenvalue 1, symmetry broken");

  io::save_matrix(ctx.out_file("antilinear_h.json"), h);
  io::write_file(ctx.out_file("antilinear_a.json"), io::antilinear_to_json(a).dump(2) + "\n");
  Json rep;
  rep["unbroken"] = report.unbroken;
  rep["records"] = Json::array();
  for (const SharedRecord& r : report.records) {
    Json rj;
    rj["eigenvalue"] = Json::array({r.eigenvalue.real(), r.eigenvalue.imag()});
    rj["is_shared"] = r.is_shared;
    rj["residual"] = json_real(r.residual);
    if (r.antilinear_eigenvalue) {
      rj["antilinear_eigenvalue"] =
          Json::array({r.antilinear_eigenvalue->real(), r.antilinear_eigenvalue->imag()});
    }
    rep["records"].push_back(rj);
  }
  io::write_file(ctx.out_file("antilinear_report.json"), rep.dump(2) + "\n");
  return check.failures();
}

int run_repro(const std::string& which, double alpha, double epsilon, std::uint64_t seed,
              const fs::path& out_dir) {
  RunContext ctx("repro " + which, out_dir);
  ctx.set_config({{"alpha", alpha}, {"epsilon", epsilon}, {"seed", seed}});
  Checker check;
  if (which == "counterexample") {
    repro_counterexample(ctx, check);
  } else if (which == "spin-half") {
    repro_spin_half(ctx, check, alpha, epsilon);
  } else if (which == "antilinear") {
    repro_antilinear(ctx, check, seed);
  } else if (which == "all") {
    repro_counterexample(ctx, check);
    repro_spin_half(ctx, check, alpha, epsilon);
    repro_antilinear(ctx, check, seed);
  } else {
    throw Error("repro: unknown target \"" + which +
                "\" (expected counterexample, spin-half, antilinear, or all)");
  }
  ctx.write_manifest();
  if (check.failures() > 0) {
    std::cout << check.failures() << " assertion(s) failed\n";
    return 2;
  }
  std::cout << "all assertions passed\n";
  return 0;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PTQM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error("PTQM_SEED must be an unsigned integer");
    }
  }
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Non-Hermitian Hamiltonian toolkit: acceptability, metric construction, "
               "Hermitization, and time evolution"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags like --out may follow the subcommand
  // Long help only: -h would collide with the --h matrix options below.
  app.set_help_flag("--help", "Print this help message and exit");

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "Output directory for results and manifest")
      ->capture_default_str();

  // check-pt
  auto* cp = app.add_subcommand("check-pt", "Test h = p conj(h) p for a parity operator");
  std::string cp_h, cp_p;
  double cp_tol = 1e-9;
  cp->add_option("--h", cp_h, "Hamiltonian matrix JSON")->required();
  cp->add_option("--p", cp_p, "Parity matrix JSON")->required();
  cp->add_option("--tol", cp_tol, "Relative tolerance")->capture_default_str();

  // accept
  auto* ac = app.add_subcommand("accept", "Run the four physical-acceptability criteria");
  std::string ac_h;
  AcceptConfig ac_config;
  ac->add_option("--h", ac_h, "Hamiltonian matrix JSON")->required();
  ac->add_option("--tol", ac_config.tol, "Spectrum/Hermiticity tolerance")->capture_default_str();
  ac->add_option("--cond-cap", ac_config.cond_cap, "Diagonalizability condition cap")
      ->capture_default_str();
  ac->add_option("--conservation-tol", ac_config.conservation_tol,
                 "Probability conservation tolerance")
      ->capture_default_str();
  ac->add_option("--t-max", ac_config.t_max, "Conservation check horizon")->capture_default_str();
  ac->add_option("--states", ac_config.n_states, "Number of sampled states")
      ->capture_default_str();
  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  ac->add_option("--seed", seed_flag, "RNG seed (overrides PTQM_SEED)")
      ->each([&seed_set](const std::string&) { seed_set = true; });

  // hermitize
  auto* hz = app.add_subcommand("hermitize", "Factor an accepted Hamiltonian as B D B^-1");
  std::string hz_h;
  AcceptConfig hz_config;
  hz->add_option("--h", hz_h, "Hamiltonian matrix JSON")->required();
  hz->add_option("--tol", hz_config.tol, "Acceptance tolerance")->capture_default_str();
  hz->add_option("--cond-cap", hz_config.cond_cap, "Diagonalizability condition cap")
      ->capture_default_str();

  // transform
  auto* tr = app.add_subcommand("transform", "Rewrite a Hermitian Hamiltonian in a basis b");
  std::string tr_h, tr_b;
  tr->add_option("--h", tr_h, "Hermitian matrix JSON")->required();
  tr->add_option("--b", tr_b, "Basis matrix JSON")->required();

  // evolve
  auto* ev = app.add_subcommand("evolve", "Apply expm(-i h t / hbar) to a state");
  std::string ev_h, ev_c, ev_psi;
  double ev_t = 0.0, ev_hbar = 1.0;
  ev->add_option("--h", ev_h, "Hamiltonian matrix JSON")->required();
  ev->add_option("--c", ev_c, "Metric matrix JSON")->required();
  ev->add_option("--psi0", ev_psi, "Initial state vector JSON")->required();
  ev->add_option("--t", ev_t, "Evolution time")->required();
  ev->add_option("--hbar", ev_hbar, "hbar")->capture_default_str();

  // brach
  auto* br = app.add_subcommand("brach", "Sweep the basis parameter and tabulate passage times");
  double br_eps = 1.0, br_hbar = 1.0, br_tmax = 0.0;
  std::string br_alphas;
  int br_jobs = 1, br_grid = 4096;
  br->add_option("--epsilon", br_eps, "Coupling strength")->required();
  br->add_option("--alphas", br_alphas, "Grid a0:a1:n (inclusive)")->required();
  br->add_option("--hbar", br_hbar, "hbar")->capture_default_str();
  br->add_option("--jobs", br_jobs, "Worker threads")->capture_default_str();
  br->add_option("--t-max", br_tmax, "Search horizon (default 2*pi*hbar/epsilon)");
  br->add_option("--grid-points", br_grid, "Fidelity scan resolution")->capture_default_str();

  // demo
  auto* demo = app.add_subcommand("demo", "Desk-scale demonstrations");
  demo->require_subcommand(1);
  auto* osc = demo->add_subcommand("shifted-osc",
                                   "Truncated p^2/2 + x^2/2 + ix spectrum in the number basis");
  int osc_nmax = 64;
  osc->add_option("--nmax", osc_nmax, "Truncation size")->capture_default_str();

  // repro
  auto* rp = app.add_subcommand("repro", "Re-run the built-in worked examples and assert them");
  std::string rp_which;
  double rp_alpha = 0.3, rp_eps = 1.0;
  rp->add_option("target", rp_which, "counterexample | spin-half | antilinear | all")->required();
  rp->add_option("--alpha", rp_alpha, "Basis parameter for spin-half")->capture_default_str();
  rp->add_option("--epsilon", rp_eps, "Coupling for spin-half")->capture_default_str();
  std::uint64_t rp_seed_flag = 0;
  bool rp_seed_set = false;
  rp->add_option("--seed", rp_seed_flag, "RNG seed (overrides PTQM_SEED)")
      ->each([&rp_seed_set](const std::string&) { rp_seed_set = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cp->parsed()) return run_check_pt(cp_h, cp_p, cp_tol, out_dir);
    if (ac->parsed()) {
      ac_config.seed = seed_set ? seed_flag : default_seed();
      return run_accept(ac_h, ac_config, out_dir);
    }
    if (hz->parsed()) return run_hermitize(hz_h, hz_config, out_dir);
    if (tr->parsed()) return run_transform(tr_h, tr_b, out_dir);
    if (ev->parsed()) return run_evolve(ev_h, ev_c, ev_psi, ev_t, ev_hbar, out_dir);
    if (br->parsed()) {
      return run_brach(br_eps, br_alphas, br_hbar, br_jobs, br_tmax, br_grid, out_dir);
    }
    if (demo->parsed() && osc->parsed()) return run_demo_shifted_osc(osc_nmax, out_dir);
    if (rp->parsed()) {
      const std::uint64_t seed = rp_seed_set ? rp_seed_flag : default_seed();
      return run_repro(rp_which, rp_alpha, rp_eps, seed, out_dir);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand executed\n";
  return 1;
}

int dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("ptqm");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ptqm::cli
