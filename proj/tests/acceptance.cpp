// Acceptance suite: every release-gating behavior asserted end to end, one
// verdict line per criterion. Exits nonzero if any criterion fails beyond
// the documented spec-infeasible clause in criterion 1.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ptqm/acceptability.hpp"
#include "ptqm/antilinear.hpp"
#include "ptqm/cli.hpp"
#include "ptqm/evolution.hpp"
#include "ptqm/hermitize.hpp"
#include "ptqm/io.hpp"
#include "ptqm/linalg.hpp"
#include "ptqm/ptsym.hpp"
#include "support.hpp"

using namespace ptqm;
using namespace ptqm::testing;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;
int g_expected_failures = 0;

void report(int criterion, bool ok, const std::string& name, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

// For the one clause that is arithmetically unsatisfiable as specified: the
// verdict line still reads FAIL, but it does not gate the build. Any other
// regression in the same criterion does.
void report_expected_fail(int criterion, const std::string& name, const std::string& detail) {
  std::printf("[FAIL] criterion %d: %s (%s) [expected: infeasible as specified, see notes]\n",
              criterion, name.c_str(), detail.c_str());
  ++g_expected_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Sweep alpha in {0.01, ..., 0.76}: the measured first passage matches
//    (hbar/eps) atan(1/tan 2a) to 1e-8, with the stated limiting values, in
//    under five seconds.
//
//    The low-alpha limit clause asks for tau(0.01) within 1e-3 of
//    pi hbar/(2 eps). But tau(alpha) = pi hbar/(2 eps) - 2 alpha hbar/eps
//    identically, so the gap at alpha = 0.01 is exactly 0.02: the clause
//    cannot hold together with the 1e-8 formula match. It is asserted as
//    written and reported as an expected failure.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double eps = 1.0;
  std::vector<double> grid;
  for (int k = 1; k <= 76; ++k) grid.push_back(0.01 * k);

  EvolutionConfig config;
  config.t_max = 2.0 * kPi / eps;
  const std::vector<BrachRecord> records = brach_sweep(eps, grid, config);

  double worst = 0.0;
  for (const BrachRecord& r : records) {
    worst = std::max(worst, std::abs(r.tau_numeric - r.tau_formula));
  }
  const double bound = kPi / (2.0 * eps);
  const double low_limit_gap = std::abs(records.front().tau_numeric - bound);
  const bool low_limit_ok = low_limit_gap <= 1e-3;
  const bool high_limit_ok = records.back().tau_numeric < 0.1 * bound;
  const double elapsed = seconds_since(t0);
  const bool rest_ok = worst <= 1e-8 && high_limit_ok && elapsed < 5.0;

  char detail[320];
  std::snprintf(detail, sizeof detail,
                "max |tau_num - tau_formula| = %.3e (<= 1e-8: %s); |tau(0.01) - pi/2| = %.6f "
                "(<= 1e-3: %s; equals 2*alpha exactly); tau(0.76) = %.6f (< 0.1*pi/2: %s); %.2f s",
                worst, worst <= 1e-8 ? "yes" : "NO", low_limit_gap, low_limit_ok ? "yes" : "NO",
                records.back().tau_numeric, high_limit_ok ? "yes" : "NO", elapsed);
  if (rest_ok && !low_limit_ok) {
    report_expected_fail(1, "brachistochrone sweep", detail);
  } else {
    report(1, rest_ok && low_limit_ok, "brachistochrone sweep", detail);
  }
}

// 2. The Hermitian spin flip attains pi hbar / omega at omega = 2 eps.
void criterion_2() {
  const double eps = 1.0;
  EvolutionConfig config;
  config.t_max = 2.0 * kPi / eps;
  const MetricOperator id(ComplexMatrix::identity(2));
  const auto tau = first_passage_time(spin_half(eps), id, ComplexVector{1.0, 0.0},
                                      ComplexVector{0.0, 1.0}, config);
  const double expected = hermitian_bound(2.0 * eps);
  const double err = tau ? std::abs(*tau - expected) : INFINITY;
  char detail[96];
  std::snprintf(detail, sizeof detail, "|tau - pi/omega| = %.3e", err);
  report(2, err <= 1e-9, "Hermitian bound attained", detail);
}

// 3. The first passage is frame independent: primed description with its
//    metric against the original description with back-transformed targets.
void criterion_3() {
  const double eps = 1.0;
  const MetricOperator id(ComplexMatrix::identity(2));
  double worst = 0.0;
  bool all_found = true;
  for (double alpha : {0.2, 0.5, 0.7}) {
    const BasisChange basis = alpha_basis(alpha);
    auto [hp, metric] = to_nonorthogonal(spin_half(eps), basis);
    EvolutionConfig config;
    config.t_max = 2.0 * kPi / eps;

    const ComplexVector e1 = {1.0, 0.0};
    const ComplexVector e2 = {0.0, 1.0};
    const auto tau_primed = first_passage_time(hp, metric, e1, e2, config);

    const ComplexVector e1_orig = transform_state(e1, basis, TransformDirection::kBackward);
    const ComplexVector e2_orig = transform_state(e2, basis, TransformDirection::kBackward);
    const auto tau_orig = first_passage_time(spin_half(eps), id, e1_orig, e2_orig, config);

    if (!tau_primed || !tau_orig) {
      all_found = false;
      break;
    }
    worst = std::max(worst, std::abs(*tau_primed - *tau_orig));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max frame disagreement = %.3e", worst);
  report(3, all_found && worst <= 1e-8, "coordinate-artifact demonstration", detail);
}

// 4. The spin-half reproduction emits the closed-form transformed
//    Hamiltonian and metric entrywise to 1e-10, and the CLI agrees.
void criterion_4() {
  const double alpha = 0.3, eps = 1.0;
  const double s2 = std::sin(2.0 * alpha), c2 = std::cos(2.0 * alpha);
  const Complex i(0.0, 1.0);
  auto [hp, metric] = to_nonorthogonal(spin_half(eps), alpha_basis(alpha));

  const ComplexMatrix hp_ref(2, {-i * s2 * eps / c2, Complex(-eps / c2, 0.0),
                                 Complex(-eps / c2, 0.0), i * s2 * eps / c2});
  const ComplexMatrix c_ref(2, {Complex(1.0 / (c2 * c2), 0.0), -i * s2 / (c2 * c2),
                                i * s2 / (c2 * c2), Complex(1.0 / (c2 * c2), 0.0)});
  const double h_err = max_abs_diff(hp, hp_ref);
  const double c_err = max_abs_diff(metric.c(), c_ref);

  const MetricOperator built = build_metric(hp);
  const double scale = built.c()(0, 0).real() / c_ref(0, 0).real();
  ComplexMatrix scaled = c_ref;
  scaled *= Complex(scale, 0.0);
  const double built_err = max_abs_diff(built.c(), scaled);

  const std::filesystem::path out =
      std::filesystem::temp_directory_path() / ("ptqm_acc4_" + std::to_string(::getpid()));
  std::filesystem::remove_all(out);
  const int cli_rc = cli::dispatch({"--out", out.string(), "repro", "spin-half", "--alpha",
                                    "0.3"});
  std::filesystem::remove_all(out);

  char detail[192];
  std::snprintf(detail, sizeof detail,
                "H' err = %.3e, C err = %.3e, built-metric err = %.3e (scale %.3f), repro exit = %d",
                h_err, c_err, built_err, scale, cli_rc);
  report(4,
         h_err <= 1e-10 && c_err <= 1e-10 && scale > 0.0 && built_err <= 1e-10 * scale &&
             cli_rc == 0,
         "worked-example closed forms", detail);
}

// 5. The defective pair: consistency condition holds, the eigenspace is one
//    dimensional, acceptance rejects it as not diagonalizable, and the naive
//    norm visibly drifts. (For these matrices the lone eigendirection is
//    (1,0); the kernel of H - I confirms it.)
void criterion_5() {
  auto [parity, h] = jordan_counterexample();
  const bool pt_ok = satisfies_pt(h, parity, 1e-12);

  const Eigensystem es = eig(h);
  bool lone_direction = std::abs(es.values[0] - 1.0) <= 1e-12 &&
                        std::abs(es.values[1] - 1.0) <= 1e-12;
  for (int j = 0; j < 2; ++j) {
    lone_direction = lone_direction && std::norm(es.vectors(0, j)) >= 1.0 - 1e-12;
  }
  const ComplexVector ker =
      (h - ComplexMatrix::identity(2)) * std::span<const Complex>(ComplexVector{1.0, 0.0});
  lone_direction = lone_direction && norm2(ker) == 0.0;
  const std::vector<double> sv = singular_values(es.vectors);
  lone_direction = lone_direction && sv[1] <= 1e-12;

  const AcceptabilityReport rep = accept(h);
  const bool rejected = !rep.accepted && rep.reasons.size() == 1 &&
                        rep.reasons[0] == "not diagonalizable";

  const ComplexVector psi0 = {0.0, 1.0};
  const ComplexVector psi5 = evolve(h, psi0, 5.0);
  const double drift = std::abs(norm2(psi5) - norm2(psi0)) / norm2(psi0);

  char detail[192];
  std::snprintf(detail, sizeof detail,
                "condition %s, eigenspace rank 1: %s, verdict: %s, norm drift at t=5: %.2f",
                pt_ok ? "holds" : "fails", lone_direction ? "yes" : "no", rep.verdict(), drift);
  report(5, pt_ok && lone_direction && rejected && drift > 0.01, "counterexample rejection",
         detail);
}

// 6. The 3x3 anti-linear pair: commutation at 1e-12, exactly one shared
//    eigenvector with eigenvalue 1, broken symmetry.
void criterion_6() {
  const Complex i(0.0, 1.0);
  const ComplexMatrix h = ComplexMatrix::diagonal(
      std::span<const Complex>(ComplexVector{1.0, i, -i}));
  const AntilinearOperator a{
      ComplexMatrix(3, {1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0})};

  const bool commute = commutes_with(h, a, 1e-12);
  const SharedSpectrumReport rep = shared_spectrum(h, a);
  int shared = 0;
  bool eigenvalue_one = false;
  for (const SharedRecord& r : rep.records) {
    if (r.is_shared) {
      ++shared;
      eigenvalue_one = std::abs(r.eigenvalue - Complex(1.0, 0.0)) <= 1e-12;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof detail, "commutes: %s, shared = %d, unbroken = %s",
                commute ? "yes" : "no", shared, rep.unbroken ? "true" : "false");
  report(6, commute && shared == 1 && eigenvalue_one && !rep.unbroken, "3x3 anti-linear example",
         detail);
}

// 7. Equivalence pipeline on 200 seeded similarity transforms of real
//    diagonals: accepted, spectrum recovered, metric identities, and
//    conservation, inside 30 seconds.
void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20260809);
  int accepted = 0;
  double worst_recover = 0.0, worst_gram = 0.0, worst_pseudo = 0.0, worst_drift = 0.0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const DiagonalizableSample sample = random_diagonalizable(rng, n, 1e3);

    const AcceptabilityReport rep = accept(sample.h);
    if (!rep.accepted) continue;
    ++accepted;

    const EquivalencePair pair = hermitize(sample.h);
    for (int j = 0; j < n; ++j) {
      worst_recover =
          std::max(worst_recover, std::abs(pair.h_herm(j, j).real() - sample.d[j]));
    }
    const ComplexMatrix gram = adjoint(pair.basis.b()) * pair.metric.c() * pair.basis.b();
    worst_gram =
        std::max(worst_gram, (gram - ComplexMatrix::identity(n)).frobenius_norm());

    const ComplexMatrix& c = pair.metric.c();
    worst_pseudo = std::max(worst_pseudo,
                            (adjoint(sample.h) * c - c * sample.h).frobenius_norm() /
                                (c.frobenius_norm() * sample.h.frobenius_norm()));

    const ComplexVector psi0 = random_vector(rng, n);
    const double n0 = dot(psi0, c * std::span<const Complex>(psi0)).real();
    for (double t = 0.0; t <= 10.0; t += 1.0) {
      const ComplexVector psit = evolve(sample.h, psi0, t);
      const double nt = dot(psit, c * std::span<const Complex>(psit)).real();
      worst_drift = std::max(worst_drift, std::abs(nt - n0) / n0);
    }
  }
  const double elapsed = seconds_since(t0);
  char detail[224];
  std::snprintf(detail, sizeof detail,
                "%d/%d accepted, recover %.3e, gram %.3e, pseudo %.3e, drift %.3e, %.2f s",
                accepted, trials, worst_recover, worst_gram, worst_pseudo, worst_drift, elapsed);
  report(7,
         accepted == trials && worst_recover <= 1e-8 && worst_gram <= 1e-8 &&
             worst_pseudo <= 1e-8 && worst_drift <= 1e-9 && elapsed < 30.0,
         "equivalence pipeline", detail);
}

// 8. Truncated p^2/2 + x^2/2 + ix: five lowest eigenvalues at n = 64 within
//    1e-6 of {1..5} (the completed square gives n + 1), imaginary parts
//    below 1e-8, and the ground-state error shrinking from 16 through 64.
//    By n = 16 the truncation error already sits at the double-precision
//    floor (a few ulp of the eigenvalue), so the decrease is asserted
//    strictly between the endpoints and within a 4-ulp rounding allowance at
//    the intermediate checkpoint.
void criterion_8() {
  const Eigensystem e64 = eig(shifted_oscillator(64));
  double worst = 0.0, worst_imag = 0.0;
  for (int k = 0; k < 5; ++k) {
    worst = std::max(worst, std::abs(e64.values[k] - Complex(k + 1.0, 0.0)));
    worst_imag = std::max(worst_imag, std::abs(e64.values[k].imag()));
  }
  std::vector<double> ground_errors;
  for (int n : {16, 32, 64}) {
    const Eigensystem es = eig(shifted_oscillator(n));
    ground_errors.push_back(std::abs(es.values[0] - Complex(1.0, 0.0)));
  }
  const double ulp_slack = 4.0 * std::numeric_limits<double>::epsilon();
  const bool monotone = ground_errors[0] >= ground_errors[2] &&
                        ground_errors[1] <= ground_errors[0] + ulp_slack &&
                        ground_errors[2] <= ground_errors[1] + ulp_slack;
  char detail[256];
  std::snprintf(detail, sizeof detail,
                "low-5 err %.3e, |Im| %.3e, ground err %.3e -> %.3e -> %.3e", worst, worst_imag,
                ground_errors[0], ground_errors[1], ground_errors[2]);
  report(8, worst <= 1e-6 && worst_imag <= 1e-8 && monotone, "shifted-oscillator demo", detail);
}

// 9. Transported inner products match the originals for 100 random triples.
void criterion_9() {
  Rng rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const BasisChange basis(random_invertible(rng, n, 1e3));
    const ComplexMatrix c = adjoint(basis.b()) * basis.b();
    const ComplexVector psi = random_vector(rng, n);
    const ComplexVector phi = random_vector(rng, n);
    const ComplexVector psi_p = transform_state(psi, basis, TransformDirection::kForward);
    const ComplexVector phi_p = transform_state(phi, basis, TransformDirection::kForward);
    const Complex lhs = dot(psi_p, c * std::span<const Complex>(phi_p));
    const Complex rhs = dot(psi, phi);
    worst = std::max(worst, std::abs(lhs - rhs) / (norm2(psi) * norm2(phi)));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max normalized deviation = %.3e", worst);
  report(9, worst <= 1e-9, "amplitude invariance", detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  if (g_expected_failures > 0) {
    std::printf("%d criteria passed; %d failed as documented (infeasible as specified)\n",
                9 - g_expected_failures, g_expected_failures);
    return 0;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
