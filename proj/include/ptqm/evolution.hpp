#ifndef PTQM_EVOLUTION_HPP
#define PTQM_EVOLUTION_HPP

#include <optional>
#include <vector>

#include "ptqm/acceptability.hpp"
#include "ptqm/hermitize.hpp"
#include "ptqm/linalg.hpp"

namespace ptqm {

struct EvolutionConfig {
  double hbar = 1.0;
  double t_max = 10.0;
  int grid_points = 4096;
  double root_polish_tol = 1e-10;
};

/// One point of a brachistochrone sweep: the numerically measured first
/// passage time against the closed-form prediction, the Hermitian lower
/// bound pi*hbar/omega for the same spectral gap, and the conditioning of
/// the basis that produced the non-Hermitian description.
struct BrachRecord {
  double alpha = 0.0;
  double tau_numeric = 0.0;
  double tau_formula = 0.0;
  double hermitian_bound = 0.0;
  double basis_cond = 0.0;
  double gap = 0.0;
};

/// psi(t) = expm(-i h t / hbar) psi0.
ComplexVector evolve(const ComplexMatrix& h, std::span<const Complex> psi0, double t,
                     double hbar = 1.0);

/// <phi| c |psi>.
Complex physical_overlap(const MetricOperator& c, std::span<const Complex> phi,
                         std::span<const Complex> psi);

/// Phase-free fidelity |<target|c|psi(t)>|^2 / (<target|c|target><psi(t)|c|psi(t)>).
double physical_fidelity(const ComplexMatrix& h, const MetricOperator& c,
                         std::span<const Complex> psi0, std::span<const Complex> target,
                         double t, double hbar = 1.0);

/// Smallest t in (0, t_max] at which the evolved state reaches the target up
/// to phase: dense grid scan for the first fidelity maximum above the
/// detection threshold, then golden-section refinement to root_polish_tol in
/// t. Returns 0 when the start already matches the target; nullopt when the
/// target is never reached.
std::optional<double> first_passage_time(const ComplexMatrix& h, const MetricOperator& c,
                                         std::span<const Complex> psi0,
                                         std::span<const Complex> target,
                                         const EvolutionConfig& config);

/// Spin-1/2 coupling to a transverse field: epsilon * sigma_x.
ComplexMatrix spin_half(double epsilon);

/// The one-parameter non-orthogonal basis family
/// b_inv = [[cos a, -i sin a], [-i sin a, -cos a]]; singular where cos 2a
/// vanishes (all odd multiples of pi/4 are guarded).
BasisChange alpha_basis(double alpha);

/// Closed-form first passage time (hbar/epsilon) * atan(1/tan 2a) for the
/// alpha-basis family, with the a = 0 limit pi*hbar/(2 epsilon). Domain
/// [0, pi/4).
double tau_formula(double epsilon, double alpha, double hbar = 1.0);

/// Fastest Hermitian evolution between orthogonal states at spectral gap
/// omega: pi * hbar / omega.
double hermitian_bound(double omega, double hbar = 1.0);

/// Runs the full pipeline per alpha: build the non-orthogonal description,
/// measure the first passage (1,0) -> (0,1) under its metric, and tabulate
/// it against the closed form and the Hermitian bound.
std::vector<BrachRecord> brach_sweep(double epsilon, std::span<const double> alpha_grid,
                                     const EvolutionConfig& config);

/// n_max x n_max truncation of H = p^2/2 + x^2/2 + i x in the harmonic
/// oscillator number basis (ladder elements sqrt(n)). Requires n_max >= 8.
ComplexMatrix shifted_oscillator(int n_max);

}  // namespace ptqm

#endif  // PTQM_EVOLUTION_HPP
