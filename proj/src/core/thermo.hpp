#pragma once

#include <optional>
#include <vector>

#include "dynamics.hpp"
#include "model.hpp"
#include "spectral.hpp"

namespace mbl {

// e^{-beta H} / Z built in the eigenbasis with energies shifted by E_min, so
// every Boltzmann weight is <= 1.
Mat gibbs_state(const EigenSystem& eig, double beta);

// Reduced state on `keep` of a density matrix on the product space of `space`.
Mat partial_trace(const Mat& rho, const SiteSet& space, const SiteSet& keep, int local_dim = 2);

struct PerturbedState {
  Mat rho0;          // rho_{not A} (x) xi_A on the full space
  Mat rho_a;         // reduced Gibbs state on A
  Mat xi_a;          // projector onto the lowest eigenvector of rho_a
  double lambda_min = 0.0;
  double x = 0.0;    // 2 - 2 lambda_min
};

PerturbedState perturbed_initial(const Mat& rho, const SiteSet& space, const SiteSet& region_a,
                                 int local_dim = 2);

// sign(rho_A - xi_A): the unit-norm observable on A whose expectation
// difference equals ||rho_A - xi_A||_1.
Mat trace_distance_witness(const Mat& rho_a, const Mat& xi_a);

struct ThermoProbe {
  double beta = 0.0;
  SiteSet region_a;
  SiteSet region_b;
  int l = 0;
  double x = 0.0;
  std::vector<double> times;
  std::vector<double> distances;  // ||rho0(t)_B - rho_B||_1
  std::optional<double> bound;    // x - c e^{-mu l} when a fit is supplied
};

ThermoProbe thermalization_probe(const ChainModel& model, const EigenSystem& eig, double beta,
                                 const SiteSet& region_a, int l, const std::vector<double>& t_grid,
                                 const std::optional<LocalizationFit>& fit = std::nullopt);

}  // namespace mbl
