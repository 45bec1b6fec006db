#pragma once

#include <map>

#include "model.hpp"
#include "spectral.hpp"

namespace mbl {

struct LiomReport {
  std::size_t term = 0;
  double alpha = 0.0;
  double conservation = 0.0;        // ||[M_j, H]||
  std::map<int, double> locality;   // l -> ||M_j - I^{H_j^l}(h_j)||
  double nontriviality = 0.0;       // ||M_j - tr(M_j)/dim 1||
};

// Term j embedded on the full chain.
DenseOperator term_operator(const ChainModel& model, std::size_t j);

// Gaussian filter of h_j for alpha > 0, constant filter for alpha = 0.
DenseOperator build_liom(const ChainModel& model, const EigenSystem& eig, std::size_t j,
                         double alpha);

double liom_conservation(const DenseOperator& m, const DenseOperator& h);

// The restricted filter uses the eigensystem of the terms within distance l
// of supp(h_j), on that neighbourhood's own space.
double liom_locality(const ChainModel& model, const EigenSystem& eig, std::size_t j, double alpha,
                     int l);

LiomReport liom_report(const ChainModel& model, const DenseOperator& h, const EigenSystem& eig,
                       std::size_t j, double alpha, const std::vector<int>& ls);

}  // namespace mbl
