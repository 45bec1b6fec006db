#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace mbl {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;

// Sorted, duplicate-free list of site indices.
using SiteSet = std::vector<int>;

SiteSet make_site_set(std::vector<int> sites);
SiteSet site_range(int first, int last_exclusive);
SiteSet set_union(const SiteSet& a, const SiteSet& b);
SiteSet set_difference(const SiteSet& a, const SiteSet& b);
bool is_subset(const SiteSet& inner, const SiteSet& outer);

}  // namespace mbl
