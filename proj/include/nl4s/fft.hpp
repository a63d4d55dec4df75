#pragma once

#include <Eigen/Core>
#include <vector>

namespace nl4s::fft {

// Unnormalized multidimensional DFT over a row-major array with the given
// axis lengths. inverse() applies the 1/N factor so inverse(forward(x)) == x.
Eigen::ArrayXcd forward(const std::vector<int>& dims, const Eigen::ArrayXcd& in);
Eigen::ArrayXcd inverse(const std::vector<int>& dims, const Eigen::ArrayXcd& in);

// in-place variants, avoid a copy on hot paths
void forward_inplace(const std::vector<int>& dims, Eigen::ArrayXcd& a);
void inverse_inplace(const std::vector<int>& dims, Eigen::ArrayXcd& a);

}  // namespace nl4s::fft
