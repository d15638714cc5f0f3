#pragma once

#include <Eigen/Dense>

#include "bbcpop/block_matrix.hpp"
#include "bbcpop/relaxation.hpp"

namespace bbcpop {

/// Metric projection onto the product of PSD cones (blockwise spectral clip
/// at zero, after symmetrizing). The cone is self-dual, so this is also the
/// dual-cone projection.
BlockSymMatrix project_psd_product(const BlockSymMatrix& z);

/// Exact metric projection onto the polyhedral cone K2.
BlockSymMatrix project_k2(const BlockSymMatrix& z, const K2Structure& k2);

/// Dual-cone projections via the Moreau decomposition z = P_K(z) - P_{K*}(-z).
BlockSymMatrix project_psd_product_dual(const BlockSymMatrix& z);
BlockSymMatrix project_k2_dual(const BlockSymMatrix& z, const K2Structure& k2);

/// Smallest eigenvalue across all (symmetrized) blocks.
double lambda_min(const BlockSymMatrix& z);

/// Class-space pieces of project_k2, exposed for testing.
/// Weighted means of the entries in each equality class.
Eigen::VectorXd collapse_to_classes(const BlockSymMatrix& z, const K2Structure& k2);
/// Weighted least-squares fit of class values subject to zero classes, the
/// nonnegativity of every class and the chain inequalities.
Eigen::VectorXd project_class_values(const Eigen::VectorXd& means, const K2Structure& k2);
/// Writes class values back into the block entries.
BlockSymMatrix expand_from_classes(const Eigen::VectorXd& values, const K2Structure& k2);

}  // namespace bbcpop
