#ifndef VBAR_TRIDIAG_HPP
#define VBAR_TRIDIAG_HPP

#include <cstddef>
#include <vector>

namespace vbar {

/// Eigenpairs of a symmetric tridiagonal matrix, lowest `k` eigenvalues with
/// eigenvectors (column-major concatenated, each of length diag.size()).
struct TridiagEigen {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

/// Computes the k lowest eigenpairs of tridiag(offdiag, diag, offdiag) using
/// LAPACK's RRR driver. offdiag.size() must equal diag.size() - 1.
TridiagEigen lowest_tridiag_eigenpairs(const std::vector<double>& diag,
                                       const std::vector<double>& offdiag,
                                       std::size_t k);

} // namespace vbar

#endif
