#include "vbar/tridiag.hpp"

#include "vbar/errors.hpp"

#include <lapacke.h>

#include <string>

namespace vbar {

TridiagEigen lowest_tridiag_eigenpairs(const std::vector<double>& diag,
                                       const std::vector<double>& offdiag,
                                       std::size_t k) {
    const lapack_int n = lapack_int(diag.size());
    if (n < 1) throw InputError("lowest_tridiag_eigenpairs: empty matrix");
    if (offdiag.size() + 1 != diag.size())
        throw InputError("lowest_tridiag_eigenpairs: offdiag size must be n - 1");
    if (k == 0 || k > diag.size())
        throw InputError("lowest_tridiag_eigenpairs: k out of range");

    std::vector<double> d = diag;
    std::vector<double> e = offdiag;
    e.resize(diag.size()); // dstevr wants length n scratch for E
    const lapack_int iu = lapack_int(k);
    std::vector<double> w(diag.size());
    std::vector<double> z(diag.size() * k);
    std::vector<lapack_int> isuppz(2 * k);
    lapack_int m = 0;
    const lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, iu,
        0.0, &m, w.data(), z.data(), n, isuppz.data());
    if (info != 0)
        throw ConvergenceError("tridiagonal eigensolver failed with LAPACK info " +
                                   std::to_string(info),
                               {});
    if (std::size_t(m) != k)
        throw ConvergenceError("tridiagonal eigensolver returned " +
                                   std::to_string(m) + " of " +
                                   std::to_string(k) + " requested eigenpairs",
                               {});

    TridiagEigen result;
    result.values.assign(w.begin(), w.begin() + m);
    result.vectors.resize(k);
    for (std::size_t j = 0; j < k; ++j)
        result.vectors[j].assign(z.begin() + std::ptrdiff_t(j * diag.size()),
                                 z.begin() + std::ptrdiff_t((j + 1) * diag.size()));
    return result;
}

} // namespace vbar
