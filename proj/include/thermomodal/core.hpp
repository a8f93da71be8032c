#pragma once

#include <atomic>
#include <complex>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace thermomodal {

inline constexpr const char* version_string = "0.1.0";

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Complex = std::complex<double>;

// Call counters used by tests to assert which numerical kernels a code path
// actually invoked (e.g. that the reduction constructions never touch the
// coupled dense solver and factor K_ss exactly once).
namespace counters {

inline std::atomic<long>& single_field_eigensolves() {
    static std::atomic<long> c{0};
    return c;
}

inline std::atomic<long>& coupled_eigensolves() {
    static std::atomic<long> c{0};
    return c;
}

inline std::atomic<long>& stiffness_factorizations() {
    static std::atomic<long> c{0};
    return c;
}

inline void reset() {
    single_field_eigensolves() = 0;
    coupled_eigensolves() = 0;
    stiffness_factorizations() = 0;
}

}  // namespace counters

}  // namespace thermomodal
