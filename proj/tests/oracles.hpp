#pragma once

// Independent reference implementations used only by tests. Everything here
// is the obvious O(T^2 d) double loop (or a third-party eigensolver), kept
// free of the sliding-window machinery the library uses, so agreement is
// meaningful.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "hdanova/matrix.hpp"

#if HDANOVA_HAVE_EIGEN
#include <Eigen/Dense>
#endif

namespace oracles {

using hdanova::Matrix;

inline std::int64_t pair_count(std::size_t T, std::size_t B, std::size_t B1) {
    std::int64_t count = 0;
    for (std::size_t t1 = 1; t1 <= T; ++t1) {
        for (std::size_t t2 = 1; t2 <= T; ++t2) {
            std::size_t lag = t1 >= t2 ? t1 - t2 : t2 - t1;
            if (lag >= B && lag <= B1) ++count;
        }
    }
    return count;
}

inline double row_dot(const Matrix& x, std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) acc += x(a, j) * x(b, j);
    return acc;
}

inline double banded_cross_sum(const Matrix& x, std::size_t B, std::size_t B1) {
    double acc = 0.0;
    for (std::size_t t1 = 0; t1 < x.rows(); ++t1) {
        for (std::size_t t2 = 0; t2 < x.rows(); ++t2) {
            std::size_t lag = t1 >= t2 ? t1 - t2 : t2 - t1;
            if (lag >= B && lag <= B1) acc += row_dot(x, t1, t2);
        }
    }
    return acc;
}

inline double cross_group_sum(const Matrix& xk, const Matrix& x1) {
    double acc = 0.0;
    for (std::size_t t1 = 0; t1 < xk.rows(); ++t1) {
        for (std::size_t t2 = 0; t2 < x1.rows(); ++t2) {
            for (std::size_t j = 0; j < xk.cols(); ++j) acc += xk(t1, j) * x1(t2, j);
        }
    }
    return acc;
}

inline std::vector<double> second_order(const Matrix& eps, std::size_t B, std::size_t B1) {
    std::vector<double> theta;
    for (std::size_t t = B + 1; t <= eps.rows(); ++t) {
        std::size_t lo = t > B1 ? t - B1 : 1;
        double acc = 0.0;
        for (std::size_t t2 = lo; t2 <= t - B; ++t2) {
            acc += row_dot(eps, t - 1, t2 - 1);
        }
        theta.push_back(acc);
    }
    return theta;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> unif(lo, hi);
    Matrix m(rows, cols);
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t j = 0; j < cols; ++j) m(t, j) = unif(rng);
    }
    return m;
}

#if HDANOVA_HAVE_EIGEN
inline double min_eigenvalue(const Matrix& sym) {
    Eigen::MatrixXd m(sym.rows(), sym.cols());
    for (std::size_t i = 0; i < sym.rows(); ++i) {
        for (std::size_t j = 0; j < sym.cols(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sym(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m,
                                                          Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}
#endif

}  // namespace oracles
