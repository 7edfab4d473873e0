#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hdanova/matrix.hpp"

namespace hdanova {

// Admissible weight kernels. Only the Gaussian K(x) = exp(-x^2/2) ships;
// the enumeration keeps the config surface open.
enum class KernelKind { Gaussian };

struct KernelSpec {
    KernelKind kind = KernelKind::Gaussian;
};

KernelSpec kernel_from_name(const std::string& name);
const char* kernel_name(const KernelSpec& spec);

// K(x); throws InvalidArgument on non-finite x.
double kernel_eval(const KernelSpec& spec, double x);

// Toeplitz Gram matrix G[i][j] = K((i - j)/H) together with a lower factor
// L satisfying L L^T = G + jitter I. The factor is what correlated weight
// sampling consumes.
struct ToeplitzGram {
    std::size_t size = 0;
    double bandwidth = 0.0;
    KernelSpec spec;
    double jitter = 0.0;       // diagonal shift that made the factorization succeed
    std::vector<double> entry; // entry[q] = K(q/H), q = 0..size-1
    Matrix factor;             // lower triangular L

    double operator()(std::size_t i, std::size_t j) const {
        return entry[i >= j ? i - j : j - i];
    }
    Matrix dense() const;
};

// Builds the Gram and factors it, escalating the diagonal jitter through
// {0, 1e-12, 1e-10, 1e-8} until the Cholesky succeeds. O(T^3); fine at desk
// scale, and deterministic.
ToeplitzGram gram(const KernelSpec& spec, std::size_t size, double bandwidth);

// Smallest eigenvalue of a dense symmetric matrix via cyclic Jacobi
// rotations. Used by the admissibility check; tests verify it against an
// independent eigensolver.
double min_eigenvalue_symmetric(const Matrix& sym);

// Numerical surrogate for the admissibility conditions: symmetry, K(0)=1,
// range [0,1], nonincreasing on the given grid, and a PSD eigen check of
// gram(spec, 128, 8). The grid must be sorted and nonnegative.
bool check_admissible(const KernelSpec& spec, std::span<const double> grid);

// Generic evaluator overload used by tests to probe non-admissible shapes.
bool check_admissible(double (*eval)(double), std::span<const double> grid);

}  // namespace hdanova
