#include "hdanova/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

#include "hdanova/errors.hpp"
#include "hdanova/simd.hpp"

namespace hdanova {

namespace {

constexpr std::array<double, 4> kJitterLadder{0.0, 1e-12, 1e-10, 1e-8};

// Attempts an in-place lower Cholesky of G + jitter I. Returns false on a
// nonpositive pivot.
bool try_factor(const ToeplitzGram& g, double jitter, Matrix& L) {
    std::size_t n = g.size;
    L = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto li = L.row(i);
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = g(i, j) + (i == j ? jitter : 0.0);
            sum -= simd::dot(L.row(i).subspan(0, j), L.row(j).subspan(0, j));
            if (i == j) {
                if (sum <= 0.0) return false;
                li[j] = std::sqrt(sum);
            } else {
                li[j] = sum / L(j, j);
            }
        }
    }
    return true;
}

}  // namespace

KernelSpec kernel_from_name(const std::string& name) {
    if (name == "gaussian") return KernelSpec{KernelKind::Gaussian};
    throw InvalidArgument("unknown kernel '" + name + "'");
}

const char* kernel_name(const KernelSpec& spec) {
    switch (spec.kind) {
        case KernelKind::Gaussian: return "gaussian";
    }
    return "unknown";
}

double kernel_eval(const KernelSpec& spec, double x) {
    if (!std::isfinite(x)) {
        throw InvalidArgument("kernel argument must be finite");
    }
    switch (spec.kind) {
        case KernelKind::Gaussian: return std::exp(-0.5 * x * x);
    }
    return 0.0;
}

Matrix ToeplitzGram::dense() const {
    Matrix g(size, size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) g(i, j) = (*this)(i, j);
    }
    return g;
}

ToeplitzGram gram(const KernelSpec& spec, std::size_t size, double bandwidth) {
    if (size < 1) throw InvalidArgument("gram size must be >= 1");
    if (!(bandwidth > 0.0)) throw InvalidArgument("gram bandwidth must be > 0");
    ToeplitzGram g;
    g.size = size;
    g.bandwidth = bandwidth;
    g.spec = spec;
    g.entry.resize(size);
    for (std::size_t q = 0; q < size; ++q) {
        g.entry[q] = kernel_eval(spec, static_cast<double>(q) / bandwidth);
    }
    for (double jitter : kJitterLadder) {
        if (try_factor(g, jitter, g.factor)) {
            g.jitter = jitter;
            return g;
        }
    }
    throw NumericalFailure("Gram factorization failed at maximum jitter (T=" +
                           std::to_string(size) + ", H=" + std::to_string(bandwidth) + ")");
}

double min_eigenvalue_symmetric(const Matrix& sym) {
    std::size_t n = sym.rows();
    if (n == 0 || sym.cols() != n) throw InvalidArgument("matrix must be square");
    Matrix a = sym;
    if (n == 1) return a(0, 0);

    // Cyclic Jacobi sweeps; off-diagonal mass shrinks quadratically.
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off < 1e-28 * static_cast<double>(n * n)) break;
        for (std::size_t p = 0; p < n - 1; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p);
                    double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k);
                    double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    double lmin = a(0, 0);
    for (std::size_t i = 1; i < n; ++i) lmin = std::min(lmin, a(i, i));
    return lmin;
}

namespace {

bool admissible_impl(const std::function<double(double)>& eval, std::span<const double> grid,
                     const KernelSpec* psd_spec) {
    double at_zero = eval(0.0);
    if (std::abs(at_zero - 1.0) > 1e-12) return false;
    double prev = at_zero;
    for (double x : grid) {
        if (x < 0.0) return false;
        double v = eval(x);
        double v_neg = eval(-x);
        if (std::abs(v - v_neg) > 1e-12) return false;       // symmetry
        if (v < -1e-12 || v > 1.0 + 1e-12) return false;     // range [0, 1]
        if (v > prev + 1e-12) return false;                  // nonincreasing
        prev = v;
    }
    if (psd_spec != nullptr) {
        ToeplitzGram g = gram(*psd_spec, 128, 8.0);
        if (min_eigenvalue_symmetric(g.dense()) < -1e-8) return false;
    }
    return true;
}

}  // namespace

bool check_admissible(const KernelSpec& spec, std::span<const double> grid) {
    return admissible_impl([&spec](double x) { return kernel_eval(spec, x); }, grid, &spec);
}

bool check_admissible(double (*eval)(double), std::span<const double> grid) {
    return admissible_impl(eval, grid, nullptr);
}

}  // namespace hdanova
