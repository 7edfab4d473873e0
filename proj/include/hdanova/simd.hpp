#pragma once

#include <cstddef>
#include <span>

// Runtime-dispatched vector kernels. Every kernel has a scalar reference
// implementation and (on x86-64 with AVX2+FMA) a vectorized variant; the
// variant is picked once at startup from CPU capabilities. The scalar and
// SIMD paths are equivalence-tested against each other, and which path is
// active never depends on thread count, so results are reproducible on a
// given machine.

namespace hdanova::simd {

enum class IsaLevel { Scalar, Avx2 };

// Level selected at startup (or overridden by force_isa).
IsaLevel active_isa();

// Highest level this CPU supports.
IsaLevel detected_isa();

// Test hook: pin the dispatch to a specific level. Returns the previous
// level. Forcing a level the CPU cannot execute falls back to Scalar.
IsaLevel force_isa(IsaLevel level);

const char* isa_name(IsaLevel level);

// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

// acc[i] += x[i]
void add(std::span<double> acc, std::span<const double> x);

// acc[i] -= x[i]
void sub(std::span<double> acc, std::span<const double> x);

// y[i] += alpha * x[i]
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Kahan-compensated acc[i] += x[i]; comp carries the running error term.
void kahan_add(std::span<double> acc, std::span<double> comp, std::span<const double> x);

}  // namespace hdanova::simd
