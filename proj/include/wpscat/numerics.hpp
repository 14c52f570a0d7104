#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wpscat {

/// n equally spaced points from lo to hi inclusive (n >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Composite Simpson weights for n (odd, >= 3) uniform nodes with spacing h.
std::vector<double> simpson_weights(std::size_t n, double h);

/// Trapezoid weights for arbitrary sorted nodes.
std::vector<double> trapezoid_weights(std::span<const double> x);

/// True if successive spacings agree to a relative 1e-9.
bool is_uniform(std::span<const double> x);

/// Worker count used by parallel_for; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are
/// disjoint, so bodies writing only to their own indices stay
/// deterministic regardless of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wpscat
