#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "evcharge/error.hpp"

namespace evcharge {

/// Per-slot charging rates (kW) or any other length-T day vector.
using Profile = std::vector<double>;

/// One profile per customer, ordered by customer id. The stacked N*T
/// vectors of the company view are represented this way.
using Stacked = std::vector<Profile>;

inline void require_length(std::span<const double> v, std::size_t n,
                           std::string_view what) {
  if (v.size() != n) {
    throw LengthMismatch(std::string(what) + ": expected length " +
                         std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  require_length(b, a.size(), "dot");
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a);
double squared_norm(const Stacked& a);
double norm(const Stacked& a);
double distance(std::span<const double> a, std::span<const double> b);
double distance(const Stacked& a, const Stacked& b);

/// Element-wise sum of all blocks.
Profile sum_blocks(const Stacked& blocks, std::size_t length);

/// Stack of n copies of `block`.
Stacked repeat_block(std::span<const double> block, std::size_t n);

}  // namespace evcharge
