#include "evcharge/profile.hpp"

#include <cmath>

namespace evcharge {

const char* to_string(SetViolation v) {
  switch (v) {
    case SetViolation::LengthMismatch:
      return "LengthMismatch";
    case SetViolation::NonFinite:
      return "NonFinite";
    case SetViolation::BoundsInverted:
      return "BoundsInverted";
    case SetViolation::EmptySet:
      return "EmptySet";
    case SetViolation::InactiveBudgetNonzero:
      return "InactiveBudgetNonzero";
  }
  return "Unknown";
}

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

double squared_norm(const Stacked& a) {
  double s = 0.0;
  for (const auto& block : a) s += squared_norm(block);
  return s;
}

double norm(const Stacked& a) { return std::sqrt(squared_norm(a)); }

double distance(std::span<const double> a, std::span<const double> b) {
  require_length(b, a.size(), "distance");
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double d = a[t] - b[t];
    s += d * d;
  }
  return std::sqrt(s);
}

double distance(const Stacked& a, const Stacked& b) {
  if (a.size() != b.size()) throw LengthMismatch("distance: block count");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = distance(a[i], b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

Profile sum_blocks(const Stacked& blocks, std::size_t length) {
  Profile total(length, 0.0);
  for (const auto& block : blocks) {
    require_length(block, length, "sum_blocks");
    for (std::size_t t = 0; t < length; ++t) total[t] += block[t];
  }
  return total;
}

Stacked repeat_block(std::span<const double> block, std::size_t n) {
  return Stacked(n, Profile(block.begin(), block.end()));
}

}  // namespace evcharge
