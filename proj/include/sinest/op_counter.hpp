#pragma once

#include <cstdint>

namespace sinest {

/// Arithmetic tally for one solve. One multiply or one add counts as one flop;
/// cos/sin evaluations are tracked separately and are not flops.
struct OpCounter {
  std::uint64_t multiplies = 0;
  std::uint64_t additions = 0;
  std::uint64_t transcendentals = 0;

  std::uint64_t flops() const noexcept { return multiplies + additions; }

  OpCounter& operator+=(const OpCounter& other) noexcept {
    multiplies += other.multiplies;
    additions += other.additions;
    transcendentals += other.transcendentals;
    return *this;
  }
};

inline void count_mul(OpCounter* ops, std::uint64_t n) noexcept {
  if (ops) ops->multiplies += n;
}
inline void count_add(OpCounter* ops, std::uint64_t n) noexcept {
  if (ops) ops->additions += n;
}
inline void count_trig(OpCounter* ops, std::uint64_t n) noexcept {
  if (ops) ops->transcendentals += n;
}

}  // namespace sinest
