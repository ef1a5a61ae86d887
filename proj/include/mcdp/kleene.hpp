#pragma once

#include <cstddef>
#include <functional>

#include "mcdp/antichain.hpp"

namespace mcdp {

inline constexpr std::size_t kDefaultMaxIter = 10'000;

using AntichainMap = std::function<Antichain(const Antichain&)>;

struct KleeneResult {
  Antichain fixed_point;
  std::size_t iterations = 0;  // number of step applications
};

/// Least fixed point of a monotone map on antichains (ordered by reverse
/// upper-set inclusion), by iterating from `bottom` until two consecutive
/// iterates generate the same upper set. Throws NonConvergenceError with
/// the last two iterates when `max_iter` steps are not enough.
KleeneResult kleene_lfp(const AntichainMap& step, const Antichain& bottom,
                        std::size_t max_iter = kDefaultMaxIter);

}  // namespace mcdp
