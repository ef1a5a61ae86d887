#pragma once

#include <cstddef>
#include <vector>

#include "mcdp/dpi.hpp"
#include "mcdp/kleene.hpp"

namespace mcdp {

// Resources of `d1` are provided by the functionality of `d2`:
// F = d1.F, R = d2.R, h(f) = Min ∪_{r1 ∈ h1(f)} h2(r1).
DpiPtr series(DpiPtr d1, DpiPtr d2);

// F = d1.F × d2.F, R = d1.R × d2.R.
DpiPtr parallel(DpiPtr d1, DpiPtr d2);

// prov = req on the same poset; h(f) = {f}.
DpiPtr identity_dpi(Poset poset);

enum class MergeOp { Sum, Max };

// F = P^n (one factor per input), R = (P): h(x1..xn) = {(x1 ∘ ... ∘ xn)}.
// Sum requires a numeric poset, Max a totally ordered one.
DpiPtr sum_node(std::size_t n, Poset poset, MergeOp op);

// F = (inputs...), R = (output): h(x) = {(Σ w_i x_i)}. Weights must be >= 0.
DpiPtr linear_join(std::vector<double> weights, std::vector<Poset> inputs, Poset output);

// F = (P), R = (): feasible iff the requested functionality is <= cap.
DpiPtr limit_dpi(Poset poset, double cap);

/// Feedback wire: resource factor `res_index` of the body is provided by its
/// own functionality factor `fun_index`.
struct FeedbackPair {
  std::size_t res_index = 0;
  std::size_t fun_index = 0;
};

/// Trace of `body` over the given feedback wires. Body F and R must be
/// product posets; the result exposes the remaining factors in order.
/// h is the least fixed point of S ↦ Min{ s ∨ a : s ∈ S, a ∈ h_body(f, s_fb) },
/// computed by Kleene iteration.
DpiPtr loop_trace(DpiPtr body, std::vector<FeedbackPair> feedback,
                  std::size_t max_iter = kDefaultMaxIter);

// Fixed point over the body's full resource space reached by the h query of
// a loop_trace composite at `f`, before projection onto exposed resources.
KleeneResult trace_fixed_point(const Dpi& loop, const Element& f);

}  // namespace mcdp
