#include "mcdp/kleene.hpp"

#include "mcdp/errors.hpp"

namespace mcdp {

KleeneResult kleene_lfp(const AntichainMap& step, const Antichain& bottom, std::size_t max_iter) {
  Antichain current = bottom;
  for (std::size_t k = 1; k <= max_iter; ++k) {
    Antichain next = step(current);
    if (next.same_upper_set(current)) return {std::move(next), k};
    if (k == max_iter)
      throw NonConvergenceError("Kleene iteration did not converge in " + std::to_string(max_iter) + " steps",
                                current.to_string(), next.to_string());
    current = std::move(next);
  }
  throw NonConvergenceError("Kleene iteration budget is zero", bottom.to_string(), bottom.to_string());
}

}  // namespace mcdp
