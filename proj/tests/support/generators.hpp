#pragma once

#include <random>
#include <string>

#include "crysl/compile/compiled_rule.hpp"
#include "crysl/semantics/trace.hpp"

namespace crysl::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Events of one object of the rule's type. Half of the traces follow a
// random derivation of ORDER, the rest pick events uniformly; either may
// then be perturbed and may contain FORBIDDEN calls. Variable values are
// drawn from the rule's constants plus a few outsiders.
semantics::RuntimeTrace randomObjectTrace(const compile::CompiledRule& rule, Rng& rng,
                                          std::size_t maxLength = 8);

// A rule file in the concrete syntax, built from random names and shapes.
std::string randomRuleText(Rng& rng);

// A MiniJ program over the fixture crypto API. Loop-free unless `loops`.
std::string randomProgramText(Rng& rng, bool loops = false);

// Token- and character-level damage: deletions, duplications, swaps and
// insertions of grammar tokens or raw bytes.
std::string mutate(const std::string& text, Rng& rng);

}  // namespace crysl::testing
