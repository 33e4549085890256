#pragma once

#include <cstddef>
#include <functional>

#include "stvmd/types.hpp"

namespace stvmd {

// Snapshot handed to an observer after every completed sweep.
struct IterationEvent {
  std::size_t iteration;
  const FrequencyState& freqs;
  double change;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

struct SolverOptions {
  IterationObserver observer;
};

// Convergence quotient ||new - old||^2 / ||old||^2 for one (mode, channel).
// A zero previous norm counts as converged only if nothing changed.
struct ChangeAccumulator {
  double diff = 0.0;
  double prev = 0.0;

  double quotient() const noexcept;
};

}  // namespace stvmd
