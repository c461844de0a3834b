#include "advlab/harness/hparams.hpp"

#include "advlab/diff/random.hpp"

#include <cmath>

namespace advlab::harness {

learn::MethodConfig sample_hps(learn::MethodId method, std::uint64_t seed) {
  Rng rng(seed, 0x4B5);
  // Always draw all three so a field's value does not depend on the method.
  const double lr = std::exp(rng.uniform(std::log(kLrLow), std::log(kLrHigh)));
  const double split = rng.uniform(kSplitLow, kSplitHigh);
  const double alpha = kAlphaChoices[rng.integer(0, 2)];

  learn::MethodConfig c;
  c.method = method;
  c.lr = std::min(lr, std::nextafter(kLrHigh, 0.0));
  const auto& info = learn::method_info(method);
  if (info.searches_split) c.stage_split = split;
  if (info.searches_alpha) c.alpha = alpha;
  return c;
}

}  // namespace advlab::harness
