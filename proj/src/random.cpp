#include "hierpareto/random.hpp"

namespace hierpareto {

Rng::Rng(RandomStream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(stream.seed), static_cast<std::uint32_t>(stream.seed >> 32),
                    static_cast<std::uint32_t>(stream.stream_id),
                    static_cast<std::uint32_t>(stream.stream_id >> 32)};
  engine_.seed(seq);
}

}  // namespace hierpareto
