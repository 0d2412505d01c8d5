#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace rsgd {

/// Seeded random stream owned by exactly one consumer (an agent, a
/// replication's setup step, ...). Streams are derived from a master seed
/// and a path of integers, so no two consumers ever share engine state.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, {}) {}

  RandomStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path.size());
    auto push = [&words](std::uint64_t v) {
      words.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
      words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(master_seed);
    for (auto p : path) push(p);
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  double gaussian() { return normal_(engine_); }

  /// Uniform index in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rsgd
