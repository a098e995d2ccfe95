#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <vector>

namespace hierpareto {

// Identifies one reproducible random sequence.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

class Rng {
 public:
  explicit Rng(RandomStream stream);
  // Uniform on the open interval (0, 1), 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Running mean and variance (sum / sum of squares) for Monte Carlo output.
struct Accumulator {
  double sum = 0.0;
  double sumsq = 0.0;
  std::size_t count = 0;

  void add(double v) noexcept {
    sum += v;
    sumsq += v * v;
    ++count;
  }
  void merge(const Accumulator& o) noexcept {
    sum += o.sum;
    sumsq += o.sumsq;
    count += o.count;
  }
  double mean() const noexcept { return count ? sum / count : 0.0; }
  double variance() const noexcept {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sumsq - count * m * m) / (count - 1));
  }
  double std_error() const noexcept { return count ? std::sqrt(variance() / count) : 0.0; }
};

inline constexpr std::size_t kBlockSize = 1024;

// Splits [0, n) into fixed blocks; block b draws from stream
// (stream.seed, stream.stream_id * 2^32 + b). fn(begin, end, rng) returns a
// per-block result; results come back in block order, so any thread count
// gives the same output.
template <class Result, class Fn>
std::vector<Result> run_blocks(std::size_t n, RandomStream stream, Fn fn, std::size_t block = kBlockSize) {
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<Result> out(blocks);
  std::vector<std::exception_ptr> errors(blocks);
  const long nb = static_cast<long>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
  for (long b = 0; b < nb; ++b) {
    try {
      Rng rng({stream.seed, (stream.stream_id << 32) + static_cast<std::uint64_t>(b)});
      const std::size_t begin = static_cast<std::size_t>(b) * block;
      const std::size_t end = std::min(n, begin + block);
      out[static_cast<std::size_t>(b)] = fn(begin, end, rng);
    } catch (...) {
      errors[static_cast<std::size_t>(b)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// Serial reference of run_blocks: same streams and blocks, one thread.
template <class Result, class Fn>
std::vector<Result> run_blocks_serial(std::size_t n, RandomStream stream, Fn fn, std::size_t block = kBlockSize) {
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<Result> out(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    Rng rng({stream.seed, (stream.stream_id << 32) + b});
    const std::size_t begin = b * block;
    out[b] = fn(begin, std::min(n, begin + block), rng);
  }
  return out;
}

}  // namespace hierpareto
