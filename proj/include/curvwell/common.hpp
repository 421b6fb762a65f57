#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvwell {

// Evaluation at a pole (e.g. the power-law phi at t = 0). Kept distinct from
// plain precondition violations so condition checkers can catch it and record
// a failing verdict instead of propagating.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct IterRecord {
  int k = 0;
  double energy = 0.0;
  double grad_inf = 0.0;
};

// Thrown by solvers whose contract promises the residual history on failure.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<IterRecord> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<IterRecord>& history() const noexcept { return history_; }

 private:
  std::vector<IterRecord> history_;
};

/// Default seed for every randomized probe set; recorded in reports.
inline constexpr std::uint64_t kDefaultProbeSeed = 0x5ADD1E;

// mt19937_64 output is pinned by the standard; the explicit [0,1) mapping
// below avoids std::uniform_real_distribution, whose stream is
// implementation-defined, so probe sets reproduce bit-for-bit everywhere.
class ProbeRng {
 public:
  explicit ProbeRng(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Pairwise tree reduction with a fixed topology: the result depends only on
// the contents of xs, never on how callers parallelize around it.
double pairwise_sum(std::span<const double> xs);

/// Thread cap from CURVWELL_THREADS; defaults to 1, values < 1 read as 1.
int thread_cap();

// Runs fn(block) for every block in [0, num_blocks), spread over at most
// thread_cap() threads. Blocks must write disjoint data; the block partition
// is the caller's and fixed, so results do not depend on the thread count.
void for_each_block(int num_blocks, const std::function<void(int)>& fn);

// FNV-1a over raw bytes; used for solution hashes in reports.
class Fnv1a {
 public:
  void add_bytes(const void* data, std::size_t size);
  void add_double(double v);
  void add_u64(std::uint64_t v);
  std::string hex() const;

 private:
  std::uint64_t state_ = 1469598103934665603ULL;
};

}  // namespace curvwell
