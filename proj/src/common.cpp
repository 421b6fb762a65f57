#include "curvwell/common.hpp"

#include <cstdlib>
#include <cstring>
#include <thread>

namespace curvwell {

double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

int thread_cap() {
  const char* env = std::getenv("CURVWELL_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<int>(v);
}

void for_each_block(int num_blocks, const std::function<void(int)>& fn) {
  const int threads = std::min(thread_cap(), num_blocks);
  if (threads <= 1) {
    for (int b = 0; b < num_blocks; ++b) fn(b);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int b = t; b < num_blocks; b += threads) fn(b);
    });
  }
  for (auto& th : pool) th.join();
}

void Fnv1a::add_bytes(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state_ ^= p[i];
    state_ *= 1099511628211ULL;
  }
}

void Fnv1a::add_double(double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof(bits));
  add_u64(bits);
}

void Fnv1a::add_u64(std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  add_bytes(buf, sizeof(buf));
}

std::string Fnv1a::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) {
    out[15 - i] = digits[(state_ >> (4 * i)) & 0xF];
  }
  return out;
}

}  // namespace curvwell
