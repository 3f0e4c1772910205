#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace graphbandit {

// Neumaier compensated sum. Loss-estimate magnitudes reach |D|/gamma_t and
// accumulate over ~1e5 rounds, which is enough to drift a plain double sum
// inside softmax arguments.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Vector of compensated sums; used for cumulative estimated losses.
class CompensatedVector {
 public:
  CompensatedVector() = default;
  explicit CompensatedVector(std::size_t n) : cells_(n) {}

  std::size_t size() const { return cells_.size(); }

  void add(std::size_t i, double x) { cells_[i].add(x); }

  std::vector<double> values() const {
    std::vector<double> out(cells_.size());
    for (std::size_t i = 0; i < cells_.size(); ++i) out[i] = cells_[i].value();
    return out;
  }

 private:
  std::vector<CompensatedSum> cells_;
};

// splitmix64 finalizer; the basis of the counter-based random streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based uniform draw in [0,1). Deterministic in (seed, stream, t, k)
// and independent of call order, so environment draws and action sampling
// stay reproducible under harness refactors.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t t, std::uint64_t k) {
  std::uint64_t x = splitmix64(seed ^ (0x853c49e6748fea9bULL * stream));
  x = splitmix64(x ^ (0xda3e39cb94b95bdbULL * t));
  x = splitmix64(x ^ (0xc4ceb9fe1a85ec53ULL * k));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace graphbandit
