#include "rng.hpp"

#include <cmath>

namespace rist {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0;; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kPhiloxM0, ctr[0], hi0, lo0);
    mul_hi_lo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    if (round == 9) break;
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

PhiloxStream::PhiloxStream(std::uint64_t key, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(key),
           static_cast<std::uint32_t>(key >> 32)},
      stream_{static_cast<std::uint32_t>(stream),
              static_cast<std::uint32_t>(stream >> 32)} {}

void PhiloxStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(counter_),
      static_cast<std::uint32_t>(counter_ >> 32), stream_[0], stream_[1]};
  block_ = philox4x32_10(ctr, key_);
  ++counter_;
  block_pos_ = 0;
}

std::uint32_t PhiloxStream::next_u32() {
  if (block_pos_ >= 4) refill();
  return block_[block_pos_++];
}

std::uint64_t PhiloxStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

std::uint32_t PhiloxStream::next_pow2(std::uint32_t bound) {
  return next_u32() & (bound - 1);
}

double PhiloxStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double PhiloxStream::uniform_pos() { return 1.0 - uniform(); }

double PhiloxStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double phi = kTwoPi * uniform();
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

std::complex<double> PhiloxStream::cgaussian() {
  // |w|^2 ~ Exp(1), phase uniform: complex Box-Muller in one step.
  const double r = std::sqrt(-std::log(uniform_pos()));
  const double phi = kTwoPi * uniform();
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace rist
