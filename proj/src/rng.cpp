#include "fodsid/rng.hpp"

#include <cmath>
#include <numbers>

namespace fodsid {

std::array<double, 2> NormalStream::uniforms(std::uint64_t block) const {
  const Philox4x32::Block out = gen_({static_cast<std::uint32_t>(block),
                                      static_cast<std::uint32_t>(block >> 32), index_, purpose_});
  constexpr double kScale = 0x1.0p-53;
  const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32 | out[1]) >> 11;
  const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32 | out[3]) >> 11;
  return {(static_cast<double>(a) + 1.0) * kScale, static_cast<double>(b) * kScale};
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto [u1, u2] = uniforms(block_++);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace fodsid
