#include "sdlab/rng.hpp"

namespace sdlab {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t row, std::uint64_t replication) {
  std::uint64_t h = mix64(seed + kGamma);
  h = mix64(h ^ (row * 0xd1b54a32d192ed03ULL + 1));
  h = mix64(h ^ (replication * 0x8cb92ba72f3d8dd7ULL + 2));
  return h;
}

StreamRng::result_type StreamRng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double StreamRng::uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace sdlab
