#include "bcforest/rng.hpp"

#include <cmath>

namespace bcf {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t master, StreamRole role, std::uint64_t index) {
  std::uint64_t key = mix(master + 0x9E3779B97F4A7C15ULL);
  key = mix(key ^ (static_cast<std::uint64_t>(role) * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
  key = mix(key ^ (index * 0xA0761D6478BD642FULL + 0xE7037ED1A0B428DBULL));
  return key;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  return mix(state);
}

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : state_) s = splitmix64(sm);
}

RandomStream::result_type RandomStream::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t RandomStream::below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection; unbiased.
  unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

RngSpec RngSpec::child(StreamRole role, std::uint64_t index) const {
  return RngSpec{mix(stream_key(master_seed, role, index) ^ 0x5851F42D4C957F2DULL)};
}

RandomStream derive_stream(const RngSpec& spec, std::uint64_t index) {
  return derive_stream(spec, StreamRole::kGeneral, index);
}

RandomStream derive_stream(const RngSpec& spec, StreamRole role, std::uint64_t index) {
  return RandomStream(stream_key(spec.master_seed, role, index));
}

}  // namespace bcf
