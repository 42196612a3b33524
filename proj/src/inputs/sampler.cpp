#include "inputs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "model/error.hpp"

namespace simclone::inputs {

std::int64_t int_min(int width) {
  return width >= 64 ? std::numeric_limits<std::int64_t>::min() : -(std::int64_t{1} << (width - 1));
}

std::int64_t int_max(int width) {
  return width >= 64 ? std::numeric_limits<std::int64_t>::max() : (std::int64_t{1} << (width - 1)) - 1;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

namespace {

// Symmetric triangular draw on [-1, 1].
double tri(Rng& rng) { return rng.unit() + rng.unit() - 1.0; }

std::int64_t clamp_to(double x, int width) {
  const double lo = static_cast<double>(int_min(width));
  const double hi = static_cast<double>(int_max(width));
  if (!(x > lo)) return int_min(width);
  if (!(x < hi)) return int_max(width);
  return std::llround(x);
}

char32_t printable(Rng& rng) { return static_cast<char32_t>(32 + rng.below(95)); }

std::vector<char32_t> decode_utf8(const std::string& s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = b0 < 0x80 ? 1 : b0 >= 0xF0 ? 4 : b0 >= 0xE0 ? 3 : 2;
    if (i + len > s.size()) break;
    char32_t cp = len == 1 ? b0 : (b0 & (0x3F >> (len - 1)));
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

template <typename Map>
const typename Map::key_type& weighted_pick(const Map& m, Rng& rng) {
  std::size_t total = 0;
  for (const auto& [k, c] : m) total += c;
  std::uint64_t r = rng.below(total);
  for (const auto& [k, c] : m) {
    if (r < c) return k;
    r -= c;
  }
  return m.begin()->first;
}

}  // namespace

Sampler::Sampler(ConstantBank bank, std::shared_ptr<const FileResourcePool> resources, NumericBounds bounds, Mode mode,
                 SamplerConfig cfg)
    : bank_(std::move(bank)), resources_(std::move(resources)), bounds_(bounds), mode_(mode), cfg_(cfg) {
  bank_.fill_defaults();
  std::size_t total = 0;
  for (const auto& [v, c] : bank_.ints) total += c;
  for (const auto& [v, c] : bank_.ints) {
    const double center = static_cast<double>(v);
    int_peaks_.push_back({center, cfg_.peak_mass * static_cast<double>(c) / static_cast<double>(total),
                          std::max(1.0, std::fabs(center) / 16.0)});
  }
  total = 0;
  for (const auto& [v, c] : bank_.reals) total += c;
  for (const auto& [v, c] : bank_.reals) {
    real_peaks_.push_back({v, cfg_.peak_mass * static_cast<double>(c) / static_cast<double>(total),
                           std::fabs(v) / 16.0 + 1e-3});
  }
  std::set<char32_t> alpha;
  for (const auto& [s, c] : bank_.strings) {
    for (char32_t cp : decode_utf8(s)) alpha.insert(cp);
  }
  alphabet_.assign(alpha.begin(), alpha.end());
}

const Peak& Sampler::pick_peak(const std::vector<Peak>& peaks, Rng& rng) const {
  double r = rng.unit() * cfg_.peak_mass;
  for (const auto& p : peaks) {
    if (r < p.weight) return p;
    r -= p.weight;
  }
  return peaks.back();
}

std::int64_t Sampler::sample_int(int width, Rng& rng) const {
  if (mode_ == Mode::triangular) return clamp_to(cfg_.fuzz_range * tri(rng), width);
  if (rng.unit() < cfg_.peak_mass) {
    const Peak& p = pick_peak(int_peaks_, rng);
    return clamp_to(p.center + p.half_width * tri(rng), width);
  }
  // uniform tail over the whole width
  const std::uint64_t raw = rng.bits();
  if (width >= 64) return static_cast<std::int64_t>(raw);
  return static_cast<std::int64_t>(raw) >> (64 - width);
}

double Sampler::sample_real(int width, Rng& rng) const {
  double x;
  if (mode_ == Mode::triangular) {
    x = cfg_.fuzz_range * tri(rng);
  } else if (rng.unit() < cfg_.peak_mass) {
    const Peak& p = pick_peak(real_peaks_, rng);
    x = p.center + p.half_width * tri(rng);
  } else {
    x = cfg_.real_tail * (2.0 * rng.unit() - 1.0);
  }
  if (width <= 32) {
    const double lim = std::numeric_limits<float>::max();
    x = std::clamp(x, -lim, lim);
    x = static_cast<double>(static_cast<float>(x));
  }
  return x;
}

char32_t Sampler::sample_char(Rng& rng) const {
  if (mode_ == Mode::triangular || rng.unit() >= cfg_.peak_mass) return printable(rng);
  return weighted_pick(bank_.chars, rng);
}

std::size_t Sampler::sample_size(int cap, Rng& rng) const {
  if (mode_ == Mode::triangular) {
    const double half = cap / 2.0;
    return static_cast<std::size_t>(std::clamp<long long>(std::llround(half + half * tri(rng)), 0, cap));
  }
  std::int64_t n = sample_int(32, rng);
  for (int k = 0; k < cfg_.negative_retries && n < 0; ++k) n = sample_int(32, rng);
  if (n < 0) n = 0;
  return static_cast<std::size_t>(std::min<std::int64_t>(n, cap));
}

std::string Sampler::sample_string(Rng& rng) const {
  if (mode_ == Mode::multimodal && rng.unit() < cfg_.peak_mass) return weighted_pick(bank_.strings, rng);
  const std::size_t len = sample_size(cfg_.string_cap, rng);
  std::string out;
  for (std::size_t k = 0; k < len; ++k) {
    char32_t cp;
    if (mode_ == Mode::multimodal && !alphabet_.empty() && rng.unit() < cfg_.peak_mass) {
      cp = alphabet_[rng.below(alphabet_.size())];
    } else {
      cp = printable(rng);
    }
    append_utf8(out, cp);
  }
  return out;
}

Value Sampler::sample(const TypeDescriptor& desc, Rng& rng) const {
  switch (desc.kind()) {
    case Kind::boolean:
      return Value::boolean(rng.coin());
    case Kind::integer:
      return Value::integer(sample_int(desc.effective_width(), rng));
    case Kind::real:
      return Value::real(sample_real(desc.effective_width(), rng));
    case Kind::character:
      return Value::character(sample_char(rng));
    case Kind::string:
      return Value::string(sample_string(rng));
    case Kind::array: {
      const std::size_t n = sample_size(cfg_.array_cap, rng);
      Value::Array items;
      items.reserve(n);
      for (std::size_t k = 0; k < n; ++k) items.push_back(sample(desc.element(), rng));
      return Value::array(std::move(items));
    }
    case Kind::object: {
      Value::Object members;
      for (const auto& m : desc.members()) members.emplace_back(m.name, sample(m.type, rng));
      return Value::object(std::move(members));
    }
    case Kind::file: {
      if (!resources_ || resources_->entries().empty()) {
        throw Error(ErrorCode::unsupported_type, "file argument requested but no file resources are available");
      }
      const auto& entries = resources_->entries();
      return Value::file(entries[rng.below(entries.size())].first);
    }
    case Kind::generic: {
      switch (rng.below(5)) {
        case 0: return sample(TypeDescriptor::boolean(), rng);
        case 1: return sample(TypeDescriptor::integer(bounds_.int_width), rng);
        case 2: return sample(TypeDescriptor::real(bounds_.real_width), rng);
        case 3: return sample(TypeDescriptor::character(), rng);
        default: return sample(TypeDescriptor::string(), rng);
      }
    }
  }
  throw Error(ErrorCode::unsupported_type, "cannot sample " + type_token(desc));
}

}  // namespace simclone::inputs
