#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "inputs/constants.hpp"
#include "inputs/resources.hpp"
#include "inputs/rng.hpp"
#include "model/types.hpp"
#include "model/value.hpp"

namespace simclone::inputs {

struct SamplerConfig {
  double peak_mass = 0.8;  // the remainder goes to the uniform tail
  int array_cap = 32;
  int string_cap = 64;
  int negative_retries = 8;
  double real_tail = 2147483648.0;  // reals in the tail are uniform over [-t, t]
  int fuzz_range = 1024;            // triangular fuzzing support for numerics
};

struct Peak {
  double center = 0;
  double weight = 0;      // share of the total mass
  double half_width = 0;  // triangular kernel support is center +- half_width
};

// Draws Values for type descriptors. Multi-modal mode follows the mined
// constants; triangular mode is the fresh fuzzing distribution used when
// re-validating clusters.
class Sampler {
 public:
  enum class Mode { multimodal, triangular };

  Sampler(ConstantBank bank, std::shared_ptr<const FileResourcePool> resources, NumericBounds bounds,
          Mode mode = Mode::multimodal, SamplerConfig cfg = {});

  [[nodiscard]] Value sample(const TypeDescriptor& desc, Rng& rng) const;

  [[nodiscard]] std::int64_t sample_int(int width, Rng& rng) const;
  [[nodiscard]] double sample_real(int width, Rng& rng) const;
  [[nodiscard]] char32_t sample_char(Rng& rng) const;
  [[nodiscard]] std::string sample_string(Rng& rng) const;
  [[nodiscard]] std::size_t sample_size(int cap, Rng& rng) const;

  [[nodiscard]] const std::vector<Peak>& int_peaks() const { return int_peaks_; }
  [[nodiscard]] const std::vector<Peak>& real_peaks() const { return real_peaks_; }
  [[nodiscard]] Mode mode() const { return mode_; }
  [[nodiscard]] const SamplerConfig& config() const { return cfg_; }

 private:
  ConstantBank bank_;
  std::shared_ptr<const FileResourcePool> resources_;
  NumericBounds bounds_;
  Mode mode_;
  SamplerConfig cfg_;
  std::vector<Peak> int_peaks_;
  std::vector<Peak> real_peaks_;
  std::vector<char32_t> alphabet_;

  const Peak& pick_peak(const std::vector<Peak>& peaks, Rng& rng) const;
};

std::int64_t int_min(int width);
std::int64_t int_max(int width);
void append_utf8(std::string& out, char32_t cp);

}  // namespace simclone::inputs
