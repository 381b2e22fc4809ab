#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "judgekit/pipeline.hpp"

namespace judgekit {

// Seeded generator with a portable mapping from raw 64-bit draws to
// doubles, so datasets are identical across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Integer in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool bernoulli(double p) { return uniform() < p; }
  // Index drawn from unnormalized weights.
  std::size_t categorical(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

struct PlantedEffect {
  std::string metric;
  Verdict direction = Verdict::BBetter;
  double fraction = 0.5;  // share of queries where the better system gains one level
};

struct SyntheticOptions {
  std::uint64_t seed = 7;
  int queries = 117;
  int runs = 10;
  int k = 4;
  std::string system_a = "A";
  std::string system_b = "B";
  std::vector<std::string> metrics{kStandardMetrics.begin(), kStandardMetrics.end()};
  std::vector<PlantedEffect> effects = default_planted_effects();
  double run_noise = 0.25;  // chance a run deviates one level from the latent rating

  static std::vector<PlantedEffect> default_planted_effects();
};

// Records ordered by query, system, metric, run.
std::vector<RunRecord> generate_synthetic_runs(const SyntheticOptions& options);

}  // namespace judgekit
