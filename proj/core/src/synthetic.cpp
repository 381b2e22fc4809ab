#include "judgekit/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "judgekit/error.hpp"

namespace judgekit {

namespace {

// Latent level distributions, lowest level first. Hallucination metrics are
// strongly right-skewed; quality metrics lean towards the top of the scale.
std::vector<double> base_weights(const std::string& metric, int k) {
  std::vector<double> w;
  if (metric.find("Hallucination") != std::string::npos) {
    w = {0.80, 0.12, 0.05, 0.03};
  } else if (metric == "Completeness") {
    w = {0.10, 0.30, 0.35, 0.25};
  } else if (metric == "Readability") {
    w = {0.02, 0.10, 0.38, 0.50};
  } else {
    w = {0.05, 0.15, 0.40, 0.40};
  }
  w.resize(static_cast<std::size_t>(k), w.back());
  return w;
}

}  // namespace

std::size_t SeededRng::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double target = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  return weights.size() - 1;
}

std::vector<PlantedEffect> SyntheticOptions::default_planted_effects() {
  return {{"Completeness", Verdict::BBetter, 0.5}, {"Readability", Verdict::ABetter, 0.4}};
}

std::vector<RunRecord> generate_synthetic_runs(const SyntheticOptions& options) {
  if (options.queries < 1 || options.runs < 1) {
    throw Error(ErrorKind::InvalidArgument, "synthetic dataset needs queries >= 1 and runs >= 1");
  }
  if (options.k < 2) throw Error(ErrorKind::InvalidScale, "synthetic dataset needs K >= 2");
  SeededRng rng(options.seed);
  const int k = options.k;
  auto clamp_level = [k](int v) { return std::clamp(v, 1, k); };

  std::vector<RunRecord> records;
  records.reserve(static_cast<std::size_t>(options.queries) * 2 * options.metrics.size() *
                  static_cast<std::size_t>(options.runs));
  const int width = options.queries >= 1000 ? 4 : 3;
  for (int q = 1; q <= options.queries; ++q) {
    char id[16];
    std::snprintf(id, sizeof id, "q%0*d", width, q);

    // Latent levels per metric for both systems.
    std::vector<int> latent_a, latent_b;
    for (const auto& metric : options.metrics) {
      const int base = static_cast<int>(rng.categorical(base_weights(metric, k))) + 1;
      int b = base;
      for (const auto& effect : options.effects) {
        if (effect.metric != metric || !rng.bernoulli(effect.fraction)) continue;
        const int better_step = static_cast<int>(default_polarity(metric));
        b = clamp_level(base + (effect.direction == Verdict::BBetter ? better_step : -better_step));
      }
      latent_a.push_back(base);
      latent_b.push_back(b);
    }

    for (const std::string* system : {&options.system_a, &options.system_b}) {
      const auto& latent = system == &options.system_a ? latent_a : latent_b;
      for (std::size_t m = 0; m < options.metrics.size(); ++m) {
        for (int run = 1; run <= options.runs; ++run) {
          int rating = latent[m];
          if (rng.bernoulli(options.run_noise)) rating = clamp_level(rating + (rng.bernoulli(0.5) ? 1 : -1));
          records.push_back({id, *system, options.metrics[m], run, rating});
        }
      }
    }
  }
  return records;
}

}  // namespace judgekit
