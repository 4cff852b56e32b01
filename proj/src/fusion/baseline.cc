#include "ciqa/fusion/baseline.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ciqa/eval/correlation.h"

namespace ciqa {

std::vector<double> LayerScores(const DistanceStack& dist) {
  std::vector<double> out;
  out.reserve(dist.layers.size());
  for (const Tensor3& t : dist.layers) {
    double sum = 0.0;
    for (float v : t.data) sum += v;
    out.push_back(sum / static_cast<double>(t.data.size()));
  }
  return out;
}

double BaselineScore(const DistanceStack& dist) {
  if (dist.layers.empty()) throw std::invalid_argument("baseline: empty distance stack");
  const auto s = LayerScores(dist);
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

double BaselineScore(const DistanceStack& dist, std::span<const int> layers) {
  if (layers.empty()) throw std::invalid_argument("baseline: empty layer selection");
  const auto s = LayerScores(dist);
  double sum = 0.0;
  for (int l : layers) {
    if (l < 0 || static_cast<size_t>(l) >= s.size()) {
      throw std::invalid_argument("baseline: layer index " + std::to_string(l) + " out of range");
    }
    sum += s[static_cast<size_t>(l)];
  }
  return sum / static_cast<double>(layers.size());
}

std::vector<int> BaselinePlusSelect(const std::vector<std::vector<double>>& layer_scores,
                                    std::span<const double> mos) {
  constexpr size_t kSelect = 5;
  if (layer_scores.size() != mos.size()) throw std::invalid_argument("baseline+: row count != MOS count");
  if (layer_scores.size() < 6) throw std::invalid_argument("baseline+: need at least 6 stimuli");
  const size_t layers = layer_scores.front().size();
  if (layers < kSelect) throw std::invalid_argument("baseline+: need at least 5 layers");
  std::vector<double> strength(layers);
  std::vector<double> column(layer_scores.size());
  for (size_t l = 0; l < layers; ++l) {
    for (size_t i = 0; i < layer_scores.size(); ++i) {
      if (layer_scores[i].size() != layers) throw std::invalid_argument("baseline+: ragged layer matrix");
      column[i] = layer_scores[i][l];
    }
    try {
      strength[l] = std::abs(Srcc(column, mos));
    } catch (const std::invalid_argument&) {
      strength[l] = 0.0;
    }
  }
  std::vector<int> order(layers);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return strength[a] > strength[b]; });
  order.resize(kSelect);
  return order;
}

}  // namespace ciqa
