#ifndef CIQA_TESTS_SUPPORT_SYNTHETIC_STUDY_H_
#define CIQA_TESTS_SUPPORT_SYNTHETIC_STUDY_H_

#include <cstdint>
#include <vector>

#include "ciqa/fusion/train.h"

namespace ciqa::testing {

// Confusing stimuli blended from procedural references, with layer MOS a
// monotone function of lambda plus mild noise.
struct SyntheticStudy {
  std::vector<CfiqaSample> samples;
  std::vector<double> lambdas;
  std::vector<int> channels;
};

SyntheticStudy MakeSyntheticStudy(int stimuli, int size, uint64_t seed);

// MOS of the dominant-by-lambda layer; noise-free part.
double SyntheticMos(double lambda);

struct TwoFoldOutcome {
  double trained_srcc = 0.0;
  double init_srcc = 0.0;
  std::vector<double> fold_trained_srcc;
  std::vector<double> fold_init_srcc;
  std::vector<double> fold_final_loss;
};

// Trains on each half and correlates -s with MOS over both layers of the
// other half; the SRCC is averaged over the two folds. Models of different
// folds are never pooled because their offsets differ. init_srcc applies the
// same protocol to the untrained initialization.
TwoFoldOutcome RunTwoFold(const SyntheticStudy& study, const TrainConfig& cfg);

}  // namespace ciqa::testing

#endif  // CIQA_TESTS_SUPPORT_SYNTHETIC_STUDY_H_
