#ifndef CIQA_ARIQA_STIMULUS_H_
#define CIQA_ARIQA_STIMULUS_H_

#include <optional>
#include <string>

#include "ciqa/imaging/image.h"
#include "ciqa/metrics/metrics.h"

namespace ciqa {

inline constexpr double kSuperimposeTolerance = 1e-6;

// AR reference, its distorted version, the viewport background, and the
// derived displayed layer I_A = lambda I_AD and view I_S = I_A + (1 - lambda) I_B.
struct ArStimulus {
  Image ar_ref;
  Image ar_dist;
  Image background;
  double lambda = 1.0;
  Image displayed_ar;
  Image superimposed;

  // Derives displayed_ar and superimposed from the components.
  static ArStimulus Compose(Image ar_ref, Image ar_dist, Image background, double lambda);
  // Uses a given superimposed view; throws std::invalid_argument when it
  // deviates from the composition by more than 1e-6 anywhere.
  static ArStimulus FromParts(Image ar_ref, Image ar_dist, Image background, double lambda, Image superimposed);

  // Largest per-sample deviation of `superimposed` from the composition.
  double IdentityError() const;
};

struct VariantScores {
  double type1 = 0.0;     // FR(I_A, I_AR)
  double type2 = 0.0;     // FR(I_S, I_AR)
  double type3_f1 = 0.0;  // FR(I_S, I_AR)
  double type3_f2 = 0.0;  // FR(I_S, I_B)
  std::optional<double> type3;  // set once an SVR is applied
};

// `saliency` is only consulted by saliency-pooled metrics.
VariantScores ComputeVariantScores(const ArStimulus& st, const std::string& metric,
                                   const SaliencyMap* saliency = nullptr);

}  // namespace ciqa

#endif  // CIQA_ARIQA_STIMULUS_H_
