#ifndef CIQA_METRICS_REGISTRY_H_
#define CIQA_METRICS_REGISTRY_H_

#include <string>
#include <vector>

#include "ciqa/metrics/metrics.h"

namespace ciqa {

struct MetricInfo {
  std::string name;
  bool higher_is_better;
  bool uses_saliency;
};

// mse, psnr, ssim, ms_ssim, gmsd, gmsm, pamse, ssim_sal, gmsm_sal.
const std::vector<MetricInfo>& NativeMetrics();
// Throws std::invalid_argument listing the known names.
const MetricInfo& LookupMetric(const std::string& name);
bool IsNativeMetric(const std::string& name);

// Orientation for metrics that are not native (learned models and external
// scores); "cfiqa"/"ariqa"/"baseline" outputs are distances.
bool HigherIsBetter(const std::string& metric_name);

// Scores FR(ref, dist). Saliency-pooled metrics fall back to the center
// prior when `saliency` is null.
MetricResult ComputeMetric(const std::string& name, const Image& ref, const Image& dist,
                           const SaliencyMap* saliency = nullptr);

}  // namespace ciqa

#endif  // CIQA_METRICS_REGISTRY_H_
