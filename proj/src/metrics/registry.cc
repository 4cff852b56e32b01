#include "ciqa/metrics/registry.h"

#include <stdexcept>

namespace ciqa {

const std::vector<MetricInfo>& NativeMetrics() {
  static const std::vector<MetricInfo> metrics = {
      {"mse", false, false},  {"psnr", true, false},  {"ssim", true, false},
      {"ms_ssim", true, false}, {"gmsd", false, false}, {"gmsm", true, false},
      {"pamse", false, false}, {"ssim_sal", true, true}, {"gmsm_sal", true, true},
  };
  return metrics;
}

bool IsNativeMetric(const std::string& name) {
  for (const auto& m : NativeMetrics()) {
    if (m.name == name) return true;
  }
  return false;
}

const MetricInfo& LookupMetric(const std::string& name) {
  for (const auto& m : NativeMetrics()) {
    if (m.name == name) return m;
  }
  std::string known;
  for (const auto& m : NativeMetrics()) known += (known.empty() ? "" : ", ") + m.name;
  throw std::invalid_argument("unknown metric '" + name + "' (known: " + known + ")");
}

bool HigherIsBetter(const std::string& metric_name) {
  if (IsNativeMetric(metric_name)) return LookupMetric(metric_name).higher_is_better;
  if (metric_name == "cfiqa" || metric_name == "baseline" || metric_name == "baseline_plus" ||
      metric_name == "lambda_distance") {
    return false;
  }
  return true;
}

MetricResult ComputeMetric(const std::string& name, const Image& ref, const Image& dist,
                           const SaliencyMap* saliency) {
  const MetricInfo& info = LookupMetric(name);
  if (info.uses_saliency) {
    const SaliencyMap prior = saliency ? *saliency : SaliencyMap::CenterPrior(ref.width(), ref.height());
    if (name == "ssim_sal") return SsimSaliency(ref, dist, prior);
    return GmsmSaliency(ref, dist, prior);
  }
  if (name == "mse") return Mse(ref, dist);
  if (name == "psnr") return Psnr(ref, dist);
  if (name == "ssim") return Ssim(ref, dist);
  if (name == "ms_ssim") return MsSsim(ref, dist);
  if (name == "gmsd") return Gmsd(ref, dist);
  if (name == "gmsm") return Gmsm(ref, dist);
  return Pamse(ref, dist);
}

}  // namespace ciqa
