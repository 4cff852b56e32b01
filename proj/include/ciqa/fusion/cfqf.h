#ifndef CIQA_FUSION_CFQF_H_
#define CIQA_FUSION_CFQF_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ciqa/fusion/tensor.h"
#include "ciqa/metrics/metrics.h"

namespace ciqa {

// Little-endian container: "CFQF", u16 version (1), u16 name length, UTF-8
// extractor name, u32 layer count, then per layer u32 C, H, W and C*H*W
// float32 values in (c, h, w) order.
inline constexpr uint16_t kCfqfVersion = 1;

std::vector<uint8_t> EncodeCfqf(const FeatureStack& stack);
// Throws std::runtime_error on bad magic, unknown version, truncation,
// trailing bytes or non-finite values.
FeatureStack DecodeCfqf(const std::vector<uint8_t>& bytes, const std::string& source = "<memory>");

void WriteCfqf(const FeatureStack& stack, const std::string& path);
FeatureStack ReadCfqf(const std::string& path);

// Layerwise channel concatenation (edge features appended to backbone
// features). Spatial dims and layer counts must match; the error names the
// offending layer. The extractor name becomes "a+b".
FeatureStack ConcatStacks(const FeatureStack& a, const FeatureStack& b);

// Saliency maps use the same container with one 1-channel layer.
SaliencyMap ReadSaliencyCfqf(const std::string& path);
void WriteSaliencyCfqf(const SaliencyMap& map, const std::string& path);

}  // namespace ciqa

#endif  // CIQA_FUSION_CFQF_H_
