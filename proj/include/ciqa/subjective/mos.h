#ifndef CIQA_SUBJECTIVE_MOS_H_
#define CIQA_SUBJECTIVE_MOS_H_

#include <string>
#include <vector>

#include "ciqa/subjective/ratings.h"

namespace ciqa {

// Row-major subjects x stimuli flags.
struct OutlierMask {
  size_t num_subjects = 0;
  size_t num_stimuli = 0;
  std::vector<bool> flags;

  bool at(size_t subject, size_t stimulus) const { return flags[subject * num_stimuli + stimulus]; }
  size_t CountForSubject(size_t subject) const;
  size_t Total() const;
};

struct MosEntry {
  std::string stimulus_id;
  double mos = 0.0;
  // Sample standard deviation of the rescaled z-scores (0 when n_valid == 1).
  double std = 0.0;
  int n_valid = 0;
};

struct MosTable {
  std::vector<MosEntry> entries;

  const MosEntry& Find(const std::string& stimulus_id) const;
  const MosEntry* TryFind(const std::string& stimulus_id) const;
};

// Per stimulus: Pearson (non-excess) kurtosis of the valid ratings selects
// the threshold, 2 sigma when it lies in [2, 4] and sqrt(20) sigma otherwise,
// with sigma the sample standard deviation. Ratings strictly farther than
// the threshold from the stimulus mean are flagged. Needs >= 2 valid ratings
// per stimulus.
OutlierMask DetectOutliers(const RatingsTable& table);

struct RejectionResult {
  RatingsTable kept;
  std::vector<std::string> rejected;
};

// Drops a subject when flagged / valid ratings > 5% and blanks the flagged
// ratings of the survivors. Throws when nobody survives.
RejectionResult RejectSubjects(const RatingsTable& table, const OutlierMask& mask);

// z = (m - mu_i) / sigma_i per subject (sample sigma over that subject's
// valid ratings), z' = 100 (z + 3) / 6, MOS = mean of z' over the subjects
// that rated the stimulus. z' is not clamped. Throws naming the subject when
// a subject has fewer than two ratings or zero variance.
MosTable ComputeMos(const RatingsTable& table);

struct MosPipelineResult {
  MosTable mos;
  OutlierMask mask;
  std::vector<std::string> rejected_subjects;
  // Flagged ratings removed from the surviving subjects.
  size_t removed_ratings = 0;
};

// DetectOutliers -> RejectSubjects -> ComputeMos.
MosPipelineResult RunMosPipeline(const RatingsTable& table);

// CSV `stimulus_id,mos,std,n_valid`.
void WriteMosCsv(const MosTable& table, const std::string& path);
MosTable ReadMosCsv(const std::string& path);

}  // namespace ciqa

#endif  // CIQA_SUBJECTIVE_MOS_H_
