#ifndef CIQA_SUBJECTIVE_RATINGS_H_
#define CIQA_SUBJECTIVE_RATINGS_H_

#include <optional>
#include <string>
#include <vector>

namespace ciqa {

// Subjects x stimuli matrix of raw opinion scores; missing entries allowed.
class RatingsTable {
 public:
  RatingsTable() = default;
  RatingsTable(std::vector<std::string> subjects, std::vector<std::string> stimuli);

  size_t num_subjects() const { return subjects_.size(); }
  size_t num_stimuli() const { return stimuli_.size(); }
  const std::vector<std::string>& subjects() const { return subjects_; }
  const std::vector<std::string>& stimuli() const { return stimuli_; }

  const std::optional<double>& at(size_t subject, size_t stimulus) const {
    return ratings_[subject * stimuli_.size() + stimulus];
  }
  std::optional<double>& at(size_t subject, size_t stimulus) {
    return ratings_[subject * stimuli_.size() + stimulus];
  }

  // Valid ratings of one stimulus / one subject.
  std::vector<double> StimulusRatings(size_t stimulus) const;
  std::vector<double> SubjectRatings(size_t subject) const;

  // Copy restricted to the given subject rows, in the given order.
  RatingsTable SelectSubjects(const std::vector<size_t>& rows) const;

 private:
  std::vector<std::string> subjects_;
  std::vector<std::string> stimuli_;
  std::vector<std::optional<double>> ratings_;
};

// CSV `subject_id,stimulus_id,rating`. Subjects and stimuli are ordered by
// first appearance; a repeated (subject, stimulus) pair is an error.
RatingsTable ReadRatingsCsv(const std::string& path);

}  // namespace ciqa

#endif  // CIQA_SUBJECTIVE_RATINGS_H_
