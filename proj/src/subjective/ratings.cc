#include "ciqa/subjective/ratings.h"

#include <cmath>
#include <map>
#include <stdexcept>

#include "ciqa/common/csv.h"

namespace ciqa {

RatingsTable::RatingsTable(std::vector<std::string> subjects, std::vector<std::string> stimuli)
    : subjects_(std::move(subjects)),
      stimuli_(std::move(stimuli)),
      ratings_(subjects_.size() * stimuli_.size()) {}

std::vector<double> RatingsTable::StimulusRatings(size_t stimulus) const {
  std::vector<double> out;
  for (size_t i = 0; i < subjects_.size(); ++i) {
    if (const auto& r = at(i, stimulus)) out.push_back(*r);
  }
  return out;
}

std::vector<double> RatingsTable::SubjectRatings(size_t subject) const {
  std::vector<double> out;
  for (size_t j = 0; j < stimuli_.size(); ++j) {
    if (const auto& r = at(subject, j)) out.push_back(*r);
  }
  return out;
}

RatingsTable RatingsTable::SelectSubjects(const std::vector<size_t>& rows) const {
  std::vector<std::string> names;
  for (size_t r : rows) names.push_back(subjects_.at(r));
  RatingsTable out(std::move(names), stimuli_);
  for (size_t k = 0; k < rows.size(); ++k) {
    for (size_t j = 0; j < stimuli_.size(); ++j) out.at(k, j) = at(rows[k], j);
  }
  return out;
}

RatingsTable ReadRatingsCsv(const std::string& path) {
  const CsvTable csv = ReadCsv(path);
  const size_t cs = csv.Column("subject_id"), ct = csv.Column("stimulus_id"),
               cr = csv.Column("rating");
  std::map<std::string, size_t> subject_index, stimulus_index;
  std::vector<std::string> subjects, stimuli;
  for (const auto& row : csv.rows) {
    if (subject_index.emplace(row[cs], subjects.size()).second) subjects.push_back(row[cs]);
    if (stimulus_index.emplace(row[ct], stimuli.size()).second) stimuli.push_back(row[ct]);
  }
  RatingsTable table(subjects, stimuli);
  for (const auto& row : csv.rows) {
    auto& cell = table.at(subject_index[row[cs]], stimulus_index[row[ct]]);
    if (cell) {
      throw std::runtime_error(path + ": duplicate rating for subject " + row[cs] +
                               " and stimulus " + row[ct]);
    }
    const double v = ParseDouble(row[cr], "rating");
    if (!std::isfinite(v)) throw std::runtime_error(path + ": non-finite rating");
    cell = v;
  }
  return table;
}

}  // namespace ciqa
