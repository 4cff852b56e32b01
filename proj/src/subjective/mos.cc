#include "ciqa/subjective/mos.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ciqa/common/csv.h"

namespace ciqa {
namespace {

constexpr double kGaussianKurtosisLow = 2.0;
constexpr double kGaussianKurtosisHigh = 4.0;
constexpr double kGaussianWidth = 2.0;
const double kNonGaussianWidth = std::sqrt(20.0);
constexpr double kBoundarySlack = 1e-9;

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double SampleStd(const std::vector<double>& v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

size_t OutlierMask::CountForSubject(size_t subject) const {
  size_t n = 0;
  for (size_t j = 0; j < num_stimuli; ++j) n += at(subject, j) ? 1 : 0;
  return n;
}

size_t OutlierMask::Total() const {
  size_t n = 0;
  for (bool f : flags) n += f ? 1 : 0;
  return n;
}

const MosEntry* MosTable::TryFind(const std::string& stimulus_id) const {
  for (const auto& e : entries) {
    if (e.stimulus_id == stimulus_id) return &e;
  }
  return nullptr;
}

const MosEntry& MosTable::Find(const std::string& stimulus_id) const {
  if (const MosEntry* e = TryFind(stimulus_id)) return *e;
  throw std::runtime_error("no MOS for stimulus " + stimulus_id);
}

OutlierMask DetectOutliers(const RatingsTable& table) {
  OutlierMask mask{table.num_subjects(), table.num_stimuli(),
                   std::vector<bool>(table.num_subjects() * table.num_stimuli(), false)};
  for (size_t j = 0; j < table.num_stimuli(); ++j) {
    const auto values = table.StimulusRatings(j);
    if (values.size() < 2) {
      throw std::runtime_error("stimulus " + table.stimuli()[j] + " has fewer than 2 valid ratings");
    }
    const double mean = Mean(values);
    const double n = static_cast<double>(values.size());
    double m2 = 0.0, m4 = 0.0;
    for (double x : values) {
      const double d2 = (x - mean) * (x - mean);
      m2 += d2;
      m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    if (m2 == 0.0) continue;  // identical ratings: nothing can be an outlier
    // Kurtosis m4 / m2^2 and the distance test are compared in squared form
    // with a small relative slack, so values that sit exactly on a boundary
    // (common with integer ratings) resolve as in exact arithmetic.
    const double m2sq = m2 * m2;
    const bool gaussian = m4 >= kGaussianKurtosisLow * m2sq * (1.0 - kBoundarySlack) &&
                          m4 <= kGaussianKurtosisHigh * m2sq * (1.0 + kBoundarySlack);
    const double width = gaussian ? kGaussianWidth : kNonGaussianWidth;
    const double limit = width * width * (m2 * n / (n - 1.0)) * (1.0 + kBoundarySlack);
    for (size_t i = 0; i < table.num_subjects(); ++i) {
      const auto& r = table.at(i, j);
      if (r && (*r - mean) * (*r - mean) > limit) mask.flags[i * table.num_stimuli() + j] = true;
    }
  }
  return mask;
}

RejectionResult RejectSubjects(const RatingsTable& table, const OutlierMask& mask) {
  if (mask.num_subjects != table.num_subjects() || mask.num_stimuli != table.num_stimuli()) {
    throw std::invalid_argument("outlier mask does not match the ratings table");
  }
  std::vector<size_t> keep;
  RejectionResult result;
  for (size_t i = 0; i < table.num_subjects(); ++i) {
    const size_t valid = table.SubjectRatings(i).size();
    const size_t flagged = mask.CountForSubject(i);
    // flagged / valid > 5%, in integers.
    if (flagged * 100 > 5 * valid) {
      result.rejected.push_back(table.subjects()[i]);
    } else {
      keep.push_back(i);
    }
  }
  if (keep.empty()) throw std::runtime_error("every subject was rejected as an outlier");
  result.kept = table.SelectSubjects(keep);
  for (size_t k = 0; k < keep.size(); ++k) {
    for (size_t j = 0; j < table.num_stimuli(); ++j) {
      if (mask.at(keep[k], j)) result.kept.at(k, j).reset();
    }
  }
  return result;
}

MosTable ComputeMos(const RatingsTable& table) {
  const size_t ns = table.num_subjects(), nt = table.num_stimuli();
  std::vector<double> mu(ns), sigma(ns);
  for (size_t i = 0; i < ns; ++i) {
    const auto values = table.SubjectRatings(i);
    if (values.size() < 2) {
      throw std::runtime_error("subject " + table.subjects()[i] +
                               " has fewer than 2 valid ratings; cannot z-score");
    }
    mu[i] = Mean(values);
    sigma[i] = SampleStd(values, mu[i]);
    if (!(sigma[i] > 0.0)) {
      throw std::runtime_error("subject " + table.subjects()[i] +
                               " has zero rating variance; cannot z-score");
    }
  }
  MosTable out;
  for (size_t j = 0; j < nt; ++j) {
    std::vector<double> scaled;
    for (size_t i = 0; i < ns; ++i) {
      if (const auto& r = table.at(i, j)) {
        const double z = (*r - mu[i]) / sigma[i];
        scaled.push_back(100.0 * (z + 3.0) / 6.0);
      }
    }
    if (scaled.empty()) {
      throw std::runtime_error("stimulus " + table.stimuli()[j] + " has no valid ratings left");
    }
    MosEntry e;
    e.stimulus_id = table.stimuli()[j];
    e.mos = Mean(scaled);
    e.std = scaled.size() > 1 ? SampleStd(scaled, e.mos) : 0.0;
    e.n_valid = static_cast<int>(scaled.size());
    out.entries.push_back(std::move(e));
  }
  return out;
}

MosPipelineResult RunMosPipeline(const RatingsTable& table) {
  MosPipelineResult result;
  result.mask = DetectOutliers(table);
  RejectionResult rej = RejectSubjects(table, result.mask);
  result.rejected_subjects = rej.rejected;
  for (size_t i = 0; i < table.num_subjects(); ++i) {
    bool rejected = false;
    for (const auto& name : rej.rejected) rejected |= name == table.subjects()[i];
    if (!rejected) result.removed_ratings += result.mask.CountForSubject(i);
  }
  result.mos = ComputeMos(rej.kept);
  return result;
}

void WriteMosCsv(const MosTable& table, const std::string& path) {
  CsvTable csv;
  csv.header = {"stimulus_id", "mos", "std", "n_valid"};
  for (const auto& e : table.entries) {
    csv.rows.push_back({e.stimulus_id, FormatDouble(e.mos), FormatDouble(e.std), std::to_string(e.n_valid)});
  }
  WriteCsv(path, csv);
}

MosTable ReadMosCsv(const std::string& path) {
  const CsvTable csv = ReadCsv(path);
  const size_t ci = csv.Column("stimulus_id"), cm = csv.Column("mos");
  const bool has_std = csv.HasColumn("std"), has_n = csv.HasColumn("n_valid");
  MosTable out;
  for (const auto& row : csv.rows) {
    MosEntry e;
    e.stimulus_id = row[ci];
    e.mos = ParseDouble(row[cm], "mos");
    if (has_std) e.std = ParseDouble(row[csv.Column("std")], "std");
    e.n_valid = has_n ? static_cast<int>(ParseInt(row[csv.Column("n_valid")], "n_valid")) : 1;
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace ciqa
