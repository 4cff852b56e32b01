#ifndef CIQA_COMMON_CSV_H_
#define CIQA_COMMON_CSV_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ciqa {

// Minimal RFC 4180 reader/writer: quoted fields with "" escapes, no embedded
// newlines. Enough for manifests, ratings, scores and reports.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws std::runtime_error naming the column.
  size_t Column(std::string_view name) const;
  bool HasColumn(std::string_view name) const;
};

CsvTable ReadCsv(const std::string& path);
CsvTable ParseCsv(std::istream& in, const std::string& source_name);

std::string CsvEscape(std::string_view field);
void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);
void WriteCsv(const std::string& path, const CsvTable& table);

// Shortest text that parses back to exactly `value` (std::to_chars).
std::string FormatDouble(double value);
// Strict parse; throws std::runtime_error mentioning `what` on failure.
double ParseDouble(std::string_view text, std::string_view what);
long long ParseInt(std::string_view text, std::string_view what);

std::vector<std::string> SplitList(std::string_view text, char sep = ',');

}  // namespace ciqa

#endif  // CIQA_COMMON_CSV_H_
