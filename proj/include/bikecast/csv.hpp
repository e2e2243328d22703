#ifndef BIKECAST_CSV_HPP
#define BIKECAST_CSV_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bikecast {

// Splits one delimited line into fields. Double-quoted fields may contain
// the delimiter and doubled quotes ("" -> ").
void split_delimited(std::string_view line, char delimiter, std::vector<std::string>& out);

// Header-indexed access into a delimited text table.
class TableReader {
 public:
  TableReader(std::istream& in, char delimiter = ',');

  const std::vector<std::string>& header() const { return header_; }

  // Index of a header column, or nullopt.
  std::optional<size_t> column(std::string_view name) const;

  // Reads the next data row; false at end of input. Blank lines are
  // skipped. `fields` is reused between calls.
  bool next(std::vector<std::string>& fields);

  // 0-based index of the last row returned by next() (header excluded).
  std::int64_t row_index() const { return row_index_; }

 private:
  std::istream& in_;
  char delimiter_;
  std::vector<std::string> header_;
  std::string line_;
  std::int64_t row_index_ = -1;
};

std::string format_double(double v); // shortest round-trip text
std::string csv_escape(std::string_view field, char delimiter);

} // namespace bikecast

#endif
