#include "bikecast/csv.hpp"

#include <charconv>
#include <istream>

namespace bikecast {

void split_delimited(std::string_view line, char delimiter, std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == delimiter) {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  out.push_back(std::move(field));
}

TableReader::TableReader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {
  if (std::getline(in_, line_)) {
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    // Strip a UTF-8 BOM if the file carries one.
    if (line_.size() >= 3 && line_[0] == '\xef' && line_[1] == '\xbb' && line_[2] == '\xbf') {
      line_.erase(0, 3);
    }
    split_delimited(line_, delimiter_, header_);
  }
}

std::optional<size_t> TableReader::column(std::string_view name) const {
  for (size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

bool TableReader::next(std::vector<std::string>& fields) {
  while (std::getline(in_, line_)) {
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (line_.empty()) continue;
    split_delimited(line_, delimiter_, fields);
    ++row_index_;
    return true;
  }
  return false;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field, char delimiter) {
  bool needs_quotes = field.find(delimiter) != std::string_view::npos ||
                      field.find('"') != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += '"';
  return out;
}

} // namespace bikecast
