#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace creditworks::csv {

// RFC 4180 record reader over an in-memory buffer. Accepts LF or CRLF
// line endings, quoted fields with doubled-quote escapes, and newlines
// inside quoted fields. Blank lines are skipped.
class Reader {
 public:
  // The reader keeps a view of `text`, which must outlive it.
  explicit Reader(std::string_view text) : text_(text) {}

  // Reads the next record into `fields`. Returns false at end of input.
  // Throws ParseError on an unterminated quote or stray characters after a
  // closing quote.
  bool next(std::vector<std::string>& fields);

  // 1-based index of the record most recently returned by next().
  std::size_t record_index() const { return record_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t record_ = 0;
};

// Quotes a field only when it contains a delimiter, quote, or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-tripping decimal form of a double.
std::string format_double(double value);

}  // namespace creditworks::csv
