#include "creditworks/csv.hpp"

#include <charconv>
#include <ostream>

#include "creditworks/errors.hpp"

namespace creditworks::csv {

bool Reader::next(std::vector<std::string>& fields) {
  fields.clear();
  // Skip blank lines between records.
  while (pos_ < text_.size() && (text_[pos_] == '\n' || text_[pos_] == '\r')) {
    ++pos_;
  }
  if (pos_ >= text_.size()) return false;
  ++record_;

  std::string field;
  while (true) {
    field.clear();
    if (pos_ < text_.size() && text_[pos_] == '"') {
      ++pos_;
      bool closed = false;
      while (pos_ < text_.size()) {
        const char c = text_[pos_++];
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            closed = true;
            break;
          }
        } else {
          field.push_back(c);
        }
      }
      if (!closed) throw ParseError("unterminated quoted field", record_);
      if (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '\n' &&
          text_[pos_] != '\r') {
        throw ParseError("unexpected character after closing quote", record_);
      }
    } else {
      while (pos_ < text_.size()) {
        const char c = text_[pos_];
        if (c == ',' || c == '\n' || c == '\r') break;
        if (c == '"') throw ParseError("quote inside unquoted field", record_);
        field.push_back(c);
        ++pos_;
      }
    }
    fields.push_back(field);

    if (pos_ >= text_.size()) return true;
    const char sep = text_[pos_];
    if (sep == ',') {
      ++pos_;
      continue;
    }
    // End of record: consume exactly one LF or CRLF.
    if (sep == '\r') ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
    return true;
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

}  // namespace creditworks::csv
