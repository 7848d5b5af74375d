#ifndef CUBIC_BDP_IO_HPP
#define CUBIC_BDP_IO_HPP

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cubic_bdp/special_functions.hpp"

namespace cubic_bdp {

/// 17 significant digits, the same bytes on every run.
inline std::string format_real(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  if (v == 0.0) {
    return "0";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i" (spaces ignored, 'j' accepted for 'i').
inline complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      s.push_back(ch == 'j' ? 'i' : ch);
    }
  }
  if (s.empty()) {
    throw std::invalid_argument("empty complex literal");
  }
  auto parse_real = [&](const std::string& part) {
    if (part.empty() || part == "+") {
      return 1.0;
    }
    if (part == "-") {
      return -1.0;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad complex literal '" + std::string(text) + "'");
    }
    if (used != part.size()) {
      throw std::invalid_argument("bad complex literal '" + std::string(text) + "'");
    }
    return v;
  };
  if (s.back() != 'i') {
    return {parse_real(s), 0.0};
  }
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    return {0.0, parse_real(s)};
  }
  return {parse_real(s.substr(0, split)), parse_real(s.substr(split))};
}

/// Comma separated list of complex literals.
inline std::vector<complex> parse_complex_list(std::string_view text) {
  std::vector<complex> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(',', start);
    const auto item = text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
    out.push_back(parse_complex(item));
    if (end == std::string_view::npos) {
      break;
    }
    start = end + 1;
  }
  return out;
}

/// Minimal CSV writer: header row, ',' delimiter, reals at 17 digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      os_ << (i ? "," : "") << header[i];
    }
    os_ << '\n';
  }

  CsvWriter& cell(double v) { return raw(format_real(v)); }
  CsvWriter& cell(long v) { return raw(std::to_string(v)); }
  CsvWriter& cell(int v) { return raw(std::to_string(v)); }
  CsvWriter& cell(const std::string& v) { return raw(v); }
  CsvWriter& cell(const char* v) { return raw(v); }
  CsvWriter& cell(complex v) { return cell(v.real()).cell(v.imag()); }

  void end_row() {
    os_ << '\n';
    first_ = true;
  }

 private:
  CsvWriter& raw(const std::string& v) {
    os_ << (first_ ? "" : ",") << v;
    first_ = false;
    return *this;
  }

  std::ostream& os_;
  bool first_ = true;
};

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_IO_HPP
