#pragma once

// Letters, finite stuttering traces, and the line-oriented trace file format:
//
//   trace := letter (';' letter)* ;  letter := '.' | prop (',' prop)*
//
// A trace u denotes the infinite word u . last(u)^omega.

#include "hypermon/error.hpp"
#include "hypermon/formula.hpp"

#include <algorithm>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hypermon {

/// A set of propositions, kept sorted and duplicate-free.
class Letter {
public:
  Letter() = default;
  Letter(std::initializer_list<std::string> props) : props_(props) { canonicalize(); }
  explicit Letter(std::vector<std::string> props) : props_(std::move(props)) { canonicalize(); }

  bool contains(std::string_view prop) const {
    return std::binary_search(props_.begin(), props_.end(), prop);
  }
  bool empty() const noexcept { return props_.empty(); }
  const std::vector<std::string>& props() const noexcept { return props_; }

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;

private:
  void canonicalize() {
    std::sort(props_.begin(), props_.end());
    props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
  }

  std::vector<std::string> props_;
};

/// "." for the empty letter, otherwise comma-separated propositions.
inline std::string format_letter(const Letter& l) {
  if (l.empty()) return ".";
  std::string out;
  for (const auto& p : l.props()) {
    if (!out.empty()) out += ',';
    out += p;
  }
  return out;
}

/// Non-empty letter sequence whose final letter repeats forever. Letters are
/// stored as given; equality and ordering use the stutter-normal form.
class FiniteTrace {
public:
  FiniteTrace() : letters_{Letter{}} {}
  FiniteTrace(std::initializer_list<Letter> letters) : letters_(letters) { check(); }
  explicit FiniteTrace(std::vector<Letter> letters) : letters_(std::move(letters)) { check(); }

  std::size_t size() const noexcept { return letters_.size(); }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  const Letter& front() const noexcept { return letters_.front(); }
  const Letter& back() const noexcept { return letters_.back(); }

  /// Letter at position `i` of the infinite word.
  const Letter& at(std::size_t i) const noexcept {
    return letters_[std::min(i, letters_.size() - 1)];
  }

  /// Drops trailing copies of the final letter.
  FiniteTrace normalized() const {
    std::size_t n = letters_.size();
    while (n > 1 && letters_[n - 2] == letters_[n - 1]) --n;
    return FiniteTrace(std::vector<Letter>(letters_.begin(), letters_.begin() + n));
  }

  /// Length of the stutter-normal form.
  std::size_t normal_size() const noexcept {
    std::size_t n = letters_.size();
    while (n > 1 && letters_[n - 2] == letters_[n - 1]) --n;
    return n;
  }

  /// Appends `extra` copies of the final letter; the denoted word is unchanged.
  FiniteTrace stuttered(std::size_t extra) const {
    std::vector<Letter> out = letters_;
    out.insert(out.end(), extra, letters_.back());
    return FiniteTrace(std::move(out));
  }

  friend bool operator==(const FiniteTrace& a, const FiniteTrace& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<(const FiniteTrace& a, const FiniteTrace& b) { return compare(a, b) < 0; }

private:
  void check() const {
    if (letters_.empty()) throw invalid_argument("a trace needs at least one letter");
  }

  static int compare(const FiniteTrace& a, const FiniteTrace& b) {
    const std::size_t na = a.normal_size(), nb = b.normal_size();
    for (std::size_t i = 0; i < std::min(na, nb); ++i) {
      if (a.letters_[i] < b.letters_[i]) return -1;
      if (b.letters_[i] < a.letters_[i]) return 1;
    }
    return na < nb ? -1 : na > nb ? 1 : 0;
  }

  std::vector<Letter> letters_;
};

/// Keeps the first occurrence of every stutter-equivalent trace.
inline std::vector<FiniteTrace> dedup_traces(const std::vector<FiniteTrace>& traces) {
  std::vector<FiniteTrace> out;
  std::vector<FiniteTrace> seen;
  for (const auto& t : traces) {
    auto n = t.normalized();
    auto it = std::lower_bound(seen.begin(), seen.end(), n);
    if (it != seen.end() && *it == n) continue;
    seen.insert(it, n);
    out.push_back(t);
  }
  return out;
}

inline std::string format_trace(const FiniteTrace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ';';
    out += format_letter(t.letters()[i]);
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

} // namespace detail

/// Parses one trace line; `base` is added to error offsets.
inline FiniteTrace parse_trace(std::string_view line, std::size_t base = 0) {
  std::vector<Letter> letters;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = std::min(line.find(';', start), line.size());
    const std::string_view raw = line.substr(start, end - start);
    const std::string_view letter = detail::trim(raw);
    if (letter.empty())
      throw parse_error("empty letter", base + start, {"'.'", "proposition"});
    if (letter == ".") {
      letters.emplace_back();
    } else {
      std::vector<std::string> props;
      std::size_t pstart = 0;
      while (true) {
        const std::size_t pend = std::min(letter.find(',', pstart), letter.size());
        const std::string_view prop = detail::trim(letter.substr(pstart, pend - pstart));
        const std::size_t at = base + static_cast<std::size_t>(prop.data() - line.data());
        if (!is_identifier(prop))
          throw parse_error("invalid proposition '" + std::string(prop) + "'", at, {"proposition"});
        if (is_reserved_name(prop))
          throw parse_error("proposition '" + std::string(prop) + "' uses the reserved prefix '__'", at);
        props.emplace_back(prop);
        if (pend == letter.size()) break;
        pstart = pend + 1;
      }
      letters.emplace_back(std::move(props));
    }
    if (end == line.size()) break;
    start = end + 1;
  }
  return FiniteTrace(std::move(letters));
}

/// Parses a trace file: one trace per line, '#' comments, blank lines ignored.
inline std::vector<FiniteTrace> parse_traces(std::istream& in) {
  std::vector<FiniteTrace> out;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::string_view body = detail::trim(line);
    if (!body.empty() && body.front() != '#') out.push_back(parse_trace(line, offset));
    offset += line.size() + 1;
  }
  return out;
}

inline std::vector<FiniteTrace> parse_traces(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_traces(in);
}

} // namespace hypermon
