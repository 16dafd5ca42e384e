#include "mhs/composition.hpp"

#include <algorithm>
#include <charconv>

namespace mhs {

namespace {

unsigned parse_uint(std::string_view token, std::string_view what) {
  unsigned value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    throw Error("composition: bad " + std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

Composition::Composition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error("composition: at least one part required");
  prefix_weight_.clear();
  prefix_weight_.reserve(parts_.size() + 1);
  prefix_weight_.push_back(0);
  min_part_ = parts_.front();
  for (unsigned s : parts_) {
    if (s == 0) throw Error("composition: parts must be positive");
    prefix_weight_.push_back(prefix_weight_.back() + s);
    min_part_ = std::min(min_part_, s);
  }
}

Composition Composition::parse(std::string_view text) {
  std::vector<unsigned> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    std::size_t caret = token.find('^');
    if (caret == std::string_view::npos) {
      parts.push_back(parse_uint(token, "part"));
    } else {
      unsigned base = parse_uint(token.substr(0, caret), "part");
      unsigned count = parse_uint(token.substr(caret + 1), "repeat count");
      if (count == 0) throw Error("composition: repeat count must be positive");
      parts.insert(parts.end(), count, base);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Composition(std::move(parts));
}

bool Composition::homogeneous() const {
  return std::all_of(parts_.begin(), parts_.end(), [&](unsigned s) { return s == parts_.front(); });
}

std::string Composition::str() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(parts_[i]);
  }
  return out;
}

}  // namespace mhs
