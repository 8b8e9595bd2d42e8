#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gpk/capacity.hpp"
#include "gpk/errors.hpp"
#include "gpk/measure.hpp"

// Line-oriented text documents:
//
//   kind: capacity            # capacity | mass | probability | model | joint
//   frame: a b c
//   aux: y1 y2                # model and joint only
//   {a} 1/2                   # capacity, mass, probability
//   y1 1/2 -> {a}             # model
//   (a,y1) 1/2                # joint
//
// Numerals are integers or p/q. `#` starts a comment; blank lines are ignored.

namespace gpk {

using Document = std::variant<Capacity, SignedMassFunction, ProbabilityMeasure, DempsterModel, JointMeasure>;

struct ParseOptions {
  /// Accept capacity values outside [0, 1].
  bool allow_nonstandard = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline bool valid_label(const std::string& label) {
  return !label.empty() && label.find_first_of("{}(),#:") == std::string::npos;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

/// Parses "{a,b}" at the start of text; returns the subset and the rest.
inline std::pair<Subset, std::string_view> parse_subset(const Frame& frame, std::string_view text,
                                                       std::size_t line) {
  if (text.empty() || text.front() != '{') throw ParseError(line, "expected a subset literal");
  const auto close = text.find('}');
  if (close == std::string_view::npos) throw ParseError(line, "unterminated subset literal");
  std::string_view body = trim(text.substr(1, close - 1));
  Subset s = 0;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string label(trim(body.substr(0, comma)));
    const auto index = frame.index_of(label);
    if (!index) throw ParseError(line, "unknown label '" + label + "'");
    if (contains(s, *index)) throw ParseError(line, "label '" + label + "' repeated in subset");
    s |= singleton(*index);
    if (comma == std::string_view::npos) break;
    body = trim(body.substr(comma + 1));
    if (body.empty()) throw ParseError(line, "trailing comma in subset literal");
  }
  return {s, trim(text.substr(close + 1))};
}

inline Rational parse_number(std::string_view text, std::size_t line) {
  Rational r;
  if (!parse_rational(trim(text), r))
    throw ParseError(line, "expected an integer or p/q rational, got '" + std::string(trim(text)) + "'");
  return r;
}

inline Frame parse_frame(std::string_view words, std::size_t line, const char* what) {
  auto labels = split_words(words);
  for (const auto& l : labels)
    if (!valid_label(l)) throw ParseError(line, std::string("invalid ") + what + " label '" + l + "'");
  try {
    return Frame(std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

template <typename F>
auto wrap_invariant(F&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace detail

inline Document parse_document(std::string_view text, const ParseOptions& options = {}) {
  using detail::trim;
  std::vector<detail::Line> lines;
  {
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      ++number;
      std::string_view raw = text.substr(pos, end - pos);
      if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      raw = trim(raw);
      if (!raw.empty()) lines.push_back({number, raw});
      pos = end + 1;
    }
  }

  auto header = [&](std::size_t index, std::string_view key) -> std::string_view {
    if (index >= lines.size()) throw ParseError(0, "missing '" + std::string(key) + ":' header");
    const auto& l = lines[index];
    if (l.text.substr(0, key.size()) != key || l.text.size() <= key.size() || l.text[key.size()] != ':')
      throw ParseError(l.number, "expected '" + std::string(key) + ":' header");
    return trim(l.text.substr(key.size() + 1));
  };

  const std::string kind(header(0, "kind"));
  const std::string_view frame_words = header(1, "frame");
  const Frame frame = detail::parse_frame(frame_words, lines[1].number, "frame");
  std::size_t body = 2;

  if (kind == "capacity" || kind == "mass" || kind == "probability") {
    std::vector<std::optional<Rational>> assigned(frame.subset_count());
    for (std::size_t i = body; i < lines.size(); ++i) {
      const auto [set, rest] = detail::parse_subset(frame, lines[i].text, lines[i].number);
      const Rational value = detail::parse_number(rest, lines[i].number);
      if (assigned[set])
        throw ParseError(lines[i].number, "duplicate assignment to " + frame.format(set));
      if (kind == "mass" && set == 0) throw ParseError(lines[i].number, "mass on the empty set");
      if (kind == "probability" && cardinality(set) != 1)
        throw ParseError(lines[i].number, "probability files assign singletons only");
      if (kind == "capacity" && set == 0 && value != 0)
        throw ParseError(lines[i].number, "capacity must vanish on the empty set");
      if (kind == "capacity" && !options.allow_nonstandard && (value < 0 || value > 1))
        throw ParseError(lines[i].number, "capacity value " + to_string(value) +
                                              " outside [0, 1] (use --allow-nonstandard)");
      if (kind == "probability" && value < 0)
        throw ParseError(lines[i].number, "negative probability");
      assigned[set] = value;
    }

    if (kind == "capacity") {
      if (!assigned[frame.full()] || *assigned[frame.full()] != 1)
        throw ParseError(0, "the full frame " + frame.format(frame.full()) + " must be assigned 1");
      SetFunction f(frame);
      for (Subset s = 0; s <= frame.full(); ++s)
        if (assigned[s]) f[s] = *assigned[s];
      return Capacity(std::move(f));
    }
    if (kind == "mass") {
      SignedMassFunction m(frame);
      for (Subset s = 1; s <= frame.full(); ++s)
        if (assigned[s]) m.set_mass(s, *assigned[s]);
      if (m.total() != 1) throw ParseError(0, "masses sum to " + to_string(m.total()) + ", expected 1");
      return m;
    }
    std::vector<Rational> w(frame.size());
    for (std::size_t x = 0; x < frame.size(); ++x)
      if (assigned[singleton(x)]) w[x] = *assigned[singleton(x)];
    return detail::wrap_invariant([&] { return ProbabilityMeasure(frame, std::move(w)); });
  }

  if (kind == "model" || kind == "joint") {
    const std::string_view aux_words = header(2, "aux");
    const Frame aux = detail::parse_frame(aux_words, lines[2].number, "aux");
    body = 3;
    if (kind == "model") {
      std::vector<std::optional<std::pair<Rational, Subset>>> rows(aux.size());
      for (std::size_t i = body; i < lines.size(); ++i) {
        const auto& l = lines[i];
        const auto arrow = l.text.find("->");
        if (arrow == std::string_view::npos) throw ParseError(l.number, "expected 'y weight -> {subset}'");
        const auto words = detail::split_words(l.text.substr(0, arrow));
        if (words.size() != 2) throw ParseError(l.number, "expected 'y weight -> {subset}'");
        const auto y = aux.index_of(words[0]);
        if (!y) throw ParseError(l.number, "unknown aux label '" + words[0] + "'");
        if (rows[*y]) throw ParseError(l.number, "duplicate assignment to '" + words[0] + "'");
        const Rational u = detail::parse_number(words[1], l.number);
        const auto [set, rest] = detail::parse_subset(frame, trim(l.text.substr(arrow + 2)), l.number);
        if (!rest.empty()) throw ParseError(l.number, "trailing text after subset");
        rows[*y] = std::make_pair(u, set);
      }
      std::vector<Rational> u;
      std::vector<Subset> gamma;
      for (std::size_t y = 0; y < aux.size(); ++y) {
        if (!rows[y]) throw ParseError(0, "aux element '" + aux.label(y) + "' is not assigned");
        u.push_back(rows[y]->first);
        gamma.push_back(rows[y]->second);
      }
      return detail::wrap_invariant([&] { return DempsterModel(frame, aux, std::move(u), std::move(gamma)); });
    }

    std::vector<std::optional<Rational>> cells(frame.size() * aux.size());
    for (std::size_t i = body; i < lines.size(); ++i) {
      const auto& l = lines[i];
      if (l.text.front() != '(') throw ParseError(l.number, "expected '(x,y) weight'");
      const auto close = l.text.find(')');
      if (close == std::string_view::npos) throw ParseError(l.number, "unterminated pair");
      const std::string_view inner = l.text.substr(1, close - 1);
      const auto comma = inner.find(',');
      if (comma == std::string_view::npos) throw ParseError(l.number, "expected '(x,y)'");
      const std::string xl(trim(inner.substr(0, comma)));
      const std::string yl(trim(inner.substr(comma + 1)));
      const auto x = frame.index_of(xl);
      const auto y = aux.index_of(yl);
      if (!x) throw ParseError(l.number, "unknown label '" + xl + "'");
      if (!y) throw ParseError(l.number, "unknown aux label '" + yl + "'");
      auto& cell = cells[*x * aux.size() + *y];
      if (cell) throw ParseError(l.number, "duplicate assignment to (" + xl + "," + yl + ")");
      cell = detail::parse_number(l.text.substr(close + 1), l.number);
    }
    std::vector<Rational> w(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i]) w[i] = *cells[i];
    return detail::wrap_invariant([&] { return JointMeasure(frame, aux, std::move(w)); });
  }

  throw ParseError(lines[0].number, "unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Emission. Subsets are listed by cardinality, then bitmask.

namespace detail {

inline std::vector<Subset> canonical_subsets(const Frame& frame) {
  std::vector<Subset> out;
  for (Subset s = 1; s <= frame.full(); ++s) out.push_back(s);
  std::stable_sort(out.begin(), out.end(),
                   [](Subset a, Subset b) { return cardinality(a) < cardinality(b); });
  return out;
}

inline std::string join_labels(const Frame& frame) {
  std::string out;
  for (std::size_t i = 0; i < frame.size(); ++i) out += (i ? " " : "") + frame.label(i);
  return out;
}

inline std::string headers(const char* kind, const Frame& frame) {
  return std::string("kind: ") + kind + "\nframe: " + join_labels(frame) + "\n";
}

}  // namespace detail

inline std::string emit(const Capacity& c) {
  std::string out = detail::headers("capacity", c.frame());
  for (Subset s : detail::canonical_subsets(c.frame()))
    out += c.frame().format(s) + " " + to_string(c[s]) + "\n";
  return out;
}

inline std::string emit(const SignedMassFunction& m) {
  std::string out = detail::headers("mass", m.frame());
  for (Subset s : detail::canonical_subsets(m.frame()))
    if (m.mass(s) != 0) out += m.frame().format(s) + " " + to_string(m.mass(s)) + "\n";
  return out;
}

inline std::string emit(const ProbabilityMeasure& p) {
  std::string out = detail::headers("probability", p.frame());
  for (std::size_t x = 0; x < p.frame().size(); ++x)
    out += p.frame().format(singleton(x)) + " " + to_string(p.weight(x)) + "\n";
  return out;
}

inline std::string emit(const DempsterModel& model) {
  std::string out = detail::headers("model", model.x_frame());
  out += "aux: " + detail::join_labels(model.y_frame()) + "\n";
  for (std::size_t y = 0; y < model.y_frame().size(); ++y)
    out += model.y_frame().label(y) + " " + to_string(model.u()[y]) + " -> " +
           model.x_frame().format(model.gamma()[y]) + "\n";
  return out;
}

inline std::string emit(const JointMeasure& q) {
  std::string out = detail::headers("joint", q.x_frame());
  out += "aux: " + detail::join_labels(q.y_frame()) + "\n";
  for (std::size_t x = 0; x < q.x_frame().size(); ++x)
    for (std::size_t y = 0; y < q.y_frame().size(); ++y)
      if (q.at(x, y) != 0)
        out += "(" + q.x_frame().label(x) + "," + q.y_frame().label(y) + ") " + to_string(q.at(x, y)) + "\n";
  return out;
}

inline std::string emit(const Document& doc) {
  return std::visit([](const auto& value) { return emit(value); }, doc);
}

}  // namespace gpk
