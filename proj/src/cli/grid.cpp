#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "ssfde/cli.hpp"
#include "ssfde/profile_io.hpp"

namespace ssfde::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<GridValue::Kind> symbolic(std::string_view token) {
  if (token == "ratio") return GridValue::Kind::Ratio;
  if (token == "p") return GridValue::Kind::CriticalRate;
  if (token == "critical") return GridValue::Kind::CriticalEta;
  if (token == "barenblatt") return GridValue::Kind::BarenblattEta;
  return std::nullopt;
}

}  // namespace

std::string GridValue::label() const {
  switch (kind) {
    case Kind::Number: return format_double(value);
    case Kind::Ratio: return "ratio";
    case Kind::CriticalRate: return "p";
    case Kind::CriticalEta: return "critical";
    case Kind::BarenblattEta: return "barenblatt";
  }
  return "";
}

std::vector<GridValue> parse_grid(std::string_view text,
                                  std::vector<GridValue::Kind> allowed) {
  std::vector<GridValue> values;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw Error(ErrorCode::InvalidArgument, "empty grid entry in '" + std::string(text) + "'");
    }
    if (auto kind = symbolic(item)) {
      if (std::find(allowed.begin(), allowed.end(), *kind) == allowed.end()) {
        throw Error(ErrorCode::InvalidArgument,
                    "token '" + std::string(item) + "' not allowed here");
      }
      values.push_back({*kind, 0.0});
      continue;
    }
    const auto range = split(item, ':');
    if (range.size() == 1) {
      values.push_back({GridValue::Kind::Number, parse_number(item)});
    } else if (range.size() == 3) {
      const double lo = parse_number(range[0]);
      const double hi = parse_number(range[1]);
      const double count_d = parse_number(range[2]);
      const auto count = static_cast<long>(count_d);
      if (count < 1 || static_cast<double>(count) != count_d) {
        throw Error(ErrorCode::InvalidArgument, "range count must be a positive integer");
      }
      for (long i = 0; i < count; ++i) {
        const double v = count == 1 ? lo
                                    : lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(count - 1);
        values.push_back({GridValue::Kind::Number, i + 1 == count ? hi : v});
      }
    } else {
      throw Error(ErrorCode::InvalidArgument,
                  "grid entry must be 'x' or 'start:stop:count', got '" + std::string(item) + "'");
    }
  }
  return values;
}

std::vector<double> parse_number_grid(std::string_view text) {
  std::vector<double> out;
  for (const auto& v : parse_grid(text)) out.push_back(v.value);
  return out;
}

std::vector<int> parse_int_grid(std::string_view text) {
  std::vector<int> out;
  for (double v : parse_number_grid(text)) {
    if (v != std::floor(v) || std::abs(v) > 1e6) {
      throw Error(ErrorCode::InvalidArgument, "dimension must be an integer");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace ssfde::cli
