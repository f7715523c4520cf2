#include "ssfde/profile_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace ssfde {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw Error(ErrorCode::InvalidArgument, "failed to format double");
  }
  return std::string(buf.data(), end);
}

void write_profile_csv(std::ostream& out, const Profile& profile) {
  out << "r,f,q\n";
  for (const auto& s : profile.samples) {
    out << format_double(s.r) << ',' << format_double(s.f) << ',' << format_double(s.q)
        << '\n';
  }
}

namespace {

double parse_field(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, "malformed CSV number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<Sample> read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "r,f,q") {
    throw Error(ErrorCode::InvalidArgument, "expected CSV header 'r,f,q'");
  }
  std::vector<Sample> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "CSV row needs three columns");
    }
    const std::string_view view(line);
    rows.push_back({parse_field(view.substr(0, c1)),
                    parse_field(view.substr(c1 + 1, c2 - c1 - 1)),
                    parse_field(view.substr(c2 + 1))});
  }
  return rows;
}

nlohmann::json to_json(const ProblemParams& params) {
  return {{"n", params.n}, {"m", params.m}, {"alpha", params.alpha}, {"beta", params.beta}};
}

nlohmann::json to_json(const IntegratorOptions& opts) {
  return {{"rel_tol", opts.rel_tol},
          {"abs_tol", opts.abs_tol},
          {"max_step", opts.max_step},
          {"points_per_decade", opts.points_per_decade},
          {"max_steps", opts.max_steps}};
}

nlohmann::json profile_metadata(const Profile& profile) {
  nlohmann::json meta;
  meta["format"] = kFormatVersion;
  meta["params"] = to_json(profile.params);
  meta["options"] = to_json(profile.meta.options);
  meta["s_start"] = profile.meta.s_start;
  meta["s_end"] = profile.meta.s_end;
  meta["steps"] = profile.meta.steps;
  meta["rejected_steps"] = profile.meta.rejected;
  meta["termination"] = std::string(to_string(profile.meta.cause));
  meta["samples"] = profile.samples.size();
  return meta;
}

}  // namespace ssfde
