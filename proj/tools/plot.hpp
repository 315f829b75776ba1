#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pipescope/network.hpp"

namespace pipescope::cli {

enum class ProfileKind { Area, Volume };

struct ProfileSeries {
  std::string pipe;
  std::vector<double> x;
  std::vector<double> value;
};

struct ProfileTable {
  ProfileKind kind = ProfileKind::Area;
  std::vector<ProfileSeries> series;  // in order of first appearance
};

/// Reads `pipe,x_m,A_m2` or `pipe,x_m,V_m3`. Throws ParseError on anything
/// else, including a file without data rows.
ProfileTable read_profile_csv(const std::string& path);

/// Standalone SVG, one panel per pipe: truth as a solid grey line,
/// reconstruction dashed. Output depends only on the inputs.
std::string render_svg(const ProfileTable& table, const Network* truth, const std::string& title);

}  // namespace pipescope::cli
