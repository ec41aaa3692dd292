#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stokes2p/curved_mesh.hpp"

namespace stokes2p {

enum class TauRule { fixed, h_pow_k, h_pow_2 };

// Run parameters. Surface tension is fixed to 1 and the body force to 0;
// both restrictions are deliberate and visible here rather than configurable.
struct RunConfig {
  Rect domain{-1.0, 1.0, -1.0, 1.0};

  InterfaceDescriptor::Kind kind = InterfaceDescriptor::Kind::circle;
  double cx = 0.0, cy = 0.0;
  double radius = 0.5;           // circle
  double a = 0.6, b = 0.4;       // ellipse
  double r0 = 0.5;               // star
  double amplitude = 0.1;
  int lobes = 3;

  int k = 2;
  double target_h = 0.1;

  TauRule tau_rule = TauRule::h_pow_2;
  double tau_c = 0.25;
  double final_time = 0.0;

  double nu_minus = 1.0;
  double nu_plus = 1.0;

  std::string output_dir = "out";
  int snapshot_every = 10;

  static constexpr double surface_tension = 1.0;

  InterfaceDescriptor make_descriptor() const;
  double tau() const;
};

// Parses "key = value" lines under [section] headers; overrides are
// "section.key" / value pairs applied before validation. Throws ParseError
// with a line number, or ValidationError listing every violated invariant.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});

std::string serialize_config(const RunConfig& cfg);

}  // namespace stokes2p
