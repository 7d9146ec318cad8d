#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "mhdbl/inner0.hpp"

namespace mhdbl {

/// Study configuration. Config files hold `key = value` lines with `#`
/// comments; keys are the field names below (preset parameters by their own
/// names). Lists are comma separated; a value may be written 10^p.
struct StudyConfig {
  Preset preset = Preset::NumericalInner;
  PresetParams preset_params;
  std::vector<double> eps_list;  // strictly decreasing, in (0, 1]
  double mu = 1.0, kappa = 1.0;
  double delta0 = 0.5;  // layer positivity gate at delta0/2
  double delta = 0.1;   // symmetrizer margin
  double t_final = 0.2;
  // grids: inner nx x inner_ny on [0, ly]; layer nx x bl_neta on [0, bl_leta];
  // assembly/viscous grid nx x assembly_ny, clustered with sqrt(eps)/points_per_layer
  int nx = 32, inner_ny = 257, bl_neta = 512, assembly_ny = 257;
  double ly = 8.0, bl_leta = 30.0, points_per_layer = 16.0;
  // steps: stages and viscous solve share dt and the snapshot interval
  double dt = 0.005, dt_snap = 0.01;
  int order = 4;
  std::string out_dir = "out";
  bool dump_fields = false;
  int remainder_orders = 2;  // max |alpha| of the remainder norm table
  bool diagnostics = false;

  StudyConfig();
};

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const StudyConfig& c);

/// Throws std::invalid_argument with the line number on unknown keys,
/// duplicate keys, malformed lines or unparsable values.
StudyConfig parse_config(std::istream& is);
StudyConfig load_config(const std::filesystem::path& path);

/// The configuration as `key = value` lines, in a fixed order; parses back to
/// an identical configuration.
std::string to_config_text(const StudyConfig& c);

}  // namespace mhdbl
