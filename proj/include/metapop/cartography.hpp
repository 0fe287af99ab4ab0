#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "metapop/region_map.hpp"

namespace metapop {

// Classifies every cell of the parameter grid (equilibrium count, degenerate
// flag, one verdict per overlay certificate). Deterministic given the
// SweepSpec; the parallel version distributes rows over OpenMP threads and
// assembles results row-major, so its output is identical to the serial
// reference.
RegionMap run_sweep(const SweepSpec& spec);
RegionMap run_sweep_serial(const SweepSpec& spec);

struct ContainmentReport {
  CertificateId certificate = CertificateId::ThmMain;
  std::size_t certified_cells = 0;
  double fraction_unique = 1.0;       // certified cells with count 1
  std::vector<std::size_t> violations;         // certified but count != 1
  std::vector<std::size_t> inverse_violations; // iff only: uncertified, count 1
};

// Soundness check of one overlay: every (non-degenerate) certified cell must
// hold a single equilibrium. For the iff-certificate the reverse direction
// is audited too.
ContainmentReport containment_report(const RegionMap& map, CertificateId cert);

// CSV layout: header "axis1,axis2,count,degenerate,cert_<id>..." with the
// actual axis names, one row-major line per cell, values at 17 significant
// digits, newline-terminated.
void export_csv(const RegionMap& map, const std::string& path);
std::string region_map_csv(const RegionMap& map);

struct ParsedRegionMap {
  std::string axis1;
  std::string axis2;
  std::vector<std::string> cert_names;
  std::vector<RegionCell> cells;
};

ParsedRegionMap parse_csv(const std::string& text);

// Field-for-field comparison of an exported-and-reparsed map against the
// original.
bool equivalent(const RegionMap& map, const ParsedRegionMap& parsed);

struct SvgStyle {
  double width = 640.0;
  double height = 640.0;
  double margin_left = 64.0;
  double margin_right = 16.0;
  double margin_top = 24.0;
  double margin_bottom = 48.0;
  bool legend = true;
  std::string title;
};

// Static SVG rendering: one rectangle per cell, grayscale darkening with
// fewer equilibria, hatched fill for degenerate or out-of-palette counts,
// certificate region boundaries as polylines, legend. Byte-for-byte
// deterministic for a given map and style.
void export_svg(const RegionMap& map, const std::string& path,
                const SvgStyle& style = {});
std::string region_map_svg(const RegionMap& map, const SvgStyle& style = {});

const char* axis1_name(const SweepSpec& spec);
const char* axis2_name(const SweepSpec& spec);

}  // namespace metapop
