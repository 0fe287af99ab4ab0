#pragma once

#include <string>
#include <vector>

#include "metapop/equilibria.hpp"
#include "metapop/model.hpp"

namespace metapop {

enum class SweepPlane { PhysicalLambda, NormalizedAlphaBeta };
enum class CellClassifier { NumericCount, SawtoothExact };

enum class CertificateId { ThmMain, Corollary, ThmGeneralA, SawtoothPredicate };

const char* to_string(CertificateId c);

struct AxisSpec {
  double min = 0.0;
  double max = 4.0;
  int steps = 400;
};

struct SweepSpec {
  SweepPlane plane = SweepPlane::PhysicalLambda;
  AxisSpec x_axis;
  AxisSpec y_axis;
  // Fixed parameters: D/k1/k2 drive the physical plane, gamma the normalized
  // one.
  double D = 1.0;
  double k1 = 1.0;
  double k2 = 0.4;
  double gamma = 0.4;
  ReactionKind reaction = ReactionKind::cubic_allee();
  CellClassifier classifier = CellClassifier::NumericCount;
  std::vector<CertificateId> overlays;
  SolverOptions solver;

  // Cells are classified at their centers, keeping all sampled parameters
  // strictly inside (min, max).
  double cell_x(int ix) const {
    return x_axis.min + (ix + 0.5) * (x_axis.max - x_axis.min) / x_axis.steps;
  }
  double cell_y(int iy) const {
    return y_axis.min + (iy + 0.5) * (y_axis.max - y_axis.min) / y_axis.steps;
  }

  void validate() const;  // throws std::invalid_argument with the reason
};

struct RegionCell {
  double px = 0.0;
  double py = 0.0;
  int count = 0;
  bool degenerate = false;
  std::vector<bool> certs;  // one flag per overlay, same order as spec
};

// Row-major classification of a parameter-plane grid: index iy*steps_x + ix.
struct RegionMap {
  SweepSpec spec;
  std::vector<RegionCell> cells;

  const RegionCell& at(int ix, int iy) const {
    return cells[static_cast<size_t>(iy) * spec.x_axis.steps + ix];
  }
};

}  // namespace metapop
