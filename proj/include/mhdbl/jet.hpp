#pragma once

#include <string>
#include <vector>

#include "mhdbl/field.hpp"
#include "mhdbl/interp.hpp"
#include "mhdbl/trajectory.hpp"

namespace mhdbl {

/// A field and the derivatives the remainder formulas need, at one snapshot.
/// For boundary-layer fields the y-slots hold eta-derivatives.
struct Jet {
  Field v, t, x, y, xx, xy, yy;
};

/// Jet of channel `name` at snapshot k: d_t by snapshot differences, d_x
/// spectral, d_y the order-`order` operator, yy = D_y D_y (the operator used
/// for the dyy traces).
Jet make_jet(const Trajectory& tr, const std::string& name, int k, int order);

/// d_x applied to every slot.
Jet jet_dx(const Jet& j);
/// c * j slot by slot.
Jet jet_scale(const Jet& j, double c);

/// Every slot mapped column-wise onto `target`. Queries beyond the source grid
/// take zero (decaying fields) or the last row (hold_tail).
Jet resample(const Jet& j, const ColumnInterp& ci, const GridPtr& target, bool hold_tail);

/// Wall row (j = 0) of each slot.
struct JetTrace {
  std::vector<double> v, t, x, y, xx, xy, yy;
};
JetTrace wall_trace(const Jet& j);

}  // namespace mhdbl
