#include "mhdbl/jet.hpp"

#include "mhdbl/ops.hpp"

namespace mhdbl {

Jet make_jet(const Trajectory& tr, const std::string& name, int k, int order) {
  Jet j;
  j.v = tr.at(k, name);
  j.t = tr.ddt(k, name);
  j.x = ddx(j.v);
  j.y = ddy(j.v, order);
  j.xx = d2x(j.v);
  j.xy = ddx(j.y);
  j.yy = ddy(j.y, order);
  return j;
}

Jet jet_dx(const Jet& j) {
  return {ddx(j.v), ddx(j.t), ddx(j.x), ddx(j.y), ddx(j.xx), ddx(j.xy), ddx(j.yy)};
}

Jet jet_scale(const Jet& j, double c) { return {c * j.v, c * j.t, c * j.x, c * j.y, c * j.xx, c * j.xy, c * j.yy}; }

Jet resample(const Jet& j, const ColumnInterp& ci, const GridPtr& target, bool hold_tail) {
  auto r = [&](const Field& f) { return ci.apply(f, target, hold_tail); };
  return {r(j.v), r(j.t), r(j.x), r(j.y), r(j.xx), r(j.xy), r(j.yy)};
}

JetTrace wall_trace(const Jet& j) {
  return {row_of(j.v, 0), row_of(j.t, 0), row_of(j.x, 0), row_of(j.y, 0),
          row_of(j.xx, 0), row_of(j.xy, 0), row_of(j.yy, 0)};
}

}  // namespace mhdbl
