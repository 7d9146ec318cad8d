#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mhdbl/grid.hpp"

namespace mhdbl {

/// Scalar field on a Grid; values are stored row-major with x fastest,
/// so index (i, j) lives at j*nx + i.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr g, std::string label = {});
  Field(GridPtr g, std::vector<double> values, std::string label = {});

  static Field from_function(GridPtr g, const std::function<double(double, double)>& f,
                             std::string label = {});

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool empty() const { return !grid_; }
  int nx() const { return grid_->nx(); }
  int ny() const { return grid_->ny(); }

  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * grid_->nx() + i]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(j) * grid_->nx() + i]; }
  double* row(int j) { return v_.data() + static_cast<std::size_t>(j) * grid_->nx(); }
  const double* row(int j) const { return v_.data() + static_cast<std::size_t>(j) * grid_->nx(); }

  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::size_t size() const { return v_.size(); }

  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  /// Throws std::runtime_error naming the first non-finite entry.
  void check_finite(const std::string& what) const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(const Field& o);
  Field& operator*=(double s);
  Field& operator+=(double s);
  Field& axpy(double a, const Field& x);

 private:
  void require_same(const Field& o) const;
  GridPtr grid_;
  std::vector<double> v_;
  std::string label_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);
Field operator-(Field a);

/// Row j (wall-parallel line) as a vector over x.
std::vector<double> row_of(const Field& f, int j);

struct VectorState {
  Field u, v, h, g;
  std::optional<Field> p;
};

}  // namespace mhdbl
