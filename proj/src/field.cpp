#include "mhdbl/field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mhdbl {

Field::Field(GridPtr g, std::string label) : grid_(std::move(g)), label_(std::move(label)) {
  if (!grid_) throw std::invalid_argument("Field: null grid");
  v_.assign(grid_->size(), 0.0);
}

Field::Field(GridPtr g, std::vector<double> values, std::string label)
    : grid_(std::move(g)), v_(std::move(values)), label_(std::move(label)) {
  if (!grid_) throw std::invalid_argument("Field: null grid");
  if (v_.size() != grid_->size())
    throw std::invalid_argument("Field '" + label_ + "': value count " + std::to_string(v_.size()) +
                                " does not match grid size " + std::to_string(grid_->size()));
}

Field Field::from_function(GridPtr g, const std::function<double(double, double)>& f,
                           std::string label) {
  Field out(g, std::move(label));
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) out(i, j) = f(g->x(i), g->y(j));
  return out;
}

void Field::check_finite(const std::string& what) const {
  for (std::size_t k = 0; k < v_.size(); ++k) {
    if (!std::isfinite(v_[k])) {
      std::ostringstream os;
      int nx = grid_->nx();
      os << what << ": non-finite value in field '" << label_ << "' at (i=" << k % nx
         << ", j=" << k / nx << ")";
      throw std::runtime_error(os.str());
    }
  }
}

void Field::require_same(const Field& o) const {
  if (grid_ != o.grid_ && !grid_->same_shape(*o.grid_))
    throw std::invalid_argument("Field: grid mismatch between '" + label_ + "' and '" + o.label_ + "'");
}

Field& Field::operator+=(const Field& o) {
  require_same(o);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same(o);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

Field& Field::operator*=(const Field& o) {
  require_same(o);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] *= o.v_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& x : v_) x *= s;
  return *this;
}

Field& Field::operator+=(double s) {
  for (auto& x : v_) x += s;
  return *this;
}

Field& Field::axpy(double a, const Field& x) {
  require_same(x);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += a * x.v_[k];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, const Field& b) { return a *= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }
Field operator-(Field a) { return a *= -1.0; }

std::vector<double> row_of(const Field& f, int j) {
  return std::vector<double>(f.row(j), f.row(j) + f.nx());
}

}  // namespace mhdbl
