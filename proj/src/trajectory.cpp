#include "mhdbl/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

#include "mhdbl/interp.hpp"
#include "mhdbl/mhdb.hpp"

namespace mhdbl {

Trajectory::Trajectory(GridPtr g, std::vector<std::string> names)
    : grid_(std::move(g)), names_(std::move(names)) {}

bool Trajectory::has(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

int Trajectory::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range("Trajectory: no field named '" + name + "'");
  return static_cast<int>(it - names_.begin());
}

void Trajectory::push(double t, std::vector<Field> fields) {
  if (fields.size() != names_.size()) throw std::invalid_argument("Trajectory::push: field count mismatch");
  if (!times_.empty() && !(t > times_.back()))
    throw std::invalid_argument("Trajectory::push: times must increase");
  for (std::size_t n = 0; n < fields.size(); ++n) fields[n].set_label(names_[n]);
  times_.push_back(t);
  data_.push_back(std::move(fields));
}

const Field& Trajectory::at(int k, const std::string& name) const { return data_.at(k)[index(name)]; }

void Trajectory::interp_into(int idx, double t, double* out) const {
  TimeStencil ts = time_stencil(times_, t);
  const std::size_t n = grid_->size();
  std::fill(out, out + n, 0.0);
  for (int m = 0; m < ts.count; ++m) {
    const double* src = data_[ts.start + m][idx].data();
    double w = ts.w[m];
    for (std::size_t q = 0; q < n; ++q) out[q] += w * src[q];
  }
}

Field Trajectory::interp(const std::string& name, double t) const {
  Field f(grid_, name);
  interp_into(index(name), t, f.data());
  return f;
}

namespace {

// Three-point Lagrange derivative weights at times[k]; returns the first node.
int ddt_weights(const std::vector<double>& times, int k, double* w) {
  const int n = static_cast<int>(times.size());
  if (n < 3) throw std::runtime_error("ddt: need at least 3 snapshots");
  int s = std::clamp(k, 1, n - 2) - 1;
  const double* x = &times[s];
  double t = times[k];
  for (int a = 0; a < 3; ++a) {
    double num = 0.0, den = 1.0;
    for (int b = 0; b < 3; ++b) {
      if (b == a) continue;
      den *= x[a] - x[b];
      double p = 1.0;
      for (int m = 0; m < 3; ++m)
        if (m != a && m != b) p *= t - x[m];
      num += p;
    }
    w[a] = num / den;
  }
  return s;
}

}  // namespace

Field Trajectory::ddt(int k, const std::string& name) const {
  int idx = index(name);
  double w[3];
  int s = ddt_weights(times_, k, w);
  Field out(grid_, "d_t " + name);
  for (int a = 0; a < 3; ++a) out.axpy(w[a], data_[s + a][idx]);
  return out;
}

void Trajectory::save(const std::filesystem::path& dir, const std::string& prefix) const {
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  for (int k = 0; k < size(); ++k) {
    for (std::size_t n = 0; n < names_.size(); ++n) {
      std::string file = prefix + "_" + names_[n] + "_" + std::to_string(k) + ".mhdb";
      write_mhdb(data_[k][n], dir / file);
      entries.push_back({times_[k], names_[n], file});
    }
  }
  write_manifest(dir / "manifest.csv", entries);
}

Trajectory Trajectory::load(const std::filesystem::path& dir) {
  auto entries = read_manifest(dir / "manifest.csv");
  if (entries.empty()) throw std::runtime_error("Trajectory::load: empty manifest in " + dir.string());
  std::vector<std::string> names;
  for (const auto& e : entries)
    if (std::find(names.begin(), names.end(), e.quantity) == names.end()) names.push_back(e.quantity);
  Trajectory tr;
  std::vector<Field> row;
  double t = entries.front().time;
  for (const auto& e : entries) {
    if (e.time != t) {
      if (!tr.grid_) tr = Trajectory(row.front().grid_ptr(), names);
      tr.push(t, std::move(row));
      row.clear();
      t = e.time;
    }
    Field f = read_mhdb(dir / e.file, e.quantity);
    if (!row.empty()) f = Field(row.front().grid_ptr(), std::move(f.values()), e.quantity);
    row.push_back(std::move(f));
  }
  if (!tr.grid_) tr = Trajectory(row.front().grid_ptr(), names);
  tr.push(t, std::move(row));
  return tr;
}

std::vector<std::string> TraceSeries::channels() const {
  std::vector<std::string> out;
  for (const auto& kv : data_) out.push_back(kv.first);
  return out;
}

void TraceSeries::add_time(double t) {
  if (!times_.empty() && !(t > times_.back())) throw std::invalid_argument("TraceSeries: times must increase");
  times_.push_back(t);
}

void TraceSeries::set(const std::string& ch, int k, std::vector<double> v) {
  if (static_cast<int>(v.size()) != nx_) throw std::invalid_argument("TraceSeries: channel '" + ch + "' size mismatch");
  if (k < 0 || k >= size()) throw std::out_of_range("TraceSeries: bad time index");
  auto& d = data_[ch];
  if (static_cast<int>(d.size()) < size()) d.resize(size());
  d[k] = std::move(v);
}

const std::vector<double>& TraceSeries::at(const std::string& ch, int k) const {
  auto it = data_.find(ch);
  if (it == data_.end()) throw std::out_of_range("TraceSeries: missing channel '" + ch + "'");
  if (k >= static_cast<int>(it->second.size()) || it->second[k].empty())
    throw std::out_of_range("TraceSeries: channel '" + ch + "' not set at index " + std::to_string(k));
  return it->second[k];
}

std::vector<double> TraceSeries::interp(const std::string& ch, double t) const {
  TimeStencil ts = time_stencil(times_, t);
  std::vector<double> out(nx_, 0.0);
  for (int m = 0; m < ts.count; ++m) {
    const auto& v = at(ch, ts.start + m);
    for (int i = 0; i < nx_; ++i) out[i] += ts.w[m] * v[i];
  }
  return out;
}

std::vector<double> TraceSeries::ddt(const std::string& ch, int k) const {
  double w[3];
  int s = ddt_weights(times_, k, w);
  std::vector<double> out(nx_, 0.0);
  for (int a = 0; a < 3; ++a) {
    const auto& v = at(ch, s + a);
    for (int i = 0; i < nx_; ++i) out[i] += w[a] * v[i];
  }
  return out;
}

void TraceSeries::require(const std::vector<std::string>& chs, const std::string& who) const {
  std::string missing;
  for (const auto& c : chs)
    if (!has(c)) missing += (missing.empty() ? "" : ", ") + c;
  if (!missing.empty()) throw std::runtime_error(who + ": missing trace channels: " + missing);
}

}  // namespace mhdbl
