#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mhdbl/field.hpp"

namespace mhdbl {

/// Snapshots of a fixed set of named fields on one grid at increasing times.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(GridPtr g, std::vector<std::string> names);

  const GridPtr& grid() const { return grid_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& times() const { return times_; }
  int size() const { return static_cast<int>(times_.size()); }
  bool has(const std::string& name) const;
  int index(const std::string& name) const;

  /// Append a snapshot; fields in the order of names().
  void push(double t, std::vector<Field> fields);

  const Field& at(int k, const std::string& name) const;
  const Field& at(int k, int idx) const { return data_[k][idx]; }

  /// Cubic-in-time interpolation (exact at stored times).
  Field interp(const std::string& name, double t) const;
  void interp_into(int idx, double t, double* out) const;

  /// Time derivative at snapshot k: centered three-point, one-sided
  /// second order at the ends.
  Field ddt(int k, const std::string& name) const;

  /// MHDB dumps plus manifest.csv in dir; file names are <prefix>_<name>_<k>.mhdb.
  void save(const std::filesystem::path& dir, const std::string& prefix) const;
  static Trajectory load(const std::filesystem::path& dir);

 private:
  GridPtr grid_;
  std::vector<std::string> names_;
  std::vector<double> times_;
  std::vector<std::vector<Field>> data_;
};

/// Time-indexed wall-parallel data (functions of t and x) keyed by channel.
class TraceSeries {
 public:
  TraceSeries() = default;
  explicit TraceSeries(int nx) : nx_(nx) {}

  int nx() const { return nx_; }
  const std::vector<double>& times() const { return times_; }
  int size() const { return static_cast<int>(times_.size()); }
  bool has(const std::string& ch) const { return data_.count(ch) != 0; }
  std::vector<std::string> channels() const;

  /// Start a new time row; every channel must then be set for it.
  void add_time(double t);
  void set(const std::string& ch, int k, std::vector<double> v);

  const std::vector<double>& at(const std::string& ch, int k) const;
  std::vector<double> interp(const std::string& ch, double t) const;
  /// Three-point time derivative at row k (one-sided at the ends).
  std::vector<double> ddt(const std::string& ch, int k) const;
  /// Throws listing every absent channel.
  void require(const std::vector<std::string>& chs, const std::string& who) const;

 private:
  int nx_ = 0;
  std::vector<double> times_;
  std::map<std::string, std::vector<std::vector<double>>> data_;
};

}  // namespace mhdbl
