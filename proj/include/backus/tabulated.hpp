#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "backus/common.hpp"
#include "backus/nonlinear.hpp"

namespace backus {

/// Tabulated boundary datum on a complete (theta, phi_az) lattice, bilinearly
/// interpolated: theta clamped at the poles, azimuth periodic.
class TabulatedSphereFunction {
 public:
  /// Rows of (theta, phi_az, value); every theta must carry the same azimuth
  /// set.
  TabulatedSphereFunction(std::vector<double> thetas, std::vector<double> phis,
                          std::vector<std::vector<double>> values)
      : thetas_(std::move(thetas)), phis_(std::move(phis)), values_(std::move(values)) {
    if (thetas_.size() < 2 || phis_.size() < 2)
      throw std::invalid_argument("TabulatedSphereFunction: need at least a 2x2 lattice");
    if (!std::is_sorted(thetas_.begin(), thetas_.end()) ||
        !std::is_sorted(phis_.begin(), phis_.end()))
      throw std::invalid_argument("TabulatedSphereFunction: lattice axes must be sorted");
    if (values_.size() != thetas_.size())
      throw std::invalid_argument("TabulatedSphereFunction: row count mismatch");
    for (const auto& row : values_)
      if (row.size() != phis_.size())
        throw std::invalid_argument("TabulatedSphereFunction: incomplete lattice row");
  }

  static TabulatedSphereFunction from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("tabulated data: cannot open " + path);
    std::map<double, std::map<double, double>> lattice;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream row(line);
      double theta, phi, g;
      if (!(row >> theta >> phi >> g)) {
        if (line_no == 1) continue;  // header row
        throw std::runtime_error("tabulated data: malformed row " + std::to_string(line_no));
      }
      lattice[theta][phi] = g;
    }
    if (lattice.empty()) throw std::runtime_error("tabulated data: no rows in " + path);
    std::vector<double> thetas, phis;
    for (const auto& [t, row] : lattice) thetas.push_back(t);
    for (const auto& [p, v] : lattice.begin()->second) phis.push_back(p);
    std::vector<std::vector<double>> values;
    for (const auto& [t, row] : lattice) {
      if (row.size() != phis.size())
        throw std::runtime_error("tabulated data: lattice is not complete");
      std::vector<double> r;
      for (const auto& [p, v] : row) r.push_back(v);
      values.push_back(std::move(r));
    }
    return TabulatedSphereFunction(std::move(thetas), std::move(phis), std::move(values));
  }

  double operator()(double theta, double phi_az) const {
    // Azimuth wraps with period 2 pi; the last cell spans back to phis_[0].
    const double period = 2.0 * pi;
    double phi = std::fmod(phi_az - phis_.front(), period);
    if (phi < 0.0) phi += period;
    phi += phis_.front();

    std::size_t ip = 0;
    double sp = 0.0, span_p;
    if (phi >= phis_.back()) {
      ip = phis_.size() - 1;
      span_p = phis_.front() + period - phis_.back();
      sp = span_p > 0.0 ? (phi - phis_.back()) / span_p : 0.0;
    } else {
      ip = static_cast<std::size_t>(
               std::upper_bound(phis_.begin(), phis_.end(), phi) - phis_.begin()) -
           1;
      span_p = phis_[ip + 1] - phis_[ip];
      sp = span_p > 0.0 ? (phi - phis_[ip]) / span_p : 0.0;
    }
    const std::size_t ip1 = (ip + 1) % phis_.size();

    const double theta_c = std::clamp(theta, thetas_.front(), thetas_.back());
    std::size_t it = static_cast<std::size_t>(
                         std::upper_bound(thetas_.begin(), thetas_.end(), theta_c) -
                         thetas_.begin());
    it = std::min(std::max<std::size_t>(it, 1), thetas_.size() - 1) - 1;
    const double span_t = thetas_[it + 1] - thetas_[it];
    const double st = span_t > 0.0 ? (theta_c - thetas_[it]) / span_t : 0.0;

    const double v00 = values_[it][ip], v01 = values_[it][ip1];
    const double v10 = values_[it + 1][ip], v11 = values_[it + 1][ip1];
    return (1.0 - st) * ((1.0 - sp) * v00 + sp * v01) +
           st * ((1.0 - sp) * v10 + sp * v11);
  }

  double at_point(const Vec3& y) const {
    const double theta = std::acos(std::clamp(y[2], -1.0, 1.0));
    const double phi = std::atan2(y[1], y[0]);
    return (*this)(theta, phi);
  }

 private:
  std::vector<double> thetas_, phis_;
  std::vector<std::vector<double>> values_;
};

inline BoundaryData boundary_from_csv(const std::string& path, Symmetry tag, double h = 0.0) {
  auto table = std::make_shared<TabulatedSphereFunction>(TabulatedSphereFunction::from_csv(path));
  BoundaryData b;
  b.kind = BoundaryData::Kind::tabulated;
  b.tag = tag;
  b.h = h;
  b.name = path;
  b.eval = [table](const Vec3& y) { return table->at_point(y); };
  return b;
}

}  // namespace backus
