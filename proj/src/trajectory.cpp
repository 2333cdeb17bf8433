#include "secres/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace secres {

std::string to_string(TrajectorySource s) {
  switch (s) {
    case TrajectorySource::analytic_order1: return "analytic-order1";
    case TrajectorySource::analytic_order2: return "analytic-order2";
    case TrajectorySource::numeric: return "numeric";
  }
  return "unknown";
}

void SecularTrajectory::push(double time, double ecc1, double ecc2, double dpomega_wrapped) {
  t.push_back(time);
  e1.push_back(ecc1);
  e2.push_back(ecc2);
  double a = dpomega_wrapped;
  if (!dpomega.empty()) {
    const double prev = dpomega.back();
    a += 2.0 * std::numbers::pi * std::round((prev - a) / (2.0 * std::numbers::pi));
  }
  dpomega.push_back(a);
}

std::vector<double> unwrap(const std::vector<double>& angles) {
  std::vector<double> out;
  out.reserve(angles.size());
  for (double a : angles) {
    if (!out.empty()) a += 2.0 * std::numbers::pi * std::round((out.back() - a) / (2.0 * std::numbers::pi));
    out.push_back(a);
  }
  return out;
}

std::vector<double> uniform_grid(double t_end, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[i] = t_end * i / (samples - 1);
  return t;
}

void write_csv(std::ostream& out, const SecularTrajectory& tr) {
  out << "t_yr,e1,e2,dpomega_rad,source\n";
  const std::string tag = to_string(tr.source);
  char buf[128];
  for (std::size_t i = 0; i < tr.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,", tr.t[i], tr.e1[i], tr.e2[i], tr.dpomega[i]);
    out << buf << tag << '\n';
  }
}

void write_csv(const std::string& path, const SecularTrajectory& tr) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_csv(f, tr);
  if (!f) throw std::runtime_error("write failed: " + path);
}

double crossing_period(const std::vector<double>& t, const std::vector<double>& x) {
  if (x.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  // Hysteresis band so that residual short-period wiggles near the mean are not counted.
  const double band = 0.1 * (*hi - *lo);
  std::vector<double> up;
  bool armed = false;
  double last_cross = 0.0;
  bool have_cross = false;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double a = x[i - 1] - mean, b = x[i] - mean;
    if (b < -band) armed = true;
    if (a < 0.0 && b >= 0.0) {
      last_cross = t[i - 1] + (t[i] - t[i - 1]) * a / (a - b);
      have_cross = true;
    }
    if (armed && have_cross && b > band) {
      up.push_back(last_cross);
      armed = false;
      have_cross = false;
    }
    if (b < 0.0) have_cross = false;
  }
  if (up.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return (up.back() - up.front()) / (up.size() - 1);
}

std::vector<double> running_mean(const std::vector<double>& t, const std::vector<double>& x, double window) {
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(n);
  const double h = 0.5 * window;
  for (std::size_t i = 0; i < n; ++i) {
    // Symmetric window, shrunk near the ends so it stays centered.
    const double half = std::min({h, t[i] - t.front(), t.back() - t[i]});
    const auto lo = std::lower_bound(t.begin(), t.end(), t[i] - half) - t.begin();
    const auto hi = std::upper_bound(t.begin(), t.end(), t[i] + half) - t.begin();
    out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

SecularTrajectory smoothed(const SecularTrajectory& tr, double window) {
  SecularTrajectory s = tr;
  s.e1 = running_mean(tr.t, tr.e1, window);
  s.e2 = running_mean(tr.t, tr.e2, window);
  s.dpomega = running_mean(tr.t, tr.dpomega, window);
  return s;
}

std::vector<double> resample(const std::vector<double>& t, const std::vector<double>& x,
                             const std::vector<double>& at) {
  if (t.empty()) throw std::invalid_argument("empty series");
  std::vector<double> out;
  out.reserve(at.size());
  for (double s : at) {
    if (s <= t.front()) {
      out.push_back(x.front());
      continue;
    }
    if (s >= t.back()) {
      out.push_back(x.back());
      continue;
    }
    const auto k = std::upper_bound(t.begin(), t.end(), s) - t.begin();
    const double w = (s - t[k - 1]) / (t[k] - t[k - 1]);
    out.push_back((1.0 - w) * x[k - 1] + w * x[k]);
  }
  return out;
}

double linear_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  const double mt = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - mt) * (y[i] - my);
    sxx += (t[i] - mt) * (t[i] - mt);
  }
  return sxy / sxx;
}

}  // namespace secres
