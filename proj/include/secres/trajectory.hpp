#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secres {

enum class TrajectorySource { analytic_order1, analytic_order2, numeric };

std::string to_string(TrajectorySource s);

struct SecularTrajectory {
  std::vector<double> t;        // yr
  std::vector<double> e1, e2;
  std::vector<double> dpomega;  // rad, unwrapped
  TrajectorySource source = TrajectorySource::numeric;

  std::size_t size() const { return t.size(); }
  void push(double time, double ecc1, double ecc2, double dpomega_wrapped);
};

// Nearest-branch continuation of an angle sequence.
std::vector<double> unwrap(const std::vector<double>& angles);

std::vector<double> uniform_grid(double t_end, int samples);

// Columns t_yr,e1,e2,dpomega_rad,source with %.17g.
void write_csv(std::ostream& out, const SecularTrajectory& tr);
void write_csv(const std::string& path, const SecularTrajectory& tr);

// Mean spacing of upward zero crossings of (x - mean x), with a hysteresis band of 10%
// of the range. NaN with fewer than two crossings.
double crossing_period(const std::vector<double>& t, const std::vector<double>& x);
inline double e1_period(const SecularTrajectory& tr) { return crossing_period(tr.t, tr.e1); }

// Centered moving average over a window of the given length in time; the ends use a shrunk window.
std::vector<double> running_mean(const std::vector<double>& t, const std::vector<double>& x, double window);
SecularTrajectory smoothed(const SecularTrajectory& tr, double window);

// Linear interpolation of a trajectory component onto new times (clamped at the ends).
std::vector<double> resample(const std::vector<double>& t, const std::vector<double>& x,
                             const std::vector<double>& at);

// Least-squares slope of y against t.
double linear_slope(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace secres
