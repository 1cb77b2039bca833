#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace locksim::forecast {

// One observation of the technology series: capability (calculations per
// second per US$1000) at a point in time (seconds since the Unix epoch, UTC).
struct TimePoint {
    double t = 0.0;
    double v = 0.0;
};

// Timestamps strictly increasing, all values positive. Fitting needs at
// least three distinct timestamps.
struct TimeSeries {
    std::vector<TimePoint> points;
};

// Bell curve v(t) = amplitude * exp(-(t - mean)^2 / (2 sigma^2)).
struct GaussianCurve {
    double amplitude = 1.0; // curve value at the peak, > 0
    double mean = 0.0;      // peak time, seconds since epoch
    double sigma = 1.0;     // seconds, > 0
};

class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The log-space quadratic came out flat or convex: the data does not bend
// down, so no peak can be located (pure exponential growth lands here).
class InsufficientCurvature : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Concavity threshold on the fitted quadratic coefficient, per second^2.
// Curvature shallower than this is indistinguishable from log-linear data
// at century timescales.
inline constexpr double kCurvatureEpsilon = 1e-18;

double gaussian_eval(const GaussianCurve& curve, double t);

// Least-squares quadratic regression of ln(v) on t. Timestamps are centered
// and rescaled internally for conditioning; the returned parameters are in
// absolute time. Throws DegenerateInput (< 3 distinct timestamps or
// non-positive values) or InsufficientCurvature (quadratic coefficient
// >= -curvature_epsilon).
GaussianCurve fit_gaussian(const TimeSeries& series, double curvature_epsilon = kCurvatureEpsilon);

double peak_time(const GaussianCurve& curve);

// Rescales the amplitude so the curve integrates to one; mean and sigma are
// untouched.
GaussianCurve normalize_curve(const GaussianCurve& curve);

// CSV with header "timestamp,value", ISO-8601 UTC timestamps.
TimeSeries parse_csv(std::istream& in);
TimeSeries load_csv(const std::string& path);

// {"amplitude":..., "mean":"ISO-8601", "sigma_seconds":...}
std::string curve_to_json(const GaussianCurve& curve);

} // namespace locksim::forecast
