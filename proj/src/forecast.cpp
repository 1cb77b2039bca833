#include "locksim/forecast.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "locksim/timeutil.hpp"

namespace locksim::forecast {

namespace {

void check_curve(const GaussianCurve& c) {
    if (!(c.amplitude > 0.0) || !(c.sigma > 0.0) || !std::isfinite(c.mean))
        throw DegenerateInput("invalid Gaussian curve parameters");
}

// Solves the symmetric 3x3 system M x = r by Gaussian elimination with
// partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> r) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        std::swap(m[col], m[pivot]);
        std::swap(r[col], r[pivot]);
        if (m[col][col] == 0.0) throw DegenerateInput("singular normal equations");
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[row][col] / m[col][col];
            for (int k = col; k < 3; ++k) m[row][k] -= f * m[col][k];
            r[row] -= f * r[col];
        }
    }
    std::array<double, 3> x{};
    for (int row = 2; row >= 0; --row) {
        double acc = r[row];
        for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * x[k];
        x[row] = acc / m[row][row];
    }
    return x;
}

} // namespace

double gaussian_eval(const GaussianCurve& curve, double t) {
    check_curve(curve);
    const double z = (t - curve.mean) / curve.sigma;
    return curve.amplitude * std::exp(-0.5 * z * z);
}

GaussianCurve fit_gaussian(const TimeSeries& series, double curvature_epsilon) {
    std::set<double> distinct;
    for (const auto& p : series.points) {
        if (!std::isfinite(p.t)) throw DegenerateInput("non-finite timestamp");
        if (!(p.v > 0.0)) throw DegenerateInput("values must be strictly positive");
        distinct.insert(p.t);
    }
    if (distinct.size() < 3) throw DegenerateInput("need at least 3 distinct timestamps");

    const auto n = static_cast<double>(series.points.size());
    double mean_t = 0.0;
    for (const auto& p : series.points) mean_t += p.t;
    mean_t /= n;

    double var_t = 0.0;
    for (const auto& p : series.points) var_t += (p.t - mean_t) * (p.t - mean_t);
    const double scale = std::sqrt(var_t / n);

    // Regression of y = ln(v) on u = (t - mean_t)/scale: y = c0 + c1 u + c2 u^2.
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (const auto& p : series.points) {
        const double u = (p.t - mean_t) / scale;
        const double u2 = u * u;
        const double y = std::log(p.v);
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        t0 += y;
        t1 += u * y;
        t2 += u2 * y;
    }
    const auto c = solve3({{{n, s1, s2}, {s1, s2, s3}, {s2, s3, s4}}}, {t0, t1, t2});

    const double quad = c[2] / (scale * scale); // per second^2
    if (quad >= -curvature_epsilon)
        throw InsufficientCurvature("log-space fit is not concave enough to locate a peak");

    GaussianCurve out;
    out.mean = mean_t - c[1] * scale / (2.0 * c[2]);
    out.sigma = scale * std::sqrt(-1.0 / (2.0 * c[2]));
    out.amplitude = std::exp(c[0] - c[1] * c[1] / (4.0 * c[2]));
    return out;
}

double peak_time(const GaussianCurve& curve) {
    check_curve(curve);
    return curve.mean;
}

GaussianCurve normalize_curve(const GaussianCurve& curve) {
    check_curve(curve);
    GaussianCurve out = curve;
    out.amplitude = 1.0 / (curve.sigma * std::sqrt(2.0 * M_PI));
    return out;
}

TimeSeries parse_csv(std::istream& in) {
    TimeSeries series;
    std::string line;
    if (!std::getline(in, line)) throw DegenerateInput("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,value")
        throw DegenerateInput("expected CSV header 'timestamp,value', got '" + line + "'");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DegenerateInput("CSV line " + std::to_string(lineno) + ": missing comma");
        TimePoint p;
        p.t = timeutil::parse_iso8601(line.substr(0, comma));
        std::size_t used = 0;
        const std::string value = line.substr(comma + 1);
        p.v = std::stod(value, &used);
        if (used != value.size())
            throw DegenerateInput("CSV line " + std::to_string(lineno) + ": bad value '" + value + "'");
        if (!(p.v > 0.0))
            throw DegenerateInput("CSV line " + std::to_string(lineno) + ": value must be positive");
        if (!series.points.empty() && p.t <= series.points.back().t)
            throw DegenerateInput("CSV line " + std::to_string(lineno) + ": timestamps must be strictly increasing");
        series.points.push_back(p);
    }
    return series;
}

TimeSeries load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DegenerateInput("cannot open CSV file: " + path);
    return parse_csv(in);
}

std::string curve_to_json(const GaussianCurve& curve) {
    nlohmann::json j;
    j["amplitude"] = curve.amplitude;
    j["mean"] = timeutil::format_iso8601_utc(curve.mean);
    j["sigma_seconds"] = curve.sigma;
    return j.dump();
}

} // namespace locksim::forecast
