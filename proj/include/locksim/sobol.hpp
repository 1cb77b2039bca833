#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace locksim::sobol {

class DimensionUnsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Low-discrepancy sequence over [0,1)^d built from the classic binary
// direction-number recurrence with Gray-code ordering. The bundled
// direction-number table covers dimensions 1..12 (dimension 1 is the van
// der Corput sequence; the primitive polynomials are listed in sobol.cpp).
// The origin is skipped: the first emitted point has index 1 and equals
// (0.5, ..., 0.5). Two samplers with the same dimension emit identical
// streams.
class SobolSampler {
public:
    static constexpr int kMaxDimension = 12;
    static constexpr int kBits = 32;

    explicit SobolSampler(int dimension);

    int dimension() const { return dimension_; }
    // Count of points emitted so far; the next point has index() + 1.
    std::uint64_t index() const { return count_; }

    std::vector<double> next();

private:
    int dimension_;
    std::uint64_t count_ = 0;
    std::vector<std::array<std::uint32_t, kBits>> directions_; // per dimension
    std::vector<std::uint32_t> state_;
};

// The next n points of the sequence.
std::vector<std::vector<double>> sobol_points(SobolSampler& sampler, std::uint64_t n);

} // namespace locksim::sobol
