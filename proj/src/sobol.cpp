#include "locksim/sobol.hpp"

#include <bit>

namespace locksim::sobol {

namespace {

// Joe-Kuo direction-number parameters ("new-joe-kuo-6" set). For each
// dimension beyond the first: the degree s and inner coefficients a of a
// primitive polynomial x^s + a_1 x^(s-1) + ... + a_(s-1) x + 1 over GF(2),
// plus the first s odd initial values m_1..m_s.
//
//   dim  2: x + 1
//   dim  3: x^2 + x + 1
//   dim  4: x^3 + x + 1
//   dim  5: x^3 + x^2 + 1
//   dim  6: x^4 + x + 1
//   dim  7: x^4 + x^3 + 1
//   dim  8: x^5 + x^2 + 1
//   dim  9: x^5 + x^3 + 1
//   dim 10: x^5 + x^3 + x^2 + x + 1
//   dim 11: x^5 + x^4 + x^2 + x + 1
//   dim 12: x^5 + x^4 + x^3 + x + 1
struct Polynomial {
    int degree;
    std::uint32_t coeffs;
    std::array<std::uint32_t, 5> m;
};

constexpr Polynomial kTable[] = {
    {1, 0, {1, 0, 0, 0, 0}},   {2, 1, {1, 3, 0, 0, 0}},   {3, 1, {1, 3, 1, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0}},   {4, 1, {1, 1, 3, 3, 0}},   {4, 4, {1, 3, 5, 13, 0}},
    {5, 2, {1, 1, 5, 5, 17}},  {5, 4, {1, 1, 5, 5, 5}},   {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},  {5, 13, {1, 1, 1, 3, 11}},
};

std::array<std::uint32_t, SobolSampler::kBits> direction_numbers(int dim) {
    std::array<std::uint32_t, SobolSampler::kBits> v{};
    std::array<std::uint32_t, SobolSampler::kBits> m{};
    if (dim == 1) {
        m.fill(1);
    } else {
        const Polynomial& poly = kTable[dim - 2];
        const int s = poly.degree;
        for (int k = 0; k < s; ++k) m[k] = poly.m[k];
        for (int k = s; k < SobolSampler::kBits; ++k) {
            std::uint32_t value = (m[k - s] << s) ^ m[k - s];
            for (int t = 1; t < s; ++t)
                if (poly.coeffs & (1u << (s - 1 - t))) value ^= m[k - t] << t;
            m[k] = value;
        }
    }
    for (int k = 0; k < SobolSampler::kBits; ++k)
        v[k] = m[k] << (SobolSampler::kBits - 1 - k);
    return v;
}

} // namespace

SobolSampler::SobolSampler(int dimension) : dimension_(dimension) {
    if (dimension < 1 || dimension > kMaxDimension)
        throw DimensionUnsupported("Sobol dimension " + std::to_string(dimension) +
                                   " outside supported range 1.." + std::to_string(kMaxDimension));
    directions_.reserve(dimension);
    for (int d = 1; d <= dimension; ++d) directions_.push_back(direction_numbers(d));
    state_.assign(dimension, 0);
}

std::vector<double> SobolSampler::next() {
    // Gray-code step: flip the direction number indexed by the lowest zero
    // bit of the running counter.
    const int c = std::countr_one(static_cast<std::uint32_t>(count_));
    if (c >= kBits) throw std::overflow_error("Sobol sequence exhausted");
    ++count_;
    std::vector<double> point(dimension_);
    constexpr double kScale = 1.0 / 4294967296.0; // 2^-32
    for (int d = 0; d < dimension_; ++d) {
        state_[d] ^= directions_[d][c];
        point[d] = state_[d] * kScale;
    }
    return point;
}

std::vector<std::vector<double>> sobol_points(SobolSampler& sampler, std::uint64_t n) {
    std::vector<std::vector<double>> points;
    points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) points.push_back(sampler.next());
    return points;
}

} // namespace locksim::sobol
