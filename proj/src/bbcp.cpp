#include "locksim/bbcp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace locksim::bbcp {

char colour_char(BinColour c) {
    switch (c) {
        case BinColour::Black: return 'K';
        case BinColour::Blue: return 'B';
        case BinColour::Green: return 'G';
    }
    return '?';
}

BinColour colour_from_string(const std::string& name) {
    if (name == "black" || name == "K") return BinColour::Black;
    if (name == "blue" || name == "B") return BinColour::Blue;
    if (name == "green" || name == "G") return BinColour::Green;
    throw std::invalid_argument("unknown bin colour '" + name + "'");
}

std::string to_string(BinColour c) {
    switch (c) {
        case BinColour::Black: return "black";
        case BinColour::Blue: return "blue";
        case BinColour::Green: return "green";
    }
    return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0,1) keyed on (seed, round, household, stream); the
// same key always yields the same draw, independent of evaluation order.
double keyed_u01(std::uint64_t seed, std::uint64_t round, std::uint64_t household,
                 std::uint64_t stream) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(round));
    h = splitmix64(h ^ splitmix64(household));
    h = splitmix64(h ^ stream);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace

Village Village::grid(int rows, int cols, BinColour official, BinColour attacker, bool periodic) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be positive");
    Village v;
    v.rows_ = rows;
    v.cols_ = cols;
    v.official_ = official;
    v.attacker_ = attacker;
    v.homes_.assign(static_cast<std::size_t>(rows) * cols, Household{official, false, false});
    v.adjacency_.resize(v.homes_.size());
    const auto at = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            auto& adj = v.adjacency_[at(r, c)];
            if (periodic) {
                if (rows > 1) {
                    adj.push_back(at((r + rows - 1) % rows, c));
                    adj.push_back(at((r + 1) % rows, c));
                }
                if (cols > 1) {
                    adj.push_back(at(r, (c + cols - 1) % cols));
                    adj.push_back(at(r, (c + 1) % cols));
                }
            } else {
                if (r > 0) adj.push_back(at(r - 1, c));
                if (r + 1 < rows) adj.push_back(at(r + 1, c));
                if (c > 0) adj.push_back(at(r, c - 1));
                if (c + 1 < cols) adj.push_back(at(r, c + 1));
            }
        }
    }
    return v;
}

Village Village::from_adjacency(std::vector<std::vector<int>> adjacency, BinColour official,
                                BinColour attacker) {
    Village v;
    v.official_ = official;
    v.attacker_ = attacker;
    v.homes_.assign(adjacency.size(), Household{official, false, false});
    const int n = static_cast<int>(adjacency.size());
    for (const auto& adj : adjacency)
        for (int j : adj)
            if (j < 0 || j >= n) throw std::invalid_argument("adjacency index out of range");
    v.adjacency_ = std::move(adjacency);
    return v;
}

void Village::set_colour_all(BinColour c) {
    for (auto& h : homes_) h.colour = c;
}

void Village::place_upstanding(double fraction, std::uint64_t seed) {
    if (fraction < 0 || fraction > 1) throw std::invalid_argument("fraction must be in [0,1]");
    const int want = static_cast<int>(std::floor(fraction * size()));
    std::vector<int> order(size());
    std::iota(order.begin(), order.end(), 0);
    // Seeded Fisher-Yates; first `want` entries become upstanding.
    for (int i = size() - 1; i > 0; --i) {
        const auto j = static_cast<int>(keyed_u01(seed, 0, i, 0xABCDULL) * (i + 1));
        std::swap(order[i], order[std::min(j, i)]);
    }
    for (int k = 0; k < want; ++k) homes_[order[k]].upstanding = true;
}

std::string Village::raster_csv() const {
    if (!is_grid()) throw std::logic_error("raster output requires a grid village");
    std::string out;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            if (c) out.push_back(',');
            out.push_back(colour_char(homes_[r * cols_ + c].colour));
        }
        out.push_back('\n');
    }
    return out;
}

void leaflet(Village& village, int count, sobol::SobolSampler& sampler) {
    if (count < 0 || count > village.size())
        throw std::invalid_argument("leaflet count exceeds household count");
    int marked = 0;
    while (marked < count) {
        const auto point = sampler.next();
        int idx;
        if (village.is_grid()) {
            const int col = std::min(static_cast<int>(point[0] * village.cols()), village.cols() - 1);
            const int row = point.size() > 1
                                ? std::min(static_cast<int>(point[1] * village.rows()), village.rows() - 1)
                                : 0;
            idx = row * village.cols() + col;
        } else {
            idx = std::min(static_cast<int>(point[0] * village.size()), village.size() - 1);
        }
        if (!village.homes_[idx].leafleted) {
            village.homes_[idx].leafleted = true;
            ++marked;
        }
    }
}

namespace {

BinColour next_colour(const Village& village, const std::vector<BinColour>& previous, int i,
                      double compliance, std::uint64_t seed) {
    const Household& h = village.home(i);
    if (h.upstanding) return village.official_colour();
    if (h.leafleted && keyed_u01(seed, village.round(), i, 0) < compliance)
        return village.attacker_colour();
    const auto& adj = village.neighbours(i);
    if (adj.empty()) return previous[i];
    const auto pick = static_cast<std::size_t>(keyed_u01(seed, village.round(), i, 1) * adj.size());
    return previous[adj[std::min(pick, adj.size() - 1)]];
}

} // namespace

void wheel_out_step_ordered(Village& village, double compliance, std::uint64_t seed,
                            std::span<const int> order) {
    if (compliance < 0 || compliance > 1) throw std::invalid_argument("compliance must be in [0,1]");
    std::vector<BinColour> previous(village.size());
    for (int i = 0; i < village.size(); ++i) previous[i] = village.homes_[i].colour;
    for (int i : order)
        village.homes_.at(i).colour = next_colour(village, previous, i, compliance, seed);
    for (auto& h : village.homes_) h.leafleted = false;
    ++village.round_;
}

void wheel_out_step(Village& village, double compliance, std::uint64_t seed) {
    std::vector<int> order(village.size());
    std::iota(order.begin(), order.end(), 0);
    wheel_out_step_ordered(village, compliance, seed, order);
}

void wheel_out_step_async(Village& village, double compliance, std::uint64_t seed) {
    if (compliance < 0 || compliance > 1) throw std::invalid_argument("compliance must be in [0,1]");
    std::vector<int> order(village.size());
    std::iota(order.begin(), order.end(), 0);
    for (int i = village.size() - 1; i > 0; --i) {
        const auto j =
            static_cast<int>(keyed_u01(seed, village.round_, i, 0x5EEDULL) * (i + 1));
        std::swap(order[i], order[std::min(j, i)]);
    }
    // Immediate visibility: each household reads current colours, so later
    // updates see earlier ones within the same round.
    std::vector<BinColour> current(village.size());
    for (int k = 0; k < village.size(); ++k) current[k] = village.homes_[k].colour;
    for (int i : order) {
        current[i] = next_colour(village, current, i, compliance, seed);
        village.homes_[i].colour = current[i];
    }
    for (auto& h : village.homes_) h.leafleted = false;
    ++village.round_;
}

int mischief_score(const Village& village) {
    int score = 0;
    for (int i = 0; i < village.size(); ++i)
        if (village.home(i).colour != village.official_colour()) ++score;
    return score;
}

} // namespace locksim::bbcp
