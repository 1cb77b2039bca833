#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "locksim/sobol.hpp"

namespace locksim::bbcp {

// Black: unfiltered, Blue: recycling, Green: garden waste.
enum class BinColour : std::uint8_t { Black, Blue, Green };

char colour_char(BinColour c);                    // 'K' / 'B' / 'G'
BinColour colour_from_string(const std::string&); // "black" | "blue" | "green"
std::string to_string(BinColour c);

struct Household {
    BinColour colour = BinColour::Black;
    bool upstanding = false;
    bool leafleted = false;
};

// Households plus their neighbour graph. Grid villages use 4-neighbour
// adjacency (non-periodic by default); arbitrary graphs are supported via
// the adjacency constructor. Snapshots are immutable between steps.
class Village {
public:
    static Village grid(int rows, int cols, BinColour official, BinColour attacker,
                        bool periodic = false);
    static Village from_adjacency(std::vector<std::vector<int>> adjacency, BinColour official,
                                  BinColour attacker);

    int size() const { return static_cast<int>(homes_.size()); }
    bool is_grid() const { return rows_ > 0; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Household& home(int i) const { return homes_.at(i); }
    Household& home(int i) { return homes_.at(i); }
    const std::vector<int>& neighbours(int i) const { return adjacency_.at(i); }

    BinColour official_colour() const { return official_; }
    BinColour attacker_colour() const { return attacker_; }
    std::uint64_t round() const { return round_; }

    void set_colour_all(BinColour c);
    // Marks floor(fraction * size) uniformly chosen households as upstanding.
    void place_upstanding(double fraction, std::uint64_t seed);
    void set_upstanding(int i, bool flag) { homes_.at(i).upstanding = flag; }

    // One raster row per grid row, cells comma-separated as K/B/G.
    std::string raster_csv() const;

    friend void leaflet(Village&, int, sobol::SobolSampler&);
    friend void wheel_out_step_ordered(Village&, double, std::uint64_t, std::span<const int>);
    friend void wheel_out_step_async(Village&, double, std::uint64_t);

private:
    std::vector<Household> homes_;
    std::vector<std::vector<int>> adjacency_;
    int rows_ = 0, cols_ = 0;
    BinColour official_ = BinColour::Green;
    BinColour attacker_ = BinColour::Blue;
    std::uint64_t round_ = 0;
};

// Marks `count` distinct households via consecutive sampler points, floor
// scaled onto the grid (x -> column, y -> row); duplicate hits advance to
// the next point. Non-grid villages use the first coordinate scaled over
// the household index range.
void leaflet(Village& village, int count, sobol::SobolSampler& sampler);

// Synchronous round: upstanding households show the official colour;
// freshly leafleted households switch to the attacker colour with
// probability `compliance`, otherwise (like everyone else) they copy a
// uniformly chosen neighbour's previous-round colour. Isolated households
// keep their colour. Leaflet flags clear at the end of the round. All
// randomness is keyed on (seed, round, household), so the result does not
// depend on iteration order.
void wheel_out_step(Village& village, double compliance, std::uint64_t seed);

// Same update evaluated in an explicit household order; the result is
// identical for every permutation (reads target the previous snapshot).
void wheel_out_step_ordered(Village& village, double compliance, std::uint64_t seed,
                            std::span<const int> order);

// Optional asynchronous mode: random household order with immediately
// visible updates. Breaks order-independence; not used by default.
void wheel_out_step_async(Village& village, double compliance, std::uint64_t seed);

// Number of households whose displayed colour differs from the official
// collection colour.
int mischief_score(const Village& village);

} // namespace locksim::bbcp
