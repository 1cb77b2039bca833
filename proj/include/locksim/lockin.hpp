#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "locksim/forecast.hpp"

namespace locksim::lockin {

enum class Mode { MeanField, Agent };

Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

// Per-tick content production relative to the simulation start. Either
// constant or proportional to a bell curve evaluated at tick time (the
// post-peak decline is what forces windows to expand).
struct ProductionCurve {
    std::optional<forecast::GaussianCurve> curve; // nullopt => constant

    double value_at(double t) const;
};

class Unachievable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LockinConfig {
    double total_power_mw = 23.0;
    double attacker_power_mw = 0.0;
    double tick_hours = 3.0;
    int window_ticks = 1;            // base spell-checker window, in ticks
    double min_window_tokens = 0.0;  // windows expand until they hold this many tokens
    double words_per_tick_per_mw = 1e6;
    double target_frequency = 1.18082e-4; // target-word share of chatbot output
    int words_per_sentence = 11;          // filler words around each injected target
    double adoption_noise = 0.01;         // epsilon in [0, 0.5)
    ProductionCurve production;
    // Tick 1 is written at start_time; defaults to the production curve's
    // peak (so a bare Gaussian config starts exactly at the peak), else 0.
    std::optional<double> start_time;
    // Ticks during which the attacker injects; nullopt = the whole run.
    std::optional<long> attack_duration_ticks;
    std::uint64_t seed = 0;
    Mode mode = Mode::MeanField;
    std::string target_variant = "colour";
    std::string incumbent_variant = "color";

    double resolved_start_time() const;
    void validate() const; // throws std::invalid_argument
};

// One tick of the recorded trace. `convention_is_target` is the convention
// after this tick's retrain (it governs the next tick's text).
struct TickStats {
    long tick = 0;
    bool convention_is_target = false;
    double target_count = 0; // target-variant occurrences written this tick
    double other_count = 0;  // incumbent-variant occurrences this tick
    double tokens = 0;       // all words produced this tick
    double share = 0;        // target_count / (target_count + other_count)
    int effective_window = 0;
};

struct LockinTrace {
    std::vector<TickStats> ticks;
    // First tick from which the convention equals the target variant for
    // the rest of the horizon.
    std::optional<long> lockin_tick;
    // The convention flipped to the target at some point but later reverted.
    bool reversed = false;
};

// n template sentences flattened to one token stream; each sentence carries
// exactly one occurrence of `target` among filler words whose count
// averages words_per_sentence. Byte-identical for equal seeds.
std::vector<std::string> generate_injection(long n, const std::string& target,
                                            int words_per_sentence, std::uint64_t seed);

// Deterministic tick-by-tick simulation. Chatbots spend
// (total - attacker) power on text at the current convention (flipped with
// probability adoption_noise); the attacker spends its share on injected
// sentences that always spell the target variant. Each tick the
// spell-checker retrains on a window of recent ticks, expanded until it
// holds min_window_tokens.
class Simulation {
public:
    explicit Simulation(LockinConfig config);

    const LockinConfig& config() const { return config_; }
    long tick() const { return tick_; }
    bool convention_is_target() const { return convention_is_target_; }
    std::string convention() const;
    const std::vector<TickStats>& history() const { return history_; }

    const TickStats& step();

private:
    LockinConfig config_;
    long tick_ = 0;
    bool convention_is_target_ = false;
    std::vector<TickStats> history_;
    std::mt19937_64 rng_;
};

LockinTrace run(const LockinConfig& config, long ticks);

// Trace-free variant of run(): did the convention lock onto the target?
bool lockin_achieved(const LockinConfig& config, long ticks);

// Minimal attacker power achieving lock-in within `ticks`, located by
// bisection over [0, total_power] to within tolerance_mw. Mean-field mode
// only (the achieved/not-achieved predicate is monotone there). Throws
// Unachievable when full power fails, ModeError in agent mode.
double required_power(const LockinConfig& config, long ticks, double tolerance_mw);

std::string trace_to_csv(const LockinTrace& trace, const LockinConfig& config);
std::string trace_to_json(const LockinTrace& trace, const LockinConfig& config);

} // namespace locksim::lockin
