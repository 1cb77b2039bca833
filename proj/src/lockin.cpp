#include "locksim/lockin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace locksim::lockin {

Mode mode_from_string(const std::string& name) {
    if (name == "mean-field") return Mode::MeanField;
    if (name == "agent") return Mode::Agent;
    throw std::invalid_argument("unknown mode '" + name + "' (expected mean-field|agent)");
}

std::string to_string(Mode mode) {
    return mode == Mode::MeanField ? "mean-field" : "agent";
}

double ProductionCurve::value_at(double t) const {
    if (!curve) return 1.0;
    return forecast::gaussian_eval(*curve, t);
}

double LockinConfig::resolved_start_time() const {
    if (start_time) return *start_time;
    return production.curve ? production.curve->mean : 0.0;
}

void LockinConfig::validate() const {
    if (!(total_power_mw >= 0)) throw std::invalid_argument("total_power_mw must be nonnegative");
    if (attacker_power_mw < 0 || attacker_power_mw > total_power_mw)
        throw std::invalid_argument("attacker_power_mw must lie in [0, total_power_mw]");
    if (!(tick_hours > 0)) throw std::invalid_argument("tick_hours must be positive");
    if (window_ticks < 1) throw std::invalid_argument("window_ticks must be at least 1");
    if (min_window_tokens < 0) throw std::invalid_argument("min_window_tokens must be nonnegative");
    if (!(words_per_tick_per_mw > 0))
        throw std::invalid_argument("words_per_tick_per_mw must be positive");
    if (target_frequency < 0 || target_frequency > 1)
        throw std::invalid_argument("target_frequency must lie in [0,1]");
    if (words_per_sentence < 1) throw std::invalid_argument("words_per_sentence must be at least 1");
    if (adoption_noise < 0 || adoption_noise >= 0.5)
        throw std::invalid_argument("adoption_noise must lie in [0, 0.5)");
    if (attack_duration_ticks && *attack_duration_ticks < 0)
        throw std::invalid_argument("attack_duration_ticks must be nonnegative");
    if (production.curve &&
        (!(production.curve->amplitude > 0) || !(production.curve->sigma > 0) ||
         !std::isfinite(production.curve->mean)))
        throw std::invalid_argument("production curve parameters are invalid");
    if (start_time && !std::isfinite(*start_time))
        throw std::invalid_argument("start_time must be finite");
    if (target_variant.empty() || incumbent_variant.empty() || target_variant == incumbent_variant)
        throw std::invalid_argument("target and incumbent variants must be distinct and nonempty");
}

std::vector<std::string> generate_injection(long n, const std::string& target,
                                            int words_per_sentence, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sentence count must be nonnegative");
    if (words_per_sentence < 1) throw std::invalid_argument("words_per_sentence must be at least 1");
    static const std::array<std::string, 24> kFiller = {
        "the",    "a",       "quite",   "rather",  "lovely",     "proper",
        "tea",    "kettle",  "queue",   "biscuit", "weather",    "garden",
        "scone",  "jumper",  "postbox", "drizzle", "wellies",    "brolly",
        "vicar",  "bunting", "crumpet", "hedge",   "roundabout", "allotment",
    };
    // Sentence lengths cycle wps, wps-1, wps+1, so every prefix mean stays
    // within half a word of words_per_sentence.
    static constexpr int kLengthCycle[3] = {0, -1, 1};

    std::mt19937_64 rng(seed);
    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(n) * (words_per_sentence + 1));
    for (long s = 0; s < n; ++s) {
        const int fillers = std::max(0, words_per_sentence + kLengthCycle[s % 3]);
        const auto target_pos = static_cast<int>(rng() % static_cast<std::uint64_t>(fillers + 1));
        for (int k = 0; k <= fillers; ++k) {
            if (k == target_pos)
                tokens.push_back(target);
            else
                tokens.push_back(kFiller[rng() % kFiller.size()]);
        }
    }
    return tokens;
}

Simulation::Simulation(LockinConfig config) : config_(std::move(config)), rng_(config_.seed) {
    config_.validate();
}

std::string Simulation::convention() const {
    return convention_is_target_ ? config_.target_variant : config_.incumbent_variant;
}

const TickStats& Simulation::step() {
    ++tick_;
    const double t0 = config_.resolved_start_time();
    const double t = t0 + static_cast<double>(tick_ - 1) * config_.tick_hours * 3600.0;
    const double phi = config_.production.value_at(t) / config_.production.value_at(t0);
    const bool attack_active =
        !config_.attack_duration_ticks || tick_ <= *config_.attack_duration_ticks;
    const double attacker_mw = attack_active ? config_.attacker_power_mw : 0.0;

    // Production declines with the technology curve; the attacker's
    // injection budget is its raw power share.
    const double bot_words =
        (config_.total_power_mw - attacker_mw) * config_.words_per_tick_per_mw * phi;
    const double attacker_words = attacker_mw * config_.words_per_tick_per_mw;

    double bot_targets = bot_words * config_.target_frequency;
    // One target occurrence rides along words_per_sentence filler words.
    double attacker_targets = attacker_words / (config_.words_per_sentence + 1.0);

    double conv_count, flipped_count;
    if (config_.mode == Mode::MeanField) {
        conv_count = bot_targets * (1.0 - config_.adoption_noise);
        flipped_count = bot_targets * config_.adoption_noise;
    } else {
        const auto occurrences = std::llround(bot_targets);
        attacker_targets = static_cast<double>(std::llround(attacker_targets));
        long long flips = 0;
        if (occurrences > 0 && config_.adoption_noise > 0.0) {
            std::binomial_distribution<long long> dist(occurrences, config_.adoption_noise);
            flips = dist(rng_);
        }
        conv_count = static_cast<double>(occurrences - flips);
        flipped_count = static_cast<double>(flips);
    }

    TickStats stats;
    stats.tick = tick_;
    stats.tokens = bot_words + attacker_words;
    if (convention_is_target_) {
        stats.target_count = conv_count + attacker_targets;
        stats.other_count = flipped_count;
    } else {
        stats.target_count = flipped_count + attacker_targets;
        stats.other_count = conv_count;
    }
    const double total_targets = stats.target_count + stats.other_count;
    stats.share = total_targets > 0 ? stats.target_count / total_targets : 0.0;
    history_.push_back(stats);

    // Retrain window: the most recent window_ticks ticks, expanded one tick
    // at a time until it holds min_window_tokens (or all of history).
    const auto len = history_.size();
    auto window = std::min<std::size_t>(static_cast<std::size_t>(config_.window_ticks), len);
    double window_tokens = 0;
    for (std::size_t k = 0; k < window; ++k) window_tokens += history_[len - 1 - k].tokens;
    while (window_tokens < config_.min_window_tokens && window < len) {
        window_tokens += history_[len - 1 - window].tokens;
        ++window;
    }
    double target_sum = 0, other_sum = 0;
    for (std::size_t k = 0; k < window; ++k) {
        target_sum += history_[len - 1 - k].target_count;
        other_sum += history_[len - 1 - k].other_count;
    }

    // Strict majority flips to the target; an exact tie keeps the incumbent.
    convention_is_target_ = target_sum > other_sum;
    history_.back().effective_window = static_cast<int>(window);
    history_.back().convention_is_target = convention_is_target_;
    return history_.back();
}

LockinTrace run(const LockinConfig& config, long ticks) {
    if (ticks < 1) throw std::invalid_argument("tick count must be at least 1");
    Simulation sim(config);
    LockinTrace trace;
    trace.ticks.reserve(static_cast<std::size_t>(ticks));
    for (long i = 0; i < ticks; ++i) trace.ticks.push_back(sim.step());

    for (auto it = trace.ticks.rbegin(); it != trace.ticks.rend() && it->convention_is_target; ++it)
        trace.lockin_tick = it->tick;
    bool seen_target = false;
    for (const auto& ts : trace.ticks) {
        if (ts.convention_is_target)
            seen_target = true;
        else if (seen_target)
            trace.reversed = true;
    }
    return trace;
}

bool lockin_achieved(const LockinConfig& config, long ticks) {
    if (ticks < 1) throw std::invalid_argument("tick count must be at least 1");
    Simulation sim(config);
    for (long i = 0; i < ticks; ++i) sim.step();
    // The lock-in criterion is horizon-relative: it holds iff the final
    // convention is the target (the locked suffix is then nonempty).
    return sim.convention_is_target();
}

double required_power(const LockinConfig& config, long ticks, double tolerance_mw) {
    if (config.mode != Mode::MeanField)
        throw ModeError("threshold search requires mean-field mode");
    if (!(tolerance_mw > 0)) throw std::invalid_argument("tolerance must be positive");

    LockinConfig probe = config;
    const auto achieves = [&](double power_mw) {
        probe.attacker_power_mw = power_mw;
        return lockin_achieved(probe, ticks);
    };

    if (achieves(0.0)) return 0.0;
    if (!achieves(config.total_power_mw))
        throw Unachievable("lock-in not reached even at full attacker power");

    double lo = 0.0, hi = config.total_power_mw;
    while (hi - lo > tolerance_mw) {
        const double mid = 0.5 * (lo + hi);
        (achieves(mid) ? hi : lo) = mid;
    }
    return hi;
}

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string trace_to_csv(const LockinTrace& trace, const LockinConfig& config) {
    std::string out = "tick,convention,colour_share,window_ticks,tokens\n";
    for (const auto& ts : trace.ticks) {
        out += std::to_string(ts.tick);
        out += ',';
        out += ts.convention_is_target ? config.target_variant : config.incumbent_variant;
        out += ',';
        out += fmt_double(ts.share);
        out += ',';
        out += std::to_string(ts.effective_window);
        out += ',';
        out += fmt_double(ts.tokens);
        out += '\n';
    }
    return out;
}

std::string trace_to_json(const LockinTrace& trace, const LockinConfig& config) {
    nlohmann::json j;
    j["target_variant"] = config.target_variant;
    j["incumbent_variant"] = config.incumbent_variant;
    j["lockin_tick"] = trace.lockin_tick ? nlohmann::json(*trace.lockin_tick) : nlohmann::json();
    j["reversed"] = trace.reversed;
    auto& ticks = j["ticks"] = nlohmann::json::array();
    for (const auto& ts : trace.ticks) {
        ticks.push_back({
            {"tick", ts.tick},
            {"convention", ts.convention_is_target ? config.target_variant : config.incumbent_variant},
            {"colour_share", ts.share},
            {"window_ticks", ts.effective_window},
            {"tokens", ts.tokens},
            {"target_count", ts.target_count},
            {"other_count", ts.other_count},
        });
    }
    return j.dump(2);
}

} // namespace locksim::lockin
