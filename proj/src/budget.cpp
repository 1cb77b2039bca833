#include "locksim/budget.hpp"

#include <cmath>

namespace locksim::budget {

double extrapolate_energy(const EnergyTrend& trend, double target_year) {
    if (!(trend.base_energy_twh > 0) || !(trend.period_years > 0) || !(trend.growth_rate > -1.0))
        throw std::invalid_argument("invalid energy trend");
    if (target_year < trend.base_year)
        throw PastTarget("target year precedes the trend base year");
    const double periods = (target_year - trend.base_year) / trend.period_years;
    return trend.base_energy_twh * std::pow(1.0 + trend.growth_rate, periods);
}

double average_power(double annual_energy_twh, double hours_per_year) {
    if (!(hours_per_year > 0)) throw std::invalid_argument("hours_per_year must be positive");
    return annual_energy_twh * 1000.0 / hours_per_year;
}

double word_frequency(const CorpusStat& stat) {
    if (!(stat.total_tokens > 0)) throw std::invalid_argument("corpus has no tokens");
    if (stat.target_count < 0 || stat.target_count > stat.total_tokens)
        throw std::invalid_argument("target count out of range");
    return stat.target_count / stat.total_tokens;
}

double mean_frequency(const std::vector<double>& freqs) {
    if (freqs.empty()) throw EmptyList("no frequencies to average");
    double sum = 0;
    for (double f : freqs) sum += f;
    return sum / static_cast<double>(freqs.size());
}

PowerBudget attack_power(const AttackParams& p) {
    if (p.datacentre_power_gw < 0 || p.safety_buffer_mw < 0 || p.words_per_sentence < 0 ||
        p.english_fraction < 0 || p.english_fraction > 1 || p.target_word_frequency < 0 ||
        p.target_word_frequency > 1)
        throw std::invalid_argument("invalid attack parameters");
    PowerBudget b;
    b.base_attack_mw = p.datacentre_power_gw * p.english_fraction * p.target_word_frequency * 1000.0;
    b.sentence_adjusted_mw = b.base_attack_mw * (p.words_per_sentence + 1.0);
    b.total_with_buffer_mw = b.sentence_adjusted_mw + p.safety_buffer_mw;
    return b;
}

Preset preset_from_string(const std::string& name) {
    if (name == "paper") return Preset::Paper;
    if (name == "consistent") return Preset::Consistent;
    throw std::invalid_argument("unknown preset '" + name + "' (expected paper|consistent)");
}

std::string to_string(Preset preset) {
    return preset == Preset::Paper ? "paper" : "consistent";
}

Derivation derive(const DerivationConfig& config, Preset preset) {
    Derivation d;
    d.preset = preset;

    const double energy = extrapolate_energy(config.trend, config.target_year);
    const double avg_gw = average_power(energy, config.hours_per_year);

    std::vector<double> freqs;
    for (const auto& stat : config.corpora) {
        const double f = word_frequency(stat);
        d.corpus_frequencies.emplace_back(stat.name, f);
        freqs.push_back(f);
    }
    d.mean_target_frequency =
        config.frequency_override ? *config.frequency_override : mean_frequency(freqs);

    d.attack_input_power_gw = config.attack_input_power_gw
                                  ? *config.attack_input_power_gw
                                  : (preset == Preset::Paper ? kPaperAttackPowerGw : avg_gw);

    AttackParams params;
    params.datacentre_power_gw = d.attack_input_power_gw;
    params.english_fraction = config.english_fraction;
    params.target_word_frequency = d.mean_target_frequency;
    params.words_per_sentence = config.words_per_sentence;
    params.safety_buffer_mw = config.safety_buffer_mw;

    d.budget = attack_power(params);
    d.budget.energy_twh = energy;
    d.budget.average_power_gw = avg_gw;
    return d;
}

} // namespace locksim::budget
