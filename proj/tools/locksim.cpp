// locksim: deterministic forecasting and majority-dynamics simulation CLI.
//
// Exit codes: 0 success, 1 input/config error, 2 model-degenerate input
// (no locatable peak), 3 simulation ran but the sought outcome (lock-in)
// was not achieved.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "locksim/bbcp.hpp"
#include "locksim/budget.hpp"
#include "locksim/corpus.hpp"
#include "locksim/forecast.hpp"
#include "locksim/lockin.hpp"
#include "locksim/sobol.hpp"
#include "locksim/timeutil.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace locksim;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitNotAchieved = 3;

// Collects output files for one run and lands them in --out together with
// a manifest that records everything needed to reproduce the run.
class RunOutputs {
public:
    RunOutputs(std::string subcommand, json config)
        : subcommand_(std::move(subcommand)), config_(std::move(config)) {}

    void add(const std::string& name, const std::string& content) {
        files_.emplace_back(name, content);
    }

    void set_seed(std::uint64_t seed) { seed_ = seed; }

    void write(const std::optional<std::string>& out_dir) const {
        if (!out_dir) return;
        fs::create_directories(*out_dir);
        json manifest;
        manifest["tool"] = "locksim";
        manifest["version"] = kVersion;
        manifest["subcommand"] = subcommand_;
        manifest["seed"] = seed_ ? json(*seed_) : json();
        manifest["config"] = config_;
        auto& outputs = manifest["outputs"] = json::array();
        for (const auto& [name, content] : files_) {
            outputs.push_back(name);
            write_file(fs::path(*out_dir) / name, content);
        }
        write_file(fs::path(*out_dir) / "manifest.json", manifest.dump(2) + "\n");
    }

private:
    static void write_file(const fs::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << content;
    }

    std::string subcommand_;
    json config_;
    std::optional<std::uint64_t> seed_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string fmt_display(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

double parse_time_value(const json& j) {
    if (j.is_number()) return j.get<double>();
    return timeutil::parse_iso8601(j.get<std::string>());
}

// ---------------------------------------------------------------------------
// forecast

struct ForecastArgs {
    std::string csv_path;
    bool normalize = false;
    bool json_output = false;
    std::optional<std::string> out_dir;
};

int run_forecast(const ForecastArgs& args) {
    const auto series = forecast::load_csv(args.csv_path);
    auto curve = forecast::fit_gaussian(series);
    if (args.normalize) curve = forecast::normalize_curve(curve);
    const double peak = forecast::peak_time(curve);

    json result;
    result["curve"] = json::parse(forecast::curve_to_json(curve));
    result["peak_utc"] = timeutil::format_iso8601_utc(peak);
    result["peak_bst"] = timeutil::format_bst(peak);
    const std::string rendered = result.dump(2) + "\n";

    if (args.json_output) {
        std::cout << rendered;
    } else {
        std::cout << forecast::curve_to_json(curve) << "\n";
        std::cout << "peak_utc: " << timeutil::format_iso8601_utc(peak) << "\n";
        std::cout << "peak_bst: " << timeutil::format_bst(peak) << "\n";
    }

    json config;
    config["csv"] = args.csv_path;
    config["normalize"] = args.normalize;
    RunOutputs outputs("forecast", config);
    outputs.add("curve.json", rendered);
    outputs.write(args.out_dir);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// budget

struct BudgetArgs {
    std::string preset = "paper";
    bool preset_given = false;
    std::optional<std::string> config_path;
    std::optional<double> buffer_mw, frequency, power_gw, english_fraction, words_per_sentence,
        target_year, hours_per_year;
    bool json_output = false;
    std::optional<std::string> out_dir;
};

// Full-fidelity round trip of the derivation inputs, so a manifest alone
// reproduces the run.
json budget_config_to_json(const budget::DerivationConfig& cfg, budget::Preset preset) {
    json j;
    j["preset"] = budget::to_string(preset);
    j["trend"] = {{"base_year", cfg.trend.base_year},
                  {"base_energy_twh", cfg.trend.base_energy_twh},
                  {"growth_rate", cfg.trend.growth_rate},
                  {"period_years", cfg.trend.period_years}};
    j["target_year"] = cfg.target_year;
    j["hours_per_year"] = cfg.hours_per_year;
    auto& corpora = j["corpora"] = json::array();
    for (const auto& stat : cfg.corpora)
        corpora.push_back({{"name", stat.name},
                           {"total_tokens", stat.total_tokens},
                           {"target_count", stat.target_count}});
    j["english_fraction"] = cfg.english_fraction;
    j["words_per_sentence"] = cfg.words_per_sentence;
    j["safety_buffer_mw"] = cfg.safety_buffer_mw;
    j["frequency_override"] = cfg.frequency_override ? json(*cfg.frequency_override) : json();
    j["attack_input_power_gw"] =
        cfg.attack_input_power_gw ? json(*cfg.attack_input_power_gw) : json();
    return j;
}

budget::DerivationConfig budget_config_from_json(const json& j) {
    budget::DerivationConfig cfg;
    if (j.contains("trend")) {
        const auto& t = j.at("trend");
        cfg.trend.base_year = t.value("base_year", cfg.trend.base_year);
        cfg.trend.base_energy_twh = t.value("base_energy_twh", cfg.trend.base_energy_twh);
        cfg.trend.growth_rate = t.value("growth_rate", cfg.trend.growth_rate);
        cfg.trend.period_years = t.value("period_years", cfg.trend.period_years);
    }
    cfg.target_year = j.value("target_year", cfg.target_year);
    cfg.hours_per_year = j.value("hours_per_year", cfg.hours_per_year);
    if (j.contains("corpora")) {
        cfg.corpora.clear();
        for (const auto& stat : j.at("corpora"))
            cfg.corpora.push_back({stat.at("name").get<std::string>(),
                                   stat.at("total_tokens").get<double>(),
                                   stat.at("target_count").get<double>()});
    }
    cfg.english_fraction = j.value("english_fraction", cfg.english_fraction);
    cfg.words_per_sentence = j.value("words_per_sentence", cfg.words_per_sentence);
    cfg.safety_buffer_mw = j.value("safety_buffer_mw", cfg.safety_buffer_mw);
    if (j.contains("frequency_override") && !j.at("frequency_override").is_null())
        cfg.frequency_override = j.at("frequency_override").get<double>();
    if (j.contains("attack_input_power_gw") && !j.at("attack_input_power_gw").is_null())
        cfg.attack_input_power_gw = j.at("attack_input_power_gw").get<double>();
    return cfg;
}

json budget_to_json(const budget::Derivation& d, double target_year) {
    json j;
    j["preset"] = budget::to_string(d.preset);
    j["energy_twh"] = d.budget.energy_twh;
    j["target_year"] = target_year;
    j["average_power_gw"] = d.budget.average_power_gw;
    auto& freqs = j["corpus_frequencies"] = json::object();
    for (const auto& [name, f] : d.corpus_frequencies) freqs[name] = f;
    j["mean_target_frequency"] = d.mean_target_frequency;
    j["attack_input_power_gw"] = d.attack_input_power_gw;
    j["base_attack_mw"] = d.budget.base_attack_mw;
    j["sentence_adjusted_mw"] = d.budget.sentence_adjusted_mw;
    j["total_with_buffer_mw"] = d.budget.total_with_buffer_mw;
    return j;
}

std::string budget_table(const budget::Derivation& d, const budget::DerivationConfig& cfg) {
    std::vector<std::pair<std::string, double>> rows;
    rows.emplace_back("annual energy at " + fmt_display(cfg.target_year) + " (TWh/yr)",
                      d.budget.energy_twh);
    rows.emplace_back("average datacentre power (GW)", d.budget.average_power_gw);
    for (const auto& [name, f] : d.corpus_frequencies)
        rows.emplace_back("frequency " + name + " (fraction)", f);
    rows.emplace_back("mean target frequency (fraction)", d.mean_target_frequency);
    rows.emplace_back("attack input power (GW)", d.attack_input_power_gw);
    rows.emplace_back("base attack power (MW)", d.budget.base_attack_mw);
    rows.emplace_back("sentence-adjusted power (MW)", d.budget.sentence_adjusted_mw);
    rows.emplace_back("total with safety buffer (MW)", d.budget.total_with_buffer_mw);

    std::size_t width = std::string("quantity").size();
    for (const auto& [name, value] : rows) width = std::max(width, name.size());
    std::string out = "quantity";
    out.append(width - 8 + 2, ' ');
    out += "value\n";
    for (const auto& [name, value] : rows) {
        out += name;
        out.append(width - name.size() + 2, ' ');
        out += fmt_display(value);
        out += '\n';
    }
    return out;
}

int execute_budget(const budget::DerivationConfig& cfg, budget::Preset preset, bool json_output,
                   const std::optional<std::string>& out_dir) {
    const auto derivation = budget::derive(cfg, preset);
    const auto as_json = budget_to_json(derivation, cfg.target_year);
    const auto table = budget_table(derivation, cfg);
    std::cout << (json_output ? as_json.dump(2) + "\n" : table);

    RunOutputs outputs("budget", budget_config_to_json(cfg, preset));
    outputs.add("budget.json", as_json.dump(2) + "\n");
    outputs.add("table.txt", table);
    outputs.write(out_dir);
    return kExitOk;
}

int run_budget(const BudgetArgs& args) {
    budget::DerivationConfig cfg;
    std::string preset_name = args.preset;
    if (args.config_path) {
        std::ifstream in(*args.config_path);
        if (!in) throw std::runtime_error("cannot open config: " + *args.config_path);
        const auto j = json::parse(in);
        cfg = budget_config_from_json(j);
        if (!args.preset_given && j.contains("preset"))
            preset_name = j.at("preset").get<std::string>();
    }
    if (args.buffer_mw) cfg.safety_buffer_mw = *args.buffer_mw;
    if (args.frequency) cfg.frequency_override = *args.frequency;
    if (args.power_gw) cfg.attack_input_power_gw = *args.power_gw;
    if (args.english_fraction) cfg.english_fraction = *args.english_fraction;
    if (args.words_per_sentence) cfg.words_per_sentence = *args.words_per_sentence;
    if (args.target_year) cfg.target_year = *args.target_year;
    if (args.hours_per_year) cfg.hours_per_year = *args.hours_per_year;
    return execute_budget(cfg, budget::preset_from_string(preset_name), args.json_output,
                          args.out_dir);
}

// ---------------------------------------------------------------------------
// corpus

struct CorpusArgs {
    std::string action; // count | majority | style
    std::string docs_path;
    std::string variants_path;
    std::optional<std::string> rules_path;
    std::vector<std::string> words;
    bool weighted = false;
    bool no_floor = false;
    std::optional<std::string> from_ts, to_ts;
    std::optional<std::string> out_dir;
};

int run_corpus(const CorpusArgs& args) {
    if (args.action == "style") {
        corpus::StyleRules rules;
        if (args.rules_path) rules = corpus::load_style_rules(*args.rules_path);
        json scores = json::object();
        for (const auto& word : args.words) scores[word] = corpus::style_score(word, rules);
        std::cout << scores.dump(2) << "\n";
        return kExitOk;
    }

    const auto vs = corpus::load_variant_set(args.variants_path);
    const auto docs = corpus::load_ndjson(args.docs_path);
    const double from = args.from_ts ? timeutil::parse_iso8601(*args.from_ts)
                                     : -std::numeric_limits<double>::infinity();
    const double to =
        args.to_ts ? timeutil::parse_iso8601(*args.to_ts) : std::numeric_limits<double>::infinity();
    corpus::CountOptions opts;
    opts.weighted = args.weighted;
    opts.weight_floor = !args.no_floor;
    const auto window = corpus::make_window(docs, vs, from, to, opts);

    json result;
    result["window_start"] = args.from_ts ? json(*args.from_ts) : json();
    result["window_end"] = args.to_ts ? json(*args.to_ts) : json();
    result["counts"] = window.counts;
    result["majority"] = corpus::majority_spelling(window, vs);

    if (args.action == "majority") {
        std::cout << result["majority"].get<std::string>() << "\n";
    } else {
        std::cout << result.dump(2) << "\n";
    }

    json config;
    config["action"] = args.action;
    config["docs"] = args.docs_path;
    config["variants"] = args.variants_path;
    config["weighted"] = args.weighted;
    config["no_floor"] = args.no_floor;
    config["from"] = args.from_ts ? json(*args.from_ts) : json();
    config["to"] = args.to_ts ? json(*args.to_ts) : json();
    RunOutputs outputs("corpus", config);
    outputs.add("counts.json", result.dump(2) + "\n");
    outputs.write(args.out_dir);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// lockin

struct LockinRun {
    lockin::LockinConfig config;
    long ticks = 100;
};

LockinRun lockin_from_json(const json& j) {
    LockinRun run;
    auto& c = run.config;
    c.total_power_mw = j.value("total_power_mw", c.total_power_mw);
    c.attacker_power_mw = j.value("attacker_power_mw", c.attacker_power_mw);
    c.tick_hours = j.value("tick_hours", c.tick_hours);
    c.window_ticks = j.value("window_ticks", c.window_ticks);
    c.min_window_tokens = j.value("min_window_tokens", c.min_window_tokens);
    c.words_per_tick_per_mw = j.value("words_per_tick_per_mw", c.words_per_tick_per_mw);
    c.target_frequency = j.value("target_frequency", c.target_frequency);
    c.words_per_sentence = j.value("words_per_sentence", c.words_per_sentence);
    c.adoption_noise = j.value("adoption_noise", c.adoption_noise);
    if (j.contains("production") && !j.at("production").is_null()) {
        const auto& p = j.at("production");
        const auto type = p.value("type", std::string("constant"));
        if (type == "gaussian") {
            forecast::GaussianCurve curve;
            curve.amplitude = p.value("amplitude", 1.0);
            curve.mean = p.contains("mean") ? parse_time_value(p.at("mean")) : 0.0;
            curve.sigma = p.at("sigma_seconds").get<double>();
            c.production.curve = curve;
        } else if (type != "constant") {
            throw std::invalid_argument("production.type must be constant|gaussian");
        }
    }
    if (j.contains("start_time") && !j.at("start_time").is_null())
        c.start_time = parse_time_value(j.at("start_time"));
    if (j.contains("attack_duration_ticks") && !j.at("attack_duration_ticks").is_null())
        c.attack_duration_ticks = j.at("attack_duration_ticks").get<long>();
    c.seed = j.value("seed", c.seed);
    c.mode = lockin::mode_from_string(j.value("mode", lockin::to_string(c.mode)));
    c.target_variant = j.value("target_variant", c.target_variant);
    c.incumbent_variant = j.value("incumbent_variant", c.incumbent_variant);
    run.ticks = j.value("ticks", run.ticks);
    return run;
}

json lockin_to_json(const LockinRun& run) {
    const auto& c = run.config;
    json j;
    j["total_power_mw"] = c.total_power_mw;
    j["attacker_power_mw"] = c.attacker_power_mw;
    j["tick_hours"] = c.tick_hours;
    j["window_ticks"] = c.window_ticks;
    j["min_window_tokens"] = c.min_window_tokens;
    j["words_per_tick_per_mw"] = c.words_per_tick_per_mw;
    j["target_frequency"] = c.target_frequency;
    j["words_per_sentence"] = c.words_per_sentence;
    j["adoption_noise"] = c.adoption_noise;
    if (c.production.curve) {
        j["production"] = {{"type", "gaussian"},
                           {"amplitude", c.production.curve->amplitude},
                           {"mean", c.production.curve->mean},
                           {"sigma_seconds", c.production.curve->sigma}};
    } else {
        j["production"] = {{"type", "constant"}};
    }
    j["start_time"] = c.start_time ? json(*c.start_time) : json();
    j["attack_duration_ticks"] = c.attack_duration_ticks ? json(*c.attack_duration_ticks) : json();
    j["seed"] = c.seed;
    j["mode"] = lockin::to_string(c.mode);
    j["target_variant"] = c.target_variant;
    j["incumbent_variant"] = c.incumbent_variant;
    j["ticks"] = run.ticks;
    return j;
}

struct LockinArgs {
    std::string config_path;
    std::optional<long> ticks;
    std::optional<std::uint64_t> seed;
    bool search = false;
    double tolerance_mw = 1e-6;
    std::optional<std::string> out_dir;
};

int execute_lockin(LockinRun run, bool search, double tolerance_mw,
                   const std::optional<std::string>& out_dir) {
    json config = lockin_to_json(run);
    config["search"] = search;
    config["tolerance_mw"] = tolerance_mw;
    RunOutputs outputs("lockin", config);
    outputs.set_seed(run.config.seed);

    if (search) {
        const double threshold = lockin::required_power(run.config, run.ticks, tolerance_mw);
        json result;
        result["required_power_mw"] = threshold;
        result["tolerance_mw"] = tolerance_mw;
        result["ticks"] = run.ticks;
        result["total_power_mw"] = run.config.total_power_mw;
        std::cout << result.dump(2) << "\n";
        outputs.add("threshold.json", result.dump(2) + "\n");
        outputs.write(out_dir);
        return kExitOk;
    }

    const auto trace = lockin::run(run.config, run.ticks);
    if (trace.lockin_tick)
        std::cout << "lock-in at tick " << *trace.lockin_tick << " of " << run.ticks << "\n";
    else
        std::cout << "no lock-in within " << run.ticks << " ticks\n";
    outputs.add("trace.csv", lockin::trace_to_csv(trace, run.config));
    outputs.add("trace.json", lockin::trace_to_json(trace, run.config) + "\n");
    outputs.write(out_dir);
    return trace.lockin_tick ? kExitOk : kExitNotAchieved;
}

int run_lockin(const LockinArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + args.config_path);
    auto run = lockin_from_json(json::parse(in));
    if (args.ticks) run.ticks = *args.ticks;
    if (args.seed) run.config.seed = *args.seed;
    run.config.validate();
    if (run.ticks < 1) throw std::invalid_argument("ticks must be at least 1");
    return execute_lockin(std::move(run), args.search, args.tolerance_mw, args.out_dir);
}

// ---------------------------------------------------------------------------
// bbcp

struct BbcpSetup {
    int rows = 20, cols = 20;
    bbcp::BinColour official = bbcp::BinColour::Green;
    bbcp::BinColour attacker = bbcp::BinColour::Blue;
    std::optional<bbcp::BinColour> initial;
    double upstanding_fraction = 0.0;
    std::vector<std::pair<int, int>> upstanding_cells;
    int leaflet_count = 0;
    double compliance = 1.0;
    int rounds = 1;
    bool periodic = false;
    bool async = false;
    std::uint64_t seed = 0;
};

BbcpSetup bbcp_from_json(const json& j) {
    BbcpSetup s;
    s.rows = j.value("rows", s.rows);
    s.cols = j.value("cols", s.cols);
    s.official = bbcp::colour_from_string(j.value("official_colour", "green"));
    s.attacker = bbcp::colour_from_string(j.value("attacker_colour", "blue"));
    if (j.contains("initial_colour") && !j.at("initial_colour").is_null())
        s.initial = bbcp::colour_from_string(j.at("initial_colour").get<std::string>());
    s.upstanding_fraction = j.value("upstanding_fraction", 0.0);
    if (j.contains("upstanding_cells"))
        for (const auto& cell : j.at("upstanding_cells"))
            s.upstanding_cells.emplace_back(cell.at(0).get<int>(), cell.at(1).get<int>());
    s.leaflet_count = j.value("leaflet_count", 0);
    s.compliance = j.value("compliance", 1.0);
    s.rounds = j.value("rounds", 1);
    s.periodic = j.value("periodic", false);
    s.async = j.value("async", false);
    s.seed = j.value("seed", 0ULL);
    return s;
}

json bbcp_to_json(const BbcpSetup& s) {
    json j;
    j["rows"] = s.rows;
    j["cols"] = s.cols;
    j["official_colour"] = bbcp::to_string(s.official);
    j["attacker_colour"] = bbcp::to_string(s.attacker);
    j["initial_colour"] = s.initial ? json(bbcp::to_string(*s.initial)) : json();
    j["upstanding_fraction"] = s.upstanding_fraction;
    auto& cells = j["upstanding_cells"] = json::array();
    for (const auto& [r, c] : s.upstanding_cells) cells.push_back(json::array({r, c}));
    j["leaflet_count"] = s.leaflet_count;
    j["compliance"] = s.compliance;
    j["rounds"] = s.rounds;
    j["periodic"] = s.periodic;
    j["async"] = s.async;
    j["seed"] = s.seed;
    return j;
}

struct BbcpArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

int execute_bbcp(const BbcpSetup& setup, const std::optional<std::string>& out_dir) {
    if (setup.rounds < 0) throw std::invalid_argument("rounds must be nonnegative");
    auto village =
        bbcp::Village::grid(setup.rows, setup.cols, setup.official, setup.attacker, setup.periodic);
    if (setup.initial) village.set_colour_all(*setup.initial);
    village.place_upstanding(setup.upstanding_fraction, setup.seed);
    for (const auto& [r, c] : setup.upstanding_cells) {
        if (r < 0 || r >= setup.rows || c < 0 || c >= setup.cols)
            throw std::invalid_argument("upstanding cell out of range");
        village.set_upstanding(r * setup.cols + c, true);
    }
    sobol::SobolSampler sampler(2);
    bbcp::leaflet(village, setup.leaflet_count, sampler);

    RunOutputs outputs("bbcp", bbcp_to_json(setup));
    outputs.set_seed(setup.seed);

    std::vector<int> mischief;
    mischief.push_back(bbcp::mischief_score(village));
    char name[32];
    std::snprintf(name, sizeof name, "round_%03d.csv", 0);
    outputs.add(name, village.raster_csv());
    for (int round = 1; round <= setup.rounds; ++round) {
        if (setup.async)
            bbcp::wheel_out_step_async(village, setup.compliance, setup.seed);
        else
            bbcp::wheel_out_step(village, setup.compliance, setup.seed);
        mischief.push_back(bbcp::mischief_score(village));
        std::snprintf(name, sizeof name, "round_%03d.csv", round);
        outputs.add(name, village.raster_csv());
    }

    json summary;
    summary["rows"] = setup.rows;
    summary["cols"] = setup.cols;
    summary["households"] = village.size();
    summary["rounds"] = setup.rounds;
    summary["mischief_per_round"] = mischief;
    // The first collection night and the long-run view, both reported.
    summary["first_round_mischief"] = setup.rounds >= 1 ? json(mischief.at(1)) : json();
    summary["final_mischief"] = mischief.back();
    std::cout << summary.dump(2) << "\n";
    outputs.add("summary.json", summary.dump(2) + "\n");
    outputs.write(out_dir);
    return kExitOk;
}

int run_bbcp(const BbcpArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + args.config_path);
    auto setup = bbcp_from_json(json::parse(in));
    if (args.seed) setup.seed = *args.seed;
    return execute_bbcp(setup, args.out_dir);
}

// ---------------------------------------------------------------------------
// rerun

int run_rerun(const std::string& manifest_path, const std::string& out_dir) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
    const auto manifest = json::parse(in);
    const auto subcommand = manifest.at("subcommand").get<std::string>();
    const auto& config = manifest.at("config");

    if (subcommand == "forecast") {
        ForecastArgs args;
        args.csv_path = config.at("csv").get<std::string>();
        args.normalize = config.value("normalize", false);
        args.json_output = true;
        args.out_dir = out_dir;
        return run_forecast(args);
    }
    if (subcommand == "budget") {
        return execute_budget(budget_config_from_json(config),
                              budget::preset_from_string(config.at("preset").get<std::string>()),
                              /*json_output=*/false, out_dir);
    }
    if (subcommand == "corpus") {
        CorpusArgs args;
        args.action = config.at("action").get<std::string>();
        args.docs_path = config.at("docs").get<std::string>();
        args.variants_path = config.at("variants").get<std::string>();
        args.weighted = config.value("weighted", false);
        args.no_floor = config.value("no_floor", false);
        if (!config.at("from").is_null()) args.from_ts = config.at("from").get<std::string>();
        if (!config.at("to").is_null()) args.to_ts = config.at("to").get<std::string>();
        args.out_dir = out_dir;
        return run_corpus(args);
    }
    if (subcommand == "lockin") {
        auto run = lockin_from_json(config);
        run.config.validate();
        return execute_lockin(std::move(run), config.value("search", false),
                              config.value("tolerance_mw", 1e-6), out_dir);
    }
    if (subcommand == "bbcp") {
        return execute_bbcp(bbcp_from_json(config), out_dir);
    }
    throw std::invalid_argument("manifest names unknown subcommand '" + subcommand + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic technology-curve forecasting, power budgeting and "
                 "majority-dynamics simulation"};
    app.require_subcommand(1);

    ForecastArgs forecast_args;
    auto* cmd_forecast = app.add_subcommand("forecast", "fit the bell curve to a capability CSV");
    cmd_forecast->add_option("--csv", forecast_args.csv_path, "CSV with header timestamp,value")
        ->required();
    cmd_forecast->add_flag("--normalize", forecast_args.normalize, "rescale to unit area");
    cmd_forecast->add_flag("--json", forecast_args.json_output, "machine-readable stdout");
    std::string forecast_out;
    auto* forecast_out_opt = cmd_forecast->add_option("--out", forecast_out, "output directory");

    BudgetArgs budget_args;
    auto* cmd_budget = app.add_subcommand("budget", "derive the attack power budget");
    auto* preset_opt = cmd_budget->add_option("--preset", budget_args.preset, "paper|consistent")
                           ->check(CLI::IsMember({"paper", "consistent"}));
    std::string budget_config;
    auto* budget_config_opt =
        cmd_budget->add_option("--config", budget_config, "derivation config JSON");
    double opt_buffer = 0, opt_freq = 0, opt_power = 0, opt_english = 0, opt_words = 0,
           opt_year = 0, opt_hours = 0;
    auto* buffer_opt = cmd_budget->add_option("--buffer-mw", opt_buffer, "safety buffer (MW)");
    auto* freq_opt = cmd_budget->add_option("--frequency", opt_freq, "target word frequency");
    auto* power_opt = cmd_budget->add_option("--power-gw", opt_power, "attack input power (GW)");
    auto* english_opt =
        cmd_budget->add_option("--english-fraction", opt_english, "fraction of content in English");
    auto* words_opt =
        cmd_budget->add_option("--words-per-sentence", opt_words, "filler words per sentence");
    auto* year_opt = cmd_budget->add_option("--target-year", opt_year, "extrapolation target year");
    auto* hours_opt = cmd_budget->add_option("--hours-per-year", opt_hours, "hours per year");
    cmd_budget->add_flag("--json", budget_args.json_output, "machine-readable stdout");
    std::string budget_out;
    auto* budget_out_opt = cmd_budget->add_option("--out", budget_out, "output directory");

    CorpusArgs corpus_args;
    auto* cmd_corpus = app.add_subcommand("corpus", "variant counting and style scoring");
    cmd_corpus->require_subcommand(1);
    auto* corpus_count = cmd_corpus->add_subcommand("count", "count variants over a window");
    auto* corpus_majority = cmd_corpus->add_subcommand("majority", "majority variant of a window");
    std::string corpus_from, corpus_to, corpus_out;
    std::vector<CLI::Option*> from_opts, to_opts, corpus_out_opts;
    for (auto* sub : {corpus_count, corpus_majority}) {
        sub->add_option("--docs", corpus_args.docs_path, "newline-delimited JSON documents")
            ->required();
        sub->add_option("--variants", corpus_args.variants_path, "variant set JSON")->required();
        sub->add_flag("--weighted", corpus_args.weighted, "weight by ln(1+retweets+hearts)");
        sub->add_flag("--no-floor", corpus_args.no_floor, "drop the weight floor of 1");
        from_opts.push_back(sub->add_option("--from", corpus_from, "window start (ISO-8601)"));
        to_opts.push_back(sub->add_option("--to", corpus_to, "window end (ISO-8601)"));
        corpus_out_opts.push_back(sub->add_option("--out", corpus_out, "output directory"));
    }
    auto* corpus_style = cmd_corpus->add_subcommand("style", "score words against style rules");
    std::string corpus_rules;
    auto* rules_opt = corpus_style->add_option("--rules", corpus_rules, "style rules JSON");
    corpus_style->add_option("words", corpus_args.words, "words to score")->required();

    LockinArgs lockin_args;
    auto* cmd_lockin = app.add_subcommand("lockin", "spell-checker lock-in simulation");
    cmd_lockin->add_option("--config", lockin_args.config_path, "simulation config JSON")
        ->required();
    long lockin_ticks = 0;
    auto* ticks_opt = cmd_lockin->add_option("--ticks", lockin_ticks, "override tick count");
    std::uint64_t lockin_seed = 0;
    auto* lockin_seed_opt = cmd_lockin->add_option("--seed", lockin_seed, "override seed");
    cmd_lockin->add_flag("--search", lockin_args.search, "bisect the minimal attacker power");
    cmd_lockin->add_option("--tolerance-mw", lockin_args.tolerance_mw, "search tolerance (MW)");
    std::string lockin_out;
    auto* lockin_out_opt = cmd_lockin->add_option("--out", lockin_out, "output directory");

    BbcpArgs bbcp_args;
    auto* cmd_bbcp = app.add_subcommand("bbcp", "bin-colouring village simulation");
    cmd_bbcp->add_option("--config", bbcp_args.config_path, "village config JSON")->required();
    std::uint64_t bbcp_seed = 0;
    auto* bbcp_seed_opt = cmd_bbcp->add_option("--seed", bbcp_seed, "override seed");
    std::string bbcp_out;
    auto* bbcp_out_opt = cmd_bbcp->add_option("--out", bbcp_out, "output directory");

    auto* cmd_rerun = app.add_subcommand("rerun", "reproduce a run from its manifest");
    std::string rerun_manifest, rerun_out;
    cmd_rerun->add_option("--manifest", rerun_manifest, "manifest.json of a previous run")
        ->required();
    cmd_rerun->add_option("--out", rerun_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (cmd_forecast->parsed()) {
            if (*forecast_out_opt) forecast_args.out_dir = forecast_out;
            return run_forecast(forecast_args);
        }
        if (cmd_budget->parsed()) {
            budget_args.preset_given = static_cast<bool>(*preset_opt);
            if (*budget_config_opt) budget_args.config_path = budget_config;
            if (*buffer_opt) budget_args.buffer_mw = opt_buffer;
            if (*freq_opt) budget_args.frequency = opt_freq;
            if (*power_opt) budget_args.power_gw = opt_power;
            if (*english_opt) budget_args.english_fraction = opt_english;
            if (*words_opt) budget_args.words_per_sentence = opt_words;
            if (*year_opt) budget_args.target_year = opt_year;
            if (*hours_opt) budget_args.hours_per_year = opt_hours;
            if (*budget_out_opt) budget_args.out_dir = budget_out;
            return run_budget(budget_args);
        }
        if (cmd_corpus->parsed()) {
            corpus_args.action = corpus_count->parsed()      ? "count"
                                 : corpus_majority->parsed() ? "majority"
                                                             : "style";
            if (*rules_opt) corpus_args.rules_path = corpus_rules;
            for (const auto* opt : from_opts)
                if (*opt) corpus_args.from_ts = corpus_from;
            for (const auto* opt : to_opts)
                if (*opt) corpus_args.to_ts = corpus_to;
            for (const auto* opt : corpus_out_opts)
                if (*opt) corpus_args.out_dir = corpus_out;
            return run_corpus(corpus_args);
        }
        if (cmd_lockin->parsed()) {
            if (*ticks_opt) lockin_args.ticks = lockin_ticks;
            if (*lockin_seed_opt) lockin_args.seed = lockin_seed;
            if (*lockin_out_opt) lockin_args.out_dir = lockin_out;
            return run_lockin(lockin_args);
        }
        if (cmd_bbcp->parsed()) {
            if (*bbcp_seed_opt) bbcp_args.seed = bbcp_seed;
            if (*bbcp_out_opt) bbcp_args.out_dir = bbcp_out;
            return run_bbcp(bbcp_args);
        }
        if (cmd_rerun->parsed()) {
            return run_rerun(rerun_manifest, rerun_out);
        }
    } catch (const forecast::InsufficientCurvature& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const lockin::Unachievable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotAchieved;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
