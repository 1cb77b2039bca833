// Acceptance suite. Runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line each. Exits with the number of failures.
//
// Usage: acceptance <locksim-cli-path> <scratch-dir>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "locksim/bbcp.hpp"
#include "locksim/budget.hpp"
#include "locksim/corpus.hpp"
#include "locksim/forecast.hpp"
#include "locksim/lockin.hpp"
#include "locksim/sobol.hpp"
#include "locksim/timeutil.hpp"

#include "subprocess.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace locksim;

namespace {

std::string g_cli;
fs::path g_scratch;
std::vector<std::string> g_failures;

testutil::CommandResult run_cli(const std::string& args) {
    return testutil::run_command(g_cli + " " + args);
}

std::string read_file(const fs::path& path) { return testutil::read_file(path.string()); }

class Criterion {
public:
    Criterion(int number, std::string name) : number_(number), name_(std::move(name)) {
        start_ = std::chrono::steady_clock::now();
    }

    void require(bool ok, const std::string& detail) {
        if (!ok && first_failure_.empty()) first_failure_ = detail;
        ok_ = ok_ && ok;
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    ~Criterion() {
        char line[256];
        std::snprintf(line, sizeof line, "%s  criterion %d: %s (%.2f s)%s%s",
                      ok_ ? "PASS" : "FAIL", number_, name_.c_str(), elapsed(),
                      ok_ ? "" : " -- ", ok_ ? "" : first_failure_.c_str());
        std::cout << line << "\n";
        if (!ok_) g_failures.push_back(name_);
    }

private:
    int number_;
    std::string name_;
    bool ok_ = true;
    std::string first_failure_;
    std::chrono::steady_clock::time_point start_;
};

bool near(double got, double want, double tol) { return std::abs(got - want) <= tol; }

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

// ---------------------------------------------------------------------------

void criterion_1_appendix_replication() {
    Criterion c(1, "power-budget derivation replicates the published chain");
    const auto run = run_cli("budget --preset paper --json");
    c.require(run.exit_code == 0, "budget exited " + std::to_string(run.exit_code));
    if (run.exit_code != 0) return;
    const auto j = json::parse(run.output);
    c.require(near(j.at("energy_twh"), 227.007, 0.01), "energy_twh off");
    c.require(near(j.at("average_power_gw"), 25.914, 0.001), "average_power_gw off");
    c.require(j.at("corpus_frequencies").at("coca_color").get<double>() == 124814.0 / 1e9,
              "coca ratio not exact");
    c.require(j.at("corpus_frequencies").at("bnc_colour").get<double>() == 11135.0 / 1e8,
              "bnc ratio not exact");
    c.require(near(j.at("mean_target_frequency"), 1.18082e-4, 1e-7), "mean frequency off");
    c.require(near(j.at("base_attack_mw"), 1.91147, 1e-4), "base_attack_mw off");
    c.require(near(j.at("sentence_adjusted_mw"), 22.93764, 1e-3), "sentence_adjusted_mw off");
    c.require(near(j.at("total_with_buffer_mw"), 22.94764, 1e-3), "total_with_buffer_mw off");

    const auto no_buffer = run_cli("budget --preset paper --buffer-mw 0 --json");
    c.require(no_buffer.exit_code == 0, "buffer-mw 0 run failed");
    if (no_buffer.exit_code == 0)
        c.require(near(json::parse(no_buffer.output).at("total_with_buffer_mw"), 22.93764, 1e-3),
                  "zero-buffer total off");
    c.require(run.seconds < 1.0, "runtime exceeded 1 s");
}

void criterion_2_peak_forecast() {
    Criterion c(2, "calibration fit recovers the 2032-07-20 03:07 BST peak");
    const double true_mean = timeutil::parse_iso8601("2032-07-20T02:07:00Z");
    const double true_sigma = 631152000.0; // 20 years of 365.25 days
    const double true_amplitude = 1e12;

    const auto series = forecast::load_csv(std::string(LOCKSIM_DATA_DIR) + "/calibration.csv");
    const auto fit = forecast::fit_gaussian(series);
    c.require(std::abs(forecast::peak_time(fit) - true_mean) <= 60.0, "peak off by > 60 s");
    c.require(rel_close(fit.amplitude, true_amplitude, 1e-6), "amplitude beyond 1e-6 relative");
    c.require(rel_close(fit.mean, true_mean, 1e-6), "mean beyond 1e-6 relative");
    c.require(rel_close(fit.sigma, true_sigma, 1e-6), "sigma beyond 1e-6 relative");

    const auto cli = run_cli("forecast --csv " + std::string(LOCKSIM_DATA_DIR) + "/calibration.csv");
    c.require(cli.exit_code == 0, "forecast CLI failed");
    c.require(cli.output.find("2032-07-20T03:07") != std::string::npos,
              "BST peak rendering missing");

    const auto expo = run_cli("forecast --csv " + std::string(LOCKSIM_DATA_DIR) + "/exponential.csv");
    c.require(expo.exit_code == 2, "exponential input should exit 2, got " +
                                       std::to_string(expo.exit_code));
}

void criterion_3_forecast_invariants() {
    Criterion c(3, "forecast equivariances at 1e-9 and unit-area normalization");
    std::mt19937_64 rng(40117);
    std::uniform_real_distribution<double> log_amp(-3.0, 14.0);
    std::uniform_real_distribution<double> mean_dist(-3e9, 3e9);
    std::uniform_real_distribution<double> sigma_years(0.05, 20.0);
    std::uniform_real_distribution<double> shift_dist(-1e9, 1e9);
    std::uniform_real_distribution<double> scale_dist(0.1, 1000.0);

    for (int i = 0; i < 100; ++i) {
        forecast::GaussianCurve truth;
        truth.amplitude = std::exp(log_amp(rng));
        truth.mean = mean_dist(rng);
        truth.sigma = sigma_years(rng) * 86400.0 * 365.25;
        forecast::TimeSeries series;
        for (int k = 0; k < 40; ++k) {
            const double t = truth.mean - 2.5 * truth.sigma + 5.0 * truth.sigma * k / 39.0;
            series.points.push_back({t, forecast::gaussian_eval(truth, t)});
        }
        const auto fit = forecast::fit_gaussian(series);

        const double delta = shift_dist(rng);
        auto shifted = series;
        for (auto& p : shifted.points) p.t += delta;
        const auto fit2 = forecast::fit_gaussian(shifted);
        c.require(std::abs((fit2.mean - fit.mean) - delta) <=
                      1e-9 * std::max({std::abs(fit.mean), std::abs(delta), 1.0}),
                  "translation: mean shift beyond 1e-9");
        c.require(rel_close(fit2.amplitude, fit.amplitude, 1e-9), "translation: amplitude drifted");
        c.require(rel_close(fit2.sigma, fit.sigma, 1e-9), "translation: sigma drifted");

        const double scale = scale_dist(rng);
        auto scaled = series;
        for (auto& p : scaled.points) p.v *= scale;
        const auto fit3 = forecast::fit_gaussian(scaled);
        c.require(rel_close(fit3.amplitude, scale * fit.amplitude, 1e-9),
                  "scale: amplitude beyond 1e-9");
        c.require(rel_close(fit3.mean, fit.mean, 1e-9), "scale: mean drifted");
        c.require(rel_close(fit3.sigma, fit.sigma, 1e-9), "scale: sigma drifted");
    }

    const auto norm = forecast::normalize_curve({7.3, 1.4e9, 2.2e8});
    const double a = norm.mean - 10.0 * norm.sigma, b = norm.mean + 10.0 * norm.sigma;
    const int panels = 100000;
    const double h = (b - a) / panels;
    double acc = 0.5 * (forecast::gaussian_eval(norm, a) + forecast::gaussian_eval(norm, b));
    for (int k = 1; k < panels; ++k) acc += forecast::gaussian_eval(norm, a + k * h);
    c.require(std::abs(acc * h - 1.0) < 1e-9, "normalized integral beyond 1e-9");
}

lockin::LockinConfig threshold_config() {
    lockin::LockinConfig cfg;
    cfg.total_power_mw = 100.0;
    cfg.attacker_power_mw = 0.0;
    cfg.window_ticks = 1;
    cfg.min_window_tokens = 0.0;
    cfg.words_per_tick_per_mw = 1e6;
    cfg.target_frequency = 1.18082e-4;
    cfg.words_per_sentence = 11;
    cfg.adoption_noise = 0.0;
    cfg.mode = lockin::Mode::MeanField;
    return cfg;
}

double power_for_share(const lockin::LockinConfig& c, double share) {
    const double spt = c.words_per_sentence + 1.0;
    return c.total_power_mw * share * c.target_frequency * spt /
           ((1.0 - share) + share * c.target_frequency * spt);
}

void criterion_4_lockin_threshold() {
    Criterion c(4, "lock-in threshold matches closed form and grid sweep");
    auto cfg = threshold_config();
    const long ticks = 10;

    const double closed_form = power_for_share(cfg, 0.5);
    const double bisected = lockin::required_power(cfg, ticks, 1e-6);
    c.require(std::abs(bisected - closed_form) <= 1e-6 + 1e-9,
              "bisection vs closed form beyond 1e-6 MW");

    const long grid_points = 1000000;
    const double step = cfg.total_power_mw / static_cast<double>(grid_points);
    double sweep_min = -1.0;
    for (long i = 0; i <= grid_points; ++i) {
        cfg.attacker_power_mw = static_cast<double>(i) * step;
        if (lockin::lockin_achieved(cfg, ticks) &&
            (sweep_min < 0.0 || cfg.attacker_power_mw < sweep_min))
            sweep_min = cfg.attacker_power_mw;
    }
    c.require(sweep_min >= 0.0, "grid sweep never achieved lock-in");
    c.require(std::abs(sweep_min - bisected) <= step + 1e-6,
              "grid sweep disagrees with bisection by more than one step");

    cfg.attacker_power_mw = power_for_share(cfg, 0.51);
    const auto flip = lockin::run(cfg, 1);
    c.require(flip.lockin_tick == 1, "0.51 share did not flip in one tick");

    cfg.attacker_power_mw = power_for_share(cfg, 0.49);
    const auto hold = lockin::run(cfg, 1000);
    c.require(!hold.lockin_tick, "0.49 share flipped");
    for (const auto& ts : hold.ticks)
        if (ts.convention_is_target) {
            c.require(false, "0.49 share reached the target convention");
            break;
        }
    c.require(c.elapsed() < 10.0, "runtime exceeded 10 s");
}

void criterion_5_expanding_windows() {
    Criterion c(5, "declining production forces nondecreasing window lengths");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto cfg = threshold_config();
        cfg.mode = lockin::Mode::Agent;
        cfg.adoption_noise = 0.05;
        cfg.seed = seed;
        cfg.production.curve = forecast::GaussianCurve{1.0, 0.0, 50 * 3 * 3600.0};
        cfg.min_window_tokens = cfg.total_power_mw * cfg.words_per_tick_per_mw;
        const auto trace = lockin::run(cfg, 200);
        int previous = 1;
        for (const auto& ts : trace.ticks) {
            if (ts.effective_window < previous) {
                c.require(false, "window shrank at tick " + std::to_string(ts.tick) + " (seed " +
                                     std::to_string(seed) + ")");
                return;
            }
            previous = ts.effective_window;
        }
    }
}

void criterion_6_bbcp_invariants() {
    Criterion c(6, "village steps conserve colours, honour the upstanding, ignore order");
    std::mt19937_64 shuffle_rng(2718);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto village = bbcp::Village::grid(20, 20, bbcp::BinColour::Green, bbcp::BinColour::Blue);
        village.place_upstanding(0.1, seed);
        sobol::SobolSampler sampler(2);
        bbcp::leaflet(village, 204, sampler);
        for (int round = 0; round < 5; ++round) {
            // Same snapshot stepped in two different household orders.
            auto permuted = village;
            std::vector<int> order(village.size());
            std::iota(order.begin(), order.end(), 0);
            bbcp::wheel_out_step_ordered(village, 0.9, seed, order);
            std::shuffle(order.begin(), order.end(), shuffle_rng);
            bbcp::wheel_out_step_ordered(permuted, 0.9, seed, order);
            if (village.raster_csv() != permuted.raster_csv()) {
                c.require(false, "iteration order changed the grid (seed " + std::to_string(seed) +
                                     ", round " + std::to_string(round) + ")");
                return;
            }
            std::array<int, 3> histogram{};
            for (int i = 0; i < village.size(); ++i) {
                ++histogram[static_cast<int>(village.home(i).colour)];
                if (village.home(i).upstanding &&
                    village.home(i).colour != bbcp::BinColour::Green) {
                    c.require(false, "upstanding household defected (seed " +
                                         std::to_string(seed) + ")");
                    return;
                }
            }
            if (histogram[0] + histogram[1] + histogram[2] != village.size()) {
                c.require(false, "colour counts not conserved (seed " + std::to_string(seed) + ")");
                return;
            }
        }
    }
}

void criterion_7_sobol_quality() {
    Criterion c(7, "Sobol points match the reference tables and beat uniform sampling");
    const std::vector<std::array<double, 2>> reference = {
        {0.5, 0.5},       {0.75, 0.25},     {0.25, 0.75},     {0.375, 0.375},
        {0.875, 0.875},   {0.625, 0.125},   {0.125, 0.625},   {0.1875, 0.3125},
        {0.6875, 0.8125}, {0.9375, 0.0625}, {0.4375, 0.5625}, {0.3125, 0.1875},
        {0.8125, 0.6875}, {0.5625, 0.4375}, {0.0625, 0.9375}, {0.09375, 0.46875},
    };
    sobol::SobolSampler sampler(2);
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const auto p = sampler.next();
        if (p[0] != reference[i][0] || p[1] != reference[i][1]) {
            c.require(false, "point " + std::to_string(i + 1) + " deviates from the reference");
            return;
        }
    }

    const auto box_deviation = [](const std::vector<std::array<double, 2>>& pts) {
        constexpr int kGrid = 8;
        int boxes[kGrid][kGrid] = {};
        for (const auto& p : pts)
            ++boxes[std::min(int(p[0] * kGrid), kGrid - 1)][std::min(int(p[1] * kGrid), kGrid - 1)];
        const double expected = static_cast<double>(pts.size()) / (kGrid * kGrid);
        double worst = 0.0;
        for (const auto& row : boxes)
            for (const int count : row) worst = std::max(worst, std::abs(count - expected));
        return worst;
    };

    sobol::SobolSampler fresh(2);
    std::vector<std::array<double, 2>> sobol_pts;
    for (int i = 0; i < 1024; ++i) {
        const auto p = fresh.next();
        sobol_pts.push_back({p[0], p[1]});
    }
    const double sobol_dev = box_deviation(sobol_pts);

    std::vector<double> baseline;
    for (int rep = 0; rep < 100; ++rep) {
        std::mt19937_64 rng(9000 + rep);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::vector<std::array<double, 2>> pts;
        for (int i = 0; i < 1024; ++i) pts.push_back({u01(rng), u01(rng)});
        baseline.push_back(box_deviation(pts));
    }
    std::nth_element(baseline.begin(), baseline.begin() + 50, baseline.end());
    c.require(sobol_dev < baseline[50], "Sobol box deviation " + std::to_string(sobol_dev) +
                                            " not below uniform median " +
                                            std::to_string(baseline[50]));
}

// Brute-force variant scanner for criterion 8: walks raw bytes with its own
// decoder and separator tables, counting maximal word runs that equal a
// variant. Independent of corpus::tokenize.
std::array<long, 2> scan_variants(const std::string& text) {
    static const std::string kColour = "colour", kColor = "color";
    std::array<long, 2> counts{0, 0};
    std::string current;
    std::size_t i = 0;
    const auto flush = [&] {
        if (current == kColour) ++counts[0];
        if (current == kColor) ++counts[1];
        current.clear();
    };
    while (i < text.size()) {
        const auto b0 = static_cast<unsigned char>(text[i]);
        std::uint32_t cp = 0;
        bool valid = true;
        if (b0 < 0x80) {
            cp = b0;
            ++i;
        } else {
            int extra = (b0 >= 0xC0 && b0 <= 0xDF)   ? 1
                        : (b0 >= 0xE0 && b0 <= 0xEF) ? 2
                        : (b0 >= 0xF0 && b0 <= 0xF7) ? 3
                                                     : 0;
            if (extra == 0 || i + extra >= text.size()) {
                valid = false;
                ++i;
            } else {
                cp = b0 & (0x3Fu >> extra);
                for (int k = 1; k <= extra && valid; ++k) {
                    const auto b = static_cast<unsigned char>(text[i + k]);
                    if ((b & 0xC0) != 0x80) valid = false;
                    cp = (cp << 6) | (b & 0x3Fu);
                }
                static constexpr std::uint32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
                if (valid && (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)))
                    valid = false;
                i += valid ? extra + 1 : 1;
            }
        }
        if (!valid) {
            flush();
            continue;
        }
        if (cp >= 'A' && cp <= 'Z') cp += 32;
        bool separator;
        if (cp < 0x80) {
            separator = !((cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9'));
        } else {
            separator = cp == 0x85 || cp == 0xA0 || cp == 0x1680 || cp == 0x2028 || cp == 0x2029 ||
                        cp == 0x202F || cp == 0x205F || cp == 0x3000 || cp == 0xA1 || cp == 0xA7 ||
                        cp == 0xAB || cp == 0xB6 || cp == 0xB7 || cp == 0xBB || cp == 0xBF ||
                        cp == 0x3001 || cp == 0x3002 || (cp >= 0x2000 && cp <= 0x200A) ||
                        (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E);
        }
        if (separator) {
            flush();
        } else if (cp < 0x80) {
            current.push_back(static_cast<char>(cp));
        } else {
            // Only ASCII variants are counted; a non-ASCII character just
            // makes the current run a non-variant.
            current.push_back('\x01');
        }
    }
    flush();
    return counts;
}

void criterion_8_corpus_oracle() {
    Criterion c(8, "corpus counts equal a brute-force scan; majority scale-invariant");
    static const std::vector<std::string> pieces = {
        "colour",  " ",    "color",   ", ",   "COLOUR",  "Colour!", "the",   "sky\n",
        "naïve",   "café", "—",       "…",    "日本語",    "«",       "42",    "'s",
        "\xFF",    "\xC3", "\xE2\x28\xA1",    "colourful", "discolor", "\t",  "。",
    };
    std::mt19937_64 rng(0xBEEF);
    std::string text;
    text.reserve((1 << 20) + 64);
    while (text.size() < (1 << 20)) text += pieces[rng() % pieces.size()];

    corpus::Document doc;
    doc.tokens = corpus::tokenize(text);
    const corpus::VariantSet vs{"colour", {"colour", "color"}, "color"};
    const auto counts =
        corpus::count_variants(std::vector<corpus::Document>{doc}, vs, {.weighted = false});
    const auto scanned = scan_variants(text);
    c.require(counts.at("colour") == static_cast<double>(scanned[0]),
              "colour count mismatch vs scanner");
    c.require(counts.at("color") == static_cast<double>(scanned[1]),
              "color count mismatch vs scanner");
    c.require(scanned[0] > 1000 && scanned[1] > 1000, "corpus too sparse to be meaningful");

    std::mt19937_64 table_rng(1234);
    for (int i = 0; i < 1000; ++i) {
        corpus::CorpusWindow w{0, 1, {}};
        w.counts["colour"] = static_cast<double>(table_rng() % 1000000);
        w.counts["color"] = static_cast<double>(table_rng() % 1000000);
        const auto before = corpus::majority_spelling(w, vs);
        const double scale = std::array{0.25, 2.0, 9.5, 1e6}[table_rng() % 4];
        for (auto& [_, count] : w.counts) count *= scale;
        if (corpus::majority_spelling(w, vs) != before) {
            c.require(false, "majority changed under count scaling");
            return;
        }
    }
}

void criterion_9_determinism() {
    Criterion c(9, "every subcommand reruns byte-identically from its manifest");
    const std::string data = LOCKSIM_DATA_DIR;
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"forecast", "forecast --csv " + data + "/calibration.csv"},
        {"budget", "budget --preset paper"},
        {"corpus", "corpus count --docs " + data + "/fixtures/stream.ndjson --variants " + data +
                       "/fixtures/variants_colour.json --weighted"},
        {"lockin", "lockin --config " + data + "/fixtures/lockin_attack.json"},
        {"bbcp", "bbcp --config " + data + "/fixtures/bbcp_village.json"},
    };

    for (const auto& [name, command] : runs) {
        const fs::path dir_a = g_scratch / (name + "_a");
        const fs::path dir_b = g_scratch / (name + "_b");
        const fs::path dir_c = g_scratch / (name + "_c");
        fs::remove_all(dir_a);
        fs::remove_all(dir_b);
        fs::remove_all(dir_c);

        const auto first = run_cli(command + " --out " + dir_a.string());
        if (first.exit_code != 0) {
            c.require(false, name + " first run exited " + std::to_string(first.exit_code));
            return;
        }
        const auto second = run_cli("rerun --manifest " + (dir_a / "manifest.json").string() +
                                    " --out " + dir_b.string());
        const auto third = run_cli("rerun --manifest " + (dir_b / "manifest.json").string() +
                                   " --out " + dir_c.string());
        if (second.exit_code != 0 || third.exit_code != 0) {
            c.require(false, name + " rerun failed");
            return;
        }

        const auto manifest = json::parse(read_file(dir_a / "manifest.json"));
        std::vector<std::string> files = manifest.at("outputs").get<std::vector<std::string>>();
        files.push_back("manifest.json");
        for (const auto& file : files) {
            const auto a = read_file(dir_a / file);
            const auto b = read_file(dir_b / file);
            const auto cc = read_file(dir_c / file);
            if (a != b || b != cc) {
                c.require(false, name + "/" + file + " differs across reruns");
                return;
            }
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <locksim-cli> <scratch-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_scratch = argv[2];
    fs::create_directories(g_scratch);

    criterion_1_appendix_replication();
    criterion_2_peak_forecast();
    criterion_3_forecast_invariants();
    criterion_4_lockin_threshold();
    criterion_5_expanding_windows();
    criterion_6_bbcp_invariants();
    criterion_7_sobol_quality();
    criterion_8_corpus_oracle();
    criterion_9_determinism();

    if (g_failures.empty()) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << g_failures.size() << " criteria failed\n";
    return static_cast<int>(g_failures.size());
}
