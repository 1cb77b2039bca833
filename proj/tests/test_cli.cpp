// End-to-end checks of the CLI contract: exit codes, hand-counted fixtures,
// flag behaviour. Usage: test_cli <locksim-cli-path> <scratch-dir>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "subprocess.hpp"

using nlohmann::json;
using testutil::run_command;

namespace {

std::string g_cli;
int g_failures = 0;

void expect(bool ok, const std::string& what) {
    std::cout << (ok ? "ok: " : "FAILED: ") << what << "\n";
    if (!ok) ++g_failures;
}

testutil::CommandResult cli(const std::string& args) { return run_command(g_cli + " " + args); }

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: test_cli <locksim-cli> <scratch-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    const std::string scratch = argv[2];
    std::filesystem::create_directories(scratch);
    const std::string data = LOCKSIM_DATA_DIR;

    {
        const auto r = cli("corpus count --docs " + data + "/fixtures/tiny.ndjson --variants " +
                           data + "/fixtures/variants_colour.json");
        expect(r.exit_code == 0, "corpus count exits 0");
        const auto j = json::parse(r.output);
        expect(j.at("counts").at("colour") == 2.0 && j.at("counts").at("color") == 1.0,
               "three-token fixture matches the hand count");
        expect(j.at("majority") == "colour", "fixture majority is colour");
    }

    {
        const auto r = cli("lockin --config " + data + "/fixtures/lockin_noattack.json");
        expect(r.exit_code == 3, "no attacker means no lock-in, exit 3");
        const auto ok = cli("lockin --config " + data + "/fixtures/lockin_attack.json");
        expect(ok.exit_code == 0, "attack fixture locks in, exit 0");
    }

    {
        const auto r = cli("forecast --csv " + data + "/calibration.csv --normalize --json");
        expect(r.exit_code == 0, "forecast --normalize exits 0");
        const auto j = json::parse(r.output);
        const double amplitude = j.at("curve").at("amplitude").get<double>();
        const double sigma = j.at("curve").at("sigma_seconds").get<double>();
        expect(std::abs(amplitude * sigma * std::sqrt(2.0 * M_PI) - 1.0) < 1e-12,
               "normalized amplitude satisfies the unit-area identity");
    }

    {
        const auto r = cli("budget --frequency 0 --json");
        expect(r.exit_code == 0, "budget --frequency 0 exits 0");
        const auto j = json::parse(r.output);
        expect(j.at("total_with_buffer_mw") == 0.01, "zero frequency leaves only the buffer");

        expect(cli("budget --preset bogus").exit_code == 1, "unknown preset exits 1");
        expect(cli("lockin --config /nonexistent.json").exit_code == 1,
               "missing config exits 1");
        expect(cli("forecast --csv /nonexistent.csv").exit_code == 1, "missing CSV exits 1");
    }

    {
        const auto r = cli("lockin --config " + data + "/fixtures/lockin_attack.json --search");
        expect(r.exit_code == 0, "threshold search exits 0");
        const auto j = json::parse(r.output);
        const double threshold = j.at("required_power_mw").get<double>();
        expect(threshold > 0.0 && threshold < 23.0,
               "fixture threshold lands below the 23 MW attacker");
    }

    {
        const auto r = cli("lockin --config " + data +
                           "/fixtures/lockin_attack.json --ticks 5 --seed 9");
        expect(r.exit_code == 0 && r.output.find("of 5") != std::string::npos,
               "--ticks override reaches the simulation");
    }

    {
        const auto r = cli("corpus count --docs " + data + "/fixtures/stream.ndjson --variants " +
                           data + "/fixtures/variants_colour.json --from 2022-01-02T00:00:00Z "
                           "--to 2022-01-04T00:00:00Z");
        const auto j = json::parse(r.output);
        expect(j.at("counts").at("color") == 3.0 && j.at("counts").at("colour") == 2.0,
               "window bounds select the middle two documents");
        expect(j.at("majority") == "color", "windowed majority follows the filtered counts");
    }

    {
        const auto r = cli("corpus style colour color realise realize");
        const auto j = json::parse(r.output);
        expect(j.at("colour").get<double>() > j.at("color").get<double>(),
               "style prefers colour over color");
        expect(j.at("realise").get<double>() > j.at("realize").get<double>(),
               "style prefers realise over realize");
    }

    {
        const auto a = cli("budget --preset consistent --json");
        const auto b = cli("budget --preset consistent --json");
        expect(a.output == b.output, "repeated runs print identical bytes");
    }

    {
        const std::string cfg_path = scratch + "/budget_leap.json";
        std::ofstream cfg(cfg_path);
        cfg << R"({"preset": "consistent", "hours_per_year": 8766})";
        cfg.close();

        const auto r = cli("budget --config " + cfg_path + " --json");
        expect(r.exit_code == 0, "budget --config exits 0");
        const auto j = json::parse(r.output);
        expect(j.at("preset") == "consistent", "preset comes from the config file");
        const double energy = j.at("energy_twh").get<double>();
        expect(std::abs(j.at("average_power_gw").get<double>() - energy * 1000.0 / 8766.0) < 1e-9,
               "leap-year hours flow through the derivation");
        expect(j.at("average_power_gw") == j.at("attack_input_power_gw"),
               "consistent preset feeds the derived power into the attack");

        const auto overridden = cli("budget --config " + cfg_path + " --preset paper --json");
        expect(json::parse(overridden.output).at("attack_input_power_gw") == 26.712328,
               "a --preset flag overrides the config file");
    }

    if (g_failures == 0) {
        std::cout << "all CLI checks passed\n";
        return 0;
    }
    std::cout << g_failures << " CLI checks failed\n";
    return 1;
}
