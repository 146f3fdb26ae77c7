// Command-line front end: runs named verification suites with a fully
// serialized configuration echo, emitting per-suite CSV, a text summary and
// a JSON summary. Identical configurations produce byte-identical outputs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "holoball/checks.hpp"
#include "holoball/report.hpp"

namespace fs = std::filesystem;
using holoball::CheckContext;
using holoball::CheckResult;

namespace {

std::vector<std::string> split_csv_list(const std::string& arg) {
    std::vector<std::string> out;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::string> config_echo(std::uint64_t seed, int level,
                                     const std::vector<std::string>& suites,
                                     std::optional<int> n, std::optional<double> s) {
    std::vector<std::string> lines;
    lines.push_back("config seed = " + std::to_string(seed));
    lines.push_back("config level = " + std::to_string(level));
    std::string joined;
    for (const auto& name : suites) joined += (joined.empty() ? "" : ",") + name;
    lines.push_back("config suites = " + joined);
    lines.push_back("config n = " + (n ? std::to_string(*n) : std::string("default")));
    lines.push_back("config s = " + (s ? holoball::fmt_g17(*s) : std::string("default")));
    return lines;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"holoball: numerical function theory on the complex unit ball"};
    app.set_config("--config", "", "Read options from a key = value file");

    std::uint64_t seed = 12345;
    int level = 1;
    std::string suite_arg = "all";
    std::string out_dir = "holoball_out";
    int n_flag = -1;
    double s_flag = std::numeric_limits<double>::quiet_NaN();

    app.add_option("--seed", seed, "Base RNG seed (suites derive their own streams)");
    app.add_option("--level", level, "Quadrature resolution step (>= 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--suite", suite_arg,
                   "Comma-separated suite list, or 'all'; available: mobius, "
                   "gradients, carleson, fractional, atoms, gleason, "
                   "riemann_stieltjes, tent");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--n", n_flag, "Dimension override for parameterized suites");
    app.add_option("--s", s_flag, "Smoothness index override");

    CLI11_PARSE(app, argc, argv);

    std::optional<int> n_opt;
    if (n_flag > 0) n_opt = n_flag;
    std::optional<double> s_opt;
    if (!std::isnan(s_flag)) s_opt = s_flag;

    std::vector<std::string> suites;
    if (suite_arg == "all")
        suites = holoball::suite_names();
    else
        suites = split_csv_list(suite_arg);

    // Validate every selected suite against its hypotheses before any work.
    for (const auto& name : suites) {
        try {
            if (auto err = holoball::suite_validate(name, n_opt, s_opt)) {
                std::cerr << "config rejected for suite '" << name << "': " << *err
                          << "\n";
                return 2;
            }
        } catch (const std::exception& e) {
            std::cerr << "config rejected: " << e.what() << "\n";
            return 2;
        }
    }

    fs::create_directories(out_dir);
    CheckContext ctx;
    ctx.seed = seed;
    ctx.level = level;
    ctx.n_override = n_opt;
    ctx.s_override = s_opt;

    const auto echo = config_echo(seed, level, suites, n_opt, s_opt);
    nlohmann::ordered_json summary;
    summary["seed"] = seed;
    summary["level"] = level;
    summary["suites"] = nlohmann::ordered_json::array();

    bool all_pass = true;
    std::ostringstream text;
    for (const auto& line : echo) text << "# " << line << '\n';

    for (const auto& name : suites) {
        const std::vector<CheckResult> results = holoball::run_suite(name, ctx);
        holoball::CsvReport csv;
        csv.comments = echo;
        csv.comments.push_back("suite = " + name);
        nlohmann::ordered_json jsuite;
        jsuite["name"] = name;
        jsuite["criteria"] = nlohmann::ordered_json::array();
        bool first = true;
        for (const CheckResult& r : results) {
            if (first) {
                csv.header = r.csv_header;
                first = false;
            }
            for (const auto& row : r.csv_rows) csv.rows.push_back(row);
            if (!r.aux_csv_rows.empty()) {
                holoball::CsvReport aux;
                aux.comments = echo;
                aux.comments.push_back("suite = " + name);
                aux.header = r.aux_csv_header;
                aux.rows = r.aux_csv_rows;
                aux.write(fs::path(out_dir) / (r.aux_csv_name + ".csv"));
            }
            all_pass = all_pass && r.pass;
            text << (r.pass ? "PASS" : "FAIL") << " criterion " << r.criterion << " ("
                 << r.name << "):" << r.detail << '\n';
            nlohmann::ordered_json jc;
            jc["criterion"] = r.criterion;
            jc["name"] = r.name;
            jc["pass"] = r.pass;
            jc["detail"] = r.detail;
            jc["rows"] = r.csv_rows;
            jsuite["criteria"].push_back(jc);
        }
        csv.write(fs::path(out_dir) / (name + ".csv"));
        summary["suites"].push_back(jsuite);
    }
    summary["all_pass"] = all_pass;

    {
        std::ofstream os(fs::path(out_dir) / "summary.txt", std::ios::binary);
        os << text.str();
        os << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << '\n';
    }
    {
        std::ofstream os(fs::path(out_dir) / "summary.json", std::ios::binary);
        os << summary.dump(2) << '\n';
    }
    std::cout << text.str() << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << '\n';
    return all_pass ? 0 : 1;
}
