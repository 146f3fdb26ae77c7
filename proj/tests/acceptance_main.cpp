// Acceptance suite: runs every acceptance criterion at its pinned tolerance
// and prints one PASS/FAIL line per criterion. Criterion 15 (byte-identical
// reruns) is exercised against the command-line tool when its path is given
// via --cli; the exit status is zero only if every criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "holoball/checks.hpp"

namespace fs = std::filesystem;
using holoball::CheckContext;
using holoball::CheckResult;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

bool run_determinism(const std::string& cli) {
    const fs::path base = fs::temp_directory_path() / "holoball_determinism";
    const fs::path out1 = base / "run1", out2 = base / "run2";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string args =
        " --suite mobius,fractional,gleason,riemann_stieltjes --seed 31415 --out ";
    if (std::system((cli + args + out1.string() + " > /dev/null").c_str()) != 0)
        return false;
    if (std::system((cli + args + out2.string() + " > /dev/null").c_str()) != 0)
        return false;
    bool same = true;
    std::size_t checked = 0;
    for (const auto& entry : fs::directory_iterator(out1)) {
        if (entry.path().extension() != ".csv") continue;
        ++checked;
        same = same && slurp(entry.path()) == slurp(out2 / entry.path().filename());
    }
    fs::remove_all(base);
    return same && checked > 0;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    CheckContext ctx;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
        if (arg == "--seed" && i + 1 < argc) ctx.seed = std::strtoull(argv[++i], nullptr, 10);
        if (arg == "--level" && i + 1 < argc) ctx.level = std::atoi(argv[++i]);
    }

    bool all_pass = true;
    for (int id = 1; id <= 14; ++id) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult res;
        try {
            res = holoball::run_criterion(id, ctx);
        } catch (const std::exception& e) {
            res.criterion = id;
            res.name = "criterion " + std::to_string(id);
            res.pass = false;
            res.detail = std::string(" error: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        std::printf("%s criterion %2d (%s) [%.1fs]%s\n", res.pass ? "PASS" : "FAIL",
                    id, res.name.c_str(), secs, res.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && res.pass;
    }

    if (!cli.empty()) {
        const bool det = run_determinism(cli);
        std::printf("%s criterion 15 (byte-identical reruns)\n",
                    det ? "PASS" : "FAIL");
        all_pass = all_pass && det;
    } else {
        std::printf("SKIP criterion 15 (no --cli path given)\n");
    }

    std::printf("%s\n", all_pass ? "ACCEPTANCE: ALL PASS" : "ACCEPTANCE: FAILURES");
    return all_pass ? 0 : 1;
}
