// End-to-end smoke tests driving the installed binary through a shell.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("teamform_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

int run_cli(const std::string& args, const fs::path& out_file) {
    std::string cmd = std::string(TEAMFORM_CLI_PATH) + " " + args + " > " + out_file.string() +
                      " 2>&1";
    int rc = std::system(cmd.c_str());
    return rc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("generate, solve, run, chart") {
    TempDir dir;
    fs::path log = dir.path / "out.txt";

    CHECK(run_cli("gen --kind triangular --n 6 --out " + (dir.path / "g6.net").string(), log) == 0);
    CHECK(fs::exists(dir.path / "g6.net"));

    CHECK(run_cli("oracle " + (dir.path / "g6.net").string(), log) == 0);
    std::string oracle_out = slurp(log);
    CHECK(oracle_out.find("d_star 0") != std::string::npos);
    CHECK(oracle_out.find("stable_exists true") != std::string::npos);
    CHECK(oracle_out.find("match 1 1") != std::string::npos);

    // save the oracle witness and check it through the verify subcommand
    {
        std::ofstream m(dir.path / "diag.match");
        for (int i = 1; i <= 6; ++i) m << "match " << i << " " << i << "\n";
    }
    CHECK(run_cli("verify " + (dir.path / "g6.net").string() + " " +
                      (dir.path / "diag.match").string(),
                  log) == 0);
    CHECK(slurp(log).find("deficit 0") != std::string::npos);

    CHECK(run_cli("run " + (dir.path / "g6.net").string() + " --seed 5 --out " +
                      (dir.path / "traj.csv").string(),
                  log) == 0);
    std::string traj = slurp(dir.path / "traj.csv");
    CHECK(traj.rfind("round,deficit", 0) == 0);
    CHECK(traj.find("# stop_reason=stable") != std::string::npos);

    // starting from a stable matching file the run ends after zero rounds
    CHECK(run_cli("run " + (dir.path / "g6.net").string() + " --init " +
                      (dir.path / "diag.match").string() + " --seed 5 --out " +
                      (dir.path / "traj0.csv").string(),
                  log) == 0);
    CHECK(slurp(dir.path / "traj0.csv").find("rounds=0") != std::string::npos);

    CHECK(run_cli("chart " + (dir.path / "traj.csv").string() + " --kind lines --out " +
                      (dir.path / "traj.svg").string(),
                  log) == 0);
    CHECK(slurp(dir.path / "traj.svg").rfind("<svg", 0) == 0);

    CHECK(run_cli("count --n 6 --gamma 0.5", log) == 0);
    CHECK(slurp(log).find("# total=63") != std::string::npos);

    CHECK(run_cli("tree --m 4 --walks 5 --seed 2", log) == 0);
    CHECK(slurp(log).rfind("sample,steps", 0) == 0);

    CHECK(run_cli("gen --kind random --n 8 --m 16 --rho 0.4 --seed 9 --constraint capped --out " +
                      (dir.path / "r.net").string(),
                  log) == 0);
    CHECK(run_cli("fig5 --pair 6x12 --eps 0.9 --eps 0.5 --networks 1 --runs 2 --rho 0.5 "
                  "--seed 4 --out " + (dir.path / "fig5.csv").string(),
                  log) == 0);
    CHECK(slurp(dir.path / "fig5.csv").rfind("n,m,eps", 0) == 0);

    // config file drives fig4; flags override it
    {
        std::ofstream cfg(dir.path / "exp.cfg");
        cfg << "n_list = 3,4\nruns_per_network = 2\nseed_base = 6\n";
    }
    CHECK(run_cli("fig4 --config " + (dir.path / "exp.cfg").string() + " --runs 3 --out " +
                      (dir.path / "fig4.csv").string(),
                  log) == 0);
    std::string fig4_csv = slurp(dir.path / "fig4.csv");
    CHECK(fig4_csv.find("3,stable") != std::string::npos);
    CHECK(fig4_csv.find(",3\n") != std::string::npos);  // overridden replication count

    // failures surface as nonzero exits
    CHECK(run_cli("oracle " + (dir.path / "missing.net").string(), log) != 0);
    CHECK(run_cli("gen --kind nonsense", log) != 0);
}
