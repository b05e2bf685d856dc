// End-to-end checks of the qtf binary: exit codes, output files, and
// bitwise determinism. The binary path comes from the build system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

#ifndef QTF_BINARY_PATH
#error "QTF_BINARY_PATH must be defined by the build"
#endif

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qtf_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()));
        fs::create_directories(path);
    }
    static int counter() {
        static int c = 0;
        return c++;
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QTF_BINARY_PATH) + " " + args +
                            " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string write_config(const TempDir& tmp, const std::string& extra = "") {
    const auto path = tmp.path / "run.cfg";
    std::ofstream out(path);
    out << R"([grid]
d = 2
N_axis = 32
L_box = 1.0
[model]
a = -0.2
b = 1.0
c = 1.0
L = 1.0
Gamma = 1.0
nu = 1.0
lambda = 1.0
xi = 0.3
d_target = 2
[stepper]
dt = 1e-3
scheme = imex2
T_final = 0.01
cadence = 1
[regularization]
enabled = false
n = 4
eps = 0.1
[initial]
generator = random-bandlimited
seed = 7
amplitude_q = 0.2
amplitude_u = 0.2
[output]
directory = out
snapshot_cadence = 0
)" << extra;
    return path.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("simulate: writes diagnostics CSV with header and config hash") {
    TempDir tmp;
    const std::string cfg = write_config(tmp);
    const auto out = tmp.path / "o1";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out.string()) == 0);
    const std::string csv = slurp(out / "diagnostics.csv");
    CHECK(csv.find("# config-hash=") == 0);
    CHECK(csv.find("t,E,kinetic,free_energy,visc,rot,residual,H1_Q,L2_u,max_u,"
                   "E_plus_M_Q2") != std::string::npos);
    // 11 diagnostic rows for 10 steps at cadence 1, plus header and hash
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 13);
}

TEST_CASE("simulate: identical config and seed give bitwise-identical output") {
    TempDir tmp;
    const std::string cfg = write_config(tmp);
    const auto o1 = tmp.path / "o1";
    const auto o2 = tmp.path / "o2";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + o1.string()) == 0);
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + o2.string()) == 0);
    CHECK(slurp(o1 / "diagnostics.csv") == slurp(o2 / "diagnostics.csv"));
}

TEST_CASE("simulate: zero initial data produces all-zero diagnostics") {
    TempDir tmp;
    const std::string cfg =
        write_config(tmp, "[initial]\namplitude_q = 0\namplitude_u = 0\n");
    const auto out = tmp.path / "zero";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out.string()) == 0);
    std::ifstream in(out / "diagnostics.csv");
    std::string line;
    std::getline(in, line);  // hash
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        // every numeric column but t must be exactly zero
        const auto first_comma = line.find(',');
        std::string rest = line.substr(first_comma + 1);
        for (auto& c : rest)
            if (c == ',') c = ' ';
        std::istringstream ss(rest);
        double v;
        while (ss >> v) CHECK(v == 0.0);
    }
}

TEST_CASE("config errors exit with code 2") {
    TempDir tmp;
    const std::string cfg = write_config(tmp, "[grid]\nbogus = 3\n");
    CHECK(run_cli("simulate --config " + cfg) == 2);
    CHECK(run_cli("simulate --config /nonexistent.cfg") == 2);
    CHECK(run_cli("bogus-subcommand") == 2);
}

TEST_CASE("numerical aborts exit with code 3") {
    TempDir tmp;
    const std::string cfg = write_config(
        tmp, "[stepper]\ndt = 50\nT_final = 5000\n[initial]\namplitude_q = "
             "5\namplitude_u = 5\n");
    const auto out = tmp.path / "blow";
    CHECK(run_cli("simulate --config " + cfg + " --out " + out.string()) == 3);
}

TEST_CASE("twin: zero perturbation keeps Phi at exactly zero") {
    TempDir tmp;
    const std::string cfg = write_config(tmp);
    const auto out = tmp.path / "twin0";
    REQUIRE(run_cli("twin --config " + cfg + " --out " + out.string() +
                    " --perturb-amplitude 0") == 0);
    std::ifstream in(out / "twin.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "t,Phi,dPhi_dt,mu_Phi,chi_emp,envelope,N_t");
    while (std::getline(in, line)) {
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        const double phi = std::stod(line.substr(a + 1, b - a - 1));
        CHECK(phi <= 1e-24);
    }
}

TEST_CASE("twin: perturbed run emits a dominating envelope and exits 0") {
    TempDir tmp;
    const std::string cfg = write_config(tmp);
    const auto out = tmp.path / "twin1";
    REQUIRE(run_cli("twin --config " + cfg + " --out " + out.string() +
                    " --perturb-amplitude 1e-6") == 0);
    std::ifstream in(out / "twin.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        std::vector<double> cols;
        std::istringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
        REQUIRE(cols.size() == 7);
        CHECK(cols[1] <= cols[5] * (1.0 + 1e-9) + 1e-300);  // Phi <= envelope
        ++rows;
    }
    CHECK(rows == 11);
}

TEST_CASE("audit subcommand passes on clean seeds and writes its CSV") {
    TempDir tmp;
    const std::string cfg = write_config(tmp, "[grid]\nN_axis = 32\n");
    const auto out = tmp.path / "aud";
    REQUIRE(run_cli("audit lyapunov --config " + cfg + " --out " + out.string() +
                    " --seeds 2") == 0);
    const std::string csv = slurp(out / "audit_lyapunov.csv");
    CHECK(csv.find("identity,value,scale,ratio,pass") != std::string::npos);
    CHECK(csv.find("J3-JJ3") != std::string::npos);
    REQUIRE(run_cli("audit uniqueness --config " + cfg + " --out " +
                    out.string() + " --seeds 2") == 0);
}

TEST_CASE("lp-check: zero trials passes with an empty report; bad name exits 2") {
    TempDir tmp;
    const auto out = tmp.path / "lp";
    CHECK(run_cli("lp-check bernstein --grid 32 --trials 0 --seed 1 --out " +
                  out.string()) == 0);
    const std::string csv = slurp(out / "lp_bernstein.csv");
    CHECK(csv.find("check-name,grid,trial-seed,lhs,rhs,ratio") == 0);
    CHECK(run_cli("lp-check nonsense --grid 32 --trials 1 --out " +
                  out.string()) == 2);
    CHECK(run_cli("lp-check bernstein --grid 32 --trials 20 --seed 3 --out " +
                  out.string()) == 0);
}

TEST_CASE("snapshot-info prints the header of files written by simulate") {
    TempDir tmp;
    const std::string cfg =
        write_config(tmp, "[output]\nsnapshot_cadence = 5\n");
    const auto out = tmp.path / "snaps";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "Q_0.snap"));
    CHECK(run_cli("snapshot-info " + (out / "Q_0.snap").string()) == 0);
    CHECK(run_cli("snapshot-info /nonexistent.snap") == 2);
}

TEST_CASE("lp-check product-law rejects out-of-range regularities with exit 2") {
    TempDir tmp;
    const auto out = tmp.path / "lp2";
    CHECK(run_cli("lp-check product-law --grid 32 --trials 2 --s 0.5 --t -0.5 "
                  "--out " + out.string()) == 2);
    CHECK(run_cli("lp-check product-law --grid 32 --trials 2 --s 1.5 --t 0.5 "
                  "--out " + out.string()) == 2);
    CHECK(run_cli("lp-check product-law --grid 32 --trials 5 --s 0.25 --t 0.5 "
                  "--out " + out.string()) == 0);
}
