#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qtf/config.hpp"
#include "qtf/initial_conditions.hpp"
#include "qtf/snapshot.hpp"

using namespace qtf;

namespace {

const char* kBaseConfig = R"(
# generic run
[grid]
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
)";

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("qtf_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config parses and round-trips through the canonical form") {
    RunConfig cfg = parse_config_text(kBaseConfig);
    CHECK(cfg.n_axis == 32);
    CHECK(cfg.model.a == doctest::Approx(-0.2));
    CHECK(cfg.stepper.scheme == Scheme::imex2);
    CHECK(cfg.seed == 7);
    RunConfig again = parse_config_text(canonical_config_text(cfg));
    CHECK(config_hash(again) == config_hash(cfg));
}

TEST_CASE("config rejects unknown keys, sections, and bad values") {
    CHECK_THROWS(parse_config_text(std::string(kBaseConfig) +
                                   "\n[grid]\nbogus = 1\n"));
    CHECK_THROWS(parse_config_text(std::string(kBaseConfig) +
                                   "\n[nonsense]\nx = 1\n"));
    CHECK_THROWS(parse_config_text(std::string(kBaseConfig) +
                                   "\n[stepper]\nscheme = rk9\n"));
    CHECK_THROWS(parse_config_text(std::string(kBaseConfig) +
                                   "\n[grid]\nN_axis = 33\n"));
    CHECK_THROWS(parse_config_text(std::string(kBaseConfig) +
                                   "\n[model]\nc = -2\n"));
    CHECK_THROWS(parse_config_text("x = 1\n"));  // key outside any section
}

TEST_CASE("config overrides apply after the file content") {
    TempDir tmp;
    const auto path = tmp.path / "run.cfg";
    std::ofstream(path) << kBaseConfig;
    RunConfig cfg = load_config(path.string(), {"model.xi=0.05", "grid.N_axis=64"});
    CHECK(cfg.model.xi == doctest::Approx(0.05));
    CHECK(cfg.n_axis == 64);
    CHECK_THROWS(load_config(path.string(), {"model-xi 0.05"}));
    CHECK_THROWS(load_config((tmp.path / "missing.cfg").string(), {}));
}

TEST_CASE("config hash changes with any parameter") {
    RunConfig a = parse_config_text(kBaseConfig);
    RunConfig b = a;
    b.seed = 8;
    CHECK(config_hash(a) != config_hash(b));
    RunConfig c = a;
    c.model.nu = 2.0;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("initial-state generators produce admissible states") {
    RunConfig cfg = parse_config_text(kBaseConfig);
    SUBCASE("random-bandlimited") {
        SimState s = make_initial_state(cfg);
        CHECK(s.Q.norm_l2() == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(s.u.norm_l2() == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(divergence_defect(s.u) < 1e-13);
        CHECK(trace_defect(s.Q) < 1e-13);
    }
    SUBCASE("taylor-green") {
        cfg.generator = "taylor-green";
        SimState s = make_initial_state(cfg);
        CHECK(divergence_defect(s.u) < 1e-13);
        CHECK(s.u.max_abs_physical() > 0.0);
    }
    SUBCASE("uniaxial-stripe") {
        cfg.generator = "uniaxial-stripe";
        cfg.stripe_modulation = 2;
        SimState s = make_initial_state(cfg);
        CHECK(trace_defect(s.Q) < 1e-12);
        CHECK(symmetry_defect(s.Q) < 1e-12);
    }
}

TEST_CASE("snapshot files round-trip bit-exactly and verify their header") {
    TempDir tmp;
    auto grid = make_grid(2, 32);
    Field q = random_qtensor(grid, 2, 3, 0.5);
    const auto path = (tmp.path / "q.snap").string();
    write_snapshot(path, "Q", q, 0.625);

    SnapshotData snap = read_snapshot(path);
    CHECK(snap.name == "Q");
    CHECK(snap.time == doctest::Approx(0.625));
    CHECK(snap.field.shape() == std::vector<int>{2, 2});
    CHECK((snap.field - q).norm_l2() < 1e-13 * q.norm_l2());

    const std::string info = snapshot_info(path);
    CHECK(info.find("format-version 1") != std::string::npos);
    CHECK(info.find("N_axis 32") != std::string::npos);
}

TEST_CASE("snapshot reader rejects unknown format versions") {
    TempDir tmp;
    auto grid = make_grid(2, 32);
    Field q = Field::scalar(grid);
    const auto path = (tmp.path / "v.snap").string();
    write_snapshot(path, "f", q, 0.0);
    // corrupt the version line
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    in.close();
    content.replace(content.find("format-version 1"), 16, "format-version 9");
    std::ofstream(path, std::ios::binary) << content;
    CHECK_THROWS_WITH_AS(read_snapshot(path),
                         doctest::Contains("unknown format-version"),
                         std::runtime_error);
}

TEST_CASE("snapshot initial conditions feed back into a run config") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kBaseConfig);
    SimState s = make_initial_state(cfg);
    const auto qpath = (tmp.path / "q.snap").string();
    const auto upath = (tmp.path / "u.snap").string();
    write_snapshot(qpath, "Q", s.Q, 0.25);
    write_snapshot(upath, "u", s.u, 0.25);

    RunConfig cfg2 = cfg;
    cfg2.generator = "snapshot";
    cfg2.snapshot_q = qpath;
    cfg2.snapshot_u = upath;
    SimState restored = make_initial_state(cfg2);
    CHECK(restored.t == doctest::Approx(0.25));
    CHECK((restored.Q - s.Q).norm_l2() < 1e-12 * s.Q.norm_l2());
    CHECK((restored.u - s.u).norm_l2() < 1e-12 * s.u.norm_l2());
}
