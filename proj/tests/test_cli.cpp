#include "doctest.h"
#include "oracles.hpp"

#include "dremkit/cli.hpp"

#include <cstdlib>
#include <cstring>
#include <set>
#include <fstream>
#include <sstream>

using namespace dremkit;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dremkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory removed on scope exit.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("dremkit_test_" + name + "_" + std::to_string(std::rand()))) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& file, const std::string& text) const {
    std::ofstream(dir / file) << text;
    return dir / file;
  }
};

const char* kSmallCustom = R"({
  "mode": "custom", "domain": "ct",
  "grid": {"t0": 0, "step": 0.01, "horizon": 2},
  "theta": [1, -2],
  "phi": ["sin", "cos"],
  "bank": [{"A": -1, "b": 1, "c": 1}, {"A": -2, "b": 2, "c": 1}],
  "estimator": {"gradient_gamma": 1, "drem_gamma": 5}
})";

std::string expect_config_error(const std::string& text) {
  try {
    cli::parse_plan(text, "test");
  } catch (const cli::ConfigError& e) {
    return e.what();
  }
  FAIL("expected a configuration error for " << text);
  return {};
}

}  // namespace

TEST_CASE("doubles round-trip bit-exactly through the CSV writer") {
  std::mt19937_64 rng(31);
  std::vector<double> values = {0.0, -0.0, 1.0 / 3.0, 1e-310, 5e-324, 1.7976931348623157e308, -2.5, 0.1, 123456789.123456789};
  std::uniform_int_distribution<std::uint64_t> bits;
  while (values.size() < 5000) {
    double d;
    const std::uint64_t b = bits(rng);
    std::memcpy(&d, &b, sizeof d);
    if (std::isfinite(d)) values.push_back(d);
  }
  for (double v : values) {
    const double back = io::parse_double(io::format_double(v));
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }

  Scratch s("csv");
  io::CsvTable table{{"t", "x"}, {values, values}};
  io::write_csv(s.dir / "a.csv", table);
  const io::CsvTable read = io::read_csv(s.dir / "a.csv");
  CHECK(read.header == table.header);
  REQUIRE(read.rows() == values.size());
  CHECK(std::memcmp(read.column("x").data(), values.data(), values.size() * sizeof(double)) == 0);
  CHECK_THROWS(read.column("y"));
  CHECK_THROWS(io::parse_double("1.0abc"));
}

TEST_CASE("series table layout") {
  const TimeGrid g(0.0, 0.5, 3);
  const Trajectory th(g, SignalKind::Continuous, 2, 1, Eigen::MatrixXd::Ones(2, 3));
  const Trajectory aux = Trajectory::scalars(g, SignalKind::Continuous, Eigen::Vector3d(1, 2, 3));
  const EstimatorSeries s{"x", th, th, {{"Delta", aux}}, {}, Eigen::VectorXd::Zero(2)};
  const io::CsvTable t = io::series_table(s);
  CHECK(t.header == std::vector<std::string>{"t", "theta_hat_1", "theta_hat_2", "theta_tilde_1", "theta_tilde_2", "Delta"});
  CHECK(t.column("t") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(io::series_table(s, 1, 3).rows() == 2);
}

TEST_CASE("configuration diagnostics") {
  CHECK(expect_config_error("{\"mode\": \"identify\",\n  \"preset\": }").find("line 2") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "identify", "bogus": 1})").find("/bogus") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "warp"})").find("/mode") != std::string::npos);
  CHECK(expect_config_error(R"({"preset": "rich"})").find("/mode") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "ftc", "clip_threshold": 1.5})").find("/clip_threshold") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "ftc", "gamma": -1})").find("/gamma") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "ftc", "delay_window": 0.2005})").find("/delay_window") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "identify", "grid": {"step": 0}})").find("/grid") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "custom", "theta": [1, 2], "phi": ["sin"], "bank": []})").find("/phi") !=
        std::string::npos);
  CHECK(expect_config_error(R"({"mode": "custom", "domain": "ct", "theta": [1], "phi": ["sin"], "sliding_window": 2})")
            .find("/sliding_window") != std::string::npos);
  CHECK(expect_config_error(R"({"mode": "pe-check", "signal": {"source": "zero", "kind": "dt"}, "window": 1})")
            .find("/window") != std::string::npos);
}

TEST_CASE("plan parsing picks up presets and overrides") {
  const cli::Plan fig1 = cli::parse_plan(R"({"mode": "identify", "preset": "rich"})", "t");
  CHECK(fig1.mode == cli::Mode::Identify);
  CHECK(fig1.identify.plant.input.kind == InputSignal::Kind::Sinusoid);
  const cli::Plan ftc = cli::parse_plan(R"({"mode": "ftc", "preset": "pe", "gamma": 3, "theta": 4})", "t");
  CHECK(ftc.ftc.gamma == 3.0);
  CHECK(ftc.ftc.theta(17.0)(0) == 4.0);
  CHECK(cli::parse_plan(kSmallCustom, "t").custom.theta == Eigen::Vector2d(1, -2));
  CHECK(cli::eval_signal(nlohmann::json("cos"), 0.0, nullptr) == 1.0);
  CHECK(cli::eval_signal(nlohmann::json(2.5), 7.0, nullptr) == 2.5);
  const nlohmann::json sinusoid = {{"offset", 1.0}, {"terms", {{{"amplitude", 2.0}, {"frequency", 1.0}, {"phase", 0.0}}}}};
  CHECK(cli::eval_signal(sinusoid, 3.14159265358979323846 / 2, nullptr) == doctest::Approx(3.0));
}

TEST_CASE("every shipped config parses and runs") {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(DREMKIT_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    CAPTURE(entry.path().string());
    const cli::Plan plan = cli::load_plan(entry.path());
    CHECK_FALSE(plan.canonical.is_null());
  }
  CHECK(seen >= 8);
}

TEST_CASE("simulate writes CSVs and a complete manifest") {
  Scratch s("sim");
  const fs::path cfg = s.write("cfg.json", kSmallCustom);
  const fs::path out = s.dir / "out";
  const Result r = invoke({"simulate", "--config", cfg.string(), "--out", out.string()});
  REQUIRE(r.code == cli::kOk);

  const io::Manifest m = io::read_manifest(out / "manifest.json");
  CHECK(m.tool_version == cli::version());
  CHECK(m.config_hash.size() == 16);
  std::set<std::string> listed;
  for (const auto& e : m.files) listed.insert(e.file);
  for (const auto& entry : fs::directory_iterator(out)) CHECK(listed.count(entry.path().filename().string()) == 1);
  for (const auto& e : m.files) {
    CHECK(fs::exists(out / e.file));
    if (e.columns.empty()) continue;
    const io::CsvTable t = io::read_csv(out / e.file);
    CHECK(t.header == e.columns);
    CHECK(t.rows() == e.rows);
    CHECK(t.header[0] == "t");
    CHECK(t.header[1] == "theta_hat_1");
    CHECK(t.header[3] == "theta_tilde_1");
  }
  CHECK(listed.count("gradient.csv") == 1);
  CHECK(listed.count("drem.csv") == 1);
  CHECK(listed.count("config.json") == 1);

  // Same config, same hash; a rerun replaces its own files.
  const Result again = invoke({"simulate", "--config", cfg.string(), "--out", out.string()});
  CHECK(again.code == cli::kOk);
  CHECK(io::read_manifest(out / "manifest.json").config_hash == m.config_hash);

  // A directory holding unrelated files is refused.
  const fs::path foreign = s.dir / "foreign";
  fs::create_directories(foreign);
  std::ofstream(foreign / "notes.txt") << "keep me";
  CHECK(invoke({"simulate", "--config", cfg.string(), "--out", foreign.string()}).code == cli::kConfigError);
  CHECK(fs::exists(foreign / "notes.txt"));
}

TEST_CASE("exit codes") {
  Scratch s("codes");
  CHECK(invoke({"--help"}).code == cli::kOk);
  CHECK(invoke({}).code == cli::kConfigError);
  CHECK(invoke({"simulate"}).code == cli::kConfigError);
  CHECK(invoke({"simulate", "--config", (s.dir / "missing.json").string()}).code == cli::kConfigError);

  const Result unknown = invoke({"reproduce", "fig9", "--out", (s.dir / "x").string()});
  CHECK(unknown.code == cli::kConfigError);
  CHECK(unknown.err.find("fig1") != std::string::npos);

  const fs::path bad = s.write("bad.json", R"({"mode": "ftc", "clip_threshold": 1.5})");
  const Result r = invoke({"simulate", "--config", bad.string(), "--out", (s.dir / "o").string()});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("clip_threshold") != std::string::npos);

  const fs::path boom = s.write("boom.json", R"({"mode": "identify", "preset": "rich", "plant": {"a": 60},
                                                 "grid": {"step": 0.001, "horizon": 20}})");
  CHECK(invoke({"simulate", "--config", boom.string(), "--out", (s.dir / "b").string()}).code == cli::kNumericalFailure);

  const fs::path unstable = s.write("u.json", R"({"mode": "identify", "grid": {"step": 0.01, "horizon": 1},
                                                    "bank": [{"A": 1, "b": 1, "c": 1}, {"A": -1, "b": 1, "c": 1}]})");
  const Result u = invoke({"simulate", "--config", unstable.string(), "--out", (s.dir / "u").string()});
  CHECK(u.code == cli::kConfigError);
  CHECK(u.err.find("/bank/0") != std::string::npos);

  const fs::path custom = s.write("c.json", kSmallCustom);
  CHECK(invoke({"check-pe", "--config", custom.string(), "--out", (s.dir / "c").string()}).code == cli::kConfigError);
}

TEST_CASE("check-pe reports the certificate") {
  Scratch s("pe");
  const fs::path cfg = s.write("pe.json", R"({"mode": "pe-check", "signal": {"source": "sincos"}, "window": 6.283185307179586})");
  const Result r = invoke({"check-pe", "--config", cfg.string(), "--out", (s.dir / "o").string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("alpha_hat") != std::string::npos);
  CHECK(fs::exists(s.dir / "o" / "min_eigenvalues.csv"));
}

TEST_CASE("reproduce and the output-directory variable") {
  Scratch s("env");
  const fs::path dir = s.dir / "from_env";
  ::setenv(cli::kOutDirEnv, dir.string().c_str(), 1);
  CHECK(cli::resolve_out_dir("") == dir);
  CHECK(cli::resolve_out_dir("explicit") == fs::path("explicit"));
  const Result r = invoke({"reproduce", "ftc-pe-early"});
  ::unsetenv(cli::kOutDirEnv);
  REQUIRE(r.code == cli::kOk);
  const io::CsvTable t = io::read_csv(dir / "ftc_d.csv");
  CHECK(t.column("t").front() == 0.0);
  CHECK(t.column("t").back() == doctest::Approx(3.0));
  CHECK(cli::resolve_out_dir("") == fs::path("dremkit_out"));
}

TEST_CASE("the installed binary reports usage and exit codes") {
  const std::string bin = DREMKIT_BINARY;
  CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
  const int status = std::system((bin + " reproduce nope > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 1);
}
