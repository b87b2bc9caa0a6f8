#include "dremkit/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dremkit::cli {

using json = nlohmann::json;

namespace {

class Parser {
 public:
  explicit Parser(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ConfigError(origin_ + ": " + (path.empty() ? std::string("/") : path) + ": " + msg);
  }

  void expect_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) const {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        fail(path + "/" + key, "unknown field (expected one of: " + list + ")");
      }
    }
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
  }

  double number_or(const json& obj, const std::string& path, const char* key, double fallback) const {
    return obj.contains(key) ? number(obj[key], path + "/" + key) : fallback;
  }

  double positive_or(const json& obj, const std::string& path, const char* key, double fallback) const {
    const double v = number_or(obj, path, key, fallback);
    if (!(v > 0.0)) fail(path + "/" + key, "must be positive");
    return v;
  }

  Index integer(const json& j, const std::string& path) const {
    const double v = number(j, path);
    if (v != std::floor(v)) fail(path, "expected an integer");
    return static_cast<Index>(v);
  }

  bool boolean_or(const json& obj, const std::string& path, const char* key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail(path + "/" + key, "expected true or false");
    return obj[key].get<bool>();
  }

  std::string choice(const json& j, const std::string& path, std::initializer_list<std::string_view> options) const {
    std::string list;
    for (auto o : options) list += (list.empty() ? "" : ", ") + std::string(o);
    if (!j.is_string()) fail(path, "expected one of: " + list);
    const auto s = j.get<std::string>();
    for (auto o : options)
      if (s == o) return s;
    fail(path, "'" + s + "' is not one of: " + list);
  }

  Eigen::VectorXd vector(const json& j, const std::string& path) const {
    if (j.is_number()) return Eigen::VectorXd::Constant(1, number(j, path));
    if (!j.is_array() || j.empty()) fail(path, "expected a number or a non-empty array of numbers");
    Eigen::VectorXd v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], path + "/" + std::to_string(i));
    return v;
  }

  Eigen::MatrixXd matrix(const json& j, const std::string& path) const {
    if (j.is_number()) return Eigen::MatrixXd::Constant(1, 1, number(j, path));
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
      fail(path, "expected a number or a non-empty array of rows");
    const std::size_t cols = j[0].size();
    Eigen::MatrixXd M(static_cast<Index>(j.size()), static_cast<Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
      const std::string rp = path + "/" + std::to_string(r);
      if (!j[r].is_array() || j[r].size() != cols) fail(rp, "rows must all have " + std::to_string(cols) + " entries");
      for (std::size_t c = 0; c < cols; ++c)
        M(static_cast<Index>(r), static_cast<Index>(c)) = number(j[r][c], rp + "/" + std::to_string(c));
    }
    return M;
  }

  TimeGrid grid(const json& obj, const std::string& path, const TimeGrid& fallback) const {
    if (!obj.contains("grid")) return fallback;
    const json& g = obj["grid"];
    const std::string gp = path + "/grid";
    expect_object(g, gp, {"t0", "step", "horizon"});
    const double t0 = number_or(g, gp, "t0", fallback.t0());
    const double step = positive_or(g, gp, "step", fallback.step());
    const double horizon = number_or(g, gp, "horizon", fallback.horizon());
    if (horizon < 0.0) fail(gp + "/horizon", "must be non-negative");
    if (horizon / step > 5e7) fail(gp, "more than 5e7 samples requested");
    return TimeGrid::spanning(t0, step, horizon);
  }

  /// Number, "sin", "cos", "phi:i" (1-based, when `phi_dim` > 0) or
  /// {"offset": c, "terms": [{"amplitude", "frequency", "phase"}]}.
  void signal(const json& j, const std::string& path, Index phi_dim) const {
    if (j.is_number()) {
      number(j, path);
      return;
    }
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "sin" || s == "cos") return;
      if (s.rfind("phi:", 0) == 0) {
        if (phi_dim == 0) fail(path, "regressor references are not available here");
        int idx = 0;
        const auto res = std::from_chars(s.data() + 4, s.data() + s.size(), idx);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || idx < 1 || idx > phi_dim)
          fail(path, "'" + s + "' must name a regressor component phi:1..phi:" + std::to_string(phi_dim));
        return;
      }
      fail(path, "unknown signal '" + s + "' (expected sin, cos or phi:i)");
    }
    expect_object(j, path, {"offset", "terms"});
    number_or(j, path, "offset", 0.0);
    if (j.contains("terms")) {
      const json& terms = j["terms"];
      if (!terms.is_array()) fail(path + "/terms", "expected an array");
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + "/terms/" + std::to_string(i);
        expect_object(terms[i], tp, {"amplitude", "frequency", "phase"});
        number_or(terms[i], tp, "amplitude", 1.0);
        number_or(terms[i], tp, "frequency", 1.0);
        number_or(terms[i], tp, "phase", 0.0);
      }
    }
  }

  std::vector<json> signal_vector(const json& j, const std::string& path, Index phi_dim) const {
    std::vector<json> out;
    if (!j.is_array()) {
      signal(j, path, phi_dim);
      out.push_back(j);
      return out;
    }
    if (j.empty()) fail(path, "expected a non-empty array");
    for (std::size_t i = 0; i < j.size(); ++i) {
      signal(j[i], path + "/" + std::to_string(i), phi_dim);
      out.push_back(j[i]);
    }
    return out;
  }

  std::vector<ChannelSpec> bank(const json& j, const std::string& path, Index phi_dim) const {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of channels");
    std::vector<ChannelSpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string cp = path + "/" + std::to_string(i);
      const json& ch = j[i];
      expect_object(ch, cp, {"A", "b", "c", "feedthrough", "delay_gain", "delay", "x0"});
      ChannelSpec spec;
      spec.A = ch.contains("A") ? matrix(ch["A"], cp + "/A") : Eigen::MatrixXd(0, 0);
      const Index n = spec.A.rows();
      if (spec.A.rows() != spec.A.cols()) fail(cp + "/A", "must be square");
      if (n > 0) {
        if (!ch.contains("b") || !ch.contains("c")) fail(cp, "a state matrix A requires b and c");
        spec.b = signal_vector(ch["b"], cp + "/b", phi_dim);
        spec.c = signal_vector(ch["c"], cp + "/c", phi_dim);
        if (static_cast<Index>(spec.b.size()) != n) fail(cp + "/b", "must have " + std::to_string(n) + " entries");
        if (static_cast<Index>(spec.c.size()) != n) fail(cp + "/c", "must have " + std::to_string(n) + " entries");
      } else if (ch.contains("b") || ch.contains("c")) {
        fail(cp, "b and c require a state matrix A");
      }
      if (ch.contains("feedthrough")) {
        signal(ch["feedthrough"], cp + "/feedthrough", phi_dim);
        spec.feedthrough = ch["feedthrough"];
      }
      if (ch.contains("delay_gain")) {
        signal(ch["delay_gain"], cp + "/delay_gain", phi_dim);
        spec.delay_gain = ch["delay_gain"];
      }
      spec.delay = number_or(ch, cp, "delay", 0.0);
      if (spec.delay < 0.0) fail(cp + "/delay", "must be non-negative");
      if (ch.contains("x0")) {
        spec.x0 = vector(ch["x0"], cp + "/x0");
        if (spec.x0.size() != n) fail(cp + "/x0", "must have " + std::to_string(n) + " entries");
      }
      out.push_back(std::move(spec));
    }
    return out;
  }

  std::optional<std::pair<double, double>> output(const json& obj, const std::string& path) const {
    if (!obj.contains("output")) return std::nullopt;
    const std::string op = path + "/output";
    expect_object(obj["output"], op, {"window"});
    if (!obj["output"].contains("window")) return std::nullopt;
    const json& w = obj["output"]["window"];
    if (!w.is_array() || w.size() != 2) fail(op + "/window", "expected [t_start, t_end]");
    const double a = number(w[0], op + "/window/0");
    const double b = number(w[1], op + "/window/1");
    if (!(a <= b)) fail(op + "/window", "t_start must not exceed t_end");
    return std::make_pair(a, b);
  }

  void estimator(const json& obj, const std::string& path, double& gradient_gamma, Eigen::VectorXd& drem_gamma,
                 Eigen::VectorXd& theta_hat0, bool& feedforward) const {
    if (!obj.contains("estimator")) return;
    const json& e = obj["estimator"];
    const std::string ep = path + "/estimator";
    expect_object(e, ep, {"gradient_gamma", "drem_gamma", "theta_hat0", "feedforward"});
    gradient_gamma = positive_or(e, ep, "gradient_gamma", gradient_gamma);
    if (e.contains("drem_gamma")) {
      drem_gamma = vector(e["drem_gamma"], ep + "/drem_gamma");
      for (Index i = 0; i < drem_gamma.size(); ++i)
        if (!(drem_gamma(i) > 0.0)) fail(ep + "/drem_gamma", "gains must be positive");
    }
    if (e.contains("theta_hat0")) theta_hat0 = vector(e["theta_hat0"], ep + "/theta_hat0");
    feedforward = boolean_or(e, ep, "feedforward", feedforward);
  }

  void identify(const json& doc, Plan& plan) const {
    expect_object(doc, "", {"mode", "preset", "grid", "plant", "regressor", "bank", "estimator", "tolerance", "output"});
    const std::string preset =
        doc.contains("preset") ? choice(doc["preset"], "/preset", {"rich", "constant"}) : std::string("rich");
    IdentificationConfig cfg = IdentificationConfig::preset(preset == "rich" ? InputKind::Rich : InputKind::Constant);
    cfg.grid = grid(doc, "", cfg.grid);
    if (doc.contains("plant")) {
      const json& p = doc["plant"];
      expect_object(p, "/plant", {"a", "b", "y0", "input"});
      cfg.plant.a = number_or(p, "/plant", "a", cfg.plant.a);
      cfg.plant.b = number_or(p, "/plant", "b", cfg.plant.b);
      cfg.plant.y0 = number_or(p, "/plant", "y0", cfg.plant.y0);
      if (p.contains("input")) {
        const json& in = p["input"];
        expect_object(in, "/plant/input", {"type", "amplitude", "frequency", "phase", "level"});
        if (!in.contains("type")) fail("/plant/input/type", "missing (sinusoid or constant)");
        const auto type = choice(in["type"], "/plant/input/type", {"sinusoid", "constant"});
        if (type == "sinusoid") {
          if (in.contains("level")) fail("/plant/input/level", "not used by a sinusoid input");
          cfg.plant.input = InputSignal::sinusoid(number_or(in, "/plant/input", "amplitude", 1.0),
                                                  number_or(in, "/plant/input", "frequency", 1.0),
                                                  number_or(in, "/plant/input", "phase", 0.0));
        } else {
          for (const char* k : {"amplitude", "frequency", "phase"})
            if (in.contains(k)) fail(std::string("/plant/input/") + k, "not used by a constant input");
          cfg.plant.input = InputSignal::constant(number_or(in, "/plant/input", "level", 0.0));
        }
      }
    }
    if (doc.contains("regressor")) {
      const json& r = doc["regressor"];
      expect_object(r, "/regressor", {"lambda", "y_filter0", "u_filter0"});
      cfg.regressor.lambda = positive_or(r, "/regressor", "lambda", cfg.regressor.lambda);
      cfg.regressor.y_filter0 = number_or(r, "/regressor", "y_filter0", 0.0);
      cfg.regressor.u_filter0 = number_or(r, "/regressor", "u_filter0", 0.0);
    }
    if (doc.contains("bank")) {
      plan.identify_bank = bank(doc["bank"], "/bank", 2);
      if (plan.identify_bank.size() != 2) fail("/bank", "the first-order plant needs exactly 2 channels");
    }
    estimator(doc, "", cfg.gradient_gamma, cfg.drem_gamma, cfg.theta_hat0, cfg.with_feedforward);
    if (cfg.drem_gamma.size() != 1 && cfg.drem_gamma.size() != 2)
      fail("/estimator/drem_gamma", "expected 1 or 2 gains");
    if (cfg.theta_hat0.size() != 0 && cfg.theta_hat0.size() != 2)
      fail("/estimator/theta_hat0", "expected 2 entries");
    cfg.tolerance = positive_or(doc, "", "tolerance", cfg.tolerance);
    plan.identify = std::move(cfg);
  }

  void ftc(const json& doc, Plan& plan) const {
    expect_object(doc, "", {"mode", "preset", "grid", "delta", "theta", "gamma", "clip_threshold", "delay_window",
                            "use_delayed_snapshot", "theta_hat0", "tolerance", "output"});
    const std::string preset = doc.contains("preset") ? choice(doc["preset"], "/preset", {"pe", "nonpe"}) : "pe";
    FtcScenarioConfig cfg = FtcScenarioConfig::preset(preset == "pe" ? DeltaKind::Sinusoid : DeltaKind::Inverse);
    cfg.grid = grid(doc, "", cfg.grid);
    if (doc.contains("delta"))
      cfg.delta = choice(doc["delta"], "/delta", {"sin", "inverse"}) == "sin" ? DeltaKind::Sinusoid : DeltaKind::Inverse;
    if (doc.contains("theta")) {
      const json& th = doc["theta"];
      if (th.is_number()) {
        cfg.theta = ThetaSchedule::constant(Eigen::VectorXd::Constant(1, number(th, "/theta")));
      } else if (th.is_string()) {
        choice(th, "/theta", {"jump_and_ramp"});
        cfg.theta = ThetaSchedule::jump_and_ramp();
      } else {
        expect_object(th, "/theta", {"pieces"});
        const json& pieces = th.contains("pieces") ? th["pieces"] : json();
        if (!pieces.is_array() || pieces.empty()) fail("/theta/pieces", "expected a non-empty array");
        std::vector<ThetaSchedule::Piece> out;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
          const std::string pp = "/theta/pieces/" + std::to_string(i);
          expect_object(pieces[i], pp, {"start", "value", "slope"});
          if (!pieces[i].contains("start") || !pieces[i].contains("value")) fail(pp, "start and value are required");
          const double start = number(pieces[i]["start"], pp + "/start");
          if (!out.empty() && !(start > out.back().start)) fail(pp + "/start", "starts must increase strictly");
          out.push_back({start, Eigen::VectorXd::Constant(1, number(pieces[i]["value"], pp + "/value")),
                         Eigen::VectorXd::Constant(1, number_or(pieces[i], pp, "slope", 0.0))});
        }
        cfg.theta = ThetaSchedule(std::move(out));
      }
    }
    cfg.gamma = positive_or(doc, "", "gamma", cfg.gamma);
    cfg.clip_threshold = number_or(doc, "", "clip_threshold", cfg.clip_threshold);
    if (!(cfg.clip_threshold > 0.0 && cfg.clip_threshold < 1.0)) fail("/clip_threshold", "must lie in (0, 1)");
    cfg.delay_window = positive_or(doc, "", "delay_window", cfg.delay_window);
    const double steps = cfg.delay_window / cfg.grid.step();
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
      fail("/delay_window", "must be a whole number of grid steps");
    cfg.use_delayed_snapshot = boolean_or(doc, "", "use_delayed_snapshot", cfg.use_delayed_snapshot);
    cfg.theta_hat0 = number_or(doc, "", "theta_hat0", cfg.theta_hat0);
    cfg.tolerance = positive_or(doc, "", "tolerance", cfg.tolerance);
    plan.ftc = std::move(cfg);
  }

  void pe_check(const json& doc, Plan& plan) const {
    expect_object(doc, "", {"mode", "signal", "window", "threshold", "output"});
    PeCheckSpec spec;
    spec.threshold = positive_or(doc, "", "threshold", spec.threshold);
    if (!doc.contains("signal")) fail("/signal", "missing");
    const json& s = doc["signal"];
    if (!s.is_object() || !s.contains("source")) fail("/signal/source", "missing");
    const auto source = choice(s["source"], "/signal/source", {"counterexample", "sincos", "zero", "sinusoids"});
    if (source == "counterexample") {
      expect_object(s, "/signal", {"source", "horizon", "max_window"});
      spec.source = PeCheckSpec::Source::Counterexample;
      spec.kind = SignalKind::Discrete;
      spec.counterexample.threshold = spec.threshold;
      if (s.contains("horizon")) spec.counterexample.horizon = integer(s["horizon"], "/signal/horizon");
      if (s.contains("max_window")) spec.counterexample.max_window = integer(s["max_window"], "/signal/max_window");
      if (spec.counterexample.horizon < 2) fail("/signal/horizon", "must be at least 2");
      if (spec.counterexample.max_window < 1 || spec.counterexample.max_window > spec.counterexample.horizon)
        fail("/signal/max_window", "must lie in [1, horizon]");
      if (doc.contains("window")) fail("/window", "the counterexample sweeps windows 1..max_window");
      plan.pe = std::move(spec);
      return;
    }
    expect_object(s, "/signal", {"source", "kind", "grid", "dimension", "components"});
    spec.kind = s.contains("kind") && choice(s["kind"], "/signal/kind", {"ct", "dt"}) == "dt" ? SignalKind::Discrete
                                                                                            : SignalKind::Continuous;
    const double two_pi = 2.0 * std::numbers::pi;
    const TimeGrid fallback = spec.kind == SignalKind::Continuous ? TimeGrid::spanning(0.0, two_pi / 1000.0, 10.0 * two_pi)
                                                                  : TimeGrid::spanning(0.0, 0.01, 10.0);
    spec.grid = grid(s, "/signal", fallback);
    if (source == "sincos") {
      spec.source = PeCheckSpec::Source::SinCos;
      if (s.contains("dimension") || s.contains("components")) fail("/signal", "sincos takes no dimension or components");
    } else if (source == "zero") {
      spec.source = PeCheckSpec::Source::Zero;
      spec.dimension = s.contains("dimension") ? integer(s["dimension"], "/signal/dimension") : 2;
      if (spec.dimension < 1) fail("/signal/dimension", "must be at least 1");
    } else {
      spec.source = PeCheckSpec::Source::Sinusoids;
      if (!s.contains("components") || !s["components"].is_array() || s["components"].empty())
        fail("/signal/components", "expected a non-empty array of signals");
      for (std::size_t i = 0; i < s["components"].size(); ++i) {
        signal(s["components"][i], "/signal/components/" + std::to_string(i), 0);
        spec.components.push_back({s["components"][i]});
      }
      spec.dimension = static_cast<Index>(spec.components.size());
    }
    if (source == "sincos") spec.dimension = 2;
    if (!doc.contains("window")) fail("/window", "missing (seconds for ct, samples for dt)");
    spec.window = number(doc["window"], "/window");
    if (!(spec.window > 0.0)) fail("/window", "must be positive");
    if (spec.kind == SignalKind::Discrete) {
      const Index k = integer(doc["window"], "/window");
      if (k < spec.dimension) fail("/window", "must be at least the signal dimension");
    } else {
      const double steps = spec.window / spec.grid->step();
      if (std::abs(steps - std::round(steps)) > 1e-6) fail("/window", "must be a whole number of grid steps");
      if (spec.grid->horizon() + 1e-9 * spec.window < 2.0 * spec.window)
        fail("/window", "the horizon must cover at least two windows");
    }
    plan.pe = std::move(spec);
  }

  void custom(const json& doc, Plan& plan) const {
    expect_object(doc, "", {"mode", "domain", "grid", "theta", "phi", "bank", "sliding_window", "estimator",
                            "tolerance", "output"});
    CustomSpec spec;
    spec.kind = doc.contains("domain") && choice(doc["domain"], "/domain", {"ct", "dt"}) == "dt"
                    ? SignalKind::Discrete
                    : SignalKind::Continuous;
    if (spec.kind == SignalKind::Discrete) spec.grid = TimeGrid::spanning(0.0, 0.01, 10.0);
    spec.grid = grid(doc, "", spec.grid);
    if (!doc.contains("theta")) fail("/theta", "missing");
    spec.theta = vector(doc["theta"], "/theta");
    const Index m = spec.theta.size();
    if (!doc.contains("phi")) fail("/phi", "missing");
    spec.phi = signal_vector(doc["phi"], "/phi", 0);
    if (static_cast<Index>(spec.phi.size()) != m) fail("/phi", "must have one signal per parameter");
    if (doc.contains("bank") == doc.contains("sliding_window"))
      fail("/bank", "give exactly one of bank or sliding_window");
    if (doc.contains("bank")) {
      spec.bank = bank(doc["bank"], "/bank", m);
      if (static_cast<Index>(spec.bank.size()) != m) fail("/bank", "must have one channel per parameter");
    } else {
      if (spec.kind != SignalKind::Discrete) fail("/sliding_window", "only available for dt");
      spec.sliding_window = integer(doc["sliding_window"], "/sliding_window");
      if (spec.sliding_window < m) fail("/sliding_window", "must be at least the number of parameters");
    }
    estimator(doc, "", spec.gradient_gamma, spec.drem_gamma, spec.theta_hat0, spec.feedforward);
    if (spec.drem_gamma.size() != 1 && spec.drem_gamma.size() != m)
      fail("/estimator/drem_gamma", "expected 1 or " + std::to_string(m) + " gains");
    if (spec.theta_hat0.size() != 0 && spec.theta_hat0.size() != m)
      fail("/estimator/theta_hat0", "expected " + std::to_string(m) + " entries");
    if (spec.feedforward && spec.sliding_window > 0)
      fail("/estimator/feedforward", "the sliding window bank has no feedforward variant");
    spec.tolerance = positive_or(doc, "", "tolerance", spec.tolerance);
    plan.custom = std::move(spec);
  }

 private:
  std::string origin_;
};

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Plan parse_plan(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + location(text, e.byte) + ": malformed JSON (" + e.what() + ")");
  }
  const Parser p(origin);
  if (!doc.is_object()) p.fail("", "expected a JSON object");
  if (!doc.contains("mode")) p.fail("/mode", "missing (identify, ftc, pe-check or custom)");
  const auto mode = p.choice(doc["mode"], "/mode", {"identify", "ftc", "pe-check", "custom"});

  Plan plan;
  plan.canonical = doc;
  try {
    if (mode == "identify") {
      plan.mode = Mode::Identify;
      p.identify(doc, plan);
    } else if (mode == "ftc") {
      plan.mode = Mode::Ftc;
      p.ftc(doc, plan);
    } else if (mode == "pe-check") {
      plan.mode = Mode::PeCheck;
      p.pe_check(doc, plan);
    } else {
      plan.mode = Mode::Custom;
      p.custom(doc, plan);
    }
    if (plan.mode != Mode::PeCheck) plan.window = p.output(doc, "");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return plan;
}

Plan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot read config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str(), path.string());
}

const std::vector<std::pair<std::string, std::string>>& figure_presets() {
  static const std::vector<std::pair<std::string, std::string>> presets = {
      {"fig1", R"({"mode": "identify", "preset": "rich"})"},
      {"fig2", R"({"mode": "identify", "preset": "constant"})"},
      {"ftc-pe-early", R"({"mode": "ftc", "preset": "pe", "output": {"window": [0, 3]}})"},
      {"ftc-pe-late", R"({"mode": "ftc", "preset": "pe", "output": {"window": [9, 40]}})"},
      {"ftc-nonpe", R"({"mode": "ftc", "preset": "nonpe"})"},
  };
  return presets;
}

}  // namespace dremkit::cli
