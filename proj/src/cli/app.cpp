#include "dremkit/cli.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#ifndef DREMKIT_VERSION
#define DREMKIT_VERSION "0.0.0"
#endif

namespace dremkit::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string version() { return DREMKIT_VERSION; }

double eval_signal(const json& entry, double t, const Trajectory* phi) {
  if (entry.is_number()) return entry.get<double>();
  if (entry.is_string()) {
    const auto s = entry.get<std::string>();
    if (s == "sin") return std::sin(t);
    if (s == "cos") return std::cos(t);
    if (phi == nullptr) throw std::invalid_argument("signal '" + s + "' needs a regressor");
    const Index i = std::stoi(s.substr(4)) - 1;
    if (i < 0 || i >= phi->rows()) throw std::invalid_argument("signal '" + s + "' is out of range");
    return phi->kind() == SignalKind::Discrete ? phi->samples()(i, phi->grid().nearest_index(t)) : phi->value_at(t)(i);
  }
  double v = entry.value("offset", 0.0);
  if (entry.contains("terms"))
    for (const auto& term : entry["terms"])
      v += term.value("amplitude", 1.0) * std::sin(term.value("frequency", 1.0) * t + term.value("phase", 0.0));
  return v;
}

namespace {

TimeVarying<double> scalar_signal(const json& entry, const Trajectory* phi) {
  if (entry.is_number()) return entry.get<double>();
  return std::function<double(double)>([entry, phi](double t) { return eval_signal(entry, t, phi); });
}

TimeVarying<Eigen::VectorXd> vector_signal(const std::vector<json>& entries, const Trajectory* phi) {
  bool constant = true;
  for (const auto& e : entries) constant = constant && e.is_number();
  const auto evaluate = [entries, phi](double t) {
    Eigen::VectorXd v(static_cast<Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Index>(i)) = eval_signal(entries[i], t, phi);
    return v;
  };
  if (constant) return evaluate(0.0);
  return std::function<Eigen::VectorXd(double)>(evaluate);
}

}  // namespace

OperatorBank materialize_bank(const std::vector<ChannelSpec>& specs, SignalKind kind, const Trajectory* phi) {
  OperatorBank bank;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ChannelSpec& s = specs[i];
    const Index n = s.A.rows();
    try {
      bank.emplace_back(kind, n, s.A, vector_signal(s.b, phi), vector_signal(s.c, phi),
                        scalar_signal(s.feedthrough, phi), scalar_signal(s.delay_gain, phi), s.delay,
                        s.x0.size() ? s.x0 : Eigen::VectorXd::Zero(n));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("/bank/" + std::to_string(i) + ": " + e.what());
    }
  }
  return bank;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string fmt_time(const std::optional<double>& t) { return t ? fmt(*t) + " s" : "not reached"; }

EstimatorSeries make_series(std::string name, const Trajectory& theta_hat, const Trajectory& theta, double tol,
                            std::vector<AuxColumn> aux) {
  Trajectory err = theta_hat - theta;
  std::vector<std::optional<double>> settle;
  for (Index i = 0; i < err.rows(); ++i) settle.push_back(settling_time(err.component(i), tol));
  Eigen::VectorXd final_error = err.vector(err.count() - 1);
  return {std::move(name), theta_hat, std::move(err), std::move(aux), std::move(settle), std::move(final_error)};
}

std::string describe_series(const ScenarioResult& r) {
  std::ostringstream os;
  os << r.title << "\n";
  os << "grid: t0 = " << fmt(r.grid.t0()) << ", step = " << fmt(r.grid.step()) << ", horizon = " << fmt(r.grid.horizon())
     << " s\n";
  os << "convergence tolerance: " << fmt(r.tolerance) << "\n\n";
  for (const auto& s : r.series) {
    os << s.name << "\n";
    for (Index i = 0; i < s.final_error.size(); ++i) {
      os << "  element " << i + 1 << ": convergence time " << fmt_time(s.convergence_time[static_cast<std::size_t>(i)])
         << ", final error " << fmt(s.final_error(i)) << "\n";
    }
  }
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

void add_series_tables(RunOutput& out, const ScenarioResult& r, const std::optional<std::pair<double, double>>& window) {
  Index begin = 0;
  Index end = r.grid.count();
  if (window) {
    begin = r.grid.nearest_index(window->first);
    end = r.grid.nearest_index(window->second) + 1;
  }
  for (const auto& s : r.series) out.tables.emplace_back(s.name + ".csv", io::series_table(s, begin, end));
}

RunOutput run_identify(const Plan& plan) {
  IdentificationConfig cfg = plan.identify;
  std::optional<Regressor> reg;
  if (!plan.identify_bank.empty()) {
    reg = build_regressor(cfg.regressor, cfg.plant, simulate_plant(cfg.plant, cfg.grid));
    cfg.bank = materialize_bank(plan.identify_bank, SignalKind::Continuous, &reg->phi);
  }
  const ScenarioResult r = run_identification_scenario(cfg);
  RunOutput out;
  add_series_tables(out, r, plan.window);
  std::ostringstream os;
  os << describe_series(r);
  os << "\nsettling measured from t = 2 s (elapsed after t = 2):\n";
  for (const auto& s : r.series) {
    os << "  " << s.name << ":";
    for (Index i = 0; i < s.theta_tilde.rows(); ++i) {
      const auto t = settling_time(s.theta_tilde.component(i), r.tolerance, 2.0);
      os << " " << (t ? fmt(*t - 2.0) + " s" : std::string("not reached"));
    }
    os << "\n";
  }
  out.texts.emplace_back("summary.txt", os.str());
  return out;
}

RunOutput run_ftc_plan(const Plan& plan) {
  const FtcScenarioConfig& cfg = plan.ftc;
  const ScenarioResult r = run_ftc_scenario(cfg);
  RunOutput out;
  add_series_tables(out, r, plan.window);
  const Trajectory Delta = ftc_delta(cfg.delta, cfg.grid);
  const Trajectory energy = cumulative_energy(Delta);
  std::ostringstream os;
  os << describe_series(r);
  os << "\nactivation time (cumulative window): "
     << fmt_time(interval_excitation_time(Delta, cfg.gamma, cfg.clip_threshold)) << "\n";
  os << "activation time (delayed window " << fmt(cfg.delay_window)
     << " s): " << fmt_time(interval_excitation_time_delayed(Delta, cfg.gamma, cfg.clip_threshold, cfg.delay_window))
     << "\n";
  os << "integral of Delta^2 over the horizon: " << std::setprecision(17) << energy.scalar(energy.count() - 1) << "\n";
  out.texts.emplace_back("summary.txt", os.str());
  return out;
}

Trajectory pe_signal(const PeCheckSpec& spec) {
  const TimeGrid grid = *spec.grid;
  switch (spec.source) {
    case PeCheckSpec::Source::SinCos:
      return Trajectory::generate(grid, spec.kind, 2, 1, [](Index, double t) {
        return Eigen::Vector2d(std::sin(t), std::cos(t));
      });
    case PeCheckSpec::Source::Zero:
      return Trajectory(grid, spec.kind, spec.dimension, 1, Trajectory::Storage::Zero(spec.dimension, grid.count()));
    default:
      return Trajectory::generate(grid, spec.kind, spec.dimension, 1, [&](Index, double t) {
        Eigen::VectorXd v(spec.dimension);
        for (Index i = 0; i < spec.dimension; ++i)
          v(i) = eval_signal(spec.components[static_cast<std::size_t>(i)].front(), t, nullptr);
        return v;
      });
  }
}

RunOutput run_pe(const Plan& plan) {
  const PeCheckSpec& spec = plan.pe;
  RunOutput out;
  std::ostringstream os;
  os << std::setprecision(10);
  if (spec.source == PeCheckSpec::Source::Counterexample) {
    const CounterexampleReport rep = counterexample_suite(spec.counterexample);
    io::CsvTable alpha{{"window", "alpha_hat"}, {{}, {}}};
    for (std::size_t k = 0; k < rep.alpha_hat.size(); ++k) {
      alpha.columns[0].push_back(static_cast<double>(k + 1));
      alpha.columns[1].push_back(rep.alpha_hat[k]);
    }
    out.tables.emplace_back("alpha_hat.csv", std::move(alpha));
    os << "source: counterexample phi(k) = (k+1)^(-1/4), one-sample window extension\n";
    os << "horizon: " << rep.options.horizon << " samples\n";
    os << "threshold: " << rep.options.threshold << "\n";
    double worst = 0.0;
    for (double a : rep.alpha_hat) worst = std::max(worst, a);
    os << "largest alpha_hat over windows 1.." << rep.options.max_window << ": " << worst << "\n";
    os << "verdict: " << (rep.not_pe_for_all_windows ? "not PE on this horizon" : "PE certificate above threshold")
       << "\n\n";
    os << "energy growth (sum of Delta^2 against ln(k+1)):\n";
    os << "  k            energy           ln(k+1)\n";
    io::CsvTable energy{{"k", "energy", "log_k_plus_1"}, {{}, {}, {}}};
    const Index last = rep.options.horizon - 1;
    for (Index k = 1;; k = std::min(k * 10, last)) {
      const double e = rep.energy.scalar(k);
      const double envelope = std::log(static_cast<double>(k + 1));
      os << "  " << std::setw(12) << std::left << k << " " << std::setw(16) << e << " " << envelope << "\n";
      energy.columns[0].push_back(static_cast<double>(k));
      energy.columns[1].push_back(e);
      energy.columns[2].push_back(envelope);
      if (k == last) break;
    }
    os << std::right;
    os << "final energy " << rep.divergence.final_energy << " against envelope " << rep.divergence.final_envelope << ": "
       << (rep.divergence.exceeds_envelope ? "diverging" : "below envelope") << "\n";
    os << "\nPE direction (alternating basis vectors, window 2): alpha_hat " << rep.pe_alpha_hat << ", min Delta "
       << rep.pe_min_delta << ", energy per sample " << rep.pe_energy_per_sample << "\n";
    os << "zero regressor energy: " << rep.zero_energy << "\n";
    out.tables.emplace_back("energy.csv", std::move(energy));
  } else {
    const Trajectory phi = pe_signal(spec);
    const PeReport rep = spec.kind == SignalKind::Continuous
                             ? pe_check_ct(phi, spec.window, spec.threshold)
                             : pe_check_dt(phi, static_cast<Index>(std::llround(spec.window)), spec.threshold);
    io::CsvTable mins{{"start", "lambda_min"}, {{}, {}}};
    for (Index s = 0; s < rep.min_eigenvalues.size(); ++s) {
      mins.columns[0].push_back(phi.time(s));
      mins.columns[1].push_back(rep.min_eigenvalues(s));
    }
    out.tables.emplace_back("min_eigenvalues.csv", std::move(mins));
    os << "kind: " << (spec.kind == SignalKind::Continuous ? "continuous" : "discrete") << "\n";
    os << "dimension: " << phi.rows() << "\n";
    os << "window: " << rep.window_steps << " steps (" << rep.window_seconds << " s)\n";
    os << "threshold: " << rep.threshold << "\n";
    os << "alpha_hat: " << rep.alpha_hat << "\n";
    os << "worst window start: t = " << phi.time(rep.worst_start) << "\n";
    os << "verdict: " << (rep.is_pe ? "PE on this horizon" : "not PE on this horizon") << "\n";
  }
  out.texts.emplace_back("pe_report.txt", os.str());
  return out;
}

RunOutput run_custom(const Plan& plan) {
  const CustomSpec& spec = plan.custom;
  const Index m = spec.theta.size();
  const Trajectory phi = Trajectory::generate(spec.grid, spec.kind, m, 1, [&](Index, double t) {
    Eigen::VectorXd v(m);
    for (Index i = 0; i < m; ++i) v(i) = eval_signal(spec.phi[static_cast<std::size_t>(i)], t, nullptr);
    return v;
  });
  const Trajectory theta = sample_schedule(ThetaSchedule::constant(spec.theta), spec.grid, spec.kind);
  const Trajectory y = eval_lre(theta, phi);
  const bool ct = spec.kind == SignalKind::Continuous;

  ScenarioResult r{ct ? "custom regression, continuous time" : "custom regression, discrete time",
                   spec.grid, theta, {}, spec.tolerance, {}};
  const GradientConfig grad_cfg = GradientConfig::uniform(spec.gradient_gamma, spec.theta_hat0);
  const EstimatorRun grad = ct ? ct_gradient(y, phi, grad_cfg) : dt_gradient(y, phi, grad_cfg);
  r.series.push_back(make_series("gradient", grad.theta_hat, theta, spec.tolerance, {{"phi_norm2", grad.diagnostic}}));

  const GradientConfig drem_cfg{spec.drem_gamma, spec.theta_hat0};
  const auto run_drem = [&](const MixedRegression& mixed) { return ct ? drem_ct(mixed, drem_cfg) : drem_dt(mixed, drem_cfg); };
  if (spec.sliding_window > 0) {
    const EstimatorRun d = run_drem(mix(sliding_window_extend(y, phi, spec.sliding_window)));
    r.series.push_back(make_series("drem", d.theta_hat, theta, spec.tolerance, {{"Delta", d.diagnostic}}));
  } else {
    const OperatorBank bank = materialize_bank(spec.bank, spec.kind, &phi);
    const EstimatorRun d = run_drem(mix(extend(bank, y, phi, &r.warnings)));
    r.series.push_back(make_series("drem", d.theta_hat, theta, spec.tolerance, {{"Delta", d.diagnostic}}));
    if (spec.feedforward) {
      const EstimatorRun f = run_drem(mix(extend_with_feedforward(bank, y, phi, &r.warnings)));
      r.series.push_back(make_series("drem_ff", f.theta_hat, theta, spec.tolerance, {{"Delta", f.diagnostic}}));
    }
  }
  RunOutput out;
  add_series_tables(out, r, plan.window);
  out.texts.emplace_back("summary.txt", describe_series(r));
  return out;
}

void require_finite(const RunOutput& out) {
  for (const auto& [name, table] : out.tables) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      const auto& col = table.columns[j];
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (!std::isfinite(col[r]))
          throw NumericalFailure("non-finite value in " + name + ", column " + table.header[j] + ", row " +
                                 std::to_string(r + 1));
      }
    }
  }
}

}  // namespace

RunOutput execute(const Plan& plan) {
  RunOutput out;
  switch (plan.mode) {
    case Mode::Identify: out = run_identify(plan); break;
    case Mode::Ftc: out = run_ftc_plan(plan); break;
    case Mode::PeCheck: out = run_pe(plan); break;
    case Mode::Custom: out = run_custom(plan); break;
  }
  require_finite(out);
  return out;
}

void write_output(const fs::path& dir, const RunOutput& output, const Plan& plan, const std::string& command) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());

  // Files from an earlier run are replaced; anything else makes the directory unusable.
  std::set<std::string> previous;
  if (fs::exists(dir / "manifest.json")) {
    try {
      for (const auto& f : io::read_manifest(dir / "manifest.json").files) previous.insert(f.file);
    } catch (const std::exception&) {
      throw std::runtime_error(dir.string() + " holds an unreadable manifest.json");
    }
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (!previous.count(name))
      throw std::runtime_error("output directory " + dir.string() + " contains " + name +
                               ", which no earlier run produced; choose an empty directory");
  }
  for (const auto& name : previous) fs::remove(dir / name, ec);

  io::Manifest manifest{version(), io::fnv1a_hex(plan.canonical.dump()), command, {}};
  {
    std::ofstream cfg(dir / "config.json");
    if (!cfg) throw std::runtime_error("cannot write to " + dir.string());
    cfg << plan.canonical.dump(2) << '\n';
    manifest.files.push_back({"config.json", {}, 0});
  }
  for (const auto& [name, table] : output.tables) {
    io::write_csv(dir / name, table);
    manifest.files.push_back({name, table.header, table.rows()});
  }
  for (const auto& [name, text] : output.texts) {
    std::ofstream os(dir / name);
    os << text;
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    manifest.files.push_back({name, {}, 0});
  }
  io::write_manifest(dir, std::move(manifest));
}

fs::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "dremkit_out";
}

namespace {

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient and DREM parameter estimators: scenario runner"};
  app.name("dremkit");
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.footer(std::string("Environment:\n  ") + kOutDirEnv +
             "  default output directory when --out is not given (fallback: ./dremkit_out)\n\n"
             "Exit codes: 0 success, 1 usage, configuration or I/O error, 2 numerical failure.");

  std::string config_path;
  std::string out_flag;
  std::string figure;

  auto* simulate = app.add_subcommand("simulate", "Run the scenario described by a JSON config");
  simulate->add_option("--config", config_path, "Scenario config (JSON)")->required();
  simulate->add_option("--out", out_flag, "Output directory");

  std::string ids;
  for (const auto& [id, text] : figure_presets()) ids += (ids.empty() ? "" : ", ") + id;
  auto* reproduce = app.add_subcommand("reproduce", "Run a built-in figure preset (" + ids + ")");
  reproduce->add_option("figure", figure, "Figure id")->required();
  reproduce->add_option("--out", out_flag, "Output directory");

  auto* check_pe = app.add_subcommand("check-pe", "Windowed excitation certificate for a pe-check config");
  check_pe->add_option("--config", config_path, "pe-check config (JSON)")->required();
  check_pe->add_option("--out", out_flag, "Output directory for the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (*simulate) {
    return guarded(err, [&] {
      const Plan plan = load_plan(config_path);
      const fs::path dir = resolve_out_dir(out_flag);
      write_output(dir, execute(plan), plan, "simulate --config " + config_path);
      out << "wrote " << dir.string() << "\n";
    });
  }
  if (*reproduce) {
    const auto& presets = figure_presets();
    const auto it = std::find_if(presets.begin(), presets.end(), [&](const auto& p) { return p.first == figure; });
    if (it == presets.end()) {
      err << "unknown figure id '" << figure << "'; valid ids: " << ids << "\n";
      return kConfigError;
    }
    return guarded(err, [&] {
      const Plan plan = parse_plan(it->second, "preset " + figure);
      const fs::path dir = resolve_out_dir(out_flag);
      const RunOutput output = execute(plan);
      write_output(dir, output, plan, "reproduce " + figure);
      for (const auto& [name, text] : output.texts)
        if (name == "summary.txt") out << text;
      out << "wrote " << dir.string() << "\n";
    });
  }
  return guarded(err, [&] {
    const Plan plan = load_plan(config_path);
    if (plan.mode != Mode::PeCheck) throw ConfigError(config_path + ": /mode: check-pe requires mode pe-check");
    const fs::path dir = resolve_out_dir(out_flag);
    const RunOutput output = execute(plan);
    write_output(dir, output, plan, "check-pe --config " + config_path);
    for (const auto& [name, text] : output.texts) out << text;
    out << "wrote " << dir.string() << "\n";
  });
}

}  // namespace dremkit::cli
