#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cumadv/equivalence.hpp"
#include "cumadv/musiclab.hpp"
#include "cumadv/point_process.hpp"

namespace cumadv::cli {
namespace fs = std::filesystem;
namespace {

// Shortest round-trip form; integral values without a trailing ".0".
std::string fmt(double v) {
  if (std::isfinite(v) && std::abs(v) < 1e15 && v == std::trunc(v)) return std::to_string(static_cast<long long>(v));
  return nlohmann::json(v).dump();
}

std::string brief(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string params_text(const ParamMap& params) {
  std::string s;
  for (const auto& [k, v] : params) {
    if (!s.empty()) s += ',';
    s += k + '=' + v;
  }
  return s;
}

std::string seed_text(const RunConfig& cfg) {
  return "seed=" + std::to_string(cfg.seed) + (cfg.seed_explicit ? "" : " (default)");
}

Command require_command(const RunConfig& cfg) {
  if (!cfg.command) throw ConfigError("no command given (use a subcommand or 'command = ...' in the config file)");
  return *cfg.command;
}

std::size_t reps_of(const RunConfig& cfg) { return cfg.reps != 0 ? cfg.reps : default_reps(*cfg.command); }
std::size_t length_of(const RunConfig& cfg) { return cfg.length != 0 ? cfg.length : default_length(*cfg.command); }

const GeneratorEntry& require_entry(const std::optional<GeneratorEntry>& e, const char* flag) {
  if (!e || e->model.empty()) throw ConfigError(std::string("missing required generator '") + flag + "'");
  return *e;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void write_header_comments(std::ostream& out, const nlohmann::json& config) {
  for (const auto& [k, v] : config.items()) {
    out << '#' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

GridSpec grid_for(const GeneratorSpec& a, const GeneratorSpec* b, std::size_t buckets) {
  const bool real = outcome_kind(a) == OutcomeKind::Real || (b != nullptr && outcome_kind(*b) == OutcomeKind::Real);
  return real ? GridSpec::equal_probability(buckets) : GridSpec::exact();
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto spec = build_generator(require_entry(cfg.model, "model"), cfg.horizon);
  const auto reps = reps_of(cfg);
  const auto config = config_json(cfg);
  const fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
  const auto root = make_rng(cfg.seed);
  const auto id = model_id(spec);
  std::size_t files = 0;

  if (is_point_process(spec)) {
    const auto& pp = std::holds_alternative<ContagiousPoissonSpec>(spec) ? std::get<ContagiousPoissonSpec>(spec).params
                                                                          : std::get<MixedPoissonSpec>(spec).params;
    for (std::size_t r = 0; r < reps; ++r) {
      auto rng = root.split(r);
      const auto timeline = sample_timeline(spec, rng);
      const auto stem = id + "_rep" + std::to_string(r + 1);
      if (cfg.format == Format::Json) {
        auto j = nlohmann::json::object();
        j["config"] = config;
        j["rep"] = r + 1;
        j["times"] = timeline.times();
        write_json(dir / (stem + ".json"), j);
      } else {
        auto f = open_output(dir / (stem + ".csv"));
        write_header_comments(f, config);
        f << "#rep=" << r + 1 << '\n';
        write_timeline_csv(f, timeline, pp, id);
      }
      ++files;
    }
  } else {
    const auto length = length_of(cfg);
    const auto batch = sample_paths(spec, length, reps, root);
    if (cfg.format == Format::Json) {
      auto j = nlohmann::json::object();
      j["config"] = config;
      auto paths = nlohmann::json::array();
      for (std::size_t r = 0; r < reps; ++r) {
        const auto row = batch.row(r);
        paths.push_back(std::vector<double>(row.begin(), row.end()));
      }
      j["paths"] = std::move(paths);
      write_json(dir / (id + "_paths.json"), j);
    } else {
      auto f = open_output(dir / (id + "_paths.csv"));
      write_header_comments(f, config);
      f << "rep,step";
      if (batch.step_width == 1) {
        f << ",value";
      } else {
        for (std::size_t c = 0; c < batch.step_width; ++c) f << ",c" << c;
      }
      f << '\n';
      f.precision(17);
      for (std::size_t r = 0; r < reps; ++r) {
        const auto row = batch.row(r);
        for (std::size_t s = 0; s < length; ++s) {
          f << r + 1 << ',' << s + 1;
          for (std::size_t c = 0; c < batch.step_width; ++c) f << ',' << row[s * batch.step_width + c];
          f << '\n';
        }
      }
    }
    files = 1;
  }
  out << "simulate " << describe(spec) << " reps=" << reps << ' ' << seed_text(cfg) << " files=" << files
      << " dir=" << dir.string() << '\n';
  return kExitOk;
}

int run_twin(const RunConfig& cfg, std::ostream& out) {
  if (cfg.q_model.has_value() == cfg.twin.has_value()) {
    throw ConfigError("twin needs exactly one of --q-model or --twin");
  }
  auto j = nlohmann::json::object();
  j["config"] = config_json(cfg);
  if (cfg.q_model) {
    const auto q = std::get<QModelSpec>(build_generator({"q-model", *cfg.q_model}, std::nullopt)).params;
    const auto t = twin_from_q(q);
    out << "TwinParams a=" << fmt(t.a) << " b=" << fmt(t.b) << " c=" << fmt(t.c) << '\n';
    j["twin"] = {{"a", t.a}, {"b", t.b}, {"c", t.c}};
  } else {
    const auto t = std::get<GaussianTwinSpec>(build_generator({"gaussian-twin", *cfg.twin}, std::nullopt)).params;
    const auto q = q_from_twin(t);
    out << "QModelParams mu=" << fmt(q.mu_t) << " sigmaT=" << fmt(q.sigma_t) << " sigmaX=" << fmt(q.sigma_x) << '\n';
    j["q_model"] = {{"mu", q.mu_t}, {"sigmaT", q.sigma_t}, {"sigmaX", q.sigma_x}};
  }
  if (!cfg.output.empty()) write_json(cfg.output, j);
  return kExitOk;
}

int run_compare(const RunConfig& cfg, std::ostream& out) {
  const auto a = build_generator(require_entry(cfg.a, "a"), cfg.horizon);
  const auto b = build_generator(require_entry(cfg.b, "b"), cfg.horizon);
  if (outcome_kind(a) != outcome_kind(b)) throw ConfigError("compare: generators 'a' and 'b' have different outcome kinds");
  const auto length = length_of(cfg);
  const auto reps = reps_of(cfg);
  const auto root = make_rng(cfg.seed);
  const auto batch_a = sample_paths(a, length, reps, root.split(0));
  const auto batch_b = sample_paths(b, length, reps, root.split(1));

  auto grid = grid_for(a, &b, cfg.buckets);
  if (grid.mode() != GridSpec::Mode::Exact) {
    auto pooled = batch_a.values;
    pooled.insert(pooled.end(), batch_b.values.begin(), batch_b.values.end());
    grid = grid.resolve(pooled, batch_a.row_width());
  }
  const auto ha = histogram_of(batch_a, grid);
  const auto hb = histogram_of(batch_b, grid);
  const auto distance = ComparisonReport::from_distance("tvd", tvd(ha, hb), ha.total(), hb.total(), cfg.tvd_threshold);
  const auto chi = chi_square_homogeneity(ha, hb, cfg.significance);
  const bool consistent = distance.consistent() && chi.consistent();

  auto j = nlohmann::json::object();
  j["config"] = config_json(cfg);
  j["tvd"] = distance.to_json();
  j["chi_square"] = chi.to_json();
  j["verdict"] = consistent ? "consistent" : "rejected";
  if (!cfg.output.empty()) write_json(cfg.output, j);
  out << "compare " << describe(a) << " vs " << describe(b) << " length=" << length << " reps=" << reps << ' '
      << seed_text(cfg) << " tvd=" << brief(distance.statistic) << " chi2_p=" << brief(chi.p_value_or_distance)
      << " verdict=" << (consistent ? "consistent" : "rejected") << '\n';
  return consistent ? kExitOk : kExitRejected;
}

int run_exchangeability(const RunConfig& cfg, std::ostream& out) {
  const auto spec = build_generator(require_entry(cfg.model, "model"), cfg.horizon);
  const auto length = length_of(cfg);
  std::vector<std::vector<std::size_t>> perms;
  if (cfg.permutations.empty()) {
    perms = all_transpositions(length);
    if (length > 2) perms.push_back(reversal(length));
  } else {
    for (const auto& p : cfg.permutations) {
      std::vector<std::size_t> zero;
      for (auto v : p) zero.push_back(v - 1);
      perms.push_back(std::move(zero));
    }
  }
  ExchangeabilityOptions opts;
  opts.bootstrap = cfg.bootstrap;
  opts.significance = cfg.significance;
  const auto report =
      exchangeability_test(spec, length, reps_of(cfg), perms, grid_for(spec, nullptr, cfg.buckets), make_rng(cfg.seed), opts);

  auto j = nlohmann::json::object();
  j["config"] = config_json(cfg);
  j["report"] = report.to_json();
  if (!cfg.output.empty()) write_json(cfg.output, j);
  out << "exchangeability " << describe(spec) << " length=" << length << " reps=" << reps_of(cfg) << ' '
      << seed_text(cfg) << " max_tvd=" << brief(report.statistic) << " p=" << brief(report.p_value_or_distance)
      << " verdict=" << to_string(report.verdict) << '\n';
  return report.consistent() ? kExitOk : kExitRejected;
}

musiclab::DownloadLog read_log(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("missing required 'input' (download log CSV)");
  std::ifstream in(cfg.input);
  if (!in) throw ConfigError("cannot open input file '" + cfg.input + "'");
  return musiclab::ingest_log(in);
}

int run_fit(const RunConfig& cfg, std::ostream& out) {
  const auto log = read_log(cfg);
  const auto fit = musiclab::fit_f_two_stage(log, cfg.grid, reps_of(cfg), make_rng(cfg.seed));
  auto j = nlohmann::json::object();
  j["config"] = config_json(cfg);
  j["fit"] = fit.to_json();
  if (!cfg.output.empty()) write_json(cfg.output, j);
  out << "fit-musiclab input=" << cfg.input << " downloads=" << log.events.size() << " reps=" << reps_of(cfg) << ' '
      << seed_text(cfg) << " f_star=" << brief(fit.f_star) << " loss=" << brief(fit.losses.at(fit.f_star)) << '\n';
  return kExitOk;
}

int run_report(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.f) throw ConfigError("missing required 'f'");
  const auto log = read_log(cfg);
  const auto reps = reps_of(cfg);
  const auto report = musiclab::interval_report(log, *cfg.f, reps, cfg.level, make_rng(cfg.seed));
  const fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
  std::map<std::string, std::string> header;
  const auto config = config_json(cfg);
  for (const auto& [k, v] : config.items()) header[k] = v.is_string() ? v.get<std::string>() : v.dump();
  for (std::size_t q = 1; q <= musiclab::kQuartiles; ++q) {
    auto f = open_output(dir / ("quartile_" + std::to_string(q) + ".csv"));
    write_quartile_csv(f, log, report, q, header);
  }
  const auto coverage = musiclab::interval_coverage(log, report);
  out << "report-musiclab input=" << cfg.input << " f=" << fmt(*cfg.f) << " reps=" << reps << ' ' << seed_text(cfg)
      << " coverage=" << brief(coverage) << " dir=" << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

nlohmann::json config_json(const RunConfig& cfg) {
  auto j = nlohmann::json::object();
  const auto command = require_command(cfg);
  j["command"] = to_string(command);
  j["seed"] = cfg.seed;
  auto entry = [&](const char* key, const std::optional<GeneratorEntry>& e) {
    if (e) j[key] = describe(build_generator(*e, cfg.horizon));
  };
  switch (command) {
    case Command::Simulate:
      entry("model", cfg.model);
      j["reps"] = reps_of(cfg);
      if (!cfg.model || !is_point_process(build_generator(*cfg.model, cfg.horizon))) j["length"] = length_of(cfg);
      break;
    case Command::Twin:
      if (cfg.q_model) j["q_model"] = params_text(*cfg.q_model);
      if (cfg.twin) j["twin"] = params_text(*cfg.twin);
      break;
    case Command::Compare:
      entry("a", cfg.a);
      entry("b", cfg.b);
      j["reps"] = reps_of(cfg);
      j["length"] = length_of(cfg);
      j["significance"] = cfg.significance;
      j["tvd_threshold"] = cfg.tvd_threshold;
      j["buckets"] = cfg.buckets;
      break;
    case Command::Exchangeability: {
      entry("model", cfg.model);
      j["reps"] = reps_of(cfg);
      j["length"] = length_of(cfg);
      j["significance"] = cfg.significance;
      j["bootstrap"] = cfg.bootstrap;
      j["buckets"] = cfg.buckets;
      std::string perms;
      for (const auto& p : cfg.permutations) {
        if (!perms.empty()) perms += ';';
        for (std::size_t i = 0; i < p.size(); ++i) perms += (i ? "," : "") + std::to_string(p[i]);
      }
      j["permutations"] = perms.empty() ? "transpositions+reversal" : perms;
      break;
    }
    case Command::FitMusiclab:
      j["input"] = cfg.input;
      j["reps"] = reps_of(cfg);
      j["coarse_lo"] = cfg.grid.coarse_lo;
      j["coarse_hi"] = cfg.grid.coarse_hi;
      j["coarse_step"] = cfg.grid.coarse_step;
      j["fine_step"] = cfg.grid.fine_step;
      j["fine_half_width"] = cfg.grid.fine_half_width;
      break;
    case Command::ReportMusiclab:
      j["input"] = cfg.input;
      j["reps"] = reps_of(cfg);
      if (cfg.f) j["f"] = *cfg.f;
      j["level"] = cfg.level;
      break;
  }
  if (cfg.command != Command::Twin) j["format"] = cfg.format == Format::Json ? "json" : "csv";
  return j;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (require_command(cfg)) {
      case Command::Simulate:
        return run_simulate(cfg, out);
      case Command::Twin:
        return run_twin(cfg, out);
      case Command::Compare:
        return run_compare(cfg, out);
      case Command::Exchangeability:
        return run_exchangeability(cfg, out);
      case Command::FitMusiclab:
        return run_fit(cfg, out);
      case Command::ReportMusiclab:
        return run_report(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const musiclab::LogFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

namespace {

struct Flags {
  std::string config;
  std::string model, params, a, a_params, b, b_params, q_model, twin;
  std::uint64_t seed = 0;
  std::size_t reps = 0, length = 0, bootstrap = 0, buckets = 0;
  double horizon = 0, significance = 0, tvd_threshold = 0, f = 0, level = 0;
  double coarse_lo = 0, coarse_hi = 0, coarse_step = 0, fine_step = 0, fine_half_width = 0;
  std::string output, format, permutations, input;
};

// Counts a flag on the subcommand, then on the top-level app.
std::size_t given(const CLI::App& app, const char* name) {
  if (const auto* opt = app.get_option_no_throw(name); opt != nullptr && opt->count() > 0) return opt->count();
  if (const auto* parent = app.get_parent(); parent != nullptr) return given(*parent, name);
  return 0;
}

template <class T>
void override_if(const CLI::App& app, const char* name, const T& value, T& target) {
  if (given(app, name) > 0) target = value;
}

void apply_generator_flag(const CLI::App& app, const char* name_flag, const char* params_flag,
                          const std::string& name, const std::string& params, std::optional<GeneratorEntry>& target) {
  const bool has_name = given(app, name_flag) > 0;
  const bool has_params = params_flag != nullptr && given(app, params_flag) > 0;
  if (has_name) {
    target = GeneratorEntry{name, {}};
  } else if (has_params && !target) {
    throw ConfigError(std::string("parameters given without ") + name_flag);
  }
  if (has_params) {
    try {
      for (auto& [k, v] : parse_param_list(params)) target->params[k] = v;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cumulative-advantage models, their twins and equivalence tests", "cumadv"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  Flags fl;
  app.add_option("--config", fl.config, "key = value config file; flags override its values");
  // Overrides for runs whose command comes from the config file.
  app.add_option("--seed", fl.seed, "64-bit seed");
  app.add_option("--output,-o", fl.output, "Output file or directory");
  app.add_option("--reps", fl.reps, "Replications");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", fl.seed, "64-bit seed");
    sub->add_option("--output,-o", fl.output, "Output file or directory");
    sub->add_option("--format", fl.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--reps", fl.reps, "Replications");
    sub->add_option("--length", fl.length, "Path length");
    sub->add_option("--horizon", fl.horizon, "Horizon for point-process models");
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", fl.model, "Model name");
    sub->add_option("params,--params", fl.params, "Model parameters k=v,k=v");
  };

  auto* simulate = app.add_subcommand("simulate", "Sample paths or timelines of a model");
  add_common(simulate);
  add_sampling(simulate);
  add_model(simulate);

  auto* twin = app.add_subcommand("twin", "Map Q-model parameters to the twin or back");
  add_common(twin);
  twin->add_option("--q-model", fl.q_model, "mu=..,sigmaT=..,sigmaX=..");
  twin->add_option("--twin", fl.twin, "a=..,b=..,c=..");

  auto* compare = app.add_subcommand("compare", "Compare path laws of two generators");
  add_common(compare);
  add_sampling(compare);
  compare->add_option("--a", fl.a, "First model name");
  compare->add_option("--a-params", fl.a_params, "First model parameters");
  compare->add_option("--b", fl.b, "Second model name");
  compare->add_option("--b-params", fl.b_params, "Second model parameters");
  compare->add_option("--significance", fl.significance, "Reject when p <= this (default 1e-3)");
  compare->add_option("--tvd-threshold", fl.tvd_threshold, "Reject when TVD exceeds this (default 0.01)");
  compare->add_option("--buckets", fl.buckets, "Equal-probability buckets per coordinate (real outcomes)");

  auto* exch = app.add_subcommand("exchangeability", "Test a model's path law for exchangeability");
  add_common(exch);
  add_sampling(exch);
  add_model(exch);
  exch->add_option("--permutations", fl.permutations, "1-based permutations, e.g. 2,1,3;3,2,1");
  exch->add_option("--bootstrap", fl.bootstrap, "Bootstrap resamples (default 1999)");
  exch->add_option("--significance", fl.significance, "Reject when p <= this (default 1e-3)");
  exch->add_option("--buckets", fl.buckets, "Equal-probability buckets per coordinate (real outcomes)");

  auto* fit = app.add_subcommand("fit-musiclab", "Fit the urn reinforcement f to a download log");
  add_common(fit);
  fit->add_option("--input,-i", fl.input, "Download log CSV (user_id,song_id)");
  fit->add_option("--reps", fl.reps, "Urn replications per grid point");
  fit->add_option("--coarse-lo", fl.coarse_lo, "Coarse grid start (default 0.1)");
  fit->add_option("--coarse-hi", fl.coarse_hi, "Coarse grid end (default 0.6)");
  fit->add_option("--coarse-step", fl.coarse_step, "Coarse grid step (default 0.05)");
  fit->add_option("--fine-step", fl.fine_step, "Fine grid step (default 0.005)");
  fit->add_option("--fine-half-width", fl.fine_half_width, "Fine grid half width (default 0.05)");

  auto* report = app.add_subcommand("report-musiclab", "Per-quartile rank intervals under a fitted f");
  add_common(report);
  report->add_option("--input,-i", fl.input, "Download log CSV (user_id,song_id)");
  report->add_option("--f", fl.f, "Reinforcement");
  report->add_option("--reps", fl.reps, "Urn replications");
  report->add_option("--level", fl.level, "Interval level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  RunConfig cfg;
  try {
    if (!fl.config.empty()) cfg = load_config(fl.config);
    CLI::App* sub = &app;
    for (auto* s : app.get_subcommands()) sub = s;
    if (sub != &app) cfg.command = parse_command(sub->get_name());
    if (!cfg.command) throw ConfigError("no command given (use a subcommand or 'command = ...' in the config file)");
    {
      const auto& s = *sub;
      if (given(s, "--seed") > 0) {
        cfg.seed = fl.seed;
        cfg.seed_explicit = true;
      }
      override_if(s, "--output", fl.output, cfg.output);
      if (given(s, "--format") > 0) cfg.format = fl.format == "json" ? Format::Json : Format::Csv;
      if (given(s, "--horizon") > 0) cfg.horizon = fl.horizon;
      override_if(s, "--reps", fl.reps, cfg.reps);
      override_if(s, "--length", fl.length, cfg.length);
      override_if(s, "--bootstrap", fl.bootstrap, cfg.bootstrap);
      override_if(s, "--buckets", fl.buckets, cfg.buckets);
      override_if(s, "--significance", fl.significance, cfg.significance);
      override_if(s, "--tvd-threshold", fl.tvd_threshold, cfg.tvd_threshold);
      override_if(s, "--input", fl.input, cfg.input);
      if (given(s, "--f") > 0) cfg.f = fl.f;
      override_if(s, "--level", fl.level, cfg.level);
      override_if(s, "--coarse-lo", fl.coarse_lo, cfg.grid.coarse_lo);
      override_if(s, "--coarse-hi", fl.coarse_hi, cfg.grid.coarse_hi);
      override_if(s, "--coarse-step", fl.coarse_step, cfg.grid.coarse_step);
      override_if(s, "--fine-step", fl.fine_step, cfg.grid.fine_step);
      override_if(s, "--fine-half-width", fl.fine_half_width, cfg.grid.fine_half_width);
      if (given(s, "--permutations") > 0) cfg.permutations = parse_permutations(fl.permutations);
      if (s.get_option_no_throw("--model") != nullptr) {
        apply_generator_flag(s, "--model", "--params", fl.model, fl.params, cfg.model);
      }
      if (s.get_option_no_throw("--a") != nullptr) {
        apply_generator_flag(s, "--a", "--a-params", fl.a, fl.a_params, cfg.a);
        apply_generator_flag(s, "--b", "--b-params", fl.b, fl.b_params, cfg.b);
      }
      if (s.get_option_no_throw("--q-model") != nullptr) {
        if (given(s, "--q-model") > 0) cfg.q_model = parse_param_list(fl.q_model);
        if (given(s, "--twin") > 0) cfg.twin = parse_param_list(fl.twin);
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return run(cfg, out, err);
}

}  // namespace cumadv::cli
