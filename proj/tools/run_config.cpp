#include "run_config.hpp"

#include <fstream>
#include <sstream>

namespace cumadv::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value, std::size_t line) {
  std::istringstream is(value);
  T out{};
  is >> out;
  if (is.fail() || !is.eof()) throw ConfigError("key '" + key + "': invalid value '" + value + "'", line);
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, std::size_t line)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

const char* to_string(Command c) {
  switch (c) {
    case Command::Simulate:
      return "simulate";
    case Command::Twin:
      return "twin";
    case Command::Compare:
      return "compare";
    case Command::Exchangeability:
      return "exchangeability";
    case Command::FitMusiclab:
      return "fit-musiclab";
    case Command::ReportMusiclab:
      return "report-musiclab";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::Simulate, Command::Twin, Command::Compare, Command::Exchangeability, Command::FitMusiclab,
                 Command::ReportMusiclab}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> parse_permutations(std::string_view text) {
  std::vector<std::vector<std::size_t>> out;
  std::stringstream perms{std::string(text)};
  std::string perm;
  while (std::getline(perms, perm, ';')) {
    if (trim(perm).empty()) continue;
    std::vector<std::size_t> p;
    std::stringstream items(perm);
    std::string item;
    while (std::getline(items, item, ',')) {
      const auto t = trim(item);
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != t.size() || v < 1) throw ConfigError("invalid permutation entry '" + t + "'");
      p.push_back(static_cast<std::size_t>(v));
    }
    out.push_back(std::move(p));
  }
  return out;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  auto generator_section = [&](const std::string& name) -> GeneratorEntry* {
    if (name == "model") return &(cfg.model ? *cfg.model : cfg.model.emplace());
    if (name == "a") return &(cfg.a ? *cfg.a : cfg.a.emplace());
    if (name == "b") return &(cfg.b ? *cfg.b : cfg.b.emplace());
    return nullptr;
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto text = trim(line.substr(0, line.find_first_of("#;")));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      if (section == "q-model") {
        if (!cfg.q_model) cfg.q_model.emplace();
      } else if (section == "twin") {
        if (!cfg.twin) cfg.twin.emplace();
      } else if (generator_section(section) == nullptr) {
        throw ConfigError("unknown section '" + section + "'", line_no);
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const auto key = trim(std::string_view(text).substr(0, eq));
    const auto value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);

    if (!section.empty()) {
      ParamMap* params = nullptr;
      if (section == "q-model") {
        params = &*cfg.q_model;
      } else if (section == "twin") {
        params = &*cfg.twin;
      } else {
        auto* entry = generator_section(section);
        if (key == "model") {
          entry->model = value;
          continue;
        }
        params = &entry->params;
      }
      if (params->contains(key)) throw ConfigError("key '" + key + "' repeated", line_no);
      params->emplace(key, value);
      continue;
    }

    if (key == "command") {
      const auto c = parse_command(value);
      if (!c) throw ConfigError("unknown command '" + value + "'", line_no);
      cfg.command = c;
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value, line_no);
      cfg.seed_explicit = true;
    } else if (key == "reps") {
      cfg.reps = parse_number<std::size_t>(key, value, line_no);
    } else if (key == "length") {
      cfg.length = parse_number<std::size_t>(key, value, line_no);
    } else if (key == "horizon") {
      cfg.horizon = parse_number<double>(key, value, line_no);
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "format") {
      if (value == "csv") {
        cfg.format = Format::Csv;
      } else if (value == "json") {
        cfg.format = Format::Json;
      } else {
        throw ConfigError("key 'format': expected csv or json", line_no);
      }
    } else if (key == "significance") {
      cfg.significance = parse_number<double>(key, value, line_no);
    } else if (key == "tvd_threshold") {
      cfg.tvd_threshold = parse_number<double>(key, value, line_no);
    } else if (key == "permutations") {
      cfg.permutations = parse_permutations(value);
    } else if (key == "bootstrap") {
      cfg.bootstrap = parse_number<std::size_t>(key, value, line_no);
    } else if (key == "buckets") {
      cfg.buckets = parse_number<std::size_t>(key, value, line_no);
    } else if (key == "input") {
      cfg.input = value;
    } else if (key == "f") {
      cfg.f = parse_number<double>(key, value, line_no);
    } else if (key == "level") {
      cfg.level = parse_number<double>(key, value, line_no);
    } else if (key == "coarse_lo") {
      cfg.grid.coarse_lo = parse_number<double>(key, value, line_no);
    } else if (key == "coarse_hi") {
      cfg.grid.coarse_hi = parse_number<double>(key, value, line_no);
    } else if (key == "coarse_step") {
      cfg.grid.coarse_step = parse_number<double>(key, value, line_no);
    } else if (key == "fine_step") {
      cfg.grid.fine_step = parse_number<double>(key, value, line_no);
    } else if (key == "fine_half_width") {
      cfg.grid.fine_half_width = parse_number<double>(key, value, line_no);
    } else {
      throw ConfigError("unknown key '" + key + "'", line_no);
    }
  }
  // Validate generator sections eagerly so unknown parameters surface at load time.
  for (const auto* entry : {&cfg.model, &cfg.a, &cfg.b}) {
    if (!*entry) continue;
    if ((*entry)->model.empty()) throw ConfigError("generator section is missing 'model = <name>'");
    try {
      (void)make_generator((*entry)->model, (*entry)->params);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    if (cfg.q_model) (void)make_generator("q-model", *cfg.q_model);
    if (cfg.twin) (void)make_generator("gaussian-twin", *cfg.twin);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

std::size_t default_reps(Command c) {
  switch (c) {
    case Command::Simulate:
      return 1;
    case Command::Compare:
    case Command::Exchangeability:
      return 100'000;
    case Command::FitMusiclab:
      return 300;
    case Command::ReportMusiclab:
      return 2000;
    case Command::Twin:
      return 0;
  }
  return 1;
}

std::size_t default_length(Command c) {
  switch (c) {
    case Command::Simulate:
      return 10;
    case Command::Compare:
      return 5;
    case Command::Exchangeability:
      return 3;
    default:
      return 0;
  }
}

GeneratorSpec build_generator(const GeneratorEntry& entry, const std::optional<double>& horizon) {
  auto params = entry.params;
  if (horizon && (entry.model == "contagious-poisson" || entry.model == "mixed-poisson")) {
    std::ostringstream os;
    os.precision(17);
    os << *horizon;
    params["horizon"] = os.str();
  }
  try {
    return make_generator(entry.model, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace cumadv::cli
