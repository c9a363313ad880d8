#include "cumadv/generator_spec.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cumadv {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string fmt(double x) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, x).ptr;
  return {buf, end};
}

/// Reads typed fields out of a ParamMap and rejects anything left over.
class FieldReader {
 public:
  FieldReader(std::string_view model, const ParamMap& params) : model_(model), params_(params) {}

  double real(std::string_view key, std::optional<double> fallback = std::nullopt) {
    const auto* raw = find(key);
    if (raw == nullptr) return required(key, fallback);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(*raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw->size() || !std::isfinite(v)) fail(key, "expected a number, got '" + *raw + "'");
    return v;
  }

  std::int64_t integer(std::string_view key, std::optional<std::int64_t> fallback = std::nullopt) {
    const auto* raw = find(key);
    if (raw == nullptr) return required(key, fallback);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(*raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw->size()) fail(key, "expected an integer, got '" + *raw + "'");
    return v;
  }

  std::optional<std::string> text(std::string_view key) {
    const auto* raw = find(key);
    if (raw == nullptr) return std::nullopt;
    return *raw;
  }

  std::vector<double> reals(std::string_view key) {
    const auto* raw = find(key);
    if (raw == nullptr) fail(key, "missing required parameter");
    std::vector<double> out;
    std::stringstream ss(*raw);
    std::string item;
    while (std::getline(ss, item, ':')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) fail(key, "expected ':'-separated numbers, got '" + *raw + "'");
      out.push_back(v);
    }
    return out;
  }

  /// Wraps a constructor so its validation message carries the model name.
  template <class F>
  auto build(F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("model '" + model_ + "': " + e.what());
    }
  }

  void finish() const {
    for (const auto& [key, value] : params_) {
      if (!used_.contains(key)) {
        throw std::invalid_argument("model '" + model_ + "': unknown parameter '" + key + "'");
      }
    }
  }

  [[noreturn]] void fail(std::string_view key, const std::string& why) const {
    throw std::invalid_argument("model '" + model_ + "', parameter '" + std::string(key) + "': " + why);
  }

 private:
  const std::string* find(std::string_view key) {
    used_.insert(std::string(key));
    const auto it = params_.find(key);
    return it == params_.end() ? nullptr : &it->second;
  }

  template <class T>
  T required(std::string_view key, std::optional<T> fallback) const {
    if (!fallback) fail(key, "missing required parameter");
    return *fallback;
  }

  std::string model_;
  const ParamMap& params_;
  std::set<std::string, std::less<>> used_;
};

GrowthLaw parse_growth(FieldReader& reader, const std::string& text) {
  // "uniform:lo:hi" is served by its quantile; everything else is a Distribution.
  if (text.rfind("uniform:", 0) == 0) {
    std::stringstream ss(text.substr(8));
    std::string lo_s;
    std::string hi_s;
    if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s) || hi_s.find(':') != std::string::npos) {
      reader.fail("growth", "expected uniform:lo:hi");
    }
    double lo = 0.0;
    double hi = 0.0;
    try {
      lo = std::stod(lo_s);
      hi = std::stod(hi_s);
    } catch (const std::exception&) {
      reader.fail("growth", "expected uniform:lo:hi");
    }
    if (!(hi > lo)) reader.fail("growth", "uniform bounds must satisfy lo < hi");
    return QuantileGrowth{[lo, hi](double u) { return lo + (hi - lo) * u; }, text};
  }
  try {
    return parse_distribution(text);
  } catch (const std::invalid_argument& e) {
    reader.fail("growth", e.what());
  }
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ":" : "") + fmt(v[i]);
  return s;
}

SequenceSample counts_on_grid(const EventTimeline& timeline, std::size_t length, const std::string& id) {
  SequenceSample::Integers counts(length);
  for (std::size_t k = 1; k <= length; ++k) {
    const double t = k == length ? timeline.horizon()
                                 : timeline.horizon() * static_cast<double>(k) / static_cast<double>(length);
    counts[k - 1] = static_cast<std::int64_t>(count_at(timeline, t));
  }
  return {id, std::move(counts)};
}

}  // namespace

ParamMap parse_param_list(std::string_view text) {
  ParamMap out;
  std::string all = trim(text);
  if (all.empty()) return out;
  std::stringstream ss(all);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("parameter '" + trim(item) + "' is not key=value");
    auto key = trim(std::string_view(item).substr(0, eq));
    auto value = trim(std::string_view(item).substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("empty parameter name in '" + all + "'");
    if (out.contains(key)) throw std::invalid_argument("parameter '" + key + "' given twice");
    out.emplace(std::move(key), std::move(value));
  }
  return out;
}

const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names = {
      "polya-binary", "talent-uniform", "talent-binary",  "bernoulli-iid", "price",
      "simon",        "ba-degree",      "gibrat",         "monkey",        "multicolor-urn",
      "q-model",      "gaussian-twin",  "contagious-poisson", "mixed-poisson"};
  return names;
}

GeneratorSpec make_generator(std::string_view name, std::string_view param_list) {
  return make_generator(name, parse_param_list(param_list));
}

namespace {

// Checked before any value is read so a misspelt key is reported as such
// rather than as a missing one.
void reject_unknown_keys(std::string_view name, const ParamMap& params) {
  static const std::map<std::string_view, std::set<std::string_view>> allowed = {
      {"polya-binary", {}},
      {"price", {}},
      {"talent-uniform", {}},
      {"talent-binary", {"talent"}},
      {"bernoulli-iid", {"p"}},
      {"simon", {"alpha", "nR0", "K0"}},
      {"ba-degree", {"m0", "t_entry"}},
      {"gibrat", {"y0", "growth"}},
      {"monkey", {"alpha", "N", "K", "k"}},
      {"multicolor-urn", {"counts", "reinforcement"}},
      {"q-model", {"mu", "sigmaT", "sigmaX"}},
      {"gaussian-twin", {"a", "b", "c"}},
      {"contagious-poisson", {"alpha", "beta", "horizon"}},
      {"mixed-poisson", {"alpha", "beta", "horizon"}},
  };
  const auto it = allowed.find(name);
  if (it == allowed.end()) return;
  for (const auto& [key, value] : params) {
    if (!it->second.contains(key)) {
      throw std::invalid_argument("model '" + std::string(name) + "': unknown parameter '" + key + "'");
    }
  }
}

}  // namespace

GeneratorSpec make_generator(std::string_view name, const ParamMap& params) {
  reject_unknown_keys(name, params);
  FieldReader r(name, params);
  GeneratorSpec spec = [&]() -> GeneratorSpec {
    if (name == "polya-binary") return PolyaBinarySpec{};
    if (name == "price") return PriceSpec{};
    if (name == "talent-uniform") return TalentBinarySpec{TalentBinaryParams(Distribution::uniform01())};
    if (name == "talent-binary") {
      const auto text = r.text("talent");
      if (!text) r.fail("talent", "missing required parameter");
      return r.build([&] { return TalentBinarySpec{TalentBinaryParams(parse_distribution(*text))}; });
    }
    if (name == "bernoulli-iid") {
      const double p = r.real("p");
      if (!(p >= 0.0 && p <= 1.0)) r.fail("p", "must lie in [0, 1]");
      return BernoulliIidSpec{p};
    }
    if (name == "simon") {
      const double alpha = r.real("alpha");
      const auto n_r0 = r.integer("nR0", 1);
      const auto k0 = r.integer("K0", 1);
      return r.build([&] { return SimonSpec{SimonParams(alpha, n_r0, k0)}; });
    }
    if (name == "ba-degree") {
      const auto m0 = r.integer("m0", 1);
      const auto entry = r.integer("t_entry", 1);
      if (m0 < 1) r.fail("m0", "must be >= 1");
      if (entry < 1) r.fail("t_entry", "must be >= 1");
      return BarabasiAlbertSpec{m0, entry};
    }
    if (name == "gibrat") {
      const double y0 = r.real("y0", 1.0);
      const auto growth_text = r.text("growth");
      if (!growth_text) r.fail("growth", "missing required parameter");
      auto growth = parse_growth(r, *growth_text);
      return r.build([&] { return GibratSpec{GibratParams(y0, std::move(growth))}; });
    }
    if (name == "monkey") {
      const double alpha = r.real("alpha");
      const auto n = r.integer("N");
      const auto k_max = r.integer("K");
      std::optional<std::int64_t> k;
      if (r.text("k")) k = r.integer("k");
      auto monkey = r.build([&] { return MonkeyParams(alpha, n, k_max); });
      if (k && (*k < 1 || *k > k_max)) r.fail("k", "must lie in [1, K]");
      return MonkeySpec{monkey, k};
    }
    if (name == "multicolor-urn") {
      auto counts = r.reals("counts");
      std::vector<double> reinforcement(counts.size(), 1.0);
      if (r.text("reinforcement")) reinforcement = r.reals("reinforcement");
      return r.build([&] { return MulticolorUrnSpec{UrnState(counts, reinforcement)}; });
    }
    if (name == "q-model") {
      const double mu = r.real("mu");
      const double sigma_t = r.real("sigmaT");
      const double sigma_x = r.real("sigmaX");
      if (!(sigma_t > 0.0)) r.fail("sigmaT", "must be > 0");
      if (!(sigma_x > 0.0)) r.fail("sigmaX", "must be > 0");
      return r.build([&] { return QModelSpec{QModelParams(mu, sigma_t, sigma_x)}; });
    }
    if (name == "gaussian-twin") {
      const double a = r.real("a");
      const double b = r.real("b");
      const double c = r.real("c");
      if (!(b > 0.0)) r.fail("b", "must be > 0");
      if (!(c > 0.0)) r.fail("c", "must be > 0");
      return r.build([&] { return GaussianTwinSpec{TwinParams(a, b, c)}; });
    }
    if (name == "contagious-poisson" || name == "mixed-poisson") {
      const double alpha = r.real("alpha");
      const double beta = r.real("beta");
      const double horizon = r.real("horizon", 1.0);
      if (!(alpha > 0.0)) r.fail("alpha", "must be > 0");
      if (!(beta > 0.0)) r.fail("beta", "must be > 0");
      if (!(horizon > 0.0)) r.fail("horizon", "must be > 0");
      auto pp = r.build([&] { return PointProcessParams(alpha, beta, horizon); });
      if (name == "contagious-poisson") return ContagiousPoissonSpec{pp};
      return MixedPoissonSpec{pp};
    }
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
  }();
  r.finish();
  return spec;
}

std::string model_id(const GeneratorSpec& spec) {
  return std::visit(overloaded{
                        [](const PolyaBinarySpec&) { return std::string("polya-binary"); },
                        [](const TalentBinarySpec&) { return std::string("talent-binary"); },
                        [](const BernoulliIidSpec&) { return std::string("bernoulli-iid"); },
                        [](const PriceSpec&) { return std::string("price"); },
                        [](const SimonSpec&) { return std::string("simon"); },
                        [](const BarabasiAlbertSpec&) { return std::string("ba-degree"); },
                        [](const GibratSpec&) { return std::string("gibrat"); },
                        [](const MonkeySpec&) { return std::string("monkey"); },
                        [](const MulticolorUrnSpec&) { return std::string("multicolor-urn"); },
                        [](const QModelSpec&) { return std::string("q-model"); },
                        [](const GaussianTwinSpec&) { return std::string("gaussian-twin"); },
                        [](const ContagiousPoissonSpec&) { return std::string("contagious-poisson"); },
                        [](const MixedPoissonSpec&) { return std::string("mixed-poisson"); },
                    },
                    spec);
}

OutcomeKind outcome_kind(const GeneratorSpec& spec) {
  return std::visit(overloaded{
                        [](const GibratSpec&) { return OutcomeKind::Real; },
                        [](const QModelSpec&) { return OutcomeKind::Real; },
                        [](const GaussianTwinSpec&) { return OutcomeKind::Real; },
                        [](const MulticolorUrnSpec&) { return OutcomeKind::Vector; },
                        [](const auto&) { return OutcomeKind::Integer; },
                    },
                    spec);
}

bool is_point_process(const GeneratorSpec& spec) {
  return std::holds_alternative<ContagiousPoissonSpec>(spec) || std::holds_alternative<MixedPoissonSpec>(spec);
}

std::string describe(const GeneratorSpec& spec) {
  const std::string params = std::visit(
      overloaded{
          [](const PolyaBinarySpec&) { return std::string(); },
          [](const TalentBinarySpec& s) { return "talent=" + s.params.talent.to_string(); },
          [](const BernoulliIidSpec& s) { return "p=" + fmt(s.p); },
          [](const PriceSpec&) { return std::string(); },
          [](const SimonSpec& s) {
            return "alpha=" + fmt(s.params.new_word_prob) + ",nR0=" + std::to_string(s.params.initial_occurrences) +
                   ",K0=" + std::to_string(s.params.initial_words);
          },
          [](const BarabasiAlbertSpec& s) {
            return "m0=" + std::to_string(s.initial_links) + ",t_entry=" + std::to_string(s.entry_time);
          },
          [](const GibratSpec& s) {
            const std::string growth = std::visit(
                overloaded{[](const Distribution& d) { return d.to_string(); },
                           [](const QuantileGrowth& q) { return q.label; }},
                s.params.growth);
            return "y0=" + fmt(s.params.initial_size) + ",growth=" + growth;
          },
          [](const MonkeySpec& s) {
            std::string out = "alpha=" + fmt(s.params.space_prob) + ",N=" + std::to_string(s.params.alphabet_size) +
                              ",K=" + std::to_string(s.params.max_length);
            if (s.word_length) out += ",k=" + std::to_string(*s.word_length);
            return out;
          },
          [](const MulticolorUrnSpec& s) {
            return "counts=" + join_reals(s.init.counts()) + ",reinforcement=" + join_reals(s.init.reinforcement());
          },
          [](const QModelSpec& s) {
            return "mu=" + fmt(s.params.mu_t) + ",sigmaT=" + fmt(s.params.sigma_t) + ",sigmaX=" + fmt(s.params.sigma_x);
          },
          [](const GaussianTwinSpec& s) {
            return "a=" + fmt(s.params.a) + ",b=" + fmt(s.params.b) + ",c=" + fmt(s.params.c);
          },
          [](const ContagiousPoissonSpec& s) {
            return "alpha=" + fmt(s.params.alpha) + ",beta=" + fmt(s.params.beta) + ",horizon=" + fmt(s.params.horizon);
          },
          [](const MixedPoissonSpec& s) {
            return "alpha=" + fmt(s.params.alpha) + ",beta=" + fmt(s.params.beta) + ",horizon=" + fmt(s.params.horizon);
          },
      },
      spec);
  return params.empty() ? model_id(spec) : model_id(spec) + " " + params;
}

SequenceSample sample_path(const GeneratorSpec& spec, std::size_t length, RngStream& rng) {
  return std::visit(
      overloaded{
          [&](const PolyaBinarySpec&) { return polya_binary_sequence(length, rng); },
          [&](const TalentBinarySpec& s) { return talent_binary_sequence(s.params, length, rng); },
          [&](const BernoulliIidSpec& s) { return bernoulli_iid_sequence(s.p, length, rng); },
          [&](const PriceSpec&) { return price_sequence(length, rng); },
          [&](const SimonSpec& s) { return simon_occurrence_sequence(s.params, length, rng); },
          [&](const BarabasiAlbertSpec& s) {
            const auto end = static_cast<std::int64_t>(length);
            if (end < s.entry_time) {
              throw std::invalid_argument("ba-degree: path length must be at least t_entry");
            }
            return ba_degree_sequence(BarabasiAlbertParams(s.initial_links, s.entry_time, end), rng);
          },
          [&](const GibratSpec& s) { return gibrat_sequence(s.params, length, rng); },
          [&](const MonkeySpec& s) {
            const auto k = s.word_length ? *s.word_length : monkey_random_word_length(s.params, rng);
            return monkey_occurrence_sequence(s.params, k, length, rng);
          },
          [&](const MulticolorUrnSpec& s) { return multicolor_urn_sequence(s.init, length, rng); },
          [&](const QModelSpec& s) { return q_model_sequence(s.params, length, rng); },
          [&](const GaussianTwinSpec& s) { return twin_sequence(s.params, length, rng); },
          [&](const ContagiousPoissonSpec& s) {
            return counts_on_grid(contagious_poisson(s.params, rng), length, "contagious-poisson");
          },
          [&](const MixedPoissonSpec& s) {
            return counts_on_grid(mixed_poisson_twin(s.params, rng), length, "mixed-poisson");
          },
      },
      spec);
}

EventTimeline sample_timeline(const GeneratorSpec& spec, RngStream& rng) {
  if (const auto* c = std::get_if<ContagiousPoissonSpec>(&spec)) return contagious_poisson(c->params, rng);
  if (const auto* m = std::get_if<MixedPoissonSpec>(&spec)) return mixed_poisson_twin(m->params, rng);
  throw std::invalid_argument("model '" + model_id(spec) + "' does not produce event timelines");
}

}  // namespace cumadv
