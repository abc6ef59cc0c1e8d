#include "tibpalm/bench/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <sstream>

#include "tibpalm/bregman.hpp"
#include "tibpalm/errors.hpp"
#include "tibpalm/matrix_io.hpp"

namespace tibpalm::bench {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view expected,
                            std::string_view got) {
  throw ConfigError("key '" + std::string(key) + "': expected " + std::string(expected) +
                    ", got '" + std::string(got) + "'");
}

double to_double(std::string_view key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  if (!v.empty() && v[0] == '+') ++first;
  const auto [p, ec] = std::from_chars(first, v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    bad_value(key, "a finite number", v);
  return out;
}

long to_long(std::string_view key, const std::string& v) {
  long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, "an integer", v);
  return out;
}

bool to_bool(std::string_view key, const std::string& v) {
  const std::string s = lower(v);
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  bad_value(key, "true or false", v);
}

std::optional<InertialSequence> to_sequence(std::string_view key, const std::string& v) {
  if (lower(v) == "auto") return std::nullopt;
  try {
    return InertialSequence::parse(v);
  } catch (const ConfigError&) {
    bad_value(key, "'auto', a nonnegative number or (k-1)/(k+2)", v);
  }
}

std::string seq_text(const std::optional<InertialSequence>& s) {
  return s ? s->token() : "auto";
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

GeometryPair parse_pair(std::string_view key, const std::string& token) {
  if (token.size() != 2 || token[0] < '1' || token[0] > '3' || token[1] < '1' || token[1] > '3')
    bad_value(key, "pairs of kernel indices 1-3 such as 12", token);
  return {token[0] - '0', token[1] - '0'};
}

std::vector<GeometryPair> all_pairs() {
  std::vector<GeometryPair> out;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) out.push_back({i, j});
  return out;
}

constexpr unsigned kNmf = 1u << 0;
constexpr unsigned kSigrec = 1u << 1;
constexpr unsigned kQfp = 1u << 2;
constexpr unsigned kAll = kNmf | kSigrec | kQfp;

unsigned kind_bit(ProblemKind k) {
  switch (k) {
    case ProblemKind::Nmf: return kNmf;
    case ProblemKind::Sigrec: return kSigrec;
    case ProblemKind::Qfp: return kQfp;
  }
  return 0;
}

struct KeySpec {
  std::string_view name;
  unsigned kinds;
  std::function<void(RunConfig&, std::string_view, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
KeySpec real_key(std::string_view name, unsigned kinds, T RunConfig::*field) {
  return {name, kinds,
          [field](RunConfig& c, std::string_view k, const std::string& v) {
            c.*field = to_double(k, v);
          },
          [field](const RunConfig& c) { return format_double(c.*field); }};
}

KeySpec long_key(std::string_view name, unsigned kinds, long RunConfig::*field) {
  return {name, kinds,
          [field](RunConfig& c, std::string_view k, const std::string& v) {
            c.*field = to_long(k, v);
          },
          [field](const RunConfig& c) { return std::to_string(c.*field); }};
}

KeySpec bool_key(std::string_view name, unsigned kinds, bool RunConfig::*field) {
  return {name, kinds,
          [field](RunConfig& c, std::string_view k, const std::string& v) {
            c.*field = to_bool(k, v);
          },
          [field](const RunConfig& c) { return std::string(c.*field ? "true" : "false"); }};
}

KeySpec seq_key(std::string_view name, std::optional<InertialSequence> RunConfig::*field) {
  return {name, kAll,
          [field](RunConfig& c, std::string_view k, const std::string& v) {
            c.*field = to_sequence(k, v);
          },
          [field](const RunConfig& c) { return seq_text(c.*field); }};
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"variants", kAll,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         const auto names = split_list(v);
         if (names.empty()) bad_value(k, "a list of variant names", v);
         c.variants.clear();
         for (const auto& n : names) c.variants.push_back(parse_variant(n));
       },
       [](const RunConfig& c) {
         std::vector<std::string> names;
         for (Variant v : c.variants) names.emplace_back(variant_name(v));
         return join(names);
       }},
      seq_key("alpha1", &RunConfig::alpha1),
      seq_key("alpha2", &RunConfig::alpha2),
      seq_key("beta1", &RunConfig::beta1),
      seq_key("beta2", &RunConfig::beta2),
      real_key("tol", kAll, &RunConfig::tol),
      long_key("max_iter", kAll, &RunConfig::max_iter),
      {"seed", kAll,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         std::uint64_t s = 0;
         const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
         if (ec != std::errc() || p != v.data() + v.size()) bad_value(k, "an unsigned integer", v);
         c.seed = s;
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"repetitions", kAll,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         c.repetitions = static_cast<int>(to_long(k, v));
       },
       [](const RunConfig& c) { return std::to_string(c.repetitions); }},
      {"out", kAll,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         if (v.empty()) bad_value(k, "a directory", v);
         c.out = v;
       },
       [](const RunConfig& c) { return c.out; }},
      bool_key("override_theory", kAll, &RunConfig::override_theory),
      bool_key("timing", kAll, &RunConfig::timing),

      long_key("n", kSigrec, &RunConfig::n),
      long_key("m", kSigrec, &RunConfig::m),
      bool_key("noisy", kSigrec, &RunConfig::noisy),
      real_key("gamma", kSigrec | kQfp, &RunConfig::gamma),
      real_key("mu", kSigrec | kQfp, &RunConfig::mu),
      real_key("lambda", kSigrec | kNmf, &RunConfig::lambda),
      real_key("sparsity", kSigrec | kNmf, &RunConfig::sparsity),
      real_key("noise_variance", kSigrec, &RunConfig::noise_variance),
      {"geometry_x", kSigrec,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         const std::string s = lower(v);
         if (s != "mahalanobis" && s != "euclid") bad_value(k, "mahalanobis or euclid", v);
         c.geometry_x = s;
       },
       [](const RunConfig& c) { return c.geometry_x; }},

      long_key("rows", kNmf, &RunConfig::rows),
      long_key("cols", kNmf, &RunConfig::cols),
      long_key("rank", kNmf, &RunConfig::rank),
      {"data", kNmf,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         c.data = lower(v) == "synthetic" ? std::string() : v;
         (void)k;
       },
       [](const RunConfig& c) { return c.data.empty() ? std::string("synthetic") : c.data; }},

      {"instance", kQfp,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         if (v.empty()) bad_value(k, "problem1, random or a file", v);
         const std::string s = lower(v);
         c.instance = (s == "problem1" || s == "random") ? s : v;
       },
       [](const RunConfig& c) { return c.instance; }},
      long_key("dim", kQfp, &RunConfig::dim),
      real_key("c", kQfp, &RunConfig::c),
      real_key("d", kQfp, &RunConfig::d),
      real_key("box_lo", kQfp, &RunConfig::box_lo),
      real_key("box_hi", kQfp, &RunConfig::box_hi),
      {"geometry_pairs", kQfp,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         if (lower(v) == "all") {
           c.geometry_pairs = all_pairs();
           return;
         }
         const auto items = split_list(v);
         if (items.empty()) bad_value(k, "'all' or a list such as 11,23", v);
         c.geometry_pairs.clear();
         for (const auto& t : items) c.geometry_pairs.push_back(parse_pair(k, t));
       },
       [](const RunConfig& c) {
         std::vector<std::string> items;
         for (const auto& p : c.geometry_pairs)
           items.push_back(std::to_string(p.x) + std::to_string(p.y));
         return join(items);
       }},
      {"schedules", kQfp,
       [](RunConfig& c, std::string_view k, const std::string& v) {
         const auto items = split_list(lower(v));
         if (items.empty()) bad_value(k, "one-step and/or two-step", v);
         for (const auto& s : items)
           if (s != "one-step" && s != "two-step") bad_value(k, "one-step or two-step", s);
         c.schedules = items;
       },
       [](const RunConfig& c) { return join(c.schedules); }},
      real_key("inner_tol", kQfp, &RunConfig::inner_tol),
      long_key("inner_max_iter", kQfp, &RunConfig::inner_max_iter),
  };
  return table;
}

void validate_ranges(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(c.tol > 0.0)) fail("key 'tol': must be positive");
  if (c.max_iter < 1) fail("key 'max_iter': must be at least 1");
  if (c.repetitions < 1) fail("key 'repetitions': must be at least 1");
  if (c.variants.empty()) fail("key 'variants': at least one variant is required");
  switch (c.kind) {
    case ProblemKind::Sigrec:
      if (c.n < 1 || c.m <= c.n) fail("sigrec: need 1 <= n < m");
      if (!(c.gamma > 0.0) || !(c.mu > 0.0) || !(c.lambda > 0.0))
        fail("sigrec: gamma, mu and lambda must be positive");
      if (!(c.sparsity > 0.0) || c.sparsity > 1.0) fail("key 'sparsity': must lie in (0, 1]");
      if (c.noise_variance < 0.0) fail("key 'noise_variance': must be nonnegative");
      break;
    case ProblemKind::Nmf:
      if (c.rows < 1 || c.cols < 1 || c.rank < 1) fail("nmf: rows, cols and rank must be positive");
      if (c.rank > c.cols) fail("nmf: rank must not exceed cols");
      if (!(c.lambda > 0.0)) fail("key 'lambda': must be positive");
      if (!(c.sparsity > 0.0) || c.sparsity > 1.0) fail("key 'sparsity': must lie in (0, 1]");
      break;
    case ProblemKind::Qfp:
      if (c.dim < 1) fail("key 'dim': must be positive");
      if (!(c.gamma > 0.0) || !(c.mu > 0.0)) fail("qfp: gamma and mu must be positive");
      if (!(c.box_lo < c.box_hi)) fail("qfp: need box_lo < box_hi");
      if (c.box_lo <= 0.0) fail("qfp: box_lo must be positive for the kl and is kernels");
      if (c.geometry_pairs.empty()) fail("key 'geometry_pairs': empty");
      if (c.schedules.empty()) fail("key 'schedules': empty");
      if (!(c.inner_tol > 0.0) || c.inner_max_iter < 1) fail("qfp: bad inner solver settings");
      break;
  }
}

ScheduleSpec make_spec(std::string name, double a1, double a2, double b1, double b2) {
  return {std::move(name), InertialSequence::constant(a1), InertialSequence::constant(a2),
          InertialSequence::constant(b1), InertialSequence::constant(b2)};
}

bool explicit_schedule(const RunConfig& c) {
  return c.alpha1 || c.alpha2 || c.beta1 || c.beta2;
}

ScheduleSpec custom_spec(const RunConfig& c) {
  const auto zero = InertialSequence::constant(0.0);
  ScheduleSpec s{"custom", c.alpha1.value_or(zero), c.alpha2.value_or(zero), zero, zero};
  s.beta1 = c.beta1 ? *c.beta1 : s.alpha1;
  s.beta2 = c.beta2 ? *c.beta2 : s.alpha2;
  return s;
}

}  // namespace

ProblemKind parse_problem_kind(std::string_view name) {
  const std::string s = lower(std::string(name));
  if (s == "nmf") return ProblemKind::Nmf;
  if (s == "sigrec") return ProblemKind::Sigrec;
  if (s == "qfp") return ProblemKind::Qfp;
  throw ConfigError("unknown problem kind '" + std::string(name) + "' (nmf, sigrec, qfp)");
}

std::string_view problem_kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Nmf: return "nmf";
    case ProblemKind::Sigrec: return "sigrec";
    case ProblemKind::Qfp: return "qfp";
  }
  return "?";
}

std::string GeometryPair::label() const { return "g" + std::to_string(x) + std::to_string(y); }

std::string_view qfp_geometry_token(int index) {
  switch (index) {
    case 1: return "kl";
    case 2: return "is";
    case 3: return "euclid";
    default: throw ConfigError("kernel index must be 1, 2 or 3");
  }
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.kind == b.kind && emit_config(a) == emit_config(b);
}

RunConfig default_config(ProblemKind kind) {
  RunConfig c;
  c.kind = kind;
  switch (kind) {
    case ProblemKind::Sigrec:
      c.variants = {Variant::TiBPALM, Variant::TiBAM, Variant::IBPALM, Variant::BPALM};
      c.repetitions = 10;
      break;
    case ProblemKind::Nmf:
      c.variants = {Variant::PALM, Variant::IPALM, Variant::GiPALM, Variant::TiBPALM};
      c.lambda = 0.5;
      c.sparsity = 0.25;
      c.max_iter = 1000;
      c.repetitions = 1;
      c.override_theory = true;
      break;
    case ProblemKind::Qfp:
      c.variants = {Variant::TiBPALM};
      c.gamma = 10.0;
      c.mu = 36.0;
      c.repetitions = 30;
      c.override_theory = true;
      c.geometry_pairs = all_pairs();
      c.schedules = {"one-step", "two-step"};
      break;
  }
  return c;
}

std::map<ProblemKind, RunConfig> parse_config_file(std::string_view text) {
  std::map<ProblemKind, RunConfig> out;
  RunConfig* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string raw;
  long line_no = 0;
  std::vector<std::string> seen;
  auto where = [&line_no] { return " (line " + std::to_string(line_no) + ")"; };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header" + where());
      const ProblemKind kind = [&] {
        try {
          return parse_problem_kind(trim(line.substr(1, line.size() - 2)));
        } catch (const ConfigError& e) {
          throw ConfigError(std::string(e.what()) + where());
        }
      }();
      if (out.count(kind)) throw ConfigError("duplicate section [" + line + "]" + where());
      current = &out.emplace(kind, default_config(kind)).first->second;
      seen.clear();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'" + where());
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (!current) throw ConfigError("key '" + key + "' outside any section" + where());

    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) {
      return k.name == key && (k.kinds & kind_bit(current->kind));
    });
    if (it == table.end())
      throw ConfigError("unknown key '" + key + "' in section [" +
                        std::string(problem_kind_name(current->kind)) + "]" + where());
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw ConfigError("duplicate key '" + key + "'" + where());
    seen.push_back(key);
    try {
      it->set(*current, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + where());
    }
  }

  for (auto& [kind, cfg] : out) {
    validate_ranges(cfg);
    check_admissibility(cfg);
  }
  return out;
}

RunConfig parse_config(std::string_view text, ProblemKind kind) {
  auto all = parse_config_file(text);
  const auto it = all.find(kind);
  return it == all.end() ? default_config(kind) : it->second;
}

std::string emit_config(const RunConfig& config) {
  std::string out = "[" + std::string(problem_kind_name(config.kind)) + "]\n";
  const unsigned bit = kind_bit(config.kind);
  for (const auto& k : key_table())
    if (k.kinds & bit) out += std::string(k.name) + " = " + k.get(config) + "\n";
  return out;
}

InertialSchedule realize(const ScheduleSpec& spec, double rho) {
  return InertialSchedule::from_sequences(spec.alpha1, spec.alpha2, spec.beta1, spec.beta2, rho);
}

std::vector<ScheduleSpec> schedule_specs(const RunConfig& config, Variant variant, double rho) {
  if (explicit_schedule(config)) return {custom_spec(config)};
  switch (config.kind) {
    case ProblemKind::Sigrec: {
      const double r = std::max(rho, 0.0);
      const double quarter = 0.99 * r / 4.0;
      const double half = 0.99 * r / 2.0;
      switch (variant) {
        case Variant::TiBPALM:
        case Variant::TiBAM: return {make_spec("default", quarter, quarter, quarter, quarter)};
        case Variant::IBPALM:
        case Variant::IPALM:
        case Variant::GiPALM: return {make_spec("default", half, 0.0, half, 0.0)};
        default: return {make_spec("default", 0.0, 0.0, 0.0, 0.0)};
      }
    }
    case ProblemKind::Nmf:
      switch (variant) {
        case Variant::TiBPALM:
        case Variant::TiBAM: return {make_spec("default", 0.2, 0.3, 0.2, 0.3)};
        case Variant::IBPALM:
        case Variant::IPALM:
        case Variant::GiPALM: return {make_spec("default", 0.5, 0.0, 0.5, 0.0)};
        default: return {make_spec("default", 0.0, 0.0, 0.0, 0.0)};
      }
    case ProblemKind::Qfp: {
      std::vector<ScheduleSpec> specs;
      for (const auto& name : config.schedules) {
        if (name == "one-step")
          specs.push_back(make_spec(name, 0.5, 0.0, 0.5, 0.0));
        else
          specs.push_back(make_spec(name, 0.2, 0.3, 0.2, 0.3));
      }
      return specs;
    }
  }
  return {};
}

void check_admissibility(const RunConfig& config) {
  if (config.override_theory) return;
  const std::string hint = " (set override_theory = true to run anyway)";
  switch (config.kind) {
    case ProblemKind::Nmf:
      throw ConfigError("nmf: no coupling bounds, so no schedule is provably admissible" + hint);
    case ProblemKind::Sigrec: {
      if (!explicit_schedule(config)) return;
      const ScheduleSpec spec = custom_spec(config);
      // θ₁ ≤ μ for either x kernel, so this ρ is an upper bound over instances.
      const double rho = std::min(config.mu - config.gamma, config.lambda - config.gamma);
      try {
        validate_schedule(realize(spec, rho));
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + hint);
      }
      return;
    }
    case ProblemKind::Qfp: {
      const Box box{config.box_lo, config.box_hi};
      for (const auto& pair : config.geometry_pairs) {
        const auto gx = BregmanGeometry::from_token(qfp_geometry_token(pair.x), config.mu);
        const auto gy = BregmanGeometry::from_token(qfp_geometry_token(pair.y), config.mu);
        const double rho = std::min(gx.theta(box), gy.theta(box)) - config.gamma;
        for (const auto& spec : schedule_specs(config, Variant::TiBPALM, rho)) {
          try {
            validate_schedule(realize(spec, rho));
          } catch (const ConfigError& e) {
            throw ConfigError("geometry pair " + pair.label() + ", schedule " + spec.name + ": " +
                              e.what() + hint);
          }
        }
      }
      return;
    }
  }
}

}  // namespace tibpalm::bench
