#include "thickset/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "thickset/concentration.hpp"
#include "thickset/error.hpp"
#include "thickset/extremal.hpp"
#include "thickset/interval_set.hpp"
#include "thickset/proofcheck.hpp"
#include "thickset/regression.hpp"
#include "thickset/trig_poly.hpp"

namespace thickset {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::string> kCommands{"bound", "thickness", "concentration", "verify", "extremal", "classify"};

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::Config, message); }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) { return splitmix(seed ^ splitmix(salt + 1)); }

std::uint64_t mix(std::uint64_t seed, std::initializer_list<std::uint64_t> salts) {
  for (auto salt : salts) seed = mix(seed, salt);
  return seed;
}

/// Number, or a string such as "inf", "pi", "4pi", "0.5pi".
double parse_real(const json& value, const std::string& key) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    std::string text = value.get<std::string>();
    if (text == "inf" || text == "infinity") return kInf;
    double factor = 1.0;
    if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
      factor = kPi;
      text.resize(text.size() - 2);
      if (text.empty()) return kPi;
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used == text.size()) return v * factor;
    } catch (const std::exception&) {
    }
  }
  config_error("'" + key + "' must be a number (\"inf\" and multiples of \"pi\" are accepted)");
}

Exponent parse_exponent(const json& value) {
  if (value.is_string()) return Exponent::parse(value.get<std::string>());
  if (value.is_number()) return Exponent(value.get<double>());
  config_error("exponent must be a number or \"inf\"");
}

int parse_int(const json& value, const std::string& key) {
  if (!value.is_number_integer()) config_error("'" + key + "' must be an integer");
  return value.get<int>();
}

/// Reads `list_key` (array) or `scalar_key` (single value); falls back when both are absent.
template <class T, class Parse>
std::vector<T> grid(const json& doc, const std::string& list_key, const std::string& scalar_key,
                    std::optional<std::vector<T>> fallback, Parse parse) {
  std::vector<T> out;
  if (doc.contains(list_key)) {
    const auto& list = doc.at(list_key);
    if (!list.is_array()) config_error("'" + list_key + "' must be an array");
    for (const auto& item : list) out.push_back(parse(item, list_key));
    if (out.empty()) config_error("'" + list_key + "' must not be empty");
    return out;
  }
  if (doc.contains(scalar_key)) return {parse(doc.at(scalar_key), scalar_key)};
  if (fallback) return *fallback;
  config_error("missing '" + scalar_key + "' or '" + list_key + "'");
}

std::vector<double> reals(const json& doc, const std::string& base, std::optional<std::vector<double>> fallback) {
  return grid<double>(doc, base + "_list", base, std::move(fallback), parse_real);
}

std::vector<int> integers(const json& doc, const std::string& base, std::optional<std::vector<int>> fallback) {
  return grid<int>(doc, base + "_list", base, std::move(fallback), parse_int);
}

std::vector<Exponent> exponents(const json& doc, std::optional<std::vector<Exponent>> fallback) {
  return grid<Exponent>(doc, "p_list", "p", std::move(fallback),
                        [](const json& v, const std::string&) { return parse_exponent(v); });
}

double real_or(const json& doc, const std::string& key, double fallback) {
  return doc.contains(key) ? parse_real(doc.at(key), key) : fallback;
}

std::size_t size_or(const json& doc, const std::string& key, std::size_t fallback) {
  if (!doc.contains(key)) return fallback;
  const int v = parse_int(doc.at(key), key);
  if (v < 0) config_error("'" + key + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

/// {"two_sliver": gamma} or {"period": L|null, "intervals": [[lo, hi], ...]}.
IntervalSet parse_set(const json& value) {
  if (!value.is_object()) config_error("a set must be a JSON object");
  if (value.contains("two_sliver")) return two_sliver_set(parse_real(value.at("two_sliver"), "two_sliver"));
  return interval_set_from_json(value);
}

std::uint64_t base_seed(const ExperimentConfig& config) {
  if (config.seed_override) return *config.seed_override;
  const auto& doc = config.document;
  if (!doc.contains("seed")) return 1;
  if (!doc.at("seed").is_number_unsigned()) config_error("'seed' must be a non-negative integer");
  return doc.at("seed").get<std::uint64_t>();
}

/// "seeds": a count (derived from the base seed) or an explicit list.
std::vector<std::uint64_t> seed_list(const ExperimentConfig& config, std::size_t fallback_count) {
  const auto& doc = config.document;
  std::size_t count = fallback_count;
  if (doc.contains("seeds")) {
    const auto& seeds = doc.at("seeds");
    if (seeds.is_array()) {
      if (seeds.empty()) config_error("'seeds' must not be empty");
      std::vector<std::uint64_t> out;
      for (const auto& s : seeds) {
        if (!s.is_number_unsigned()) config_error("'seeds' entries must be non-negative integers");
        out.push_back(config.seed_override ? mix(*config.seed_override, s.get<std::uint64_t>())
                                           : s.get<std::uint64_t>());
      }
      return out;
    }
    count = size_or(doc, "seeds", fallback_count);
    if (count == 0) config_error("'seeds' must be positive");
  }
  const auto base = base_seed(config);
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(mix(base, i));
  return out;
}

/// Runs fn(0..count-1) on up to `jobs` threads; results keep index order.
template <class Fn>
auto parallel_map(std::size_t count, int jobs, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  const auto workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();
  for (auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return out;
}

Cell optional_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

double log10_of(double log_value) { return log_value / std::numbers::ln10; }

double safe_log(double v) { return v > 0.0 ? std::log(v) : -kInf; }

// ---------------------------------------------------------------------------
// bound

ExperimentTable run_bound(const ExperimentConfig& config) {
  const auto& doc = config.document;
  const auto& k = config.constants;
  const std::string kind = doc.value("kind", std::string("theorem1"));
  ExperimentTable table({"kind", "gamma", "ab", "p", "n", "m", "meas_E", "len_I", "M", "d", "value", "log10_value"});
  struct Row {
    std::optional<double> gamma, ab;
    std::optional<Exponent> p;
    std::optional<double> n, m, meas_e, len_i, max_modulus, d;
  };
  auto add = [&](const std::string& name, const Row& r, BoundValue v) {
    const auto whole = [](const std::optional<double>& x) { return x ? Cell{static_cast<long long>(*x)} : Cell{}; };
    table.add_row({name, optional_cell(r.gamma), optional_cell(r.ab), r.p ? Cell{r.p->to_string()} : Cell{},
                   whole(r.n), whole(r.m), optional_cell(r.meas_e), optional_cell(r.len_i),
                   optional_cell(r.max_modulus), whole(r.d), v.value(), v.log10()});
  };

  if (kind == "theorem1" || kind == "theorem2" || kind == "theorem2prime" || kind == "remark1") {
    const auto gammas = reals(doc, "gamma", std::nullopt);
    const auto abs = reals(doc, "ab", std::nullopt);
    const auto ps = exponents(doc, std::nullopt);
    const auto ns = kind == "theorem2" || kind == "theorem2prime" ? integers(doc, "n", std::nullopt)
                                                                  : std::vector<int>{1};
    for (double gamma : gammas) {
      for (double ab : abs) {
        for (const auto& p : ps) {
          for (int n : ns) {
            Row r{gamma, ab, p, {}, {}, {}, {}, {}, {}};
            if (kind == "theorem1") {
              add(kind, r, theorem1_bound(gamma, ab, p, k));
            } else if (kind == "remark1") {
              const auto rb = remark1_bounds(gamma, ab, p);
              if (rb.small_ab) add("remark1_small_ab", r, BoundValue{std::log(*rb.small_ab)});
              if (rb.near_full) add("remark1_near_full", r, BoundValue{std::log(*rb.near_full)});
            } else {
              r.n = n;
              add(kind, r,
                  kind == "theorem2" ? theorem2_bound(gamma, n, ab, p, k) : theorem2prime_bound(gamma, n, ab, p, k));
            }
          }
        }
      }
    }
  } else if (kind == "lemma1") {
    const auto measures = reals(doc, "meas_E", std::nullopt);
    const auto moduli = reals(doc, "M", std::nullopt);
    std::vector<std::optional<Exponent>> ps{std::nullopt};
    if (doc.contains("p") || doc.contains("p_list")) {
      ps.clear();
      for (const auto& p : exponents(doc, std::nullopt)) ps.emplace_back(p);
    }
    for (double meas : measures) {
      for (double modulus : moduli) {
        for (const auto& p : ps) {
          Row r{};
          r.p = p;
          r.meas_e = meas;
          r.max_modulus = modulus;
          add(kind, r, lemma1_corollary_bound(meas, modulus, p, k));
        }
      }
    }
  } else if (kind == "lemma3" || kind == "nazarov_remez") {
    const auto lens = reals(doc, "len_I", std::vector<double>{1.0});
    const auto measures = reals(doc, "meas_E", std::nullopt);
    const auto ns = integers(doc, "n", std::nullopt);
    const auto ms = kind == "lemma3" ? integers(doc, "m", std::nullopt) : std::vector<int>{0};
    const auto ps = kind == "lemma3" ? exponents(doc, std::nullopt) : std::vector<Exponent>{Exponent::infinity()};
    for (double len : lens) {
      for (double meas : measures) {
        for (int n : ns) {
          for (int m : ms) {
            for (const auto& p : ps) {
              Row r{};
              r.len_i = len;
              r.meas_e = meas;
              r.n = n;
              if (kind == "lemma3") {
                r.m = m;
                r.p = p;
                add(kind, r, lemma3_bound(len, meas, n, m, p, k));
              } else {
                const auto nr = nazarov_remez_bounds(len, meas, n, k);
                add("nazarov", r, nr.nazarov);
                add("remez", r, nr.remez);
              }
            }
          }
        }
      }
    }
  } else if (kind == "multidim") {
    const auto gammas = reals(doc, "gamma", std::nullopt);
    const auto ps = exponents(doc, std::nullopt);
    if (!doc.contains("ab_products") || !doc.at("ab_products").is_array() || doc.at("ab_products").empty()) {
      config_error("multidim needs a nonempty 'ab_products' array");
    }
    std::vector<std::vector<double>> products;
    const auto& raw = doc.at("ab_products");
    if (raw.front().is_array()) {
      for (const auto& item : raw) products.push_back(reals(json{{"v_list", item}}, "v", std::nullopt));
    } else {
      products.push_back(reals(json{{"v_list", raw}}, "v", std::nullopt));
    }
    std::vector<std::optional<int>> ns{std::nullopt};
    if (doc.contains("n") || doc.contains("n_list")) {
      ns.clear();
      for (int n : integers(doc, "n", std::nullopt)) ns.emplace_back(n);
    }
    for (double gamma : gammas) {
      for (const auto& ab : products) {
        for (const auto& p : ps) {
          for (const auto& n : ns) {
            MultiDimParams params{static_cast<int>(ab.size()), ab};
            double sum = 0.0;
            for (double v : ab) sum += v;
            Row r{gamma, sum, p, {}, {}, {}, {}, {}, static_cast<double>(params.d)};
            if (n) r.n = *n;
            add(n ? "multidim_union" : "multidim", r, multidim_bound(gamma, params, p, n, k));
          }
        }
      }
    }
  } else {
    config_error("unknown bound kind '" + kind + "'");
  }
  return table;
}

// ---------------------------------------------------------------------------
// thickness

ExperimentTable run_thickness(const ExperimentConfig& config) {
  const auto& doc = config.document;
  if (!doc.contains("set")) config_error("thickness needs 'set'");
  const auto set = parse_set(doc.at("set"));
  const auto windows = reals(doc, "a", std::nullopt);
  std::optional<Interval> domain;
  if (doc.contains("domain")) {
    const auto& d = doc.at("domain");
    if (!d.is_array() || d.size() != 2) config_error("'domain' must be [lo, hi]");
    domain = Interval{parse_real(d[0], "domain"), parse_real(d[1], "domain")};
  }
  ExperimentTable table({"a", "gamma"});
  for (double a : windows) {
    const auto cert = domain ? thickness(set, a, *domain) : thickness(set, a);
    table.add_row({cert.a, cert.gamma});
  }
  return table;
}

// ---------------------------------------------------------------------------
// concentration

ExperimentTable run_concentration(const ExperimentConfig& config) {
  const auto& doc = config.document;
  ExperimentTable table({"gamma", "b", "N", "lambda_min", "exact", "bound", "margin", "log10_bound", "log10_margin",
                         "method"});
  if (doc.contains("freqs")) {
    std::vector<long long> freqs;
    if (!doc.at("freqs").is_array() || doc.at("freqs").empty()) config_error("'freqs' must be a nonempty array");
    for (const auto& v : doc.at("freqs")) {
      if (!v.is_number_integer()) config_error("'freqs' entries must be integers");
      freqs.push_back(v.get<long long>());
    }
    const char* set_key = doc.contains("E") ? "E" : "set";
    if (!doc.contains(set_key)) config_error("concentration needs 'E'");
    const auto& raw = doc.at(set_key);
    const double period = real_or(doc, "L", 2.0 * kPi);
    IntervalSet set = raw.is_array() ? IntervalSet::normalize([&] {
      std::vector<Interval> pieces;
      if (!raw.empty() && raw.front().is_array()) {
        for (const auto& piece : raw) pieces.push_back({parse_real(piece.at(0), "E"), parse_real(piece.at(1), "E")});
      } else if (raw.size() == 2) {
        pieces.push_back({parse_real(raw[0], "E"), parse_real(raw[1], "E")});
      } else {
        config_error("'E' must be [lo, hi] or a list of pairs");
      }
      return pieces;
    }())
                                     : parse_set(raw);
    auto result = min_concentration(freqs, set, period);
    if (result.lambda_min < kGramResolutionFloor) result = min_concentration_factored(freqs, set, period);
    table.add_row({Cell{}, Cell{}, static_cast<long long>(freqs.size()), result.lambda_min,
                   std::sqrt(std::max(result.lambda_min, 0.0)), Cell{}, Cell{}, Cell{}, Cell{}, result.method});
    return table;
  }

  const auto gammas = reals(doc, "gamma", std::nullopt);
  const auto bs = reals(doc, "b", std::nullopt);
  const double period = real_or(doc, "L", 16.0);
  const double a = real_or(doc, "a", 1.0);
  std::vector<double> offsets{0.0};
  if (doc.contains("centers")) offsets = reals(doc, "centers", std::nullopt);
  struct Cellwise {
    double gamma, b;
  };
  std::vector<Cellwise> cells;
  for (double gamma : gammas) {
    for (double b : bs) cells.push_back({gamma, b});
  }
  const auto reports = parallel_map(cells.size(), config.jobs, [&](std::size_t i) {
    return sharpness_gap(BandSpec(offsets, cells[i].b), two_sliver_set(cells[i].gamma), period, a, config.constants);
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& r = reports[i];
    table.add_row({r.gamma, r.b, static_cast<long long>(r.frequency_count), r.lambda_min, r.exact, r.bound.value(),
                   std::exp(r.log_margin), r.bound.log10(), log10_of(r.log_margin), r.method});
    if (!(r.log_margin >= 0.0)) {
      std::ostringstream msg;
      msg << "concentration: sqrt(lambda_min) below the bound at gamma=" << format_real(r.gamma)
          << " b=" << format_real(r.b);
      table.fail(msg.str());
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string suite;
  std::string name;
  std::uint64_t seed = 0;
  double b = kNaN;
  std::string p;
  std::optional<double> gamma;
  double measured = kNaN;
  double log_measured = kNaN;
  double bound = kNaN;  // linear-scale bound; exp(log_bound) for log-scale checks
  double log_bound = kNaN;
  std::string relation;  // "ge", "le" or "report"
  bool holds = true;
};

Check make_check(std::string suite, std::string name, std::uint64_t seed, double b, std::string p,
                 std::optional<double> gamma) {
  Check c;
  c.suite = std::move(suite);
  c.name = std::move(name);
  c.seed = seed;
  c.b = b;
  c.p = std::move(p);
  c.gamma = gamma;
  return c;
}

/// measured >= bound (relative slack on the log scale).
Check& at_least(Check& c, double measured, double log_bound, double slack = 1e-9) {
  c.measured = measured;
  c.log_measured = safe_log(measured);
  c.bound = std::exp(log_bound);
  c.log_bound = log_bound;
  c.relation = "ge";
  c.holds = c.log_measured + slack >= log_bound;
  return c;
}

/// measured <= bound (relative slack on the log scale).
Check& at_most(Check& c, double measured, double log_bound, double slack = 1e-9) {
  c.measured = measured;
  c.log_measured = safe_log(measured);
  c.bound = std::exp(log_bound);
  c.log_bound = log_bound;
  c.relation = "le";
  c.holds = c.log_measured <= log_bound + slack;
  return c;
}

Check& report(Check& c, double measured) {
  c.measured = measured;
  c.log_measured = safe_log(measured);
  c.relation = "report";
  c.holds = true;
  return c;
}

struct VerifyGrid {
  std::vector<std::uint64_t> seeds;
  std::vector<double> b_list;
  std::vector<Exponent> p_list;
  std::vector<double> gamma_list;
  double period = 8.0;
  std::size_t budget = 0;
  double a = 1.0;
};

using Task = std::function<std::vector<Check>()>;

std::vector<Exponent> finite_only(const std::vector<Exponent>& ps) {
  std::vector<Exponent> out;
  for (const auto& p : ps) {
    if (!p.is_infinite()) out.push_back(p);
  }
  return out;
}

std::vector<Interval> torus_pieces(double period) { return {{0.0, period}}; }

void theorem1_tasks(const VerifyGrid& g, const BoundConstants& k, std::vector<Task>& tasks) {
  for (auto seed : g.seeds) {
    for (std::size_t bi = 0; bi < g.b_list.size(); ++bi) {
      tasks.push_back([=, &g, &k] {
        const double b = g.b_list[bi];
        const auto f = random_bandlimited(BandSpec::centered(b), g.period, g.budget, mix(seed, {1, bi}));
        const auto whole = torus_pieces(g.period);
        std::vector<Check> out;
        for (const auto& p : g.p_list) {
          const double full = lp_norm(f, p, whole);
          for (double gamma : g.gamma_list) {
            const auto set = two_sliver_set(gamma).scaled(g.a);
            const double gamma_cert = thickness(set, g.a).gamma;
            const auto pieces = integration_pieces(f, set);
            const double ratio = lp_norm(f, p, pieces) / full;
            auto c = make_check("theorem1", "ratio", seed, b, p.to_string(), gamma);
            out.push_back(at_least(c, ratio, theorem1_bound(gamma_cert, g.a * b, p, k).log));
          }
        }
        return out;
      });
    }
  }
}

void bernstein_tasks(const VerifyGrid& g, std::vector<Task>& tasks) {
  for (auto seed : g.seeds) {
    for (std::size_t bi = 0; bi < g.b_list.size(); ++bi) {
      tasks.push_back([=, &g] {
        const double b = g.b_list[bi];
        const auto f = random_bandlimited(BandSpec::centered(b), g.period, g.budget, mix(seed, {2, bi}));
        std::vector<Check> out;
        for (const auto& p : g.p_list) {
          auto c = make_check("bernstein", "derivative_ratio", seed, b, p.to_string(), std::nullopt);
          out.push_back(at_most(c, bernstein_ratio(f, p), std::log(b / 2.0), 1e-8));
          if (!p.is_infinite() && p.value() == 2.0) {
            double energy = 0.0;
            for (const auto& t : f.terms()) energy += std::norm(t.coefficient);
            energy *= g.period;
            const auto whole = torus_pieces(g.period);
            const double measured = lp_power(f, 2.0, whole);
            auto parseval = make_check("bernstein", "parseval_rel_error", seed, b, p.to_string(), std::nullopt);
            out.push_back(at_most(parseval, std::abs(measured - energy) / energy, std::log(1e-10), 0.0));
          }
        }
        return out;
      });
    }
  }
}

/// Good/bad decomposition, local estimate on good intervals, and the growth envelope.
void classifier_tasks(const VerifyGrid& g, const BoundConstants& k, const std::string& which, double radius,
                      std::vector<Task>& tasks) {
  const auto finite = finite_only(g.p_list);
  for (auto seed : g.seeds) {
    for (std::size_t bi = 0; bi < g.b_list.size(); ++bi) {
      for (const auto& p : finite) {
        tasks.push_back([=, &g, &k] {
          const double b = g.b_list[bi];
          const auto f = random_bandlimited(BandSpec::centered(b), g.period, g.budget, mix(seed, {3, bi}));
          ClassifierParams params;
          params.p = p.value();
          const auto partition = unit_partition(g.period);
          const auto labels = classify_intervals(f, b, partition, params);
          std::vector<Check> out;
          const std::string ps = p.to_string();
          if (which == "goodbad") {
            const auto mass = good_mass_check(f, labels, params);
            auto bad = make_check(which, "bad_fraction", seed, b, ps, std::nullopt);
            out.push_back(at_most(bad, mass.bad_fraction, std::log(mass.bad_limit + 1e-4), 0.0));
            auto good = make_check(which, "good_fraction", seed, b, ps, std::nullopt);
            out.push_back(at_least(good, mass.good_fraction, std::log(0.5 - 1e-4), 0.0));
          } else if (which == "local") {
            for (double gamma : g.gamma_list) {
              const auto set = two_sliver_set(gamma);
              bool all = true;
              double worst_gap = kInf;
              LocalEstimate worst;
              for (const auto& label : labels) {
                if (label.bad) continue;
                const auto est = local_estimate_check(f, set, label.interval, p.value(), b, k);
                all = all && est.holds;
                const double gap = safe_log(est.lhs) - est.log_rhs;
                if (gap < worst_gap) {
                  worst_gap = gap;
                  worst = est;
                }
              }
              auto c = make_check(which, "worst_good_interval", seed, b, ps, gamma);
              at_least(c, worst.lhs, worst.log_rhs, 0.0);
              c.holds = c.holds && all;
              out.push_back(c);
            }
          } else {
            double worst_gap = -kInf;
            double ratio = 0.0;
            double log_bound = 0.0;
            for (const auto& label : labels) {
              if (label.bad) continue;
              const auto env = growth_envelope(f, label.interval, radius, p, b);
              const double lb = std::log(2.0) / p.value() + b * (radius + 0.5);
              const double gap = safe_log(env.ratio) - lb;
              if (gap > worst_gap) {
                worst_gap = gap;
                ratio = env.ratio;
                log_bound = lb;
              }
            }
            auto c = make_check(which, "worst_good_interval", seed, b, ps, std::nullopt);
            out.push_back(at_most(c, ratio, log_bound));
          }
          return out;
        });
      }
    }
  }
}

void taylor_tasks(const VerifyGrid& g, const json& doc, std::vector<Task>& tasks) {
  const double b = real_or(doc, "taylor_b", 4.0 * kPi);
  const auto degrees = integers(doc, "taylor_m", std::vector<int>{1, 2, 4, 8, 12});
  const auto finite = finite_only(g.p_list);
  for (auto seed : g.seeds) {
    tasks.push_back([=, &g] {
      std::vector<TrigPoly> parts;
      for (std::uint64_t j = 0; j < 2; ++j) {
        parts.push_back(random_bandlimited(BandSpec::centered(b), g.period, g.budget, mix(seed, {4, j})));
      }
      const std::vector<double> centers{0.0, 3.0 * b};
      const Interval interval{0.25, 0.25 + g.a};
      std::vector<Check> out;
      for (int m : degrees) {
        const auto split = taylor_split(parts, centers, interval, m);
        double worst = 0.0;
        double scale = 0.0;
        for (int i = 0; i < 64; ++i) {
          const double x = interval.lo + interval.length() * (i + 0.5) / 64.0;
          const Complex fx = split.original(x);
          scale = std::max(scale, std::abs(fx));
          worst = std::max(worst, std::abs(fx - split.polynomial_part()(x) - split.remainder(x)));
        }
        const std::string tag = "_m" + std::to_string(m);
        auto identity = make_check("taylor", "identity" + tag, seed, b, "", std::nullopt);
        out.push_back(at_most(identity, worst / scale, std::log(1e-8), 0.0));
        for (const auto& p : finite) {
          const auto rem = remainder_bound_check(split, p.value());
          auto c = make_check("taylor", "remainder" + tag, seed, b, p.to_string(), std::nullopt);
          out.push_back(at_most(c, rem.lhs, safe_log(rem.rhs)));
        }
      }
      return out;
    });
  }
}

void lemma2_tasks(const VerifyGrid& g, std::vector<Task>& tasks) {
  for (auto seed : g.seeds) {
    for (std::size_t bi = 0; bi < g.b_list.size(); ++bi) {
      tasks.push_back([=, &g] {
        const double b = g.b_list[bi];
        const double unit = 2.0 * kPi / g.period;
        std::vector<double> centers;
        for (double c : {0.0, 2.0 * b, 4.0 * b}) centers.push_back(unit * std::round(c / unit));
        const BandSpec spec(centers, b);
        const auto f = random_bandlimited(spec, g.period, g.budget, mix(seed, {5, bi}));
        std::vector<Check> out;
        for (const auto& p : g.p_list) {
          const auto split = band_component_norms(f, spec, p);
          auto c = make_check("lemma2", "component_ratio", seed, b, p.to_string(), std::nullopt);
          if (!p.is_infinite() && p.value() == 2.0) {
            out.push_back(at_most(c, split.max_ratio, std::log1p(1e-10), 0.0));
          } else {
            out.push_back(report(c, split.max_ratio));
          }
        }
        return out;
      });
    }
  }
}

std::string nm_tag(int n, int m) { return "_n" + std::to_string(n) + "_m" + std::to_string(m); }

std::string density_tag(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", d);
  return buf;
}

void lemma3_tasks(const VerifyGrid& g, const json& doc, const BoundConstants& k, std::vector<Task>& tasks) {
  const auto densities = reals(doc, "density", std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  const auto ns = integers(doc, "n", std::vector<int>{1, 2, 3});
  const auto ms = integers(doc, "m", std::vector<int>{1, 2, 3});
  const double max_lambda = real_or(doc, "max_lambda", 10.0);
  const int pieces = static_cast<int>(size_or(doc, "pieces", 3));
  for (int n : ns) {
    for (int m : ms) {
      for (const auto& p : g.p_list) {
        tasks.push_back([=, &g, &k] {
          const Interval unit{0.0, 1.0};
          std::vector<Check> out;
          std::vector<double> worst(densities.size(), 0.0);
          const std::uint64_t root = g.seeds.front();
          for (std::size_t di = 0; di < densities.size(); ++di) {
            for (auto seed : g.seeds) {
              const auto salt = mix(seed, {6, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m), di});
              const auto r = random_exp_sum(n, m, 0.0, max_lambda, salt);
              const auto subset = random_subset(unit, densities[di], pieces, splitmix(salt));
              const auto check = exp_sum_verifier(r, unit, subset, p, k);
              worst[di] = std::max(worst[di], check.ratio);
            }
            auto c = make_check("lemma3", "worst_ratio" + nm_tag(n, m) + "_E" + density_tag(densities[di]), root,
                                kNaN, p.to_string(), densities[di]);
            out.push_back(at_most(c, worst[di], lemma3_bound(1.0, densities[di], n, m, p, k).log));
          }
          std::vector<double> x, y;
          for (std::size_t di = 0; di < densities.size(); ++di) {
            x.push_back(std::log(1.0 / densities[di]));
            y.push_back(std::log(worst[di]));
          }
          const auto fit = fit_line(x, y);
          auto slope = make_check("lemma3", "slope" + nm_tag(n, m), root, kNaN, p.to_string(), std::nullopt);
          const double limit = n * m - p.conjugate_ratio() + 0.1;
          slope.measured = fit.slope;
          slope.bound = limit;
          slope.relation = "le";
          slope.holds = fit.slope <= limit;
          out.push_back(slope);
          auto r2 = make_check("lemma3", "r_squared" + nm_tag(n, m), root, kNaN, p.to_string(), std::nullopt);
          out.push_back(report(r2, fit.r_squared));
          const auto c_min = minimal_constant(densities, worst, n, m, p);
          auto cm = make_check("lemma3", "minimal_C" + nm_tag(n, m), root, kNaN, p.to_string(), std::nullopt);
          out.push_back(report(cm, c_min.value_or(kNaN)));
          return out;
        });
      }
    }
  }
}

void remez_tasks(const VerifyGrid& g, const json& doc, const BoundConstants& k, std::vector<Task>& tasks) {
  const auto densities = reals(doc, "density", std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  const auto degrees = integers(doc, "degree", std::vector<int>{1, 2, 3});
  const int pieces = static_cast<int>(size_or(doc, "pieces", 3));
  const auto inf = Exponent::infinity();
  for (int degree : degrees) {
    tasks.push_back([=, &g, &k] {
      const Interval unit{0.0, 1.0};
      std::vector<Check> out;
      const std::string deg = "_deg" + std::to_string(degree);
      for (double d : densities) {
        const Interval subset{0.0, d};
        const auto cheb = exp_sum_verifier(chebyshev_instance(subset, degree), unit, std::span(&subset, 1), inf, k);
        auto c = make_check("remez", "chebyshev" + deg + "_E" + density_tag(d), 0, kNaN, "inf", d);
        out.push_back(at_most(c, cheb.ratio, cheb.remez->log));
        double worst_gap = -kInf;
        double worst_ratio = 0.0;
        double worst_bound = 0.0;
        std::uint64_t worst_seed = 0;
        for (auto seed : g.seeds) {
          const auto salt = mix(seed, {7, static_cast<std::uint64_t>(degree)});
          const auto r = random_exp_sum(1, degree + 1, 0.0, 0.0, salt);
          const auto set = random_subset(unit, d, pieces, splitmix(salt ^ static_cast<std::uint64_t>(d * 1e6)));
          const auto check = exp_sum_verifier(r, unit, set, inf, k);
          if (!check.remez) continue;
          const double gap = safe_log(check.ratio) - check.remez->log;
          if (gap > worst_gap) {
            worst_gap = gap;
            worst_ratio = check.ratio;
            worst_bound = check.remez->log;
            worst_seed = seed;
          }
        }
        auto rc = make_check("remez", "random" + deg + "_E" + density_tag(d), worst_seed, kNaN, "inf", d);
        out.push_back(at_most(rc, worst_ratio, worst_bound));
      }
      return out;
    });
  }
}

void remark1_tasks(const VerifyGrid& g, const json& doc, std::vector<Task>& tasks) {
  const auto bs = reals(doc, "remark1_b", std::vector<double>{0.5, 1.0});
  const double period = real_or(doc, "remark1_L", 64.0);
  for (auto seed : g.seeds) {
    for (std::size_t bi = 0; bi < bs.size(); ++bi) {
      tasks.push_back([=, &g] {
        const double b = bs[bi];
        const auto f = random_bandlimited(BandSpec::centered(b), period, g.budget, mix(seed, {8, bi}));
        const auto whole = torus_pieces(period);
        std::vector<Check> out;
        for (const auto& p : g.p_list) {
          const double full = lp_norm(f, p, whole);
          auto ratio_on = [&](double gamma) {
            return lp_norm(f, p, integration_pieces(f, two_sliver_set(gamma).scaled(g.a))) / full;
          };
          const double ab = g.a * b;
          for (double gamma : g.gamma_list) {
            const auto rb = remark1_bounds(gamma, ab, p);
            if (!rb.small_ab) continue;
            auto c = make_check("remark1", "small_ab", seed, b, p.to_string(), gamma);
            out.push_back(at_least(c, ratio_on(gamma), std::log(*rb.small_ab)));
          }
          if (p.is_infinite()) continue;
          const double edge = 1.0 - 1.0 / (2.0 + p.value() * ab);
          for (double gamma : {edge, 0.5 * (1.0 + edge)}) {
            const double ratio = ratio_on(gamma);
            auto c = make_check("remark1", "near_full", seed, b, p.to_string(), gamma);
            out.push_back(at_least(c, std::pow(ratio, p.value()), std::log(0.5 - 1e-4), 0.0));
          }
        }
        return out;
      });
    }
  }
}

const std::vector<std::string> kSuites{"theorem1", "bernstein", "goodbad", "local", "envelope",
                                       "taylor",   "lemma2",    "lemma3",  "remez", "remark1"};

ExperimentTable run_verify(const ExperimentConfig& config) {
  const auto& doc = config.document;
  const std::string suite = doc.value("suite", std::string("all"));
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = kSuites;
  } else if (std::find(kSuites.begin(), kSuites.end(), suite) != kSuites.end()) {
    suites = {suite};
  } else {
    config_error("unknown suite '" + suite + "'");
  }
  VerifyGrid g;
  g.seeds = seed_list(config, 10);
  g.b_list = reals(doc, "b", std::vector<double>{4.0 * kPi, 16.0 * kPi});
  g.p_list = exponents(doc, std::vector<Exponent>{Exponent(1.0), Exponent(2.0), Exponent::infinity()});
  g.gamma_list = reals(doc, "gamma", std::vector<double>{0.1, 0.3, 0.7});
  g.period = real_or(doc, "L", 8.0);
  g.budget = size_or(doc, "budget", 0);
  g.a = real_or(doc, "a", 1.0);
  const double radius = real_or(doc, "radius", 2.0);

  ExperimentTable table({"suite", "case", "seed", "b", "p", "gamma", "measured", "bound", "relation",
                         "log10_measured", "log10_bound", "holds"});
  for (const auto& name : suites) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Task> tasks;
    if (name == "theorem1") theorem1_tasks(g, config.constants, tasks);
    if (name == "bernstein") bernstein_tasks(g, tasks);
    if (name == "goodbad" || name == "local" || name == "envelope") {
      classifier_tasks(g, config.constants, name, radius, tasks);
    }
    if (name == "taylor") taylor_tasks(g, doc, tasks);
    if (name == "lemma2") lemma2_tasks(g, tasks);
    if (name == "lemma3") lemma3_tasks(g, doc, config.constants, tasks);
    if (name == "remez") remez_tasks(g, doc, config.constants, tasks);
    if (name == "remark1") remark1_tasks(g, doc, tasks);
    const auto results = parallel_map(tasks.size(), config.jobs, [&](std::size_t i) { return tasks[i](); });
    std::size_t count = 0, failed = 0;
    for (const auto& batch : results) {
      for (const auto& c : batch) {
        ++count;
        const auto maybe = [](double v) { return std::isnan(v) ? Cell{} : Cell{v}; };
        table.add_row({c.suite, c.name, std::to_string(c.seed), std::isnan(c.b) ? Cell{} : Cell{c.b},
                       c.p.empty() ? Cell{} : Cell{c.p}, optional_cell(c.gamma), c.measured, maybe(c.bound),
                       c.relation, maybe(log10_of(c.log_measured)), maybe(log10_of(c.log_bound)), c.holds});
        if (!c.holds) {
          ++failed;
          std::ostringstream msg;
          msg << c.suite << "/" << c.name << " seed=" << c.seed << " b=" << format_real(c.b) << " p=" << c.p
              << " measured=" << format_real(c.measured) << " bound=" << format_real(c.bound)
              << " log10_bound=" << format_real(log10_of(c.log_bound));
          table.fail(msg.str());
        }
      }
    }
    if (config.verbose) {
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      std::cerr << "verify " << name << ": " << count << " checks, " << failed << " failed, " << took.count()
                << " s\n";
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// extremal

ExperimentTable run_extremal(const ExperimentConfig& config) {
  const auto& doc = config.document;
  auto bs = reals(doc, "b", std::vector<double>{40.0 * kPi, 80.0 * kPi, 160.0 * kPi});
  std::sort(bs.begin(), bs.end());
  const auto gammas = reals(doc, "gamma", std::vector<double>{0.1, 0.2, 0.4});
  const auto ps = exponents(doc, std::vector<Exponent>{Exponent(2.0)});
  std::optional<double> half_width;
  if (doc.contains("half_width")) half_width = parse_real(doc.at("half_width"), "half_width");

  struct Point {
    double b, gamma;
    Exponent p;
  };
  std::vector<Point> points;
  for (const auto& p : ps) {
    for (double gamma : gammas) {
      for (double b : bs) points.push_back({b, gamma, p});
    }
  }
  const auto ratios = parallel_map(points.size(), config.jobs, [&](std::size_t i) {
    return extremal_ratio(extremal_pair(points[i].b, points[i].gamma), points[i].p, half_width);
  });

  // largest c with ratio <= (gamma/c)^{b/4pi - 1} on every gamma at the top of the b grid
  std::vector<double> fitted(points.size(), kInf);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].b != bs.back()) continue;
    const double c = points[i].gamma * std::exp(-safe_log(ratios[i].ratio) / example_exponent(points[i].b));
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j].p == points[i].p) fitted[j] = std::min(fitted[j], c);
    }
  }

  ExperimentTable table({"b", "gamma", "p", "m", "ratio", "theorem_bound", "example_bound", "margin", "fitted_c",
                         "log10_ratio", "log10_theorem_bound", "log10_example_bound", "log10_margin", "half_width",
                         "tail_bound"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const auto& r = ratios[i];
    const auto inst = extremal_pair(pt.b, pt.gamma);
    const auto theorem = theorem1_bound(pt.gamma, pt.b, pt.p, config.constants);
    const double log_example = example_exponent(pt.b) * std::log(pt.gamma / fitted[i]);
    const double log_margin = safe_log(r.ratio) - theorem.log;
    table.add_row({pt.b, pt.gamma, pt.p.to_string(), static_cast<long long>(inst.m), r.ratio, theorem.value(),
                   std::exp(log_example), std::exp(log_margin), fitted[i], log10_of(safe_log(r.ratio)),
                   theorem.log10(), log10_of(log_example), log10_of(log_margin), r.half_width, r.tail_bound});
    std::ostringstream where;
    where << " at b=" << format_real(pt.b) << " gamma=" << format_real(pt.gamma) << " p=" << pt.p.to_string();
    if (!(log_margin >= 0.0)) table.fail("extremal: ratio below the theorem bound" + where.str());
    if (i > 0 && points[i - 1].gamma == pt.gamma && points[i - 1].p == pt.p &&
        !(r.ratio <= ratios[i - 1].ratio * (1.0 + 1e-9))) {
      table.fail("extremal: ratio increased with b" + where.str());
    }
    const bool first_of_p = i == 0 || !(points[i - 1].p == pt.p);
    if (first_of_p && !(fitted[i] >= 1.0)) {
      table.fail("extremal: no c >= 1 gives ratio <= (gamma/c)^(b/4pi - 1) at b=" + format_real(bs.back()) +
                 " p=" + pt.p.to_string() + " (largest c = " + format_real(fitted[i]) + ")");
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// classify

ExperimentTable run_classify(const ExperimentConfig& config) {
  const auto& doc = config.document;
  const double b = reals(doc, "b", std::nullopt).front();
  const auto p = exponents(doc, std::vector<Exponent>{Exponent(1.0)}).front();
  if (p.is_infinite()) config_error("classify needs a finite p");
  const double period = real_or(doc, "L", 8.0);
  ClassifierParams params;
  params.p = p.value();
  params.A = real_or(doc, "A", params.A);
  params.alpha_max = static_cast<int>(size_or(doc, "alpha_max", 0));
  TrigPoly f = doc.contains("f") ? trig_poly_from_json(doc.at("f"))
                                 : random_bandlimited(BandSpec::centered(b), period, size_or(doc, "budget", 0),
                                                      mix(base_seed(config), 3));
  const auto labels = classify_intervals(f, b, unit_partition(f.period()), params);
  double total = 0.0;
  for (const auto& l : labels) total += l.mass;
  ExperimentTable table({"index", "lo", "hi", "label", "witness_order", "mass", "mass_fraction"});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    table.add_row({static_cast<long long>(i), l.interval.lo, l.interval.hi, std::string(l.bad ? "bad" : "good"),
                   static_cast<long long>(l.witness_order), l.mass, l.mass / total});
  }
  const auto mass = good_mass_check(f, labels, params);
  if (!mass.holds) {
    table.fail("classify: good fraction " + format_real(mass.good_fraction) + ", bad fraction " +
               format_real(mass.bad_fraction) + " outside the limits");
  }
  return table;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const json& document) {
  if (!document.is_object()) config_error("config must be a JSON object");
  if (!document.contains("command") || !document.at("command").is_string()) config_error("missing 'command'");
  ExperimentConfig config;
  config.command = document.at("command").get<std::string>();
  if (std::find(kCommands.begin(), kCommands.end(), config.command) == kCommands.end()) {
    config_error("unknown command '" + config.command + "'");
  }
  config.document = document;
  if (document.contains("constants")) {
    const auto& c = document.at("constants");
    if (!c.is_object()) config_error("'constants' must be an object");
    auto& k = config.constants;
    for (const auto& [key, value] : c.items()) {
      const double v = parse_real(value, key);
      if (key == "c_t1" || key == "C_t1") {
        k.c_t1 = v;
      } else if (key == "c_t1_inf" || key == "C_t1_inf") {
        k.c_t1_inf = v;
      } else if (key == "k_t1" || key == "K_t1") {
        k.k_t1 = v;
      } else if (key == "c_t2" || key == "C_t2") {
        k.c_t2 = v;
      } else if (key == "c_aux" || key == "C_aux") {
        k.c_aux = v;
      } else {
        config_error("unknown constant '" + key + "'");
      }
    }
    try {
      k.validate();
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  return config;
}

ExperimentTable::ExperimentTable(std::vector<std::string> header) : header_(std::move(header)) {}

void ExperimentTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) {
    throw Error(ErrorCode::InvalidArgument, "row has " + std::to_string(row.size()) + " cells, header has " +
                                                std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

void ExperimentTable::fail(std::string message) { failures_.push_back(std::move(message)); }

std::size_t ExperimentTable::column(const std::string& name) const {
  const auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) throw Error(ErrorCode::InvalidArgument, "no column '" + name + "'");
  return static_cast<std::size_t>(it - header_.begin());
}

double ExperimentTable::number(std::size_t row, const std::string& name) const {
  const auto& cell = rows_.at(row)[column(name)];
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<long long>(&cell)) return static_cast<double>(*i);
  return kNaN;
}

std::string ExperimentTable::text(std::size_t row, const std::string& name) const {
  return format_cell(rows_.at(row)[column(name)]);
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return format_real(d); }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string emit_csv(const ExperimentTable& table) {
  std::string out;
  auto line = [&out](const auto& fields, auto render) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += quote(render(fields[i]));
    }
    out += '\n';
  };
  line(table.header(), [](const std::string& s) { return s; });
  for (const auto& row : table.rows()) line(row, [](const Cell& c) { return format_cell(c); });
  return out;
}

void write_csv(const ExperimentTable& table, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  const auto bytes = emit_csv(table);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  file.close();
  if (!file) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

ExperimentTable run(const ExperimentConfig& config) {
  try {
    if (config.command == "bound") return run_bound(config);
    if (config.command == "thickness") return run_thickness(config);
    if (config.command == "concentration") return run_concentration(config);
    if (config.command == "verify") return run_verify(config);
    if (config.command == "extremal") return run_extremal(config);
    if (config.command == "classify") return run_classify(config);
  } catch (const json::exception& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
  config_error("unknown command '" + config.command + "'");
}

int exit_status(const ExperimentTable& table) { return table.ok() ? 0 : 1; }

}  // namespace thickset
