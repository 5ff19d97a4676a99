// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "thickset/concentration.hpp"
#include "thickset/experiments.hpp"
#include "thickset/extremal.hpp"

using namespace thickset;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

ExperimentTable run_doc(json doc) {
  auto config = ExperimentConfig::from_json(doc);
  config.jobs = jobs();
  return run(config);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs each suite with the same settings and concatenates the rows.
ExperimentTable run_suites(std::initializer_list<const char*> suites, json doc) {
  std::optional<ExperimentTable> merged;
  for (const char* suite : suites) {
    doc["suite"] = suite;
    const auto table = run_doc(doc);
    if (!merged) merged.emplace(table.header());
    for (const auto& row : table.rows()) merged->add_row(row);
    for (const auto& failure : table.failures()) merged->fail(failure);
  }
  return *merged;
}

std::size_t violations(const ExperimentTable& table) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < table.rows().size(); ++r) count += table.text(r, "holds") != "true";
  return count;
}

Outcome theorem1_dominance() {
  const auto start = std::chrono::steady_clock::now();
  const auto table = run_doc({{"command", "verify"},
                              {"suite", "theorem1"},
                              {"seeds", 67},
                              {"b_list", {"4pi", "16pi", "40pi"}},
                              {"p_list", {1, 2, "inf"}},
                              {"gamma_list", {0.1, 0.3, 0.7}}});
  const double elapsed = seconds_since(start);
  std::set<std::pair<std::string, std::string>> functions;
  double worst = INFINITY;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    functions.insert({table.text(r, "seed"), table.text(r, "b")});
    worst = std::min(worst, table.number(r, "log10_measured") - table.number(r, "log10_bound"));
  }
  const std::size_t bad = violations(table);
  return {functions.size() >= 200 && bad == 0 && table.ok() && elapsed <= 120.0,
          std::to_string(functions.size()) + " functions, " + std::to_string(table.rows().size()) + " checks, " +
              std::to_string(bad) + " violations, min log10 margin " + fmt("%.1f", worst) + ", " +
              fmt("%.1f", elapsed) + " s"};
}

Outcome concentration_exactness() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_single = 0.0;
  const std::vector<long long> zero{0};
  for (int trial = 0; trial < 20; ++trial) {
    const double period = 1.0 + 9.0 * u(rng);
    const double lo = period * u(rng);
    const auto set = IntervalSet::periodic({{lo, lo + period * (0.01 + 0.9 * u(rng))}}, period);
    const double expected = set.cell_measure() / period;
    worst_single = std::max(worst_single, std::abs(min_concentration(zero, set, period).lambda_min - expected));
  }
  const std::vector<long long> three{-1, 0, 1};
  const double closed = 0.5 - std::sqrt(2.0) / kPi;
  const double three_error =
      std::abs(min_concentration(three, IntervalSet::periodic({{0.0, kPi}}, 2.0 * kPi), 2.0 * kPi).lambda_min - closed);

  double worst_trace = 0.0;
  std::uniform_int_distribution<long long> index(-40, 40);
  for (int trial = 0; trial < 50; ++trial) {
    const double period = 1.0 + 9.0 * u(rng);
    std::set<long long> picked;
    const std::size_t n = 1 + static_cast<std::size_t>(30.0 * u(rng));
    while (picked.size() < n) picked.insert(index(rng));
    const std::vector<long long> freqs(picked.begin(), picked.end());
    std::vector<Interval> raw;
    for (int i = 0; i < 3; ++i) {
      const double lo = period * u(rng);
      raw.push_back({lo, lo + 0.2 * period * (0.05 + u(rng))});
    }
    const auto set = IntervalSet::periodic(raw, period);
    const auto eig = hermitian_eigen(gram_matrix(freqs, set, period).entries);
    double trace = 0.0;
    for (double v : eig.values) trace += v;
    const double expected = static_cast<double>(n) * set.cell_measure() / period;
    worst_trace = std::max(worst_trace, std::abs(trace - expected) / expected);
  }
  return {worst_single <= 1e-12 && three_error <= 1e-10 && worst_trace <= 1e-10,
          "{0}: " + fmt("%.1e", worst_single) + ", {-1,0,1}: " + fmt("%.1e", three_error) + ", trace (50): " +
              fmt("%.1e", worst_trace)};
}

Outcome sharpness_sandwich() {
  const auto start = std::chrono::steady_clock::now();
  const auto small = run_doc({{"command", "concentration"},
                              {"gamma_list", {0.1, 0.3, 0.7}},
                              {"b_list", {"4pi", "8pi", "16pi"}},
                              {"L", 16}});
  const auto large = run_doc({{"command", "concentration"}, {"gamma_list", {0.3, 0.7}}, {"b_list", {"32pi"}}, {"L", 16}});
  double max_n = 0.0;
  double worst = INFINITY;
  std::size_t cells = 0;
  std::size_t unresolved = 0;
  bool ok = small.ok() && large.ok();
  for (const auto* table : {&small, &large}) {
    for (std::size_t r = 0; r < table->rows().size(); ++r) {
      ++cells;
      max_n = std::max(max_n, table->number(r, "N"));
      worst = std::min(worst, table->number(r, "log10_margin"));
      unresolved += table->text(r, "method") == "factored_floor";
    }
  }
  ok = ok && worst >= 0.0 && max_n <= 257.0 && unresolved == 0;
  return {ok, std::to_string(cells) + " cells, N <= " + fmt("%.0f", max_n) + ", min log10 margin " +
                  fmt("%.1f", worst) + ", unresolved " + std::to_string(unresolved) + ", " +
                  fmt("%.1f", seconds_since(start)) + " s"};
}

Outcome good_bad_machinery() {
  const auto table = run_suites({"goodbad", "local"},
                                {{"command", "verify"}, {"seeds", 100}, {"b_list", {"4pi", "16pi"}}, {"p_list", {1, 2}}});
  double worst_bad = -INFINITY;
  double worst_good = INFINITY;
  std::size_t local_rows = 0;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const std::string name = table.text(r, "case");
    if (name == "bad_fraction") worst_bad = std::max(worst_bad, table.number(r, "measured") - table.number(r, "bound"));
    if (name == "good_fraction") worst_good = std::min(worst_good, table.number(r, "measured"));
    local_rows += name == "worst_good_interval";
  }
  const std::size_t bad = violations(table);
  return {bad == 0 && table.ok() && local_rows > 0,
          std::to_string(table.rows().size()) + " checks, " + std::to_string(bad) +
              " violations, max bad excess over limit " + fmt("%.3g", worst_bad) + ", min good fraction " +
              fmt("%.4f", worst_good)};
}

Outcome lemma3_shape() {
  const auto table = run_suites({"lemma3", "remez"}, {{"command", "verify"}, {"seeds", 20}});
  std::size_t slopes = 0;
  std::size_t remez = 0;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const std::string name = table.text(r, "case");
    slopes += name.rfind("slope", 0) == 0;
    remez += table.text(r, "suite") == "remez";
  }
  const std::size_t bad = violations(table);
  return {bad == 0 && table.ok() && slopes > 0 && remez > 0,
          std::to_string(slopes) + " slope cells, " + std::to_string(remez) + " Remez checks, " +
              std::to_string(bad) + " violations"};
}

Outcome extremal_example() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> bs{40.0 * kPi, 80.0 * kPi, 160.0 * kPi};
  const std::vector<double> gammas{0.1, 0.2, 0.4};
  const Exponent p(2.0);
  const auto fit = exponent_fit(bs, gammas, p);
  std::size_t below = 0;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    for (std::size_t j = 0; j < gammas.size(); ++j) below += theorem1_bound(gammas[j], bs[i], p).below(fit.ratios[i][j]);
  }
  const double target = 1.0 / (4.0 * kPi);
  const double slope = fit.slope_vs_b.slope;
  const double elapsed = seconds_since(start);
  const bool ok = below == bs.size() * gammas.size() && slope >= target / 4.0 && slope <= 4.0 * target &&
                  fit.slope_vs_b.r_squared >= 0.98 && elapsed <= 300.0;
  return {ok, "theorem <= ratio in " + std::to_string(below) + "/9 cells, slope-of-slopes " + fmt("%.4f", slope) +
                  " vs 1/(4pi) = " + fmt("%.4f", target) + ", R^2 " + fmt("%.5f", fit.slope_vs_b.r_squared) + ", " +
                  fmt("%.2f", elapsed) + " s"};
}

Outcome remark1_regimes() {
  const auto table = run_doc({{"command", "verify"}, {"suite", "remark1"}, {"seeds", 20}});
  std::size_t small = 0;
  std::size_t full = 0;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    small += table.text(r, "case") == "small_ab";
    full += table.text(r, "case") == "near_full";
  }
  const std::size_t bad = violations(table);
  return {bad == 0 && table.ok() && small > 0 && full > 0,
          std::to_string(small) + " small-ab checks, " + std::to_string(full) + " near-full checks, " +
              std::to_string(bad) + " violations"};
}

Outcome determinism() {
  const json doc{{"command", "verify"}, {"suite", "all"}, {"seeds", 3}};
  auto once = ExperimentConfig::from_json(doc);
  once.jobs = jobs();
  const std::string first = emit_csv(run(once));
  auto twice = ExperimentConfig::from_json(doc);
  twice.jobs = 1;
  const std::string second = emit_csv(run(twice));
  return {first == second, std::to_string(first.size()) + " bytes, identical: " + (first == second ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Theorem 1 dominance", theorem1_dominance},
      {"concentration oracle exactness", concentration_exactness},
      {"sharpness sandwich", sharpness_sandwich},
      {"good/bad machinery", good_bad_machinery},
      {"exponential-sum and Remez shape", lemma3_shape},
      {"extremal example", extremal_example},
      {"Remark 1 regimes", remark1_regimes},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    failed += !outcome.pass;
    std::printf("%s  criterion %zu (%s): %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
